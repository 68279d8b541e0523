#include <catch2/catch_amalgamated.hpp>

#include "ccsa/analysis.hpp"
#include "ccsa/json_io.hpp"
#include "ccsa/relaxations.hpp"
#include "ccsa/signed_graph.hpp"

using namespace ccsa;

TEST_CASE("standard LP on the gap family") {
    // LP value of the k-star is k/2
    for (int k : {2, 4, 10}) {
        SignedGraph g = make_star_gap(k);
        auto full = lp::solve(build_standard_lp(g));
        REQUIRE(full.status == lp::LPStatus::Optimal);
        REQUIRE(full.objective == Catch::Approx(k / 2.0).margin(1e-6));
        auto cuts = solve_standard_lp(g);
        REQUIRE(cuts.value == Catch::Approx(k / 2.0).margin(1e-6));
    }
    SignedGraph k4 = random_instance(4, 1.0, 0);
    REQUIRE(lp::solve(build_standard_lp(k4)).objective == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("standard LP model shape") {
    SignedGraph g = random_instance(6, 0.5, 1);
    auto m = build_standard_lp(g);
    REQUIRE(m.num_vars() == 15);
    REQUIRE(m.num_rows() == 3 * 20);
}

TEST_CASE("cut-generation solver matches the full model on random instances") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        SignedGraph g = random_instance(7, 0.5, seed);
        auto full = lp::solve(build_standard_lp(g));
        auto cuts = solve_standard_lp(g);
        REQUIRE(cuts.value == Catch::Approx(full.objective).margin(1e-6));
        // distances form a metric within tolerance
        for (int i = 0; i < 7; ++i)
            for (int j = i + 1; j < 7; ++j)
                for (int k = j + 1; k < 7; ++k) {
                    auto x = [&](int a, int b) { return cuts.x[g.pair_index(a, b)]; };
                    REQUIRE(x(i, j) <= x(i, k) + x(j, k) + 1e-6);
                }
    }
}

TEST_CASE("SA budget guards") {
    SignedGraph g = random_instance(8, 0.5, 3);
    REQUIRE_THROWS_AS(build_sa(g, 1), invalid_argument);
    REQUIRE_THROWS_AS(build_sa(g, 9), invalid_argument);
    SAOptions tight;
    tight.variable_budget = 10;
    try {
        build_sa(g, 3, tight);
        FAIL("expected resource_limit_error");
    } catch (const resource_limit_error& e) {
        REQUIRE(std::string(e.what()).find("budget") != std::string::npos);
    }
    SAOptions low_rounds;
    low_rounds.max_rounds = 2;
    REQUIRE_THROWS_AS(solve_sa(g, 3, low_rounds), resource_limit_error);
}

TEST_CASE("SA matches the standard LP at r=2 and on easy instances") {
    SignedGraph g = make_star_gap(4);
    auto sa2 = solve_sa(g, 2);
    REQUIRE(sa2.value == Catch::Approx(2.0).margin(1e-6));

    SignedGraph mm = random_instance(3, 0.0, 0); // all-minus K3
    for (int r = 2; r <= 3; ++r) REQUIRE(solve_sa(mm, r).value == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("full and reduced SA formulations agree") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        SignedGraph g = random_instance(5, 0.5, seed);
        for (int r : {2, 3, 4}) {
            auto direct = lp::solve(build_sa(g, r).first);
            REQUIRE(direct.status == lp::LPStatus::Optimal);
            auto reduced = solve_sa(g, r);
            REQUIRE(reduced.value == Catch::Approx(direct.objective).margin(1e-6));
        }
    }
}

TEST_CASE("full hierarchy is exact") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const int n = 4 + static_cast<int>(seed % 3);
        SignedGraph g = random_instance(n, 0.5, seed + 17);
        auto [opt_clustering, opt] = brute_force_opt(g);
        auto sa = solve_sa(g, n);
        REQUIRE(sa.value == Catch::Approx(static_cast<double>(opt)).margin(1e-6));
    }
}

TEST_CASE("hierarchy monotonicity and LP domination") {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        SignedGraph g = random_instance(6, 0.5, 100 + seed);
        const double lpv = solve_standard_lp(g).value;
        double prev = 0.0;
        for (int r : {2, 3, 4}) {
            auto sa = solve_sa(g, r);
            REQUIRE(sa.value >= prev - 1e-7);
            REQUIRE(sa.value >= lpv - 1e-7);
            prev = sa.value;
        }
        auto [c, opt] = brute_force_opt(g);
        REQUIRE(prev <= static_cast<double>(opt) + 1e-6);
    }
}

TEST_CASE("integral clusterings are feasible for the generated SA model") {
    SignedGraph g = random_instance(5, 0.4, 9);
    auto [model, index] = build_sa(g, 3);
    Clustering c = Clustering::from_clusters(5, {{0, 2}, {1, 3, 4}});
    SAValuation y = SAValuation::from_clustering(g, c, 3);
    // plug the 0/1 valuation into every generated row; residuals must vanish
    std::vector<double> vals(model.num_vars());
    for (int j = 0; j < model.num_vars(); ++j) {
        const PartitionKey& k = index.keys[j];
        vals[j] = k.is_empty() ? 1.0 : y.value(k);
    }
    for (const auto& row : model.rows) {
        double lhs = 0;
        for (auto [j, a] : row.coeffs) lhs += a * vals[j];
        if (row.rel == lp::Relation::Eq) REQUIRE(lhs == Catch::Approx(row.rhs).margin(1e-12));
        else if (row.rel == lp::Relation::LessEq) REQUIRE(lhs <= row.rhs + 1e-12);
        else REQUIRE(lhs >= row.rhs - 1e-12);
    }
    // objective of the induced valuation equals the clustering cost
    double obj = model.objective_offset;
    for (int j = 0; j < model.num_vars(); ++j) obj += model.objective[j] * vals[j];
    REQUIRE(obj == Catch::Approx(static_cast<double>(clustering_cost(g, c))));
}

TEST_CASE("valuation invariants and local distributions") {
    SignedGraph g = make_star_gap(4);
    auto sa = solve_sa(g, 3);
    const SAValuation& y = sa.valuation;
    REQUIRE(y.value(PartitionKey::empty()) == 1.0);
    for (int u = 0; u < 5; ++u)
        for (int v = u + 1; v < 5; ++v) {
            REQUIRE(y.y(u, v) + y.value(PartitionKey::pair_apart(u, v)) ==
                    Catch::Approx(1.0).margin(1e-6));
            REQUIRE(y.x(u, v) >= 0.0);
            REQUIRE(y.x(u, v) <= 1.0);
        }

    SECTION("pair extraction") {
        auto d = extract_local(y, {0, 1});
        REQUIRE(d.atoms.size() == 2);
        REQUIRE(d.total() == Catch::Approx(1.0).margin(1e-6));
    }
    SECTION("triple extraction and marginal consistency") {
        auto d3 = extract_local(y, {0, 1, 2});
        REQUIRE(d3.atoms.size() == 5);
        REQUIRE(d3.total() == Catch::Approx(1.0).margin(1e-6));
        auto m = d3.marginal_onto({0, 1});
        auto d2 = extract_local(y, {0, 1});
        for (std::size_t i = 0; i < d2.atoms.size(); ++i)
            REQUIRE(m.prob[i] == Catch::Approx(d2.prob[i]).margin(1e-6));
    }
    SECTION("level guard") { REQUIRE_THROWS_AS(extract_local(y, {0, 1, 2, 3}), invalid_argument); }
}

TEST_CASE("edge classification totals") {
    SignedGraph g = random_instance(8, 0.5, 21);
    auto sa = solve_sa(g, 3);
    int counts[3] = {0, 0, 0};
    for (int u = 0; u < 8; ++u)
        for (int v = u + 1; v < 8; ++v)
            ++counts[static_cast<int>(classify_edge(sa.valuation.x(u, v), 0.1))];
    REQUIRE(counts[0] + counts[1] + counts[2] == g.num_pairs());
}

TEST_CASE("valuation JSON round trip") {
    SignedGraph g = make_star_gap(3);
    auto sa = solve_sa(g, 3);
    json j = valuation_to_json(sa.valuation);
    REQUIRE(j["r"] == 3);
    SAValuation back = valuation_from_json(j);
    REQUIRE(back.rounds() == 3);
    for (const auto& [k, v] : sa.valuation.raw())
        if (!k.is_empty()) REQUIRE(back.value(k) == Catch::Approx(sa.valuation.value(k)).margin(1e-12));
    // export is deterministic
    REQUIRE(valuation_to_json(sa.valuation).dump() == j.dump());
}

TEST_CASE("mixture valuations marginalize exactly") {
    // a synthetic valuation from two clusterings with weights .6/.4
    Clustering a = Clustering::from_clusters(4, {{0, 1}, {2, 3}});
    Clustering b = Clustering::from_clusters(4, {{0, 1, 2, 3}});
    SAValuation y = SAValuation::from_mixture(4, 3, {{0.6, a}, {0.4, b}});
    REQUIRE(y.y(0, 1) == Catch::Approx(1.0));
    REQUIRE(y.y(0, 2) == Catch::Approx(0.4));
    auto d = extract_local(y, {0, 1, 2});
    REQUIRE(d.total() == Catch::Approx(1.0));
    REQUIRE(d.marginal_onto({0, 2}).prob[0] == Catch::Approx(0.4)); // {02} together
}
