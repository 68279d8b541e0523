#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ccsa/analysis.hpp"
#include "ccsa/relaxations.hpp"
#include "ccsa/rng.hpp"

using namespace ccsa;

namespace {
TriangleProfile profile(std::array<Sign, 3> signs, double p, double x, double y, double z,
                        double q) {
    TriangleProfile t;
    t.signs = signs;
    t.p = p;
    t.x = x;
    t.y = y;
    t.z = z;
    t.q = q;
    return t;
}
constexpr std::array<Sign, 3> PPP{Sign::PLUS, Sign::PLUS, Sign::PLUS};
constexpr std::array<Sign, 3> PPM{Sign::PLUS, Sign::PLUS, Sign::MINUS};
constexpr std::array<Sign, 3> PMM{Sign::PLUS, Sign::MINUS, Sign::MINUS};
constexpr std::array<Sign, 3> MMM{Sign::MINUS, Sign::MINUS, Sign::MINUS};
} // namespace

TEST_CASE("analysis constants match their printed digits") {
    AnalysisConstants c;
    REQUIRE(c.zeta_l() == Catch::Approx(0.347222).margin(5e-7));
    REQUIRE(c.zeta_u() == Catch::Approx(0.861111).margin(5e-7));
    // printed forms: lower bound 0.3472 floors zeta_l, upper bound 0.8612
    // ceils zeta_u, tau rounds to 0.0055
    REQUIRE(std::floor(c.zeta_l() * 1e4) / 1e4 == Catch::Approx(0.3472));
    REQUIRE(std::ceil(c.zeta_u() * 1e4) / 1e4 == Catch::Approx(0.8612));
    REQUIRE(0.8612 >= c.zeta_u());
    REQUIRE(c.zeta_u() >= c.zeta_l());
    REQUIRE(c.zeta_l() >= 0.3472);
    REQUIRE(c.tau() == Catch::Approx(0.0055).margin(5e-5));
    REQUIRE(c.medium_lp_floor() == Catch::Approx(0.02));
    // the resulting guarantee dips below 2 - tau/zeta_u <= 1.994
    REQUIRE(2.0 - c.tau() / 0.8612 <= 1.994);
}

TEST_CASE("ideal closed forms on symmetric profiles") {
    // p = q = 0, x = y = z = 1/3: ratio exactly 1.5 for +++
    auto t = profile(PPP, 0, 1.0 / 3, 1.0 / 3, 1.0 / 3, 0);
    auto cl = triangle_cost_lp(t, RoundingScheme::Ideal);
    REQUIRE(cl.ratio() == Catch::Approx(1.5).margin(1e-12));
    // the bound 3/(2+p+q) from the closed form
    REQUIRE(cl.ratio() <= 3.0 / (2.0 + t.p + t.q) + 1e-12);
}

TEST_CASE("ideal ++- boundary profile reaches ratio two") {
    // distances (1/2, 1/2, 1): x = y = 1/2, everything else zero
    auto t = profile(PPM, 0, 0.5, 0.5, 0, 0);
    REQUIRE(t.d_ab() == Catch::Approx(0.5));
    REQUIRE(t.d_bc() == Catch::Approx(1.0));
    auto cl = triangle_cost_lp(t, RoundingScheme::Ideal);
    REQUIRE(cl.ratio() == Catch::Approx(2.0).margin(1e-12));
    REQUIRE(is_bad_triangle(t, AnalysisConstants{}));
}

TEST_CASE("ideal forms match hand-computed values") {
    // --- at all-zero distances: cost = 3, lp = 3
    auto mmm = profile(MMM, 1, 0, 0, 0, 0);
    auto cl = triangle_cost_lp(mmm, RoundingScheme::Ideal);
    REQUIRE(cl.cost == Catch::Approx(3.0));
    REQUIRE(cl.lp == Catch::Approx(3.0));
    // degenerate edges
    auto dplus = degenerate_cost_lp({Sign::PLUS, 0.4}, RoundingScheme::Ideal);
    REQUIRE(dplus.cost == Catch::Approx(0.8));
    REQUIRE(dplus.lp == Catch::Approx(0.8));
    auto dminus = degenerate_cost_lp({Sign::MINUS, 0.49}, RoundingScheme::Ideal);
    REQUIRE(dminus.cost == Catch::Approx(2.0 * (1.0 - 0.7)));
    REQUIRE(dminus.lp == Catch::Approx(2.0 * 0.51));
    REQUIRE(dminus.ratio() <= 1.0);
}

TEST_CASE("special scheme agrees with ideal on all-medium profiles") {
    Rng rng(3);
    for (int t = 0; t < 200; ++t) {
        auto a = rng.simplex_point(5);
        auto prof = profile(PPP, a[0], a[1], a[2], a[3], a[4]);
        if (classify_edge(prof.d_ab()) != EdgeClass::Medium ||
            classify_edge(prof.d_ac()) != EdgeClass::Medium ||
            classify_edge(prof.d_bc()) != EdgeClass::Medium)
            continue;
        auto i = triangle_cost_lp(prof, RoundingScheme::Ideal);
        auto s = triangle_cost_lp(prof, RoundingScheme::Special);
        REQUIRE(i.cost == Catch::Approx(s.cost).margin(1e-12));
        REQUIRE(i.lp == Catch::Approx(s.lp).margin(1e-12));
    }
}

TEST_CASE("ideal closed forms agree with partition-sampling simulation") {
    // oracle: draw the partition atom for +edges (perfect correlation), flip
    // independent sqrt-coins for -edges, per pivot
    Rng rng(2025);
    const int trials = 100000;
    for (int rep = 0; rep < 50; ++rep) {
        auto a = rng.simplex_point(5);
        std::array<Sign, 3> signs = rep % 4 == 0   ? PPP
                                    : rep % 4 == 1 ? PPM
                                    : rep % 4 == 2 ? PMM
                                                   : MMM;
        auto t = profile(signs, a[0], a[1], a[2], a[3], a[4]);
        auto want = triangle_cost_lp(t, RoundingScheme::Ideal);
        double cost_hat = 0, lp_hat = 0;
        Rng sim(rep * 977 + 5);
        for (int s = 0; s < trials; ++s) {
            for (int pivot = 0; pivot < 3; ++pivot) {
                const int u = pivot == 0 ? 1 : 0;
                const int v = pivot == 2 ? 1 : 2;
                // sample the atom of the local distribution
                const double roll = sim.uniform01();
                int atom;
                if (roll < t.p) atom = 0;        // abc
                else if (roll < t.p + t.x) atom = 1;  // ab|c
                else if (roll < t.p + t.x + t.y) atom = 2; // ac|b
                else if (roll < t.p + t.x + t.y + t.z) atom = 3; // bc|a
                else atom = 4;                   // a|b|c
                auto same = [&](int i, int j) {
                    if (atom == 0) return true;
                    if (atom == 1) return (i == 0 && j == 1) || (i == 1 && j == 0);
                    if (atom == 2) return (i == 0 && j == 2) || (i == 2 && j == 0);
                    if (atom == 3) return (i == 1 && j == 2) || (i == 2 && j == 1);
                    return false;
                };
                auto join = [&](int w) {
                    if (t.sign_between(pivot, w) == Sign::PLUS) return same(pivot, w);
                    return sim.bernoulli(1.0 - std::sqrt(t.dist_between(pivot, w)));
                };
                const bool ju = join(u), jv = join(v);
                const bool plus_uv = t.sign_between(u, v) == Sign::PLUS;
                if (plus_uv ? (ju != jv) : (ju && jv)) cost_hat += 1;
                if (ju || jv)
                    lp_hat += plus_uv ? t.dist_between(u, v) : t.y_between(u, v);
            }
        }
        cost_hat /= trials;
        lp_hat /= trials;
        // 4 sigma with sigma <= sqrt(3 * 1/4 / trials) per sum of 3 indicators
        const double tol = 4.0 * std::sqrt(3.0 * 0.25 / trials) + 2e-3;
        REQUIRE(std::abs(cost_hat - want.cost) <= tol);
        REQUIRE(std::abs(lp_hat - want.lp) <= 3.0 * tol);
    }
}

TEST_CASE("triangle classification") {
    AnalysisConstants c;
    SECTION("bad versus not bad") {
        auto bad = profile(PPM, 0, 0.5, 0.5, 0, 0);
        REQUIRE(classify_triangle(bad, c, 0).bad);
        REQUIRE_FALSE(classify_triangle(bad, c, 0).chargeable);
        // +distance outside the window
        auto notbad = profile(PPM, 0.2, 0.5, 0.3, 0, 0);
        REQUIRE(notbad.d_ab() == Catch::Approx(0.3));
        REQUIRE_FALSE(classify_triangle(notbad, c, 0).bad);
    }
    SECTION("chargeable requires the far pair to stay close") {
        // center edges at distance 1/2, far distance 0.6 <= 1/2 + 5 eta
        auto t = profile(PPM, 0.2, 0.3, 0.3, 0.2, 0.0);
        REQUIRE(t.d_ab() == Catch::Approx(0.5));
        REQUIRE(t.d_ac() == Catch::Approx(0.5));
        REQUIRE(t.d_bc() == Catch::Approx(0.6));
        auto cls = classify_triangle(t, c, 0);
        REQUIRE(cls.chargeable);
        REQUIRE_FALSE(cls.bad);
    }
    SECTION("mutual exclusivity on random profiles") {
        Rng rng(8);
        for (int i = 0; i < 20000; ++i) {
            auto a = rng.simplex_point(5);
            auto t = profile(PPM, a[0], a[1], a[2], a[3], a[4]);
            auto cls = classify_triangle(t, c, 0);
            REQUIRE_FALSE((cls.bad && cls.chargeable));
        }
    }
    SECTION("profiles always induce metric distances") {
        Rng rng(9);
        for (int i = 0; i < 20000; ++i) {
            auto a = rng.simplex_point(5);
            auto t = profile(PPP, a[0], a[1], a[2], a[3], a[4]);
            REQUIRE(t.d_ab() <= t.d_ac() + t.d_bc() + 1e-9);
            REQUIRE(t.d_ac() <= t.d_ab() + t.d_bc() + 1e-9);
            REQUIRE(t.d_bc() <= t.d_ab() + t.d_ac() + 1e-9);
        }
    }
}

TEST_CASE("sweep rows respect the bound tables") {
    AnalysisConstants c;
    SweepOptions opt;
    opt.samples = 20000; // the full 1e5 runs in the acceptance suite
    opt.grid = 12;
    opt.seed = 77;

    SECTION("ideal table") {
        opt.scheme = RoundingScheme::Ideal;
        struct Row {
            SweepRowKind kind;
            double bound;
        };
        for (auto [kind, bound] : {Row{SweepRowKind::PPP, 1.5}, Row{SweepRowKind::PMM, 1.5},
                                   Row{SweepRowKind::MMM, 1.0}, Row{SweepRowKind::PPM_BAD, 2.0},
                                   Row{SweepRowKind::PPM_NOT_BAD, 1.946},
                                   Row{SweepRowKind::DEGENERATE, 1.0}}) {
            auto row = sweep_ratio_bounds(kind, c, opt);
            INFO(sweep_row_name(kind) << " max " << row.max_ratio);
            REQUIRE(row.pass);
            REQUIRE(row.bound == Catch::Approx(bound));
            REQUIRE(row.max_ratio <= bound + 1e-9);
        }
    }
    SECTION("short/long table") {
        opt.scheme = RoundingScheme::Special;
        struct Row {
            SweepRowKind kind;
            double bound;
        };
        for (auto [kind, bound] : {Row{SweepRowKind::PPP, 1.9}, Row{SweepRowKind::PMM, 1.65},
                                   Row{SweepRowKind::MMM, 1.0}, Row{SweepRowKind::PPM_ALL, 2.0},
                                   Row{SweepRowKind::DEGENERATE, 1.0}}) {
            auto row = sweep_ratio_bounds(kind, c, opt);
            INFO(sweep_row_name(kind) << " max " << row.max_ratio);
            REQUIRE(row.pass);
            REQUIRE(row.bound == Catch::Approx(bound));
        }
    }
    SECTION("witnesses sit on the boundary grid") {
        opt.scheme = RoundingScheme::Ideal;
        auto ppp = sweep_ratio_bounds(SweepRowKind::PPP, c, opt);
        REQUIRE(ppp.max_ratio >= 1.5 - 0.02);
        auto mmm = sweep_ratio_bounds(SweepRowKind::MMM, c, opt);
        REQUIRE(mmm.max_ratio >= 1.0 - 0.02);
        auto bad = sweep_ratio_bounds(SweepRowKind::PPM_BAD, c, opt);
        REQUIRE(bad.max_ratio >= 2.0 - 0.02);
    }
}

TEST_CASE("printed spot values recomputed from the closed forms") {
    SECTION("++- curve at p = 1/12") {
        REQUIRE(ppm_limit_curve(0.0) == Catch::Approx(2.0));
        REQUIRE(ppm_limit_curve(1.0 / 12.0) == Catch::Approx(1.9399).margin(5e-5));
    }
    SECTION("+-- stationary point") {
        auto [x, v] = golden_section_max(pmm_boundary_curve, 0.0, 1.0);
        REQUIRE(x == Catch::Approx(0.64470).margin(1e-3));
        REQUIRE(v == Catch::Approx(1.1184).margin(1e-3));
        REQUIRE(v <= 1.1184 + 5e-5);
    }
    SECTION("++- w=0 maximum") {
        auto [p, v] = golden_section_max(ppm_w0_curve, 0.0, 1.0 - 1e-12);
        REQUIRE(p == Catch::Approx(0.71415).margin(1e-3));
        REQUIRE(v == Catch::Approx(1.7538).margin(1e-3));
    }
}

TEST_CASE("claim badbad holds on sampled feasible q-vectors") {
    Rng rng(4242);
    auto rep = check_claim_badbad(20000, rng);
    INFO(rep.detail);
    REQUIRE(rep.pass);
    REQUIRE(rep.tested >= 20000);
    REQUIRE(rep.violations == 0);
}

TEST_CASE("claim badbad equality case") {
    // x_pu = x_pv = x_pw = 1/2 and x_uv = x_vw = 1 force q_uw >= 1/2 exactly:
    // q_u + q_uw = q_w + q_uw = 1/2, q_v = 1/2, so q_0 = q_uw - 1/2 >= 0
    const double quw = 0.5, qv = 0.5;
    const double qu = 0.5 - quw, qw = 0.5 - quw, q0 = quw - 0.5;
    REQUIRE(qu + qw + q0 + qv + quw == Catch::Approx(1.0));
    REQUIRE(quw >= 0.5);
}

TEST_CASE("claim numbad on structured and random triangle-free graphs") {
    // stars: |E| = m, |F| = C(m,2), |V| = m+1
    for (int m : {1, 2, 5, 10}) {
        const long long E = m, V = m + 1, F = static_cast<long long>(m) * (m - 1) / 2;
        REQUIRE(E <= F + V);
    }
    // a single edge: 1 <= 0 + 2
    REQUIRE(1 <= 0 + 2);
    Rng rng(512);
    auto rep = check_claim_numbad(100, rng, 30);
    INFO(rep.detail);
    REQUIRE(rep.pass);
    REQUIRE(rep.tested == 100);
}

TEST_CASE("brute force optimum") {
    SignedGraph star = make_star_gap(4);
    auto [c, opt] = brute_force_opt(star);
    REQUIRE(opt == 3);
    REQUIRE(clustering_cost(star, c) == 3);

    SignedGraph mm = random_instance(6, 0.0, 0);
    auto [cm, om] = brute_force_opt(mm);
    REQUIRE(om == 0);
    REQUIRE(cm.num_clusters() == 6);

    // determinism: representative matches a rerun
    SignedGraph g = random_instance(7, 0.5, 3);
    auto [c1, o1] = brute_force_opt(g);
    auto [c2, o2] = brute_force_opt(g);
    REQUIRE(o1 == o2);
    REQUIRE(c1 == c2);

    // cross-check with the exact hierarchy at r = n (cap raised via options)
    SAOptions wide;
    wide.max_rounds = 7;
    auto sa = solve_sa(g, 7, wide);
    REQUIRE(sa.value == Catch::Approx(static_cast<double>(o1)).margin(1e-6));

    SignedGraph big = random_instance(13, 0.5, 0);
    REQUIRE_THROWS_AS(brute_force_opt(big), resource_limit_error);
}

TEST_CASE("exhaustive oracle agrees with brute force on tiny instances") {
    // independent oracle: enumerate all partitions via partitions_of
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        SignedGraph g = random_instance(6, 0.5, 400 + seed);
        long long best = 1 << 20;
        std::vector<int> verts{0, 1, 2, 3, 4, 5};
        for (const auto& part : partitions_of(verts)) {
            Clustering c = Clustering::from_clusters(6, part.blocks());
            best = std::min(best, clustering_cost(g, c));
        }
        auto [c, opt] = brute_force_opt(g);
        REQUIRE(opt == best);
    }
}
