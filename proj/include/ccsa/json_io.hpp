#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "ccsa/analysis.hpp"
#include "ccsa/correlated.hpp"
#include "ccsa/derandomize.hpp"
#include "ccsa/errors.hpp"
#include "ccsa/relaxations.hpp"
#include "ccsa/signed_graph.hpp"

namespace ccsa {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// SAValuation <-> JSON: {"r": int, "entries": [{"blocks": [[ints]], "value": v}]}
// ---------------------------------------------------------------------------

inline json valuation_to_json(const SAValuation& y) {
    json out;
    out["r"] = y.rounds();
    out["n"] = y.n();
    json entries = json::array();
    // deterministic order: by ground-set size, then ground set, then partition
    std::vector<PartitionKey> keys;
    keys.reserve(y.raw().size());
    for (const auto& [k, v] : y.raw()) keys.push_back(k);
    std::sort(keys.begin(), keys.end(), [](const PartitionKey& a, const PartitionKey& b) {
        if (a.ground_size() != b.ground_size()) return a.ground_size() < b.ground_size();
        auto ga = a.ground_set(), gb = b.ground_set();
        if (ga != gb) return ga < gb;
        return a < b;
    });
    for (const auto& k : keys) {
        if (k.is_empty()) continue;
        json e;
        e["blocks"] = k.blocks();
        e["value"] = y.value(k);
        entries.push_back(std::move(e));
    }
    out["entries"] = std::move(entries);
    return out;
}

inline SAValuation valuation_from_json(const json& j) {
    const int r = j.at("r").get<int>();
    SAValuation::Map vals;
    int max_vertex = -1;
    for (const auto& e : j.at("entries")) {
        PartitionKey k(e.at("blocks").get<std::vector<std::vector<int>>>());
        for (const auto& b : k.blocks())
            for (int v : b) max_vertex = std::max(max_vertex, v);
        vals[k] = e.at("value").get<double>();
    }
    // "n" is an optional convenience; the entries determine it
    const int n = j.contains("n") ? j.at("n").get<int>() : max_vertex + 1;
    return SAValuation(n, r, std::move(vals));
}

// ---------------------------------------------------------------------------
// Per-pivot correlated-rounding diagnostic.
// ---------------------------------------------------------------------------

inline json diagnostic_to_json(const SeedSelection& sel, int group_size) {
    json out;
    out["pivot"] = sel.pivot;
    out["group_size"] = group_size;
    out["seed"] = sel.seed;
    out["achieved_mi"] = sel.achieved_mi;
    out["met_bound"] = sel.met_bound;
    out["pair_error_bound"] = sel.pair_error_bound();
    return out;
}

// ---------------------------------------------------------------------------
// Rounding certificate. The export embeds the pair distances so the check can
// be replayed from the instance file and the certificate alone.
// ---------------------------------------------------------------------------

inline json certificate_to_json(const RoundingCertificate& cert, const SignedGraph& g,
                                const SAValuation& y) {
    json out;
    out["n"] = cert.n;
    out["lp_value"] = cert.lp_value;
    json xs = json::array();
    for (int u = 0; u < g.n(); ++u)
        for (int v = u + 1; v < g.n(); ++v) xs.push_back(json::array({u, v, y.x(u, v)}));
    out["x"] = std::move(xs);
    json its = json::array();
    for (const auto& it : cert.iterations) {
        json ji;
        ji["pivot"] = it.pivot;
        ji["seed"] = it.seed;
        ji["seed_assignment"] = it.seed_assignment;
        ji["cluster"] = it.cluster;
        ji["expected_ratio"] = it.expected_ratio;
        ji["alpha"] = it.alpha_cost;
        ji["beta"] = it.beta_lp;
        ji["diagnostic"] = {{"group_size", it.group_size},
                            {"achieved_mi", it.seed_mi},
                            {"met_bound", it.seed_met_bound},
                            {"pair_error_bound", std::sqrt(2.0 * std::max(it.seed_mi, 0.0))}};
        its.push_back(std::move(ji));
    }
    out["iterations"] = std::move(its);
    out["total_cost"] = cert.total_cost;
    out["max_ratio"] = cert.max_ratio();
    out["bound"] = cert.bound();
    return out;
}

struct CertificateCheck {
    bool ok = true;
    std::string message = "certificate verified";
};

/**
 * @brief Replays a certificate against its instance.
 *
 * Recomputes per-iteration violations and LP mass removed from the embedded
 * distances, compares them with the recorded alpha/beta, rebuilds the output
 * clustering, and checks the soundness inequality
 * total cost <= max_t(alpha_t / beta_t) * lp_value + 1e-6.
 */
inline CertificateCheck verify_certificate(const SignedGraph& g, const json& j) {
    auto fail = [](std::string m) { return CertificateCheck{false, std::move(m)}; };
    const int n = j.at("n").get<int>();
    if (n != g.n()) return fail("vertex count mismatch");
    std::vector<double> x(g.num_pairs(), -1.0);
    for (const auto& e : j.at("x")) {
        const int u = e.at(0).get<int>(), v = e.at(1).get<int>();
        x[g.pair_index(u, v)] = e.at(2).get<double>();
    }
    for (double d : x)
        if (d < 0) return fail("distance table incomplete");
    auto lpval = [&](int u, int v) {
        const double d = x[g.pair_index(u, v)];
        return g.is_plus(u, v) ? d : 1.0 - d;
    };

    double lp_total = 0.0;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) lp_total += lpval(u, v);
    const double lp_claimed = j.at("lp_value").get<double>();
    if (std::abs(lp_total - lp_claimed) > 1e-6 * (1.0 + lp_total))
        return fail("lp_value does not match the distance table");

    std::vector<char> remaining(n, 1);
    std::vector<int> cluster_of(n, -1);
    double alpha_sum = 0.0;
    double max_ratio = 0.0;
    int cluster_id = 0;
    for (const auto& ji : j.at("iterations")) {
        const auto cluster = ji.at("cluster").get<std::vector<int>>();
        if (cluster.empty()) return fail("empty cluster in iteration");
        const int pivot = ji.at("pivot").get<int>();
        if (std::find(cluster.begin(), cluster.end(), pivot) == cluster.end())
            return fail("pivot outside its cluster");
        for (int v : cluster) {
            if (v < 0 || v >= n || !remaining[v]) return fail("cluster reuses a removed vertex");
        }
        double alpha = 0.0, beta = 0.0;
        std::vector<char> in_cluster(n, 0);
        for (int v : cluster) in_cluster[v] = 1;
        for (int u = 0; u < n; ++u) {
            if (!remaining[u]) continue;
            for (int v = u + 1; v < n; ++v) {
                if (!remaining[v]) continue;
                const bool cu = in_cluster[u], cv = in_cluster[v];
                if (!cu && !cv) continue;
                beta += lpval(u, v);
                const bool violated = g.is_plus(u, v) ? (cu != cv) : (cu && cv);
                if (violated) alpha += 1.0;
            }
        }
        if (std::abs(alpha - ji.at("alpha").get<double>()) > 1e-6)
            return fail("recorded alpha does not match the replay");
        if (std::abs(beta - ji.at("beta").get<double>()) > 1e-6 * (1.0 + beta))
            return fail("recorded beta does not match the replay");
        alpha_sum += alpha;
        if (beta > 1e-12) max_ratio = std::max(max_ratio, alpha / beta);
        else if (alpha > 1e-9) max_ratio = std::numeric_limits<double>::infinity();
        for (int v : cluster) {
            remaining[v] = 0;
            cluster_of[v] = cluster_id;
        }
        ++cluster_id;
    }
    for (int v = 0; v < n; ++v)
        if (remaining[v]) return fail("iterations do not cover every vertex");

    const long long total = j.at("total_cost").get<long long>();
    Clustering out(cluster_of);
    if (clustering_cost(g, out) != total) return fail("total_cost does not match the clustering");
    if (std::abs(alpha_sum - static_cast<double>(total)) > 1e-6)
        return fail("sum of alphas does not match total_cost");
    if (static_cast<double>(total) > max_ratio * lp_total + 1e-6)
        return fail("soundness inequality violated");
    return {};
}

// ---------------------------------------------------------------------------
// Sweep reports.
// ---------------------------------------------------------------------------

inline json triangle_profile_to_json(const TriangleProfile& t) {
    json out;
    std::string s;
    for (Sign sg : t.signs) s += (sg == Sign::PLUS ? '+' : '-');
    out["signs"] = s;
    out["atoms"] = {{"p", t.p}, {"x", t.x}, {"y", t.y}, {"z", t.z}, {"q", t.q}};
    out["distances"] = {{"ab", t.d_ab()}, {"ac", t.d_ac()}, {"bc", t.d_bc()}};
    return out;
}

inline json sweep_row_to_json(const SweepRow& row) {
    json out;
    out["type"] = sweep_row_name(row.kind);
    out["scheme"] = row.scheme == RoundingScheme::Ideal ? "ideal" : "special";
    out["samples"] = row.samples_used;
    out["max_ratio"] = row.max_ratio;
    out["bound"] = row.bound;
    out["pass"] = row.pass;
    if (row.argmax) out["argmax"] = triangle_profile_to_json(*row.argmax);
    if (row.argmax_degenerate)
        out["argmax"] = {{"sign", row.argmax_degenerate->sign == Sign::PLUS ? "+" : "-"},
                         {"x", row.argmax_degenerate->x}};
    return out;
}

inline json claim_report_to_json(const ClaimReport& rep) {
    json out;
    out["tested"] = rep.tested;
    out["violations"] = rep.violations;
    out["pass"] = rep.pass;
    if (!rep.detail.empty()) out["detail"] = rep.detail;
    return out;
}

} // namespace ccsa
