#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "ccsa/correlated.hpp"
#include "ccsa/errors.hpp"
#include "ccsa/relaxations.hpp"
#include "ccsa/rounding.hpp"
#include "ccsa/signed_graph.hpp"

namespace ccsa {

/// LP contribution of a pair: its distance for a +edge, 1 - distance for a -edge.
inline double lp_contribution(const SignedGraph& g, const SAValuation& y, int u, int v) {
    return g.is_plus(u, v) ? y.x(u, v) : y.y(u, v);
}

/// Total LP value of the valuation restricted to `active`.
inline double lp_mass(const SignedGraph& g, const SAValuation& y, const std::vector<int>& active) {
    double s = 0.0;
    for (std::size_t i = 0; i < active.size(); ++i)
        for (std::size_t j = i + 1; j < active.size(); ++j)
            s += lp_contribution(g, y, active[i], active[j]);
    return s;
}

struct PivotEdgeExpectation {
    int u = 0, v = 0;
    double cost = 0.0; // probability the edge is violated this iteration
    double lp = 0.0;   // LP contribution times removal probability
};

struct PivotExpectation {
    int pivot = -1;
    std::vector<PivotEdgeExpectation> edges; // all pairs of the active set
    double total_cost = 0.0;
    double total_lp = 0.0;

    /// cost/lp with the 0/0 := 0 convention; +inf when lp vanishes but cost does not.
    double ratio() const {
        if (total_lp > 1e-12) return total_cost / total_lp;
        return total_cost <= 1e-9 ? 0.0 : std::numeric_limits<double>::infinity();
    }
};

/**
 * @brief Rounding law of one iteration for a fixed pivot: per-vertex join
 * probabilities plus the conditional law of the medium +group.
 */
struct PivotLaw {
    int pivot = -1;
    std::vector<int> active; // sorted, contains pivot
    std::vector<int> others; // active minus pivot
    std::vector<double> base_prob; // aligned with others; group members: marginal
    std::vector<char> in_group;    // aligned with others
    CorrelatedLaw law;
    SeedSelection seed;

    std::size_t alpha_count() const { return law.alpha_prob.empty() ? 1 : law.alpha_prob.size(); }

    double alpha_weight(std::size_t a) const {
        return law.alpha_prob.empty() ? 1.0 : law.alpha_prob[a];
    }

    /// Join probabilities of all non-pivot vertices conditioned on alpha.
    std::vector<double> probs_given_alpha(std::size_t a) const {
        std::vector<double> p = base_prob;
        for (std::size_t i = 0; i < others.size(); ++i)
            if (in_group[i]) p[i] = law.prob_given_alpha(others[i], a);
        return p;
    }
};

inline PivotLaw make_pivot_law(const SignedGraph& g, const SAValuation& y,
                               const std::vector<int>& active, int pivot,
                               const RoundingPolicy& policy) {
    policy.validate();
    if (!std::binary_search(active.begin(), active.end(), pivot))
        throw invalid_argument("pivot_expectation: pivot not in the current vertex set");
    PivotLaw pl;
    pl.pivot = pivot;
    pl.active = active;
    std::vector<int> group;
    if (policy.variant == Algo::SA_CORRELATED) {
        if (policy.rounds < 3)
            throw invalid_argument("pivot_expectation: SA_CORRELATED needs rounds >= 3");
        group = medium_plus_neighbourhood(g, y, active, pivot, policy.delta);
        pl.seed = select_seed(y, pivot, group, policy.rounds);
        pl.law = make_correlated_law(y, pivot, group, pl.seed.seed);
    }
    for (int v : active) {
        if (v == pivot) continue;
        pl.others.push_back(v);
        const bool medium = std::binary_search(group.begin(), group.end(), v);
        pl.in_group.push_back(medium);
        const double x = (policy.variant == Algo::KWIK) ? 0.0 : y.x(pivot, v);
        pl.base_prob.push_back(medium ? y.y(pivot, v)
                                      : join_probability(policy, g.sign(pivot, v), x).probability);
    }
    return pl;
}

/**
 * @brief Exact expected (cost, lp) per edge for fixed join probabilities.
 *
 * Given the per-vertex probabilities, joins are independent, so a non-pivot
 * +edge is violated with p_u(1-p_v) + p_v(1-p_u), a -edge with p_u p_v, and an
 * edge disappears with 1 - (1-p_u)(1-p_v); pivot-incident edges always
 * disappear and are violated by the single complementary event.
 */
inline PivotExpectation expectation_from_probs(const SignedGraph& g, const SAValuation& y,
                                               const PivotLaw& pl, const std::vector<double>& probs,
                                               double weight, PivotExpectation acc) {
    const int pivot = pl.pivot;
    if (acc.edges.empty()) {
        acc.pivot = pivot;
        for (std::size_t i = 0; i < pl.others.size(); ++i)
            acc.edges.push_back(
                {std::min(pivot, pl.others[i]), std::max(pivot, pl.others[i]), 0.0, 0.0});
        for (std::size_t i = 0; i < pl.others.size(); ++i)
            for (std::size_t j = i + 1; j < pl.others.size(); ++j)
                acc.edges.push_back({pl.others[i], pl.others[j], 0.0, 0.0});
    }
    std::size_t e = 0;
    for (std::size_t i = 0; i < pl.others.size(); ++i, ++e) {
        const int u = pl.others[i];
        const double pu = probs[i];
        const double violated = g.is_plus(pivot, u) ? 1.0 - pu : pu;
        acc.edges[e].cost += weight * violated;
        acc.edges[e].lp += weight * lp_contribution(g, y, pivot, u);
    }
    for (std::size_t i = 0; i < pl.others.size(); ++i)
        for (std::size_t j = i + 1; j < pl.others.size(); ++j, ++e) {
            const int u = pl.others[i], v = pl.others[j];
            const double pu = probs[i], pv = probs[j];
            const double both = pu * pv;
            const double violated = g.is_plus(u, v) ? pu + pv - 2.0 * both : both;
            const double removed = pu + pv - both;
            acc.edges[e].cost += weight * violated;
            acc.edges[e].lp += weight * lp_contribution(g, y, u, v) * removed;
        }
    return acc;
}

inline PivotExpectation finish_expectation(PivotExpectation pe) {
    pe.total_cost = 0.0;
    pe.total_lp = 0.0;
    for (const auto& ed : pe.edges) {
        pe.total_cost += ed.cost;
        pe.total_lp += ed.lp;
    }
    return pe;
}

/// Expectation conditioned on one seed assignment.
inline PivotExpectation pivot_expectation(const SignedGraph& g, const SAValuation& y,
                                          const PivotLaw& pl, std::size_t alpha) {
    return finish_expectation(
        expectation_from_probs(g, y, pl, pl.probs_given_alpha(alpha), 1.0, {}));
}

/// Expectation marginalized over the seed assignment.
inline PivotExpectation pivot_expectation(const SignedGraph& g, const SAValuation& y,
                                          const PivotLaw& pl) {
    PivotExpectation acc;
    for (std::size_t a = 0; a < pl.alpha_count(); ++a) {
        const double w = pl.alpha_weight(a);
        if (w <= 0) continue;
        acc = expectation_from_probs(g, y, pl, pl.probs_given_alpha(a), w, std::move(acc));
    }
    return finish_expectation(std::move(acc));
}

inline PivotExpectation pivot_expectation(const SignedGraph& g, const SAValuation& y,
                                          const std::vector<int>& active, int pivot,
                                          const RoundingPolicy& policy) {
    return pivot_expectation(g, y, make_pivot_law(g, y, active, pivot, policy));
}

struct BestPivot {
    int pivot = -1;
    double ratio = 0.0;
    bool lp_fallback = false; // every pivot had zero LP removal; picked min cost
    PivotExpectation expectation;
    PivotLaw law;
};

/// Pivot minimizing expected cost / expected LP removed. Ties break toward
/// the smaller vertex id. If every pivot removes zero LP mass (round-off
/// corner), falls back to minimizing expected cost.
inline BestPivot best_pivot(const SignedGraph& g, const SAValuation& y,
                            const std::vector<int>& active, const RoundingPolicy& policy) {
    if (active.empty()) throw invalid_argument("best_pivot: empty vertex set");
    BestPivot best;
    bool any_finite = false;
    for (int p : active) {
        PivotLaw pl = make_pivot_law(g, y, active, p, policy);
        PivotExpectation pe = pivot_expectation(g, y, pl);
        const double r = pe.ratio();
        const bool better =
            best.pivot < 0 || r < best.ratio ||
            (!any_finite && std::isinf(r) && pe.total_cost < best.expectation.total_cost);
        if (std::isfinite(r)) any_finite = true;
        if (better) {
            best.pivot = p;
            best.ratio = r;
            best.expectation = std::move(pe);
            best.law = std::move(pl);
        }
    }
    best.lp_fallback = !any_finite;
    return best;
}

struct CertificateIteration {
    int pivot = -1;
    std::vector<int> seed;
    std::vector<int> seed_assignment; // bits aligned with seed
    std::vector<int> cluster;
    double expected_ratio = 0.0; // pivot-stage ratio preserved by conditioning
    double alpha_cost = 0.0;     // realized violations resolved this iteration
    double beta_lp = 0.0;        // realized LP mass removed this iteration
    // per-pivot correlated-rounding diagnostic
    int group_size = 0;          // |I_p| within the remaining vertices
    double seed_mi = 0.0;        // achieved averaged conditional MI
    bool seed_met_bound = true;  // 1/(r-2) existence bound certified
};

struct RoundingCertificate {
    int n = 0;
    double lp_value = 0.0;
    long long total_cost = 0;
    std::vector<CertificateIteration> iterations;

    /// max_t alpha_t / beta_t with 0/0 := 0.
    double max_ratio() const {
        double m = 0.0;
        for (const auto& it : iterations) {
            if (it.beta_lp > 1e-12) m = std::max(m, it.alpha_cost / it.beta_lp);
            else if (it.alpha_cost > 1e-9) return std::numeric_limits<double>::infinity();
        }
        return m;
    }

    double bound() const { return max_ratio() * lp_value; }

    bool sound(double tol = 1e-6) const {
        return static_cast<double>(total_cost) <= bound() + tol;
    }
};

/**
 * @brief Deterministic rounding by the method of conditional expectations.
 *
 * Each iteration picks the pivot with the best expected cost-to-LP-removal
 * ratio, then fixes the seed assignment and every remaining join bit greedily
 * so the conditional pair never exceeds that ratio (with the theoretical
 * target unavailable at desk scale, the current conditional ratio is the
 * preserved quantity; see README). The certificate records, per iteration,
 * the realized cost alpha_t and LP mass removed beta_t, so the output cost is
 * bounded by max_t(alpha_t/beta_t) times the initial LP value.
 */
inline std::pair<Clustering, RoundingCertificate> derandomized_cluster(const SignedGraph& g,
                                                                       const SAValuation& y,
                                                                       const RoundingPolicy& policy) {
    policy.validate();
    std::vector<int> active(g.n());
    for (int i = 0; i < g.n(); ++i) active[i] = i;

    RoundingCertificate cert;
    cert.n = g.n();
    cert.lp_value = lp_mass(g, y, active);
    std::vector<int> assignment(g.n(), -1);
    int next_id = 0;

    while (!active.empty()) {
        BestPivot bp = best_pivot(g, y, active, policy);
        const PivotLaw& pl = bp.law;
        const double ratio = bp.ratio;
        const bool guided = std::isfinite(ratio);
        // score used for branch choices: preserve cost <= ratio * lp, or plain
        // cost when the iteration has no LP mass to remove
        auto score = [&](const PivotExpectation& pe) {
            return guided ? pe.total_cost - ratio * pe.total_lp : pe.total_cost;
        };
        const double slack =
            guided ? 1e-9 * (1.0 + std::abs(bp.expectation.total_cost) +
                             std::abs(ratio) * std::abs(bp.expectation.total_lp))
                   : 0.0;

        // 1. seed assignment: a positive-probability branch preserving the ratio
        std::size_t chosen_alpha = 0;
        if (pl.alpha_count() > 1) {
            double best_score = std::numeric_limits<double>::infinity();
            for (std::size_t a = 0; a < pl.alpha_count(); ++a) {
                if (pl.alpha_weight(a) <= 0) continue;
                const double s = score(pivot_expectation(g, y, pl, a));
                if (s < best_score - 1e-15) {
                    best_score = s;
                    chosen_alpha = a;
                }
            }
            if (guided && best_score > slack)
                throw numeric_error("derandomized_cluster: no seed assignment preserves the ratio");
        }

        // 2. fix join bits one vertex at a time, in ascending id order
        std::vector<double> probs = pl.probs_given_alpha(chosen_alpha);
        for (std::size_t i = 0; i < pl.others.size(); ++i) {
            if (probs[i] <= 0.0 || probs[i] >= 1.0) {
                probs[i] = probs[i] >= 1.0 ? 1.0 : 0.0;
                continue;
            }
            std::vector<double> with = probs, without = probs;
            with[i] = 1.0;
            without[i] = 0.0;
            const double s1 =
                score(finish_expectation(expectation_from_probs(g, y, pl, with, 1.0, {})));
            const double s0 =
                score(finish_expectation(expectation_from_probs(g, y, pl, without, 1.0, {})));
            probs = (s1 < s0) ? std::move(with) : std::move(without);
            if (guided && std::min(s0, s1) > slack)
                throw numeric_error("derandomized_cluster: conditioning lost the ratio");
        }

        // 3. realize the cluster and account for it
        CertificateIteration rec;
        rec.pivot = pl.pivot;
        rec.seed = pl.seed.seed;
        rec.group_size = static_cast<int>(pl.law.group.size());
        rec.seed_mi = pl.seed.achieved_mi;
        rec.seed_met_bound = pl.seed.met_bound;
        for (int svert : rec.seed)
            rec.seed_assignment.push_back(
                static_cast<int>(pl.law.prob_given_alpha(svert, chosen_alpha)));
        rec.expected_ratio = ratio;
        rec.cluster.push_back(pl.pivot);
        for (std::size_t i = 0; i < pl.others.size(); ++i)
            if (probs[i] >= 1.0) rec.cluster.push_back(pl.others[i]);
        std::sort(rec.cluster.begin(), rec.cluster.end());
        PivotExpectation realized =
            finish_expectation(expectation_from_probs(g, y, pl, probs, 1.0, {}));
        rec.alpha_cost = realized.total_cost;
        rec.beta_lp = realized.total_lp;
        cert.iterations.push_back(rec);

        for (int v : rec.cluster) assignment[v] = next_id;
        ++next_id;
        std::vector<int> rest;
        std::set_difference(active.begin(), active.end(), rec.cluster.begin(), rec.cluster.end(),
                            std::back_inserter(rest));
        active.swap(rest);
    }

    Clustering out(std::move(assignment));
    cert.total_cost = clustering_cost(g, out);
    double alpha_sum = 0.0;
    for (const auto& it : cert.iterations) alpha_sum += it.alpha_cost;
    if (std::abs(alpha_sum - static_cast<double>(cert.total_cost)) > 1e-6)
        throw numeric_error("derandomized_cluster: certificate cost does not match the output");
    if (!cert.sound())
        throw numeric_error("derandomized_cluster: certificate soundness check failed");
    return {std::move(out), std::move(cert)};
}

} // namespace ccsa
