#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "ccsa/correlated.hpp"
#include "ccsa/errors.hpp"
#include "ccsa/relaxations.hpp"
#include "ccsa/rng.hpp"
#include "ccsa/signed_graph.hpp"

namespace ccsa {

enum class Algo { KWIK, LP_KWIK, CMSY, SA_CORRELATED };

inline const char* algo_name(Algo a) {
    switch (a) {
        case Algo::KWIK: return "kwik";
        case Algo::LP_KWIK: return "lpkwik";
        case Algo::CMSY: return "cmsy";
        default: return "sa";
    }
}

struct RoundingPolicy {
    Algo variant = Algo::SA_CORRELATED;
    double delta = 0.1; // short/long threshold
    int rounds = 0;     // SA rounds, used by SA_CORRELATED

    void validate() const {
        if (!(delta > 0.0 && delta < 0.5))
            throw invalid_argument("RoundingPolicy: delta must lie in (0, 0.5)");
    }
};

enum class EdgeClass { Short, Medium, Long };

inline EdgeClass classify_edge(double x, double delta = 0.1) {
    if (x <= delta) return EdgeClass::Short;
    if (x >= 1.0 - delta) return EdgeClass::Long;
    return EdgeClass::Medium;
}

/// Either an independent join probability or the marker that the edge takes
/// part in the correlated rounding of the pivot's medium +neighbourhood.
struct JoinProbability {
    bool correlated = false;
    double probability = 0.0;
};

/// CMSY rounding function for +edges: 0 below 0.19, 1 above 0.5095, a
/// quadratic ramp in between; f^-(x) = x.
inline double cmsy_f_plus(double x) {
    if (x < 0.19) return 0.0;
    if (x >= 0.5095) return 1.0;
    const double t = (x - 0.19) / (0.5095 - 0.19);
    return t * t;
}

inline JoinProbability join_probability(const RoundingPolicy& policy, Sign sign, double x) {
    policy.validate();
    if (x < -1e-9 || x > 1.0 + 1e-9)
        throw invalid_argument("join_probability: distance outside [0,1]");
    x = std::min(std::max(x, 0.0), 1.0);
    switch (policy.variant) {
        case Algo::KWIK:
            return {false, sign == Sign::PLUS ? 1.0 : 0.0};
        case Algo::LP_KWIK:
            return {false, 1.0 - x};
        case Algo::CMSY:
            return {false, sign == Sign::PLUS ? 1.0 - cmsy_f_plus(x) : 1.0 - x};
        case Algo::SA_CORRELATED:
        default: {
            if (sign == Sign::MINUS) return {false, 1.0 - std::sqrt(x)};
            switch (classify_edge(x, policy.delta)) {
                case EdgeClass::Short: return {false, 1.0 - x * x / policy.delta};
                case EdgeClass::Long: return {false, 1.0 - x};
                default: return {true, 1.0 - x}; // marginal; joint handled by the law
            }
        }
    }
}

/// Medium +neighbourhood of the pivot within the active set.
inline std::vector<int> medium_plus_neighbourhood(const SignedGraph& g, const SAValuation& y,
                                                  const std::vector<int>& active, int pivot,
                                                  double delta) {
    std::vector<int> I;
    for (int v : active) {
        if (v == pivot || !g.is_plus(pivot, v)) continue;
        if (classify_edge(y.x(pivot, v), delta) == EdgeClass::Medium) I.push_back(v);
    }
    return I;
}

/**
 * @brief One rounding iteration: grows the pivot's cluster within `active`.
 *
 * -edges and short/long +edges join independently with their policy
 * probability; medium +edges are rounded together through the seeded
 * conditional law. The pivot is a parameter so callers (and tests) can
 * condition on it; uniform pivot sampling lives in cluster().
 */
inline std::vector<int> round_once(const SignedGraph& g, const SAValuation* y,
                                   const std::vector<int>& active, int pivot,
                                   const RoundingPolicy& policy, Rng& rng) {
    policy.validate();
    if (!std::binary_search(active.begin(), active.end(), pivot))
        throw invalid_argument("round_once: pivot not in the current vertex set");
    if (policy.variant != Algo::KWIK && y == nullptr)
        throw invalid_argument("round_once: this policy needs a relaxation solution");
    std::vector<int> cluster{pivot};

    CorrelatedLaw law;
    std::size_t alpha = 0;
    if (policy.variant == Algo::SA_CORRELATED) {
        if (policy.rounds < 3)
            throw invalid_argument("round_once: SA_CORRELATED needs rounds >= 3");
        std::vector<int> I = medium_plus_neighbourhood(g, *y, active, pivot, policy.delta);
        SeedSelection sel = select_seed(*y, pivot, I, policy.rounds);
        law = make_correlated_law(*y, pivot, I, sel.seed);
        if (!law.empty()) alpha = sample_alpha(law, rng);
    }

    for (int v : active) {
        if (v == pivot) continue;
        double p;
        if (policy.variant == Algo::SA_CORRELATED &&
            std::binary_search(law.group.begin(), law.group.end(), v)) {
            p = law.prob_given_alpha(v, alpha);
        } else {
            const double x = (policy.variant == Algo::KWIK) ? 0.0 : y->x(pivot, v);
            p = join_probability(policy, g.sign(pivot, v), x).probability;
        }
        if (rng.bernoulli(p)) cluster.push_back(v);
    }
    std::sort(cluster.begin(), cluster.end());
    return cluster;
}

/// Full pivot scheme: uniformly random pivots, one fixed fractional solution
/// across iterations, until every vertex is clustered.
inline Clustering cluster(const SignedGraph& g, const SAValuation* y, const RoundingPolicy& policy,
                          Rng& rng) {
    std::vector<int> active(g.n());
    for (int i = 0; i < g.n(); ++i) active[i] = i;
    std::vector<int> assignment(g.n(), -1);
    int next_id = 0;
    while (!active.empty()) {
        const int pivot = active[rng.uniform_below(active.size())];
        std::vector<int> S = round_once(g, y, active, pivot, policy, rng);
        for (int v : S) assignment[v] = next_id;
        ++next_id;
        std::vector<int> rest;
        rest.reserve(active.size() - S.size());
        std::set_difference(active.begin(), active.end(), S.begin(), S.end(),
                            std::back_inserter(rest));
        active.swap(rest);
    }
    return Clustering(std::move(assignment));
}

} // namespace ccsa
