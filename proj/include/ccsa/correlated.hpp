#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ccsa/errors.hpp"
#include "ccsa/relaxations.hpp"
#include "ccsa/rng.hpp"

namespace ccsa {

/**
 * @brief Joint distribution of join-with-pivot indicators.
 *
 * For a pivot p and vertices S = {v_1 < v_2 < ...}, entry `prob[mask]` is the
 * probability that exactly the vertices with mask bit i set share p's cluster,
 * read off the local distribution on S + {p}: an atom contributes to the mask
 * described by the intersection of p's block with S.
 */
struct JoinIndicatorDistribution {
    int pivot = -1;
    std::vector<int> vars;    // sorted
    std::vector<double> prob; // size 2^|vars|

    double pr_one(int var) const {
        const int bit = index_of(var);
        double s = 0;
        for (std::size_t m = 0; m < prob.size(); ++m)
            if (m >> bit & 1) s += prob[m];
        return s;
    }

    int index_of(int var) const {
        auto it = std::lower_bound(vars.begin(), vars.end(), var);
        if (it == vars.end() || *it != var)
            throw invalid_argument("JoinIndicatorDistribution: unknown vertex");
        return static_cast<int>(it - vars.begin());
    }

    /// Marginal onto a subset of the variables (indices into vars).
    std::vector<double> marginal(const std::vector<int>& bit_positions) const {
        std::vector<double> out(std::size_t{1} << bit_positions.size(), 0.0);
        for (std::size_t m = 0; m < prob.size(); ++m) {
            std::size_t sub = 0;
            for (std::size_t i = 0; i < bit_positions.size(); ++i)
                if (m >> bit_positions[i] & 1) sub |= std::size_t{1} << i;
            out[sub] += prob[m];
        }
        return out;
    }
};

inline JoinIndicatorDistribution join_indicator_distribution(const SAValuation& y, int pivot,
                                                             std::vector<int> S) {
    std::sort(S.begin(), S.end());
    if (static_cast<int>(S.size()) + 1 > y.rounds())
        throw invalid_argument("join_indicator_distribution: level budget exceeded");
    std::vector<int> ground = S;
    ground.push_back(pivot);
    LocalDistribution local = extract_local(y, ground);
    JoinIndicatorDistribution d;
    d.pivot = pivot;
    d.vars = S;
    d.prob.assign(std::size_t{1} << S.size(), 0.0);
    for (std::size_t i = 0; i < local.atoms.size(); ++i) {
        std::size_t mask = 0;
        for (std::size_t b = 0; b < S.size(); ++b)
            if (local.atoms[i].same_block(pivot, S[b])) mask |= std::size_t{1} << b;
        d.prob[mask] += std::max(local.prob[i], 0.0);
    }
    return d;
}

/// Entropy of a single bit with Pr[1] = p, in nats; 0 log 0 := 0.
inline double entropy(double p) {
    auto term = [](double q) { return q > 0 ? -q * std::log(q) : 0.0; };
    return term(p) + term(1.0 - p);
}

/// Mutual information of two bits from their joint (p00, p01, p10, p11), nats.
inline double mutual_information(const std::vector<double>& joint) {
    if (joint.size() != 4) throw invalid_argument("mutual_information: need a 2-bit joint");
    const double total = joint[0] + joint[1] + joint[2] + joint[3];
    if (total <= 0) return 0.0;
    double px1 = (joint[1] + joint[3]) / total; // bit 0 set
    double py1 = (joint[2] + joint[3]) / total; // bit 1 set
    double mi = 0.0;
    for (int m = 0; m < 4; ++m) {
        const double pxy = joint[m] / total;
        if (pxy <= 0) continue;
        const double px = (m & 1) ? px1 : 1 - px1;
        const double py = (m & 2) ? py1 : 1 - py1;
        mi += pxy * std::log(pxy / (px * py));
    }
    return std::max(mi, 0.0);
}

/// I(X_u ; X_v | X_T) for join indicators under pivot p, in nats.
/// Requires |T| + 3 <= r. Pairs meeting T contribute zero: conditioning on a
/// seed member fixes its bit.
inline double conditional_mutual_information(const SAValuation& y, int p, int u, int v,
                                             const std::vector<int>& T) {
    if (u == v || std::find(T.begin(), T.end(), u) != T.end() ||
        std::find(T.begin(), T.end(), v) != T.end())
        return 0.0;
    if (static_cast<int>(T.size()) + 3 > y.rounds())
        throw invalid_argument("conditional_mutual_information: level budget exceeded");
    std::vector<int> S = T;
    S.push_back(u);
    S.push_back(v);
    JoinIndicatorDistribution d = join_indicator_distribution(y, p, S);
    const int bu = d.index_of(u), bv = d.index_of(v);
    std::vector<int> tbits;
    for (int t : T) tbits.push_back(d.index_of(t));
    const std::size_t nta = std::size_t{1} << T.size();
    std::vector<std::vector<double>> joint(nta, std::vector<double>(4, 0.0));
    std::vector<double> pa(nta, 0.0);
    for (std::size_t m = 0; m < d.prob.size(); ++m) {
        std::size_t a = 0;
        for (std::size_t i = 0; i < tbits.size(); ++i)
            if (m >> tbits[i] & 1) a |= std::size_t{1} << i;
        const int uv = ((m >> bu & 1) ? 1 : 0) | ((m >> bv & 1) ? 2 : 0);
        joint[a][uv] += d.prob[m];
        pa[a] += d.prob[m];
    }
    double mi = 0.0;
    for (std::size_t a = 0; a < nta; ++a)
        if (pa[a] > 0) mi += pa[a] * mutual_information(joint[a]);
    return std::max(mi, 0.0);
}

/**
 * @brief Averaged conditional mutual information over the group W.
 *
 * Uniform measure over ordered pairs (u, v) in W^2, matching the seed
 * existence bound; the diagonal contributes zero (a vertex is exactly
 * correlated with itself and its pair marginal carries no rounding error).
 */
inline double averaged_conditional_mi(const SAValuation& y, int p, const std::vector<int>& W,
                                      const std::vector<int>& T) {
    if (W.size() <= 1) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < W.size(); ++i)
        for (std::size_t j = i + 1; j < W.size(); ++j)
            s += 2.0 * conditional_mutual_information(y, p, W[i], W[j], T);
    return s / (static_cast<double>(W.size()) * static_cast<double>(W.size()));
}

struct SeedSelection {
    int pivot = -1;
    std::vector<int> seed;      // subset of I_p, |seed| <= r - 3
    double achieved_mi = 0.0;   // averaged conditional MI of the chosen seed
    bool met_bound = true;      // achieved_mi <= 1/(r-2) + 1e-9
    long long candidates_tried = 0;

    double pair_error_bound() const { return std::sqrt(2.0 * std::max(achieved_mi, 0.0)); }
};

/**
 * @brief Searches for a seed T within I_p whose averaged conditional MI meets
 * the 1/(r-2) existence bound.
 *
 * Seeds are tried by ascending size t = 0..r-3; for each t all C(|I_p|, t)
 * subsets are enumerated lexicographically when there are at most 10^4 of
 * them, otherwise 10^4 subsets are sampled from a stream seeded by (p, t) so
 * the search stays deterministic. The first subset meeting the bound wins.
 * Exhaustive search always succeeds; sampled search reports the best value
 * found and flags `met_bound` when the bound was not certified.
 */
inline SeedSelection select_seed(const SAValuation& y, int p, const std::vector<int>& I_p, int r) {
    if (r < 3) throw invalid_argument("select_seed: needs r >= 3");
    SeedSelection best;
    best.pivot = p;
    best.achieved_mi = averaged_conditional_mi(y, p, I_p, {});
    best.seed = {};
    best.candidates_tried = 1;
    const double bound = 1.0 / (r - 2) + 1e-9;
    if (best.achieved_mi <= bound || I_p.size() <= 1) {
        best.met_bound = best.achieved_mi <= bound;
        return best;
    }
    // a tuple is evaluable when the pair MI fits the level budget, or trivially
    // zero because at most one group member remains outside the seed
    const int tmax =
        std::min(std::min(r - 3, y.rounds() - 2), static_cast<int>(I_p.size()));
    const long long cap = 10000;
    for (int t = 1; t <= tmax; ++t) {
        const bool evaluable =
            t + 3 <= y.rounds() || static_cast<int>(I_p.size()) - t <= 1;
        if (!evaluable) break;
        bool found = false;
        auto consider = [&](const std::vector<int>& tuple) {
            if (found) return;
            ++best.candidates_tried;
            double v = averaged_conditional_mi(y, p, I_p, tuple);
            if (v < best.achieved_mi) {
                best.achieved_mi = v;
                best.seed = tuple;
            }
            if (v <= bound) found = true;
        };
        if (binomial(static_cast<int>(I_p.size()), t) <= static_cast<std::uint64_t>(cap)) {
            std::vector<int> idx(t);
            for_each_subset(static_cast<int>(I_p.size()), t, [&](const std::vector<int>& c) {
                if (found) return;
                std::vector<int> tuple(t);
                for (int i = 0; i < t; ++i) tuple[i] = I_p[c[i]];
                consider(tuple);
            });
        } else {
            Rng rng(0x5eedULL * 1315423911ULL + static_cast<std::uint64_t>(p) * 2654435761ULL +
                    static_cast<std::uint64_t>(t));
            for (long long s = 0; s < cap && !found; ++s) {
                std::vector<int> tuple;
                while (static_cast<int>(tuple.size()) < t) {
                    int cand = I_p[rng.uniform_below(I_p.size())];
                    if (std::find(tuple.begin(), tuple.end(), cand) == tuple.end())
                        tuple.push_back(cand);
                }
                std::sort(tuple.begin(), tuple.end());
                consider(tuple);
            }
        }
        if (found) break;
    }
    best.met_bound = best.achieved_mi <= bound;
    return best;
}

/**
 * @brief Conditional rounding law for the medium +neighbours of a pivot.
 *
 * The seed assignment alpha is drawn from the joint on T; every other member
 * v of I_p then joins independently with the conditional probability read off
 * the joint on T + {v}. Marginals are exact by the law of total probability
 * (within each local distribution); pair errors are controlled by the seed's
 * averaged conditional MI.
 */
struct CorrelatedLaw {
    int pivot = -1;
    std::vector<int> group;              // I_p, sorted
    std::vector<int> seed;               // T, sorted subset of group
    std::vector<double> alpha_prob;      // 2^|T| from the joint on T
    std::vector<int> free_members;       // group minus seed
    std::vector<std::vector<double>> conditional; // [free index][alpha] in [0,1]

    bool empty() const { return group.empty(); }

    /// Pr[v joins | alpha]; v must belong to the group.
    double prob_given_alpha(int v, std::size_t alpha) const {
        auto it = std::lower_bound(seed.begin(), seed.end(), v);
        if (it != seed.end() && *it == v)
            return (alpha >> (it - seed.begin())) & 1 ? 1.0 : 0.0;
        auto fit = std::lower_bound(free_members.begin(), free_members.end(), v);
        if (fit == free_members.end() || *fit != v)
            throw invalid_argument("CorrelatedLaw: vertex outside the group");
        return conditional[fit - free_members.begin()][alpha];
    }
};

inline CorrelatedLaw make_correlated_law(const SAValuation& y, int p, std::vector<int> I_p,
                                         std::vector<int> T) {
    std::sort(I_p.begin(), I_p.end());
    std::sort(T.begin(), T.end());
    CorrelatedLaw law;
    law.pivot = p;
    law.group = I_p;
    law.seed = T;
    if (I_p.empty()) {
        law.alpha_prob = {1.0};
        return law;
    }
    JoinIndicatorDistribution dT = join_indicator_distribution(y, p, T);
    law.alpha_prob = dT.prob;
    for (int v : I_p)
        if (!std::binary_search(T.begin(), T.end(), v)) law.free_members.push_back(v);
    const std::size_t nta = law.alpha_prob.size();
    for (int v : law.free_members) {
        std::vector<int> S = T;
        S.push_back(v);
        JoinIndicatorDistribution dv = join_indicator_distribution(y, p, S);
        const int bv = dv.index_of(v);
        std::vector<int> tbits;
        for (int t : T) tbits.push_back(dv.index_of(t));
        std::vector<double> with(nta, 0.0), marg(nta, 0.0);
        for (std::size_t m = 0; m < dv.prob.size(); ++m) {
            std::size_t a = 0;
            for (std::size_t i = 0; i < tbits.size(); ++i)
                if (m >> tbits[i] & 1) a |= std::size_t{1} << i;
            marg[a] += dv.prob[m];
            if (m >> bv & 1) with[a] += dv.prob[m];
        }
        std::vector<double> cond(nta, 0.0);
        for (std::size_t a = 0; a < nta; ++a) {
            if (marg[a] <= 0.0) {
                cond[a] = 0.0;
                continue;
            }
            double c = with[a] / marg[a];
            if (c < -1e-6 || c > 1.0 + 1e-6)
                throw numeric_error("sample_correlated: inconsistent conditional for vertex " +
                                    std::to_string(v) + " (" + std::to_string(c) + ")");
            cond[a] = std::min(std::max(c, 0.0), 1.0);
        }
        law.conditional.push_back(std::move(cond));
    }
    return law;
}

/// Draws the seed assignment from its joint; zero-probability assignments are
/// never produced.
inline std::size_t sample_alpha(const CorrelatedLaw& law, Rng& rng) {
    double u = rng.uniform01();
    double total = 0.0;
    for (double pr : law.alpha_prob) total += pr;
    if (total <= 0) throw numeric_error("sample_correlated: seed distribution has no mass");
    u *= total;
    double acc = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t a = 0; a < law.alpha_prob.size(); ++a) {
        if (law.alpha_prob[a] <= 0) continue;
        last_positive = a;
        acc += law.alpha_prob[a];
        if (u < acc) return a;
    }
    return last_positive;
}

/// Samples S' subset of I_p: seed assignment alpha (given or drawn), then each
/// remaining member independently from its conditional. Pr[v in S'] = y_pv.
inline std::vector<int> sample_correlated(const SAValuation& y, int p, const std::vector<int>& I_p,
                                          const std::vector<int>& T, std::size_t alpha, Rng& rng) {
    CorrelatedLaw law = make_correlated_law(y, p, I_p, T);
    std::vector<int> out;
    for (int v : law.group)
        if (rng.bernoulli(law.prob_given_alpha(v, alpha))) out.push_back(v);
    return out;
}

inline std::vector<int> sample_correlated(const SAValuation& y, int p, const std::vector<int>& I_p,
                                          const std::vector<int>& T, Rng& rng) {
    CorrelatedLaw law = make_correlated_law(y, p, I_p, T);
    const std::size_t alpha = sample_alpha(law, rng);
    std::vector<int> out;
    for (int v : law.group)
        if (rng.bernoulli(law.prob_given_alpha(v, alpha))) out.push_back(v);
    return out;
}

/// Per-pivot diagnostic for reporting.
struct PivotDiagnostic {
    int pivot = -1;
    int group_size = 0;
    std::vector<int> seed;
    double achieved_mi = 0.0;
    bool met_bound = true;
    double pair_error_bound = 0.0;
};

} // namespace ccsa
