#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ccsa/errors.hpp"
#include "ccsa/lp.hpp"
#include "ccsa/partitions.hpp"
#include "ccsa/signed_graph.hpp"
#include "ccsa/simplex.hpp"

namespace ccsa {

struct SAOptions {
    int max_rounds = 6;
    /// Cap on the total number of partition-key variables.
    std::uint64_t variable_budget = 200000;
    lp::SimplexOptions simplex;
};

// ---------------------------------------------------------------------------
// Standard LP relaxation: min sum_{+} x_uv + sum_{-} (1 - x_uv) subject to all
// triangle inequalities x_ij <= x_ik + x_jk and 0 <= x <= 1.
// ---------------------------------------------------------------------------

/// Full model: one variable per pair, 3 * C(n,3) triangle rows.
inline lp::LPModel build_standard_lp(const SignedGraph& g) {
    const int n = g.n();
    lp::LPModel m;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            if (g.is_plus(u, v)) {
                m.add_variable(1.0, 0.0, 1.0);
            } else {
                m.add_variable(-1.0, 0.0, 1.0);
                m.objective_offset += 1.0;
            }
        }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                int ij = g.pair_index(i, j), ik = g.pair_index(i, k), jk = g.pair_index(j, k);
                m.add_constraint({{ij, 1.0}, {ik, -1.0}, {jk, -1.0}}, lp::Relation::LessEq, 0.0);
                m.add_constraint({{ik, 1.0}, {ij, -1.0}, {jk, -1.0}}, lp::Relation::LessEq, 0.0);
                m.add_constraint({{jk, 1.0}, {ij, -1.0}, {ik, -1.0}}, lp::Relation::LessEq, 0.0);
            }
    return m;
}

struct StandardLPResult {
    double value = 0.0;
    std::vector<double> x; // pair-indexed distances, clamped to [0,1]
    long long iterations = 0;
    int cut_rounds = 0;
};

/// Solves the standard LP by triangle-cut generation: start from the box
/// relaxation and add violated triangle inequalities until none remain. Same
/// optimum as solving build_standard_lp directly, but scales past n ~ 20.
inline StandardLPResult solve_standard_lp(const SignedGraph& g, const lp::SimplexOptions& sopt = {}) {
    const int n = g.n();
    lp::LPModel m;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            if (g.is_plus(u, v)) {
                m.add_variable(1.0, 0.0, 1.0);
            } else {
                m.add_variable(-1.0, 0.0, 1.0);
                m.objective_offset += 1.0;
            }
        }
    StandardLPResult res;
    const double viol_tol = 1e-9;
    while (true) {
        lp::LPSolution sol = lp::solve(m, sopt);
        if (sol.status != lp::LPStatus::Optimal)
            throw solver_failure("standard LP: unexpected status during cut generation");
        res.iterations += sol.iterations;
        ++res.cut_rounds;
        auto xv = [&](int u, int v) { return sol.values[g.pair_index(u, v)]; };
        std::size_t added = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                for (int k = j + 1; k < n; ++k) {
                    int ij = g.pair_index(i, j), ik = g.pair_index(i, k), jk = g.pair_index(j, k);
                    if (xv(i, j) - xv(i, k) - xv(j, k) > viol_tol) {
                        m.add_constraint({{ij, 1.0}, {ik, -1.0}, {jk, -1.0}}, lp::Relation::LessEq, 0.0);
                        ++added;
                    }
                    if (xv(i, k) - xv(i, j) - xv(j, k) > viol_tol) {
                        m.add_constraint({{ik, 1.0}, {ij, -1.0}, {jk, -1.0}}, lp::Relation::LessEq, 0.0);
                        ++added;
                    }
                    if (xv(j, k) - xv(i, j) - xv(i, k) > viol_tol) {
                        m.add_constraint({{jk, 1.0}, {ij, -1.0}, {ik, -1.0}}, lp::Relation::LessEq, 0.0);
                        ++added;
                    }
                }
        if (added == 0) {
            res.value = sol.objective;
            res.x = sol.values;
            for (double& v : res.x) v = std::min(std::max(v, 0.0), 1.0);
            return res;
        }
    }
}

// ---------------------------------------------------------------------------
// Sherali-Adams relaxation.
// ---------------------------------------------------------------------------

struct SAModelIndex {
    std::vector<PartitionKey> keys; // column order
    std::unordered_map<PartitionKey, int, PartitionKeyHash> column;
};

inline void check_sa_budget(int n, int r, const SAOptions& opt) {
    if (r < 2) throw invalid_argument("build_sa: rounds must be at least 2");
    if (r > n) throw invalid_argument("build_sa: rounds cannot exceed the vertex count");
    if (r > opt.max_rounds)
        throw resource_limit_error("build_sa: rounds " + std::to_string(r) +
                                   " above the configured cap " + std::to_string(opt.max_rounds));
    std::uint64_t total = 1;
    for (int s = 1; s <= r; ++s) total += binomial(n, s) * bell_number(s);
    if (total > opt.variable_budget)
        throw resource_limit_error("build_sa: " + std::to_string(total) +
                                   " partition keys exceed the variable budget of " +
                                   std::to_string(opt.variable_budget) + " (n=" + std::to_string(n) +
                                   ", r=" + std::to_string(r) + ")");
}

/**
 * @brief Full r-round Sherali-Adams model.
 *
 * One variable per canonical partition key over every vertex subset of size
 * <= r (the empty key is fixed to 1 through its bounds). Consistency is
 * generated for single-element extensions only: marginalizing key K over T to
 * T + {v} for each v outside T; chaining gives the general constraint. The
 * standard triangle inequalities on pair distances are kept at every level so
 * the relaxation is at least as strong as the standard LP by construction
 * (they are implied for r >= 3).
 */
inline std::pair<lp::LPModel, SAModelIndex> build_sa(const SignedGraph& g, int r,
                                                     const SAOptions& opt = {}) {
    const int n = g.n();
    check_sa_budget(n, r, opt);

    SAModelIndex idx;
    lp::LPModel m;
    auto add_key = [&](const PartitionKey& k, double lo, double hi) {
        idx.column.emplace(k, m.add_variable(0.0, lo, hi));
        idx.keys.push_back(k);
    };
    add_key(PartitionKey::empty(), 1.0, 1.0);
    for (int s = 1; s <= r; ++s)
        for_each_subset(n, s, [&](const std::vector<int>& S) {
            for (auto& part : partitions_of(S)) add_key(part, 0.0, 1.0);
        });

    // objective
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            const int col = idx.column.at(PartitionKey::pair_together(u, v));
            if (g.is_plus(u, v)) {
                m.objective_offset += 1.0;
                m.objective[col] -= 1.0;
            } else {
                m.objective[col] += 1.0;
            }
        }

    // single-element extension consistency
    for (std::size_t ki = 0; ki < idx.keys.size(); ++ki) {
        const PartitionKey key = idx.keys[ki];
        const auto ground = key.ground_set();
        if (static_cast<int>(ground.size()) >= r) continue;
        for (int v = 0; v < n; ++v) {
            if (std::binary_search(ground.begin(), ground.end(), v)) continue;
            std::vector<std::pair<int, double>> row;
            row.emplace_back(idx.column.at(key), 1.0);
            const int nb = static_cast<int>(key.blocks().size());
            for (int b = 0; b <= nb; ++b)
                row.emplace_back(idx.column.at(key.extend(v, b)), -1.0);
            m.add_constraint(std::move(row), lp::Relation::Eq, 0.0);
        }
    }

    // triangle inequalities on pair variables: x_uv = 1 - y_uv
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                int ij = idx.column.at(PartitionKey::pair_together(i, j));
                int ik = idx.column.at(PartitionKey::pair_together(i, k));
                int jk = idx.column.at(PartitionKey::pair_together(j, k));
                m.add_constraint({{ij, -1.0}, {ik, 1.0}, {jk, 1.0}}, lp::Relation::LessEq, 1.0);
                m.add_constraint({{ik, -1.0}, {ij, 1.0}, {jk, 1.0}}, lp::Relation::LessEq, 1.0);
                m.add_constraint({{jk, -1.0}, {ij, 1.0}, {ik, 1.0}}, lp::Relation::LessEq, 1.0);
            }

    return {std::move(m), std::move(idx)};
}

/**
 * @brief Solved Sherali-Adams valuation: partition key -> probability mass.
 *
 * Holds every key of total size <= rounds. Values are clamped to [0,1] on
 * access; the empty key has value 1. Immutable after construction.
 */
class SAValuation {
public:
    using Map = std::unordered_map<PartitionKey, double, PartitionKeyHash>;

    SAValuation(int n, int rounds, Map values) : n_(n), rounds_(rounds), values_(std::move(values)) {
        values_[PartitionKey::empty()] = 1.0;
    }

    int n() const { return n_; }
    int rounds() const { return rounds_; }

    bool contains(const PartitionKey& k) const { return values_.count(k) > 0; }

    double value(const PartitionKey& k) const {
        auto it = values_.find(k);
        if (it == values_.end())
            throw invalid_argument("SAValuation: key " + k.to_string() + " outside level budget");
        return std::min(std::max(it->second, 0.0), 1.0);
    }

    /// Probability that u and v share a cluster.
    double y(int u, int v) const { return value(PartitionKey::pair_together(u, v)); }

    /// Distance x_uv = 1 - y_uv.
    double x(int u, int v) const { return 1.0 - y(u, v); }

    const Map& raw() const { return values_; }

    /// 0/1 valuation induced by an integral clustering; feasible by construction.
    static SAValuation from_clustering(const SignedGraph& g, const Clustering& c, int rounds) {
        return from_mixture(g.n(), rounds, {{1.0, c}});
    }

    /// Convex combination of integral clusterings (handy for synthetic tests).
    static SAValuation from_mixture(int n, int rounds,
                                    const std::vector<std::pair<double, Clustering>>& mix) {
        Map vals;
        for (int s = 1; s <= rounds; ++s)
            for_each_subset(n, s, [&](const std::vector<int>& S) {
                for (auto& part : partitions_of(S)) vals.emplace(part, 0.0);
            });
        for (const auto& [w, c] : mix) {
            for (auto& [key, val] : vals) {
                bool match = true;
                const auto& blocks = key.blocks();
                for (std::size_t b = 0; b < blocks.size() && match; ++b) {
                    for (std::size_t i = 0; i + 1 < blocks[b].size() && match; ++i)
                        match = c.same_cluster(blocks[b][i], blocks[b][i + 1]);
                    if (match && b + 1 < blocks.size())
                        for (std::size_t b2 = b + 1; b2 < blocks.size() && match; ++b2)
                            match = !c.same_cluster(blocks[b].front(), blocks[b2].front());
                }
                if (match) val += w;
            }
        }
        return SAValuation(n, rounds, std::move(vals));
    }

    /// r=2 valuation carrying standard-LP distances (for LP-based rounding).
    static SAValuation from_pair_distances(int n, const std::vector<double>& x,
                                           const SignedGraph& indexer) {
        Map vals;
        for (int v = 0; v < n; ++v) vals.emplace(PartitionKey::singleton(v), 1.0);
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v) {
                double d = std::min(std::max(x[indexer.pair_index(u, v)], 0.0), 1.0);
                vals.emplace(PartitionKey::pair_together(u, v), 1.0 - d);
                vals.emplace(PartitionKey::pair_apart(u, v), d);
            }
        return SAValuation(n, 2, std::move(vals));
    }

private:
    int n_;
    int rounds_;
    Map values_;
};

/// Probability vector over all set-partitions of a small vertex set.
struct LocalDistribution {
    std::vector<int> ground;          // sorted
    std::vector<PartitionKey> atoms;  // partitions_of(ground) order
    std::vector<double> prob;         // clamped nonnegative

    double total() const {
        double s = 0;
        for (double p : prob) s += p;
        return s;
    }

    double pr_same(int u, int v) const {
        double s = 0;
        for (std::size_t i = 0; i < atoms.size(); ++i)
            if (atoms[i].same_block(u, v)) s += prob[i];
        return s;
    }

    LocalDistribution marginal_onto(const std::vector<int>& T) const {
        LocalDistribution out;
        out.ground = T;
        std::sort(out.ground.begin(), out.ground.end());
        out.atoms = partitions_of(out.ground);
        out.prob.assign(out.atoms.size(), 0.0);
        std::map<PartitionKey, int> pos;
        for (std::size_t i = 0; i < out.atoms.size(); ++i) pos[out.atoms[i]] = static_cast<int>(i);
        for (std::size_t i = 0; i < atoms.size(); ++i)
            out.prob[pos.at(atoms[i].restrict_to(out.ground))] += prob[i];
        return out;
    }
};

/// Reads the local distribution on S out of the valuation. |S| must be within
/// the level budget. Sums to 1 within solver tolerance by LP feasibility.
inline LocalDistribution extract_local(const SAValuation& y, std::vector<int> S) {
    std::sort(S.begin(), S.end());
    if (static_cast<int>(S.size()) > y.rounds())
        throw invalid_argument("extract_local: |S| exceeds the relaxation level");
    LocalDistribution d;
    d.ground = std::move(S);
    d.atoms = partitions_of(d.ground);
    d.prob.reserve(d.atoms.size());
    for (const auto& a : d.atoms) d.prob.push_back(y.value(a));
    return d;
}

// ---------------------------------------------------------------------------
// Reduced SA solve: one local distribution per r-subset plus shared marginals
// on (r-1)-subsets. Facet consistency at the top level implies the whole
// single-extension family below it (marginalization commutes), so the optimum
// matches build_sa; the model is far smaller. Cross-checked in tests.
// ---------------------------------------------------------------------------

struct SASolveResult {
    double value = 0.0;
    SAValuation valuation;
    long long iterations = 0;
};

inline SASolveResult solve_sa(const SignedGraph& g, int r, const SAOptions& opt = {}) {
    const int n = g.n();
    check_sa_budget(n, r, opt);

    struct SubsetVars {
        std::vector<int> verts;
        std::vector<PartitionKey> atoms;
        int first_col = 0;
    };
    lp::LPModel m;
    std::vector<SubsetVars> lam, mu;
    std::map<std::vector<int>, int> lam_pos, mu_pos;

    for_each_subset(n, r, [&](const std::vector<int>& S) {
        SubsetVars sv;
        sv.verts = S;
        sv.atoms = partitions_of(S);
        sv.first_col = m.num_vars();
        for (std::size_t i = 0; i < sv.atoms.size(); ++i) m.add_variable(0.0, 0.0, 1.0);
        lam_pos[S] = static_cast<int>(lam.size());
        lam.push_back(std::move(sv));
    });
    const bool top_only = (r == n);
    if (!top_only) {
        for_each_subset(n, r - 1, [&](const std::vector<int>& T) {
            SubsetVars sv;
            sv.verts = T;
            sv.atoms = partitions_of(T);
            sv.first_col = m.num_vars();
            for (std::size_t i = 0; i < sv.atoms.size(); ++i) m.add_variable(0.0, 0.0, 1.0);
            mu_pos[T] = static_cast<int>(mu.size());
            mu.push_back(std::move(sv));
        });
        // facet consistency: marginal of every lambda onto each facet equals mu
        for (const auto& sv : lam) {
            for (int drop = 0; drop < r; ++drop) {
                std::vector<int> T;
                for (int i = 0; i < r; ++i)
                    if (i != drop) T.push_back(sv.verts[i]);
                const auto& mv = mu[mu_pos.at(T)];
                std::map<PartitionKey, int> apos;
                for (std::size_t qi = 0; qi < mv.atoms.size(); ++qi) apos[mv.atoms[qi]] = static_cast<int>(qi);
                std::vector<std::vector<std::pair<int, double>>> rows(mv.atoms.size());
                for (std::size_t pi = 0; pi < sv.atoms.size(); ++pi) {
                    int qi = apos.at(sv.atoms[pi].restrict_to(T));
                    rows[qi].emplace_back(sv.first_col + static_cast<int>(pi), 1.0);
                }
                for (std::size_t qi = 0; qi < rows.size(); ++qi) {
                    rows[qi].emplace_back(mv.first_col + static_cast<int>(qi), -1.0);
                    m.add_constraint(std::move(rows[qi]), lp::Relation::Eq, 0.0);
                }
            }
        }
        for (const auto& mv : mu) {
            std::vector<std::pair<int, double>> row;
            for (std::size_t qi = 0; qi < mv.atoms.size(); ++qi)
                row.emplace_back(mv.first_col + static_cast<int>(qi), 1.0);
            m.add_constraint(std::move(row), lp::Relation::Eq, 1.0);
        }
    } else {
        std::vector<std::pair<int, double>> row;
        for (std::size_t qi = 0; qi < lam[0].atoms.size(); ++qi)
            row.emplace_back(lam[0].first_col + static_cast<int>(qi), 1.0);
        m.add_constraint(std::move(row), lp::Relation::Eq, 1.0);
    }

    // canonical carrier of a pair marginal: the (r-1)-subset (or the r-subset
    // when r == n or r == 2) completed with the smallest other vertices
    auto carrier_terms = [&](int u, int v) {
        std::vector<int> T{u, v};
        const int want = (!top_only && r - 1 >= 2) ? r - 1 : r;
        for (int w = 0; w < n && static_cast<int>(T.size()) < want; ++w)
            if (w != u && w != v) T.push_back(w);
        std::sort(T.begin(), T.end());
        const SubsetVars& sv = (static_cast<int>(T.size()) == r) ? lam[lam_pos.at(T)] : mu[mu_pos.at(T)];
        std::vector<int> cols;
        for (std::size_t i = 0; i < sv.atoms.size(); ++i)
            if (sv.atoms[i].same_block(u, v)) cols.push_back(sv.first_col + static_cast<int>(i));
        return cols;
    };

    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            const double sgn = g.is_plus(u, v) ? -1.0 : 1.0;
            if (g.is_plus(u, v)) m.objective_offset += 1.0;
            for (int col : carrier_terms(u, v)) m.objective[col] += sgn;
        }

    if (r == 2) {
        // level 2 carries no implied metric; keep the base triangle inequalities
        auto xcol = [&](int u, int v) {
            std::vector<int> S{std::min(u, v), std::max(u, v)};
            const SubsetVars& sv = lam[lam_pos.at(S)];
            for (std::size_t i = 0; i < sv.atoms.size(); ++i)
                if (!sv.atoms[i].same_block(u, v)) return sv.first_col + static_cast<int>(i);
            throw numeric_error("solve_sa: missing split atom");
        };
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                for (int k = j + 1; k < n; ++k) {
                    int ij = xcol(i, j), ik = xcol(i, k), jk = xcol(j, k);
                    m.add_constraint({{ij, 1.0}, {ik, -1.0}, {jk, -1.0}}, lp::Relation::LessEq, 0.0);
                    m.add_constraint({{ik, 1.0}, {ij, -1.0}, {jk, -1.0}}, lp::Relation::LessEq, 0.0);
                    m.add_constraint({{jk, 1.0}, {ij, -1.0}, {ik, -1.0}}, lp::Relation::LessEq, 0.0);
                }
    }

    lp::LPSolution sol = lp::solve(m, opt.simplex);
    if (sol.status != lp::LPStatus::Optimal)
        throw solver_failure("solve_sa: relaxation not solved to optimality");

    // populate every key of size <= r by marginalizing the solved locals
    SAValuation::Map vals;
    for (const auto& sv : lam)
        for (std::size_t i = 0; i < sv.atoms.size(); ++i)
            vals[sv.atoms[i]] = sol.values[sv.first_col + static_cast<int>(i)];
    for (const auto& mv : mu)
        for (std::size_t i = 0; i < mv.atoms.size(); ++i)
            vals[mv.atoms[i]] = sol.values[mv.first_col + static_cast<int>(i)];
    const int carrier_size = top_only ? r : r - 1;
    for (int s = 1; s < carrier_size; ++s)
        for_each_subset(n, s, [&](const std::vector<int>& T) {
            std::vector<int> C = T;
            for (int w = 0; w < n && static_cast<int>(C.size()) < carrier_size; ++w)
                if (!std::binary_search(T.begin(), T.end(), w)) C.push_back(w);
            std::sort(C.begin(), C.end());
            const SubsetVars& sv = top_only ? lam[lam_pos.at(C)] : mu[mu_pos.at(C)];
            std::map<PartitionKey, double> acc;
            for (auto& part : partitions_of(T)) acc[part] = 0.0;
            for (std::size_t i = 0; i < sv.atoms.size(); ++i)
                acc[sv.atoms[i].restrict_to(T)] += sol.values[sv.first_col + static_cast<int>(i)];
            for (auto& [k, val] : acc) vals[k] = val;
        });

    SASolveResult res{sol.objective, SAValuation(n, r, std::move(vals)), sol.iterations};
    return res;
}

} // namespace ccsa
