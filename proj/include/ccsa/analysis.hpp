#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ccsa/errors.hpp"
#include "ccsa/rng.hpp"
#include "ccsa/rounding.hpp"
#include "ccsa/signed_graph.hpp"

namespace ccsa {

/// Constants of the charging-scheme analysis. tau is computed from the
/// four-digit forms of zeta_l and zeta_u, matching the printed derivation.
struct AnalysisConstants {
    double delta = 0.1;
    double eta = 1.0 / 12.0;
    double gamma = 0.054;

    double zeta_l() const { return 2.0 * (0.5 - eta) * (0.5 - eta); }
    double zeta_u() const { return 2.0 * (0.5 + 2.0 * eta) * (0.5 + eta) + eta; }
    double tau() const { return gamma / (1.0 / 0.8612 + 3.0 / 0.3472); }
    double medium_lp_floor() const { return 2.0 * delta * delta; }
    double not_bad_bound() const { return 2.0 - gamma; }
};

enum class TriangleType { PPP, PPM, PMM, MMM };

inline const char* triangle_type_name(TriangleType t) {
    switch (t) {
        case TriangleType::PPP: return "+++";
        case TriangleType::PPM: return "++-";
        case TriangleType::PMM: return "+--";
        default: return "---";
    }
}

/**
 * @brief A triangle's signs together with its local distribution.
 *
 * Vertices are labeled a=0, b=1, c=2 with edge order (ab, ac, bc). The five
 * atoms are the set-partition probabilities p = y_abc, x = y_{ab|c},
 * y = y_{ac|b}, z = y_{bc|a}, q = y_{a|b|c}; they sum to one, which already
 * implies the triangle inequality on the induced distances.
 */
struct TriangleProfile {
    std::array<Sign, 3> signs{Sign::PLUS, Sign::PLUS, Sign::PLUS}; // (ab, ac, bc)
    double p = 0, x = 0, y = 0, z = 0, q = 1;

    void validate(double tol = 1e-9) const {
        for (double v : {p, x, y, z, q})
            if (v < -tol) throw invalid_argument("TriangleProfile: negative atom");
        if (std::abs(p + x + y + z + q - 1.0) > tol)
            throw invalid_argument("TriangleProfile: atoms must sum to 1");
    }

    double y_ab() const { return p + x; }
    double y_ac() const { return p + y; }
    double y_bc() const { return p + z; }
    double d_ab() const { return 1.0 - y_ab(); }
    double d_ac() const { return 1.0 - y_ac(); }
    double d_bc() const { return 1.0 - y_bc(); }

    Sign sign_between(int u, int v) const {
        if (u > v) std::swap(u, v);
        if (u == 0 && v == 1) return signs[0];
        if (u == 0 && v == 2) return signs[1];
        return signs[2];
    }

    double y_between(int u, int v) const {
        if (u > v) std::swap(u, v);
        if (u == 0 && v == 1) return y_ab();
        if (u == 0 && v == 2) return y_ac();
        return y_bc();
    }

    double dist_between(int u, int v) const { return 1.0 - y_between(u, v); }

    TriangleType type() const {
        const int plus = static_cast<int>(signs[0] == Sign::PLUS) +
                         static_cast<int>(signs[1] == Sign::PLUS) +
                         static_cast<int>(signs[2] == Sign::PLUS);
        switch (plus) {
            case 3: return TriangleType::PPP;
            case 2: return TriangleType::PPM;
            case 1: return TriangleType::PMM;
            default: return TriangleType::MMM;
        }
    }
};

struct DegenerateProfile {
    Sign sign = Sign::PLUS;
    double x = 0.0; // distance
};

struct CostLp {
    double cost = 0.0;
    double lp = 0.0;

    double ratio() const {
        if (lp > 1e-12) return cost / lp;
        return cost <= 1e-9 ? 0.0 : std::numeric_limits<double>::infinity();
    }
};

enum class RoundingScheme {
    Ideal,  // every +edge rounded with exact pair correlation
    Special // only medium +edges correlated; short/long get their ramp
};

namespace detail_analysis {

/// Join probability of a non-pivot vertex under the scheme, plus whether it
/// takes part in the pivot's correlated group.
inline std::pair<double, bool> scheme_join(Sign s, double dist, RoundingScheme scheme,
                                           double delta) {
    if (s == Sign::MINUS) return {1.0 - std::sqrt(dist), false};
    if (scheme == RoundingScheme::Ideal) return {1.0 - dist, true};
    switch (classify_edge(dist, delta)) {
        case EdgeClass::Short: return {1.0 - dist * dist / delta, false};
        case EdgeClass::Long: return {1.0 - dist, false};
        default: return {1.0 - dist, true};
    }
}

} // namespace detail_analysis

/**
 * @brief Closed-form (cost, lp) of one triangle under idealized rounding.
 *
 * Sums the per-pivot terms: each non-pivot vertex joins with its scheme
 * probability; when both edges at the pivot are rounded with correlation the
 * joint join probability is exactly y_abc, otherwise the product. A +edge
 * between the others is violated when exactly one of them joins, a -edge when
 * both do; the edge disappears when either does.
 */
inline CostLp triangle_cost_lp(const TriangleProfile& t, RoundingScheme scheme,
                               const AnalysisConstants& c = {}) {
    t.validate();
    CostLp out;
    for (int pivot = 0; pivot < 3; ++pivot) {
        const int u = pivot == 0 ? 1 : 0;
        const int v = pivot == 2 ? 1 : 2;
        auto [gu, cu] = detail_analysis::scheme_join(t.sign_between(pivot, u),
                                                     t.dist_between(pivot, u), scheme, c.delta);
        auto [gv, cv] = detail_analysis::scheme_join(t.sign_between(pivot, v),
                                                     t.dist_between(pivot, v), scheme, c.delta);
        const double both = (cu && cv) ? t.p : gu * gv;
        const double violated = t.sign_between(u, v) == Sign::PLUS ? gu + gv - 2.0 * both : both;
        const double lpval = t.sign_between(u, v) == Sign::PLUS ? t.dist_between(u, v)
                                                                : t.y_between(u, v);
        out.cost += violated;
        out.lp += lpval * (gu + gv - both);
    }
    return out;
}

inline CostLp degenerate_cost_lp(const DegenerateProfile& d, RoundingScheme scheme,
                                 const AnalysisConstants& c = {}) {
    if (d.x < -1e-9 || d.x > 1.0 + 1e-9) throw invalid_argument("degenerate profile: bad distance");
    const double x = std::min(std::max(d.x, 0.0), 1.0);
    CostLp out;
    if (d.sign == Sign::PLUS) {
        double per_pivot = x; // ideal/medium/long: violated iff the other stays out
        if (scheme == RoundingScheme::Special && classify_edge(x, c.delta) == EdgeClass::Short)
            per_pivot = x * x / c.delta;
        out.cost = 2.0 * per_pivot;
        out.lp = 2.0 * x;
    } else {
        out.cost = 2.0 * (1.0 - std::sqrt(x));
        out.lp = 2.0 * (1.0 - x);
    }
    return out;
}

struct TriangleClass {
    TriangleType type = TriangleType::PPP;
    bool bad = false;
    bool chargeable = false;
};

/**
 * @brief Bad / chargeable classification relative to a designated center.
 *
 * Bad: a ++- triangle whose center carries the two +edges, both with distance
 * in [1/2-eta, 1/2+eta], and whose -edge distance exceeds 1-eta. Chargeable:
 * both center edges are such +edges and the far pair has distance at most
 * 1/2+5 eta (its sign does not matter). The two are mutually exclusive since
 * 1/2+5 eta <= 1-eta.
 */
inline TriangleClass classify_triangle(const TriangleProfile& t, const AnalysisConstants& c,
                                       int center) {
    if (center < 0 || center > 2) throw invalid_argument("classify_triangle: bad center");
    TriangleClass out;
    out.type = t.type();
    const int u = center == 0 ? 1 : 0;
    const int v = center == 2 ? 1 : 2;
    const bool center_plus = t.sign_between(center, u) == Sign::PLUS &&
                             t.sign_between(center, v) == Sign::PLUS;
    const bool center_window =
        center_plus && t.dist_between(center, u) >= 0.5 - c.eta &&
        t.dist_between(center, u) <= 0.5 + c.eta && t.dist_between(center, v) >= 0.5 - c.eta &&
        t.dist_between(center, v) <= 0.5 + c.eta;
    out.bad = center_window && t.sign_between(u, v) == Sign::MINUS &&
              t.dist_between(u, v) > 1.0 - c.eta;
    out.chargeable = center_window && t.dist_between(u, v) <= 0.5 + 5.0 * c.eta;
    return out;
}

/// True when the profile is bad relative to any center.
inline bool is_bad_triangle(const TriangleProfile& t, const AnalysisConstants& c) {
    for (int center = 0; center < 3; ++center)
        if (classify_triangle(t, c, center).bad) return true;
    return false;
}

// ---------------------------------------------------------------------------
// Ratio sweeps.
// ---------------------------------------------------------------------------

enum class SweepRowKind { PPP, PMM, MMM, PPM_ALL, PPM_BAD, PPM_NOT_BAD, DEGENERATE };

inline const char* sweep_row_name(SweepRowKind k) {
    switch (k) {
        case SweepRowKind::PPP: return "+++";
        case SweepRowKind::PMM: return "+--";
        case SweepRowKind::MMM: return "---";
        case SweepRowKind::PPM_ALL: return "++-";
        case SweepRowKind::PPM_BAD: return "++- bad";
        case SweepRowKind::PPM_NOT_BAD: return "++- not-bad";
        default: return "degenerate";
    }
}

inline double sweep_row_bound(SweepRowKind k, RoundingScheme scheme, const AnalysisConstants& c) {
    const bool ideal = scheme == RoundingScheme::Ideal;
    switch (k) {
        case SweepRowKind::PPP: return ideal ? 1.5 : 1.9;
        case SweepRowKind::PMM: return ideal ? 1.5 : 1.65;
        case SweepRowKind::MMM: return 1.0;
        case SweepRowKind::PPM_ALL: return 2.0;
        case SweepRowKind::PPM_BAD: return 2.0;
        case SweepRowKind::PPM_NOT_BAD: return c.not_bad_bound();
        default: return 1.0;
    }
}

struct SweepOptions {
    long long samples = 100000;   // Dirichlet samples
    int grid = 24;                // boundary grid resolution (multiples of 1/grid)
    std::uint64_t seed = 1;
    RoundingScheme scheme = RoundingScheme::Ideal;
};

struct SweepRow {
    SweepRowKind kind = SweepRowKind::PPP;
    RoundingScheme scheme = RoundingScheme::Ideal;
    long long samples_used = 0;
    double max_ratio = 0.0;
    double bound = 0.0;
    bool pass = false;
    std::optional<TriangleProfile> argmax;
    std::optional<DegenerateProfile> argmax_degenerate;
};

namespace detail_analysis {

inline void sweep_consider(SweepRow& row, const TriangleProfile& t, RoundingScheme scheme,
                           const AnalysisConstants& c) {
    ++row.samples_used;
    const double r = triangle_cost_lp(t, scheme, c).ratio();
    if (r > row.max_ratio) {
        row.max_ratio = r;
        row.argmax = t;
    }
}

/// Walks all compositions of `grid` into five parts (covers the boundary
/// faces of the simplex by construction) and then the random interior.
template <class F>
inline void for_each_profile(const SweepOptions& opt, F&& consider) {
    const int k = opt.grid;
    for (int i1 = 0; i1 <= k; ++i1)
        for (int i2 = 0; i2 + i1 <= k; ++i2)
            for (int i3 = 0; i3 + i2 + i1 <= k; ++i3)
                for (int i4 = 0; i4 + i3 + i2 + i1 <= k; ++i4) {
                    const int i5 = k - i1 - i2 - i3 - i4;
                    consider(i1 / double(k), i2 / double(k), i3 / double(k), i4 / double(k),
                             i5 / double(k));
                }
    Rng rng(opt.seed);
    for (long long s = 0; s < opt.samples; ++s) {
        auto a = rng.simplex_point(5);
        consider(a[0], a[1], a[2], a[3], a[4]);
    }
}

} // namespace detail_analysis

/// Max observed cost/lp ratio for one row of the bound tables, over boundary
/// grid points plus Dirichlet samples. The assert against the table bound is
/// the caller's job (reports carry both numbers).
inline SweepRow sweep_ratio_bounds(SweepRowKind kind, const AnalysisConstants& c,
                                   const SweepOptions& opt) {
    SweepRow row;
    row.kind = kind;
    row.scheme = opt.scheme;
    row.bound = sweep_row_bound(kind, opt.scheme, c);

    if (kind == SweepRowKind::DEGENERATE) {
        const long long steps = std::max<long long>(opt.samples, 1000);
        for (long long i = 0; i <= steps; ++i) {
            for (Sign s : {Sign::PLUS, Sign::MINUS}) {
                DegenerateProfile d{s, static_cast<double>(i) / steps};
                ++row.samples_used;
                const double r = degenerate_cost_lp(d, opt.scheme, c).ratio();
                if (r > row.max_ratio) {
                    row.max_ratio = r;
                    row.argmax_degenerate = d;
                }
            }
        }
        row.pass = row.max_ratio <= row.bound + 1e-9;
        return row;
    }

    std::array<Sign, 3> signs;
    switch (kind) {
        case SweepRowKind::PPP: signs = {Sign::PLUS, Sign::PLUS, Sign::PLUS}; break;
        case SweepRowKind::PMM: signs = {Sign::PLUS, Sign::MINUS, Sign::MINUS}; break;
        case SweepRowKind::MMM: signs = {Sign::MINUS, Sign::MINUS, Sign::MINUS}; break;
        default: signs = {Sign::PLUS, Sign::PLUS, Sign::MINUS}; break; // center a
    }
    detail_analysis::for_each_profile(opt, [&](double p, double x, double y, double z, double q) {
        TriangleProfile t;
        t.signs = signs;
        t.p = p;
        t.x = x;
        t.y = y;
        t.z = z;
        t.q = q;
        if (kind == SweepRowKind::PPM_BAD || kind == SweepRowKind::PPM_NOT_BAD) {
            const bool bad = classify_triangle(t, c, 0).bad;
            if (bad != (kind == SweepRowKind::PPM_BAD)) return;
        }
        detail_analysis::sweep_consider(row, t, opt.scheme, c);
    });
    row.pass = row.max_ratio <= row.bound + 1e-9;
    return row;
}

// ---------------------------------------------------------------------------
// Charging-scheme claims as executable checks.
// ---------------------------------------------------------------------------

struct ClaimReport {
    long long tested = 0;
    long long violations = 0;
    bool pass = false;
    std::string detail;
};

/**
 * @brief Local check behind the charging scheme: in a feasible 4-vertex
 * distribution where (p,u,v) and (p,v,w) are both bad, the pair (u,w) stays
 * close (q_uw >= 1/2 - 5 eta, hence x_uw <= 1/2 + 5 eta).
 *
 * Samples q-vectors (q_0, q_u, q_v, q_w, q_uv, q_uw, q_vw, q_uvw) from the
 * 8-simplex by rejection, keeps those meeting the bad-pair hypotheses, and
 * verifies the conclusion on every accepted sample.
 */
inline ClaimReport check_claim_badbad(long long samples, Rng& rng,
                                      const AnalysisConstants& c = {}) {
    ClaimReport rep;
    enum { Q0, QU, QV, QW, QUV, QUW, QVW, QUVW };
    long long attempts = 0;
    const long long max_attempts = samples * 200000;
    // proposal tilted toward small q_uv, q_vw, q_uvw so the conditioning
    // events (eta-bounded sums) are hit at a workable rate
    auto draw = [&]() {
        std::vector<double> g(8);
        for (int i = 0; i < 8; ++i) g[i] = rng.exponential();
        g[QUV] *= 0.05;
        g[QVW] *= 0.05;
        g[QUVW] *= 0.05;
        double s = 0;
        for (double v : g) s += v;
        for (double& v : g) v /= s;
        return g;
    };
    while (rep.tested < samples && attempts < max_attempts) {
        ++attempts;
        auto q = draw();
        const double ypu = q[QU] + q[QUV] + q[QUW] + q[QUVW];
        const double ypv = q[QV] + q[QUV] + q[QVW] + q[QUVW];
        const double ypw = q[QW] + q[QUW] + q[QVW] + q[QUVW];
        const bool window = ypu >= 0.5 - c.eta && ypu <= 0.5 + c.eta && ypv >= 0.5 - c.eta &&
                            ypv <= 0.5 + c.eta && ypw >= 0.5 - c.eta && ypw <= 0.5 + c.eta;
        if (!window) continue;
        // (u,v) and (v,w) bad: the pairs can share a cluster with mass < eta
        if (q[QUV] + q[QUVW] >= c.eta) continue;
        if (q[QVW] + q[QUVW] >= c.eta) continue;
        ++rep.tested;
        // conclusion: the far pair stays close — q_uw >= 1/2 - 5 eta, and
        // hence x_uw <= 1 - q_uw <= 1/2 + 5 eta
        const bool close_mass = q[QUW] >= 0.5 - 5.0 * c.eta - 1e-9;
        const bool close_dist = 1.0 - q[QUW] <= 0.5 + 5.0 * c.eta + 1e-9;
        if (!close_mass || !close_dist) {
            ++rep.violations;
            if (rep.detail.empty()) {
                rep.detail = "q_uw=" + std::to_string(q[QUW]);
            }
        }
    }
    rep.pass = rep.tested >= samples && rep.violations == 0;
    if (rep.tested < samples) rep.detail = "sampler starved before reaching the target";
    return rep;
}

/**
 * @brief Combinatorial core of the bad-vs-chargeable count: in any
 * triangle-free graph, |E| <= |F| + |V| where F is the set of vertex pairs at
 * distance exactly two.
 */
inline ClaimReport check_claim_numbad(int trials, Rng& rng, int max_vertices = 40) {
    ClaimReport rep;
    auto check_graph = [&](int nv, const std::vector<std::pair<int, int>>& edges) {
        std::vector<std::vector<char>> adj(nv, std::vector<char>(nv, 0));
        for (auto [u, v] : edges) adj[u][v] = adj[v][u] = 1;
        long long F = 0;
        for (int u = 0; u < nv; ++u)
            for (int v = u + 1; v < nv; ++v) {
                if (adj[u][v]) continue;
                bool two = false;
                for (int w = 0; w < nv && !two; ++w) two = adj[u][w] && adj[v][w];
                if (two) ++F;
            }
        ++rep.tested;
        if (static_cast<long long>(edges.size()) > F + nv) {
            ++rep.violations;
            if (rep.detail.empty())
                rep.detail = "graph with " + std::to_string(nv) + " vertices, " +
                             std::to_string(edges.size()) + " edges, F=" + std::to_string(F);
        }
    };

    for (int t = 0; t < trials; ++t) {
        const int nv = 2 + static_cast<int>(rng.uniform_below(max_vertices - 1));
        const double density = 0.05 + 0.6 * rng.uniform01();
        std::vector<std::vector<char>> adj(nv, std::vector<char>(nv, 0));
        std::vector<std::pair<int, int>> edges;
        // random insertion order, keep an edge only if it closes no triangle
        std::vector<std::pair<int, int>> candidates;
        for (int u = 0; u < nv; ++u)
            for (int v = u + 1; v < nv; ++v)
                if (rng.uniform01() < density) candidates.push_back({u, v});
        for (std::size_t i = candidates.size(); i > 1; --i)
            std::swap(candidates[i - 1], candidates[rng.uniform_below(i)]);
        for (auto [u, v] : candidates) {
            bool closes = false;
            for (int w = 0; w < nv && !closes; ++w) closes = adj[u][w] && adj[v][w];
            if (!closes) {
                adj[u][v] = adj[v][u] = 1;
                edges.push_back({u, v});
            }
        }
        check_graph(nv, edges);
    }
    rep.pass = rep.violations == 0;
    return rep;
}

// ---------------------------------------------------------------------------
// Brute-force optimum.
// ---------------------------------------------------------------------------

/**
 * @brief Exact minimum-disagreement clustering by branch and bound over
 * restricted growth strings; deterministic (the lexicographically least
 * optimal assignment is returned). Guarded to n <= 12.
 */
inline std::pair<Clustering, long long> brute_force_opt(const SignedGraph& g) {
    const int n = g.n();
    if (n > 12)
        throw resource_limit_error("brute_force_opt: n=" + std::to_string(n) +
                                   " beyond the n<=12 envelope");
    std::vector<int> assign(n, 0), best_assign(n, 0);
    long long best = std::numeric_limits<long long>::max();
    // depth-first over restricted growth strings; the strict prune keeps the
    // lexicographically least assignment among the optima
    auto rec = [&](auto&& self, int i, int nblocks, long long cost) -> void {
        if (cost >= best) return;
        if (i == n) {
            best = cost;
            best_assign = assign;
            return;
        }
        for (int b = 0; b <= nblocks; ++b) {
            long long d = 0;
            for (int j = 0; j < i; ++j) {
                const bool same = assign[j] == b;
                if (g.is_plus(j, i) ? !same : same) ++d;
            }
            assign[i] = b;
            self(self, i + 1, std::max(nblocks, b + 1), cost + d);
        }
    };
    rec(rec, 0, 0, 0);
    return {Clustering(std::move(best_assign)).normalized(), best};
}

// ---------------------------------------------------------------------------
// Closed-form curves behind the printed spot values.
// ---------------------------------------------------------------------------

/// ++- boundary curve at w = 1-p (distances 1/2-ish, -edge at 1):
/// f(p) = (2p sqrt(1-p) + 1) / (1 - (1-p)^2 sqrt(1-p) / 2); f(0) = 2.
inline double ppm_limit_curve(double p) {
    const double s = std::sqrt(1.0 - p);
    return (2.0 * p * s + 1.0) / (1.0 - (1.0 - p) * (1.0 - p) * s / 2.0);
}

/// +-- boundary curve at Z = 1, Y = 1-X: (2-X) / (sqrt(1-X)(1-X) + 1).
inline double pmm_boundary_curve(double X) {
    const double s = std::sqrt(1.0 - X);
    return (2.0 - X) / (s * (1.0 - X) + 1.0);
}

/// ++- curve on the w = 0 boundary (W = 2p).
inline double ppm_w0_curve(double p) {
    const double s = std::sqrt(1.0 - p);
    const double num = s * (4.0 * p - 2.0) + 2.0 - p;
    const double den = p * p + 2.0 - 2.0 * p - (2.0 - 2.0 * p) * (2.0 - 2.0 * p) * s / 2.0;
    return num / den;
}

/// Deterministic golden-section maximizer used as the oracle for the curves.
template <class F>
inline std::pair<double, double> golden_section_max(F&& f, double lo, double hi,
                                                    double tol = 1e-12) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
    while (b - a > tol) {
        if (f(c) > f(d)) b = d;
        else a = c;
        c = b - inv_phi * (b - a);
        d = a + inv_phi * (b - a);
    }
    const double xm = (a + b) / 2.0;
    return {xm, f(xm)};
}

} // namespace ccsa
