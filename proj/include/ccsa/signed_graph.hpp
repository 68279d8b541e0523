#pragma once

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ccsa/errors.hpp"
#include "ccsa/rng.hpp"

namespace ccsa {

enum class Sign : unsigned char { PLUS, MINUS };

/**
 * @brief Complete signed graph on vertices 0..n-1; immutable once built.
 *
 * Every unordered pair carries exactly one sign. Stored as a flat triangular
 * array indexed by (u, v) with u < v.
 */
class SignedGraph {
public:
    SignedGraph(int n, std::vector<Sign> signs) : n_(n), signs_(std::move(signs)) {
        if (n < 1) throw invalid_argument("SignedGraph: need at least one vertex");
        if (signs_.size() != static_cast<std::size_t>(n) * (n - 1) / 2)
            throw invalid_argument("SignedGraph: sign count does not match vertex count");
    }

    int n() const { return n_; }

    int num_pairs() const { return n_ * (n_ - 1) / 2; }

    Sign sign(int u, int v) const { return signs_[pair_index(u, v)]; }

    bool is_plus(int u, int v) const { return sign(u, v) == Sign::PLUS; }

    int num_plus() const {
        return static_cast<int>(std::count(signs_.begin(), signs_.end(), Sign::PLUS));
    }

    int num_minus() const { return num_pairs() - num_plus(); }

    int pair_index(int u, int v) const {
        if (u > v) std::swap(u, v);
        if (u < 0 || v >= n_ || u == v)
            throw invalid_argument("SignedGraph: bad vertex pair (" + std::to_string(u) + "," +
                                   std::to_string(v) + ")");
        // pairs ordered lexicographically: (0,1),(0,2),...,(0,n-1),(1,2),...
        return u * n_ - u * (u + 1) / 2 + (v - u - 1);
    }

    bool operator==(const SignedGraph& o) const { return n_ == o.n_ && signs_ == o.signs_; }

private:
    int n_;
    std::vector<Sign> signs_;
};

/// Assignment of every vertex to a cluster id.
class Clustering {
public:
    explicit Clustering(std::vector<int> assignment) : assignment_(std::move(assignment)) {}

    /// Build from a list of clusters (each a vertex list) over vertices 0..n-1.
    static Clustering from_clusters(int n, const std::vector<std::vector<int>>& clusters) {
        std::vector<int> a(n, -1);
        int id = 0;
        for (const auto& c : clusters) {
            for (int v : c) {
                if (v < 0 || v >= n || a[v] != -1)
                    throw invalid_argument("Clustering: bad or repeated vertex in cluster list");
                a[v] = id;
            }
            ++id;
        }
        for (int v = 0; v < n; ++v)
            if (a[v] == -1) throw invalid_argument("Clustering: vertex " + std::to_string(v) + " unassigned");
        return Clustering(std::move(a));
    }

    static Clustering singletons(int n) {
        std::vector<int> a(n);
        for (int i = 0; i < n; ++i) a[i] = i;
        return Clustering(std::move(a));
    }

    static Clustering one_cluster(int n) { return Clustering(std::vector<int>(n, 0)); }

    int size() const { return static_cast<int>(assignment_.size()); }

    int cluster_of(int v) const { return assignment_.at(v); }

    bool same_cluster(int u, int v) const { return assignment_.at(u) == assignment_.at(v); }

    const std::vector<int>& assignment() const { return assignment_; }

    int num_clusters() const {
        auto a = assignment_;
        std::sort(a.begin(), a.end());
        return static_cast<int>(std::unique(a.begin(), a.end()) - a.begin());
    }

    /// Relabel cluster ids to 0,1,2,... in order of first appearance.
    Clustering normalized() const {
        std::map<int, int> remap;
        std::vector<int> a(assignment_.size());
        for (std::size_t v = 0; v < assignment_.size(); ++v) {
            auto it = remap.find(assignment_[v]);
            if (it == remap.end()) it = remap.emplace(assignment_[v], static_cast<int>(remap.size())).first;
            a[v] = it->second;
        }
        return Clustering(std::move(a));
    }

    bool operator==(const Clustering& o) const { return assignment_ == o.assignment_; }

private:
    std::vector<int> assignment_;
};

/// The k-star integrality-gap instance: vertices {0,...,k}; (0,i) is + for all
/// i; every other pair is -. Its LP relaxation value is k/2, the best
/// clustering costs k-1.
inline SignedGraph make_star_gap(int k) {
    if (k < 1) throw invalid_argument("make_star_gap: k must be positive");
    int n = k + 1;
    std::vector<Sign> s(static_cast<std::size_t>(n) * (n - 1) / 2, Sign::MINUS);
    SignedGraph g(n, s); // for pair_index only
    for (int i = 1; i <= k; ++i) s[g.pair_index(0, i)] = Sign::PLUS;
    return SignedGraph(n, std::move(s));
}

/// Each pair independently + with probability p_plus; deterministic in seed.
inline SignedGraph random_instance(int n, double p_plus, std::uint64_t seed) {
    if (n < 1) throw invalid_argument("random_instance: need at least one vertex");
    if (!(p_plus >= 0.0 && p_plus <= 1.0))
        throw invalid_argument("random_instance: p_plus must lie in [0,1]");
    Rng rng(seed);
    std::vector<Sign> s;
    s.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) s.push_back(rng.bernoulli(p_plus) ? Sign::PLUS : Sign::MINUS);
    return SignedGraph(n, std::move(s));
}

/// Number of disagreements: + edges across clusters plus - edges inside one.
inline long long clustering_cost(const SignedGraph& g, const Clustering& c) {
    if (c.size() != g.n())
        throw invalid_argument("clustering_cost: clustering does not cover the instance");
    long long cost = 0;
    for (int u = 0; u < g.n(); ++u)
        for (int v = u + 1; v < g.n(); ++v) {
            bool same = c.same_cluster(u, v);
            if (g.is_plus(u, v) ? !same : same) ++cost;
        }
    return cost;
}

/**
 * @brief Instance text format.
 *
 * Line 1: vertex count n. Then exactly n(n-1)/2 lines "u v s" with
 * 0 <= u < v < n and s one of '+'/'-'. Lines starting with '#' are comments
 * and may appear anywhere; pair order is arbitrary but each pair appears
 * exactly once. Incomplete graphs are rejected.
 */
inline SignedGraph parse_signed_graph(std::istream& in) {
    std::string line;
    int lineno = 0;
    auto next_content_line = [&](std::string& out) -> bool {
        while (std::getline(in, line)) {
            ++lineno;
            std::size_t first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos) continue;
            if (line[first] == '#') continue;
            out = line;
            return true;
        }
        return false;
    };

    std::string header;
    if (!next_content_line(header)) throw parse_error("missing vertex count", lineno ? lineno : 1);
    int n = 0;
    {
        std::istringstream ss(header);
        std::string extra;
        if (!(ss >> n) || (ss >> extra))
            throw parse_error("expected a single integer vertex count", lineno);
        if (n < 1) throw parse_error("vertex count must be at least 1", lineno);
    }

    const int pairs = n * (n - 1) / 2;
    std::vector<Sign> signs(pairs, Sign::MINUS);
    std::vector<bool> seen(pairs, false);
    SignedGraph indexer(n, signs);
    int count = 0;
    std::string body;
    while (count < pairs) {
        if (!next_content_line(body))
            throw parse_error("incomplete graph: " + std::to_string(pairs - count) +
                                  " pair(s) missing",
                              lineno ? lineno : 1);
        std::istringstream ss(body);
        long long u, v;
        std::string tok, extra;
        if (!(ss >> u >> v >> tok) || (ss >> extra))
            throw parse_error("expected \"u v s\"", lineno);
        if (u < 0 || v < 0 || u >= n || v >= n) throw parse_error("vertex id out of range", lineno);
        if (u >= v) throw parse_error("pair must satisfy u < v", lineno);
        if (tok != "+" && tok != "-") throw parse_error("sign must be '+' or '-'", lineno);
        int idx = indexer.pair_index(static_cast<int>(u), static_cast<int>(v));
        if (seen[idx])
            throw parse_error("duplicate pair " + std::to_string(u) + " " + std::to_string(v),
                              lineno);
        seen[idx] = true;
        signs[idx] = (tok == "+") ? Sign::PLUS : Sign::MINUS;
        ++count;
    }
    std::string trailing;
    if (next_content_line(trailing)) throw parse_error("unexpected extra pair line", lineno);
    return SignedGraph(n, std::move(signs));
}

inline SignedGraph parse_signed_graph(const std::string& text) {
    std::istringstream ss(text);
    return parse_signed_graph(ss);
}

inline void serialize_signed_graph(const SignedGraph& g, std::ostream& out) {
    out << g.n() << '\n';
    for (int u = 0; u < g.n(); ++u)
        for (int v = u + 1; v < g.n(); ++v)
            out << u << ' ' << v << ' ' << (g.is_plus(u, v) ? '+' : '-') << '\n';
}

inline std::string serialize_signed_graph(const SignedGraph& g) {
    std::ostringstream ss;
    serialize_signed_graph(g, ss);
    return ss.str();
}

} // namespace ccsa
