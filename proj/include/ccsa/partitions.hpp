#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ccsa/errors.hpp"

namespace ccsa {

/**
 * @brief Canonical ordered set-partition of a vertex subset.
 *
 * Blocks are disjoint nonempty sorted vertex lists; blocks are ordered by
 * their minimum element. Two keys describing the same set-partition always
 * compare equal, which makes PartitionKey usable as a variable identity.
 */
class PartitionKey {
public:
    PartitionKey() = default;

    explicit PartitionKey(std::vector<std::vector<int>> blocks) : blocks_(std::move(blocks)) {
        canonicalize();
    }

    static PartitionKey empty() { return PartitionKey(); }

    static PartitionKey singleton(int v) { return PartitionKey({std::vector<int>{v}}); }

    static PartitionKey pair_together(int u, int v) { return PartitionKey({{u, v}}); }

    static PartitionKey pair_apart(int u, int v) { return PartitionKey({{u}, {v}}); }

    const std::vector<std::vector<int>>& blocks() const { return blocks_; }

    bool is_empty() const { return blocks_.empty(); }

    int ground_size() const {
        int s = 0;
        for (const auto& b : blocks_) s += static_cast<int>(b.size());
        return s;
    }

    std::vector<int> ground_set() const {
        std::vector<int> g;
        for (const auto& b : blocks_) g.insert(g.end(), b.begin(), b.end());
        std::sort(g.begin(), g.end());
        return g;
    }

    bool same_block(int u, int v) const {
        for (const auto& b : blocks_) {
            bool has_u = std::binary_search(b.begin(), b.end(), u);
            bool has_v = std::binary_search(b.begin(), b.end(), v);
            if (has_u || has_v) return has_u && has_v;
        }
        return false;
    }

    /// Block index containing v, or -1.
    int block_of(int v) const {
        for (std::size_t i = 0; i < blocks_.size(); ++i)
            if (std::binary_search(blocks_[i].begin(), blocks_[i].end(), v))
                return static_cast<int>(i);
        return -1;
    }

    /// Restriction of the partition to the vertices in T (sorted).
    PartitionKey restrict_to(const std::vector<int>& T) const {
        std::vector<std::vector<int>> out;
        for (const auto& b : blocks_) {
            std::vector<int> bb;
            std::set_intersection(b.begin(), b.end(), T.begin(), T.end(), std::back_inserter(bb));
            if (!bb.empty()) out.push_back(std::move(bb));
        }
        return PartitionKey(std::move(out));
    }

    /// Key with v added to block i (i == block count means a new singleton).
    PartitionKey extend(int v, int block_index) const {
        auto blocks = blocks_;
        if (block_index == static_cast<int>(blocks.size())) {
            blocks.push_back({v});
        } else {
            blocks[block_index].push_back(v);
        }
        return PartitionKey(std::move(blocks));
    }

    bool operator==(const PartitionKey& o) const { return blocks_ == o.blocks_; }
    bool operator<(const PartitionKey& o) const { return blocks_ < o.blocks_; }

    std::string to_string() const {
        std::string s;
        for (std::size_t i = 0; i < blocks_.size(); ++i) {
            if (i) s += '|';
            for (std::size_t j = 0; j < blocks_[i].size(); ++j) {
                if (j) s += ' ';
                s += std::to_string(blocks_[i][j]);
            }
        }
        return s.empty() ? "()" : s;
    }

    std::size_t hash() const {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        auto mix = [&h](std::uint64_t x) {
            h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        };
        for (const auto& b : blocks_) {
            mix(0xffffffffULL);
            for (int v : b) mix(static_cast<std::uint64_t>(v));
        }
        return static_cast<std::size_t>(h);
    }

private:
    void canonicalize() {
        for (auto& b : blocks_) {
            if (b.empty()) throw invalid_argument("PartitionKey: empty block");
            std::sort(b.begin(), b.end());
            if (std::adjacent_find(b.begin(), b.end()) != b.end())
                throw invalid_argument("PartitionKey: repeated vertex in block");
        }
        std::sort(blocks_.begin(), blocks_.end(),
                  [](const auto& a, const auto& b) { return a.front() < b.front(); });
        // disjointness: the sorted ground set must have no duplicates
        std::vector<int> g;
        for (const auto& b : blocks_) g.insert(g.end(), b.begin(), b.end());
        std::sort(g.begin(), g.end());
        if (std::adjacent_find(g.begin(), g.end()) != g.end())
            throw invalid_argument("PartitionKey: blocks are not disjoint");
    }

    std::vector<std::vector<int>> blocks_;
};

struct PartitionKeyHash {
    std::size_t operator()(const PartitionKey& k) const { return k.hash(); }
};

/// All set-partitions of the given vertices, enumerated via restricted growth
/// strings. Order is deterministic; the all-singletons partition comes last.
inline std::vector<PartitionKey> partitions_of(const std::vector<int>& elems) {
    std::vector<PartitionKey> out;
    const int n = static_cast<int>(elems.size());
    if (n == 0) {
        out.push_back(PartitionKey::empty());
        return out;
    }
    std::vector<int> a(n, 0);
    // iterate restricted growth strings in lexicographic order
    while (true) {
        int nblocks = *std::max_element(a.begin(), a.end()) + 1;
        std::vector<std::vector<int>> blocks(nblocks);
        for (int i = 0; i < n; ++i) blocks[a[i]].push_back(elems[i]);
        out.emplace_back(std::move(blocks));
        int i = n - 1;
        for (; i > 0; --i) {
            int mx = 0;
            for (int j = 0; j < i; ++j) mx = std::max(mx, a[j]);
            if (a[i] <= mx) break;
        }
        if (i == 0) break;
        ++a[i];
        std::fill(a.begin() + i + 1, a.end(), 0);
    }
    return out;
}

/// Bell number B(n) (number of set-partitions); n <= 25 stays in 64 bits.
inline std::uint64_t bell_number(int n) {
    if (n < 0) throw invalid_argument("bell_number: negative n");
    std::vector<std::vector<std::uint64_t>> tri;
    tri.push_back({1});
    for (int i = 1; i <= n; ++i) {
        std::vector<std::uint64_t> row;
        row.push_back(tri.back().back());
        for (std::size_t j = 0; j < tri.back().size(); ++j)
            row.push_back(row.back() + tri.back()[j]);
        tri.push_back(std::move(row));
    }
    return tri[n][0];
}

inline std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::uint64_t r = 1;
    for (int i = 0; i < k; ++i) r = r * static_cast<std::uint64_t>(n - i) / (i + 1);
    return r;
}

/// Apply f to every k-subset of {0,...,n-1}, in lexicographic order.
inline void for_each_subset(int n, int k, const std::function<void(const std::vector<int>&)>& f) {
    if (k > n || k < 0) return;
    std::vector<int> c(k);
    for (int i = 0; i < k; ++i) c[i] = i;
    while (true) {
        f(c);
        int i = k - 1;
        while (i >= 0 && c[i] == n - k + i) --i;
        if (i < 0) break;
        ++c[i];
        for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
    }
}

} // namespace ccsa
