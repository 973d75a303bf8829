#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "pdz/core.hpp"
#include "pdz/detail/packed_array.hpp"
#include "pdz/tree_shape.hpp"
#include "pdz/treecode.hpp"

namespace pdz {

// A node, identified by its preorder position in 0..2n-2.
struct node_handle {
    std::size_t position = 0;
    friend auto operator<=>(const node_handle&, const node_handle&) = default;
};

// Navigable form of a strict ordered binary tree: the 2n-1 preorder node
// flags plus o(n) bits of directories.
//
// Reading flags as +1 (internal) / -1 (leaf), let E(i) be the running sum
// over the first i flags. The subtree of v ends at the first position where
// E drops below E(v); a right child's parent is the last earlier position
// with E at or below its own. Both searches run over blocks of
// B = ceil(log2(2n))^2 flags:
//   - one rank sample per block (count of internal flags before it), which
//     gives E at any position with an in-block popcount;
//   - a range-min tree over groups of four blocks, holding the minimum of E
//     inside each group, which finds the group where a search stops in
//     O(log n) steps.
// Inside a block, flags are scanned a byte at a time with min-excess tables.
class succinct_tree_index {
public:
    [[nodiscard]] static succinct_tree_index from_shape(const strict_tree_shape& shape);
    // Rebuilds directories from a stored 2n-2 bit payload; validates it.
    [[nodiscard]] static succinct_tree_index from_payload(const tree_payload& payload);

    [[nodiscard]] std::size_t leaf_count() const { return leaves_; }
    [[nodiscard]] std::size_t node_count() const { return symbols_; }
    [[nodiscard]] node_handle root() const { return {0}; }

    [[nodiscard]] bool is_leaf(node_handle h) const;
    [[nodiscard]] node_handle left_child(node_handle h) const;
    [[nodiscard]] node_handle right_child(node_handle h) const;
    [[nodiscard]] node_handle parent(node_handle h) const;
    // Nodes in the subtree of h, h included.
    [[nodiscard]] std::size_t num_descendants(node_handle h) const;

    // Depth of the leaf for a 1-based symbol, found by descending from the
    // root; `steps` receives the number of descents taken.
    [[nodiscard]] std::uint32_t leaf_depth(std::size_t symbol, std::size_t* steps = nullptr) const;
    // 2^-leaf_depth(symbol), exactly.
    [[nodiscard]] rational query_prob(std::size_t symbol, std::size_t* steps = nullptr) const;

    // E(i) for i in 0..node_count().
    [[nodiscard]] std::int64_t excess(std::size_t i) const;
    // Internal-node flags among the first i symbols.
    [[nodiscard]] std::size_t rank1(std::size_t i) const;

    [[nodiscard]] std::size_t block_size() const { return block_; }
    // 2n-1 flag bits.
    [[nodiscard]] std::size_t shape_bits() const { return symbols_; }
    // Rank samples plus min tree, counted as entries * field width.
    [[nodiscard]] std::size_t aux_bits() const { return rank_samples_.bit_size() + min_tree_.bit_size(); }
    [[nodiscard]] std::size_t total_bits() const { return shape_bits() + aux_bits(); }

private:
    explicit succinct_tree_index(bit_string flags);

    [[nodiscard]] bool flag(std::size_t i) const { return (flags_.words()[i >> 6] >> (i & 63)) & 1U; }
    [[nodiscard]] std::size_t subtree_end(std::size_t v) const;
    // Smallest i in (v, node_count()] with E(i) <= target.
    [[nodiscard]] std::optional<std::size_t> forward_search(std::size_t v, std::int64_t target) const;
    // Largest j in [0, v) with E(j) <= target.
    [[nodiscard]] std::optional<std::size_t> backward_search(std::size_t v, std::int64_t target) const;

    [[nodiscard]] std::int64_t group_min(std::size_t node) const;
    [[nodiscard]] std::optional<std::size_t> first_group_at_most(std::size_t from, std::int64_t target) const;
    [[nodiscard]] std::optional<std::size_t> last_group_at_most(std::size_t to, std::int64_t target) const;

    bit_string flags_;
    std::size_t leaves_ = 0;
    std::size_t symbols_ = 0;
    std::size_t block_ = 1;
    std::size_t group_ = 4;
    std::size_t groups_ = 0;
    detail::packed_array rank_samples_;
    detail::packed_array min_tree_;  // value + 1, Euler layout over groups
};

// Index over the Mehlhorn tree of p. Requires every p_i > 0.
[[nodiscard]] succinct_tree_index build_index(const probability_distribution& p);

// p_i' = p_i / (1 + eps/4) + (eps/4) / ((1 + eps/4) n); every entry becomes positive.
[[nodiscard]] probability_distribution smooth(const probability_distribution& p, const rational& epsilon);

// build_index(smooth(p, epsilon)); p may contain zeros.
[[nodiscard]] succinct_tree_index build_smoothed(const probability_distribution& p, const rational& epsilon);

}  // namespace pdz
