#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pdz/bits.hpp"

namespace pdz {

// A strict ordered binary tree, identified by its left-to-right leaf depths.
// Construction checks that the depths describe such a tree, which also
// implies the Kraft equality sum 2^-d_i = 1.
class strict_tree_shape {
public:
    explicit strict_tree_shape(std::vector<std::uint32_t> leaf_depths);

    [[nodiscard]] std::size_t leaf_count() const { return depths_.size(); }
    [[nodiscard]] std::span<const std::uint32_t> depths() const { return depths_; }
    [[nodiscard]] std::uint32_t depth(std::size_t leaf) const { return depths_[leaf]; }

    // Preorder node flags, 1 = internal, 0 = leaf; 2n-1 symbols.
    [[nodiscard]] bit_string preorder() const;

    friend bool operator==(const strict_tree_shape&, const strict_tree_shape&) = default;

private:
    std::vector<std::uint32_t> depths_;
};

}  // namespace pdz
