#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pdz/core.hpp"
#include "pdz/tree_shape.hpp"

namespace pdz {

// A finite bit string stored as an integer: bit j (0-based, most significant
// first) is bit (length - 1 - j) of value.
struct codeword {
    integer value;
    std::size_t length = 0;

    [[nodiscard]] static codeword from_string(std::string_view bits);
    [[nodiscard]] std::string to_string() const;
    friend bool operator==(const codeword&, const codeword&) = default;
};

// S_i = p_i / 2 + sum_{j<i} p_j. Requires every p_i > 0.
[[nodiscard]] std::vector<rational> midpoints(const probability_distribution& p);

// ceil(log2(2 / p)) for 0 < p <= 1.
[[nodiscard]] std::size_t codeword_length(const rational& p);

// First codeword_length(p) bits of the binary expansion of midpoint.
[[nodiscard]] codeword codeword_of(const rational& midpoint, const rational& p);

// Leaf depths of the code tree of a sorted prefix-free code after every
// single-child node has been spliced out. No trie is built: for sorted
// codewords the branching nodes are the longest common prefixes of
// neighbours, and a leaf's depth is the number of those that are prefixes
// of it.
[[nodiscard]] strict_tree_shape contract_to_strict(std::span<const codeword> codewords);

// Strict ordered tree whose i-th leaf has depth < log2(1/p_i) + 2.
[[nodiscard]] strict_tree_shape mehlhorn_tree(const probability_distribution& p);

}  // namespace pdz
