#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "pdz/bits.hpp"
#include "pdz/core.hpp"
#include "pdz/tree_shape.hpp"

namespace pdz {

// A strict tree stored in exactly 2n-2 bits: the preorder node flags
// (1 = internal, 0 = leaf) with the last flag, always a leaf, dropped.
struct tree_payload {
    bit_string bits;

    [[nodiscard]] std::size_t leaf_count() const { return bits.size() / 2 + 1; }
    friend bool operator==(const tree_payload&, const tree_payload&) = default;
};

// q_i = 2^-d_i for the leaf depths of a strict tree.
class dyadic_distribution {
public:
    explicit dyadic_distribution(strict_tree_shape shape) : shape_(std::move(shape)) {}

    [[nodiscard]] std::size_t size() const { return shape_.leaf_count(); }
    [[nodiscard]] std::span<const std::uint32_t> depth_exponents() const { return shape_.depths(); }
    [[nodiscard]] rational probability(std::size_t i) const;
    [[nodiscard]] probability_distribution to_distribution() const;

private:
    strict_tree_shape shape_;
};

// 2^-exponent as an exact rational.
[[nodiscard]] rational dyadic(std::uint32_t exponent);

[[nodiscard]] tree_payload encode_tree(const strict_tree_shape& shape);
[[nodiscard]] strict_tree_shape decode_tree(const tree_payload& payload);
[[nodiscard]] tree_payload compress_t2(const probability_distribution& p);
[[nodiscard]] dyadic_distribution implied_distribution(const strict_tree_shape& shape);

// Streams the leaf depths of a payload left to right without building the
// depth sequence. Same validation as decode_tree.
void for_each_leaf_depth(const tree_payload& payload, const std::function<void(std::uint32_t)>& visit);

}  // namespace pdz
