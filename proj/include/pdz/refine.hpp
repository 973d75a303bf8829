#pragma once

#include <cstddef>
#include <vector>

#include "pdz/bits.hpp"
#include "pdz/core.hpp"
#include "pdz/treecode.hpp"

namespace pdz {

// Tree payload plus (k-2) mark vectors of n bits each; level 3 first.
struct refine_payload {
    unsigned k = 2;
    tree_payload base;
    std::vector<bit_string> levels;

    [[nodiscard]] std::size_t leaf_count() const { return base.leaf_count(); }
    // Always k*n - 2.
    [[nodiscard]] std::size_t bit_length() const;
    // base bits followed by each level vector.
    [[nodiscard]] bit_string serialize() const;
    [[nodiscard]] static refine_payload deserialize(const bit_string& bits, std::size_t n, unsigned k);

    friend bool operator==(const refine_payload&, const refine_payload&) = default;
};

struct refine_step_result {
    bit_string marks;
    probability_distribution q;
    rational normalizer;
};

// 2 + 2^(3-k): the max-ratio bound after k levels (4 for k = 2).
[[nodiscard]] rational refine_ratio_bound(unsigned k);
// (2^(k-2) + 1) / (2^(k-3) + 1): upper bound on the level-k normalizer.
[[nodiscard]] rational refine_normalizer_bound(unsigned k);

// Doubles every marked entry of q and renormalizes. Shared by encoder and
// decoder so both sides compute bit-identical distributions.
[[nodiscard]] refine_step_result apply_marks(const probability_distribution& q, bit_string marks);

// One level: marks b_i = [p_i / q_i >= 1 + 2^(3-k)], then apply_marks.
// Requires max_ratio(p, q_prev) < 2 + 2^(4-k).
[[nodiscard]] refine_step_result refine_step(const probability_distribution& p,
                                             const probability_distribution& q_prev, unsigned k);

[[nodiscard]] refine_payload compress_refined(const probability_distribution& p, unsigned k);
// Reads only the payload.
[[nodiscard]] probability_distribution decompress_refined(const refine_payload& payload);

// Per-symbol lookup for a refine payload that never materializes Q: the
// level normalizers are accumulated in one streaming pass, after which
// q_i = 2^-d_i * prod(1 + b_i) / prod(N) needs only d_i and the marks.
class refined_lookup {
public:
    explicit refined_lookup(refine_payload payload);

    [[nodiscard]] std::size_t size() const { return payload_.leaf_count(); }
    [[nodiscard]] const std::vector<rational>& normalizers() const { return normalizers_; }
    // symbol is 0-based; depth is that leaf's depth in the base tree.
    [[nodiscard]] rational probability(std::size_t symbol, std::uint32_t depth) const;

private:
    refine_payload payload_;
    std::vector<rational> normalizers_;
    rational normalizer_product_;
};

}  // namespace pdz
