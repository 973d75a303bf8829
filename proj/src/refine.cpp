#include "pdz/refine.hpp"

#include <string>

#include "pdz/error.hpp"

namespace pdz {

namespace {

rational pow2(int exponent) {
    rational out(1);
    if (exponent >= 0) {
        mpq_mul_2exp(out.get_mpq_t(), out.get_mpq_t(), static_cast<mp_bitcnt_t>(exponent));
    } else {
        mpq_div_2exp(out.get_mpq_t(), out.get_mpq_t(), static_cast<mp_bitcnt_t>(-exponent));
    }
    return out;
}

}  // namespace

std::size_t refine_payload::bit_length() const {
    std::size_t total = base.bits.size();
    for (const auto& level : levels) {
        total += level.size();
    }
    return total;
}

bit_string refine_payload::serialize() const {
    bit_string out = base.bits;
    for (const auto& level : levels) {
        out.append(level);
    }
    return out;
}

refine_payload refine_payload::deserialize(const bit_string& bits, std::size_t n, unsigned k) {
    if (k < 2) {
        throw corrupt_data("refine payload: k must be at least 2");
    }
    if (n == 0 || bits.size() != k * n - 2) {
        throw corrupt_data("refine payload: expected " + std::to_string(k * n - 2) + " bits, found " +
                           std::to_string(bits.size()));
    }
    refine_payload out;
    out.k = k;
    out.base.bits = bits.slice(0, 2 * n - 2);
    for (unsigned level = 3; level <= k; ++level) {
        out.levels.push_back(bits.slice(2 * n - 2 + (level - 3) * n, n));
    }
    return out;
}

rational refine_ratio_bound(unsigned k) {
    if (k < 2) {
        throw invalid_argument("refine: k must be at least 2");
    }
    return 2 + pow2(3 - static_cast<int>(k));
}

rational refine_normalizer_bound(unsigned k) {
    if (k < 3) {
        throw invalid_argument("refine: normalizer bound needs k >= 3");
    }
    rational out = (pow2(static_cast<int>(k) - 2) + 1) / (pow2(static_cast<int>(k) - 3) + 1);
    return out;
}

refine_step_result apply_marks(const probability_distribution& q, bit_string marks) {
    if (marks.size() != q.size()) {
        throw invalid_argument("refine: mark vector length " + std::to_string(marks.size()) +
                               " does not match n = " + std::to_string(q.size()));
    }
    rational normalizer = 1;
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (marks[i]) {
            normalizer += q[i];
        }
    }
    std::vector<rational> next;
    next.reserve(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
        rational qi = marks[i] ? rational(2 * q[i]) : q[i];
        qi /= normalizer;
        next.push_back(std::move(qi));
    }
    return {std::move(marks), probability_distribution(std::move(next)), std::move(normalizer)};
}

refine_step_result refine_step(const probability_distribution& p, const probability_distribution& q_prev,
                               unsigned k) {
    if (k < 3) {
        throw invalid_argument("refine step: k must be at least 3");
    }
    if (p.size() != q_prev.size()) {
        throw invalid_argument("refine step: length mismatch");
    }
    if (!q_prev.strictly_positive()) {
        throw invalid_argument("refine step: previous Q must be strictly positive");
    }
    if (max_ratio(p, q_prev) >= 2 + pow2(4 - static_cast<int>(k))) {
        throw invalid_argument("refine step: previous Q violates the level-" + std::to_string(k - 1) +
                               " ratio bound");
    }
    const rational threshold = 1 + pow2(3 - static_cast<int>(k));
    bit_string marks;
    for (std::size_t i = 0; i < p.size(); ++i) {
        marks.push_back(p[i] >= threshold * q_prev[i]);
    }
    return apply_marks(q_prev, std::move(marks));
}

refine_payload compress_refined(const probability_distribution& p, unsigned k) {
    if (k < 2) {
        throw invalid_argument("refine: k must be at least 2");
    }
    refine_payload out;
    out.k = k;
    out.base = compress_t2(p);
    // Q is rebuilt from the stored base exactly as the decoder will.
    probability_distribution q = implied_distribution(decode_tree(out.base)).to_distribution();
    for (unsigned level = 3; level <= k; ++level) {
        refine_step_result step = refine_step(p, q, level);
        out.levels.push_back(std::move(step.marks));
        q = std::move(step.q);
    }
    return out;
}

probability_distribution decompress_refined(const refine_payload& payload) {
    if (payload.k < 2 || payload.levels.size() != payload.k - 2) {
        throw corrupt_data("refine payload: level count does not match k");
    }
    probability_distribution q = implied_distribution(decode_tree(payload.base)).to_distribution();
    for (const auto& level : payload.levels) {
        if (level.size() != q.size()) {
            throw corrupt_data("refine payload: level vector length " + std::to_string(level.size()) +
                               " does not match n = " + std::to_string(q.size()));
        }
        q = apply_marks(q, level).q;
    }
    return q;
}

refined_lookup::refined_lookup(refine_payload payload) : payload_(std::move(payload)), normalizer_product_(1) {
    const std::size_t n = payload_.leaf_count();
    if (payload_.k < 2 || payload_.levels.size() != payload_.k - 2) {
        throw corrupt_data("refine payload: level count does not match k");
    }
    for (const auto& level : payload_.levels) {
        if (level.size() != n) {
            throw corrupt_data("refine payload: level vector length does not match n");
        }
    }
    // marked_mass[l] = sum over symbols marked at level l of the unnormalized
    // weight 2^-d_i * prod_{earlier levels}(1 + b_i).
    std::vector<rational> marked_mass(payload_.levels.size(), 0);
    std::size_t symbol = 0;
    for_each_leaf_depth(payload_.base, [&](std::uint32_t depth) {
        rational weight = dyadic(depth);
        for (std::size_t l = 0; l < payload_.levels.size(); ++l) {
            if (payload_.levels[l][symbol]) {
                marked_mass[l] += weight;
                weight *= 2;
            }
        }
        ++symbol;
    });
    for (const auto& mass : marked_mass) {
        rational normalizer = 1 + mass / normalizer_product_;
        normalizer_product_ *= normalizer;
        normalizers_.push_back(std::move(normalizer));
    }
}

rational refined_lookup::probability(std::size_t symbol, std::uint32_t depth) const {
    if (symbol >= size()) {
        throw invalid_argument("refined lookup: symbol out of range");
    }
    rational q = dyadic(depth);
    for (const auto& level : payload_.levels) {
        if (level[symbol]) {
            q *= 2;
        }
    }
    q /= normalizer_product_;
    return q;
}

}  // namespace pdz
