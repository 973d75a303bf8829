#include "pdz/treecode.hpp"

#include <string>

#include "pdz/error.hpp"
#include "pdz/mehlhorn.hpp"

namespace pdz {

rational dyadic(std::uint32_t exponent) {
    rational out;
    mpq_set_ui(out.get_mpq_t(), 1, 1);
    mpq_div_2exp(out.get_mpq_t(), out.get_mpq_t(), exponent);
    return out;
}

rational dyadic_distribution::probability(std::size_t i) const {
    return dyadic(shape_.depth(i));
}

probability_distribution dyadic_distribution::to_distribution() const {
    std::vector<rational> q;
    q.reserve(size());
    for (std::uint32_t d : shape_.depths()) {
        q.push_back(dyadic(d));
    }
    return probability_distribution(std::move(q));
}

tree_payload encode_tree(const strict_tree_shape& shape) {
    bit_string symbols = shape.preorder();
    return tree_payload{symbols.slice(0, symbols.size() - 1)};
}

void for_each_leaf_depth(const tree_payload& payload, const std::function<void(std::uint32_t)>& visit) {
    const bit_string& bits = payload.bits;
    if (bits.size() % 2 != 0) {
        throw corrupt_data("tree payload: odd bit length " + std::to_string(bits.size()));
    }
    // Depths of the open slots, top of the stack is the next node in preorder.
    std::vector<std::uint32_t> pending{0};
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (pending.empty()) {
            throw corrupt_data("tree payload: tree closes before bit " + std::to_string(i));
        }
        const std::uint32_t d = pending.back();
        pending.pop_back();
        if (bits[i]) {
            pending.push_back(d + 1);
            pending.push_back(d + 1);
        } else {
            visit(d);
        }
    }
    if (pending.size() != 1) {
        throw corrupt_data("tree payload: " + std::to_string(pending.size()) +
                           " open slots at end, expected exactly 1");
    }
    visit(pending.back());
}

strict_tree_shape decode_tree(const tree_payload& payload) {
    std::vector<std::uint32_t> depths;
    depths.reserve(payload.leaf_count());
    for_each_leaf_depth(payload, [&depths](std::uint32_t d) { depths.push_back(d); });
    return strict_tree_shape(std::move(depths));
}

tree_payload compress_t2(const probability_distribution& p) {
    return encode_tree(mehlhorn_tree(p));
}

dyadic_distribution implied_distribution(const strict_tree_shape& shape) {
    return dyadic_distribution(shape);
}

}  // namespace pdz
