#include "pdz/succinct.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cassert>
#include <string>

#include "pdz/error.hpp"
#include "pdz/mehlhorn.hpp"

namespace pdz {

namespace {

// Per-byte excess summaries; bit j of the byte is symbol j of the chunk.
struct byte_tables {
    std::array<std::int8_t, 256> total{};
    std::array<std::int8_t, 256> forward_min{};   // min prefix sum over lengths 1..8
    std::array<std::int8_t, 256> backward_min{};  // min of -(suffix sum) over lengths 1..8
};

constexpr byte_tables make_byte_tables() {
    byte_tables t;
    for (int x = 0; x < 256; ++x) {
        int run = 0;
        int lo = 8;
        for (int j = 0; j < 8; ++j) {
            run += ((x >> j) & 1) != 0 ? 1 : -1;
            lo = std::min(lo, run);
        }
        t.total[x] = static_cast<std::int8_t>(run);
        t.forward_min[x] = static_cast<std::int8_t>(lo);
        int back = 0;
        int back_lo = 8;
        for (int j = 7; j >= 0; --j) {
            back -= ((x >> j) & 1) != 0 ? 1 : -1;
            back_lo = std::min(back_lo, back);
        }
        t.backward_min[x] = static_cast<std::int8_t>(back_lo);
    }
    return t;
}

constexpr byte_tables tables = make_byte_tables();

std::size_t ceil_log2(std::size_t x) {
    return x <= 1 ? 0 : static_cast<std::size_t>(std::bit_width(x - 1));
}

}  // namespace

succinct_tree_index succinct_tree_index::from_shape(const strict_tree_shape& shape) {
    return succinct_tree_index(shape.preorder());
}

succinct_tree_index succinct_tree_index::from_payload(const tree_payload& payload) {
    bit_string flags = payload.bits;
    flags.push_back(false);
    return succinct_tree_index(std::move(flags));
}

succinct_tree_index::succinct_tree_index(bit_string flags) : flags_(std::move(flags)) {
    symbols_ = flags_.size();
    if (symbols_ % 2 == 0) {
        throw corrupt_data("succinct index: node count must be odd");
    }
    leaves_ = (symbols_ + 1) / 2;
    const std::size_t log_n = std::max<std::size_t>(1, ceil_log2(2 * leaves_));
    block_ = log_n * log_n;
    group_ = 4 * block_;

    const std::size_t blocks = (symbols_ + block_ - 1) / block_;
    groups_ = (symbols_ + group_ - 1) / group_;
    rank_samples_ = detail::packed_array(blocks, bits_for(leaves_ - 1));

    // One pass: validate the flag sequence, fill rank samples and group minima.
    std::vector<std::int64_t> group_minima(groups_, static_cast<std::int64_t>(symbols_));
    std::int64_t e = 0;
    std::size_t ones = 0;
    for (std::size_t s = 0; s < symbols_; ++s) {
        if (s % block_ == 0) {
            rank_samples_.set(s / block_, ones);
        }
        if (flag(s)) {
            ++ones;
            ++e;
        } else {
            --e;
        }
        if (e < 0 && s + 1 != symbols_) {
            throw corrupt_data("succinct index: tree closes early at position " + std::to_string(s));
        }
        auto& gm = group_minima[s / group_];
        gm = std::min(gm, e);
    }
    if (e != -1 || ones != leaves_ - 1) {
        throw corrupt_data("succinct index: flags do not describe a strict binary tree");
    }

    min_tree_ = detail::packed_array(2 * groups_ - 1, bits_for(leaves_));
    // Euler layout: node for [l, r) has left child at node + 1 and right
    // child at node + 2 (mid - l).
    auto build = [&](auto&& self, std::size_t node, std::size_t l, std::size_t r) -> std::int64_t {
        std::int64_t value;
        if (r - l == 1) {
            value = group_minima[l];
        } else {
            const std::size_t mid = l + (r - l) / 2;
            value = std::min(self(self, node + 1, l, mid), self(self, node + 2 * (mid - l), mid, r));
        }
        min_tree_.set(node, static_cast<std::uint64_t>(value + 1));
        return value;
    };
    build(build, 0, 0, groups_);
}

std::int64_t succinct_tree_index::group_min(std::size_t node) const {
    return static_cast<std::int64_t>(min_tree_.get(node)) - 1;
}

std::size_t succinct_tree_index::rank1(std::size_t i) const {
    if (i >= symbols_) {
        return leaves_ - 1;
    }
    const std::size_t b = i / block_;
    std::size_t count = rank_samples_.get(b);
    std::size_t pos = b * block_;
    const auto words = flags_.words();
    while (pos < i) {
        const std::size_t w = pos >> 6;
        const unsigned offset = pos & 63;
        const std::size_t take = std::min<std::size_t>(64 - offset, i - pos);
        std::uint64_t bits = words[w] >> offset;
        if (take < 64) {
            bits &= (std::uint64_t{1} << take) - 1;
        }
        count += static_cast<std::size_t>(std::popcount(bits));
        pos += take;
    }
    return count;
}

std::int64_t succinct_tree_index::excess(std::size_t i) const {
    return 2 * static_cast<std::int64_t>(rank1(i)) - static_cast<std::int64_t>(i);
}

std::optional<std::size_t> succinct_tree_index::first_group_at_most(std::size_t from, std::int64_t target) const {
    auto find = [&](auto&& self, std::size_t node, std::size_t l, std::size_t r) -> std::optional<std::size_t> {
        if (r <= from || group_min(node) > target) {
            return std::nullopt;
        }
        if (r - l == 1) {
            return l;
        }
        const std::size_t mid = l + (r - l) / 2;
        if (auto hit = self(self, node + 1, l, mid)) {
            return hit;
        }
        return self(self, node + 2 * (mid - l), mid, r);
    };
    return from >= groups_ ? std::nullopt : find(find, 0, 0, groups_);
}

std::optional<std::size_t> succinct_tree_index::last_group_at_most(std::size_t to, std::int64_t target) const {
    // Last group index < to.
    auto find = [&](auto&& self, std::size_t node, std::size_t l, std::size_t r) -> std::optional<std::size_t> {
        if (l >= to || group_min(node) > target) {
            return std::nullopt;
        }
        if (r - l == 1) {
            return l;
        }
        const std::size_t mid = l + (r - l) / 2;
        if (auto hit = self(self, node + 2 * (mid - l), mid, r)) {
            return hit;
        }
        return self(self, node + 1, l, mid);
    };
    return to == 0 ? std::nullopt : find(find, 0, 0, groups_);
}

std::optional<std::size_t> succinct_tree_index::forward_search(std::size_t v, std::int64_t target) const {
    const auto words = flags_.words();
    // Scans symbols [s, end) starting from E(s) = cur; returns i with E(i) <= target.
    auto scan = [&](std::size_t s, std::size_t end, std::int64_t cur) -> std::optional<std::size_t> {
        while (s < end) {
            if ((s & 7) == 0 && s + 8 <= end) {
                const auto byte = static_cast<std::uint8_t>(words[s >> 6] >> (s & 63));
                if (cur + tables.forward_min[byte] > target) {
                    cur += tables.total[byte];
                    s += 8;
                    continue;
                }
            }
            cur += flag(s) ? 1 : -1;
            ++s;
            if (cur <= target) {
                return s;
            }
        }
        return std::nullopt;
    };

    const std::size_t g = v / group_;
    if (auto hit = scan(v, std::min(symbols_, (g + 1) * group_), excess(v))) {
        return hit;
    }
    const auto next = first_group_at_most(g + 1, target);
    if (!next) {
        return std::nullopt;
    }
    const std::size_t start = *next * group_;
    auto hit = scan(start, std::min(symbols_, start + group_), excess(start));
    assert(hit.has_value());
    return hit;
}

std::optional<std::size_t> succinct_tree_index::backward_search(std::size_t v, std::int64_t target) const {
    if (v == 0) {
        return std::nullopt;
    }
    const auto words = flags_.words();
    // Walks positions end-1 down to begin, given cur = E(end); returns the
    // first j reached with E(j) <= target.
    auto scan = [&](std::size_t end, std::size_t begin, std::int64_t cur) -> std::optional<std::size_t> {
        std::size_t s = end;
        while (s > begin) {
            if ((s & 7) == 0 && s >= begin + 8) {
                const std::size_t a = s - 8;
                const auto byte = static_cast<std::uint8_t>(words[a >> 6] >> (a & 63));
                if (cur + tables.backward_min[byte] > target) {
                    cur -= tables.total[byte];
                    s = a;
                    continue;
                }
            }
            --s;
            cur -= flag(s) ? 1 : -1;
            if (cur <= target) {
                return s;
            }
        }
        return std::nullopt;
    };

    // Group minima cover E(i) for i in (g * group, (g + 1) * group].
    const std::size_t g = (v - 1) / group_;
    if (auto hit = scan(v, g * group_, excess(v))) {
        return hit;
    }
    if (const auto prev = last_group_at_most(g, target)) {
        const std::size_t end = std::min(symbols_, (*prev + 1) * group_);
        const std::int64_t at_end = excess(end);
        if (at_end <= target) {
            return end;
        }
        auto hit = scan(end, *prev * group_, at_end);
        assert(hit.has_value());
        return hit;
    }
    if (target >= 0) {
        return std::size_t{0};
    }
    return std::nullopt;
}

std::size_t succinct_tree_index::subtree_end(std::size_t v) const {
    if (!flag(v)) {
        return v;
    }
    const auto stop = forward_search(v, excess(v) - 1);
    assert(stop.has_value());
    return *stop - 1;
}

bool succinct_tree_index::is_leaf(node_handle h) const {
    if (h.position >= symbols_) {
        throw invalid_argument("succinct index: node " + std::to_string(h.position) + " out of range");
    }
    return !flag(h.position);
}

node_handle succinct_tree_index::left_child(node_handle h) const {
    if (is_leaf(h)) {
        throw invalid_argument("succinct index: leaf has no children");
    }
    return {h.position + 1};
}

node_handle succinct_tree_index::right_child(node_handle h) const {
    if (is_leaf(h)) {
        throw invalid_argument("succinct index: leaf has no children");
    }
    return {subtree_end(h.position + 1) + 1};
}

node_handle succinct_tree_index::parent(node_handle h) const {
    if (h.position >= symbols_) {
        throw invalid_argument("succinct index: node " + std::to_string(h.position) + " out of range");
    }
    if (h.position == 0) {
        throw invalid_argument("succinct index: root has no parent");
    }
    if (flag(h.position - 1)) {
        return {h.position - 1};
    }
    const auto p = backward_search(h.position, excess(h.position));
    assert(p.has_value());
    return {*p};
}

std::size_t succinct_tree_index::num_descendants(node_handle h) const {
    if (h.position >= symbols_) {
        throw invalid_argument("succinct index: node " + std::to_string(h.position) + " out of range");
    }
    return subtree_end(h.position) - h.position + 1;
}

std::uint32_t succinct_tree_index::leaf_depth(std::size_t symbol, std::size_t* steps) const {
    if (symbol < 1 || symbol > leaves_) {
        throw invalid_argument("succinct index: symbol " + std::to_string(symbol) + " out of range 1.." +
                               std::to_string(leaves_));
    }
    std::size_t v = 0;
    std::size_t remaining = symbol;
    std::uint32_t depth = 0;
    while (flag(v)) {
        const std::size_t left = v + 1;
        const std::size_t left_end = subtree_end(left);
        const std::size_t nodes = left_end - left + 1;
        assert(nodes % 2 == 1);
        const std::size_t left_leaves = (nodes + 1) / 2;
        if (remaining <= left_leaves) {
            v = left;
        } else {
            remaining -= left_leaves;
            v = left_end + 1;
        }
        ++depth;
    }
    if (steps != nullptr) {
        *steps = depth;
    }
    return depth;
}

rational succinct_tree_index::query_prob(std::size_t symbol, std::size_t* steps) const {
    return dyadic(leaf_depth(symbol, steps));
}

succinct_tree_index build_index(const probability_distribution& p) {
    if (!p.strictly_positive()) {
        throw invalid_argument("build index: zero probability (use build_smoothed)");
    }
    return succinct_tree_index::from_shape(mehlhorn_tree(p));
}

probability_distribution smooth(const probability_distribution& p, const rational& epsilon) {
    if (sgn(epsilon) <= 0) {
        throw invalid_argument("smooth: epsilon must be positive");
    }
    const rational quarter = epsilon / 4;
    const rational scale = 1 + quarter;
    const rational floor = quarter / (scale * static_cast<unsigned long>(p.size()));
    std::vector<rational> out;
    out.reserve(p.size());
    for (const auto& pi : p.entries()) {
        out.push_back(pi / scale + floor);
    }
    return probability_distribution(std::move(out));
}

succinct_tree_index build_smoothed(const probability_distribution& p, const rational& epsilon) {
    return build_index(smooth(p, epsilon));
}

}  // namespace pdz
