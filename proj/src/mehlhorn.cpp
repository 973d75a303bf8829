#include "pdz/mehlhorn.hpp"

#include "pdz/error.hpp"

namespace pdz {

namespace {

std::size_t bit_length(const integer& v) {
    return sgn(v) == 0 ? 0 : mpz_sizeinbase(v.get_mpz_t(), 2);
}

integer shift_right(const integer& v, std::size_t count) {
    integer out;
    mpz_fdiv_q_2exp(out.get_mpz_t(), v.get_mpz_t(), count);
    return out;
}

// Length of the common prefix of two neighbouring codewords, checking that
// left < right and that neither is a prefix of the other.
std::size_t neighbour_lcp(const codeword& left, const codeword& right, std::size_t index) {
    const std::size_t common = std::min(left.length, right.length);
    const integer a = shift_right(left.value, left.length - common);
    const integer b = shift_right(right.value, right.length - common);
    if (a == b) {
        throw invalid_argument("codewords " + std::to_string(index) + " and " + std::to_string(index + 1) +
                               " are not prefix-free");
    }
    if (a > b) {
        throw invalid_argument("codewords " + std::to_string(index) + " and " + std::to_string(index + 1) +
                               " are out of order");
    }
    return common - bit_length(integer(a ^ b));
}

}  // namespace

codeword codeword::from_string(std::string_view bits) {
    codeword out;
    for (char ch : bits) {
        if (ch != '0' && ch != '1') {
            throw parse_error("codeword: unexpected character");
        }
        out.value = out.value * 2 + (ch == '1' ? 1 : 0);
        ++out.length;
    }
    return out;
}

std::string codeword::to_string() const {
    std::string out(length, '0');
    for (std::size_t j = 0; j < length; ++j) {
        if (mpz_tstbit(value.get_mpz_t(), length - 1 - j) != 0) {
            out[j] = '1';
        }
    }
    return out;
}

std::vector<rational> midpoints(const probability_distribution& p) {
    std::vector<rational> out;
    out.reserve(p.size());
    rational prefix = 0;
    for (const auto& pi : p.entries()) {
        if (sgn(pi) == 0) {
            throw invalid_argument("midpoints: zero probability (smooth the distribution first)");
        }
        out.push_back(prefix + pi / 2);
        prefix += pi;
    }
    return out;
}

std::size_t codeword_length(const rational& p) {
    if (sgn(p) <= 0 || p > 1) {
        throw invalid_argument("codeword length: probability must lie in (0, 1]");
    }
    // Smallest L with 2^L * num >= 2 * den.
    const integer& num = p.get_num();
    const integer target = p.get_den() * 2;
    std::size_t len = bit_length(target) - bit_length(num);
    integer scaled = num << static_cast<mp_bitcnt_t>(len);
    while (scaled < target) {
        scaled <<= 1;
        ++len;
    }
    while (len > 0 && (scaled >> 1) >= target) {
        scaled >>= 1;
        --len;
    }
    return len;
}

codeword codeword_of(const rational& midpoint, const rational& p) {
    if (sgn(midpoint) < 0 || midpoint >= 1) {
        throw invalid_argument("codeword: midpoint must lie in [0, 1)");
    }
    codeword out;
    out.length = codeword_length(p);
    integer scaled = midpoint.get_num() << static_cast<mp_bitcnt_t>(out.length);
    mpz_fdiv_q(out.value.get_mpz_t(), scaled.get_mpz_t(), midpoint.get_den_mpz_t());
    return out;
}

strict_tree_shape contract_to_strict(std::span<const codeword> codewords) {
    const std::size_t n = codewords.size();
    if (n == 0) {
        throw invalid_argument("contract: empty code");
    }
    if (n == 1) {
        return strict_tree_shape({0});
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (bit_length(codewords[i].value) > codewords[i].length || sgn(codewords[i].value) < 0) {
            throw invalid_argument("contract: codeword value wider than its length");
        }
    }
    std::vector<std::size_t> lcp(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        lcp[i] = neighbour_lcp(codewords[i], codewords[i + 1], i + 1);
    }

    // The branching ancestors of leaf i split into those left of it (neighbour
    // pairs j < i whose LCP is smaller than every LCP between j and i) and the
    // mirror set on the right; both are monotone stacks.
    std::vector<std::uint32_t> depth(n, 0);
    std::vector<std::size_t> stack;
    for (std::size_t i = 1; i < n; ++i) {
        while (!stack.empty() && stack.back() >= lcp[i - 1]) {
            stack.pop_back();
        }
        stack.push_back(lcp[i - 1]);
        depth[i] = static_cast<std::uint32_t>(stack.size());
    }
    stack.clear();
    for (std::size_t i = n - 1; i-- > 0;) {
        while (!stack.empty() && stack.back() >= lcp[i]) {
            stack.pop_back();
        }
        stack.push_back(lcp[i]);
        depth[i] += static_cast<std::uint32_t>(stack.size());
    }
    return strict_tree_shape(std::move(depth));
}

strict_tree_shape mehlhorn_tree(const probability_distribution& p) {
    if (!p.strictly_positive()) {
        throw invalid_argument("mehlhorn tree: zero probability (smooth the distribution first)");
    }
    if (p.size() == 1) {
        return strict_tree_shape({0});
    }
    const std::vector<rational> mids = midpoints(p);
    std::vector<codeword> code;
    code.reserve(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        code.push_back(codeword_of(mids[i], p[i]));
    }
    return contract_to_strict(code);
}

}  // namespace pdz
