#include <doctest.h>

#include <random>

#include "pdz/error.hpp"
#include "pdz/mehlhorn.hpp"
#include "reference/reference.hpp"
#include "support/generators.hpp"

using namespace pdz;

namespace {

probability_distribution dist(std::initializer_list<rational> v) { return probability_distribution(v); }

std::vector<std::uint32_t> depths_of(const strict_tree_shape& s) { return {s.depths().begin(), s.depths().end()}; }

strict_tree_shape contract(std::initializer_list<const char*> words) {
    std::vector<codeword> cw;
    for (const char* w : words) cw.push_back(codeword::from_string(w));
    return contract_to_strict(cw);
}

using depths = std::vector<std::uint32_t>;

rational pow2_neg(std::uint32_t e) {
    rational r(1);
    mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), e);
    return r;
}

}  // namespace

TEST_CASE("midpoints examples") {
    CHECK(midpoints(dist({rational(1, 4), rational(1, 4), rational(1, 4), rational(1, 4)})) ==
          std::vector<rational>{rational(1, 8), rational(3, 8), rational(5, 8), rational(7, 8)});
    CHECK(midpoints(dist({rational(1)})) == std::vector<rational>{rational(1, 2)});
    CHECK(midpoints(dist({rational(1, 2), rational(1, 4), rational(1, 4)})) ==
          std::vector<rational>{rational(1, 4), rational(5, 8), rational(7, 8)});
    CHECK_THROWS_AS((void)midpoints(dist({rational(1), rational(0)})), invalid_argument);
}

TEST_CASE("codeword examples") {
    CHECK(codeword_of(rational(1, 8), rational(1, 4)).to_string() == "001");
    CHECK(codeword_of(rational(1, 4), rational(1, 2)).to_string() == "01");
    CHECK(codeword_of(rational(19, 20), rational(1, 10)).to_string() == "11110");
    CHECK(codeword_length(rational(1)) == 1);
    CHECK(codeword_length(rational(1, 10)) == 5);
    CHECK(codeword_length(rational(1, 16)) == 5);
    CHECK(codeword_length(rational(1, 17)) == 6);
}

TEST_CASE("contract_to_strict examples") {
    CHECK(depths_of(contract({"001", "011", "101", "111"})) == depths{2, 2, 2, 2});
    CHECK(depths_of(contract({"01", "11110"})) == depths{1, 1});
    CHECK(depths_of(contract({"01", "101", "111"})) == depths{1, 2, 2});
    CHECK(depths_of(contract({"0110"})) == depths{0});
}

TEST_CASE("contract_to_strict rejects bad codes") {
    CHECK_THROWS_AS((void)contract({"01", "011"}), invalid_argument);
    CHECK_THROWS_AS((void)contract({"11", "01"}), invalid_argument);
    CHECK_THROWS_AS((void)contract({"01", "01"}), invalid_argument);
    CHECK_THROWS_AS((void)contract({}), invalid_argument);
}

TEST_CASE("mehlhorn_tree examples") {
    CHECK(depths_of(mehlhorn_tree(dist({rational(1, 4), rational(1, 4), rational(1, 4), rational(1, 4)}))) ==
          depths{2, 2, 2, 2});
    CHECK(depths_of(mehlhorn_tree(dist({rational(1, 2), rational(1, 4), rational(1, 4)}))) == depths{1, 2, 2});
    CHECK(depths_of(mehlhorn_tree(dist({rational(9, 10), rational(1, 10)}))) == depths{1, 1});
    CHECK(depths_of(mehlhorn_tree(dist({rational(1)}))) == depths{0});
    CHECK_THROWS_AS((void)mehlhorn_tree(dist({rational(1), rational(0)})), invalid_argument);
}

TEST_CASE("strict_tree_shape validation") {
    CHECK_NOTHROW(strict_tree_shape(depths{1, 2, 2}));
    CHECK_NOTHROW(strict_tree_shape(depths{0}));
    CHECK_THROWS_AS(strict_tree_shape(depths{2, 1, 2}), invalid_argument);
    CHECK_THROWS_AS(strict_tree_shape(depths{1, 2}), invalid_argument);
    CHECK_THROWS_AS(strict_tree_shape(depths{1, 1, 1}), invalid_argument);
    CHECK_THROWS_AS(strict_tree_shape(depths{}), invalid_argument);
    CHECK(strict_tree_shape(depths{1, 2, 2}).preorder().to_string() == "10100");
}

TEST_CASE("property: depth bound, Kraft equality and agreement with the per-bit trie") {
    std::mt19937_64 rng(21);
    for (int iter = 0; iter < 400; ++iter) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 80)(rng);
        const auto p = testing::random_distribution(rng, n, static_cast<testing::shape>(iter % 4));
        const auto tree = mehlhorn_tree(p);
        REQUIRE(tree.leaf_count() == n);
        rational kraft = 0;
        for (std::size_t i = 0; i < n; ++i) {
            rational scaled = p[i];
            mpq_mul_2exp(scaled.get_mpq_t(), scaled.get_mpq_t(), tree.depth(i));
            CHECK(scaled < 4);
            kraft += pow2_neg(tree.depth(i));
        }
        CHECK(kraft == 1);

        const std::vector<rational> pv(p.entries().begin(), p.entries().end());
        CHECK(depths_of(tree) == reference::naive_mehlhorn(pv));

        if (n > 1) {
            const auto mids = midpoints(p);
            for (std::size_t i = 0; i < n; ++i) {
                const auto cw = codeword_of(mids[i], p[i]);
                CHECK(cw.to_string() == reference::naive_codeword(mids[i], p[i]));
                CHECK(tree.depth(i) <= cw.length);
            }
        }
    }
}

TEST_CASE("property: midpoints match the quadratic oracle and increase") {
    std::mt19937_64 rng(22);
    for (int iter = 0; iter < 100; ++iter) {
        const auto p = testing::random_distribution(rng, 1 + rng() % 60, static_cast<testing::shape>(iter % 4));
        const auto s = midpoints(p);
        CHECK(s == reference::naive_midpoints({p.entries().begin(), p.entries().end()}));
        for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i - 1] < s[i]);
        CHECK(s.back() < 1);
    }
}

TEST_CASE("very small probabilities give long codewords without blowing up") {
    rational tiny(1);
    mpq_div_2exp(tiny.get_mpq_t(), tiny.get_mpq_t(), 3000);
    const auto p = probability_distribution::from_weights({rational(1), tiny, rational(1), tiny});
    const auto tree = mehlhorn_tree(p);
    CHECK(codeword_length(p[1]) == 3003);
    for (std::size_t i = 0; i < 4; ++i) CHECK(tree.depth(i) <= codeword_length(p[i]));
    CHECK(depths_of(tree) == reference::naive_mehlhorn({p.entries().begin(), p.entries().end()}));
}
