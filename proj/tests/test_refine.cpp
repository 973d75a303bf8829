#include <doctest.h>

#include <cmath>
#include <random>

#include "pdz/error.hpp"
#include "pdz/mehlhorn.hpp"
#include "pdz/refine.hpp"
#include "pdz/treecode.hpp"
#include "reference/reference.hpp"
#include "support/generators.hpp"

using namespace pdz;

namespace {

probability_distribution dist(std::initializer_list<rational> v) { return probability_distribution(v); }

}  // namespace

TEST_CASE("refine_step examples") {
    const auto p = dist({rational(7, 10), rational(3, 10)});
    const auto step = refine_step(p, dist({rational(1, 4), rational(3, 4)}), 3);
    CHECK(step.marks.to_string() == "10");
    CHECK(step.normalizer == rational(5, 4));
    CHECK(step.q == dist({rational(2, 5), rational(3, 5)}));
    CHECK(max_ratio(p, step.q) == rational(7, 4));
    CHECK(max_ratio(p, step.q) < 3);

    const auto same = dist({rational(1, 3), rational(1, 6), rational(1, 2)});
    for (unsigned k = 3; k <= 9; ++k) {
        const auto s = refine_step(same, same, k);
        CHECK(s.marks.to_string() == "000");
        CHECK(s.normalizer == 1);
        CHECK(s.q == same);
    }

    const auto half = dist({rational(1, 2), rational(1, 2)});
    const auto s91 = refine_step(dist({rational(9, 10), rational(1, 10)}), half, 3);
    CHECK(s91.marks.to_string() == "00");
    CHECK(s91.q == half);
}

TEST_CASE("refine_step marks at exactly the threshold") {
    // p/q = 3/2 = 1 + 2^-1 for k = 4.
    const auto p = dist({rational(3, 4), rational(1, 4)});
    const auto q = dist({rational(1, 2), rational(1, 2)});
    CHECK(refine_step(p, q, 4).marks.to_string() == "10");
}

TEST_CASE("refine_step preconditions") {
    const auto half = dist({rational(1, 2), rational(1, 2)});
    CHECK_THROWS_AS((void)refine_step(half, half, 2), invalid_argument);
    CHECK_THROWS_AS((void)refine_step(half, dist({rational(1)}), 3), invalid_argument);
    CHECK_THROWS_AS((void)refine_step(half, dist({rational(1), rational(0)}), 3), invalid_argument);
    // Ratio 3.2 is fine for k = 3 (bound 4) but not for k = 4 (bound 3).
    const auto p = dist({rational(4, 5), rational(1, 5)});
    const auto q = dist({rational(1, 4), rational(3, 4)});
    CHECK_NOTHROW((void)refine_step(p, q, 3));
    CHECK_THROWS_AS((void)refine_step(p, q, 4), invalid_argument);
}

TEST_CASE("compress_refined examples") {
    const auto p = dist({rational(1, 2), rational(1, 4), rational(1, 4)});
    const auto k2 = compress_refined(p, 2);
    CHECK(k2.levels.empty());
    CHECK(k2.base == compress_t2(p));
    CHECK(k2.bit_length() == 4);

    const auto r91 = compress_refined(dist({rational(9, 10), rational(1, 10)}), 3);
    CHECK(r91.base.bits.to_string() == "10");
    REQUIRE(r91.levels.size() == 1);
    CHECK(r91.levels[0].to_string() == "00");
    CHECK(r91.bit_length() == 4);
    CHECK(r91.serialize().to_string() == "1000");

    // Independent pipeline: per-bit trie depths, then the mark rule by hand.
    const std::vector<rational> pv{rational(7, 10), rational(3, 10)};
    const auto d = reference::naive_mehlhorn(pv);
    std::string marks;
    for (std::size_t i = 0; i < pv.size(); ++i) {
        rational q(1);
        mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), d[i]);
        marks.push_back(pv[i] / q >= 2 ? '1' : '0');
    }
    const auto r73 = compress_refined(probability_distribution(pv), 3);
    CHECK(r73.bit_length() == 4);
    CHECK(r73.levels[0].to_string() == marks);
    CHECK(max_ratio(probability_distribution(pv), decompress_refined(r73)) < 3);

    CHECK_THROWS_AS((void)compress_refined(p, 1), invalid_argument);
    CHECK_THROWS_AS((void)compress_refined(dist({rational(1), rational(0)}), 3), invalid_argument);
}

TEST_CASE("decompress_refined examples") {
    CHECK(decompress_refined(compress_refined(dist({rational(1, 2), rational(1, 4), rational(1, 4)}), 2)) ==
          dist({rational(1, 2), rational(1, 4), rational(1, 4)}));
    refine_payload marked{3, tree_payload{bit_string::from_string("10")}, {bit_string::from_string("10")}};
    CHECK(decompress_refined(marked) == dist({rational(2, 3), rational(1, 3)}));
    refine_payload plain{3, tree_payload{bit_string::from_string("10")}, {bit_string::from_string("00")}};
    CHECK(decompress_refined(plain) == dist({rational(1, 2), rational(1, 2)}));

    refine_payload short_level{3, tree_payload{bit_string::from_string("10")}, {bit_string::from_string("1")}};
    CHECK_THROWS_AS((void)decompress_refined(short_level), corrupt_data);
    refine_payload missing{4, tree_payload{bit_string::from_string("10")}, {bit_string::from_string("10")}};
    CHECK_THROWS_AS((void)decompress_refined(missing), corrupt_data);
    refine_payload bad_base{3, tree_payload{bit_string::from_string("00")}, {bit_string::from_string("000")}};
    CHECK_THROWS_AS((void)decompress_refined(bad_base), corrupt_data);
}

TEST_CASE("bounds") {
    CHECK(refine_ratio_bound(2) == 4);
    CHECK(refine_ratio_bound(3) == 3);
    CHECK(refine_ratio_bound(5) == rational(9, 4));
    CHECK(refine_normalizer_bound(3) == rational(3, 2));
    CHECK(refine_normalizer_bound(5) == rational(9, 5));
}

TEST_CASE("property: every level keeps its ratio and normalizer bounds") {
    std::mt19937_64 rng(41);
    for (int iter = 0; iter < 120; ++iter) {
        const std::size_t n = 1 + rng() % 120;
        const auto p = testing::random_distribution(rng, n, static_cast<testing::shape>(iter % 4));
        auto q = implied_distribution(mehlhorn_tree(p)).to_distribution();
        for (unsigned k = 3; k <= 12; ++k) {
            const auto step = refine_step(p, q, k);
            CHECK(step.normalizer <= refine_normalizer_bound(k));
            CHECK(step.normalizer >= 1);
            q = step.q;
            CHECK(max_ratio(p, q) < refine_ratio_bound(k));
        }
    }
}

TEST_CASE("property: compress and decompress over k = 2..12") {
    std::mt19937_64 rng(42);
    for (int iter = 0; iter < 60; ++iter) {
        const std::size_t n = 1 + rng() % 150;
        const auto p = testing::random_distribution(rng, n, static_cast<testing::shape>(iter % 4));
        for (unsigned k = 2; k <= 12; ++k) {
            const auto payload = compress_refined(p, k);
            CHECK(payload.bit_length() == k * n - 2);
            CHECK(payload.serialize().size() == k * n - 2);
            CHECK(refine_payload::deserialize(payload.serialize(), n, k) == payload);
            const auto q = decompress_refined(payload);
            CHECK(max_ratio(p, q) < refine_ratio_bound(k));
            CHECK(relative_entropy(p, q) < std::log2(refine_ratio_bound(k).get_d()) + 1e-9);

            const refined_lookup lookup(payload);
            const auto shape = decode_tree(payload.base);
            rational total = 0;
            for (std::size_t i = 0; i < n; ++i) {
                const rational v = lookup.probability(i, shape.depth(i));
                CHECK(v == q[i]);
                total += v;
            }
            CHECK(total == 1);
            CHECK(lookup.normalizers().size() == k - 2);
        }
    }
}
