#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "pdz/bits.hpp"
#include "pdz/core.hpp"

namespace pdz {

// The trade-off parameter c = num/den >= 1, kept in lowest terms.
// num + den is capped at 2^16 so exact threshold tests stay cheap.
class sparse_parameter {
public:
    sparse_parameter(std::uint64_t num, std::uint64_t den);
    // "3", "3/2" or a decimal like "1.5".
    [[nodiscard]] static sparse_parameter parse(std::string_view text);

    [[nodiscard]] std::uint64_t num() const { return num_; }
    [[nodiscard]] std::uint64_t den() const { return den_; }
    [[nodiscard]] rational value() const { return rational(num_, den_); }
    [[nodiscard]] double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    friend bool operator==(const sparse_parameter&, const sparse_parameter&) = default;

private:
    std::uint64_t num_;
    std::uint64_t den_;
};

// floor(log2 n) + 1: width of a stored symbol index.
[[nodiscard]] unsigned sparse_index_width(std::uint64_t n);
// floor(log2(n) / (c + 1)) + 1: width of a stored rank in the query table.
[[nodiscard]] unsigned sparse_rank_width(std::uint64_t n, const sparse_parameter& c);
// floor(n^(1/(c+1))): the most symbols that can reach the heavy threshold.
[[nodiscard]] std::uint64_t sparse_heavy_capacity(std::uint64_t n, const sparse_parameter& c);
// p >= n^(-1/(c+1)), decided exactly.
[[nodiscard]] bool is_heavy(const rational& p, std::uint64_t n, const sparse_parameter& c);

// 3 / (pi j)^2 for rank j >= 1.
[[nodiscard]] double heavy_probability(std::size_t rank);

// Indices (1-based) of the heavy symbols, most probable first.
struct sparse_payload {
    std::size_t n = 0;
    sparse_parameter c{1, 1};
    std::vector<std::size_t> heavy;

    [[nodiscard]] std::size_t t() const { return heavy.size(); }
    [[nodiscard]] std::size_t bit_length() const { return heavy.size() * sparse_index_width(n); }
    [[nodiscard]] bit_string serialize() const;
    [[nodiscard]] static sparse_payload deserialize(const bit_string& bits, std::size_t n, const sparse_parameter& c,
                                                    std::size_t t);
    // Throws corrupt_data on out-of-range or repeated indices.
    void validate() const;

    friend bool operator==(const sparse_payload&, const sparse_payload&) = default;
};

// (r_j, j) pairs ordered by r_j, answering q_i by binary search.
class sparse_query_table {
public:
    struct entry {
        std::size_t symbol;  // r_j, 1-based
        std::size_t rank;    // j, 1-based
        friend bool operator==(const entry&, const entry&) = default;
    };

    sparse_query_table(std::size_t n, sparse_parameter c, std::vector<entry> entries);

    [[nodiscard]] std::size_t n() const { return n_; }
    [[nodiscard]] const sparse_parameter& c() const { return c_; }
    [[nodiscard]] std::size_t t() const { return entries_.size(); }
    [[nodiscard]] const std::vector<entry>& entries() const { return entries_; }

    [[nodiscard]] std::size_t bit_length() const;
    [[nodiscard]] bit_string serialize() const;
    [[nodiscard]] static sparse_query_table deserialize(const bit_string& bits, std::size_t n,
                                                        const sparse_parameter& c, std::size_t t);

    // q for a symbol (1-based). `comparisons`, when given, receives the
    // number of table probes used.
    [[nodiscard]] double query(std::size_t symbol, std::size_t* comparisons = nullptr) const;

private:
    std::size_t n_;
    sparse_parameter c_;
    std::vector<entry> entries_;
    double heavy_scale_ = 1.0;
    double light_value_ = 0.0;
};

[[nodiscard]] sparse_payload select_heavy(const probability_distribution& p, const sparse_parameter& c);
[[nodiscard]] sparse_payload compress_sparse(const probability_distribution& p, const sparse_parameter& c);
// Floating point: the heavy values are irrational. Sums to 1 within 1e-12.
[[nodiscard]] std::vector<double> decompress_sparse(const sparse_payload& payload);
[[nodiscard]] sparse_query_table build_query_table(const sparse_payload& payload);
[[nodiscard]] double query_sparse(const sparse_query_table& table, std::size_t symbol,
                                  std::size_t* comparisons = nullptr);

}  // namespace pdz
