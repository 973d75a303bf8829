#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pdz {

using integer = mpz_class;
using rational = mpq_class;

// A finite distribution p_1..p_n held as exact rationals. The entries are
// non-negative and sum to exactly 1; construction enforces both.
class probability_distribution {
public:
    // Takes ownership of entries that must already sum to 1.
    explicit probability_distribution(std::vector<rational> entries);

    // Normalizes non-negative weights by their exact total.
    [[nodiscard]] static probability_distribution from_weights(std::vector<rational> weights);

    [[nodiscard]] std::size_t size() const { return entries_.size(); }
    // 0-based access.
    [[nodiscard]] const rational& operator[](std::size_t i) const { return entries_[i]; }
    [[nodiscard]] std::span<const rational> entries() const { return entries_; }
    [[nodiscard]] bool strictly_positive() const;
    [[nodiscard]] std::vector<double> to_doubles() const;

    friend bool operator==(const probability_distribution&, const probability_distribution&) = default;

private:
    struct normalized_tag {};
    probability_distribution(std::vector<rational> entries, normalized_tag) : entries_(std::move(entries)) {}

    std::vector<rational> entries_;
};

// One value per line (integer, decimal, scientific or "a/b"); blank lines and
// lines starting with '#' are skipped. Values are weights, normalized exactly.
[[nodiscard]] probability_distribution parse_distribution(std::string_view text);
[[nodiscard]] probability_distribution read_distribution(const std::filesystem::path& path);

// Exact value of a single numeric token ("3", "0.25", "1e-3", "2/3").
[[nodiscard]] rational parse_rational(std::string_view token);

// H(P) in bits; zero entries contribute 0.
[[nodiscard]] double entropy(const probability_distribution& p);

// D(P||Q) in bits. Throws infinite_divergence when some p_i > 0 has q_i = 0.
[[nodiscard]] double relative_entropy(const probability_distribution& p, const probability_distribution& q);
// Same measure against a floating-point Q (used by the sparse codec).
[[nodiscard]] double relative_entropy(const probability_distribution& p, std::span<const double> q);

// max over p_i > 0 of p_i / q_i, exactly.
[[nodiscard]] rational max_ratio(const probability_distribution& p, const probability_distribution& q);

// log2 of a positive rational without overflowing or underflowing doubles.
[[nodiscard]] double log2_of(const rational& value);

// Decimal expansion when the value terminates (denominator 2^a 5^b),
// otherwise "num/den". Either form is accepted by parse_rational.
[[nodiscard]] std::string format_exact(const rational& value);

}  // namespace pdz
