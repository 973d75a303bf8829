#include "pdz/sparse.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "pdz/error.hpp"

namespace pdz {

namespace {

constexpr std::uint64_t max_parameter_terms = std::uint64_t{1} << 16;

integer power(const integer& base, std::uint64_t exponent) {
    integer out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exponent);
    return out;
}

integer to_integer(std::uint64_t v) {
    integer out;
    mpz_import(out.get_mpz_t(), 1, -1, sizeof v, 0, 0, &v);
    return out;
}

// Heavy values share these two helpers so decompress_sparse and the query
// table produce identical doubles.
double heavy_mass(std::size_t t) {
    double total = 0.0;
    for (std::size_t j = 1; j <= t; ++j) {
        total += heavy_probability(j);
    }
    return total;
}

struct sparse_values {
    double heavy_scale;
    double light;
};

sparse_values values_for(std::size_t n, std::size_t t) {
    const double mass = heavy_mass(t);
    if (t >= n) {
        // No light symbols: rescale the heavy values so they sum to 1.
        return {1.0 / mass, 0.0};
    }
    return {1.0, (1.0 - mass) / static_cast<double>(n - t)};
}

}  // namespace

sparse_parameter::sparse_parameter(std::uint64_t num, std::uint64_t den) {
    if (den == 0) {
        throw invalid_argument("sparse: c has zero denominator");
    }
    const std::uint64_t g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
    if (num_ < den_) {
        throw invalid_argument("sparse: c must be at least 1");
    }
    if (num_ + den_ > max_parameter_terms) {
        throw invalid_argument("sparse: c = " + std::to_string(num_) + "/" + std::to_string(den_) +
                               " has too large a numerator/denominator (sum must be <= 65536)");
    }
}

sparse_parameter sparse_parameter::parse(std::string_view text) {
    const rational c = parse_rational(text);
    if (c < 1) {
        throw invalid_argument("sparse: c must be at least 1");
    }
    if (!c.get_num().fits_ulong_p() || !c.get_den().fits_ulong_p()) {
        throw invalid_argument("sparse: c does not fit in 64-bit terms");
    }
    return sparse_parameter(c.get_num().get_ui(), c.get_den().get_ui());
}

unsigned sparse_index_width(std::uint64_t n) {
    return static_cast<unsigned>(std::bit_width(n));
}

unsigned sparse_rank_width(std::uint64_t n, const sparse_parameter& c) {
    if (n == 0) {
        throw invalid_argument("sparse: n must be positive");
    }
    // Largest u with 2^(u (a+b)) <= n^b, i.e. u (a+b) <= b log2 n.
    const std::uint64_t a = c.num();
    const std::uint64_t b = c.den();
    const integer nb = power(to_integer(n), b);
    const std::uint64_t log_floor = mpz_sizeinbase(nb.get_mpz_t(), 2) - 1;  // floor(b log2 n)
    return static_cast<unsigned>(log_floor / (a + b)) + 1;
}

std::uint64_t sparse_heavy_capacity(std::uint64_t n, const sparse_parameter& c) {
    if (n == 0) {
        throw invalid_argument("sparse: n must be positive");
    }
    // Largest m with m^(a+b) <= n^b.
    const std::uint64_t a = c.num();
    const std::uint64_t b = c.den();
    const integer nb = power(to_integer(n), b);
    auto fits = [&](std::uint64_t m) { return power(to_integer(m), a + b) <= nb; };
    const double estimate = std::pow(static_cast<double>(n), static_cast<double>(b) / static_cast<double>(a + b));
    std::uint64_t m = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(estimate));
    while (m > 1 && !fits(m)) {
        --m;
    }
    while (fits(m + 1)) {
        ++m;
    }
    return m;
}

bool is_heavy(const rational& p, std::uint64_t n, const sparse_parameter& c) {
    if (sgn(p) <= 0) {
        return false;
    }
    const std::uint64_t a = c.num();
    const std::uint64_t b = c.den();
    // p^(a+b) n^b >= 1; screen in floating point, settle close calls exactly.
    const double lp = log2_of(p);
    const double ln = std::log2(static_cast<double>(n));
    const double margin = 1e-9 * (1.0 + static_cast<double>(a + b) * std::abs(lp) + static_cast<double>(b) * ln);
    const double approx = static_cast<double>(a + b) * lp + static_cast<double>(b) * ln;
    if (approx > margin) {
        return true;
    }
    if (approx < -margin) {
        return false;
    }
    return power(p.get_num(), a + b) * power(to_integer(n), b) >= power(p.get_den(), a + b);
}

double heavy_probability(std::size_t rank) {
    const double pj = std::numbers::pi * static_cast<double>(rank);
    return 3.0 / (pj * pj);
}

bit_string sparse_payload::serialize() const {
    bit_string out;
    const unsigned width = sparse_index_width(n);
    for (std::size_t r : heavy) {
        out.append_uint(r - 1, width);
    }
    return out;
}

sparse_payload sparse_payload::deserialize(const bit_string& bits, std::size_t n, const sparse_parameter& c,
                                           std::size_t t) {
    const unsigned width = sparse_index_width(n);
    if (bits.size() != t * width) {
        throw corrupt_data("sparse payload: expected " + std::to_string(t * width) + " bits, found " +
                           std::to_string(bits.size()));
    }
    sparse_payload out;
    out.n = n;
    out.c = c;
    for (std::size_t j = 0; j < t; ++j) {
        out.heavy.push_back(static_cast<std::size_t>(bits.read_uint(j * width, width)) + 1);
    }
    out.validate();
    return out;
}

void sparse_payload::validate() const {
    if (n == 0) {
        throw corrupt_data("sparse payload: n must be positive");
    }
    if (heavy.size() > n) {
        throw corrupt_data("sparse payload: more heavy symbols than symbols");
    }
    std::vector<bool> seen(n, false);
    for (std::size_t r : heavy) {
        if (r < 1 || r > n) {
            throw corrupt_data("sparse payload: heavy index " + std::to_string(r) + " out of range");
        }
        if (seen[r - 1]) {
            throw corrupt_data("sparse payload: heavy index " + std::to_string(r) + " repeated");
        }
        seen[r - 1] = true;
    }
}

sparse_query_table::sparse_query_table(std::size_t n, sparse_parameter c, std::vector<entry> entries)
    : n_(n), c_(c), entries_(std::move(entries)) {
    if (n_ == 0 || entries_.size() > n_) {
        throw corrupt_data("sparse table: bad size");
    }
    std::vector<bool> rank_seen(entries_.size(), false);
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        const auto& e = entries_[k];
        if (e.symbol < 1 || e.symbol > n_) {
            throw corrupt_data("sparse table: symbol " + std::to_string(e.symbol) + " out of range");
        }
        if (k > 0 && entries_[k - 1].symbol >= e.symbol) {
            throw corrupt_data("sparse table: symbols not strictly increasing");
        }
        if (e.rank < 1 || e.rank > entries_.size() || rank_seen[e.rank - 1]) {
            throw corrupt_data("sparse table: ranks are not a permutation of 1..t");
        }
        rank_seen[e.rank - 1] = true;
    }
    const sparse_values v = values_for(n_, entries_.size());
    heavy_scale_ = v.heavy_scale;
    light_value_ = v.light;
}

std::size_t sparse_query_table::bit_length() const {
    return entries_.size() * (sparse_index_width(n_) + sparse_rank_width(n_, c_));
}

bit_string sparse_query_table::serialize() const {
    const unsigned iw = sparse_index_width(n_);
    const unsigned rw = sparse_rank_width(n_, c_);
    bit_string out;
    for (const auto& e : entries_) {
        out.append_uint(e.symbol - 1, iw);
        out.append_uint(e.rank - 1, rw);
    }
    return out;
}

sparse_query_table sparse_query_table::deserialize(const bit_string& bits, std::size_t n,
                                                   const sparse_parameter& c, std::size_t t) {
    const unsigned iw = sparse_index_width(n);
    const unsigned rw = sparse_rank_width(n, c);
    if (bits.size() != t * (iw + rw)) {
        throw corrupt_data("sparse table: expected " + std::to_string(t * (iw + rw)) + " bits, found " +
                           std::to_string(bits.size()));
    }
    std::vector<entry> entries;
    entries.reserve(t);
    for (std::size_t k = 0; k < t; ++k) {
        const std::size_t pos = k * (iw + rw);
        entries.push_back({static_cast<std::size_t>(bits.read_uint(pos, iw)) + 1,
                           static_cast<std::size_t>(bits.read_uint(pos + iw, rw)) + 1});
    }
    return sparse_query_table(n, c, std::move(entries));
}

double sparse_query_table::query(std::size_t symbol, std::size_t* comparisons) const {
    if (symbol < 1 || symbol > n_) {
        throw invalid_argument("sparse query: symbol " + std::to_string(symbol) + " out of range 1.." +
                               std::to_string(n_));
    }
    std::size_t probes = 0;
    std::size_t lo = 0;
    std::size_t hi = entries_.size();
    double result = light_value_;
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        ++probes;
        if (entries_[mid].symbol == symbol) {
            result = heavy_probability(entries_[mid].rank) * heavy_scale_;
            break;
        }
        if (entries_[mid].symbol < symbol) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    if (comparisons != nullptr) {
        *comparisons = probes;
    }
    return result;
}

sparse_payload select_heavy(const probability_distribution& p, const sparse_parameter& c) {
    sparse_payload out;
    out.n = p.size();
    out.c = c;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (is_heavy(p[i], p.size(), c)) {
            out.heavy.push_back(i + 1);
        }
    }
    std::sort(out.heavy.begin(), out.heavy.end(), [&p](std::size_t x, std::size_t y) {
        const int order = cmp(p[x - 1], p[y - 1]);
        return order != 0 ? order > 0 : x < y;
    });
    return out;
}

sparse_payload compress_sparse(const probability_distribution& p, const sparse_parameter& c) {
    return select_heavy(p, c);
}

std::vector<double> decompress_sparse(const sparse_payload& payload) {
    payload.validate();
    const sparse_values v = values_for(payload.n, payload.t());
    std::vector<double> q(payload.n, v.light);
    for (std::size_t j = 0; j < payload.heavy.size(); ++j) {
        q[payload.heavy[j] - 1] = heavy_probability(j + 1) * v.heavy_scale;
    }
    return q;
}

sparse_query_table build_query_table(const sparse_payload& payload) {
    payload.validate();
    std::vector<sparse_query_table::entry> entries;
    entries.reserve(payload.t());
    for (std::size_t j = 0; j < payload.heavy.size(); ++j) {
        entries.push_back({payload.heavy[j], j + 1});
    }
    std::sort(entries.begin(), entries.end(), [](const auto& x, const auto& y) { return x.symbol < y.symbol; });
    return sparse_query_table(payload.n, payload.c, std::move(entries));
}

double query_sparse(const sparse_query_table& table, std::size_t symbol, std::size_t* comparisons) {
    return table.query(symbol, comparisons);
}

}  // namespace pdz
