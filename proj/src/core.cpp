#include "pdz/core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "pdz/error.hpp"

namespace pdz {

namespace {

rational sum_of(std::span<const rational> values) {
    rational total = 0;
    for (const auto& v : values) {
        total += v;
    }
    return total;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

bool all_digits(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

integer pow10(unsigned long exponent) {
    integer out;
    mpz_ui_pow_ui(out.get_mpz_t(), 10, exponent);
    return out;
}

rational parse_decimal(std::string_view token) {
    bool negative = false;
    if (!token.empty() && (token.front() == '+' || token.front() == '-')) {
        negative = token.front() == '-';
        token.remove_prefix(1);
    }
    long exponent = 0;
    if (auto e = token.find_first_of("eE"); e != std::string_view::npos) {
        std::string_view exp_part = token.substr(e + 1);
        token = token.substr(0, e);
        bool exp_negative = false;
        if (!exp_part.empty() && (exp_part.front() == '+' || exp_part.front() == '-')) {
            exp_negative = exp_part.front() == '-';
            exp_part.remove_prefix(1);
        }
        if (exp_part.empty() || exp_part.size() > 6 || !all_digits(exp_part)) {
            throw parse_error("bad exponent");
        }
        exponent = std::stol(std::string(exp_part));
        if (exp_negative) {
            exponent = -exponent;
        }
    }
    std::string_view int_part = token;
    std::string_view frac_part;
    if (auto dot = token.find('.'); dot != std::string_view::npos) {
        int_part = token.substr(0, dot);
        frac_part = token.substr(dot + 1);
    }
    if ((int_part.empty() && frac_part.empty()) || !all_digits(int_part) || !all_digits(frac_part)) {
        throw parse_error("not a number");
    }
    integer mantissa(std::string(int_part) + std::string(frac_part), 10);
    exponent -= static_cast<long>(frac_part.size());
    rational value(mantissa);
    if (exponent >= 0) {
        value *= pow10(static_cast<unsigned long>(exponent));
    } else {
        value /= pow10(static_cast<unsigned long>(-exponent));
    }
    value.canonicalize();
    return negative ? rational(-value) : value;
}

}  // namespace

probability_distribution::probability_distribution(std::vector<rational> entries)
    : entries_(std::move(entries)) {
    if (entries_.empty()) {
        throw invalid_argument("distribution must have at least one entry");
    }
    for (auto& p : entries_) {
        if (sgn(p.get_den()) == 0) {
            throw invalid_argument("distribution entry has a zero denominator");
        }
        p.canonicalize();
        if (sgn(p) < 0) {
            throw invalid_argument("distribution entries must be non-negative");
        }
    }
    if (sum_of(entries_) != 1) {
        throw invalid_argument("distribution entries must sum to exactly 1");
    }
}

probability_distribution probability_distribution::from_weights(std::vector<rational> weights) {
    if (weights.empty()) {
        throw invalid_argument("no weights given");
    }
    for (auto& w : weights) {
        if (sgn(w.get_den()) == 0) {
            throw invalid_argument("weight has a zero denominator");
        }
        w.canonicalize();
        if (sgn(w) < 0) {
            throw invalid_argument("negative weight");
        }
    }
    const rational total = sum_of(weights);
    if (sgn(total) == 0) {
        throw invalid_argument("weights sum to zero");
    }
    for (auto& w : weights) {
        w /= total;
    }
    return probability_distribution(std::move(weights), normalized_tag{});
}

bool probability_distribution::strictly_positive() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const rational& p) { return sgn(p) > 0; });
}

std::vector<double> probability_distribution::to_doubles() const {
    std::vector<double> out;
    out.reserve(entries_.size());
    for (const auto& p : entries_) {
        out.push_back(p.get_d());
    }
    return out;
}

rational parse_rational(std::string_view token) {
    token = trim(token);
    if (token.empty()) {
        throw parse_error("empty token");
    }
    if (auto slash = token.find('/'); slash != std::string_view::npos) {
        std::string_view num = trim(token.substr(0, slash));
        std::string_view den = trim(token.substr(slash + 1));
        bool negative = false;
        if (!num.empty() && (num.front() == '-' || num.front() == '+')) {
            negative = num.front() == '-';
            num.remove_prefix(1);
        }
        if (num.empty() || den.empty() || !all_digits(num) || !all_digits(den)) {
            throw parse_error("bad fraction '" + std::string(token) + "'");
        }
        integer d(std::string(den), 10);
        if (d == 0) {
            throw parse_error("zero denominator in '" + std::string(token) + "'");
        }
        rational value(integer(std::string(num), 10), d);
        value.canonicalize();
        return negative ? rational(-value) : value;
    }
    try {
        return parse_decimal(token);
    } catch (const parse_error&) {
        throw parse_error("unparsable value '" + std::string(token) + "'");
    }
}

probability_distribution parse_distribution(std::string_view text) {
    std::vector<rational> weights;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto eol = text.find('\n');
        std::string_view line = trim(text.substr(0, eol));
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        rational w;
        try {
            w = parse_rational(line);
        } catch (const parse_error& e) {
            throw parse_error("line " + std::to_string(line_no) + ": " + e.what());
        }
        if (sgn(w) < 0) {
            throw parse_error("line " + std::to_string(line_no) + ": negative value");
        }
        weights.push_back(std::move(w));
    }
    if (weights.empty()) {
        throw parse_error("no values in input");
    }
    try {
        return probability_distribution::from_weights(std::move(weights));
    } catch (const invalid_argument& e) {
        throw parse_error(e.what());
    }
}

probability_distribution read_distribution(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw error("cannot open " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_distribution(buffer.str());
}

double log2_of(const rational& value) {
    if (sgn(value) <= 0) {
        throw invalid_argument("log2 of a non-positive value");
    }
    long num_exp = 0;
    long den_exp = 0;
    const double num = mpz_get_d_2exp(&num_exp, value.get_num_mpz_t());
    const double den = mpz_get_d_2exp(&den_exp, value.get_den_mpz_t());
    return std::log2(num / den) + static_cast<double>(num_exp - den_exp);
}

double entropy(const probability_distribution& p) {
    double h = 0.0;
    for (const auto& pi : p.entries()) {
        if (sgn(pi) > 0) {
            h -= pi.get_d() * log2_of(pi);
        }
    }
    return h;
}

double relative_entropy(const probability_distribution& p, const probability_distribution& q) {
    if (p.size() != q.size()) {
        throw invalid_argument("relative entropy: length mismatch");
    }
    double d = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (sgn(p[i]) == 0) {
            continue;
        }
        if (sgn(q[i]) == 0) {
            throw infinite_divergence("relative entropy: p_" + std::to_string(i + 1) + " > 0 but q_" +
                                      std::to_string(i + 1) + " = 0");
        }
        d += p[i].get_d() * log2_of(rational(p[i] / q[i]));
    }
    return d;
}

double relative_entropy(const probability_distribution& p, std::span<const double> q) {
    if (p.size() != q.size()) {
        throw invalid_argument("relative entropy: length mismatch");
    }
    double d = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (sgn(p[i]) == 0) {
            continue;
        }
        if (!(q[i] > 0.0)) {
            throw infinite_divergence("relative entropy: p_" + std::to_string(i + 1) + " > 0 but q_" +
                                      std::to_string(i + 1) + " = 0");
        }
        d += p[i].get_d() * (log2_of(p[i]) - std::log2(q[i]));
    }
    return d;
}

rational max_ratio(const probability_distribution& p, const probability_distribution& q) {
    if (p.size() != q.size()) {
        throw invalid_argument("max ratio: length mismatch");
    }
    rational best = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (sgn(p[i]) == 0) {
            continue;
        }
        if (sgn(q[i]) == 0) {
            throw infinite_divergence("max ratio: p_" + std::to_string(i + 1) + " > 0 but q_" +
                                      std::to_string(i + 1) + " = 0");
        }
        rational r = p[i] / q[i];
        if (r > best) {
            best = std::move(r);
        }
    }
    return best;
}

std::string format_exact(const rational& value) {
    integer den = value.get_den();
    const auto twos = static_cast<unsigned long>(mpz_scan1(den.get_mpz_t(), 0));
    mpz_fdiv_q_2exp(den.get_mpz_t(), den.get_mpz_t(), twos);
    unsigned long fives = 0;
    while (mpz_divisible_ui_p(den.get_mpz_t(), 5) != 0) {
        mpz_divexact_ui(den.get_mpz_t(), den.get_mpz_t(), 5);
        ++fives;
    }
    if (den != 1) {
        return value.get_str();
    }
    const unsigned long digits = std::max(twos, fives);
    integer scaled = value.get_num() * pow10(digits) / value.get_den();
    const bool negative = sgn(scaled) < 0;
    std::string body = integer(abs(scaled)).get_str();
    if (digits > 0) {
        if (body.size() <= digits) {
            body.insert(0, digits + 1 - body.size(), '0');
        }
        body.insert(body.size() - digits, ".");
    }
    return negative ? "-" + body : body;
}

}  // namespace pdz
