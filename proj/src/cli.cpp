#include "pdz/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <numbers>
#include <ostream>
#include <sstream>

#include "pdz/error.hpp"
#include "pdz/refine.hpp"
#include "pdz/sparse.hpp"
#include "pdz/succinct.hpp"
#include "pdz/treecode.hpp"

namespace pdz::cli {

namespace {

// A usage problem detected after CLI11 has accepted the arguments.
class usage_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw error("cannot open " + path.string() + " for writing");
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw error("write to " + path.string() + " failed");
    }
}

std::string format_double(double v, int digits) {
    std::ostringstream s;
    s << std::setprecision(digits) << v;
    return s.str();
}

std::string describe_parameters(const compressed_distribution& c) {
    if (const auto* r = std::get_if<refine_payload>(&c)) {
        return "k=" + std::to_string(r->k);
    }
    if (const auto* s = std::get_if<sparse_payload>(&c)) {
        return "c=" + std::to_string(s->c.num()) + "/" + std::to_string(s->c.den()) + " t=" + std::to_string(s->t());
    }
    if (const auto* q = std::get_if<sparse_query_table>(&c)) {
        return "c=" + std::to_string(q->c().num()) + "/" + std::to_string(q->c().den()) +
               " t=" + std::to_string(q->t());
    }
    return "none";
}

sparse_payload payload_of(const sparse_query_table& table) {
    sparse_payload p;
    p.n = table.n();
    p.c = table.c();
    p.heavy.resize(table.t());
    for (const auto& e : table.entries()) {
        p.heavy[e.rank - 1] = e.symbol;
    }
    return p;
}

struct compress_options {
    std::string method_name = "tree";
    std::optional<unsigned> k;
    std::optional<std::string> c;
    std::optional<std::string> epsilon;
    std::string input;
    std::string output;
};

int do_compress(const compress_options& o, std::ostream& out) {
    const method m = parse_method(o.method_name);
    const bool tree_based = m == method::tree || m == method::refine;
    if (m == method::refine && !o.k) {
        throw usage_error("--k is required for --method refine");
    }
    if (o.k && m != method::refine) {
        throw usage_error("--k only applies to --method refine");
    }
    if (o.k && *o.k < 2) {
        throw usage_error("--k must be at least 2");
    }
    if (!tree_based && !o.c) {
        throw usage_error("--c is required for sparse methods");
    }
    if (o.c && tree_based) {
        throw usage_error("--c only applies to sparse methods");
    }
    if (o.epsilon && !tree_based) {
        throw usage_error("--epsilon only applies to tree and refine");
    }
    std::optional<rational> epsilon;
    if (o.epsilon) {
        try {
            epsilon = parse_rational(*o.epsilon);
        } catch (const parse_error& e) {
            throw usage_error(std::string("--epsilon: ") + e.what());
        }
        if (sgn(*epsilon) <= 0) {
            throw usage_error("--epsilon must be positive");
        }
    }
    std::optional<sparse_parameter> c;
    if (o.c) {
        try {
            c = sparse_parameter::parse(*o.c);
        } catch (const error& e) {
            throw usage_error(std::string("--c: ") + e.what());
        }
    }

    probability_distribution p = read_distribution(o.input);
    if (tree_based) {
        if (epsilon) {
            p = smooth(p, *epsilon);
        } else if (!p.strictly_positive()) {
            throw invalid_argument("input has zero probabilities; pass --epsilon to smooth them");
        }
    }
    compressed_distribution result = tree_payload{};
    switch (m) {
        case method::tree:
            result = compress_t2(p);
            break;
        case method::refine:
            result = compress_refined(p, *o.k);
            break;
        case method::sparse:
            result = compress_sparse(p, *c);
            break;
        case method::sparse_queryable:
            result = build_query_table(compress_sparse(p, *c));
            break;
    }
    const auto bytes = encode_container(result);
    write_file(o.output, bytes);
    out << "method: " << method_name(m) << '\n'
        << "n: " << symbol_count(result) << '\n'
        << "parameters: " << describe_parameters(result) << '\n'
        << "payload_bits: " << payload_bits(result) << '\n'
        << "container_bytes: " << bytes.size() << '\n';
    return exit_ok;
}

int do_decompress(const std::string& input, const std::string& output, int digits, std::ostream& out) {
    if (digits < 1 || digits > 40) {
        throw usage_error("--digits must be between 1 and 40");
    }
    const decoded_distribution q = decode(read_container(input));
    std::ostringstream text;
    std::size_t count = 0;
    if (q.exact) {
        for (const auto& v : q.exact->entries()) {
            text << format_exact(v) << '\n';
        }
        count = q.exact->size();
    } else {
        for (double v : q.approximate) {
            text << format_double(v, digits) << '\n';
        }
        count = q.approximate.size();
    }
    const std::string s = text.str();
    write_file(output, std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
    out << "wrote " << count << " probabilities to " << output << '\n';
    return exit_ok;
}

int do_query(const std::string& input, std::size_t symbol, std::ostream& out) {
    const compressed_distribution c = read_container(input);
    const std::size_t n = symbol_count(c);
    if (symbol < 1 || symbol > n) {
        throw usage_error("--index must be between 1 and " + std::to_string(n));
    }
    if (const auto* t = std::get_if<tree_payload>(&c)) {
        const auto index = succinct_tree_index::from_payload(*t);
        out << format_exact(index.query_prob(symbol)) << '\n';
    } else if (const auto* r = std::get_if<refine_payload>(&c)) {
        const auto index = succinct_tree_index::from_payload(r->base);
        const refined_lookup lookup(*r);
        out << format_exact(lookup.probability(symbol - 1, index.leaf_depth(symbol))) << '\n';
    } else if (const auto* s = std::get_if<sparse_payload>(&c)) {
        out << format_double(build_query_table(*s).query(symbol), 17) << '\n';
    } else {
        out << format_double(std::get<sparse_query_table>(c).query(symbol), 17) << '\n';
    }
    return exit_ok;
}

void print_stats(const stats_report& r, std::ostream& out) {
    const char* rel = r.divergence_bound_strict ? "<" : "<=";
    out << "method: " << method_name(r.kind) << '\n'
        << "n: " << r.n << '\n'
        << "entropy_bits: " << format_double(r.entropy, 12) << '\n'
        << "relative_entropy_bits: " << format_double(r.relative_entropy, 12) << "  bound: " << rel << ' '
        << format_double(r.divergence_bound, 12) << '\n';
    out << "max_ratio: ";
    if (r.max_ratio) {
        out << r.max_ratio->get_str() << " (" << format_double(r.max_ratio->get_d(), 12) << ")  bound: < "
            << r.ratio_bound->get_str() << '\n';
    } else {
        out << format_double(r.max_ratio_approx, 12) << "  bound: none\n";
    }
    out << "payload_bits: " << r.payload_bits << "  expected: " << r.expected_payload_bits << '\n'
        << "container_bytes: " << r.container_bytes << "  header_and_checksum_bytes: "
        << container_overhead_bytes(r.kind) << '\n'
        << "within_bounds: " << (r.within_bounds() ? "yes" : "no") << '\n';
}

int do_info(const std::string& input, std::ostream& out) {
    const auto bytes = read_file(input);
    const compressed_distribution c = decode_container(bytes);
    out << "method: " << method_name(method_of(c)) << '\n'
        << "n: " << symbol_count(c) << '\n'
        << "parameters: " << describe_parameters(c) << '\n'
        << "payload_bits: " << payload_bits(c) << "  expected: " << expected_payload_bits(c) << '\n'
        << "container_bytes: " << bytes.size() << '\n';
    return exit_ok;
}

}  // namespace

bool stats_report::within_bounds() const {
    const bool divergence_ok = divergence_bound_strict ? relative_entropy < divergence_bound + 1e-9
                                                       : relative_entropy <= divergence_bound + 1e-9;
    const bool ratio_ok = !max_ratio || !ratio_bound || *max_ratio < *ratio_bound;
    return divergence_ok && ratio_ok && payload_bits == expected_payload_bits;
}

decoded_distribution decode(const compressed_distribution& c) {
    decoded_distribution out;
    if (const auto* t = std::get_if<tree_payload>(&c)) {
        out.exact = implied_distribution(decode_tree(*t)).to_distribution();
    } else if (const auto* r = std::get_if<refine_payload>(&c)) {
        out.exact = decompress_refined(*r);
    } else if (const auto* s = std::get_if<sparse_payload>(&c)) {
        out.approximate = decompress_sparse(*s);
    } else {
        out.approximate = decompress_sparse(payload_of(std::get<sparse_query_table>(c)));
    }
    return out;
}

stats_report compute_stats(const probability_distribution& original, const compressed_distribution& c,
                           std::size_t container_bytes) {
    if (original.size() != symbol_count(c)) {
        throw invalid_argument("stats: original has " + std::to_string(original.size()) +
                               " symbols, compressed has " + std::to_string(symbol_count(c)));
    }
    stats_report r;
    r.kind = method_of(c);
    r.n = original.size();
    r.entropy = entropy(original);
    r.payload_bits = payload_bits(c);
    r.expected_payload_bits = expected_payload_bits(c);
    r.container_bytes = container_bytes;

    const decoded_distribution q = decode(c);
    if (q.exact) {
        r.relative_entropy = relative_entropy(original, *q.exact);
        r.max_ratio = max_ratio(original, *q.exact);
        r.max_ratio_approx = r.max_ratio->get_d();
        const unsigned k = r.kind == method::refine ? std::get<refine_payload>(c).k : 2;
        r.ratio_bound = refine_ratio_bound(k);
        r.divergence_bound = log2_of(*r.ratio_bound);
        r.divergence_bound_strict = true;
    } else {
        r.relative_entropy = relative_entropy(original, q.approximate);
        double worst = 0.0;
        for (std::size_t i = 0; i < original.size(); ++i) {
            if (sgn(original[i]) > 0) {
                worst = std::max(worst, original[i].get_d() / q.approximate[i]);
            }
        }
        r.max_ratio_approx = worst;
        const sparse_parameter& param = r.kind == method::sparse ? std::get<sparse_payload>(c).c
                                                                 : std::get<sparse_query_table>(c).c();
        r.divergence_bound = param.to_double() * r.entropy + std::log2(std::numbers::pi * std::numbers::pi / 3.0);
        r.divergence_bound_strict = false;
    }
    return r;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw error("cannot open " + path.string());
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

compressed_distribution read_container(const std::filesystem::path& path) {
    return decode_container(read_file(path));
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Lossy compression of probability distributions with relative-entropy guarantees", "pdz"};
    app.require_subcommand(1);

    compress_options copts;
    auto* compress = app.add_subcommand("compress", "Compress a distribution file into a container");
    compress->add_option("--method", copts.method_name, "tree | refine | sparse | sparse-queryable")
        ->check(CLI::IsMember({"tree", "refine", "sparse", "sparse-queryable"}));
    compress->add_option("--k", copts.k, "Refinement levels (refine, k >= 2)");
    compress->add_option("--c", copts.c, "Sparsity parameter NUM/DEN >= 1 (sparse methods)");
    compress->add_option("--epsilon", copts.epsilon, "Smooth with weight epsilon/4 first (tree methods)");
    compress->add_option("IN", copts.input, "Distribution text file")->required();
    compress->add_option("OUT", copts.output, "Container to write")->required();

    std::string d_in;
    std::string d_out;
    int digits = 17;
    auto* decompress = app.add_subcommand("decompress", "Write the reconstructed distribution as text");
    decompress->add_option("--digits", digits, "Significant digits for floating-point values");
    decompress->add_option("IN", d_in)->required();
    decompress->add_option("OUT", d_out)->required();

    std::string q_in;
    std::size_t q_index = 0;
    auto* query = app.add_subcommand("query", "Print q_i without decompressing");
    query->add_option("--index", q_index, "1-based symbol index")->required();
    query->add_option("IN", q_in)->required();

    std::string s_original;
    std::string s_compressed;
    auto* stats = app.add_subcommand("stats", "Compare a container against the original distribution");
    stats->add_option("--original", s_original)->required();
    stats->add_option("--compressed", s_compressed)->required();

    std::string i_in;
    auto* info = app.add_subcommand("info", "Describe a container");
    info->add_option("IN", i_in)->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return exit_usage;
    }

    try {
        if (compress->parsed()) {
            return do_compress(copts, out);
        }
        if (decompress->parsed()) {
            return do_decompress(d_in, d_out, digits, out);
        }
        if (query->parsed()) {
            return do_query(q_in, q_index, out);
        }
        if (stats->parsed()) {
            const auto bytes = read_file(s_compressed);
            print_stats(compute_stats(read_distribution(s_original), decode_container(bytes), bytes.size()), out);
            return exit_ok;
        }
        if (info->parsed()) {
            return do_info(i_in, out);
        }
    } catch (const usage_error& e) {
        err << "usage error: " << e.what() << '\n';
        return exit_usage;
    } catch (const error& e) {
        err << "error: " << e.what() << '\n';
        return exit_data;
    }
    return exit_usage;
}

}  // namespace pdz::cli
