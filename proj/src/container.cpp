#include "pdz/container.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <optional>
#include <cstring>
#include <string>

#include "pdz/error.hpp"

namespace pdz {

namespace {

constexpr std::array<std::uint8_t, 4> magic = {'P', 'D', 'Z', '1'};
constexpr std::size_t crc_bytes = 4;

template <typename... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <typename... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void put_le(std::vector<std::uint8_t>& out, std::uint64_t value, std::size_t bytes) {
    for (std::size_t i = 0; i < bytes; ++i) {
        out.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
    }
}

std::uint32_t crc_of(std::span<const std::uint8_t> bytes) {
    return static_cast<std::uint32_t>(
        crc32(crc32(0L, Z_NULL, 0), bytes.data(), static_cast<uInt>(bytes.size())));
}

class reader {
public:
    explicit reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::uint64_t le(std::size_t count, const char* what) {
        if (pos_ + count > bytes_.size()) {
            throw corrupt_data(std::string("container truncated while reading ") + what);
        }
        std::uint64_t v = 0;
        for (std::size_t i = 0; i < count; ++i) {
            v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
        }
        pos_ += count;
        return v;
    }

    std::span<const std::uint8_t> take(std::size_t count, const char* what) {
        if (pos_ + count > bytes_.size()) {
            throw corrupt_data(std::string("container truncated while reading ") + what);
        }
        auto out = bytes_.subspan(pos_, count);
        pos_ += count;
        return out;
    }

    [[nodiscard]] std::size_t position() const { return pos_; }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

std::string_view method_name(method m) {
    switch (m) {
        case method::tree:
            return "tree";
        case method::refine:
            return "refine";
        case method::sparse:
            return "sparse";
        case method::sparse_queryable:
            return "sparse-queryable";
    }
    return "unknown";
}

method parse_method(std::string_view name) {
    if (name == "tree") return method::tree;
    if (name == "refine") return method::refine;
    if (name == "sparse") return method::sparse;
    if (name == "sparse-queryable") return method::sparse_queryable;
    throw invalid_argument("unknown method '" + std::string(name) + "'");
}

method method_of(const compressed_distribution& c) {
    return std::visit(overloaded{
                          [](const tree_payload&) { return method::tree; },
                          [](const refine_payload&) { return method::refine; },
                          [](const sparse_payload&) { return method::sparse; },
                          [](const sparse_query_table&) { return method::sparse_queryable; },
                      },
                      c);
}

std::size_t symbol_count(const compressed_distribution& c) {
    return std::visit(overloaded{
                          [](const tree_payload& p) { return p.leaf_count(); },
                          [](const refine_payload& p) { return p.leaf_count(); },
                          [](const sparse_payload& p) { return p.n; },
                          [](const sparse_query_table& p) { return p.n(); },
                      },
                      c);
}

std::size_t payload_bits(const compressed_distribution& c) {
    return std::visit(overloaded{
                          [](const tree_payload& p) { return p.bits.size(); },
                          [](const refine_payload& p) { return p.bit_length(); },
                          [](const sparse_payload& p) { return p.bit_length(); },
                          [](const sparse_query_table& p) { return p.bit_length(); },
                      },
                      c);
}

std::size_t expected_payload_bits(const compressed_distribution& c) {
    const std::size_t n = symbol_count(c);
    return std::visit(overloaded{
                          [n](const tree_payload&) { return 2 * n - 2; },
                          [n](const refine_payload& p) { return p.k * n - 2; },
                          [n](const sparse_payload& p) { return p.t() * (sparse_index_width(n)); },
                          [n](const sparse_query_table& p) {
                              return p.t() * (sparse_index_width(n) + sparse_rank_width(n, p.c()));
                          },
                      },
                      c);
}

std::size_t container_overhead_bytes(method m) {
    std::size_t params = 0;
    switch (m) {
        case method::tree:
            break;
        case method::refine:
            params = 2;
            break;
        case method::sparse:
        case method::sparse_queryable:
            params = 24;
            break;
    }
    return magic.size() + 1 + 8 + params + 8 + crc_bytes;
}

std::vector<std::uint8_t> encode_container(const compressed_distribution& c) {
    std::vector<std::uint8_t> out(magic.begin(), magic.end());
    const method m = method_of(c);
    out.push_back(static_cast<std::uint8_t>(m));
    put_le(out, symbol_count(c), 8);
    bit_string payload;
    std::visit(overloaded{
                   [&](const tree_payload& p) { payload = p.bits; },
                   [&](const refine_payload& p) {
                       put_le(out, p.k, 2);
                       payload = p.serialize();
                   },
                   [&](const sparse_payload& p) {
                       put_le(out, p.c.num(), 8);
                       put_le(out, p.c.den(), 8);
                       put_le(out, p.t(), 8);
                       payload = p.serialize();
                   },
                   [&](const sparse_query_table& p) {
                       put_le(out, p.c().num(), 8);
                       put_le(out, p.c().den(), 8);
                       put_le(out, p.t(), 8);
                       payload = p.serialize();
                   },
               },
               c);
    put_le(out, payload.size(), 8);
    const auto bytes = payload.to_bytes();
    out.insert(out.end(), bytes.begin(), bytes.end());
    put_le(out, crc_of(out), crc_bytes);
    return out;
}

compressed_distribution decode_container(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < magic.size() || !std::equal(magic.begin(), magic.end(), bytes.begin())) {
        throw corrupt_data("container: bad magic");
    }
    if (bytes.size() < magic.size() + 1 + crc_bytes) {
        throw corrupt_data("container truncated");
    }
    const auto body = bytes.first(bytes.size() - crc_bytes);
    std::uint32_t stored_crc = 0;
    for (std::size_t i = 0; i < crc_bytes; ++i) {
        stored_crc |= static_cast<std::uint32_t>(bytes[body.size() + i]) << (8 * i);
    }

    reader in(body);
    in.take(magic.size(), "magic");
    const auto raw_method = static_cast<std::uint8_t>(in.le(1, "method"));
    if (raw_method < 0x01 || raw_method > 0x04) {
        throw corrupt_data("container: unknown method byte " + std::to_string(raw_method));
    }
    const auto m = static_cast<method>(raw_method);
    const std::uint64_t n = in.le(8, "n");
    if (n == 0) {
        throw corrupt_data("container: n is zero");
    }
    std::uint64_t k = 0;
    std::uint64_t c_num = 0;
    std::uint64_t c_den = 0;
    std::uint64_t t = 0;
    if (m == method::refine) {
        k = in.le(2, "k");
    } else if (m == method::sparse || m == method::sparse_queryable) {
        c_num = in.le(8, "c numerator");
        c_den = in.le(8, "c denominator");
        t = in.le(8, "t");
    }
    const std::uint64_t bit_count = in.le(8, "payload length");
    // Cheap plausibility bound before allocating anything.
    if (bit_count > 8 * static_cast<std::uint64_t>(body.size())) {
        throw corrupt_data("container: payload length exceeds file size");
    }
    const std::size_t payload_bytes = (bit_count + 7) / 8;
    if (in.position() + payload_bytes != body.size()) {
        throw corrupt_data("container: file size does not match payload length");
    }
    if (crc_of(body) != stored_crc) {
        throw corrupt_data("container: checksum mismatch");
    }
    const auto packed = in.take(payload_bytes, "payload");
    if (bit_count % 8 != 0 && (packed.back() & (0xFFU >> (bit_count % 8))) != 0) {
        throw corrupt_data("container: non-zero padding bits");
    }
    const bit_string bits = bit_string::from_bytes(packed, bit_count);

    compressed_distribution result = tree_payload{};
    switch (m) {
        case method::tree: {
            if (bit_count != 2 * n - 2) {
                throw corrupt_data("container: tree payload must be 2n-2 bits");
            }
            tree_payload p{bits};
            (void)decode_tree(p);
            result = std::move(p);
            break;
        }
        case method::refine: {
            if (k < 2) {
                throw corrupt_data("container: refine k must be at least 2");
            }
            if (bit_count != k * n - 2) {
                throw corrupt_data("container: refine payload must be kn-2 bits");
            }
            refine_payload p = refine_payload::deserialize(bits, n, static_cast<unsigned>(k));
            (void)decode_tree(p.base);
            result = std::move(p);
            break;
        }
        case method::sparse:
        case method::sparse_queryable: {
            std::optional<sparse_parameter> c;
            try {
                c.emplace(c_num, c_den);
            } catch (const invalid_argument& e) {
                throw corrupt_data(std::string("container: ") + e.what());
            }
            if (t > sparse_heavy_capacity(n, *c)) {
                throw corrupt_data("container: more heavy symbols than the threshold allows");
            }
            if (m == method::sparse) {
                result = sparse_payload::deserialize(bits, n, *c, t);
            } else {
                result = sparse_query_table::deserialize(bits, n, *c, t);
            }
            break;
        }
    }
    if (payload_bits(result) != expected_payload_bits(result)) {
        throw corrupt_data("container: payload size invariant violated");
    }
    return result;
}

}  // namespace pdz
