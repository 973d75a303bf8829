#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "pdz/refine.hpp"
#include "pdz/sparse.hpp"
#include "pdz/treecode.hpp"

namespace pdz {

enum class method : std::uint8_t {
    tree = 0x01,
    refine = 0x02,
    sparse = 0x03,
    sparse_queryable = 0x04,
};

[[nodiscard]] std::string_view method_name(method m);
// Accepts the CLI spellings: tree, refine, sparse, sparse-queryable.
[[nodiscard]] method parse_method(std::string_view name);

// Any of the four compressed forms.
using compressed_distribution = std::variant<tree_payload, refine_payload, sparse_payload, sparse_query_table>;

[[nodiscard]] method method_of(const compressed_distribution& c);
[[nodiscard]] std::size_t symbol_count(const compressed_distribution& c);
[[nodiscard]] std::size_t payload_bits(const compressed_distribution& c);
// 2n-2, kn-2, t(floor(log n)+1) or t(floor(log n)+floor(log n/(c+1))+2).
[[nodiscard]] std::size_t expected_payload_bits(const compressed_distribution& c);

// Byte layout, integers little-endian:
//   "PDZ1" | method:u8 | n:u64 | params | payload_bits:u64 | payload | crc32:u32
// params: refine k:u16; sparse forms c_num:u64 c_den:u64 t:u64; tree none.
// Payload bits are packed MSB first and zero padded; the CRC-32 covers every
// preceding byte.
[[nodiscard]] std::vector<std::uint8_t> encode_container(const compressed_distribution& c);
// Throws corrupt_data on any inconsistency.
[[nodiscard]] compressed_distribution decode_container(std::span<const std::uint8_t> bytes);
[[nodiscard]] std::size_t container_overhead_bytes(method m);

}  // namespace pdz
