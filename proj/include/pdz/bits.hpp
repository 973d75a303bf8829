#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pdz {

// Growable bit sequence. Bit 0 is the first bit written; when packed to
// bytes the first bit lands in the most significant bit of byte 0.
class bit_string {
public:
    bit_string() = default;

    // Parses "0"/"1" characters; whitespace is skipped.
    static bit_string from_string(std::string_view text);
    // Unpacks the first bit_count bits of MSB-first bytes.
    static bit_string from_bytes(std::span<const std::uint8_t> bytes, std::size_t bit_count);

    void push_back(bool bit);
    void append(const bit_string& other);
    // Writes the low `width` bits of value, most significant first.
    void append_uint(std::uint64_t value, unsigned width);

    [[nodiscard]] bool operator[](std::size_t i) const {
        return (words_[i >> 6] >> (i & 63)) & 1U;
    }
    [[nodiscard]] std::size_t size() const { return size_; }
    [[nodiscard]] bool empty() const { return size_ == 0; }

    // Reads `width` bits starting at `pos` as an unsigned integer, MSB first.
    [[nodiscard]] std::uint64_t read_uint(std::size_t pos, unsigned width) const;
    [[nodiscard]] bit_string slice(std::size_t pos, std::size_t count) const;

    // MSB-first packing, zero padded to a byte boundary.
    [[nodiscard]] std::vector<std::uint8_t> to_bytes() const;
    [[nodiscard]] std::string to_string() const;

    // Raw storage: bit i is bit (i % 64) of word i / 64; unused high bits are 0.
    [[nodiscard]] std::span<const std::uint64_t> words() const { return words_; }

    friend bool operator==(const bit_string&, const bit_string&) = default;

private:
    std::vector<std::uint64_t> words_;
    std::size_t size_ = 0;
};

// Number of bits needed to write values in [0, max_value]; at least 1.
[[nodiscard]] unsigned bits_for(std::uint64_t max_value);

}  // namespace pdz
