#include "pdz/bits.hpp"

#include <bit>
#include <cctype>

#include "pdz/error.hpp"

namespace pdz {

bit_string bit_string::from_string(std::string_view text) {
    bit_string out;
    for (char ch : text) {
        if (ch == '0' || ch == '1') {
            out.push_back(ch == '1');
        } else if (!std::isspace(static_cast<unsigned char>(ch))) {
            throw parse_error(std::string("bit string: unexpected character '") + ch + "'");
        }
    }
    return out;
}

bit_string bit_string::from_bytes(std::span<const std::uint8_t> bytes, std::size_t bit_count) {
    if (bit_count > bytes.size() * 8) {
        throw corrupt_data("bit string: not enough bytes for requested bit count");
    }
    bit_string out;
    out.words_.reserve((bit_count + 63) / 64);
    for (std::size_t i = 0; i < bit_count; ++i) {
        out.push_back((bytes[i >> 3] >> (7 - (i & 7))) & 1U);
    }
    return out;
}

void bit_string::push_back(bool bit) {
    if ((size_ & 63) == 0) {
        words_.push_back(0);
    }
    if (bit) {
        words_.back() |= std::uint64_t{1} << (size_ & 63);
    }
    ++size_;
}

void bit_string::append(const bit_string& other) {
    for (std::size_t i = 0; i < other.size(); ++i) {
        push_back(other[i]);
    }
}

void bit_string::append_uint(std::uint64_t value, unsigned width) {
    for (unsigned b = width; b-- > 0;) {
        push_back(b < 64 && ((value >> b) & 1U));
    }
}

std::uint64_t bit_string::read_uint(std::size_t pos, unsigned width) const {
    if (width > 64 || pos + width > size_) {
        throw corrupt_data("bit string: read past end");
    }
    std::uint64_t value = 0;
    for (unsigned b = 0; b < width; ++b) {
        value = (value << 1) | static_cast<std::uint64_t>((*this)[pos + b]);
    }
    return value;
}

bit_string bit_string::slice(std::size_t pos, std::size_t count) const {
    if (pos + count > size_) {
        throw corrupt_data("bit string: slice past end");
    }
    bit_string out;
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back((*this)[pos + i]);
    }
    return out;
}

std::vector<std::uint8_t> bit_string::to_bytes() const {
    std::vector<std::uint8_t> out((size_ + 7) / 8, 0);
    for (std::size_t i = 0; i < size_; ++i) {
        if ((*this)[i]) {
            out[i >> 3] |= static_cast<std::uint8_t>(0x80U >> (i & 7));
        }
    }
    return out;
}

std::string bit_string::to_string() const {
    std::string out;
    out.reserve(size_);
    for (std::size_t i = 0; i < size_; ++i) {
        out.push_back((*this)[i] ? '1' : '0');
    }
    return out;
}

unsigned bits_for(std::uint64_t max_value) {
    return max_value == 0 ? 1U : static_cast<unsigned>(std::bit_width(max_value));
}

}  // namespace pdz
