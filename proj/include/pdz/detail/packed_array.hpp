#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace pdz::detail {

// Fixed-width unsigned integers packed back to back into 64-bit words.
class packed_array {
public:
    packed_array() = default;
    packed_array(std::size_t size, unsigned width)
        : size_(size), width_(width), words_((size * width + 63) / 64 + 1, 0) {}

    [[nodiscard]] std::size_t size() const { return size_; }
    [[nodiscard]] unsigned width() const { return width_; }
    // Logical payload: size * width.
    [[nodiscard]] std::size_t bit_size() const { return size_ * width_; }

    [[nodiscard]] std::uint64_t get(std::size_t i) const {
        const std::size_t bit = i * width_;
        const std::size_t word = bit >> 6;
        const unsigned offset = bit & 63;
        std::uint64_t v = words_[word] >> offset;
        if (offset + width_ > 64) {
            v |= words_[word + 1] << (64 - offset);
        }
        return width_ == 64 ? v : v & ((std::uint64_t{1} << width_) - 1);
    }

    void set(std::size_t i, std::uint64_t value) {
        const std::size_t bit = i * width_;
        const std::size_t word = bit >> 6;
        const unsigned offset = bit & 63;
        const std::uint64_t mask = width_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width_) - 1;
        value &= mask;
        words_[word] = (words_[word] & ~(mask << offset)) | (value << offset);
        if (offset + width_ > 64) {
            const unsigned spill = offset + width_ - 64;
            const std::uint64_t high_mask = (std::uint64_t{1} << spill) - 1;
            words_[word + 1] = (words_[word + 1] & ~high_mask) | (value >> (64 - offset));
        }
    }

private:
    std::size_t size_ = 0;
    unsigned width_ = 1;
    std::vector<std::uint64_t> words_;
};

}  // namespace pdz::detail
