#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pdz/container.hpp"
#include "pdz/core.hpp"

namespace pdz::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 1;
inline constexpr int exit_data = 2;

// Measured fidelity of a compressed distribution against its original,
// next to the bound the construction guarantees.
struct stats_report {
    method kind = method::tree;
    std::size_t n = 0;
    double entropy = 0.0;
    double relative_entropy = 0.0;
    double divergence_bound = 0.0;
    bool divergence_bound_strict = true;  // "<" rather than "<="
    std::optional<rational> max_ratio;    // exact methods only
    std::optional<rational> ratio_bound;
    double max_ratio_approx = 0.0;
    std::size_t payload_bits = 0;
    std::size_t expected_payload_bits = 0;
    std::size_t container_bytes = 0;

    [[nodiscard]] bool within_bounds() const;
};

// Reconstructs Q exactly where the method allows it.
struct decoded_distribution {
    std::optional<probability_distribution> exact;
    std::vector<double> approximate;  // sparse methods
};

[[nodiscard]] decoded_distribution decode(const compressed_distribution& c);
[[nodiscard]] stats_report compute_stats(const probability_distribution& original, const compressed_distribution& c,
                                         std::size_t container_bytes);

[[nodiscard]] std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
[[nodiscard]] compressed_distribution read_container(const std::filesystem::path& path);

// Entry point shared by the executable and the tests. args excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pdz::cli
