#pragma once

#include <cstdint>

namespace evaluator {

// Selects between the OpenMP kernel and its serial reference. Both paths
// produce identical results; the serial one exists for testing and
// benchmarking.
enum class Exec { serial, parallel };

// Indexed sub-seed derivation (splitmix64 finalizer). Seeds derived for
// index i do not depend on how many indices are requested.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace evaluator
