#pragma once

#include "hysbm/types.hpp"

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>

namespace hysbm {

using Rng = std::mt19937_64;

[[nodiscard]] std::uint64_t splitmix64(std::uint64_t x);

// Independent stream seed from a base seed and a tuple of integer keys.
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys);
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t seed, std::span<const int> keys, std::uint64_t tag);

// Symmetric Dirichlet(1, ..., 1) draw of length k.
[[nodiscard]] Vector sample_flat_dirichlet(int k, Rng& rng);

}  // namespace hysbm
