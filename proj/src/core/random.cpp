#include "hysbm/random.hpp"

namespace hysbm {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = splitmix64(seed);
  for (std::uint64_t k : keys) h = splitmix64(h ^ splitmix64(k + 0x632be59bd9b4e019ULL));
  return h;
}

std::uint64_t derive_seed(std::uint64_t seed, std::span<const int> keys, std::uint64_t tag) {
  std::uint64_t h = splitmix64(seed ^ splitmix64(tag));
  for (int k : keys) h = splitmix64(h ^ splitmix64(static_cast<std::uint64_t>(k) + 0x632be59bd9b4e019ULL));
  return h;
}

Vector sample_flat_dirichlet(int k, Rng& rng) {
  std::exponential_distribution<double> expo(1.0);
  Vector v(k);
  for (int a = 0; a < k; ++a) v(a) = expo(rng);
  const double total = v.sum();
  if (total > 0.0) {
    v /= total;
  } else {
    v.setConstant(1.0 / k);
  }
  return v;
}

}  // namespace hysbm
