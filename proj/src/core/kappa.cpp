#include "hysbm/kappa.hpp"

#include "hysbm/error.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace hysbm {

double log_binomial(double n, double k) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  if (k == 0 || k == n) return 0.0;
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double harmonic_number(int m) {
  double h = 0.0;
  for (int d = 1; d <= m; ++d) h += 1.0 / d;
  return h;
}

KappaSchedule::KappaSchedule(std::int64_t num_nodes, int max_size, std::vector<double> log_kappa,
                             std::vector<double> ratio, bool is_default)
    : num_nodes_(num_nodes),
      max_size_(max_size),
      is_default_(is_default),
      log_kappa_(std::move(log_kappa)),
      ratio_(std::move(ratio)) {
  for (int d = 2; d <= max_size_; ++d) {
    const double r = ratio_[static_cast<std::size_t>(d - 2)];
    c_ += r * d;
    c_prime_ += r;
    c_triple_prime_ += r * (1.0 - d);
  }
}

KappaSchedule KappaSchedule::make_default(std::int64_t num_nodes, int max_size) {
  if (max_size < 2) throw InputError("maximum hyperedge size must be at least 2");
  if (num_nodes < 1) throw InputError("node count must be positive");
  std::vector<double> log_kappa;
  std::vector<double> ratio;
  for (int d = 2; d <= max_size; ++d) {
    const double pairs = 0.5 * d * (d - 1);
    if (d > num_nodes) {
      // No hyperedge of this size exists; the size contributes nothing.
      log_kappa.push_back(std::log(pairs));
      ratio.push_back(0.0);
      continue;
    }
    log_kappa.push_back(log_binomial(static_cast<double>(num_nodes - 2), d - 2) + std::log(pairs));
    // binom(N-2, d-2) cancels exactly.
    ratio.push_back(1.0 / pairs);
  }
  return {num_nodes, max_size, std::move(log_kappa), std::move(ratio), true};
}

KappaSchedule KappaSchedule::from_values(std::int64_t num_nodes, int max_size,
                                         const std::vector<double>& values) {
  if (max_size < 2) throw InputError("maximum hyperedge size must be at least 2");
  if (num_nodes < 1) throw InputError("node count must be positive");
  if (values.size() != static_cast<std::size_t>(max_size - 1)) {
    throw InputError("kappa needs " + std::to_string(max_size - 1) + " values (d = 2.." +
                     std::to_string(max_size) + "), got " + std::to_string(values.size()));
  }
  std::vector<double> log_kappa;
  std::vector<double> ratio;
  for (int d = 2; d <= max_size; ++d) {
    const double k = values[static_cast<std::size_t>(d - 2)];
    const double minimum = 0.5 * d * (d - 1);
    if (!(k >= minimum) || !std::isfinite(k)) {
      throw InputError("kappa_" + std::to_string(d) + " = " + std::to_string(k) +
                       " violates kappa_d >= d(d-1)/2 = " + std::to_string(minimum));
    }
    log_kappa.push_back(std::log(k));
    ratio.push_back(d > num_nodes ? 0.0
                                  : std::exp(log_binomial(static_cast<double>(num_nodes - 2), d - 2) -
                                             std::log(k)));
  }
  return {num_nodes, max_size, std::move(log_kappa), std::move(ratio), false};
}

void KappaSchedule::check_size(int d) const {
  if (d < 2 || d > max_size_) {
    throw InputError("hyperedge size " + std::to_string(d) + " outside kappa schedule [2, " +
                     std::to_string(max_size_) + "]");
  }
}

double KappaSchedule::log_kappa(int d) const {
  check_size(d);
  return log_kappa_[static_cast<std::size_t>(d - 2)];
}

double KappaSchedule::kappa(int d) const { return std::exp(log_kappa(d)); }

double KappaSchedule::ratio(int d) const {
  check_size(d);
  return ratio_[static_cast<std::size_t>(d - 2)];
}

}  // namespace hysbm
