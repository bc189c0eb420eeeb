#pragma once

#include <cstdint>
#include <vector>

namespace hysbm {

// Size-dependent normalizers kappa_d for d = 2..D, plus the constants that
// the model derives from them:
//   C    = sum_d binom(N-2, d-2) d / kappa_d
//   C'   = sum_d binom(N-2, d-2) / kappa_d
//   C''' = sum_d binom(N-2, d-2) (1 - d) / kappa_d
//
// Binomials overflow long before N reaches 10^4, so kappa is kept in log
// space and only the ratios binom(N-2, d-2) / kappa_d are exponentiated.
class KappaSchedule {
 public:
  // kappa_d = binom(N-2, d-2) d (d-1) / 2. Gives kappa_2 = 1 and C = 2 H_{D-1}.
  static KappaSchedule make_default(std::int64_t num_nodes, int max_size);

  // values[d - 2] = kappa_d. Throws InputError if kappa_d < d (d-1) / 2.
  static KappaSchedule from_values(std::int64_t num_nodes, int max_size,
                                   const std::vector<double>& values);

  [[nodiscard]] std::int64_t num_nodes() const { return num_nodes_; }
  [[nodiscard]] int max_size() const { return max_size_; }
  [[nodiscard]] bool is_default() const { return is_default_; }

  [[nodiscard]] double log_kappa(int d) const;
  [[nodiscard]] double kappa(int d) const;
  // binom(N-2, d-2) / kappa_d.
  [[nodiscard]] double ratio(int d) const;

  [[nodiscard]] double C() const { return c_; }
  [[nodiscard]] double C_prime() const { return c_prime_; }
  [[nodiscard]] double C_triple_prime() const { return c_triple_prime_; }

 private:
  KappaSchedule(std::int64_t num_nodes, int max_size, std::vector<double> log_kappa,
                std::vector<double> ratio, bool is_default);
  void check_size(int d) const;

  std::int64_t num_nodes_ = 0;
  int max_size_ = 0;
  bool is_default_ = false;
  std::vector<double> log_kappa_;  // index d - 2
  std::vector<double> ratio_;      // index d - 2
  double c_ = 0.0;
  double c_prime_ = 0.0;
  double c_triple_prime_ = 0.0;
};

// log binom(n, k) via lgamma; -inf when k < 0 or k > n.
[[nodiscard]] double log_binomial(double n, double k);

// H_m = 1 + 1/2 + ... + 1/m.
[[nodiscard]] double harmonic_number(int m);

}  // namespace hysbm
