#pragma once

#include "hysbm/kappa.hpp"
#include "hysbm/types.hpp"

#include <string>

namespace hysbm {

// HySBM parameters: community prior n, symmetric affinity p (entries in
// [0, 1]) and its rescaled form c = N p, together with the kappa schedule.
class ModelParams {
 public:
  ModelParams() = default;

  // Validates: n on the simplex (tolerance 1e-9, then renormalized), p square,
  // symmetric and inside [0, 1], kappa schedule consistent with N.
  ModelParams(Vector n, Matrix p, KappaSchedule kappa);

  static ModelParams from_c(Vector n, const Matrix& c, KappaSchedule kappa);

  // Planted-partition helper: c_aa = c_in, c_ab = c_out, uniform prior.
  static ModelParams planted(int num_communities, double c_in, double c_out,
                             KappaSchedule kappa);

  [[nodiscard]] int num_communities() const { return static_cast<int>(n_.size()); }
  [[nodiscard]] std::int64_t num_nodes() const { return kappa_.num_nodes(); }
  [[nodiscard]] int max_size() const { return kappa_.max_size(); }

  [[nodiscard]] const Vector& n() const { return n_; }
  [[nodiscard]] const Matrix& p() const { return p_; }
  [[nodiscard]] const Matrix& c() const { return c_; }
  [[nodiscard]] const KappaSchedule& kappa() const { return kappa_; }

 private:
  Vector n_;
  Matrix p_;
  Matrix c_;
  KappaSchedule kappa_ = KappaSchedule::make_default(2, 2);
};

// For c_in + (K - 1) c_out = K c: c_in from (K, c, c_out).
[[nodiscard]] double planted_c_in(int num_communities, double c, double c_out);

// JSON with keys K, n, p (row-major nested arrays), D, kappa ("default" or an
// array of kappa_d for d = 2..D). N is not part of the file; it comes from the
// hypergraph or the command line.
[[nodiscard]] std::string params_to_json(const ModelParams& params);
[[nodiscard]] ModelParams params_from_json(const std::string& text, std::int64_t num_nodes);
[[nodiscard]] ModelParams read_params_file(const std::string& path, std::int64_t num_nodes);
void write_params_file(const std::string& path, const ModelParams& params);

}  // namespace hysbm
