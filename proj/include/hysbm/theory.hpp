#pragma once

#include "hysbm/hypergraph.hpp"
#include "hysbm/kappa.hpp"
#include "hysbm/params.hpp"
#include "hysbm/types.hpp"

#include <optional>
#include <vector>

namespace hysbm {

// Distribution of hyperedge sizes on d = 2..D.
struct SizeDistribution {
  std::vector<double> prob;  // prob[d - 2]

  [[nodiscard]] int max_size() const { return static_cast<int>(prob.size()) + 1; }
  // F = sum_d d P(d).
  [[nodiscard]] double mean_size() const;
  // E[log 2 / (d (d - 1))].
  [[nodiscard]] double mean_log_pair_weight() const;
};

// P(d) proportional to E[omega_d], i.e. to binom(N-2, d-2) / kappa_d.
[[nodiscard]] SizeDistribution ensemble_size_distribution(const KappaSchedule& kappa);
[[nodiscard]] SizeDistribution ensemble_size_distribution(const ModelParams& params);
[[nodiscard]] SizeDistribution empirical_size_distribution(const Hypergraph& graph);

// Average degree parameter c = n' c n (equals the row sums when all groups
// share the same expected degree).
[[nodiscard]] double mean_affinity(const Matrix& c, const Vector& n);

// T(a, b) = 2 / (f (f - 1)) * n_a (c_ab / cbar - 1).
[[nodiscard]] Matrix transition_matrix(const Matrix& c, const Vector& n, int f_size);

// Largest eigenvalue magnitude of the pairwise T (f_size = 2).
[[nodiscard]] double leading_eigenvalue(const Matrix& c, const Vector& n);

struct StabilityResult {
  bool stable = true;
  double lhs = 0.0;     // d0 (F-1) exp(E[log w])^2 lambda^2
  double margin = 0.0;  // 1 - lhs; positive means stable
  double lambda = 0.0;
  double d0 = 0.0;
};

[[nodiscard]] StabilityResult stability_criterion(double d0, const SizeDistribution& dist, const Matrix& c,
                                                  const Vector& n);
// d0 from the parameters, sizes from the ensemble.
[[nodiscard]] StabilityResult stability_criterion(const ModelParams& params);

// Threshold on |c_in - c_out|: K c / sqrt(d0 (F-1)) * exp(-E[log w]). Zero for K = 1.
[[nodiscard]] double ks_threshold(int num_communities, double c, double d0, const SizeDistribution& dist);
// Ensemble mode: d0 = C c / 2 and sizes from the kappa schedule.
[[nodiscard]] double ks_threshold(int num_communities, double c, const KappaSchedule& kappa);

struct PhiDecomposition {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double gamma = 0.0;
  double phi = 0.0;
};

// alpha = (K-1)/K, beta = 1/sqrt(c), gamma1 = exp(-E[log w]),
// gamma2 = 1/sqrt(C (F-1) / 2), gamma = gamma1 gamma2, phi = alpha beta gamma.
[[nodiscard]] PhiDecomposition phi_decomposition(int num_communities, double c, const KappaSchedule& kappa);
[[nodiscard]] PhiDecomposition phi_decomposition(int num_communities, double c, double big_c,
                                                 const SizeDistribution& dist);

struct EntropyDiagnostics {
  double entropy_joint = 0.0;        // H(p_H)
  double entropy_hyperedge = 0.0;    // H(p_E) = log E
  double entropy_clique = 0.0;       // H(p_C)
  double conditional_entropy = 0.0;  // H({i,j} | f) = H(p_H) - H(p_E)
  double perplexity_ratio = 0.0;     // PP(p_H) / PP(p_E)
  double kl_divergence = 0.0;        // KL(p_H || p_C x p_E), summed directly
  double mutual_information = 0.0;   // H(p_C) - H({i,j} | f)
  double log_gamma1 = 0.0;           // equals the conditional entropy
};

[[nodiscard]] EntropyDiagnostics entropy_diagnostics(const Hypergraph& graph);

struct DetectabilityReport {
  int num_communities = 0;
  double c = 0.0;
  int max_size = 0;
  PhiDecomposition phi;
  double d0 = 0.0;
  double mean_size = 0.0;
  double lambda = 0.0;
  double threshold = 0.0;
  std::optional<StabilityResult> stability;
  std::optional<EntropyDiagnostics> entropy;
};

}  // namespace hysbm
