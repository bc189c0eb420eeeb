#pragma once

#include "hysbm/hypergraph.hpp"
#include "hysbm/kappa.hpp"
#include "hysbm/mp.hpp"
#include "hysbm/params.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace hysbm {

struct EmConfig {
  int num_communities = 2;
  double eps = 1e-4;
  int max_iter = 50;
  int restarts = 5;
  std::uint64_t seed = 0;
  MpConfig mp{.alpha = 0.01};
  // Restarts run concurrently on this many threads (0: default).
  int workers = 0;
  // Kappa schedule; default schedule for the hypergraph when unset.
  std::optional<KappaSchedule> kappa;
  // Starting parameters; random assortative start when unset.
  std::optional<ModelParams> init;
};

struct InferenceResult {
  ModelParams params;
  Matrix marginals;
  Assignment assignment;
  double free_energy = 0.0;
  std::vector<double> trace;  // per-iteration |n - n_old| + |c - c_old|
  bool converged = false;
  int iterations = 0;
  int best_restart = 0;
  std::vector<double> restart_free_energies;
  MpResult final_mp;
};

// n_a = (number of nodes whose argmax marginal is a) / N.
[[nodiscard]] Vector update_n(const Matrix& marginals);

// Per ordered community pair: sum over hyperedges of #^e_ab / pi_e, with
// pi_e computed from p = c / N and the hard labels t.
[[nodiscard]] Matrix weighted_pair_counts(const Hypergraph& graph, const Assignment& t, const Matrix& c);

// c_ab <- c_ab * 2 sum_e #^e_ab / pi_e / (N C' (N n_a n_b - delta_ab n_a)),
// symmetrized by averaging (a, b) and (b, a); entries clamped at the affinity
// floor. Entries of an empty community keep their old value.
[[nodiscard]] Matrix update_c(const Hypergraph& graph, const Assignment& t, const Matrix& c, const Vector& n,
                              const KappaSchedule& kappa);

// Symmetric start: c0 = 2E / (C' N) matches the observed hyperedge count;
// c_aa = c0 (1 + u), u ~ U[0, 0.5]; off-diagonals keep row sums near c0.
[[nodiscard]] ModelParams initial_params(const Hypergraph& graph, int num_communities,
                                         const KappaSchedule& kappa, Rng& rng);

// Alternates MP with the n and c updates until the parameter change drops
// below eps; several restarts, lowest free energy wins.
[[nodiscard]] InferenceResult run_em(const Hypergraph& graph, const EmConfig& config);

}  // namespace hysbm
