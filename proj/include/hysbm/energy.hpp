#pragma once

#include "hysbm/hypergraph.hpp"
#include "hysbm/mp.hpp"
#include "hysbm/params.hpp"

#include <vector>

namespace hysbm {

// Cavity estimate of F = -log Z:
//   F = -sum_i f_i + sum_{e in E} (|e|-1) f_e + (unobserved hyperedges).
// Observed factors keep their 1/(N kappa_|e|) scale, so F is an estimate of
// -log Z itself rather than of a shifted version.
struct FreeEnergyEstimate {
  double F = 0.0;
  double sum_fi = 0.0;
  double sum_fe_observed = 0.0;
  double sum_fe_unobserved = 0.0;
};

// S2 = sum_{k<m} q_k' c q_m = (Q' c Q - sum_k q_k' c q_k) / 2.
[[nodiscard]] double marginal_pair_sum(const ModelParams& params, const MessageState& state);

// Absent hyperedges enter in mean field. The plain large-N form
// (finite_size = false) lets each node feel its own marginal through h and
// counts every observed hyperedge a second time as an absent one; both slips
// are O(1/N) per node and finite_size = true takes them back out.

// sum_i f_i, with f_i = log sum_a n_a prod_{e in E, e ni i} psi(e,i,a) / (N kappa_e) exp(-h(a))
// minus the label-independent part of the absent factors around i, which
// sums to (C - 2C') S2 / N over all nodes.
[[nodiscard]] double node_terms(const Hypergraph& graph, const ModelParams& params, const MessageState& state,
                                bool finite_size = true);

// sum_{e in E} (|e|-1) log(eta(e) / (N kappa_|e|)), eta from the running
// pair-sum recursion.
[[nodiscard]] double observed_hyperedge_terms(const Hypergraph& graph, const ModelParams& params,
                                              const MessageState& state);

// C''' S2 / N, minus the observed hyperedges' share when finite_size is set.
[[nodiscard]] double unobserved_hyperedge_terms(const Hypergraph& graph, const ModelParams& params,
                                                const MessageState& state, bool finite_size = true);

[[nodiscard]] FreeEnergyEstimate free_energy(const Hypergraph& graph, const ModelParams& params,
                                             const MessageState& state, bool finite_size = true);

// -log sum_t exp L(A, t) by enumerating all K^N assignments.
[[nodiscard]] double exact_neg_log_evidence(const Hypergraph& graph, const ModelParams& params,
                                            double max_assignments = 1e7);

struct SimplexPoint {
  double weight[3] = {0.0, 0.0, 0.0};
  double F = 0.0;
  bool converged = false;
  int sweeps = 0;
};

// Barycentric grid with `resolution` subdivisions per edge, (r+1)(r+2)/2
// points. At each point p and n are the convex combinations of the vertex
// values; MP runs at those fixed parameters and F is recorded.
[[nodiscard]] std::vector<SimplexPoint> simplex_sweep(const Hypergraph& graph,
                                                      const std::vector<ModelParams>& vertices,
                                                      int resolution, const MpConfig& mp, int workers = 0);

}  // namespace hysbm
