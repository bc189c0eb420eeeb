#pragma once

#include "hysbm/hypergraph.hpp"
#include "hysbm/params.hpp"
#include "hysbm/types.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace hysbm {

// Label map sigma maximizing sum_a confusion(sigma(a), a), where
// confusion(x, y) counts nodes with truth x predicted y. Exhaustive over
// permutations for K <= 8, Hungarian assignment above.
[[nodiscard]] std::vector<int> best_alignment(const Matrix& confusion);

struct OverlapResult {
  double raw = 0.0;      // may dip below zero
  double clamped = 0.0;  // max(raw, 0)
  std::vector<int> alignment;  // predicted label -> truth label
};

// (fraction of nodes whose aligned argmax label equals the truth - max_a n_a)
// / (1 - max_a n_a), maximized over label permutations.
[[nodiscard]] OverlapResult overlap(const Matrix& marginals, const Assignment& truth, const Vector& n);
[[nodiscard]] OverlapResult overlap(const Assignment& predicted, const Assignment& truth, const Vector& n);

// Truth-free variant (mean max marginal - max_a n_a) / (1 - max_a n_a).
[[nodiscard]] double marginal_overlap(const Matrix& marginals, const Vector& n);

// I(a; b) / sqrt(H(a) H(b)); 0 when either partition has zero entropy.
[[nodiscard]] double nmi(const Assignment& a, const Assignment& b);

// Monte Carlo AUC: each comparison pairs a uniformly drawn observed hyperedge
// with a uniformly drawn unobserved node set of the same size and scores both
// by pi_e / kappa_|e| under (params, labels). Wins count 1, ties 1/2.
[[nodiscard]] double auc_link_prediction(const Hypergraph& graph, const ModelParams& params,
                                         const Assignment& labels, std::int64_t num_comparisons,
                                         std::uint64_t seed, int workers = 0);

// Fraction of hyperedges of each size; entry d - 2 for d = 2..D.
[[nodiscard]] std::vector<double> size_histogram(const Hypergraph& graph);

struct EvalReport {
  std::optional<OverlapResult> overlap;
  std::optional<double> nmi;
  std::optional<double> auc;
  std::vector<double> size_histogram;
};

}  // namespace hysbm
