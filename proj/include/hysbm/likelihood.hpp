#pragma once

#include "hysbm/error.hpp"
#include "hysbm/hypergraph.hpp"
#include "hysbm/params.hpp"

#include <Eigen/Dense>

#include <span>
#include <string>

namespace hysbm {

// pi_e = sum over unordered member pairs of p(t_i, t_j).
template <typename Derived>
double hyperedge_pi(std::span<const NodeId> e, const Assignment& t,
                    const Eigen::MatrixBase<Derived>& p) {
  double total = 0.0;
  for (std::size_t x = 0; x < e.size(); ++x) {
    if (e[x] < 0 || static_cast<std::size_t>(e[x]) >= t.size()) {
      throw InputError("node id " + std::to_string(e[x]) + " out of range");
    }
    for (std::size_t y = x + 1; y < e.size(); ++y) {
      if (e[y] < 0 || static_cast<std::size_t>(e[y]) >= t.size()) {
        throw InputError("node id " + std::to_string(e[y]) + " out of range");
      }
      total += p(t[e[x]], t[e[y]]);
    }
  }
  return total;
}

// Bernoulli parameter pi_e / kappa_|e|.
[[nodiscard]] double hyperedge_probability(std::span<const NodeId> e, const Assignment& t,
                                           const ModelParams& params);

struct ExactLogLikelihood {
  double value = 0.0;
  // An observed hyperedge has pi_e = 0; value is -inf.
  bool impossible = false;
};

// Full Bernoulli log-likelihood over every possible hyperedge of size 2..D
// plus the prior term. Refuses when sum_d binom(N, d) exceeds max_terms.
[[nodiscard]] ExactLogLikelihood log_likelihood_exact(const Hypergraph& graph, const Assignment& t,
                                                      const ModelParams& params,
                                                      double max_terms = 1e6);

// Number of hyperedges in the full configuration space: sum_{d=2..D} binom(N, d).
[[nodiscard]] double configuration_space_size(std::int64_t num_nodes, int max_size);

// d0 = (C / 2) sum_{a,b} c_ab n_a n_b.
[[nodiscard]] double expected_degree(const ModelParams& params);

}  // namespace hysbm
