#include "hysbm/likelihood.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace hysbm {

double hyperedge_probability(std::span<const NodeId> e, const Assignment& t,
                             const ModelParams& params) {
  const int d = static_cast<int>(e.size());
  if (d < 2 || d > params.max_size()) {
    throw InputError("hyperedge size " + std::to_string(d) + " outside [2, " +
                     std::to_string(params.max_size()) + "]");
  }
  return hyperedge_pi(e, t, params.p()) / params.kappa().kappa(d);
}

double configuration_space_size(std::int64_t num_nodes, int max_size) {
  double total = 0.0;
  for (int d = 2; d <= max_size; ++d) {
    total += std::exp(log_binomial(static_cast<double>(num_nodes), d));
  }
  return total;
}

ExactLogLikelihood log_likelihood_exact(const Hypergraph& graph, const Assignment& t,
                                        const ModelParams& params, double max_terms) {
  const int n = graph.num_nodes();
  if (static_cast<std::int64_t>(t.size()) != n) {
    throw InputError("assignment length " + std::to_string(t.size()) + " differs from N = " +
                     std::to_string(n));
  }
  if (params.num_nodes() != n) {
    throw InputError("parameters built for N = " + std::to_string(params.num_nodes()) +
                     " but hypergraph has N = " + std::to_string(n));
  }
  const int max_size = std::min(params.max_size(), n);
  const double terms = configuration_space_size(n, max_size);
  if (terms > max_terms) {
    throw NumericalError("exact likelihood needs " + std::to_string(terms) +
                         " terms, above the cap of " + std::to_string(max_terms));
  }
  if (graph.max_size() > params.max_size() && graph.num_hyperedges() > 0) {
    for (std::size_t e = 0; e < graph.num_hyperedges(); ++e) {
      if (graph.size_of(e) > params.max_size()) {
        throw InputError("hyperedge larger than the parameter D = " +
                         std::to_string(params.max_size()));
      }
    }
  }

  ExactLogLikelihood out;
  for (std::size_t i = 0; i < t.size(); ++i) out.value += std::log(params.n()(t[i]));

  // Enumerate every subset of size 2..D in lexicographic order.
  std::vector<NodeId> e;
  for (int d = 2; d <= max_size; ++d) {
    const double kappa = params.kappa().kappa(d);
    e.resize(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) e[static_cast<std::size_t>(k)] = k;
    while (true) {
      const double prob = hyperedge_pi(std::span<const NodeId>(e), t, params.p()) / kappa;
      if (graph.contains(e)) {
        if (prob <= 0.0) {
          out.impossible = true;
          out.value = -std::numeric_limits<double>::infinity();
          return out;
        }
        out.value += std::log(prob);
      } else {
        out.value += std::log1p(-prob);
      }
      int k = d - 1;
      while (k >= 0 && e[static_cast<std::size_t>(k)] == n - d + k) --k;
      if (k < 0) break;
      ++e[static_cast<std::size_t>(k)];
      for (int r = k + 1; r < d; ++r) e[static_cast<std::size_t>(r)] = e[static_cast<std::size_t>(r - 1)] + 1;
    }
  }
  return out;
}

double expected_degree(const ModelParams& params) {
  return 0.5 * params.kappa().C() * params.n().dot(params.c() * params.n());
}

}  // namespace hysbm
