#include "hysbm/energy.hpp"

#include "hysbm/dp.hpp"
#include "hysbm/error.hpp"
#include "hysbm/likelihood.hpp"
#include "hysbm/parallel.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace hysbm {

namespace {

double log_sum_exp(const Vector& v) {
  const double top = v.maxCoeff();
  if (!std::isfinite(top)) return top;
  return top + std::log((v.array() - top).exp().sum());
}

void check_sizes(const Hypergraph& graph, const ModelParams& params, const MessageState& state) {
  if (params.num_nodes() != graph.num_nodes()) {
    throw InputError("parameters built for N = " + std::to_string(params.num_nodes()) +
                     " but hypergraph has N = " + std::to_string(graph.num_nodes()));
  }
  if (state.node_to_hye.cols() != static_cast<Index>(graph.num_pairs()) ||
      state.marginals.cols() != graph.num_nodes() || state.marginals.rows() != params.num_communities()) {
    throw InputError("message state does not match the hypergraph");
  }
}

}  // namespace

double marginal_pair_sum(const ModelParams& params, const MessageState& state) {
  const Vector q_total = state.marginals.rowwise().sum();
  const double self = (state.marginals.array() * (params.c() * state.marginals).array()).sum();
  return 0.5 * (q_total.dot(params.c() * q_total) - self);
}

namespace {

// Marginal products inside one observed hyperedge: cq.col(x) = c q_x for
// member x, total = sum_x c q_x, pairs = sum_{x<y} q_x' c q_y.
struct HyperedgeMarginals {
  Matrix cq;
  Vector total;
  double pairs = 0.0;
};

HyperedgeMarginals hyperedge_marginals(const Hypergraph& graph, const ModelParams& params,
                                       const MessageState& state, std::size_t e) {
  const auto members = graph.hyperedge(e);
  const auto m = static_cast<Index>(members.size());
  HyperedgeMarginals out;
  out.cq.resize(params.num_communities(), m);
  for (Index x = 0; x < m; ++x) out.cq.col(x) = params.c() * state.marginals.col(members[static_cast<std::size_t>(x)]);
  out.total = out.cq.rowwise().sum();
  for (Index x = 0; x < m; ++x) {
    out.pairs += 0.5 * state.marginals.col(members[static_cast<std::size_t>(x)]).dot(out.total - out.cq.col(x));
  }
  return out;
}

}  // namespace

double node_terms(const Hypergraph& graph, const ModelParams& params, const MessageState& state,
                  bool finite_size) {
  check_sizes(graph, params, state);
  const auto big_n = static_cast<double>(params.num_nodes());
  const double log_n_total = std::log(big_n);
  const int k = params.num_communities();
  const auto& kappa = params.kappa();
  Vector log_prior(k);
  for (int a = 0; a < k; ++a) {
    log_prior(a) = params.n()(a) > 0.0 ? std::log(params.n()(a)) : -std::numeric_limits<double>::infinity();
  }
  // Per pair log psi, filled hyperedge by hyperedge. With finite_size the
  // hyperedge's share of the absent-factor field goes back in, split into a
  // label-dependent column and a constant.
  Matrix log_psi(k, static_cast<Index>(graph.num_pairs()));
  Vector constant = Vector::Zero(static_cast<Index>(graph.num_pairs()));
  for (std::size_t e = 0; e < graph.num_hyperedges(); ++e) {
    const auto offset = static_cast<Index>(graph.pair_offset(e));
    const int m = graph.size_of(e);
    const Matrix psi = dp_hye_to_node(state.node_to_hye.middleCols(offset, m), params.c());
    const double shift = log_n_total + kappa.log_kappa(m);
    log_psi.middleCols(offset, m) = psi.array().log() - shift;
    if (!finite_size) continue;
    const HyperedgeMarginals hm = hyperedge_marginals(graph, params, state, e);
    const double scale = 1.0 / (big_n * kappa.kappa(m));
    const auto members = graph.hyperedge(e);
    for (Index x = 0; x < m; ++x) {
      const Vector others = hm.total - hm.cq.col(x);
      log_psi.col(offset + x) += scale * others;
      const double with_x = state.marginals.col(members[static_cast<std::size_t>(x)]).dot(others);
      constant(offset + x) = scale * (hm.pairs - with_x);
    }
  }
  const double self_scale = kappa.C_prime() / big_n;
  double total = 0.0;
  for (NodeId i = 0; i < graph.num_nodes(); ++i) {
    Vector v = log_prior - state.field;
    if (finite_size) v += self_scale * (params.c() * state.marginals.col(i));
    for (std::size_t pair : graph.incident_pairs(i)) {
      v += log_psi.col(static_cast<Index>(pair));
      total += constant(static_cast<Index>(pair));
    }
    total += log_sum_exp(v);
  }
  total -= (kappa.C() - 2.0 * kappa.C_prime()) / big_n * marginal_pair_sum(params, state);
  return total;
}

double observed_hyperedge_terms(const Hypergraph& graph, const ModelParams& params,
                                const MessageState& state) {
  check_sizes(graph, params, state);
  const double log_n_total = std::log(static_cast<double>(params.num_nodes()));
  double total = 0.0;
  for (std::size_t e = 0; e < graph.num_hyperedges(); ++e) {
    const int m = graph.size_of(e);
    const double eta = dp_hyperedge_evidence(
        state.node_to_hye.middleCols(static_cast<Index>(graph.pair_offset(e)), m), params.c());
    total += (m - 1) * (std::log(eta) - log_n_total - params.kappa().log_kappa(m));
  }
  return total;
}

double unobserved_hyperedge_terms(const Hypergraph& graph, const ModelParams& params, const MessageState& state,
                                  bool finite_size) {
  check_sizes(graph, params, state);
  const auto big_n = static_cast<double>(params.num_nodes());
  double total = params.kappa().C_triple_prime() / big_n * marginal_pair_sum(params, state);
  if (finite_size) {
    for (std::size_t e = 0; e < graph.num_hyperedges(); ++e) {
      const int m = graph.size_of(e);
      total -= (1.0 - m) / (big_n * params.kappa().kappa(m)) * hyperedge_marginals(graph, params, state, e).pairs;
    }
  }
  return total;
}

FreeEnergyEstimate free_energy(const Hypergraph& graph, const ModelParams& params, const MessageState& state,
                               bool finite_size) {
  FreeEnergyEstimate out;
  out.sum_fi = node_terms(graph, params, state, finite_size);
  out.sum_fe_observed = observed_hyperedge_terms(graph, params, state);
  out.sum_fe_unobserved = unobserved_hyperedge_terms(graph, params, state, finite_size);
  out.F = -out.sum_fi + out.sum_fe_observed + out.sum_fe_unobserved;
  return out;
}

double exact_neg_log_evidence(const Hypergraph& graph, const ModelParams& params, double max_assignments) {
  const int n = graph.num_nodes();
  const int k = params.num_communities();
  const double count = std::pow(static_cast<double>(k), n);
  if (count > max_assignments) {
    throw NumericalError("exact evidence needs " + std::to_string(count) + " assignments, above the cap of " +
                         std::to_string(max_assignments));
  }
  const auto total = static_cast<std::int64_t>(std::llround(count));
  std::vector<double> logs;
  logs.reserve(static_cast<std::size_t>(total));
  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  for (std::int64_t code = 0; code < total; ++code) {
    std::int64_t rest = code;
    for (int i = 0; i < n; ++i) {
      labels[static_cast<std::size_t>(i)] = static_cast<int>(rest % k);
      rest /= k;
    }
    const Assignment t(labels, k);
    const ExactLogLikelihood ll = log_likelihood_exact(graph, t, params);
    logs.push_back(ll.value);
  }
  Vector v = Eigen::Map<Vector>(logs.data(), static_cast<Index>(logs.size()));
  return -log_sum_exp(v);
}

std::vector<SimplexPoint> simplex_sweep(const Hypergraph& graph, const std::vector<ModelParams>& vertices,
                                        int resolution, const MpConfig& mp, int workers) {
  if (vertices.size() != 3) throw InputError("the simplex needs exactly three vertex parameter sets");
  if (resolution < 1) throw InputError("simplex resolution must be at least 1");
  const int k = vertices[0].num_communities();
  for (const auto& v : vertices) {
    if (v.num_communities() != k) throw InputError("simplex vertices disagree on K");
    if (v.num_nodes() != graph.num_nodes()) throw InputError("simplex vertex built for a different N");
  }
  std::vector<SimplexPoint> points;
  for (int i = resolution; i >= 0; --i) {
    for (int j = resolution - i; j >= 0; --j) {
      SimplexPoint point;
      point.weight[0] = static_cast<double>(i) / resolution;
      point.weight[1] = static_cast<double>(j) / resolution;
      point.weight[2] = static_cast<double>(resolution - i - j) / resolution;
      points.push_back(point);
    }
  }
  parallel_for(points.size(), workers, [&](std::size_t idx) {
    SimplexPoint& point = points[idx];
    Vector n = Vector::Zero(k);
    Matrix p = Matrix::Zero(k, k);
    for (int v = 0; v < 3; ++v) {
      n += point.weight[v] * vertices[static_cast<std::size_t>(v)].n();
      p += point.weight[v] * vertices[static_cast<std::size_t>(v)].p();
    }
    n /= n.sum();
    const ModelParams params(n, p.cwiseMin(1.0).cwiseMax(0.0), vertices[0].kappa());
    MpConfig config = mp;
    config.seed = derive_seed(mp.seed, {static_cast<std::uint64_t>(idx)});
    config.workers = 1;
    const MpResult result = run_mp(graph, params, config);
    point.F = free_energy(graph, params, result.state).F;
    point.converged = result.converged;
    point.sweeps = result.sweeps;
  });
  return points;
}

}  // namespace hysbm
