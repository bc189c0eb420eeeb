#include "hysbm/mp.hpp"

#include "hysbm/dp.hpp"
#include "hysbm/error.hpp"
#include "hysbm/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace hysbm {

namespace {

constexpr double kUnderflow = 1e-300;
constexpr std::size_t kChunk = 512;

double safe_log(double x) { return std::log(std::max(x, kUnderflow)); }

// exp(v - max v) normalized; false when nothing survives.
bool normalize_log(Vector& v) {
  const double top = v.maxCoeff();
  if (!std::isfinite(top)) return false;
  v = (v.array() - top).exp();
  const double total = v.sum();
  if (!(total > 0.0) || !std::isfinite(total)) return false;
  v /= total;
  return true;
}

bool normalize_linear(Vector& v) {
  const double total = v.sum();
  if (!(total > 0.0) || !std::isfinite(total) || v.maxCoeff() < kUnderflow) return false;
  v /= total;
  return true;
}

Vector log_prior(const ModelParams& params) {
  Vector out(params.num_communities());
  for (Index a = 0; a < out.size(); ++a) {
    out(a) = params.n()(a) > 0.0 ? std::log(params.n()(a)) : -std::numeric_limits<double>::infinity();
  }
  return out;
}

std::size_t pair_of(const Hypergraph& graph, std::size_t e, NodeId i) {
  const auto members = graph.hyperedge(e);
  auto it = std::lower_bound(members.begin(), members.end(), i);
  if (it == members.end() || *it != i) {
    throw InputError("node " + std::to_string(i) + " is not a member of hyperedge " + std::to_string(e));
  }
  return graph.pair_offset(e) + static_cast<std::size_t>(it - members.begin());
}

Matrix incoming_block(const MessageState& state, const Hypergraph& graph, std::size_t e) {
  return state.node_to_hye.middleCols(static_cast<Index>(graph.pair_offset(e)), graph.size_of(e));
}

void check_finite(const Vector& v, int sweep, std::size_t e, const char* what) {
  if (!v.allFinite()) {
    throw NumericalError(std::string("non-finite ") + what + " at sweep " + std::to_string(sweep) +
                         ", hyperedge " + std::to_string(e));
  }
}

// log_hye mirrors hye_to_node through safe_log; log_in(:, i) sums it over i's pairs.
void log_incoming(const Matrix& log_hye, const Hypergraph& graph, Matrix& out, int workers) {
  out.setZero(log_hye.rows(), graph.num_nodes());
  const auto n = static_cast<std::size_t>(graph.num_nodes());
  parallel_for((n + kChunk - 1) / kChunk, workers, [&](std::size_t chunk) {
    const std::size_t end = std::min(n, (chunk + 1) * kChunk);
    for (std::size_t i = chunk * kChunk; i < end; ++i) {
      auto col = out.col(static_cast<Index>(i));
      for (std::size_t pair : graph.incident_pairs(static_cast<NodeId>(i))) col += log_hye.col(static_cast<Index>(pair));
    }
  });
}

std::vector<char> select(std::size_t count, double alpha, std::uint64_t seed, int sweep, int batch) {
  std::vector<char> chosen(count, 1);
  if (alpha >= 1.0) return chosen;
  Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(sweep), static_cast<std::uint64_t>(batch)}));
  // Raw 64-bit draws against alpha * 2^64.
  const auto cut = static_cast<std::uint64_t>(std::ldexp(alpha, 64));
  for (auto& c : chosen) c = rng() < cut ? 1 : 0;
  return chosen;
}

}  // namespace

Vector external_field(const Vector& marginal_sum, const ModelParams& params) {
  return (params.kappa().C_prime() / static_cast<double>(params.num_nodes())) * (params.c() * marginal_sum);
}

void update_external_field(MessageState& state, const ModelParams& params) {
  state.field = external_field(state.marginal_sum, params);
}

MessageState init_messages(const Hypergraph& graph, const ModelParams& params, Rng& rng) {
  const int k = params.num_communities();
  const auto pairs = static_cast<Index>(graph.num_pairs());
  const Index n = graph.num_nodes();
  MessageState state;
  state.node_to_hye.resize(k, pairs);
  state.hye_to_node.resize(k, pairs);
  state.marginals.resize(k, n);
  for (Index p = 0; p < pairs; ++p) state.node_to_hye.col(p) = sample_flat_dirichlet(k, rng);
  for (Index i = 0; i < n; ++i) state.marginals.col(i) = sample_flat_dirichlet(k, rng);
  for (Index p = 0; p < pairs; ++p) {
    const NodeId i = graph.pair_node(static_cast<std::size_t>(p));
    Vector v = state.marginals.col(i).array() / state.node_to_hye.col(p).array().max(kUnderflow);
    if (!normalize_linear(v)) v.setConstant(1.0 / k);
    state.hye_to_node.col(p) = v;
  }
  state.marginal_sum = state.marginals.rowwise().sum();
  update_external_field(state, params);
  return state;
}

MessageState fixed_point_messages(const Hypergraph& graph, const ModelParams& params) {
  const int k = params.num_communities();
  const auto pairs = static_cast<Index>(graph.num_pairs());
  MessageState state;
  state.node_to_hye = params.n().replicate(1, pairs);
  state.hye_to_node = Matrix::Constant(k, pairs, 1.0 / k);
  state.marginals = params.n().replicate(1, graph.num_nodes());
  state.marginal_sum = state.marginals.rowwise().sum();
  update_external_field(state, params);
  return state;
}

Vector update_hye_to_node(const MessageState& state, const Hypergraph& graph, const ModelParams& params,
                          std::size_t e, NodeId i) {
  const std::size_t pair = pair_of(graph, e, i);
  const Matrix psi = dp_hye_to_node(incoming_block(state, graph, e), params.c());
  Vector v = psi.col(static_cast<Index>(pair - graph.pair_offset(e)));
  check_finite(v, 0, e, "hyperedge message");
  if (!normalize_linear(v)) {
    warn("degenerate message from hyperedge " + std::to_string(e) + "; reset to uniform");
    v.setConstant(1.0 / static_cast<double>(v.size()));
  }
  return v;
}

Vector update_node_to_hye(const MessageState& state, const Hypergraph& graph, const ModelParams& params,
                          NodeId i, std::size_t e) {
  const std::size_t skip = pair_of(graph, e, i);
  Vector v = log_prior(params) - state.field;
  for (std::size_t pair : graph.incident_pairs(i)) {
    if (pair != skip) v += state.hye_to_node.col(static_cast<Index>(pair)).unaryExpr(&safe_log);
  }
  if (!normalize_log(v)) {
    warn("degenerate message from node " + std::to_string(i) + "; reset to uniform");
    v.setConstant(1.0 / static_cast<double>(v.size()));
  }
  return v;
}

Vector update_marginal(const MessageState& state, const Hypergraph& graph, const ModelParams& params,
                       NodeId i) {
  Vector v = log_prior(params) - state.field;
  for (std::size_t pair : graph.incident_pairs(i)) {
    v += state.hye_to_node.col(static_cast<Index>(pair)).unaryExpr(&safe_log);
  }
  if (!normalize_log(v)) {
    warn("degenerate marginal at node " + std::to_string(i) + "; reset to uniform");
    v.setConstant(1.0 / static_cast<double>(v.size()));
  }
  return v;
}

MpResult run_mp(const Hypergraph& graph, const ModelParams& params, const MpConfig& config,
                std::optional<MessageState> initial) {
  if (!(config.alpha > 0.0 && config.alpha <= 1.0)) throw InputError("alpha must lie in (0, 1]");
  if (!(config.eps > 0.0)) throw InputError("eps must be positive");
  if (config.max_iter < 1 || config.patience < 1) {
    throw InputError("max_iter and patience must be positive");
  }
  if (params.num_nodes() != graph.num_nodes()) {
    throw InputError("parameters built for N = " + std::to_string(params.num_nodes()) +
                     " but hypergraph has N = " + std::to_string(graph.num_nodes()));
  }
  for (std::size_t e = 0; e < graph.num_hyperedges(); ++e) {
    if (graph.size_of(e) > params.max_size()) {
      throw InputError("hyperedge " + std::to_string(e) + " has size " + std::to_string(graph.size_of(e)) +
                       " above the parameter D = " + std::to_string(params.max_size()));
    }
  }
  const auto start = std::chrono::steady_clock::now();
  const int k = params.num_communities();
  MpResult result;
  if (initial) {
    result.state = std::move(*initial);
    if (result.state.node_to_hye.rows() != k || result.state.node_to_hye.cols() != static_cast<Index>(graph.num_pairs()) ||
        result.state.marginals.cols() != graph.num_nodes()) {
      throw InputError("initial message state does not match the hypergraph");
    }
    result.state.marginal_sum = result.state.marginals.rowwise().sum();
    update_external_field(result.state, params);
  } else {
    Rng rng(derive_seed(config.seed, {0xd1e7ULL}));
    result.state = init_messages(graph, params, rng);
  }
  MessageState& s = result.state;
  const Vector log_n = log_prior(params);
  const Matrix& c = params.c();
  const int workers = config.workers;
  const std::size_t num_pairs = graph.num_pairs();
  const std::size_t num_edges = graph.num_hyperedges();
  const auto num_nodes = static_cast<std::size_t>(graph.num_nodes());

  Matrix log_hye = s.hye_to_node.unaryExpr(&safe_log);
  Matrix log_in;
  log_incoming(log_hye, graph, log_in, workers);
  Matrix staged(k, static_cast<Index>(num_nodes));
  int quiet = 0;

  for (int sweep = 1; sweep <= config.max_iter; ++sweep) {
    std::atomic<std::int64_t> resets{0};

    // node -> hyperedge
    const auto pick_pairs = select(num_pairs, config.alpha, config.seed, sweep, 0);
    parallel_for((num_pairs + kChunk - 1) / kChunk, workers, [&](std::size_t chunk) {
      const std::size_t end = std::min(num_pairs, (chunk + 1) * kChunk);
      Vector v(k);
      for (std::size_t pair = chunk * kChunk; pair < end; ++pair) {
        if (!pick_pairs[pair]) continue;
        const auto col = static_cast<Index>(pair);
        v = log_n + log_in.col(graph.pair_node(pair)) - s.field - log_hye.col(col);
        if (!normalize_log(v)) {
          check_finite(log_in.col(graph.pair_node(pair)), sweep, graph.pair_hyperedge(pair), "node message");
          v.setConstant(1.0 / k);
          ++resets;
        }
        s.node_to_hye.col(col) = v;
      }
    });

    // hyperedge -> node
    const auto pick_targets = select(num_pairs, config.alpha, config.seed, sweep, 1);
    parallel_for((num_edges + kChunk - 1) / kChunk, workers, [&](std::size_t chunk) {
      const std::size_t end = std::min(num_edges, (chunk + 1) * kChunk);
      DpWorkspace ws;
      Matrix psi(k, graph.max_size());
      Vector v(k);
      for (std::size_t e = chunk * kChunk; e < end; ++e) {
        const std::size_t offset = graph.pair_offset(e);
        const int m = graph.size_of(e);
        bool any = false;
        for (int x = 0; x < m; ++x) any = any || pick_targets[offset + static_cast<std::size_t>(x)];
        if (!any) continue;
        dp_hye_to_node(s.node_to_hye.middleCols(static_cast<Index>(offset), m), c, ws, psi.leftCols(m));
        for (int x = 0; x < m; ++x) {
          if (!pick_targets[offset + static_cast<std::size_t>(x)]) continue;
          v = psi.col(x);
          check_finite(v, sweep, e, "hyperedge message");
          if (!normalize_linear(v)) {
            v.setConstant(1.0 / k);
            ++resets;
          }
          s.hye_to_node.col(static_cast<Index>(offset) + x) = v;
          log_hye.col(static_cast<Index>(offset) + x) = v.unaryExpr(&safe_log);
        }
      }
    });
    log_incoming(log_hye, graph, log_in, workers);

    // marginals
    const auto pick_nodes = select(num_nodes, config.alpha, config.seed, sweep, 2);
    parallel_for((num_nodes + kChunk - 1) / kChunk, workers, [&](std::size_t chunk) {
      const std::size_t end = std::min(num_nodes, (chunk + 1) * kChunk);
      Vector v(k);
      for (std::size_t i = chunk * kChunk; i < end; ++i) {
        if (!pick_nodes[i]) continue;
        v = log_n + log_in.col(static_cast<Index>(i)) - s.field;
        if (!normalize_log(v)) {
          check_finite(log_in.col(static_cast<Index>(i)), sweep, num_edges, "marginal");
          v.setConstant(1.0 / k);
          ++resets;
        }
        staged.col(static_cast<Index>(i)) = v;
      }
    });
    double delta = 0.0;
    Vector diff(k);
    for (std::size_t i = 0; i < num_nodes; ++i) {
      if (!pick_nodes[i]) continue;
      const auto col = static_cast<Index>(i);
      diff = staged.col(col) - s.marginals.col(col);
      delta += diff.cwiseAbs().sum();
      s.marginal_sum += diff;
      s.marginals.col(col) = staged.col(col);
    }
    update_external_field(s, params);
    if (!s.field.allFinite()) throw NumericalError("non-finite external field at sweep " + std::to_string(sweep));

    if (resets > 0) {
      result.resets += resets;
      warn("sweep " + std::to_string(sweep) + ": " + std::to_string(resets.load()) +
           " degenerate messages reset to uniform");
    }
    result.sweeps = sweep;
    result.final_delta = delta;
    quiet = delta < config.eps ? quiet + 1 : 0;
    if (quiet >= config.patience) {
      result.converged = true;
      break;
    }
  }
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

Assignment argmax_assignment(const Matrix& marginals) {
  std::vector<int> labels(static_cast<std::size_t>(marginals.cols()));
  for (Index i = 0; i < marginals.cols(); ++i) {
    Index best = 0;
    for (Index a = 1; a < marginals.rows(); ++a) {
      if (marginals(a, i) > marginals(best, i)) best = a;
    }
    labels[static_cast<std::size_t>(i)] = static_cast<int>(best);
  }
  return {std::move(labels), static_cast<int>(std::max<Index>(1, marginals.rows()))};
}

void check_state(const MessageState& state, double tol) {
  auto check = [tol](const Matrix& m, const char* name) {
    for (Index j = 0; j < m.cols(); ++j) {
      const auto col = m.col(j);
      if (!col.allFinite() || (col.array() < 0.0).any() || std::abs(col.sum() - 1.0) > tol) {
        throw NumericalError(std::string(name) + " column " + std::to_string(j) + " is not a probability vector");
      }
    }
  };
  check(state.node_to_hye, "node-to-hyperedge message");
  check(state.hye_to_node, "hyperedge-to-node message");
  check(state.marginals, "marginal");
}

}  // namespace hysbm
