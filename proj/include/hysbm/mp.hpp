#pragma once

#include "hysbm/hypergraph.hpp"
#include "hysbm/params.hpp"
#include "hysbm/random.hpp"
#include "hysbm/types.hpp"

#include <cstdint>
#include <optional>

namespace hysbm {

// Message-passing state. Per-pair quantities are K x P matrices whose column
// is the flat pair index of (hyperedge, member) in the hypergraph.
struct MessageState {
  Matrix node_to_hye;   // q_{i->e}
  Matrix hye_to_node;   // qhat_{e->i}
  Matrix marginals;     // K x N
  Vector field;         // h
  Vector marginal_sum;  // sum_j q_j, kept in step with `marginals`
};

struct MpConfig {
  double alpha = 0.25;  // fraction of messages updated per batch
  double eps = 1e-6;
  int max_iter = 2000;
  int patience = 50;
  std::uint64_t seed = 0;
  int workers = 1;
};

struct MpResult {
  MessageState state;
  bool converged = false;
  int sweeps = 0;
  double final_delta = 0.0;
  double seconds = 0.0;
  std::int64_t resets = 0;
};

// Dirichlet(1) draws for q_{i->e} and q_i; qhat from q_i / q_{i->e}; h from q_i.
[[nodiscard]] MessageState init_messages(const Hypergraph& graph, const ModelParams& params, Rng& rng);

// q_{i->e} = n, qhat = 1/K, q_i = n.
[[nodiscard]] MessageState fixed_point_messages(const Hypergraph& graph, const ModelParams& params);

// h(a) = (C'/N) sum_b c_ab Q(b), Q = marginal_sum.
[[nodiscard]] Vector external_field(const Vector& marginal_sum, const ModelParams& params);

// Single-message updates on a state (no dropout); used by tests and oracles.
[[nodiscard]] Vector update_hye_to_node(const MessageState& state, const Hypergraph& graph,
                                        const ModelParams& params, std::size_t e, NodeId i);
[[nodiscard]] Vector update_node_to_hye(const MessageState& state, const Hypergraph& graph,
                                        const ModelParams& params, NodeId i, std::size_t e);
[[nodiscard]] Vector update_marginal(const MessageState& state, const Hypergraph& graph,
                                     const ModelParams& params, NodeId i);
void update_external_field(MessageState& state, const ModelParams& params);

// Sweeps of dropout batches (node->hyperedge, hyperedge->node, marginals,
// field) until the marginal change stays below eps for `patience` sweeps or
// max_iter sweeps ran. Starts from `initial` when given, else init_messages.
[[nodiscard]] MpResult run_mp(const Hypergraph& graph, const ModelParams& params, const MpConfig& config,
                              std::optional<MessageState> initial = std::nullopt);

// Per-node argmax of the marginals, ties to the lowest label.
[[nodiscard]] Assignment argmax_assignment(const Matrix& marginals);

// Checks column sums and signs; throws NumericalError naming the offender.
void check_state(const MessageState& state, double tol = 1e-10);

}  // namespace hysbm
