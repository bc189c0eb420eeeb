#pragma once

#include "hysbm/types.hpp"

namespace hysbm {

// Hyperedge-to-node kernel. `incoming` is K x m, column j holding the
// message q_{j->e} of the j-th member; columns must sum to one. Returns K x m with
//   psi(a, i) = sum over labels of the other members of
//               pi_e * prod_{j != i} q_{j->e}(t_j),   t_i = a,
// where pi_e sums `affinity` over member pairs. Prefix and suffix sums give
// all members in O(K^2 m).
[[nodiscard]] Matrix dp_hye_to_node(const Matrix& incoming, const Matrix& affinity);

// Scratch buffers for the allocation-free overload below.
struct DpWorkspace {
  Matrix aq;        // affinity * incoming
  Matrix pre;       // running sums of incoming columns before i
  Matrix apre;      // affinity * pre
  Vector pair_pre;  // pair sums strictly before i
  Vector pair_suf;  // pair sums strictly after i
};

// Same kernel writing into `out` (K x m), reusing `ws` across calls.
void dp_hye_to_node(const Eigen::Ref<const Matrix>& incoming, const Matrix& affinity, DpWorkspace& ws,
                    Eigen::Ref<Matrix> out);

// Same quantity for a single member via the two-step s / eta recursion,
// O(K^2 m) per member.
[[nodiscard]] Vector dp_hye_to_node_recursive(const Matrix& incoming, const Matrix& affinity, Index member);

// sum over all member labels of pi_e * prod_j q_{j->e}(t_j), via the running
// pair-sum recursion in O(K^2 m).
[[nodiscard]] double dp_hyperedge_evidence(const Matrix& incoming, const Matrix& affinity);

}  // namespace hysbm
