#include "hysbm/dp.hpp"

#include "hysbm/error.hpp"

namespace hysbm {

Matrix dp_hye_to_node(const Matrix& incoming, const Matrix& affinity) {
  DpWorkspace ws;
  Matrix out(incoming.rows(), incoming.cols());
  dp_hye_to_node(incoming, affinity, ws, out);
  return out;
}

void dp_hye_to_node(const Eigen::Ref<const Matrix>& incoming, const Matrix& affinity, DpWorkspace& ws,
                    Eigen::Ref<Matrix> out) {
  const Index k = incoming.rows();
  const Index m = incoming.cols();
  if (m < 2) throw InputError("hyperedge kernel needs at least two members");
  if (out.rows() != k || out.cols() != m) throw InputError("hyperedge kernel output has the wrong shape");

  // With pre_i = sum_{j<i} q_j and suf_i = sum_{j>i} q_j:
  //   psi_i = A pre_i + A suf_i + pair_pre(i) + pair_suf(i) + pre_i' A suf_i.
  // Every A-product comes from the single product A Q.
  ws.aq.noalias() = affinity * incoming;
  ws.pre.setZero(k, m);
  ws.apre.setZero(k, m);
  ws.pair_pre.setZero(m);
  ws.pair_suf.setZero(m);
  for (Index i = 1; i < m; ++i) {
    ws.pre.col(i) = ws.pre.col(i - 1) + incoming.col(i - 1);
    ws.apre.col(i) = ws.apre.col(i - 1) + ws.aq.col(i - 1);
    ws.pair_pre(i) = ws.pair_pre(i - 1) + incoming.col(i - 1).dot(ws.apre.col(i - 1));
  }
  // out doubles as the running A suf_i, filled from the right.
  out.col(m - 1).setZero();
  for (Index i = m - 2; i >= 0; --i) {
    out.col(i) = out.col(i + 1) + ws.aq.col(i + 1);
    ws.pair_suf(i) = ws.pair_suf(i + 1) + incoming.col(i + 1).dot(out.col(i + 1));
  }
  for (Index i = 0; i < m; ++i) {
    const double rest = ws.pair_pre(i) + ws.pair_suf(i) + ws.pre.col(i).dot(out.col(i));
    out.col(i) += ws.apre.col(i);
    out.col(i).array() += rest;
  }
}

Vector dp_hye_to_node_recursive(const Matrix& incoming, const Matrix& affinity, Index member) {
  const Index k = incoming.rows();
  const Index m = incoming.cols();
  if (m < 2) throw InputError("hyperedge kernel needs at least two members");
  if (member < 0 || member >= m) throw InputError("member index out of range");
  // Visit the other members in order; s(b) accumulates sum_{earlier j} (A q_j)(b).
  Vector s = Vector::Zero(k);
  Vector eta = Vector::Zero(k);
  Vector previous;
  bool first = true;
  for (Index j = 0; j < m; ++j) {
    if (j == member) continue;
    if (!first) s += affinity * previous;
    const auto q = incoming.col(j);
    // exp(eta_n(a)) = exp(eta_{n-1}(a)) + sum_t q_n(t) (A(a, t) + s_n(t))
    eta += affinity * q;
    eta.array() += q.dot(s);
    previous = q;
    first = false;
  }
  return eta;
}

double dp_hyperedge_evidence(const Matrix& incoming, const Matrix& affinity) {
  const Index k = incoming.rows();
  Vector s = Vector::Zero(k);
  double eta = 0.0;
  for (Index j = 0; j < incoming.cols(); ++j) {
    if (j > 0) s += affinity * incoming.col(j - 1);
    eta += incoming.col(j).dot(s);
  }
  return eta;
}

}  // namespace hysbm
