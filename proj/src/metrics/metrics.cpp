#include "hysbm/metrics.hpp"

#include "hysbm/error.hpp"
#include "hysbm/likelihood.hpp"
#include "hysbm/mp.hpp"
#include "hysbm/parallel.hpp"
#include "hysbm/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace hysbm {

namespace {

// Minimum-cost assignment on a square matrix; returns row -> column.
std::vector<int> hungarian(const Matrix& cost) {
  const int n = static_cast<int>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> v(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<int> match(static_cast<std::size_t>(n) + 1, 0);
  std::vector<int> way(static_cast<std::size_t>(n) + 1, 0);
  for (int row = 1; row <= n; ++row) {
    match[0] = row;
    int col0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n) + 1, inf);
    std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
    do {
      used[static_cast<std::size_t>(col0)] = 1;
      const int row0 = match[static_cast<std::size_t>(col0)];
      double delta = inf;
      int col1 = 0;
      for (int col = 1; col <= n; ++col) {
        if (used[static_cast<std::size_t>(col)]) continue;
        const double cur = cost(row0 - 1, col - 1) - u[static_cast<std::size_t>(row0)] - v[static_cast<std::size_t>(col)];
        if (cur < minv[static_cast<std::size_t>(col)]) {
          minv[static_cast<std::size_t>(col)] = cur;
          way[static_cast<std::size_t>(col)] = col0;
        }
        if (minv[static_cast<std::size_t>(col)] < delta) {
          delta = minv[static_cast<std::size_t>(col)];
          col1 = col;
        }
      }
      for (int col = 0; col <= n; ++col) {
        if (used[static_cast<std::size_t>(col)]) {
          u[static_cast<std::size_t>(match[static_cast<std::size_t>(col)])] += delta;
          v[static_cast<std::size_t>(col)] -= delta;
        } else {
          minv[static_cast<std::size_t>(col)] -= delta;
        }
      }
      col0 = col1;
    } while (match[static_cast<std::size_t>(col0)] != 0);
    do {
      const int col1 = way[static_cast<std::size_t>(col0)];
      match[static_cast<std::size_t>(col0)] = match[static_cast<std::size_t>(col1)];
      col0 = col1;
    } while (col0 != 0);
  }
  std::vector<int> assignment(static_cast<std::size_t>(n), 0);
  for (int col = 1; col <= n; ++col) assignment[static_cast<std::size_t>(match[static_cast<std::size_t>(col)] - 1)] = col - 1;
  return assignment;
}

Matrix confusion_matrix(const Assignment& truth, const Assignment& predicted, int k) {
  Matrix m = Matrix::Zero(k, k);
  for (std::size_t i = 0; i < truth.size(); ++i) m(truth[i], predicted[i]) += 1.0;
  return m;
}

// Distinct uniform node set of size d (Floyd's algorithm), sorted.
std::vector<NodeId> random_subset(int n, int d, Rng& rng) {
  std::vector<NodeId> out;
  out.reserve(static_cast<std::size_t>(d));
  for (int j = n - d; j < n; ++j) {
    std::uniform_int_distribution<int> pick(0, j);
    const auto t = static_cast<NodeId>(pick(rng));
    if (std::find(out.begin(), out.end(), t) == out.end()) {
      out.push_back(t);
    } else {
      out.push_back(static_cast<NodeId>(j));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<int> best_alignment(const Matrix& confusion) {
  const int k = static_cast<int>(confusion.rows());
  std::vector<int> best(static_cast<std::size_t>(k));
  std::iota(best.begin(), best.end(), 0);
  if (k <= 8) {
    std::vector<int> perm = best;
    double best_score = -1.0;
    do {
      double score = 0.0;
      for (int a = 0; a < k; ++a) score += confusion(perm[static_cast<std::size_t>(a)], a);
      if (score > best_score) {
        best_score = score;
        best = perm;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
  }
  // Rows: predicted labels, columns: truth labels.
  const Matrix cost = -confusion.transpose();
  return hungarian(cost);
}

OverlapResult overlap(const Assignment& predicted, const Assignment& truth, const Vector& n) {
  if (predicted.size() != truth.size()) throw InputError("prediction and truth differ in length");
  if (truth.size() == 0) throw InputError("overlap of an empty assignment");
  const int k = std::max({predicted.num_communities(), truth.num_communities(), static_cast<int>(n.size())});
  if (k < 2) throw InputError("overlap needs K >= 2");
  const double top = n.maxCoeff();
  if (!(top < 1.0)) throw InputError("overlap undefined when one community holds all the prior mass");
  const Matrix confusion = confusion_matrix(truth, predicted, k);
  OverlapResult out;
  out.alignment = best_alignment(confusion);
  double agree = 0.0;
  for (int a = 0; a < k; ++a) agree += confusion(out.alignment[static_cast<std::size_t>(a)], a);
  out.raw = (agree / static_cast<double>(truth.size()) - top) / (1.0 - top);
  out.clamped = std::max(0.0, out.raw);
  return out;
}

OverlapResult overlap(const Matrix& marginals, const Assignment& truth, const Vector& n) {
  return overlap(argmax_assignment(marginals), truth, n);
}

double marginal_overlap(const Matrix& marginals, const Vector& n) {
  if (marginals.cols() == 0) throw InputError("overlap of an empty marginal set");
  const double top = n.maxCoeff();
  if (!(top < 1.0)) throw InputError("overlap undefined when one community holds all the prior mass");
  const double mean_max = marginals.colwise().maxCoeff().mean();
  return (mean_max - top) / (1.0 - top);
}

double nmi(const Assignment& a, const Assignment& b) {
  if (a.size() != b.size()) throw InputError("partitions differ in length");
  if (a.size() == 0) return 0.0;
  const int ka = a.num_communities();
  const int kb = b.num_communities();
  Matrix joint = Matrix::Zero(ka, kb);
  for (std::size_t i = 0; i < a.size(); ++i) joint(a[i], b[i]) += 1.0;
  // Integer counts sum exactly in any order; normalize afterwards.
  const auto total = static_cast<double>(a.size());
  const Vector pa = joint.rowwise().sum() / total;
  const Vector pb = joint.colwise().sum().transpose() / total;
  joint /= total;
  auto entropy = [](const Vector& p) {
    double h = 0.0;
    for (Index x = 0; x < p.size(); ++x) {
      if (p(x) > 0.0) h -= p(x) * std::log(p(x));
    }
    return h;
  };
  const double ha = entropy(pa);
  const double hb = entropy(pb);
  if (ha <= 0.0 || hb <= 0.0) return 0.0;
  // Summed in sorted order so that nmi(a, b) == nmi(b, a) bit for bit.
  std::vector<double> terms;
  for (Index x = 0; x < ka; ++x) {
    for (Index y = 0; y < kb; ++y) {
      if (joint(x, y) > 0.0) terms.push_back(joint(x, y) * std::log(joint(x, y) / (pa(x) * pb(y))));
    }
  }
  std::sort(terms.begin(), terms.end());
  double mi = 0.0;
  for (double t : terms) mi += t;
  return std::clamp(mi / std::sqrt(ha * hb), 0.0, 1.0);
}

double auc_link_prediction(const Hypergraph& graph, const ModelParams& params, const Assignment& labels,
                           std::int64_t num_comparisons, std::uint64_t seed, int workers) {
  if (num_comparisons < 1) throw InputError("AUC needs at least one comparison");
  if (graph.num_hyperedges() == 0) throw InputError("AUC needs at least one observed hyperedge");
  if (static_cast<int>(labels.size()) != graph.num_nodes()) throw InputError("labels and hypergraph differ in N");
  if (params.num_nodes() != graph.num_nodes()) throw InputError("parameters built for a different N");
  for (std::size_t e = 0; e < graph.num_hyperedges(); ++e) {
    if (graph.size_of(e) > params.max_size()) throw InputError("hyperedge larger than the parameter D");
  }
  // Refuse sizes whose whole configuration space is observed.
  std::vector<double> observed(static_cast<std::size_t>(graph.max_size()) + 1, 0.0);
  for (std::size_t e = 0; e < graph.num_hyperedges(); ++e) observed[static_cast<std::size_t>(graph.size_of(e))] += 1.0;
  for (std::size_t d = 2; d < observed.size(); ++d) {
    if (observed[d] > 0.0 && observed[d] >= std::exp(log_binomial(graph.num_nodes(), static_cast<double>(d))) - 0.5) {
      throw InputError("every node set of size " + std::to_string(d) + " is observed; no negatives exist");
    }
  }

  constexpr std::int64_t kBlock = 4096;
  const std::int64_t blocks = (num_comparisons + kBlock - 1) / kBlock;
  std::vector<double> scores(static_cast<std::size_t>(blocks), 0.0);
  parallel_for(static_cast<std::size_t>(blocks), workers, [&](std::size_t block) {
    Rng rng(derive_seed(seed, {0xa0cULL, static_cast<std::uint64_t>(block)}));
    std::uniform_int_distribution<std::size_t> pick_edge(0, graph.num_hyperedges() - 1);
    const std::int64_t begin = static_cast<std::int64_t>(block) * kBlock;
    const std::int64_t end = std::min(num_comparisons, begin + kBlock);
    double score = 0.0;
    for (std::int64_t x = begin; x < end; ++x) {
      const std::size_t e = pick_edge(rng);
      const auto positive = graph.hyperedge(e);
      const int d = graph.size_of(e);
      std::vector<NodeId> negative;
      do {
        negative = random_subset(graph.num_nodes(), d, rng);
      } while (graph.contains(negative));
      const double s_pos = hyperedge_probability(positive, labels, params);
      const double s_neg = hyperedge_probability(negative, labels, params);
      score += s_pos > s_neg ? 1.0 : (s_pos == s_neg ? 0.5 : 0.0);
    }
    scores[block] = score;
  });
  double total = 0.0;
  for (double s : scores) total += s;
  return total / static_cast<double>(num_comparisons);
}

std::vector<double> size_histogram(const Hypergraph& graph) {
  std::vector<double> out(static_cast<std::size_t>(std::max(1, graph.max_size() - 1)), 0.0);
  if (graph.num_hyperedges() == 0) return out;
  for (std::size_t e = 0; e < graph.num_hyperedges(); ++e) out[static_cast<std::size_t>(graph.size_of(e) - 2)] += 1.0;
  for (auto& x : out) x /= static_cast<double>(graph.num_hyperedges());
  return out;
}

}  // namespace hysbm
