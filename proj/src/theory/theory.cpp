#include "hysbm/theory.hpp"

#include "hysbm/error.hpp"
#include "hysbm/likelihood.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <unordered_map>

namespace hysbm {

namespace {

double log_pair_weight(int d) { return std::log(2.0 / (static_cast<double>(d) * (d - 1))); }

std::uint64_t pair_key(NodeId u, NodeId v) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) | static_cast<std::uint32_t>(v);
}

}  // namespace

double SizeDistribution::mean_size() const {
  double total = 0.0;
  for (std::size_t i = 0; i < prob.size(); ++i) total += static_cast<double>(i + 2) * prob[i];
  return total;
}

double SizeDistribution::mean_log_pair_weight() const {
  double total = 0.0;
  for (std::size_t i = 0; i < prob.size(); ++i) {
    if (prob[i] > 0.0) total += prob[i] * log_pair_weight(static_cast<int>(i) + 2);
  }
  return total;
}

SizeDistribution ensemble_size_distribution(const KappaSchedule& kappa) {
  SizeDistribution dist;
  double total = 0.0;
  for (int d = 2; d <= kappa.max_size(); ++d) {
    dist.prob.push_back(kappa.ratio(d));
    total += kappa.ratio(d);
  }
  if (!(total > 0.0)) throw InputError("kappa schedule gives no hyperedges of any size");
  for (auto& x : dist.prob) x /= total;
  return dist;
}

SizeDistribution ensemble_size_distribution(const ModelParams& params) {
  return ensemble_size_distribution(params.kappa());
}

SizeDistribution empirical_size_distribution(const Hypergraph& graph) {
  if (graph.num_hyperedges() == 0) throw InputError("empirical size distribution of an empty hypergraph");
  SizeDistribution dist;
  dist.prob.assign(static_cast<std::size_t>(graph.max_size() - 1), 0.0);
  for (std::size_t e = 0; e < graph.num_hyperedges(); ++e) dist.prob[static_cast<std::size_t>(graph.size_of(e) - 2)] += 1.0;
  for (auto& x : dist.prob) x /= static_cast<double>(graph.num_hyperedges());
  return dist;
}

double mean_affinity(const Matrix& c, const Vector& n) { return n.dot(c * n); }

Matrix transition_matrix(const Matrix& c, const Vector& n, int f_size) {
  if (f_size < 2) throw InputError("hyperedge size must be at least 2");
  const double cbar = mean_affinity(c, n);
  if (!(cbar > 0.0)) throw InputError("transition matrix needs a positive average affinity");
  const double prefactor = 2.0 / (static_cast<double>(f_size) * (f_size - 1));
  return prefactor * (n.asDiagonal() * (c.array() / cbar - 1.0).matrix());
}

double leading_eigenvalue(const Matrix& c, const Vector& n) {
  const double cbar = mean_affinity(c, n);
  if (!(cbar > 0.0)) throw InputError("leading eigenvalue needs a positive average affinity");
  // diag(n) M is similar to the symmetric diag(sqrt n) M diag(sqrt n).
  const Vector root = n.cwiseMax(0.0).cwiseSqrt();
  const Matrix sym = root.asDiagonal() * (c.array() / cbar - 1.0).matrix() * root.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (sym + sym.transpose()), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

StabilityResult stability_criterion(double d0, const SizeDistribution& dist, const Matrix& c, const Vector& n) {
  StabilityResult out;
  out.d0 = d0;
  out.lambda = leading_eigenvalue(c, n);
  const double mu = std::exp(dist.mean_log_pair_weight());
  out.lhs = d0 * (dist.mean_size() - 1.0) * mu * mu * out.lambda * out.lambda;
  out.margin = 1.0 - out.lhs;
  out.stable = out.lhs < 1.0;
  return out;
}

StabilityResult stability_criterion(const ModelParams& params) {
  return stability_criterion(expected_degree(params), ensemble_size_distribution(params), params.c(), params.n());
}

double ks_threshold(int num_communities, double c, double d0, const SizeDistribution& dist) {
  if (num_communities < 1) throw InputError("K must be positive");
  if (!(c > 0.0)) throw InputError("c must be positive");
  if (num_communities == 1) return 0.0;
  const double spread = d0 * (dist.mean_size() - 1.0);
  if (!(spread > 0.0)) throw InputError("threshold needs a positive d0 (F - 1)");
  return num_communities * c / std::sqrt(spread) * std::exp(-dist.mean_log_pair_weight());
}

double ks_threshold(int num_communities, double c, const KappaSchedule& kappa) {
  return ks_threshold(num_communities, c, 0.5 * kappa.C() * c, ensemble_size_distribution(kappa));
}

PhiDecomposition phi_decomposition(int num_communities, double c, double big_c, const SizeDistribution& dist) {
  if (num_communities < 1) throw InputError("K must be positive");
  if (!(c > 0.0)) throw InputError("c must be positive");
  PhiDecomposition out;
  out.alpha = static_cast<double>(num_communities - 1) / num_communities;
  out.beta = 1.0 / std::sqrt(c);
  out.gamma1 = std::exp(-dist.mean_log_pair_weight());
  out.gamma2 = 1.0 / std::sqrt(big_c * (dist.mean_size() - 1.0) / 2.0);
  out.gamma = out.gamma1 * out.gamma2;
  out.phi = out.alpha * out.beta * out.gamma;
  return out;
}

PhiDecomposition phi_decomposition(int num_communities, double c, const KappaSchedule& kappa) {
  return phi_decomposition(num_communities, c, kappa.C(), ensemble_size_distribution(kappa));
}

EntropyDiagnostics entropy_diagnostics(const Hypergraph& graph) {
  const std::size_t num_edges = graph.num_hyperedges();
  if (num_edges == 0) throw InputError("entropy diagnostics need at least one hyperedge");
  const double inv_e = 1.0 / static_cast<double>(num_edges);
  EntropyDiagnostics out;

  std::unordered_map<std::uint64_t, double> clique;
  clique.reserve(num_edges * 3);
  for (std::size_t e = 0; e < num_edges; ++e) {
    const auto members = graph.hyperedge(e);
    const int d = graph.size_of(e);
    const double joint = inv_e * 2.0 / (static_cast<double>(d) * (d - 1));
    for (int x = 0; x < d; ++x) {
      for (int y = x + 1; y < d; ++y) {
        clique[pair_key(members[static_cast<std::size_t>(x)], members[static_cast<std::size_t>(y)])] += joint;
        out.entropy_joint -= joint * std::log(joint);
      }
    }
  }
  out.entropy_hyperedge = std::log(static_cast<double>(num_edges));
  for (const auto& [key, prob] : clique) out.entropy_clique -= prob * std::log(prob);

  for (std::size_t e = 0; e < num_edges; ++e) {
    const auto members = graph.hyperedge(e);
    const int d = graph.size_of(e);
    const double joint = inv_e * 2.0 / (static_cast<double>(d) * (d - 1));
    for (int x = 0; x < d; ++x) {
      for (int y = x + 1; y < d; ++y) {
        const double pc = clique.at(pair_key(members[static_cast<std::size_t>(x)], members[static_cast<std::size_t>(y)]));
        out.kl_divergence += joint * std::log(joint / (pc * inv_e));
      }
    }
  }
  out.conditional_entropy = out.entropy_joint - out.entropy_hyperedge;
  out.perplexity_ratio = std::exp(out.entropy_joint) / std::exp(out.entropy_hyperedge);
  out.mutual_information = out.entropy_clique - out.conditional_entropy;
  out.log_gamma1 = out.conditional_entropy;
  return out;
}

}  // namespace hysbm
