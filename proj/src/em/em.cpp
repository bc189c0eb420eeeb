#include "hysbm/em.hpp"

#include "hysbm/energy.hpp"
#include "hysbm/error.hpp"
#include "hysbm/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hysbm {

Vector update_n(const Matrix& marginals) {
  const Index k = marginals.rows();
  Vector n = Vector::Zero(k);
  if (marginals.cols() == 0) {
    n.setConstant(1.0 / static_cast<double>(k));
    return n;
  }
  const Assignment t = argmax_assignment(marginals);
  for (std::size_t i = 0; i < t.size(); ++i) n(t[i]) += 1.0;
  return n / static_cast<double>(marginals.cols());
}

Matrix weighted_pair_counts(const Hypergraph& graph, const Assignment& t, const Matrix& c) {
  const Index k = c.rows();
  const double big_n = graph.num_nodes();
  const Matrix p = c.cwiseMax(kAffinityFloor) / big_n;
  Matrix counts = Matrix::Zero(k, k);
  Matrix local(k, k);
  for (std::size_t e = 0; e < graph.num_hyperedges(); ++e) {
    const auto members = graph.hyperedge(e);
    local.setZero();
    double pi = 0.0;
    for (std::size_t x = 0; x < members.size(); ++x) {
      for (std::size_t y = x + 1; y < members.size(); ++y) {
        const int a = t[static_cast<std::size_t>(members[x])];
        const int b = t[static_cast<std::size_t>(members[y])];
        local(a, b) += 1.0;
        pi += p(a, b);
      }
    }
    counts += local / pi;
  }
  return counts;
}

Matrix update_c(const Hypergraph& graph, const Assignment& t, const Matrix& c, const Vector& n,
                const KappaSchedule& kappa) {
  const Index k = c.rows();
  if (c.cols() != k || n.size() != k) throw InputError("update_c: c and n disagree on K");
  if (static_cast<int>(t.size()) != graph.num_nodes()) throw InputError("update_c: assignment length differs from N");
  const double big_n = graph.num_nodes();
  const Matrix num = weighted_pair_counts(graph, t, c);
  Matrix out = c;
  for (Index a = 0; a < k; ++a) {
    for (Index b = a; b < k; ++b) {
      const double den = big_n * kappa.C_prime() * (big_n * n(a) * n(b) - (a == b ? n(a) : 0.0));
      const double total = a == b ? num(a, a) : num(a, b) + num(b, a);
      if (!(den > 0.0)) {
        if (total > 0.0) {
          warn("community pair (" + std::to_string(a) + ", " + std::to_string(b) +
               ") has hyperedges but no room in n; affinity frozen");
        }
        continue;
      }
      // Averaging the (a,b) and (b,a) updates of a symmetric c gives c (#ab + #ba) / den.
      const double value = std::max(kAffinityFloor, c(a, b) * (a == b ? 2.0 * total : total) / den);
      out(a, b) = value;
      out(b, a) = value;
    }
  }
  return out;
}

ModelParams initial_params(const Hypergraph& graph, int num_communities, const KappaSchedule& kappa, Rng& rng) {
  const int k = num_communities;
  const double big_n = graph.num_nodes();
  double c0 = 2.0 * static_cast<double>(graph.num_hyperedges()) / (kappa.C_prime() * big_n);
  if (!(c0 > 0.0)) c0 = 1.0;
  std::uniform_real_distribution<double> boost(0.0, 0.5);
  Matrix c(k, k);
  for (int a = 0; a < k; ++a) c(a, a) = c0 * (1.0 + boost(rng));
  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) {
      const double value = (k * c0 - 0.5 * (c(a, a) + c(b, b))) / (k - 1);
      c(a, b) = c(b, a) = std::max(kAffinityFloor, value);
    }
  }
  c = c.cwiseMin(big_n);
  return ModelParams::from_c(Vector::Constant(k, 1.0 / k), c, kappa);
}

namespace {

struct RestartOutcome {
  ModelParams params;
  MpResult mp;
  double free_energy = 0.0;
  std::vector<double> trace;
  bool converged = false;
  int iterations = 0;
};

RestartOutcome run_restart(const Hypergraph& graph, const EmConfig& config, const KappaSchedule& kappa,
                           int restart, int mp_workers) {
  const auto r = static_cast<std::uint64_t>(restart);
  Rng rng(derive_seed(config.seed, {0xe1ULL, r}));
  // A supplied start is shared by all restarts; only the message draws differ.
  ModelParams params = config.init ? *config.init : initial_params(graph, config.num_communities, kappa, rng);
  RestartOutcome out;
  std::optional<MessageState> warm;
  const double big_n = graph.num_nodes();
  for (int it = 1; it <= config.max_iter; ++it) {
    MpConfig mp = config.mp;
    mp.seed = derive_seed(config.seed, {0xe2ULL, r, static_cast<std::uint64_t>(it)});
    mp.workers = mp_workers;
    MpResult result;
    try {
      result = run_mp(graph, params, mp, std::move(warm));
    } catch (const NumericalError& ex) {
      throw NumericalError("EM restart " + std::to_string(restart) + ", iteration " + std::to_string(it) + ": " +
                           ex.what());
    }
    const Assignment t = argmax_assignment(result.state.marginals);
    const Vector n_new = update_n(result.state.marginals);
    Matrix c_new = update_c(graph, t, params.c(), n_new, kappa).cwiseMin(big_n);
    const double delta = (n_new - params.n()).cwiseAbs().sum() + (c_new - params.c()).cwiseAbs().sum();
    out.trace.push_back(delta);
    out.iterations = it;
    warm = std::move(result.state);
    params = ModelParams::from_c(n_new, c_new, kappa);
    if (delta < config.eps) {
      out.converged = true;
      break;
    }
  }
  MpConfig mp = config.mp;
  mp.seed = derive_seed(config.seed, {0xe3ULL, r});
  mp.workers = mp_workers;
  out.mp = run_mp(graph, params, mp, std::move(warm));
  out.free_energy = free_energy(graph, params, out.mp.state).F;
  out.params = std::move(params);
  return out;
}

}  // namespace

InferenceResult run_em(const Hypergraph& graph, const EmConfig& config) {
  if (config.num_communities < 1) throw InputError("K must be positive");
  if (config.restarts < 1) throw InputError("at least one restart is required");
  if (!(config.eps > 0.0) || config.max_iter < 1) throw InputError("EM needs eps > 0 and max_iter >= 1");
  const KappaSchedule kappa =
      config.kappa ? *config.kappa : KappaSchedule::make_default(graph.num_nodes(), graph.max_size());
  if (kappa.num_nodes() != graph.num_nodes()) throw InputError("kappa schedule built for a different N");
  if (config.init && config.init->num_communities() != config.num_communities) {
    throw InputError("initial parameters have a different K");
  }
  const int workers = std::min(resolve_workers(config.workers), config.restarts);
  const int mp_workers = workers > 1 ? 1 : config.mp.workers;

  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(config.restarts));
  parallel_for(outcomes.size(), workers, [&](std::size_t r) {
    outcomes[r] = run_restart(graph, config, kappa, static_cast<int>(r), mp_workers);
  });

  InferenceResult result;
  std::size_t best = 0;
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    result.restart_free_energies.push_back(outcomes[r].free_energy);
    // NaN energies never win.
    if (outcomes[r].free_energy < outcomes[best].free_energy || std::isnan(outcomes[best].free_energy)) best = r;
  }
  RestartOutcome& win = outcomes[best];
  result.best_restart = static_cast<int>(best);
  result.params = std::move(win.params);
  result.marginals = win.mp.state.marginals;
  result.assignment = argmax_assignment(result.marginals);
  result.free_energy = win.free_energy;
  result.trace = std::move(win.trace);
  result.converged = win.converged;
  result.iterations = win.iterations;
  result.final_mp = std::move(win.mp);
  return result;
}

}  // namespace hysbm
