#include <doctest.h>

#include "../oracles.hpp"
#include "hysbm/em.hpp"
#include "hysbm/error.hpp"
#include "hysbm/metrics.hpp"
#include "hysbm/sampler.hpp"

#include <cmath>

using namespace hysbm;

TEST_CASE("update_n examples") {
  Matrix peaked(2, 10);
  peaked.row(0).setConstant(0.9);
  peaked.row(1).setConstant(0.1);
  CHECK(update_n(peaked)(0) == 1.0);
  CHECK(update_n(peaked)(1) == 0.0);

  Matrix half = peaked;
  half.rightCols(5).colwise().reverseInPlace();
  CHECK(update_n(half)(0) == 0.5);

  Rng rng(1);
  Matrix random(3, 100);
  for (int i = 0; i < 100; ++i) random.col(i) = sample_flat_dirichlet(3, rng);
  Vector counts = Vector::Zero(3);
  for (int i = 0; i < 100; ++i) {
    Index best = 0;
    random.col(i).maxCoeff(&best);
    counts(best) += 1.0;
  }
  CHECK((update_n(random) - counts / 100.0).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("pairs only: one step is the dyadic hard-assignment maximum") {
  const int n = 60;
  const KappaSchedule kappa = KappaSchedule::make_default(n, 2);
  const ModelParams truth = ModelParams::planted(3, 12.0, 3.0, kappa);
  SamplerConfig sc;
  sc.seed = 4;
  const SampledHypergraph s = sample_hypergraph(truth, sc);
  const Assignment& t = s.assignment;
  const auto sizes = t.community_sizes();
  Matrix edges = Matrix::Zero(3, 3);
  for (std::size_t e = 0; e < s.graph.num_hyperedges(); ++e) {
    const int a = t[static_cast<std::size_t>(s.graph.hyperedge(e)[0])];
    const int b = t[static_cast<std::size_t>(s.graph.hyperedge(e)[1])];
    edges(a, b) += 1.0;
    if (a != b) edges(b, a) += 1.0;
  }
  Vector n_hat(3);
  for (int a = 0; a < 3; ++a) n_hat(a) = static_cast<double>(sizes[static_cast<std::size_t>(a)]) / n;
  const Matrix c = update_c(s.graph, t, truth.c(), n_hat, kappa);
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      const auto na = static_cast<double>(sizes[static_cast<std::size_t>(a)]);
      const auto nb = static_cast<double>(sizes[static_cast<std::size_t>(b)]);
      const double slots = a == b ? na * (na - 1) / 2 : na * nb;
      const double p_hat = std::max(edges(a, b) / slots, kAffinityFloor / n);
      CHECK(c(a, b) / n == doctest::Approx(p_hat).epsilon(1e-12));
    }
  }
}

TEST_CASE("one edge, one community: closed-form maximum") {
  for (int n : {2, 5, 40}) {
    const Hypergraph g(n, {{0, 1}});
    const KappaSchedule kappa = KappaSchedule::make_default(n, 2);
    const Assignment t(std::vector<int>(static_cast<std::size_t>(n), 0), 1);
    const Matrix c = update_c(g, t, Matrix::Constant(1, 1, 0.7), Vector::Ones(1), kappa);
    // p = 1 / binom(N, 2), c = N p.
    CHECK(c(0, 0) == doctest::Approx(2.0 / (n - 1)).epsilon(1e-13));
  }
}

TEST_CASE("update_c is scale consistent and clamps empty blocks") {
  Rng rng(2);
  const Hypergraph g = oracle::random_hypergraph(40, 50, 4, rng);
  const KappaSchedule kappa = KappaSchedule::make_default(40, 4);
  std::vector<int> labels(40);
  for (int i = 0; i < 40; ++i) labels[static_cast<std::size_t>(i)] = i % 2;
  const Assignment t(labels, 2);
  const Matrix c = oracle::random_symmetric(2, 1.0, 5.0, rng);
  const Vector n = Vector::Constant(2, 0.5);
  const Matrix one = update_c(g, t, c, n, kappa);
  const Matrix scaled = update_c(g, t, 40.0 * c, n, kappa);
  CHECK(((one - scaled).array() / one.array()).abs().maxCoeff() <= 1e-12);
  CHECK((one - one.transpose()).cwiseAbs().maxCoeff() == 0.0);

  // Community 1 only meets itself: no hyperedge joins the two groups.
  const Hypergraph split(6, {{0, 1, 2}, {3, 4}, {4, 5}});
  const Assignment halves({0, 0, 0, 1, 1, 1}, 2);
  const Matrix c2 = update_c(split, halves, Matrix::Constant(2, 2, 1.0), n, KappaSchedule::make_default(6, 3));
  CHECK(c2(0, 1) == kAffinityFloor);
  CHECK(c2(0, 0) > kAffinityFloor);
}

TEST_CASE("update_c fixed point") {
  const KappaSchedule kappa = KappaSchedule::make_default(400, 3);
  const ModelParams truth = ModelParams::planted(2, 15.0, 5.0, kappa);
  SamplerConfig sc;
  sc.seed = 6;
  const SampledHypergraph s = sample_hypergraph(truth, sc);
  Matrix onehot = Matrix::Zero(2, 400);
  for (int i = 0; i < 400; ++i) onehot(s.assignment[static_cast<std::size_t>(i)], i) = 1.0;
  const Vector n = update_n(onehot);
  Matrix c = truth.c();
  for (int it = 0; it < 500; ++it) c = update_c(s.graph, s.assignment, c, n, kappa);
  const Matrix next = update_c(s.graph, s.assignment, c, n, kappa);
  CHECK((next - c).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("single community EM matches the hyperedge count") {
  Rng rng(3);
  const Hypergraph g = oracle::random_hypergraph(50, 70, 3, rng);
  EmConfig config;
  config.num_communities = 1;
  config.restarts = 1;
  config.eps = 1e-12;
  config.max_iter = 200;
  const InferenceResult r = run_em(g, config);
  CHECK(r.params.n()(0) == 1.0);
  const double c_prime = KappaSchedule::make_default(50, 3).C_prime();
  CHECK(r.params.c()(0, 0) == doctest::Approx(2.0 * 70 / (c_prime * 49)).epsilon(1e-9));
}

TEST_CASE("EM recovers a planted instance and is reproducible") {
  const KappaSchedule kappa = KappaSchedule::make_default(600, 3);
  const ModelParams truth = ModelParams::planted(2, 18.0, 2.0, kappa);
  SamplerConfig sc;
  sc.seed = 12;
  const SampledHypergraph s = sample_hypergraph(truth, sc);
  EmConfig config;
  config.num_communities = 2;
  config.restarts = 2;
  config.seed = 5;
  config.max_iter = 30;
  const InferenceResult a = run_em(s.graph, config);
  CHECK(overlap(a.assignment, s.assignment, truth.n()).raw > 0.8);
  CHECK(std::abs(a.params.n().sum() - 1.0) <= 1e-12);
  CHECK((a.params.n().array() >= 0.0).all());
  CHECK((a.params.c() - a.params.c().transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.params.c().array() >= kAffinityFloor).all());
  CHECK(a.restart_free_energies.size() == 2);
  CHECK(a.free_energy == a.restart_free_energies[static_cast<std::size_t>(a.best_restart)]);

  config.workers = 1;
  const InferenceResult b = run_em(s.graph, config);
  CHECK((a.params.c() - b.params.c()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.marginals - b.marginals).cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.free_energy == b.free_energy);
}

TEST_CASE("EM validates its configuration") {
  const Hypergraph g(4, {{0, 1}});
  EmConfig config;
  config.restarts = 0;
  CHECK_THROWS_AS((void)run_em(g, config), InputError);
  config.restarts = 1;
  config.num_communities = 0;
  CHECK_THROWS_AS((void)run_em(g, config), InputError);
  config.num_communities = 2;
  config.kappa = KappaSchedule::make_default(9, 2);
  CHECK_THROWS_AS((void)run_em(g, config), InputError);
}
