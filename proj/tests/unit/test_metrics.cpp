#include <doctest.h>

#include "../oracles.hpp"
#include "hysbm/error.hpp"
#include "hysbm/metrics.hpp"
#include "hysbm/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace hysbm;

namespace {

Matrix one_hot(const Assignment& t) {
  Matrix m = Matrix::Zero(t.num_communities(), static_cast<Index>(t.size()));
  for (std::size_t i = 0; i < t.size(); ++i) m(t[i], static_cast<Index>(i)) = 1.0;
  return m;
}

Assignment random_labels(int n, int k, Rng& rng) {
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (auto& l : labels) l = static_cast<int>(rng() % static_cast<unsigned>(k));
  return {labels, k};
}

Assignment relabel(const Assignment& t, const std::vector<int>& sigma) {
  std::vector<int> labels(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) labels[i] = sigma[static_cast<std::size_t>(t[i])];
  return {labels, t.num_communities()};
}

}  // namespace

TEST_CASE("perfect recovery scores one under any relabeling") {
  Rng rng(1);
  const Assignment truth = random_labels(300, 4, rng);
  const Vector n = Vector::Constant(4, 0.25);
  CHECK(overlap(one_hot(truth), truth, n).raw == 1.0);
  const Assignment shuffled = relabel(truth, {2, 0, 3, 1});
  const OverlapResult r = overlap(shuffled, truth, n);
  CHECK(r.raw == 1.0);
  CHECK(r.alignment == std::vector<int>{1, 3, 0, 2});
}

TEST_CASE("prior-valued marginals score zero") {
  Vector n(3);
  n << 0.5, 0.3, 0.2;
  const Matrix m = n.replicate(1, 10);
  CHECK(std::abs(marginal_overlap(m, n)) <= 1e-15);
  std::vector<int> labels{0, 0, 0, 0, 0, 1, 1, 1, 2, 2};
  CHECK(std::abs(overlap(m, Assignment(labels, 3), n).raw) <= 1e-15);
}

TEST_CASE("random marginals sit near zero") {
  Rng rng(2);
  std::vector<int> labels(1000);
  for (int i = 0; i < 1000; ++i) labels[static_cast<std::size_t>(i)] = i % 2;
  Matrix m(2, 1000);
  for (int i = 0; i < 1000; ++i) m.col(i) = sample_flat_dirichlet(2, rng);
  const OverlapResult r = overlap(m, Assignment(labels, 2), Vector::Constant(2, 0.5));
  CHECK(r.raw >= -0.1);
  CHECK(r.raw <= 0.1);
  CHECK(r.clamped == std::max(r.raw, 0.0));
}

TEST_CASE("overlap is invariant under joint relabeling") {
  Rng rng(3);
  for (int rep = 0; rep < 10; ++rep) {
    const int k = 2 + rep % 4;
    const Assignment truth = random_labels(200, k, rng);
    Matrix m(k, 200);
    for (int i = 0; i < 200; ++i) m.col(i) = sample_flat_dirichlet(k, rng);
    std::vector<int> sigma(static_cast<std::size_t>(k));
    std::iota(sigma.begin(), sigma.end(), 0);
    std::shuffle(sigma.begin(), sigma.end(), rng);
    Matrix pm(k, 200);
    for (int a = 0; a < k; ++a) pm.row(sigma[static_cast<std::size_t>(a)]) = m.row(a);
    const Vector n = Vector::Constant(k, 1.0 / k);
    CHECK(overlap(m, truth, n).raw == overlap(pm, relabel(truth, sigma), n).raw);
  }
}

TEST_CASE("Hungarian alignment matches exhaustive search for K = 9") {
  Rng rng(4);
  for (int rep = 0; rep < 3; ++rep) {
    const int k = 9;
    Matrix confusion(k, k);
    for (int a = 0; a < k; ++a) {
      for (int b = 0; b < k; ++b) confusion(a, b) = static_cast<double>(rng() % 50);
    }
    const auto sigma = best_alignment(confusion);
    double got = 0.0;
    for (int a = 0; a < k; ++a) got += confusion(sigma[static_cast<std::size_t>(a)], a);
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    double best = 0.0;
    do {
      double total = 0.0;
      for (int a = 0; a < k; ++a) total += confusion(perm[static_cast<std::size_t>(a)], a);
      best = std::max(best, total);
    } while (std::next_permutation(perm.begin(), perm.end()));
    CHECK(got == best);
  }
}

TEST_CASE("overlap input checks") {
  const Assignment one({0, 0, 0}, 1);
  CHECK_THROWS_AS((void)overlap(one, one, Vector::Ones(1)), InputError);
  const Assignment two({0, 1, 0}, 2);
  CHECK_THROWS_AS((void)overlap(two, Assignment({0, 1}, 2), Vector::Constant(2, 0.5)), InputError);
}

TEST_CASE("nmi examples") {
  Rng rng(5);
  const Assignment a = random_labels(10000, 4, rng);
  const Assignment b = random_labels(10000, 3, rng);
  CHECK(nmi(a, a) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(nmi(a, relabel(a, {3, 2, 1, 0})) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(nmi(a, b) < 0.05);
  CHECK(nmi(a, b) == nmi(b, a));
  const Assignment flat(std::vector<int>(10000, 0), 1);
  CHECK(nmi(a, flat) == 0.0);
}

TEST_CASE("AUC: ties give one half, planted data scores high") {
  // With K = 2 a random pair already shares its label half the time, which
  // caps the attainable AUC near 0.7; four groups leave room.
  const KappaSchedule kappa = KappaSchedule::make_default(800, 3);
  const ModelParams truth = ModelParams::planted(4, 30.0, 2.0, kappa);
  SamplerConfig sc;
  sc.seed = 3;
  const SampledHypergraph s = sample_hypergraph(truth, sc);
  const ModelParams flat = ModelParams::planted(4, 5.0, 5.0, kappa);
  // Within one size every score ties.
  CHECK(auc_link_prediction(s.graph, flat, s.assignment, 20000, 1) == 0.5);
  CHECK(auc_link_prediction(s.graph, truth, s.assignment, 20000, 1) > 0.7);
}

TEST_CASE("AUC flips under a reversed score") {
  // Pairs only: pi = p(a, b), and p' = max p - p reverses every comparison.
  const KappaSchedule kappa = KappaSchedule::make_default(500, 2);
  Rng rng(6);
  Matrix c = oracle::random_symmetric(3, 1.0, 20.0, rng);
  const ModelParams params = ModelParams::from_c(Vector::Constant(3, 1.0 / 3), c, kappa);
  const ModelParams reversed =
      ModelParams::from_c(Vector::Constant(3, 1.0 / 3), Matrix::Constant(3, 3, c.maxCoeff() + 1.0) - c, kappa);
  SamplerConfig sc;
  sc.seed = 8;
  const SampledHypergraph s = sample_hypergraph(params, sc);
  const double up = auc_link_prediction(s.graph, params, s.assignment, 10000, 4);
  const double down = auc_link_prediction(s.graph, reversed, s.assignment, 10000, 4);
  CHECK(up + down == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("AUC is seed-reproducible and worker independent") {
  const KappaSchedule kappa = KappaSchedule::make_default(300, 3);
  const ModelParams truth = ModelParams::planted(2, 12.0, 4.0, kappa);
  SamplerConfig sc;
  const SampledHypergraph s = sample_hypergraph(truth, sc);
  const double a = auc_link_prediction(s.graph, truth, s.assignment, 9000, 2, 1);
  const double b = auc_link_prediction(s.graph, truth, s.assignment, 9000, 2, 3);
  CHECK(a == b);
  CHECK_THROWS_AS((void)auc_link_prediction(s.graph, truth, s.assignment, 0, 2), InputError);
}

TEST_CASE("AUC refuses a fully observed size") {
  const Hypergraph g(3, {{0, 1}, {0, 2}, {1, 2}});
  const ModelParams params = ModelParams::planted(2, 1.0, 1.0, KappaSchedule::make_default(3, 2));
  CHECK_THROWS_AS((void)auc_link_prediction(g, params, Assignment({0, 1, 0}, 2), 10, 1), InputError);
}

TEST_CASE("size histogram") {
  const Hypergraph g(6, {{0, 1}, {1, 2}, {2, 3, 4}, {0, 4, 5, 3}}, 5);
  const auto h = size_histogram(g);
  REQUIRE(h.size() == 4);
  CHECK(h[0] == 0.5);
  CHECK(h[1] == 0.25);
  CHECK(h[2] == 0.25);
  CHECK(h[3] == 0.0);
}
