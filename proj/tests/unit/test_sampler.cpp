#include <doctest.h>

#include "../oracles.hpp"
#include "hysbm/error.hpp"
#include "hysbm/kappa.hpp"
#include "hysbm/likelihood.hpp"
#include "hysbm/sampler.hpp"

#include <cmath>
#include <map>

using namespace hysbm;

namespace {

std::vector<std::vector<NodeId>> edges_of(const Hypergraph& g) {
  std::vector<std::vector<NodeId>> out;
  for (std::size_t e = 0; e < g.num_hyperedges(); ++e) {
    const auto h = g.hyperedge(e);
    out.emplace_back(h.begin(), h.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("assignment examples") {
  Rng rng(3);
  Vector n(2);
  n << 1.0, 0.0;
  const ModelParams degenerate(n, Matrix::Zero(2, 2), KappaSchedule::make_default(5, 2));
  const Assignment t = sample_assignments(degenerate, rng);
  for (std::size_t i = 0; i < t.size(); ++i) CHECK(t[i] == 0);

  const ModelParams single(Vector::Ones(1), Matrix::Zero(1, 1), KappaSchedule::make_default(7, 2));
  const Assignment s = sample_assignments(single, rng);
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(s[i] == 0);

  const ModelParams half(Vector::Constant(2, 0.5), Matrix::Zero(2, 2), KappaSchedule::make_default(10000, 2));
  const auto sizes = sample_assignments(half, rng).community_sizes();
  CHECK(std::abs(static_cast<double>(sizes[0]) - 5000.0) <= 4.0 * std::sqrt(2500.0));
}

TEST_CASE("pi_from_counts examples and agreement with hyperedge_pi") {
  Matrix p(2, 2);
  p << 0.1, 0.2, 0.2, 0.3;
  const std::vector<int> counts{2, 1};
  CHECK(pi_from_counts(counts, p) == doctest::Approx(0.5).epsilon(1e-15));
  const std::vector<int> pure{5, 0};
  CHECK(pi_from_counts(pure, p) == doctest::Approx(10 * 0.1).epsilon(1e-15));

  Rng rng(8);
  for (int rep = 0; rep < 50; ++rep) {
    const int k = 1 + rep % 4;
    const Matrix a = oracle::random_symmetric(k, 0.0, 1.0, rng);
    const int d = 2 + rep % 5;
    std::vector<int> labels(static_cast<std::size_t>(d));
    std::vector<int> cnt(static_cast<std::size_t>(k), 0);
    std::vector<NodeId> e(static_cast<std::size_t>(d));
    for (int x = 0; x < d; ++x) {
      labels[static_cast<std::size_t>(x)] = static_cast<int>(rng() % static_cast<unsigned>(k));
      ++cnt[static_cast<std::size_t>(labels[static_cast<std::size_t>(x)])];
      e[static_cast<std::size_t>(x)] = x;
    }
    CHECK(oracle::rel_err(pi_from_counts(cnt, a), hyperedge_pi(e, Assignment(labels, k), a)) <= 1e-13);
  }
}

TEST_CASE("count multiplicity examples") {
  const std::vector<std::int64_t> sizes{3, 2};
  const std::vector<int> c21{2, 1};
  const std::vector<int> all{3, 2};
  const std::vector<int> impossible{4, 0};
  CHECK(count_multiplicity(c21, sizes) == 6.0);
  CHECK(count_multiplicity(all, sizes) == 1.0);
  CHECK(count_multiplicity(impossible, sizes) == 0.0);
  CHECK(std::isinf(log_count_multiplicity(impossible, sizes)));
}

TEST_CASE("count classes are lexicographic and complete") {
  const auto classes = count_classes(3, 2);
  REQUIRE(classes.size() == 4);
  CHECK(classes.front() == std::vector<int>{0, 3});
  CHECK(classes.back() == std::vector<int>{3, 0});
  // binom(d + K - 1, K - 1)
  CHECK(count_classes(5, 4).size() == 56);
}

TEST_CASE("binomial draw edge cases and the large-trial regime") {
  Rng rng(1);
  SamplerConfig config;
  CHECK(sample_num_hyperedges(1000.0, 0.0, rng, config) == 0);
  CHECK(sample_num_hyperedges(1000.0, 1.0, rng, config) == 1000);
  CHECK_THROWS_AS((void)sample_num_hyperedges(10.0, 1.5, rng, config), InputError);
  const int draws = 10000;
  double sum = 0.0;
  for (int x = 0; x < draws; ++x) sum += static_cast<double>(sample_num_hyperedges(1e8, 1e-7, rng, config));
  const double sigma = std::sqrt(1e8 * 1e-7 * (1 - 1e-7) / draws);
  CHECK(std::abs(sum / draws - 10.0) <= 5.0 * sigma);
}

TEST_CASE("expected hyperedge counts") {
  const ModelParams params = ModelParams::planted(4, 10.0, 10.0, KappaSchedule::make_default(10000, 10));
  CHECK(expected_num_hyperedges(2, params) == doctest::Approx(50000.0).epsilon(1e-12));
  for (int d = 2; d <= 10; ++d) {
    CHECK(expected_num_hyperedges(d, params) == doctest::Approx(10000.0 * 10.0 / (d * (d - 1))).epsilon(1e-10));
  }
  const ModelParams zero = ModelParams::planted(2, 0.0, 0.0, KappaSchedule::make_default(100, 3));
  CHECK(expected_num_hyperedges(3, zero) == 0.0);
}

TEST_CASE("zero affinity gives no hyperedges") {
  const ModelParams params = ModelParams::planted(3, 0.0, 0.0, KappaSchedule::make_default(200, 4));
  SamplerConfig config;
  CHECK(sample_hypergraph(params, config).graph.num_hyperedges() == 0);
}

TEST_CASE("sampling is deterministic and independent of the worker count") {
  const ModelParams params = ModelParams::planted(3, 12.0, 3.0, KappaSchedule::make_default(500, 5));
  SamplerConfig one;
  one.seed = 42;
  one.workers = 1;
  SamplerConfig many = one;
  many.workers = 4;
  const SampledHypergraph a = sample_hypergraph(params, one);
  const SampledHypergraph b = sample_hypergraph(params, many);
  const SampledHypergraph c = sample_hypergraph(params, one);
  CHECK(edges_of(a.graph) == edges_of(b.graph));
  CHECK(edges_of(a.graph) == edges_of(c.graph));
  CHECK(std::equal(a.assignment.labels().begin(), a.assignment.labels().end(), b.assignment.labels().begin()));
  CHECK(a.graph.max_size() == 5);
  for (std::size_t e = 0; e < a.graph.num_hyperedges(); ++e) {
    CHECK(a.graph.size_of(e) >= 2);
    CHECK(a.graph.size_of(e) <= 5);
  }
  SamplerConfig other = one;
  other.seed = 43;
  CHECK(edges_of(sample_hypergraph(params, other).graph) != edges_of(a.graph));
}

TEST_CASE("tiny instance: per-class counts follow the binomial law") {
  // N = 12, K = 2, D = 3, exact binomial mode. Probabilities are large enough
  // that discarding repeats without redrawing would show up as a bias.
  const int n = 12;
  Matrix p(2, 2);
  p << 0.9, 0.3, 0.3, 0.6;
  const ModelParams params(Vector::Constant(2, 0.5), p, KappaSchedule::make_default(n, 3));
  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) labels[static_cast<std::size_t>(i)] = i < 5 ? 0 : 1;
  const Assignment t(labels, 2);
  const auto sizes = t.community_sizes();

  std::map<std::vector<int>, double> sum;
  std::map<std::vector<int>, double> sum_sq;
  SamplerConfig config;
  config.binomial_mode = BinomialMode::kExact;
  config.workers = 1;
  const int runs = 100000;
  for (int run = 0; run < runs; ++run) {
    config.seed = static_cast<std::uint64_t>(run);
    const Hypergraph g = sample_hypergraph_given(params, t, config);
    std::map<std::vector<int>, int> counts;
    for (std::size_t e = 0; e < g.num_hyperedges(); ++e) {
      std::vector<int> key(2, 0);
      for (NodeId v : g.hyperedge(e)) ++key[static_cast<std::size_t>(labels[static_cast<std::size_t>(v)])];
      ++counts[key];
    }
    for (int d = 2; d <= 3; ++d) {
      for (const auto& cls : count_classes(d, 2)) {
        const double x = counts[cls];
        sum[cls] += x;
        sum_sq[cls] += x * x;
      }
    }
  }
  for (int d = 2; d <= 3; ++d) {
    for (const auto& cls : count_classes(d, 2)) {
      const double trials = count_multiplicity(cls, sizes);
      const double prob = pi_from_counts(cls, p) / params.kappa().kappa(d);
      const double mean = trials * prob;
      const double var = trials * prob * (1 - prob);
      const double got_mean = sum[cls] / runs;
      const double got_var = sum_sq[cls] / runs - got_mean * got_mean;
      INFO("class (" << cls[0] << "," << cls[1] << ") mean " << got_mean << " want " << mean);
      CHECK(std::abs(got_mean - mean) <= 4.0 * std::sqrt(var / runs));
      // Variance of the sample variance ~ 2 var^2 / runs for a near-normal law.
      CHECK(std::abs(got_var - var) <= 4.0 * std::sqrt(2.0 / runs) * var + 1e-12);
    }
  }
}

TEST_CASE("equal expected degree across groups under the equal-degree constraint") {
  // Row sums of c times n all equal c: every group has the same mean degree.
  const int k = 3;
  const ModelParams params = ModelParams::planted(k, 20.0, 5.0, KappaSchedule::make_default(6000, 4));
  SamplerConfig config;
  config.seed = 17;
  const SampledHypergraph s = sample_hypergraph(params, config);
  std::vector<double> total(k, 0.0);
  std::vector<double> total_sq(k, 0.0);
  const auto sizes = s.assignment.community_sizes();
  for (NodeId i = 0; i < s.graph.num_nodes(); ++i) {
    const double deg = static_cast<double>(s.graph.degree(i));
    total[static_cast<std::size_t>(s.assignment[static_cast<std::size_t>(i)])] += deg;
    total_sq[static_cast<std::size_t>(s.assignment[static_cast<std::size_t>(i)])] += deg * deg;
  }
  double pooled = 0.0;
  for (int a = 0; a < k; ++a) pooled += total[static_cast<std::size_t>(a)];
  pooled /= s.graph.num_nodes();
  for (int a = 0; a < k; ++a) {
    const auto na = static_cast<double>(sizes[static_cast<std::size_t>(a)]);
    const double mean = total[static_cast<std::size_t>(a)] / na;
    const double var = total_sq[static_cast<std::size_t>(a)] / na - mean * mean;
    CHECK(std::abs(mean - pooled) <= 3.0 * std::sqrt(var / na));
  }
  CHECK(pooled == doctest::Approx(expected_degree(params)).epsilon(0.05));
}

TEST_CASE("class budget guard names the size") {
  const ModelParams params = ModelParams::planted(20, 1.0, 1.0, KappaSchedule::make_default(100, 8));
  SamplerConfig config;
  config.class_budget = 1000;
  try {
    (void)sample_hypergraph(params, config);
    FAIL("expected a budget error");
  } catch (const InputError& err) {
    CHECK(std::string(err.what()).find("d = ") != std::string::npos);
  }
}
