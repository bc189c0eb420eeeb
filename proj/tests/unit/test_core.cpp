#include <doctest.h>

#include "../oracles.hpp"
#include "hysbm/error.hpp"
#include "hysbm/hypergraph.hpp"
#include "hysbm/kappa.hpp"
#include "hysbm/likelihood.hpp"
#include "hysbm/params.hpp"
#include "hysbm/random.hpp"

#include <cmath>
#include <sstream>

using namespace hysbm;

namespace {

// Every unordered node set of size 2..D, ascending.
void for_each_subset(int n, int d_max, const std::function<void(const std::vector<NodeId>&)>& body) {
  for (int mask = 1; mask < (1 << n); ++mask) {
    std::vector<NodeId> e;
    for (int i = 0; i < n; ++i) {
      if (mask & (1 << i)) e.push_back(i);
    }
    if (e.size() >= 2 && static_cast<int>(e.size()) <= d_max) body(e);
  }
}

}  // namespace

TEST_CASE("hypergraph rejects malformed hyperedges") {
  CHECK_THROWS_AS(Hypergraph(3, {{0}}), InputError);
  CHECK_THROWS_AS(Hypergraph(3, {{0, 0}}), InputError);
  CHECK_THROWS_AS(Hypergraph(3, {{0, 3}}), InputError);
  CHECK_THROWS_AS(Hypergraph(3, {{0, 1}, {1, 0}}), InputError);
  CHECK_THROWS_AS(Hypergraph(4, {{0, 1, 2}}, 2), InputError);
}

TEST_CASE("hypergraph incidence and pair indexing") {
  const Hypergraph g(5, {{2, 0, 1}, {3, 4}, {1, 3}});
  CHECK(g.num_hyperedges() == 3);
  CHECK(g.num_pairs() == 7);
  CHECK(g.max_size() == 3);
  CHECK(g.hyperedge(0)[0] == 0);
  CHECK(g.hyperedge(0)[2] == 2);
  CHECK(g.degree(1) == 2);
  CHECK(g.degree(4) == 1);
  for (NodeId i = 0; i < g.num_nodes(); ++i) {
    for (std::size_t pair : g.incident_pairs(i)) {
      CHECK(g.pair_node(pair) == i);
      const std::size_t e = g.pair_hyperedge(pair);
      CHECK(pair >= g.pair_offset(e));
      CHECK(pair < g.pair_offset(e) + static_cast<std::size_t>(g.size_of(e)));
    }
  }
  const std::vector<NodeId> probe{1, 3};
  CHECK(g.contains(probe));
  const std::vector<NodeId> missing{0, 4};
  CHECK_FALSE(g.contains(missing));
  const Hypergraph pairs_only = g.truncated(2);
  CHECK(pairs_only.num_hyperedges() == 2);
  CHECK(pairs_only.num_nodes() == 5);
}

TEST_CASE("text format round trip with string labels") {
  std::istringstream in("# comment\nalice bob carol\nbob dave\n\n");
  const Hypergraph g = read_hypergraph(in, 6);
  CHECK(g.num_nodes() == 6);
  CHECK(g.num_hyperedges() == 2);
  REQUIRE(g.node_labels().size() >= 4);
  CHECK(g.node_labels()[0] == "alice");
  CHECK(g.node_labels()[3] == "dave");
  std::ostringstream out;
  write_hypergraph(out, g);
  std::istringstream back(out.str());
  const Hypergraph again = read_hypergraph(back);
  CHECK(again.num_hyperedges() == 2);
  CHECK(again.node_labels()[1] == "bob");
}

TEST_CASE("duplicate hyperedge lines name the line") {
  std::istringstream in("1 2 3\n4 5\n3 2 1\n");
  try {
    (void)read_hypergraph(in);
    FAIL("expected an error");
  } catch (const InputError& err) {
    CHECK(std::string(err.what()).find("3") != std::string::npos);
  }
}

TEST_CASE("canonical order follows first appearance") {
  const Hypergraph g(5, {{3, 4}, {0, 3}});
  const CanonicalHypergraph canon = canonical_order(g);
  CHECK(canon.new_id[3] == 0);
  CHECK(canon.new_id[4] == 1);
  CHECK(canon.new_id[0] == 2);
  CHECK(canon.graph.num_hyperedges() == 2);
}

TEST_CASE("hyperedge_pi examples") {
  Matrix p(2, 2);
  p << 0.1, 0.2, 0.2, 0.3;
  const Assignment t({0, 0, 1}, 2);
  const std::vector<NodeId> pair{0, 1};
  const std::vector<NodeId> triple{0, 1, 2};
  CHECK(hyperedge_pi(pair, t, p) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(hyperedge_pi(triple, t, p) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(hyperedge_pi(triple, t, Matrix::Zero(2, 2)) == 0.0);
}

TEST_CASE("hyperedge_probability examples") {
  Matrix p(2, 2);
  p << 0.1, 0.2, 0.2, 0.3;
  const ModelParams params(Vector::Constant(2, 0.5), p, KappaSchedule::make_default(5, 3));
  const Assignment t({0, 0, 1, 1, 1}, 2);
  const std::vector<NodeId> pair{0, 1};
  const std::vector<NodeId> triple{0, 1, 2};
  CHECK(params.kappa().kappa(3) == doctest::Approx(9.0).epsilon(1e-14));
  CHECK(hyperedge_probability(pair, t, params) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(hyperedge_probability(triple, t, params) == doctest::Approx(0.5 / 9.0).epsilon(1e-14));
}

TEST_CASE("pi over kappa stays in [0, 1] for every label pattern") {
  for (int k = 1; k <= 4; ++k) {
    for (int d = 2; d <= 5; ++d) {
      const ModelParams params(Vector::Constant(k, 1.0 / k), Matrix::Ones(k, k),
                               KappaSchedule::make_default(12, d));
      std::vector<int> labels(static_cast<std::size_t>(d), 0);
      std::vector<NodeId> e(static_cast<std::size_t>(d));
      for (int x = 0; x < d; ++x) e[static_cast<std::size_t>(x)] = x;
      do {
        std::vector<int> full(labels);
        full.resize(12, 0);
        const double prob = hyperedge_probability(e, Assignment(full, k), params);
        CHECK(prob >= 0.0);
        CHECK(prob <= 1.0 + 1e-12);
      } while (oracle::next_labels(labels, k));
    }
  }
}

TEST_CASE("kappa constants: default closed forms and direct summation") {
  for (int d_max : {2, 3, 10, 50}) {
    const KappaSchedule kappa = KappaSchedule::make_default(10000, d_max);
    CHECK(kappa.C() == doctest::Approx(2.0 * harmonic_number(d_max - 1)).epsilon(1e-12));
    double c = 0.0;
    double c1 = 0.0;
    double c3 = 0.0;
    for (int d = 2; d <= d_max; ++d) {
      const double ratio = std::exp(log_binomial(9998, d - 2) - kappa.log_kappa(d));
      c += d * ratio;
      c1 += ratio;
      c3 += (1 - d) * ratio;
    }
    CHECK(oracle::rel_err(kappa.C(), c) <= 1e-12);
    CHECK(oracle::rel_err(kappa.C_prime(), c1) <= 1e-12);
    CHECK(oracle::rel_err(kappa.C_triple_prime(), c3) <= 1e-12);
  }
  const KappaSchedule pairs = KappaSchedule::make_default(100, 2);
  CHECK(pairs.C() == doctest::Approx(2.0));
  CHECK(pairs.C_prime() == doctest::Approx(1.0));
  CHECK(pairs.C_triple_prime() == doctest::Approx(-1.0));
}

TEST_CASE("kappa validity check") {
  CHECK_THROWS_AS(KappaSchedule::from_values(10, 3, {1.0, 2.0}), InputError);
  CHECK_THROWS_AS(KappaSchedule::from_values(10, 3, {1.0}), InputError);
  const KappaSchedule ok = KappaSchedule::from_values(10, 3, {1.0, 3.0});
  CHECK(ok.kappa(3) == doctest::Approx(3.0));
  CHECK_FALSE(ok.is_default());
  CHECK_THROWS_AS((void)ok.kappa(4), InputError);
}

TEST_CASE("params validation and json round trip") {
  const KappaSchedule kappa = KappaSchedule::make_default(50, 3);
  CHECK_THROWS_AS(ModelParams(Vector::Constant(2, 0.4), Matrix::Zero(2, 2), kappa), InputError);
  Matrix asym(2, 2);
  asym << 0.1, 0.2, 0.3, 0.1;
  CHECK_THROWS_AS(ModelParams(Vector::Constant(2, 0.5), asym, kappa), InputError);
  CHECK_THROWS_AS(ModelParams(Vector::Constant(2, 0.5), Matrix::Constant(2, 2, 1.5), kappa), InputError);

  Matrix p(2, 2);
  p << 0.1, 0.02, 0.02, 0.3;
  Vector n(2);
  n << 0.25, 0.75;
  const ModelParams params(n, p, kappa);
  CHECK(params.c()(0, 0) == doctest::Approx(5.0));
  const ModelParams back = params_from_json(params_to_json(params), 50);
  CHECK((back.p() - params.p()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.n() - params.n()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(back.max_size() == 3);
  CHECK(back.kappa().is_default());
  CHECK_THROWS_AS((void)params_from_json("{\"K\": 2}", 50), InputError);
  CHECK_THROWS_AS((void)params_from_json("not json", 50), InputError);
}

TEST_CASE("log likelihood: one possible edge") {
  const ModelParams params(Vector::Ones(1), Matrix::Constant(1, 1, 0.3), KappaSchedule::make_default(2, 2));
  const Hypergraph g(2, {{0, 1}});
  const ExactLogLikelihood ll = log_likelihood_exact(g, Assignment({0, 0}, 1), params);
  CHECK(ll.value == doctest::Approx(std::log(0.3)).epsilon(1e-14));
}

TEST_CASE("log likelihood: empty graph with zero affinity is the prior term") {
  Vector n(2);
  n << 0.3, 0.7;
  const ModelParams params(n, Matrix::Zero(2, 2), KappaSchedule::make_default(4, 3));
  const Assignment t({0, 1, 1, 0}, 2);
  const ExactLogLikelihood ll = log_likelihood_exact(Hypergraph(4, {}, 3), t, params);
  CHECK(ll.value == doctest::Approx(2.0 * std::log(0.3) + 2.0 * std::log(0.7)).epsilon(1e-14));
}

TEST_CASE("log likelihood matches an independent re-summation") {
  Rng rng(11);
  for (int rep = 0; rep < 10; ++rep) {
    const int n_nodes = 4 + rep % 3;
    const Matrix p = oracle::random_symmetric(2, 0.0, 1.0, rng);
    Vector n = sample_flat_dirichlet(2, rng);
    const ModelParams params(n, p, KappaSchedule::make_default(n_nodes, 3));
    const Hypergraph g = oracle::random_hypergraph(n_nodes, 3, 3, rng);
    std::vector<int> labels(static_cast<std::size_t>(n_nodes));
    for (auto& l : labels) l = static_cast<int>(rng() % 2);
    const Assignment t(labels, 2);

    double want = 0.0;
    for (int l : labels) want += std::log(n(l));
    for_each_subset(n_nodes, 3, [&](const std::vector<NodeId>& e) {
      double pi = 0.0;
      for (std::size_t x = 0; x < e.size(); ++x) {
        for (std::size_t y = x + 1; y < e.size(); ++y) pi += p(labels[e[x]], labels[e[y]]);
      }
      const double q = pi / params.kappa().kappa(static_cast<int>(e.size()));
      want += g.contains(e) ? std::log(q) : std::log1p(-q);
    });
    const ExactLogLikelihood ll = log_likelihood_exact(g, t, params);
    if (std::isfinite(want)) {
      CHECK(oracle::rel_err(ll.value, want) <= 1e-12);
    } else {
      CHECK(ll.impossible);
    }
  }
}

TEST_CASE("pairs-only likelihood equals the dyadic Bernoulli likelihood") {
  Rng rng(5);
  const Matrix p = oracle::random_symmetric(3, 0.05, 0.9, rng);
  const ModelParams params(Vector::Constant(3, 1.0 / 3), p, KappaSchedule::make_default(7, 2));
  const Hypergraph g = oracle::random_hypergraph(7, 8, 2, rng);
  std::vector<int> labels(7);
  for (auto& l : labels) l = static_cast<int>(rng() % 3);
  double want = 7 * std::log(1.0 / 3);
  for (int i = 0; i < 7; ++i) {
    for (int j = i + 1; j < 7; ++j) {
      const double q = p(labels[i], labels[j]);
      const std::vector<NodeId> e{i, j};
      want += g.contains(e) ? std::log(q) : std::log(1.0 - q);
    }
  }
  CHECK(oracle::rel_err(log_likelihood_exact(g, Assignment(labels, 3), params).value, want) <= 1e-12);
}

TEST_CASE("likelihood refuses a huge configuration space") {
  const ModelParams params(Vector::Ones(1), Matrix::Constant(1, 1, 0.1), KappaSchedule::make_default(1000, 4));
  const Hypergraph g(1000, {{0, 1}}, 4);
  CHECK_THROWS_AS((void)log_likelihood_exact(g, Assignment(std::vector<int>(1000, 0), 1), params), NumericalError);
}

TEST_CASE("expected degree examples") {
  const ModelParams pairs = ModelParams::planted(4, 10.0, 10.0, KappaSchedule::make_default(10000, 2));
  CHECK(expected_degree(pairs) == doctest::Approx(10.0).epsilon(1e-12));
  const ModelParams big = ModelParams::planted(4, 16.0, 8.0, KappaSchedule::make_default(10000, 50));
  CHECK(expected_degree(big) == doctest::Approx(10.0 * harmonic_number(49)).epsilon(1e-12));
}

TEST_CASE("derive_seed separates streams") {
  CHECK(derive_seed(1, {0, 1}) != derive_seed(1, {1, 0}));
  CHECK(derive_seed(1, {0, 1}) == derive_seed(1, {0, 1}));
  CHECK(derive_seed(1, {0}) != derive_seed(2, {0}));
}
