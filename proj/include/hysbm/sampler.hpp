#pragma once

#include "hysbm/hypergraph.hpp"
#include "hysbm/params.hpp"
#include "hysbm/random.hpp"
#include "hysbm/types.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace hysbm {

enum class BinomialMode { kExact, kAuto };

struct SamplerConfig {
  std::uint64_t seed = 0;
  BinomialMode binomial_mode = BinomialMode::kAuto;
  // Exact binomial up to this many trials.
  double exact_max_trials = 1e5;
  // Poisson when trials * prob <= poisson_max_mean and prob <= poisson_max_prob.
  double poisson_max_mean = 50.0;
  double poisson_max_prob = 1e-3;
  // Refuse a size d whose count classes binom(d + K - 1, K - 1) exceed this.
  double class_budget = 5e6;
  // Refuse a draw whose expected hyperedge count is absurdly large.
  double max_expected_hyperedges = 5e8;
  int workers = 0;
};

// N i.i.d. categorical draws from the prior n.
[[nodiscard]] Assignment sample_assignments(const ModelParams& params, Rng& rng);

// pi for a hyperedge whose members have per-community counts `counts`.
[[nodiscard]] double pi_from_counts(std::span<const int> counts, const Matrix& p);

// log prod_a binom(N_a, #_a); -inf when some #_a > N_a.
[[nodiscard]] double log_count_multiplicity(std::span<const int> counts,
                                            std::span<const std::int64_t> community_sizes);
[[nodiscard]] double count_multiplicity(std::span<const int> counts,
                                        std::span<const std::int64_t> community_sizes);

// Binom(trials, prob) draw. Trials is a double because N_# overflows 64 bits
// for large classes. In auto mode, large classes switch to Poisson or a
// rounded, clamped Gaussian.
[[nodiscard]] std::int64_t sample_num_hyperedges(double trials, double prob, Rng& rng,
                                                 const SamplerConfig& config);

struct SampledHypergraph {
  Hypergraph graph;
  Assignment assignment;
};

// Draws t from the prior, then every hyperedge of size 2..D. Pairs are drawn
// exactly per community block; for d >= 3 each count class gets a binomial
// number of distinct hyperedges realized by uniform draws inside each
// community; a repeat is discarded (first occurrence kept) and drawn again.
// Output depends only on the seed.
[[nodiscard]] SampledHypergraph sample_hypergraph(const ModelParams& params,
                                                  const SamplerConfig& config);
// Same, with a fixed assignment.
[[nodiscard]] Hypergraph sample_hypergraph_given(const ModelParams& params, const Assignment& t,
                                                 const SamplerConfig& config);

// E[omega_d] = (N / 2) binom(N-2, d-2) / kappa_d * sum_{a,b} c_ab n_a n_b.
[[nodiscard]] double expected_num_hyperedges(int d, const ModelParams& params);

// All count vectors of length k summing to d, in lexicographic order
// (0,..,0,d), (0,..,1,d-1), ..., (d,0,..,0).
[[nodiscard]] std::vector<std::vector<int>> count_classes(int d, int k);

}  // namespace hysbm
