#include "hysbm/sampler.hpp"

#include "hysbm/error.hpp"
#include "hysbm/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_set>

namespace hysbm {

namespace {

constexpr std::uint64_t kAssignmentStream = 0x5a5a1;

struct VectorHash {
  std::size_t operator()(const std::vector<NodeId>& v) const {
    std::uint64_t h = 0x84222325cbf29ce4ULL;
    for (NodeId x : v) h = splitmix64(h ^ static_cast<std::uint64_t>(x));
    return static_cast<std::size_t>(h);
  }
};

void enumerate_classes(int remaining, int position, std::vector<int>& current,
                       std::vector<std::vector<int>>& out) {
  const int k = static_cast<int>(current.size());
  if (position == k - 1) {
    current[static_cast<std::size_t>(position)] = remaining;
    out.push_back(current);
    return;
  }
  for (int v = 0; v <= remaining; ++v) {
    current[static_cast<std::size_t>(position)] = v;
    enumerate_classes(remaining - v, position + 1, current, out);
  }
}

// Row-major index of the pair (i, j), i < j, inside the strictly upper triangle.
std::pair<std::int64_t, std::int64_t> triangle_pair(std::int64_t index) {
  auto j = static_cast<std::int64_t>(std::floor((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(index))) / 2.0));
  while (j * (j - 1) / 2 > index) --j;
  while ((j + 1) * j / 2 <= index) ++j;
  return {index - j * (j - 1) / 2, j};
}

using Members = std::vector<std::vector<NodeId>>;

// Exact pair sampling for one community block via geometric skips.
std::vector<std::vector<NodeId>> sample_pair_block(const Members& members, int a, int b, double prob,
                                                   Rng& rng, const SamplerConfig& config) {
  std::vector<std::vector<NodeId>> out;
  const auto& ma = members[static_cast<std::size_t>(a)];
  const auto& mb = members[static_cast<std::size_t>(b)];
  const auto na = static_cast<std::int64_t>(ma.size());
  const auto nb = static_cast<std::int64_t>(mb.size());
  const std::int64_t total = a == b ? na * (na - 1) / 2 : na * nb;
  if (total == 0 || prob <= 0.0) return out;
  if (static_cast<double>(total) * prob > config.max_expected_hyperedges) {
    throw NumericalError("expected " + std::to_string(static_cast<double>(total) * prob) +
                         " pairs in one block; parameters are far from sparse");
  }
  auto emit = [&](std::int64_t index) {
    NodeId u = 0;
    NodeId v = 0;
    if (a == b) {
      auto [i, j] = triangle_pair(index);
      u = ma[static_cast<std::size_t>(i)];
      v = ma[static_cast<std::size_t>(j)];
    } else {
      u = ma[static_cast<std::size_t>(index / nb)];
      v = mb[static_cast<std::size_t>(index % nb)];
    }
    if (u > v) std::swap(u, v);
    out.push_back({u, v});
  };
  if (prob >= 1.0) {
    for (std::int64_t idx = 0; idx < total; ++idx) emit(idx);
    return out;
  }
  std::geometric_distribution<std::int64_t> skip(prob);
  std::int64_t idx = -1;
  while (true) {
    const std::int64_t gap = skip(rng);
    if (gap >= total - idx - 1) break;
    idx += gap + 1;
    emit(idx);
  }
  return out;
}

std::vector<std::vector<NodeId>> sample_class(const Members& members, std::span<const int> counts,
                                              std::int64_t draws, Rng& rng) {
  std::vector<std::vector<NodeId>> out;
  if (draws == 0) return out;
  const int d = [&] {
    int s = 0;
    for (int x : counts) s += x;
    return s;
  }();
  Members pool;
  for (std::size_t a = 0; a < counts.size(); ++a) {
    pool.push_back(counts[a] > 0 ? members[a] : std::vector<NodeId>{});
  }
  std::unordered_set<std::vector<NodeId>, VectorHash> seen;
  out.reserve(static_cast<std::size_t>(draws));
  std::vector<NodeId> e;
  // Repeats are redrawn, so the class holds exactly `draws` distinct
  // hyperedges: a uniform subset of that size. draws <= class size by
  // construction, so the loop ends.
  while (static_cast<std::int64_t>(out.size()) < draws) {
    e.clear();
    e.reserve(static_cast<std::size_t>(d));
    for (std::size_t a = 0; a < counts.size(); ++a) {
      auto& nodes = pool[a];
      const auto size = nodes.size();
      for (int r = 0; r < counts[a]; ++r) {
        std::uniform_int_distribution<std::size_t> pick(static_cast<std::size_t>(r), size - 1);
        std::swap(nodes[static_cast<std::size_t>(r)], nodes[pick(rng)]);
        e.push_back(nodes[static_cast<std::size_t>(r)]);
      }
    }
    std::sort(e.begin(), e.end());
    if (seen.insert(e).second) out.push_back(e);
  }
  return out;
}

}  // namespace

std::vector<std::vector<int>> count_classes(int d, int k) {
  std::vector<std::vector<int>> out;
  if (k < 1 || d < 0) return out;
  std::vector<int> current(static_cast<std::size_t>(k), 0);
  enumerate_classes(d, 0, current, out);
  return out;
}

Assignment sample_assignments(const ModelParams& params, Rng& rng) {
  const Vector& n = params.n();
  const int k = params.num_communities();
  std::vector<double> cumulative(static_cast<std::size_t>(k));
  double acc = 0.0;
  for (int a = 0; a < k; ++a) {
    acc += n(a);
    cumulative[static_cast<std::size_t>(a)] = acc;
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<int> labels(static_cast<std::size_t>(params.num_nodes()));
  for (auto& label : labels) {
    const double u = unit(rng) * acc;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    int a = static_cast<int>(std::min<std::ptrdiff_t>(it - cumulative.begin(), k - 1));
    // Never land on a zero-probability community through rounding.
    while (n(a) <= 0.0 && a > 0) --a;
    while (n(a) <= 0.0 && a < k - 1) ++a;
    label = a;
  }
  return {std::move(labels), k};
}

double pi_from_counts(std::span<const int> counts, const Matrix& p) {
  double total = 0.0;
  const auto k = static_cast<Index>(counts.size());
  for (Index a = 0; a < k; ++a) {
    const double ca = counts[static_cast<std::size_t>(a)];
    total += 0.5 * ca * (ca - 1.0) * p(a, a);
    for (Index b = a + 1; b < k; ++b) total += ca * counts[static_cast<std::size_t>(b)] * p(a, b);
  }
  return total;
}

double log_count_multiplicity(std::span<const int> counts,
                              std::span<const std::int64_t> community_sizes) {
  if (counts.size() != community_sizes.size()) {
    throw InputError("count vector and community sizes differ in length");
  }
  double total = 0.0;
  for (std::size_t a = 0; a < counts.size(); ++a) {
    total += log_binomial(static_cast<double>(community_sizes[a]), counts[a]);
  }
  return total;
}

double count_multiplicity(std::span<const int> counts, std::span<const std::int64_t> community_sizes) {
  const double log_value = log_count_multiplicity(counts, community_sizes);
  return std::isinf(log_value) ? 0.0 : std::round(std::exp(log_value));
}

std::int64_t sample_num_hyperedges(double trials, double prob, Rng& rng, const SamplerConfig& config) {
  if (!(prob >= 0.0 && prob <= 1.0)) {
    throw InputError("hyperedge probability " + std::to_string(prob) + " outside [0, 1]");
  }
  if (!(trials >= 0.0) || !std::isfinite(trials)) throw InputError("invalid trial count");
  if (prob == 0.0 || trials == 0.0) return 0;
  const double mean = trials * prob;
  if (mean > config.max_expected_hyperedges) {
    throw NumericalError("expected " + std::to_string(mean) +
                         " hyperedges in one count class; parameters are far from sparse");
  }
  if (prob == 1.0) return static_cast<std::int64_t>(trials);
  constexpr double kMaxInt = 9.0e18;
  if (config.binomial_mode == BinomialMode::kExact || trials <= config.exact_max_trials) {
    if (trials > kMaxInt) throw NumericalError("exact binomial with more than 2^63 trials");
    std::binomial_distribution<std::int64_t> binom(static_cast<std::int64_t>(std::llround(trials)), prob);
    return binom(rng);
  }
  if (mean <= config.poisson_max_mean && prob <= config.poisson_max_prob) {
    std::poisson_distribution<std::int64_t> poisson(mean);
    return static_cast<std::int64_t>(std::min<double>(static_cast<double>(poisson(rng)), trials));
  }
  std::normal_distribution<double> normal(mean, std::sqrt(mean * (1.0 - prob)));
  const double draw = std::round(normal(rng));
  return static_cast<std::int64_t>(std::clamp(draw, 0.0, std::min(trials, kMaxInt)));
}

double expected_num_hyperedges(int d, const ModelParams& params) {
  const double ratio = params.kappa().ratio(d);
  return 0.5 * static_cast<double>(params.num_nodes()) * ratio * params.n().dot(params.c() * params.n());
}

Hypergraph sample_hypergraph_given(const ModelParams& params, const Assignment& t,
                                   const SamplerConfig& config) {
  const auto num_nodes = static_cast<int>(params.num_nodes());
  if (static_cast<int>(t.size()) != num_nodes) {
    throw InputError("assignment length differs from N");
  }
  const int k = params.num_communities();
  const int max_size = params.max_size();
  Members members(static_cast<std::size_t>(k));
  for (int i = 0; i < num_nodes; ++i) members[static_cast<std::size_t>(t[static_cast<std::size_t>(i)])].push_back(i);
  const auto sizes = t.community_sizes();

  struct Job {
    int d;
    std::vector<int> counts;
  };
  std::vector<Job> jobs;
  for (int d = 2; d <= std::min(max_size, num_nodes); ++d) {
    const double classes = std::exp(log_binomial(d + k - 1.0, k - 1.0));
    if (classes > config.class_budget) {
      throw InputError("hyperedge size d = " + std::to_string(d) + " needs " + std::to_string(classes) +
                       " count classes, above the budget of " + std::to_string(config.class_budget));
    }
    for (auto& counts : count_classes(d, k)) jobs.push_back({d, std::move(counts)});
  }

  std::vector<std::vector<std::vector<NodeId>>> results(jobs.size());
  parallel_for(jobs.size(), config.workers, [&](std::size_t j) {
    const Job& job = jobs[j];
    Rng rng(derive_seed(config.seed, job.counts, static_cast<std::uint64_t>(job.d)));
    const double log_mult = log_count_multiplicity(job.counts, sizes);
    if (std::isinf(log_mult)) return;
    const double prob = std::min(1.0, pi_from_counts(job.counts, params.p()) / params.kappa().kappa(job.d));
    if (prob <= 0.0) return;
    if (job.d == 2) {
      int a = -1;
      int b = -1;
      for (int x = 0; x < k; ++x) {
        for (int r = 0; r < job.counts[static_cast<std::size_t>(x)]; ++r) (a < 0 ? a : b) = x;
      }
      results[j] = sample_pair_block(members, a, b, prob, rng, config);
      return;
    }
    const std::int64_t draws = sample_num_hyperedges(std::exp(log_mult), prob, rng, config);
    results[j] = sample_class(members, job.counts, draws, rng);
  });

  std::vector<std::vector<NodeId>> all;
  std::size_t total = 0;
  for (const auto& r : results) total += r.size();
  all.reserve(total);
  for (auto& r : results) {
    for (auto& e : r) all.push_back(std::move(e));
  }
  return {num_nodes, std::move(all), max_size};
}

SampledHypergraph sample_hypergraph(const ModelParams& params, const SamplerConfig& config) {
  Rng rng(derive_seed(config.seed, {kAssignmentStream}));
  Assignment t = sample_assignments(params, rng);
  Hypergraph graph = sample_hypergraph_given(params, t, config);
  return {std::move(graph), std::move(t)};
}

}  // namespace hysbm
