#pragma once

#include "hysbm/mp.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace hysbm {

// Phase-transition sweep over c_out at fixed average degree c. The kappa
// schedule is always the default one for (N, D).
struct SweepSpec {
  std::int64_t num_nodes = 10000;
  int num_communities = 4;
  double c = 10.0;
  std::vector<int> max_sizes{2};
  std::vector<double> c_out;  // explicit values; c_in = K c - (K-1) c_out
  int seeds = 3;
  std::uint64_t seed = 0;
  MpConfig mp;
  int workers = 0;
};

// c_out values giving `points` evenly spaced ratios c_out / c_in in [lo, hi].
[[nodiscard]] std::vector<double> c_out_grid(int num_communities, double c, int points, double lo = 0.0,
                                             double hi = 1.0);

struct SweepRow {
  double c_out = 0.0;
  double c_in = 0.0;
  double ratio = 0.0;      // c_out / c_in
  double gap = 0.0;        // |c_in - c_out|
  double threshold = 0.0;  // ks_threshold for (K, c, D)
  int max_size = 2;
  int replicate = 0;
  double overlap = 0.0;
  double overlap_raw = 0.0;
  int sweeps = 0;
  bool converged = false;
  double seconds = 0.0;
  std::size_t num_hyperedges = 0;
};

// Rows ordered by (c_out index, D index, replicate) whatever the scheduling.
// Seeds derive from (seed, c_out index, replicate), so every D sees the same
// planted labels stream.
[[nodiscard]] std::vector<SweepRow> run_sweep(const SweepSpec& spec);

void write_sweep_table(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace hysbm
