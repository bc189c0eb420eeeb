#include "hysbm/sweep.hpp"

#include "hysbm/error.hpp"
#include "hysbm/metrics.hpp"
#include "hysbm/parallel.hpp"
#include "hysbm/sampler.hpp"
#include "hysbm/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace hysbm {

std::vector<double> c_out_grid(int num_communities, double c, int points, double lo, double hi) {
  if (points < 1) throw InputError("grid needs at least one point");
  if (!(lo >= 0.0) || !(hi >= lo)) throw InputError("ratio grid needs 0 <= lo <= hi");
  std::vector<double> out;
  for (int x = 0; x < points; ++x) {
    const double r = points == 1 ? lo : lo + (hi - lo) * x / (points - 1);
    // c_in + (K-1) c_out = K c with c_out = r c_in.
    const double c_in = num_communities * c / (1.0 + (num_communities - 1) * r);
    out.push_back(r * c_in);
  }
  return out;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  const int k = spec.num_communities;
  if (k < 2) throw InputError("sweep needs K >= 2");
  if (spec.num_nodes < 2) throw InputError("sweep needs N >= 2");
  if (!(spec.c > 0.0)) throw InputError("sweep needs c > 0");
  if (spec.c_out.empty()) throw InputError("sweep needs at least one c_out value");
  if (spec.max_sizes.empty()) throw InputError("sweep needs at least one D");
  if (spec.seeds < 1) throw InputError("sweep needs at least one seed per point");
  for (double c_out : spec.c_out) {
    if (!(c_out >= 0.0)) throw InputError("c_out must be non-negative");
    if (planted_c_in(k, spec.c, c_out) < 0.0) {
      throw InputError("c_out = " + std::to_string(c_out) + " gives a negative c_in");
    }
  }
  for (int d : spec.max_sizes) {
    if (d < 2 || d > spec.num_nodes) throw InputError("D must lie in [2, N]");
  }

  const std::size_t num_d = spec.max_sizes.size();
  const std::size_t num_rep = static_cast<std::size_t>(spec.seeds);
  const std::size_t jobs = spec.c_out.size() * num_d * num_rep;
  std::vector<SweepRow> rows(jobs);
  std::vector<double> thresholds(num_d);
  for (std::size_t di = 0; di < num_d; ++di) {
    thresholds[di] =
        ks_threshold(k, spec.c, KappaSchedule::make_default(spec.num_nodes, spec.max_sizes[di]));
  }

  const int workers = std::min<int>(resolve_workers(spec.workers), static_cast<int>(jobs));
  parallel_for(jobs, workers, [&](std::size_t job) {
    const std::size_t point = job / (num_d * num_rep);
    const std::size_t di = (job / num_rep) % num_d;
    const std::size_t rep = job % num_rep;
    const double c_out = spec.c_out[point];
    const double c_in = planted_c_in(k, spec.c, c_out);
    const int d = spec.max_sizes[di];
    const ModelParams params =
        ModelParams::planted(k, c_in, c_out, KappaSchedule::make_default(spec.num_nodes, d));

    SamplerConfig sampler;
    sampler.seed = derive_seed(spec.seed, {point, rep});
    sampler.workers = 1;
    const SampledHypergraph sample = sample_hypergraph(params, sampler);

    MpConfig mp = spec.mp;
    mp.seed = derive_seed(spec.seed, {point, rep, 0x6d70ULL});
    mp.workers = workers > 1 ? 1 : spec.mp.workers;
    const MpResult result = run_mp(sample.graph, params, mp);
    const OverlapResult ov = overlap(result.state.marginals, sample.assignment, params.n());

    SweepRow& row = rows[job];
    row.c_out = c_out;
    row.c_in = c_in;
    row.ratio = c_in > 0.0 ? c_out / c_in : std::numeric_limits<double>::infinity();
    row.gap = std::abs(c_in - c_out);
    row.threshold = thresholds[di];
    row.max_size = d;
    row.replicate = static_cast<int>(rep);
    row.overlap = ov.clamped;
    row.overlap_raw = ov.raw;
    row.sweeps = result.sweeps;
    row.converged = result.converged;
    row.seconds = result.seconds;
    row.num_hyperedges = sample.graph.num_hyperedges();
  });
  return rows;
}

void write_sweep_table(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "ratio\tc_out\tc_in\tgap\tD\tseed\toverlap\toverlap_raw\tsweeps\tconverged\tseconds\thyperedges\tthreshold\n";
  const auto precision = out.precision(10);
  for (const auto& r : rows) {
    out << r.ratio << '\t' << r.c_out << '\t' << r.c_in << '\t' << r.gap << '\t' << r.max_size << '\t'
        << r.replicate << '\t' << r.overlap << '\t' << r.overlap_raw << '\t' << r.sweeps << '\t'
        << (r.converged ? 1 : 0) << '\t' << r.seconds << '\t' << r.num_hyperedges << '\t' << r.threshold
        << '\n';
  }
  out.precision(precision);
}

}  // namespace hysbm
