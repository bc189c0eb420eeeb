#include "hysbm/cli.hpp"

#include "hysbm/em.hpp"
#include "hysbm/energy.hpp"
#include "hysbm/error.hpp"
#include "hysbm/io.hpp"
#include "hysbm/likelihood.hpp"
#include "hysbm/metrics.hpp"
#include "hysbm/mp.hpp"
#include "hysbm/params.hpp"
#include "hysbm/sampler.hpp"
#include "hysbm/sweep.hpp"
#include "hysbm/theory.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#ifndef HYSBM_VERSION
#define HYSBM_VERSION "0.0.0"
#endif

namespace hysbm {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// Reads a JSON object into CLI11 config items for the subcommand being run.
// Scalar keys apply directly; an object under that subcommand's name applies
// too; other objects belong to other subcommands and are skipped. Keys the
// subcommand does not know are ignored, so one file can serve several.
class JsonConfig : public CLI::Config {
 public:
  explicit JsonConfig(const CLI::App* root) : root_(root) {}

  std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}"; }

  std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
    json j;
    try {
      in >> j;
    } catch (const json::exception& ex) {
      throw CLI::ConversionError("config file is not valid JSON: " + std::string(ex.what()));
    }
    if (!j.is_object()) throw CLI::ConversionError("config file must hold a JSON object");
    std::vector<CLI::ConfigItem> items;
    const auto used = root_->get_subcommands();
    if (used.empty()) return items;
    const std::string section = used.front()->get_name();
    auto add = [&](const std::string& key, const json& value) {
      CLI::ConfigItem item;
      item.parents = {section};
      item.name = key;
      if (value.is_null()) return;
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(scalar(key, v));
      } else {
        item.inputs.push_back(scalar(key, value));
      }
      items.push_back(std::move(item));
    };
    for (const auto& [key, value] : j.items()) {
      if (value.is_object()) {
        if (key == section) {
          for (const auto& [inner, v] : value.items()) add(inner, v);
        }
        continue;
      }
      add(key, value);
    }
    return items;
  }

 private:
  static std::string scalar(const std::string& key, const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number()) return v.dump();
    throw CLI::ConversionError("config key '" + key + "' needs a scalar or an array of scalars");
  }

  const CLI::App* root_;
};

ordered_json describe(const CLI::App* app) {
  ordered_json j;
  j["name"] = app->get_name().empty() ? "hysbm" : app->get_name();
  j["description"] = app->get_description();
  ordered_json options = ordered_json::array();
  for (const CLI::Option* opt : app->get_options()) {
    ordered_json o;
    ordered_json names = ordered_json::array();
    for (const auto& s : opt->get_snames()) names.push_back("-" + s);
    for (const auto& l : opt->get_lnames()) names.push_back("--" + l);
    o["names"] = names;
    o["description"] = opt->get_description();
    o["flag"] = opt->get_expected_min() == 0;
    if (opt->get_expected_min() != 0) o["type"] = opt->get_type_name();
    o["required"] = opt->get_required();
    if (!opt->get_default_str().empty()) o["default"] = opt->get_default_str();
    if (opt->get_expected_max() > 1) o["multiple"] = true;
    options.push_back(o);
  }
  j["options"] = options;
  const auto subs = app->get_subcommands([](const CLI::App*) { return true; });
  if (!subs.empty()) {
    ordered_json list = ordered_json::array();
    for (const CLI::App* sub : subs) list.push_back(describe(sub));
    j["subcommands"] = list;
  }
  j["exit_codes"] = {{"0", "success"}, {"2", "input or validation error"}, {"3", "numerical abort"}};
  return j;
}

ordered_json matrix_json(const Matrix& m) {
  ordered_json rows = ordered_json::array();
  for (Index a = 0; a < m.rows(); ++a) {
    ordered_json row = ordered_json::array();
    for (Index b = 0; b < m.cols(); ++b) row.push_back(m(a, b));
    rows.push_back(row);
  }
  return rows;
}

ordered_json vector_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

ordered_json energy_json(const FreeEnergyEstimate& f) {
  return {{"F", f.F},
          {"sum_fi", f.sum_fi},
          {"sum_fe_observed", f.sum_fe_observed},
          {"sum_fe_unobserved", f.sum_fe_unobserved}};
}

ordered_json mp_json(const MpResult& r) {
  return {{"sweeps", r.sweeps},
          {"final_delta", r.final_delta},
          {"converged", r.converged},
          {"seconds", r.seconds},
          {"resets", r.resets}};
}

// Flat key/value table for humans: nested objects become dotted keys.
void print_table(std::ostream& out, const ordered_json& j, const std::string& prefix = "") {
  for (const auto& [key, value] : j.items()) {
    const std::string name = prefix.empty() ? key : prefix + "." + key;
    if (value.is_object()) {
      print_table(out, value, name);
    } else {
      out << std::left << std::setw(32) << name << ' ' << value.dump() << '\n';
    }
  }
}

// Writes the report as JSON to `path` ("-" for stdout) and otherwise prints
// the table to stdout.
void emit_report(std::ostream& out, const ordered_json& report, const std::string& path) {
  if (path == "-") {
    out << report.dump(2) << '\n';
    return;
  }
  print_table(out, report);
  if (!path.empty()) write_text_file(path, report.dump(2));
}

// Table output to a file, or to stdout for "-".
template <typename Writer>
void write_table(std::ostream& out, const std::string& path, Writer&& writer) {
  if (path.empty() || path == "-") {
    writer(out);
    return;
  }
  std::ofstream file(path);
  if (!file) throw InputError("cannot write " + path);
  writer(file);
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) {
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (token.empty() || *end != '\0') throw InputError("'" + text + "' is not a comma-separated number list");
    out.push_back(v);
  }
  return out;
}

struct MpFlags {
  MpConfig config;
  void add(CLI::App* sub) {
    sub->add_option("--alpha", config.alpha, "Fraction of messages updated per dropout batch")->capture_default_str();
    sub->add_option("--eps", config.eps, "Convergence threshold on the summed marginal change")->capture_default_str();
    sub->add_option("--max-iter", config.max_iter, "Maximum number of sweeps")->capture_default_str();
    sub->add_option("--patience", config.patience, "Sweeps below eps required to stop")->capture_default_str();
  }
};

struct Common {
  std::uint64_t seed = 0;
  int workers = 0;
  int nodes = 0;
  void add_seed(CLI::App* sub) { sub->add_option("--seed", seed, "Random seed")->capture_default_str(); }
  void add_workers(CLI::App* sub) {
    sub->add_option("--workers", workers, "Worker threads; 0 uses HYSBM_WORKERS or all cores")->capture_default_str();
  }
  void add_nodes_padding(CLI::App* sub) {
    sub->add_option("--nodes", nodes, "Pad the node set with isolated nodes up to this N")->capture_default_str();
  }
};

Hypergraph load_graph(const std::string& path, int min_nodes) { return read_hypergraph_file(path, min_nodes); }

void write_report(const std::string& prefix, const ordered_json& report) {
  write_text_file(prefix + ".report.json", report.dump(2));
}

// ---- sample ----------------------------------------------------------------

struct SampleCmd {
  Common common;
  int communities = 2;
  std::optional<double> degree;
  std::optional<double> c_in;
  std::optional<double> c_out;
  std::string params_path;
  int max_size = 2;
  std::string out;
  CLI::App* app = nullptr;

  void add(CLI::App& root) {
    app = root.add_subcommand("sample", "Draw a hypergraph and planted labels from the model");
    app->add_option("--nodes", common.nodes, "Number of nodes N")->required();
    app->add_option("-K,--communities", communities, "Number of communities")->capture_default_str();
    app->add_option("--degree", degree, "Average degree parameter c");
    app->add_option("--cin", c_in, "Within-community affinity c_in");
    app->add_option("--cout", c_out, "Between-community affinity c_out");
    app->add_option("--params", params_path, "Parameter file (JSON) instead of the planted flags");
    app->add_option("--max-size", max_size, "Largest hyperedge size D")->capture_default_str();
    common.add_seed(app);
    common.add_workers(app);
    app->add_option("--out", out, "Output prefix for .hyg, .assign, .params.json, .report.json")->required();
  }

  ModelParams params() const {
    const bool planted_flags = degree || c_in || c_out;
    if (!params_path.empty()) {
      if (planted_flags) throw InputError("give either --params or the planted flags, not both");
      ModelParams p = read_params_file(params_path, common.nodes);
      if (app->count("--max-size") > 0 && p.max_size() != max_size) {
        throw InputError("--max-size disagrees with D in the parameter file");
      }
      return p;
    }
    const int k = communities;
    if (k < 1) throw InputError("K must be positive");
    double cin = 0.0;
    double cout = 0.0;
    if (c_in && c_out) {
      cin = *c_in;
      cout = *c_out;
      if (degree && std::abs(cin + (k - 1) * cout - k * *degree) > 1e-9 * k * std::max(1.0, *degree)) {
        throw InputError("--cin, --cout and --degree violate c_in + (K-1) c_out = K c");
      }
    } else if (c_out && degree) {
      cout = *c_out;
      cin = planted_c_in(k, *degree, cout);
    } else if (c_in && degree) {
      if (k == 1) throw InputError("with K = 1 give --degree alone");
      cin = *c_in;
      cout = (k * *degree - cin) / (k - 1);
    } else if (degree && !c_in && !c_out) {
      cin = cout = *degree;
    } else {
      throw InputError("give --params, --cin and --cout, or --degree with at most one of them");
    }
    if (cin < 0.0 || cout < 0.0) throw InputError("planted affinities must be non-negative");
    return ModelParams::planted(k, cin, cout, KappaSchedule::make_default(common.nodes, max_size));
  }

  int run(std::ostream& out_stream) const {
    if (common.nodes < 1) throw InputError("--nodes must be positive");
    const ModelParams p = params();
    SamplerConfig config;
    config.seed = common.seed;
    config.workers = common.workers;
    const SampledHypergraph s = sample_hypergraph(p, config);
    const CanonicalHypergraph canon = canonical_order(s.graph);
    std::vector<int> labels(s.assignment.size());
    for (std::size_t i = 0; i < labels.size(); ++i) labels[static_cast<std::size_t>(canon.new_id[i])] = s.assignment[i];
    const Assignment t(labels, p.num_communities());

    std::ofstream hyg(out + ".hyg");
    if (!hyg) throw InputError("cannot write " + out + ".hyg");
    write_hypergraph(hyg, canon.graph);
    hyg.close();
    write_assignment_file(out + ".assign", t);
    write_params_file(out + ".params.json", p);

    ordered_json report;
    report["command"] = "sample";
    report["nodes"] = p.num_nodes();
    report["communities"] = p.num_communities();
    report["max_size"] = p.max_size();
    report["seed"] = common.seed;
    report["hyperedges"] = canon.graph.num_hyperedges();
    ordered_json counts = ordered_json::object();
    std::vector<std::size_t> per_size(static_cast<std::size_t>(p.max_size() + 1), 0);
    for (std::size_t e = 0; e < canon.graph.num_hyperedges(); ++e) ++per_size[static_cast<std::size_t>(canon.graph.size_of(e))];
    for (int d = 2; d <= p.max_size(); ++d) counts[std::to_string(d)] = per_size[static_cast<std::size_t>(d)];
    report["hyperedges_by_size"] = counts;
    std::size_t isolated = 0;
    for (NodeId i = 0; i < canon.graph.num_nodes(); ++i) isolated += canon.graph.degree(i) == 0 ? 1 : 0;
    report["isolated_nodes"] = isolated;
    report["community_sizes"] = t.community_sizes();
    write_report(out, report);
    out_stream << report.dump() << '\n';
    return 0;
  }
};

// ---- mp --------------------------------------------------------------------

struct MpCmd {
  Common common;
  MpFlags mp;
  std::string graph_path;
  std::string params_path;
  std::string out;

  void add(CLI::App& root) {
    CLI::App* app = root.add_subcommand("mp", "Run message passing at fixed parameters");
    app->add_option("--hypergraph", graph_path, "Hypergraph file")->required();
    app->add_option("--params", params_path, "Parameter file (JSON)")->required();
    common.add_nodes_padding(app);
    mp.add(app);
    common.add_seed(app);
    common.add_workers(app);
    app->add_option("--out", out, "Output prefix for .marginals, .assign, .report.json")->required();
  }

  int run(std::ostream& out_stream) const {
    const Hypergraph g = load_graph(graph_path, common.nodes);
    const ModelParams p = read_params_file(params_path, g.num_nodes());
    MpConfig config = mp.config;
    config.seed = common.seed;
    config.workers = common.workers;
    const MpResult r = run_mp(g, p, config);
    write_marginals_file(out + ".marginals", r.state.marginals);
    write_assignment_file(out + ".assign", argmax_assignment(r.state.marginals));
    ordered_json report = mp_json(r);
    report["command"] = "mp";
    report["seed"] = common.seed;
    report["free_energy"] = energy_json(free_energy(g, p, r.state));
    write_report(out, report);
    out_stream << report.dump() << '\n';
    return 0;
  }
};

// ---- infer -----------------------------------------------------------------

struct InferCmd {
  Common common;
  MpFlags mp;
  EmConfig em;
  std::string graph_path;
  int max_size = 0;
  std::string out;

  InferCmd() { mp.config.alpha = 0.01; }

  void add(CLI::App& root) {
    CLI::App* app = root.add_subcommand("infer", "Learn parameters and communities by EM");
    app->add_option("--hypergraph", graph_path, "Hypergraph file")->required();
    app->add_option("-K,--communities", em.num_communities, "Number of communities")->capture_default_str();
    app->add_option("--restarts", em.restarts, "Independent EM restarts; lowest free energy wins")->capture_default_str();
    app->add_option("--max-size", max_size, "Drop hyperedges larger than D before inference (0 keeps all)")
        ->capture_default_str();
    app->add_option("--em-eps", em.eps, "EM threshold on the parameter change")->capture_default_str();
    app->add_option("--em-max-iter", em.max_iter, "Maximum EM iterations")->capture_default_str();
    common.add_nodes_padding(app);
    mp.add(app);
    common.add_seed(app);
    common.add_workers(app);
    app->add_option("--out", out, "Output prefix for .params.json, .marginals, .assign, .report.json")->required();
  }

  int run(std::ostream& out_stream) const {
    Hypergraph g = load_graph(graph_path, common.nodes);
    EmConfig config = em;
    if (max_size > 0) {
      if (max_size < 2) throw InputError("--max-size must be at least 2");
      g = g.truncated(max_size);
      config.kappa = KappaSchedule::make_default(g.num_nodes(), max_size);
    }
    if (g.num_hyperedges() == 0) throw InputError("no hyperedges left to infer from");
    config.seed = common.seed;
    config.workers = common.workers;
    config.mp = mp.config;
    const InferenceResult r = run_em(g, config);
    write_params_file(out + ".params.json", r.params);
    write_marginals_file(out + ".marginals", r.marginals);
    write_assignment_file(out + ".assign", r.assignment);
    ordered_json report;
    report["command"] = "infer";
    report["seed"] = common.seed;
    report["hyperedges"] = g.num_hyperedges();
    report["max_size"] = r.params.max_size();
    report["free_energy"] = r.free_energy;
    report["iterations"] = r.iterations;
    report["converged"] = r.converged;
    report["best_restart"] = r.best_restart;
    report["restart_free_energies"] = r.restart_free_energies;
    report["trace"] = r.trace;
    report["final_mp"] = mp_json(r.final_mp);
    report["n"] = vector_json(r.params.n());
    report["c"] = matrix_json(r.params.c());
    write_report(out, report);
    out_stream << report.dump() << '\n';
    return 0;
  }
};

// ---- energy ----------------------------------------------------------------

struct EnergyCmd {
  Common common;
  MpFlags mp;
  std::string graph_path;
  std::string params_path;
  bool plain = false;
  bool exact = false;

  void add(CLI::App& root) {
    CLI::App* app = root.add_subcommand("energy", "Free energy of a hypergraph under fixed parameters");
    app->add_option("--hypergraph", graph_path, "Hypergraph file")->required();
    app->add_option("--params", params_path, "Parameter file (JSON)")->required();
    app->add_flag("--plain", plain, "Large-N form without the finite-size corrections");
    app->add_flag("--exact", exact, "Also enumerate -log Z exactly (tiny instances only)");
    common.add_nodes_padding(app);
    mp.add(app);
    common.add_seed(app);
    common.add_workers(app);
  }

  int run(std::ostream& out_stream) const {
    const Hypergraph g = load_graph(graph_path, common.nodes);
    const ModelParams p = read_params_file(params_path, g.num_nodes());
    MpConfig config = mp.config;
    config.seed = common.seed;
    config.workers = common.workers;
    const MpResult r = run_mp(g, p, config);
    ordered_json report = energy_json(free_energy(g, p, r.state, !plain));
    report["finite_size"] = !plain;
    report["mp"] = mp_json(r);
    if (exact) report["exact_neg_log_evidence"] = exact_neg_log_evidence(g, p);
    out_stream << report.dump(2) << '\n';
    return 0;
  }
};

// ---- landscape -------------------------------------------------------------

struct LandscapeCmd {
  Common common;
  MpFlags mp;
  std::string graph_path;
  std::vector<std::string> vertices;
  int resolution = 15;
  std::string out = "-";

  void add(CLI::App& root) {
    CLI::App* app = root.add_subcommand("landscape", "Free energy over a simplex of parameter sets");
    app->add_option("--hypergraph", graph_path, "Hypergraph file")->required();
    app->add_option("--vertex", vertices, "Three vertex parameter files")->required()->expected(3);
    app->add_option("--resolution", resolution, "Subdivisions per simplex edge")->capture_default_str();
    common.add_nodes_padding(app);
    mp.add(app);
    common.add_seed(app);
    common.add_workers(app);
    app->add_option("--out", out, "Output table (tab-separated); - for stdout")->capture_default_str();
  }

  int run(std::ostream& out_stream) const {
    const Hypergraph g = load_graph(graph_path, common.nodes);
    std::vector<ModelParams> params;
    for (const auto& path : vertices) params.push_back(read_params_file(path, g.num_nodes()));
    MpConfig config = mp.config;
    config.seed = common.seed;
    const auto points = simplex_sweep(g, params, resolution, config, common.workers);
    write_table(out_stream, out, [&](std::ostream& o) {
      o << "w0\tw1\tw2\tF\tconverged\tsweeps\n";
      const auto precision = o.precision(12);
      for (const auto& pt : points) {
        o << pt.weight[0] << '\t' << pt.weight[1] << '\t' << pt.weight[2] << '\t' << pt.F << '\t'
          << (pt.converged ? 1 : 0) << '\t' << pt.sweeps << '\n';
      }
      o.precision(precision);
    });
    return 0;
  }
};

// ---- bounds ----------------------------------------------------------------

struct BoundsCmd {
  int communities = 0;
  double degree = 0.0;
  int max_size = 0;
  std::int64_t nodes = 10000;
  std::string kappa = "default";
  std::string empirical;
  std::optional<double> c_in;
  std::optional<double> c_out;
  std::string json_path;

  void add(CLI::App& root) {
    CLI::App* app = root.add_subcommand("bounds", "Detectability threshold and its decomposition");
    app->add_option("-K,--communities", communities, "Number of communities")->required();
    app->add_option("--degree", degree, "Average degree parameter c")->required();
    app->add_option("--max-size", max_size, "Largest hyperedge size D (from the data with --empirical)");
    app->add_option("--nodes", nodes, "Number of nodes N used by the kappa schedule")->capture_default_str();
    app->add_option("--kappa", kappa, "'default' or comma-separated kappa_d for d = 2..D")->capture_default_str();
    app->add_option("--empirical", empirical, "Use the size distribution and degree of this hypergraph");
    app->add_option("--cin", c_in, "Within-community affinity, for the stability check");
    app->add_option("--cout", c_out, "Between-community affinity, for the stability check");
    app->add_option("--json", json_path, "Write the JSON report here; - prints it instead of the table");
  }

  int run(std::ostream& out_stream) const {
    const int k = communities;
    if (k < 1) throw InputError("K must be positive");
    if (!(degree > 0.0)) throw InputError("--degree must be positive");
    DetectabilityReport r;
    r.num_communities = k;
    r.c = degree;
    SizeDistribution dist;
    if (!empirical.empty()) {
      const Hypergraph g = read_hypergraph_file(empirical);
      dist = empirical_size_distribution(g);
      double incidences = 0.0;
      for (std::size_t e = 0; e < g.num_hyperedges(); ++e) incidences += g.size_of(e);
      r.d0 = incidences / g.num_nodes();
      r.max_size = g.max_size();
      r.phi = phi_decomposition(k, degree, 2.0 * r.d0 / degree, dist);
      r.threshold = ks_threshold(k, degree, r.d0, dist);
      r.entropy = entropy_diagnostics(g);
    } else {
      if (max_size < 2) throw InputError("--max-size is required (D >= 2) without --empirical");
      const KappaSchedule schedule = kappa == "default" ? KappaSchedule::make_default(nodes, max_size)
                                                        : KappaSchedule::from_values(nodes, max_size, parse_list(kappa));
      dist = ensemble_size_distribution(schedule);
      r.max_size = max_size;
      r.d0 = 0.5 * schedule.C() * degree;
      r.phi = phi_decomposition(k, degree, schedule.C(), dist);
      r.threshold = ks_threshold(k, degree, r.d0, dist);
    }
    r.mean_size = dist.mean_size();
    if (c_in || c_out) {
      if (k < 2) throw InputError("the stability check needs K >= 2");
      const double cout = c_out ? *c_out : (k * degree - *c_in) / (k - 1);
      const double cin = c_in ? *c_in : planted_c_in(k, degree, cout);
      if (std::abs(cin + (k - 1) * cout - k * degree) > 1e-9 * k * degree) {
        throw InputError("--cin and --cout violate c_in + (K-1) c_out = K c");
      }
      Matrix c = Matrix::Constant(k, k, cout);
      c.diagonal().setConstant(cin);
      r.stability = stability_criterion(r.d0, dist, c, Vector::Constant(k, 1.0 / k));
      r.lambda = r.stability->lambda;
    }

    ordered_json report;
    report["K"] = r.num_communities;
    report["c"] = r.c;
    report["D"] = r.max_size;
    report["mode"] = empirical.empty() ? "ensemble" : "empirical";
    report["d0"] = r.d0;
    report["mean_size"] = r.mean_size;
    report["threshold"] = r.threshold;
    report["phi"] = {{"alpha", r.phi.alpha}, {"beta", r.phi.beta},   {"gamma1", r.phi.gamma1},
                     {"gamma2", r.phi.gamma2}, {"gamma", r.phi.gamma}, {"phi", r.phi.phi}};
    if (r.stability) {
      report["lambda"] = r.lambda;
      report["stability"] = {{"stable", r.stability->stable}, {"lhs", r.stability->lhs}, {"margin", r.stability->margin}};
    }
    if (r.entropy) {
      const EntropyDiagnostics& e = *r.entropy;
      report["entropy"] = {{"joint", e.entropy_joint},
                           {"hyperedge", e.entropy_hyperedge},
                           {"clique", e.entropy_clique},
                           {"conditional", e.conditional_entropy},
                           {"perplexity_ratio", e.perplexity_ratio},
                           {"kl_divergence", e.kl_divergence},
                           {"mutual_information", e.mutual_information},
                           {"log_gamma1", e.log_gamma1}};
    }
    emit_report(out_stream, report, json_path);
    return 0;
  }
};

// ---- diagnostics -----------------------------------------------------------

struct DiagnosticsCmd {
  std::string graph_path;
  std::string json_path;

  void add(CLI::App& root) {
    CLI::App* app = root.add_subcommand("diagnostics", "Entropy diagnostics of a hypergraph");
    app->add_option("--hypergraph", graph_path, "Hypergraph file")->required();
    app->add_option("--json", json_path, "Write the JSON report here; - prints it instead of the table");
  }

  int run(std::ostream& out_stream) const {
    const Hypergraph g = read_hypergraph_file(graph_path);
    const EntropyDiagnostics e = entropy_diagnostics(g);
    ordered_json report;
    report["nodes"] = g.num_nodes();
    report["hyperedges"] = g.num_hyperedges();
    report["entropy_joint"] = e.entropy_joint;
    report["entropy_hyperedge"] = e.entropy_hyperedge;
    report["entropy_clique"] = e.entropy_clique;
    report["conditional_entropy"] = e.conditional_entropy;
    report["perplexity_ratio"] = e.perplexity_ratio;
    report["kl_divergence"] = e.kl_divergence;
    report["mutual_information"] = e.mutual_information;
    report["log_gamma1"] = e.log_gamma1;
    emit_report(out_stream, report, json_path);
    return 0;
  }
};

// ---- eval ------------------------------------------------------------------

struct EvalCmd {
  Common common;
  std::string pred_path;
  std::string truth_path;
  std::string marginals_path;
  std::string graph_path;
  std::string params_path;
  std::int64_t auc_samples = 100000;
  std::string json_path;

  void add(CLI::App& root) {
    CLI::App* app = root.add_subcommand("eval", "Overlap, NMI and link-prediction AUC");
    app->add_option("--pred", pred_path, "Predicted labels, one per line")->required();
    app->add_option("--truth", truth_path, "True labels, one per line")->required();
    app->add_option("--marginals", marginals_path, "Marginal table for the truth-free overlap");
    app->add_option("--hypergraph", graph_path, "Hypergraph for AUC (with --params)");
    app->add_option("--params", params_path, "Parameter file for AUC and the overlap prior");
    app->add_option("--auc-samples", auc_samples, "Monte Carlo comparisons for AUC")->capture_default_str();
    common.add_nodes_padding(app);
    common.add_seed(app);
    common.add_workers(app);
    app->add_option("--json", json_path, "Write the JSON report here; - prints it instead of the table");
  }

  int run(std::ostream& out_stream) const {
    if (graph_path.empty() != params_path.empty()) throw InputError("AUC needs both --hypergraph and --params");
    Assignment pred = read_assignment_file(pred_path);
    Assignment truth = read_assignment_file(truth_path);
    std::optional<Hypergraph> graph;
    std::optional<ModelParams> params;
    if (!graph_path.empty()) {
      graph = load_graph(graph_path, std::max<int>(common.nodes, static_cast<int>(pred.size())));
      params = read_params_file(params_path, graph->num_nodes());
    }
    int k = std::max(pred.num_communities(), truth.num_communities());
    if (params) {
      if (params->num_communities() < k) throw InputError("labels exceed the parameter file's K");
      k = params->num_communities();
    }
    pred = Assignment({pred.labels().begin(), pred.labels().end()}, k);
    truth = Assignment({truth.labels().begin(), truth.labels().end()}, k);
    Vector n = Vector::Zero(k);
    if (params) {
      n = params->n();
    } else {
      for (std::size_t i = 0; i < truth.size(); ++i) n(truth[i]) += 1.0;
      n /= static_cast<double>(truth.size());
    }

    EvalReport r;
    r.overlap = overlap(pred, truth, n);
    r.nmi = nmi(pred, truth);
    ordered_json report;
    report["nodes"] = truth.size();
    report["K"] = k;
    report["overlap"] = r.overlap->raw;
    report["overlap_clamped"] = r.overlap->clamped;
    report["alignment"] = r.overlap->alignment;
    report["nmi"] = *r.nmi;
    if (!marginals_path.empty()) {
      const Matrix m = read_marginals_file(marginals_path);
      if (m.rows() != k) throw InputError("marginal table has " + std::to_string(m.rows()) + " columns, expected " + std::to_string(k));
      report["marginal_overlap"] = marginal_overlap(m, n);
      report["overlap_from_marginals"] = overlap(m, truth, n).raw;
    }
    if (graph) {
      if (pred.size() != static_cast<std::size_t>(graph->num_nodes())) {
        throw InputError("prediction has " + std::to_string(pred.size()) + " labels but the hypergraph has " +
                         std::to_string(graph->num_nodes()) + " nodes");
      }
      r.auc = auc_link_prediction(*graph, *params, pred, auc_samples, common.seed, common.workers);
      r.size_histogram = size_histogram(*graph);
      report["auc"] = *r.auc;
      report["auc_samples"] = auc_samples;
      report["size_histogram"] = r.size_histogram;
    }
    emit_report(out_stream, report, json_path);
    return 0;
  }
};

// ---- sweep -----------------------------------------------------------------

struct SweepCmd {
  Common common;
  MpFlags mp;
  SweepSpec spec;
  std::vector<int> max_sizes{2};
  std::vector<double> c_out;
  int points = 15;
  double ratio_lo = 0.0;
  double ratio_hi = 1.0;
  std::string out = "-";

  void add(CLI::App& root) {
    CLI::App* app = root.add_subcommand("sweep", "Overlap across c_out at fixed c (phase transition)");
    app->add_option("--nodes", spec.num_nodes, "Number of nodes N")->capture_default_str();
    app->add_option("-K,--communities", spec.num_communities, "Number of communities")->capture_default_str();
    app->add_option("--degree", spec.c, "Average degree parameter c")->capture_default_str();
    app->add_option("--max-size", max_sizes, "One or more D values, comma-separated")->delimiter(',')->capture_default_str();
    app->add_option("--cout", c_out, "Explicit c_out values, comma-separated")->delimiter(',');
    app->add_option("--points", points, "Grid points in c_out / c_in when --cout is absent")->capture_default_str();
    app->add_option("--ratio-lo", ratio_lo, "Smallest c_out / c_in")->capture_default_str();
    app->add_option("--ratio-hi", ratio_hi, "Largest c_out / c_in")->capture_default_str();
    app->add_option("--seeds", spec.seeds, "Replicates per point")->capture_default_str();
    mp.add(app);
    common.add_seed(app);
    common.add_workers(app);
    app->add_option("--out", out, "Output table (tab-separated); - for stdout")->capture_default_str();
  }

  int run(std::ostream& out_stream) const {
    SweepSpec s = spec;
    s.max_sizes = max_sizes;
    s.c_out = c_out.empty() ? c_out_grid(s.num_communities, s.c, points, ratio_lo, ratio_hi) : c_out;
    s.seed = common.seed;
    s.workers = common.workers;
    s.mp = mp.config;
    const auto rows = run_sweep(s);
    write_table(out_stream, out, [&](std::ostream& o) { write_sweep_table(o, rows); });
    return 0;
  }
};

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app("Hypergraph stochastic block model toolkit", "hysbm");
  app.require_subcommand(0, 1);
  app.set_version_flag("--version", std::string("hysbm ") + HYSBM_VERSION);

  SampleCmd sample;
  MpCmd mp;
  InferCmd infer;
  EnergyCmd energy;
  LandscapeCmd landscape;
  BoundsCmd bounds;
  DiagnosticsCmd diagnostics;
  EvalCmd eval;
  SweepCmd sweep;
  sample.add(app);
  mp.add(app);
  infer.add(app);
  energy.add(app);
  landscape.add(app);
  bounds.add(app);
  diagnostics.add(app);
  eval.add(app);
  sweep.add(app);
  app.set_config("--config", "", "JSON file with option values; command-line flags take precedence");
  app.config_formatter(std::make_shared<JsonConfig>(&app));
  for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; })) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    const auto used = app.get_subcommands();
    out << describe(used.empty() ? &app : used.front()).dump(2) << '\n';
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << describe(&app).dump(2) << '\n';
    return 0;
  } catch (const CLI::CallForVersion& v) {
    out << v.what() << '\n';
    return 0;
  } catch (const CLI::ParseError& ex) {
    err << "error: " << ex.what() << '\n';
    return 2;
  }

  const auto used = app.get_subcommands();
  if (used.empty()) {
    out << describe(&app).dump(2) << '\n';
    return 0;
  }
  const std::string name = used.front()->get_name();
  try {
    if (name == "sample") return sample.run(out);
    if (name == "mp") return mp.run(out);
    if (name == "infer") return infer.run(out);
    if (name == "energy") return energy.run(out);
    if (name == "landscape") return landscape.run(out);
    if (name == "bounds") return bounds.run(out);
    if (name == "diagnostics") return diagnostics.run(out);
    if (name == "eval") return eval.run(out);
    if (name == "sweep") return sweep.run(out);
  } catch (const InputError& ex) {
    err << "input error: " << ex.what() << '\n';
    return 2;
  } catch (const NumericalError& ex) {
    err << "numerical error: " << ex.what() << '\n';
    return 3;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace hysbm
