#include "hysbm/params.hpp"

#include "hysbm/error.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace hysbm {

using nlohmann::json;

ModelParams::ModelParams(Vector n, Matrix p, KappaSchedule kappa)
    : n_(std::move(n)), p_(std::move(p)), kappa_(std::move(kappa)) {
  const Index k = n_.size();
  if (k < 1) throw InputError("at least one community is required");
  if (p_.rows() != k || p_.cols() != k) {
    throw InputError("affinity matrix must be " + std::to_string(k) + "x" + std::to_string(k));
  }
  if (!n_.allFinite() || (n_.array() < 0.0).any()) {
    throw InputError("prior n must be finite and nonnegative");
  }
  const double total = n_.sum();
  if (std::abs(total - 1.0) > 1e-9) {
    throw InputError("prior n must sum to 1 (sums to " + std::to_string(total) + ")");
  }
  n_ /= total;
  if (!p_.allFinite() || (p_.array() < 0.0).any() || (p_.array() > 1.0).any()) {
    throw InputError("affinity entries must lie in [0, 1]");
  }
  if (!p_.isApprox(p_.transpose(), 1e-12) && (p_ - p_.transpose()).cwiseAbs().maxCoeff() > 1e-15) {
    throw InputError("affinity matrix must be symmetric");
  }
  p_ = 0.5 * (p_ + p_.transpose()).eval();
  c_ = static_cast<double>(kappa_.num_nodes()) * p_;
}

ModelParams ModelParams::from_c(Vector n, const Matrix& c, KappaSchedule kappa) {
  const auto big_n = static_cast<double>(kappa.num_nodes());
  Matrix p = c / big_n;
  ModelParams params(std::move(n), std::move(p), std::move(kappa));
  // Keep c exactly as supplied (p round trips through a division).
  params.c_ = 0.5 * (c + c.transpose());
  return params;
}

ModelParams ModelParams::planted(int num_communities, double c_in, double c_out,
                                 KappaSchedule kappa) {
  if (num_communities < 1) throw InputError("at least one community is required");
  Matrix c = Matrix::Constant(num_communities, num_communities, c_out);
  c.diagonal().setConstant(c_in);
  Vector n = Vector::Constant(num_communities, 1.0 / num_communities);
  return from_c(std::move(n), c, std::move(kappa));
}

double planted_c_in(int num_communities, double c, double c_out) {
  return num_communities * c - (num_communities - 1) * c_out;
}

std::string params_to_json(const ModelParams& params) {
  json j;
  const int k = params.num_communities();
  j["K"] = k;
  j["D"] = params.max_size();
  j["n"] = std::vector<double>(params.n().data(), params.n().data() + k);
  json rows = json::array();
  for (int a = 0; a < k; ++a) {
    std::vector<double> row;
    for (int b = 0; b < k; ++b) row.push_back(params.p()(a, b));
    rows.push_back(row);
  }
  j["p"] = rows;
  if (params.kappa().is_default()) {
    j["kappa"] = "default";
  } else {
    std::vector<double> values;
    for (int d = 2; d <= params.max_size(); ++d) values.push_back(params.kappa().kappa(d));
    j["kappa"] = values;
  }
  return j.dump(2);
}

ModelParams params_from_json(const std::string& text, std::int64_t num_nodes) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& ex) {
    throw InputError(std::string("parameter file is not valid JSON: ") + ex.what());
  }
  try {
    const int k = j.at("K").get<int>();
    const int max_size = j.at("D").get<int>();
    const auto n_values = j.at("n").get<std::vector<double>>();
    const auto rows = j.at("p").get<std::vector<std::vector<double>>>();
    if (static_cast<int>(n_values.size()) != k) throw InputError("n must have K entries");
    if (static_cast<int>(rows.size()) != k) throw InputError("p must have K rows");
    Vector n(k);
    Matrix p(k, k);
    for (int a = 0; a < k; ++a) {
      n(a) = n_values[static_cast<std::size_t>(a)];
      if (static_cast<int>(rows[static_cast<std::size_t>(a)].size()) != k) {
        throw InputError("p row " + std::to_string(a) + " must have K entries");
      }
      for (int b = 0; b < k; ++b) p(a, b) = rows[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
    }
    const json& kappa = j.contains("kappa") ? j.at("kappa") : json("default");
    KappaSchedule schedule = kappa.is_string()
                                 ? (kappa.get<std::string>() == "default"
                                        ? KappaSchedule::make_default(num_nodes, max_size)
                                        : throw InputError("kappa must be \"default\" or an array"))
                                 : KappaSchedule::from_values(num_nodes, max_size,
                                                              kappa.get<std::vector<double>>());
    return ModelParams(std::move(n), std::move(p), std::move(schedule));
  } catch (const json::exception& ex) {
    throw InputError(std::string("malformed parameter file: ") + ex.what());
  }
}

ModelParams read_params_file(const std::string& path, std::int64_t num_nodes) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open parameter file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return params_from_json(buffer.str(), num_nodes);
}

void write_params_file(const std::string& path, const ModelParams& params) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write parameter file '" + path + "'");
  out << params_to_json(params) << '\n';
}

}  // namespace hysbm
