#include "hysbm/io.hpp"

#include "hysbm/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace hysbm {

namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  return out;
}

bool skip_line(const std::string& line) {
  const auto first = line.find_first_not_of(" \t\r");
  return first == std::string::npos || line[first] == '#';
}

}  // namespace

Assignment read_assignment(std::istream& in, int num_communities) {
  std::vector<int> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skip_line(line)) continue;
    std::istringstream fields(line);
    long long value = 0;
    std::string rest;
    if (!(fields >> value) || (fields >> rest) || value < 0 || value > 1'000'000) {
      throw InputError("line " + std::to_string(line_no) + ": expected one non-negative integer label");
    }
    labels.push_back(static_cast<int>(value));
  }
  if (labels.empty()) throw InputError("assignment file holds no labels");
  const int k = num_communities > 0 ? num_communities : *std::max_element(labels.begin(), labels.end()) + 1;
  return {std::move(labels), k};
}

Assignment read_assignment_file(const std::string& path, int num_communities) {
  auto in = open_in(path);
  try {
    return read_assignment(in, num_communities);
  } catch (const InputError& err) {
    throw InputError(path + ": " + err.what());
  }
}

void write_assignment(std::ostream& out, const Assignment& t) {
  for (std::size_t i = 0; i < t.size(); ++i) out << t[i] << '\n';
}

void write_assignment_file(const std::string& path, const Assignment& t) {
  auto out = open_out(path);
  write_assignment(out, t);
}

Matrix read_marginals(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (skip_line(line)) continue;
    std::istringstream fields(line);
    std::vector<double> row;
    std::string token;
    bool numeric = true;
    while (fields >> token) {
      char* end = nullptr;
      const double v = std::strtod(token.c_str(), &end);
      if (end == token.c_str() || *end != '\0') {
        numeric = false;
        break;
      }
      row.push_back(v);
    }
    if (!numeric) {
      if (header_seen || !rows.empty()) throw InputError("line " + std::to_string(line_no) + ": non-numeric entry");
      header_seen = true;
      continue;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw InputError("line " + std::to_string(line_no) + ": expected " + std::to_string(rows.front().size()) +
                       " columns");
    }
    for (double v : row) {
      if (!std::isfinite(v) || v < 0.0) throw InputError("line " + std::to_string(line_no) + ": invalid probability");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty() || rows.front().empty()) throw InputError("marginal file holds no rows");
  Matrix m(static_cast<Index>(rows.front().size()), static_cast<Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t a = 0; a < rows[i].size(); ++a) m(static_cast<Index>(a), static_cast<Index>(i)) = rows[i][a];
  }
  return m;
}

Matrix read_marginals_file(const std::string& path) {
  auto in = open_in(path);
  try {
    return read_marginals(in);
  } catch (const InputError& err) {
    throw InputError(path + ": " + err.what());
  }
}

void write_marginals(std::ostream& out, const Matrix& marginals) {
  for (Index a = 0; a < marginals.rows(); ++a) out << (a ? "\t" : "") << 'q' << a;
  out << '\n';
  const auto precision = out.precision(17);
  for (Index i = 0; i < marginals.cols(); ++i) {
    for (Index a = 0; a < marginals.rows(); ++a) out << (a ? "\t" : "") << marginals(a, i);
    out << '\n';
  }
  out.precision(precision);
}

void write_marginals_file(const std::string& path, const Matrix& marginals) {
  auto out = open_out(path);
  write_marginals(out, marginals);
}

void write_text_file(const std::string& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
}

}  // namespace hysbm
