#include "hysbm/hypergraph.hpp"

#include "hysbm/error.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace hysbm {

std::uint64_t Hypergraph::hash_nodes(std::span<const NodeId> nodes) {
  // FNV-1a over the node ids.
  std::uint64_t h = 1469598103934665603ULL;
  for (NodeId v : nodes) {
    auto x = static_cast<std::uint32_t>(v);
    for (int b = 0; b < 4; ++b) {
      h ^= (x >> (8 * b)) & 0xffU;
      h *= 1099511628211ULL;
    }
  }
  return h;
}

Hypergraph::Hypergraph(int num_nodes, std::vector<std::vector<NodeId>> hyperedges, int max_size)
    : num_nodes_(num_nodes) {
  if (num_nodes < 1) throw InputError("hypergraph needs at least one node");
  int largest = 2;
  for (auto& e : hyperedges) {
    std::sort(e.begin(), e.end());
    if (e.size() < 2) throw InputError("hyperedge with fewer than two nodes");
    if (std::adjacent_find(e.begin(), e.end()) != e.end()) {
      throw InputError("hyperedge contains a repeated node");
    }
    if (e.front() < 0 || e.back() >= num_nodes) {
      throw InputError("node id outside [0, " + std::to_string(num_nodes) + ")");
    }
    largest = std::max(largest, static_cast<int>(e.size()));
  }
  max_size_ = max_size > 0 ? max_size : largest;
  if (largest > max_size_ && !hyperedges.empty()) {
    throw InputError("hyperedge of size " + std::to_string(largest) + " exceeds maximum size " +
                     std::to_string(max_size_));
  }

  std::size_t total = 0;
  for (const auto& e : hyperedges) total += e.size();
  members_.reserve(total);
  pair_edge_.reserve(total);
  offsets_.reserve(hyperedges.size() + 1);
  lookup_.reserve(hyperedges.size());

  for (std::size_t idx = 0; idx < hyperedges.size(); ++idx) {
    const auto& e = hyperedges[idx];
    if (contains(e)) {
      throw InputError("duplicate hyperedge at position " + std::to_string(idx));
    }
    const std::size_t eid = offsets_.size() - 1;
    members_.insert(members_.end(), e.begin(), e.end());
    pair_edge_.insert(pair_edge_.end(), e.size(), eid);
    offsets_.push_back(members_.size());
    lookup_.emplace(hash_nodes(e), eid);
  }

  std::vector<std::size_t> counts(static_cast<std::size_t>(num_nodes_) + 1, 0);
  for (NodeId v : members_) ++counts[static_cast<std::size_t>(v) + 1];
  incidence_offsets_.assign(counts.size(), 0);
  for (std::size_t i = 1; i < counts.size(); ++i) {
    incidence_offsets_[i] = incidence_offsets_[i - 1] + counts[i];
  }
  incident_edges_.resize(members_.size());
  incident_pairs_.resize(members_.size());
  std::vector<std::size_t> fill(incidence_offsets_.begin(), incidence_offsets_.end() - 1);
  for (std::size_t pair = 0; pair < members_.size(); ++pair) {
    const auto v = static_cast<std::size_t>(members_[pair]);
    incident_edges_[fill[v]] = pair_edge_[pair];
    incident_pairs_[fill[v]] = pair;
    ++fill[v];
  }
}

bool Hypergraph::contains(std::span<const NodeId> sorted_nodes) const {
  auto [lo, hi] = lookup_.equal_range(hash_nodes(sorted_nodes));
  for (auto it = lo; it != hi; ++it) {
    auto e = hyperedge(it->second);
    if (std::equal(e.begin(), e.end(), sorted_nodes.begin(), sorted_nodes.end())) return true;
  }
  return false;
}

Hypergraph Hypergraph::truncated(int max_size) const {
  std::vector<std::vector<NodeId>> kept;
  for (std::size_t e = 0; e < num_hyperedges(); ++e) {
    if (size_of(e) <= max_size) {
      auto nodes = hyperedge(e);
      kept.emplace_back(nodes.begin(), nodes.end());
    }
  }
  Hypergraph out(num_nodes_, std::move(kept), std::min(max_size, std::max(2, num_nodes_)));
  out.labels_ = labels_;
  return out;
}

void Hypergraph::set_node_labels(std::vector<std::string> labels) {
  if (!labels.empty() && labels.size() != static_cast<std::size_t>(num_nodes_)) {
    throw InputError("node label count does not match node count");
  }
  labels_ = std::move(labels);
}

Hypergraph read_hypergraph(std::istream& in, int min_nodes, int max_size) {
  std::unordered_map<std::string, NodeId> ids;
  std::vector<std::string> labels;
  std::vector<std::vector<NodeId>> edges;
  std::unordered_map<std::string, std::size_t> seen;  // canonical key -> line
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (line[first] == '#') continue;
    std::istringstream tokens(line);
    std::vector<NodeId> edge;
    std::string token;
    while (tokens >> token) {
      auto [it, inserted] = ids.try_emplace(token, static_cast<NodeId>(labels.size()));
      if (inserted) labels.push_back(token);
      edge.push_back(it->second);
    }
    std::sort(edge.begin(), edge.end());
    if (std::adjacent_find(edge.begin(), edge.end()) != edge.end()) {
      throw InputError("line " + std::to_string(line_no) + ": repeated node in hyperedge");
    }
    if (edge.size() < 2) {
      throw InputError("line " + std::to_string(line_no) + ": hyperedge needs at least two nodes");
    }
    std::string key;
    key.reserve(edge.size() * 4);
    for (NodeId v : edge) {
      key.append(reinterpret_cast<const char*>(&v), sizeof(v));
    }
    auto [it, inserted] = seen.try_emplace(std::move(key), line_no);
    if (!inserted) {
      throw InputError("line " + std::to_string(line_no) + ": duplicate hyperedge (first seen on line " +
                       std::to_string(it->second) + ")");
    }
    edges.push_back(std::move(edge));
  }
  int n = static_cast<int>(labels.size());
  if (min_nodes > n) {
    for (int i = n; i < min_nodes; ++i) labels.push_back(std::to_string(i));
    n = min_nodes;
  }
  if (n == 0) throw InputError("hypergraph file contains no nodes");
  int largest = 2;
  for (const auto& e : edges) largest = std::max(largest, static_cast<int>(e.size()));
  if (max_size > 0 && largest > max_size) {
    throw InputError("hyperedge of size " + std::to_string(largest) + " exceeds maximum size " +
                     std::to_string(max_size));
  }
  Hypergraph graph(n, std::move(edges), max_size > 0 ? max_size : 0);
  graph.set_node_labels(std::move(labels));
  return graph;
}

Hypergraph read_hypergraph_file(const std::string& path, int min_nodes, int max_size) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open hypergraph file '" + path + "'");
  return read_hypergraph(in, min_nodes, max_size);
}

void write_hypergraph(std::ostream& out, const Hypergraph& graph) {
  const auto& labels = graph.node_labels();
  for (std::size_t e = 0; e < graph.num_hyperedges(); ++e) {
    bool first = true;
    for (NodeId v : graph.hyperedge(e)) {
      if (!first) out << ' ';
      first = false;
      if (labels.empty()) {
        out << v;
      } else {
        out << labels[static_cast<std::size_t>(v)];
      }
    }
    out << '\n';
  }
}

CanonicalHypergraph canonical_order(const Hypergraph& graph) {
  const auto n = static_cast<std::size_t>(graph.num_nodes());
  std::vector<NodeId> new_id(n, -1);
  NodeId next = 0;
  for (std::size_t e = 0; e < graph.num_hyperedges(); ++e) {
    for (NodeId v : graph.hyperedge(e)) {
      if (new_id[static_cast<std::size_t>(v)] < 0) new_id[static_cast<std::size_t>(v)] = next++;
    }
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (new_id[v] < 0) new_id[v] = next++;
  }
  std::vector<std::vector<NodeId>> edges;
  edges.reserve(graph.num_hyperedges());
  for (std::size_t e = 0; e < graph.num_hyperedges(); ++e) {
    std::vector<NodeId> mapped;
    for (NodeId v : graph.hyperedge(e)) mapped.push_back(new_id[static_cast<std::size_t>(v)]);
    edges.push_back(std::move(mapped));
  }
  // New ids within a hyperedge are assigned in ascending order, so writing the
  // sorted members and reading them back reproduces the same ids.
  Hypergraph out(graph.num_nodes(), std::move(edges), graph.max_size());
  return {std::move(out), std::move(new_id)};
}

}  // namespace hysbm
