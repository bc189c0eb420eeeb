#pragma once

#include "hysbm/types.hpp"

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace hysbm {

// Simple hypergraph on dense node ids [0, N).
//
// Hyperedges are stored as sorted node lists in CSR form. Every (hyperedge,
// member) pair gets a flat "pair index" so that per-pair quantities (messages)
// can live in a single K x P matrix; pair_index(e, k) = offset(e) + k.
class Hypergraph {
 public:
  Hypergraph() = default;

  // Hyperedges are sorted internally. Throws InputError on: a hyperedge with
  // fewer than two distinct nodes, out-of-range ids, repeated nodes within a
  // hyperedge, duplicate hyperedges, or a size above max_size. A max_size of
  // zero means "largest observed size" (at least 2).
  Hypergraph(int num_nodes, std::vector<std::vector<NodeId>> hyperedges, int max_size = 0);

  [[nodiscard]] int num_nodes() const { return num_nodes_; }
  [[nodiscard]] std::size_t num_hyperedges() const { return offsets_.size() - 1; }
  [[nodiscard]] int max_size() const { return max_size_; }
  [[nodiscard]] std::size_t num_pairs() const { return members_.size(); }

  [[nodiscard]] std::span<const NodeId> hyperedge(std::size_t e) const {
    return {members_.data() + offsets_[e], offsets_[e + 1] - offsets_[e]};
  }
  [[nodiscard]] int size_of(std::size_t e) const {
    return static_cast<int>(offsets_[e + 1] - offsets_[e]);
  }
  [[nodiscard]] std::size_t pair_offset(std::size_t e) const { return offsets_[e]; }

  // Hyperedges containing node i, ascending.
  [[nodiscard]] std::span<const std::size_t> incident_hyperedges(NodeId i) const {
    return {incident_edges_.data() + incidence_offsets_[i],
            incidence_offsets_[i + 1] - incidence_offsets_[i]};
  }
  // Pair indices (e, position of i in e) for every hyperedge containing i.
  [[nodiscard]] std::span<const std::size_t> incident_pairs(NodeId i) const {
    return {incident_pairs_.data() + incidence_offsets_[i],
            incidence_offsets_[i + 1] - incidence_offsets_[i]};
  }
  [[nodiscard]] std::size_t degree(NodeId i) const {
    return incidence_offsets_[i + 1] - incidence_offsets_[i];
  }
  // Node owning a pair index.
  [[nodiscard]] NodeId pair_node(std::size_t pair) const { return members_[pair]; }
  [[nodiscard]] std::size_t pair_hyperedge(std::size_t pair) const { return pair_edge_[pair]; }

  // Node set must be sorted.
  [[nodiscard]] bool contains(std::span<const NodeId> sorted_nodes) const;

  // Copy keeping only hyperedges of size <= max_size; node set unchanged.
  [[nodiscard]] Hypergraph truncated(int max_size) const;

  // Optional external node names (index = dense id).
  [[nodiscard]] const std::vector<std::string>& node_labels() const { return labels_; }
  void set_node_labels(std::vector<std::string> labels);

 private:
  [[nodiscard]] static std::uint64_t hash_nodes(std::span<const NodeId> nodes);

  int num_nodes_ = 0;
  int max_size_ = 2;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> members_;
  std::vector<std::size_t> pair_edge_;
  std::vector<std::size_t> incidence_offsets_{0};
  std::vector<std::size_t> incident_edges_;
  std::vector<std::size_t> incident_pairs_;
  std::unordered_multimap<std::uint64_t, std::size_t> lookup_;
  std::vector<std::string> labels_;
};

// Text format: one hyperedge per line, whitespace-separated tokens; lines
// starting with '#' are comments; tokens map to dense ids in order of first
// appearance. A repeated hyperedge (as a set) is an error naming the line.
// min_nodes pads the node set with isolated nodes when the file mentions fewer.
[[nodiscard]] Hypergraph read_hypergraph(std::istream& in, int min_nodes = 0, int max_size = 0);
[[nodiscard]] Hypergraph read_hypergraph_file(const std::string& path, int min_nodes = 0,
                                              int max_size = 0);

// Writes node labels when present, integer ids otherwise.
void write_hypergraph(std::ostream& out, const Hypergraph& graph);

// Relabels nodes so that ids follow the order of first appearance in the
// hyperedge list (isolated nodes last, in their original order). Returns the
// relabeled graph and the permutation old id -> new id.
struct CanonicalHypergraph {
  Hypergraph graph;
  std::vector<NodeId> new_id;
};
[[nodiscard]] CanonicalHypergraph canonical_order(const Hypergraph& graph);

}  // namespace hysbm
