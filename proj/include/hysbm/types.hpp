#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

namespace hysbm {

using NodeId = std::int32_t;
using Index = Eigen::Index;

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Floor for affinities entering a logarithm or a denominator.
inline constexpr double kAffinityFloor = 1e-10;

// Hard community labels, one per node.
class Assignment {
 public:
  Assignment() = default;
  Assignment(std::vector<int> labels, int num_communities);

  [[nodiscard]] std::span<const int> labels() const { return labels_; }
  [[nodiscard]] int operator[](std::size_t i) const { return labels_[i]; }
  [[nodiscard]] std::size_t size() const { return labels_.size(); }
  [[nodiscard]] int num_communities() const { return num_communities_; }

  // Number of nodes carrying each label.
  [[nodiscard]] std::vector<std::int64_t> community_sizes() const;

 private:
  std::vector<int> labels_;
  int num_communities_ = 0;
};

}  // namespace hysbm
