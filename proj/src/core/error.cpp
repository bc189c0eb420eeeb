#include "hysbm/error.hpp"
#include "hysbm/types.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace hysbm {

namespace {
std::atomic<bool> g_warnings{true};
std::mutex g_warn_mutex;
}  // namespace

void warn(const std::string& message) {
  if (!g_warnings.load()) return;
  std::lock_guard lock(g_warn_mutex);
  std::cerr << "warning: " << message << '\n';
}

void set_warnings_enabled(bool enabled) { g_warnings.store(enabled); }
bool warnings_enabled() { return g_warnings.load(); }

Assignment::Assignment(std::vector<int> labels, int num_communities)
    : labels_(std::move(labels)), num_communities_(num_communities) {
  if (num_communities_ < 1) throw InputError("assignment needs at least one community");
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] < 0 || labels_[i] >= num_communities_) {
      throw InputError("label " + std::to_string(labels_[i]) + " of node " + std::to_string(i) +
                       " outside [0, " + std::to_string(num_communities_) + ")");
    }
  }
}

std::vector<std::int64_t> Assignment::community_sizes() const {
  std::vector<std::int64_t> sizes(static_cast<std::size_t>(num_communities_), 0);
  for (int label : labels_) ++sizes[static_cast<std::size_t>(label)];
  return sizes;
}

}  // namespace hysbm
