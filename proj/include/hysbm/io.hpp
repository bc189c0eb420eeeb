#pragma once

#include "hysbm/types.hpp"

#include <iosfwd>
#include <string>

namespace hysbm {

// One integer label per line in node order; '#' lines and blank lines are
// skipped. K is max label + 1 unless num_communities is positive.
[[nodiscard]] Assignment read_assignment(std::istream& in, int num_communities = 0);
[[nodiscard]] Assignment read_assignment_file(const std::string& path, int num_communities = 0);
void write_assignment(std::ostream& out, const Assignment& t);
void write_assignment_file(const std::string& path, const Assignment& t);

// Tab-separated, header q0 .. q{K-1}, then one row of K probabilities per node.
[[nodiscard]] Matrix read_marginals(std::istream& in);
[[nodiscard]] Matrix read_marginals_file(const std::string& path);
void write_marginals(std::ostream& out, const Matrix& marginals);
void write_marginals_file(const std::string& path, const Matrix& marginals);

// Opens for writing or throws InputError naming the path.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace hysbm
