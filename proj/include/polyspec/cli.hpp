#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "polyspec/mesh.hpp"

namespace polyspec {

// P1 values of a DOF vector along y = y0 at equally spaced x across the net's extent on that
// line; samples falling in gaps between faces are skipped. Rows are (x, value).
std::vector<std::pair<double, double>> slice(const SurfaceMesh& mesh, const Eigen::VectorXd& values,
                                             double y0, int samples);

// Exit status: 0 success, 1 domain error, 2 usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Writes content to path through a temporary file and a rename.
void write_atomically(const std::string& path, const std::string& content);

// %.17g
std::string format_number(double v);

} // namespace polyspec
