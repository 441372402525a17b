#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "capra/norms.hpp"

namespace capra::cli {

/// Thrown for malformed flags or values; maps to exit code 1.
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Parses "a,b,c" into a finite vector.
VectorXd parse_vector(std::string_view text);

void cmd_norm(const VectorXd& x, const std::vector<Index>& ks, std::ostream& out);

struct ConjConfig {
  Index d = 2;
  Index resolution = 720;  // dual directions
  Index samples = 0;       // primal unit vectors per sparsity level; 0 means 2 * resolution
  double radius = 5.0;
  Index radii = 50;
  std::uint64_t seed = 0;
};

/// CSV y_1..y_d,grid,closed,delta comparing the grid Capra conjugate of l0
/// with its closed form. Returns the max |delta|.
double cmd_conj(const ConjConfig& config, std::ostream& out);

void cmd_l0ext_point(const VectorXd& x, std::ostream& out);

/// CSV x_1,x_2,value,branch over [-1.1, 1.1]^2, resolution points per axis.
void cmd_l0ext_grid(Index resolution, std::ostream& out);

/// Full command line front end. Returns the process exit code.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace capra::cli
