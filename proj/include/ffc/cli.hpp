#pragma once

// Command-line front end. Exit codes: 0 success, 1 mathematical rejection,
// 2 malformed input.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "ffc/splittings.hpp"

namespace ffc {

const char* version();

struct RunConfig {
  int rank = 4;
  std::vector<std::string> a{"a"};
  std::vector<std::string> b_factor;  // empty: remaining standard generators
  std::string w = "bbccdd";
  std::string b = "b";
  std::vector<int> n_values{1, 2, 3, 5, 10, 20};
  int samples = 200;
  std::uint64_t seed = 20240501;
  std::string output;

  // Validates eagerly; the message names the failing requirement.
  TwistContext context() const;
  nlohmann::json to_json() const;
};

// Filling checks, psi endpoints, loops, caps and certificates for every N.
nlohmann::json cmd_reproduce(const RunConfig& config);

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace ffc
