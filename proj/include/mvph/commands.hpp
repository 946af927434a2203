#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "mvph/json_io.hpp"

// JSON-in, JSON-out workflows shared by the command-line tool and the Python
// module. Every report carries "schema": 1 and is a pure function of its
// inputs and options.
namespace mvph::commands {

struct Options {
  std::uint64_t seed = 42;
  /// Command default when unset (simulate: 100000, wishart-demo: 1000000).
  std::optional<std::size_t> samples;
  /// Verification points for realize.
  std::size_t points = 30;
  /// Treat a polynomial or transform input as the minimal-form denominator.
  bool minimal = true;
  std::size_t trials = 1024;
  /// Include the exact-rational representation in realize output.
  bool exact = false;
  std::vector<double> direction;
  std::vector<double> u_grid;
  std::vector<std::vector<double>> s_points;
  unsigned workers = 0;
};

Json realize(const Json& input, const Options& options);
Json check_mphstar(const Json& input, const Options& options);
Json project(const Json& input, const Options& options);
Json simulate(const Json& input, const Options& options);
Json wishart_demo(const Options& options);

}  // namespace mvph::commands
