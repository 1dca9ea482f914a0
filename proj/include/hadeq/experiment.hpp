#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hadeq/bifunction.hpp"
#include "hadeq/io.hpp"
#include "hadeq/solvers.hpp"

namespace hadeq {

// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitViolation = 2;
inline constexpr int kExitSubproblemFailed = 3;
inline constexpr int kExitMaxIter = 4;

enum class Algorithm { kPpa, kHalpern, kResolventPath };

const char* to_string(Algorithm a);

struct CheckSpaceOptions {
  int samples = 10000;
  double radius = 2.0;
  double tolerance = 1e-9;
  /// Negative-control hook.
  std::optional<MetricCorruption> corruption;
};

struct CheckBifunctionOptions {
  std::vector<PropertyKind> properties{PropertyKind::kP1, PropertyKind::kMonotone};
  int samples = 10000;
  double radius = 2.0;
  double tolerance = 1e-8;
  /// Declared theta / alpha / beta.
  double declared = 0.0;
  /// Resolvent parameter and pair count for the firmness checks.
  double lambda = 1.0;
  int pairs = 1000;
};

/// One experiment: the problem, the algorithm and its parameters, the checks
/// and where the outputs go. Built only through parse_experiment.
struct ExperimentConfig {
  Space space;
  ConvexSet set;
  /// Canonical builtin description; see build_bifunction.
  Json bifunction;
  Algorithm algorithm;
  SolveConfig solve;
  /// RESOLVENT_PATH parameters (strictly decreasing).
  std::vector<double> lambdas;
  /// Instrumentation only: fills the dist_to_ref column.
  std::optional<Point> reference;
  std::uint64_t seed;
  CheckSpaceOptions check_space;
  CheckBifunctionOptions check_bifunction;
  std::string output_dir;
  std::string output_name;
};

// Builtin bifunctions:
//   {"kind": "minimization", "objective": O}   f(x,y) = phi(y) - phi(x)
//     O = {"kind": "half_squared_distance", "anchor": P}
//       | {"kind": "frechet", "anchors": [P, ...], "weights": [w, ...]}
//       | {"kind": "set_distance", "set": K}
//   {"kind": "vi", "map": M}                   f(x,y) = <(Tx)x, xy>
//     M = {"kind": "identity"} | {"kind": "constant", "point": P}
//       | {"kind": "projection", "set": K} | {"kind": "dilation", "factor": s}
//   {"kind": "zero"}
//   {"kind": "regularized", "base": F, "anchor": P, "lambda": l}
Bifunction build_bifunction(const Space& space, const Json& spec, Json* canonical = nullptr);

/// Throws Error(kParse) or the schedule / set validation error.
ExperimentConfig parse_experiment(const Json& j);
Json to_json(const ExperimentConfig& config);

/// Reads a config file and applies top-level scalar overrides (--seed, --set).
ExperimentConfig load_experiment(const std::filesystem::path& path, const Json& overrides = Json::object());

/// Each command writes its JSON report to `out` and returns the exit code.
int cmd_check_space(const ExperimentConfig& config, std::ostream& out);
int cmd_check_bifunction(const ExperimentConfig& config, std::ostream& out);
/// Writes <output_dir>/<output_name>.csv and the .json sidecar.
int cmd_solve(const ExperimentConfig& config, std::ostream& out);

/// Runs the configured algorithm without touching the filesystem.
IterateTrace run_experiment(const ExperimentConfig& config);
Json sidecar_json(const ExperimentConfig& config, const IterateTrace& trace);

}  // namespace hadeq
