#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hadeq/space.hpp"

namespace hadeq {

/// Outcome of one identity/inequality over a random sweep. `worst` is the
/// smallest signed margin seen; the check passes when worst >= -tolerance.
struct SweepCheck {
  std::string name;
  int samples = 0;
  double worst = 0.0;
  double tolerance = 0.0;
  std::vector<Point> witness;
  double witness_t = 0.0;

  bool passed() const { return worst >= -tolerance; }
};

struct GeometrySweepConfig {
  int samples = 10000;
  std::uint64_t seed = 0;
  double radius = 2.0;
  double tolerance = 1e-9;
};

struct GeometrySweepReport {
  SpaceKind kind;
  std::vector<SweepCheck> checks;

  bool passed() const;
};

/// Random sweep over the metric axioms, the CAT(0) distance inequalities for
/// geodesic combinations, the quasi-linearization algebra and Cauchy-Schwarz.
/// Euclidean spaces additionally get the flat equality case of the CAT(0)
/// inequality and the affine identity of <xy, x(lz (+) (1-l)u)>.
GeometrySweepReport sweep_geometry(const Space& space, const GeometrySweepConfig& config);

}  // namespace hadeq
