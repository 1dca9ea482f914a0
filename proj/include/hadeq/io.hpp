#pragma once

#include <ostream>
#include <string>

#include <json.hpp>

#include "hadeq/convex_set.hpp"
#include "hadeq/geometry_sweep.hpp"
#include "hadeq/property_check.hpp"
#include "hadeq/resolvent.hpp"
#include "hadeq/schedule.hpp"
#include "hadeq/solvers.hpp"
#include "hadeq/space.hpp"

namespace hadeq {

using Json = nlohmann::ordered_json;

// Point schema per space kind:
//   {"kind": "euclidean",   "coords": [x_1, ..., x_n]}
//   {"kind": "hyperboloid", "coords": [x_0, x_1, ..., x_n]}   ambient, x_0 > 0
//   {"kind": "hyperboloid", "spatial": [x_1, ..., x_n]}       lifted to the sheet
//   {"kind": "star_tree",   "ray": i, "radius": r}
// "kind" may be omitted when parsing against a known space.
Json to_json(const Point& p);
Point point_from_json(const Space& space, const Json& j);

// {"kind": "euclidean", "dim": n}, {"kind": "hyperboloid", "dim": n},
// {"kind": "star_tree", "rays": k}
Json to_json(const Space& space);
Space space_from_json(const Json& j);

// {"kind": "whole_space"}, {"kind": "ball", "center": P, "radius": r},
// {"kind": "segment", "a": P, "b": P}, {"kind": "subtree", "rays": [..], "cap": r}
Json to_json(const ConvexSet& set);
ConvexSet set_from_json(const Space& space, const Json& j);

// {"kind": "constant", "c": c}, {"kind": "geometric", "a": a, "q": q},
// {"kind": "harmonic"}, {"kind": "custom", "values": [..]}
Json to_json(const Schedule& s);
Schedule schedule_from_json(const Json& j);

Json to_json(const ResolventOptions& options);
ResolventOptions resolvent_options_from_json(const Json& j);

Json to_json(const PropertyReport& report);
Json to_json(const GeometrySweepReport& report);
Json to_json(const ResolventResult& result);

/// Shortest round-trip text is not required; every real is printed with 17
/// significant digits so equal doubles always give equal text.
std::string format_real(double v);

inline constexpr const char* kTraceHeader = "k,step,residual,dist_to_ref,lambda_k,alpha_k,e_k";

/// Header plus one row per record; missing optional columns are left empty.
void write_trace_csv(std::ostream& out, const IterateTrace& trace);

}  // namespace hadeq
