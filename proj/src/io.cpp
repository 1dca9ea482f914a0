#include "hadeq/io.hpp"

#include <cstdio>
#include <string>

#include "hadeq/error.hpp"

namespace hadeq {

namespace {

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorCode::kParse, what); }

const Json& require_field(const Json& j, const char* key) {
  if (!j.is_object()) parse_error(std::string("expected an object holding '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) parse_error(std::string("missing field '") + key + "'");
  return *it;
}

template <class T>
T get_as(const Json& j, const char* what) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception& e) {
    parse_error(std::string("bad value for '") + what + "': " + e.what());
  }
}

template <class T>
T field(const Json& j, const char* key) {
  return get_as<T>(require_field(j, key), key);
}

std::string kind_of(const Json& j) { return field<std::string>(j, "kind"); }

Eigen::VectorXd vector_field(const Json& j, const char* key) {
  const auto v = field<std::vector<double>>(j, key);
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Json vector_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Json witness_json(const std::vector<Point>& points) {
  Json a = Json::array();
  for (const auto& p : points) a.push_back(to_json(p));
  return a;
}

}  // namespace

Json to_json(const Point& p) {
  Json j;
  j["kind"] = to_string(p.kind());
  if (p.kind() == SpaceKind::kStarTree) {
    j["ray"] = p.ray();
    j["radius"] = p.radius();
  } else {
    j["coords"] = vector_json(p.coords());
  }
  return j;
}

Point point_from_json(const Space& space, const Json& j) {
  if (!j.is_object()) parse_error("a point must be a JSON object");
  if (j.contains("kind") && kind_of(j) != to_string(space.kind())) {
    parse_error("point of kind '" + kind_of(j) + "' in a " + to_string(space.kind()) + " space");
  }
  try {
    switch (space.kind()) {
      case SpaceKind::kEuclidean: {
        Point p = Point::euclidean(vector_field(j, "coords"));
        space.require(p);
        return p;
      }
      case SpaceKind::kHyperboloid: {
        Point p = j.contains("spatial") ? space.lift(vector_field(j, "spatial"))
                                        : Point::hyperboloid(vector_field(j, "coords"));
        space.require(p);
        return p;
      }
      case SpaceKind::kStarTree: {
        Point p = Point::star_tree(field<int>(j, "ray"), field<double>(j, "radius"));
        space.require(p);
        return p;
      }
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kParse) throw;
    parse_error(std::string("invalid point: ") + e.what());
  }
  parse_error("unknown space kind");
}

Json to_json(const Space& space) {
  Json j;
  j["kind"] = to_string(space.kind());
  if (space.kind() == SpaceKind::kStarTree) {
    j["rays"] = space.rays();
  } else {
    j["dim"] = space.dim();
  }
  return j;
}

Space space_from_json(const Json& j) {
  const std::string kind = kind_of(j);
  try {
    if (kind == "euclidean") return Space::euclidean(field<int>(j, "dim"));
    if (kind == "hyperboloid") return Space::hyperboloid(field<int>(j, "dim"));
    if (kind == "star_tree") return Space::star_tree(field<int>(j, "rays"));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kParse) throw;
    parse_error(std::string("invalid space: ") + e.what());
  }
  parse_error("unknown space kind '" + kind + "'");
}

Json to_json(const ConvexSet& set) {
  return std::visit(
      [](const auto& s) -> Json {
        using T = std::decay_t<decltype(s)>;
        Json j;
        if constexpr (std::is_same_v<T, WholeSpace>) {
          j["kind"] = "whole_space";
        } else if constexpr (std::is_same_v<T, Ball>) {
          j["kind"] = "ball";
          j["center"] = to_json(s.center);
          j["radius"] = s.radius;
        } else if constexpr (std::is_same_v<T, Segment>) {
          j["kind"] = "segment";
          j["a"] = to_json(s.a);
          j["b"] = to_json(s.b);
        } else {
          j["kind"] = "subtree";
          j["rays"] = s.rays;
          if (s.cap) j["cap"] = *s.cap;
        }
        return j;
      },
      set.variant());
}

ConvexSet set_from_json(const Space& space, const Json& j) {
  const std::string kind = kind_of(j);
  auto build = [&]() -> ConvexSet {
    if (kind == "whole_space") return ConvexSet::whole_space();
    if (kind == "ball") {
      return ConvexSet::ball(point_from_json(space, require_field(j, "center")), field<double>(j, "radius"));
    }
    if (kind == "segment") {
      return ConvexSet::segment(point_from_json(space, require_field(j, "a")),
                                point_from_json(space, require_field(j, "b")));
    }
    if (kind == "subtree") {
      std::optional<double> cap;
      if (j.contains("cap") && !j["cap"].is_null()) cap = field<double>(j, "cap");
      return ConvexSet::subtree(field<std::vector<int>>(j, "rays"), cap);
    }
    parse_error("unknown set kind '" + kind + "'");
  };
  try {
    ConvexSet set = build();
    set.validate(space);
    return set;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kParse) throw;
    parse_error(std::string("invalid set: ") + e.what());
  }
}

Json to_json(const Schedule& s) {
  Json j;
  j["kind"] = to_string(s.kind());
  switch (s.kind()) {
    case Schedule::Kind::kConstant: j["c"] = s.a(); break;
    case Schedule::Kind::kGeometric:
      j["a"] = s.a();
      j["q"] = s.q();
      break;
    case Schedule::Kind::kHarmonic: break;
    case Schedule::Kind::kCustom: j["values"] = s.values(); break;
  }
  return j;
}

Schedule schedule_from_json(const Json& j) {
  const std::string kind = kind_of(j);
  if (kind == "constant") return Schedule::constant(field<double>(j, "c"));
  if (kind == "geometric") return Schedule::geometric(field<double>(j, "a"), field<double>(j, "q"));
  if (kind == "harmonic") return Schedule::harmonic();
  if (kind == "custom") return Schedule::custom(field<std::vector<double>>(j, "values"));
  parse_error("unknown schedule kind '" + kind + "'");
}

Json to_json(const ResolventOptions& options) {
  Json j;
  if (options.strategy) j["strategy"] = to_string(*options.strategy);
  j["tol"] = options.tol;
  j["max_inner"] = options.max_inner;
  j["residual_samples"] = options.residual_samples;
  j["residual_tol"] = options.residual_tol;
  return j;
}

ResolventOptions resolvent_options_from_json(const Json& j) {
  ResolventOptions o;
  if (!j.is_object()) parse_error("resolvent options must be an object");
  if (j.contains("strategy")) {
    const auto name = field<std::string>(j, "strategy");
    o.strategy = strategy_from_string(name);
    if (!o.strategy) parse_error("unknown resolvent strategy '" + name + "'");
  }
  if (j.contains("tol")) o.tol = field<double>(j, "tol");
  if (j.contains("max_inner")) o.max_inner = field<int>(j, "max_inner");
  if (j.contains("residual_samples")) o.residual_samples = field<int>(j, "residual_samples");
  if (j.contains("residual_tol")) o.residual_tol = field<double>(j, "residual_tol");
  if (!(o.tol > 0.0) || !(o.residual_tol > 0.0)) parse_error("resolvent tolerances must be positive");
  if (o.max_inner < 1 || o.residual_samples < 1) parse_error("resolvent budgets must be >= 1");
  return o;
}

Json to_json(const PropertyReport& report) {
  Json j;
  j["property"] = to_string(report.property);
  j["samples"] = report.samples;
  j["worst_violation"] = report.worst_violation;
  if (report.estimate) j["estimate"] = *report.estimate;
  Json w = Json::array();
  for (const auto& tuple : report.witnesses) w.push_back(witness_json(tuple));
  j["witnesses"] = std::move(w);
  return j;
}

Json to_json(const GeometrySweepReport& report) {
  Json j;
  j["space"] = to_string(report.kind);
  j["passed"] = report.passed();
  Json checks = Json::array();
  for (const auto& c : report.checks) {
    Json cj;
    cj["name"] = c.name;
    cj["samples"] = c.samples;
    cj["worst"] = c.worst;
    cj["tolerance"] = c.tolerance;
    cj["passed"] = c.passed();
    if (!c.passed()) {
      cj["witness"] = witness_json(c.witness);
      cj["witness_t"] = c.witness_t;
    }
    checks.push_back(std::move(cj));
  }
  j["checks"] = std::move(checks);
  return j;
}

Json to_json(const ResolventResult& result) {
  Json j;
  j["point"] = to_json(result.point);
  j["residual"] = result.residual;
  j["inner_iterations"] = result.inner_iterations;
  j["strategy_used"] = to_string(result.strategy_used);
  return j;
}

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trace_csv(std::ostream& out, const IterateTrace& trace) {
  out << kTraceHeader << '\n';
  for (const auto& r : trace.records) {
    out << r.k << ',' << format_real(r.step) << ',' << format_real(r.residual) << ','
        << (r.dist_to_ref ? format_real(*r.dist_to_ref) : "") << ',' << format_real(r.lambda_k) << ','
        << (r.alpha_k ? format_real(*r.alpha_k) : "") << ',' << format_real(r.e_k) << '\n';
  }
}

}  // namespace hadeq
