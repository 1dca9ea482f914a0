#include "hadeq/experiment.hpp"

#include <algorithm>
#include <fstream>
#include <memory>
#include <sstream>

#include "hadeq/error.hpp"
#include "hadeq/geometry_sweep.hpp"
#include "hadeq/property_check.hpp"
#include "hadeq/sampling.hpp"

namespace hadeq {

namespace {

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorCode::kParse, what); }

const Json& require_field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) parse_error(std::string("missing field '") + key + "'");
  return j.at(key);
}

template <class T>
T get_or(const Json& j, const char* key, T fallback) {
  if (!j.is_object() || !j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    parse_error(std::string("bad value for '") + key + "': " + e.what());
  }
}

std::string kind_of(const Json& j) {
  const Json& k = require_field(j, "kind");
  if (!k.is_string()) parse_error("'kind' must be a string");
  return k.get<std::string>();
}

Objective build_objective(const Space& space, const Json& spec, Json& canonical) {
  const std::string kind = kind_of(spec);
  canonical["kind"] = kind;
  if (kind == "half_squared_distance") {
    Point a = point_from_json(space, require_field(spec, "anchor"));
    canonical["anchor"] = to_json(a);
    return half_squared_distance(space, a);
  }
  if (kind == "frechet") {
    const Json& list = require_field(spec, "anchors");
    if (!list.is_array() || list.empty()) parse_error("frechet objective needs a nonempty anchor list");
    std::vector<Point> anchors;
    Json cj = Json::array();
    for (const auto& p : list) {
      anchors.push_back(point_from_json(space, p));
      cj.push_back(to_json(anchors.back()));
    }
    auto weights = get_or<std::vector<double>>(spec, "weights", {});
    if (!weights.empty() && weights.size() != anchors.size()) {
      parse_error("frechet objective needs one weight per anchor");
    }
    if (std::any_of(weights.begin(), weights.end(), [](double w) { return !(w > 0.0); })) {
      parse_error("frechet weights must be positive");
    }
    canonical["anchors"] = std::move(cj);
    if (!weights.empty()) canonical["weights"] = weights;
    return frechet_objective(space, std::move(anchors), std::move(weights));
  }
  if (kind == "set_distance") {
    ConvexSet s = set_from_json(space, require_field(spec, "set"));
    canonical["set"] = to_json(s);
    return set_distance_objective(space, std::move(s));
  }
  parse_error("unknown objective kind '" + kind + "'");
}

PointMap build_map(const Space& space, const Json& spec, Json& canonical) {
  const std::string kind = kind_of(spec);
  canonical["kind"] = kind;
  if (kind == "identity") return identity_map();
  if (kind == "constant") {
    Point c = point_from_json(space, require_field(spec, "point"));
    canonical["point"] = to_json(c);
    return constant_map(std::move(c));
  }
  if (kind == "projection") {
    ConvexSet s = set_from_json(space, require_field(spec, "set"));
    canonical["set"] = to_json(s);
    return projection_map(space, std::move(s));
  }
  if (kind == "dilation") {
    if (!space.is_manifold()) parse_error("dilation maps need a manifold space");
    const double factor = get_or<double>(spec, "factor", 1.0);
    canonical["factor"] = factor;
    return dilation_map(space, factor);
  }
  parse_error("unknown map kind '" + kind + "'");
}

Algorithm algorithm_from_string(const std::string& name) {
  if (name == "ppa") return Algorithm::kPpa;
  if (name == "halpern") return Algorithm::kHalpern;
  if (name == "resolvent_path") return Algorithm::kResolventPath;
  parse_error("unknown algorithm '" + name + "'");
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) parse_error("cannot open config file " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    parse_error("config file " + path.string() + " is not valid JSON: " + e.what());
  }
}

int exit_code(TerminalStatus status) {
  switch (status) {
    case TerminalStatus::kConverged: return kExitOk;
    case TerminalStatus::kSubproblemFailed: return kExitSubproblemFailed;
    case TerminalStatus::kMaxIter: return kExitMaxIter;
  }
  return kExitUsage;
}

}  // namespace

const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kPpa: return "ppa";
    case Algorithm::kHalpern: return "halpern";
    case Algorithm::kResolventPath: return "resolvent_path";
  }
  return "unknown";
}

Bifunction build_bifunction(const Space& space, const Json& spec, Json* canonical) {
  Json c;
  const std::string kind = kind_of(spec);
  c["kind"] = kind;
  auto finish = [&](Bifunction f) {
    if (canonical) *canonical = std::move(c);
    return f;
  };
  if (kind == "minimization") {
    Json oc;
    Objective phi = build_objective(space, require_field(spec, "objective"), oc);
    c["objective"] = std::move(oc);
    return finish(make_minimization_bifunction(space, std::move(phi)));
  }
  if (kind == "vi") {
    Json mc;
    PointMap T = build_map(space, require_field(spec, "map"), mc);
    const std::string name = "vi_" + mc["kind"].get<std::string>();
    c["map"] = std::move(mc);
    return finish(make_vi_bifunction(space, std::move(T), name));
  }
  if (kind == "zero") return finish(make_zero_bifunction(space));
  if (kind == "regularized") {
    Json bc;
    Bifunction base = build_bifunction(space, require_field(spec, "base"), &bc);
    Point anchor = point_from_json(space, require_field(spec, "anchor"));
    const double lambda = get_or<double>(spec, "lambda", 1.0);
    if (!(lambda > 0.0)) parse_error("regularization lambda must be > 0");
    c["base"] = std::move(bc);
    c["anchor"] = to_json(anchor);
    c["lambda"] = lambda;
    return finish(make_regularized_bifunction(space, std::move(base), std::move(anchor), lambda));
  }
  parse_error("unknown bifunction kind '" + kind + "'");
}

ExperimentConfig parse_experiment(const Json& j) {
  if (!j.is_object()) parse_error("experiment config must be a JSON object");
  Space space = space_from_json(require_field(j, "space"));
  ConvexSet set = j.contains("set") ? set_from_json(space, j.at("set")) : ConvexSet::whole_space();
  Json bif_canonical;
  Bifunction f = build_bifunction(space, require_field(j, "bifunction"), &bif_canonical);
  const Algorithm algorithm = algorithm_from_string(get_or<std::string>(j, "algorithm", "ppa"));

  Point x0 = j.contains("x0") ? point_from_json(space, j.at("x0")) : space.origin();
  const double theta = f.hints().theta.value_or(0.0);
  SolveConfig solve{x0};
  solve.lambda_schedule = j.contains("lambda_schedule") ? schedule_from_json(j.at("lambda_schedule"))
                                                        : Schedule::constant(std::max(1.0, 2.0 * theta));
  if (j.contains("error_schedule")) solve.error_schedule = schedule_from_json(j.at("error_schedule"));
  if (j.contains("alpha_schedule")) solve.alpha_schedule = schedule_from_json(j.at("alpha_schedule"));
  if (j.contains("anchor_u") && !j.at("anchor_u").is_null()) {
    solve.anchor_u = point_from_json(space, j.at("anchor_u"));
  }
  solve.max_outer = get_or<int>(j, "max_outer", solve.max_outer);
  solve.tol_step = get_or<double>(j, "tol_step", solve.tol_step);
  solve.probe_radius = get_or<double>(j, "probe_radius", solve.probe_radius);
  if (j.contains("resolvent")) solve.resolvent = resolvent_options_from_json(j.at("resolvent"));
  const auto seed = get_or<std::uint64_t>(j, "seed", 0);
  solve.rng_seed = seed;
  solve.resolvent.seed = seed;

  if (solve.max_outer < 1) parse_error("max_outer must be >= 1");
  if (!(solve.tol_step > 0.0)) parse_error("tol_step must be > 0");
  if (!(solve.probe_radius > 0.0)) parse_error("probe_radius must be > 0");

  std::vector<double> lambdas = get_or<std::vector<double>>(j, "lambdas", {});
  switch (algorithm) {
    case Algorithm::kPpa:
      solve.lambda_schedule.validate_as_lambda(theta);
      solve.error_schedule.validate_as_error();
      break;
    case Algorithm::kHalpern:
      solve.lambda_schedule.validate_as_lambda(theta);
      solve.alpha_schedule.validate_as_alpha();
      if (!solve.anchor_u) parse_error("halpern needs 'anchor_u'");
      break;
    case Algorithm::kResolventPath:
      if (lambdas.empty()) parse_error("resolvent_path needs a nonempty 'lambdas' list");
      for (std::size_t i = 0; i < lambdas.size(); ++i) {
        if (!(lambdas[i] > 0.0) || (i > 0 && !(lambdas[i] < lambdas[i - 1]))) {
          parse_error("'lambdas' must be positive and strictly decreasing");
        }
      }
      break;
  }

  std::optional<Point> reference;
  if (j.contains("reference") && !j.at("reference").is_null()) {
    reference = point_from_json(space, j.at("reference"));
  }

  CheckSpaceOptions cs;
  if (j.contains("check_space")) {
    const Json& c = j.at("check_space");
    cs.samples = get_or<int>(c, "samples", cs.samples);
    cs.radius = get_or<double>(c, "radius", cs.radius);
    cs.tolerance = get_or<double>(c, "tolerance", cs.tolerance);
    if (c.contains("corruption") && !c.at("corruption").is_null()) {
      const Json& k = c.at("corruption");
      cs.corruption = MetricCorruption{get_or<double>(k, "scale", 1.0), get_or<double>(k, "threshold", 0.0)};
    }
    if (cs.samples < 1 || !(cs.radius > 0.0) || !(cs.tolerance >= 0.0)) parse_error("invalid check_space options");
  }

  CheckBifunctionOptions cb;
  if (j.contains("check_bifunction")) {
    const Json& c = j.at("check_bifunction");
    if (c.contains("properties")) {
      cb.properties.clear();
      for (const auto& name : get_or<std::vector<std::string>>(c, "properties", {})) {
        auto p = property_from_string(name);
        if (!p) parse_error("unknown property '" + name + "'");
        cb.properties.push_back(*p);
      }
      if (cb.properties.empty()) parse_error("check_bifunction needs at least one property");
    }
    cb.samples = get_or<int>(c, "samples", cb.samples);
    cb.radius = get_or<double>(c, "radius", cb.radius);
    cb.tolerance = get_or<double>(c, "tolerance", cb.tolerance);
    cb.declared = get_or<double>(c, "declared", cb.declared);
    cb.lambda = get_or<double>(c, "lambda", cb.lambda);
    cb.pairs = get_or<int>(c, "pairs", cb.pairs);
    if (cb.samples < 1 || cb.pairs < 1 || !(cb.radius > 0.0) || !(cb.lambda > 0.0)) {
      parse_error("invalid check_bifunction options");
    }
  }

  return ExperimentConfig{std::move(space),
                          std::move(set),
                          std::move(bif_canonical),
                          algorithm,
                          std::move(solve),
                          std::move(lambdas),
                          std::move(reference),
                          seed,
                          cs,
                          cb,
                          get_or<std::string>(j, "output_dir", "."),
                          get_or<std::string>(j, "output_name", "trace")};
}

Json to_json(const ExperimentConfig& config) {
  const SolveConfig& s = config.solve;
  Json j;
  j["space"] = to_json(config.space);
  j["set"] = to_json(config.set);
  j["bifunction"] = config.bifunction;
  j["algorithm"] = to_string(config.algorithm);
  j["x0"] = to_json(s.x0);
  j["lambda_schedule"] = to_json(s.lambda_schedule);
  j["error_schedule"] = to_json(s.error_schedule);
  j["alpha_schedule"] = to_json(s.alpha_schedule);
  j["anchor_u"] = s.anchor_u ? to_json(*s.anchor_u) : Json(nullptr);
  j["max_outer"] = s.max_outer;
  j["tol_step"] = s.tol_step;
  j["probe_radius"] = s.probe_radius;
  j["resolvent"] = to_json(s.resolvent);
  j["lambdas"] = config.lambdas;
  j["reference"] = config.reference ? to_json(*config.reference) : Json(nullptr);
  j["seed"] = config.seed;

  Json cs;
  cs["samples"] = config.check_space.samples;
  cs["radius"] = config.check_space.radius;
  cs["tolerance"] = config.check_space.tolerance;
  if (config.check_space.corruption) {
    cs["corruption"] = {{"scale", config.check_space.corruption->scale},
                        {"threshold", config.check_space.corruption->threshold}};
  }
  j["check_space"] = std::move(cs);

  Json cb;
  Json props = Json::array();
  for (auto p : config.check_bifunction.properties) props.push_back(to_string(p));
  cb["properties"] = std::move(props);
  cb["samples"] = config.check_bifunction.samples;
  cb["radius"] = config.check_bifunction.radius;
  cb["tolerance"] = config.check_bifunction.tolerance;
  cb["declared"] = config.check_bifunction.declared;
  cb["lambda"] = config.check_bifunction.lambda;
  cb["pairs"] = config.check_bifunction.pairs;
  j["check_bifunction"] = std::move(cb);

  j["output_dir"] = config.output_dir;
  j["output_name"] = config.output_name;
  return j;
}

ExperimentConfig load_experiment(const std::filesystem::path& path, const Json& overrides) {
  Json j = read_json_file(path);
  if (!j.is_object()) parse_error("experiment config must be a JSON object");
  for (const auto& [key, value] : overrides.items()) {
    if (value.is_structured()) parse_error("override for '" + key + "' must be a scalar");
    if (j.contains(key) && j.at(key).is_structured()) parse_error("'" + key + "' is not a top-level scalar field");
    j[key] = value;
  }
  return parse_experiment(j);
}

int cmd_check_space(const ExperimentConfig& config, std::ostream& out) {
  Space space = config.check_space.corruption ? config.space.with_metric_corruption(*config.check_space.corruption)
                                              : config.space;
  GeometrySweepConfig sweep;
  sweep.samples = config.check_space.samples;
  sweep.seed = config.seed;
  sweep.radius = config.check_space.radius;
  sweep.tolerance = config.check_space.tolerance;
  const GeometrySweepReport report = sweep_geometry(space, sweep);
  out << to_json(report).dump(2) << '\n';
  return report.passed() ? kExitOk : kExitViolation;
}

int cmd_check_bifunction(const ExperimentConfig& config, std::ostream& out) {
  const Bifunction f = build_bifunction(config.space, config.bifunction);
  const CheckBifunctionOptions& o = config.check_bifunction;
  SamplerConfig sc;
  sc.seed = config.seed;
  sc.samples = o.samples;
  sc.radius = o.radius;
  sc.declared = o.declared;

  std::vector<PropertyReport> reports;
  std::optional<FirmnessReport> firmness;
  for (PropertyKind p : o.properties) {
    if (p == PropertyKind::kFirmlyNonexpansive || p == PropertyKind::kNonexpansive) {
      if (!firmness) {
        Sampler sampler(config.space, config.seed, o.radius);
        std::vector<std::pair<Point, Point>> pairs;
        for (int i = 0; i < o.pairs; ++i) {
          Point x = sampler.point();
          pairs.emplace_back(std::move(x), sampler.point());
        }
        firmness = check_firmly_nonexpansive(f, config.space, config.set, o.lambda, pairs, config.solve.resolvent);
      }
      reports.push_back(p == PropertyKind::kFirmlyNonexpansive ? firmness->firm : firmness->nonexpansive);
    } else {
      reports.push_back(check_property(f, config.space, config.set, p, sc));
    }
  }

  bool passed = true;
  Json list = Json::array();
  for (const auto& r : reports) {
    passed = passed && r.holds(o.tolerance);
    list.push_back(to_json(r));
  }
  Json j;
  j["bifunction"] = f.name();
  j["tolerance"] = o.tolerance;
  j["passed"] = passed;
  j["reports"] = std::move(list);
  out << j.dump(2) << '\n';
  return passed ? kExitOk : kExitViolation;
}

IterateTrace run_experiment(const ExperimentConfig& config) {
  const Bifunction f = build_bifunction(config.space, config.bifunction);
  switch (config.algorithm) {
    case Algorithm::kPpa: return run_ppa(f, config.space, config.set, config.solve, config.reference);
    case Algorithm::kHalpern: return run_halpern(f, config.space, config.set, config.solve, config.reference);
    case Algorithm::kResolventPath:
      return run_resolvent_path(f, config.space, config.set, config.solve.x0, config.lambdas,
                                config.solve.resolvent, config.reference);
  }
  throw Error(ErrorCode::kContractViolation, "unknown algorithm");
}

Json sidecar_json(const ExperimentConfig& config, const IterateTrace& trace) {
  Json j;
  j["config"] = to_json(config);
  j["seed"] = config.seed;
  j["status"] = to_string(trace.status);
  j["iterations"] = trace.records.size();
  j["final_point"] = to_json(trace.final_point());
  if (!trace.records.empty()) {
    j["final_step"] = trace.records.back().step;
    j["final_residual"] = trace.records.back().residual;
    if (trace.records.back().dist_to_ref) j["final_dist_to_ref"] = *trace.records.back().dist_to_ref;
  }
  if (!trace.failure.empty()) j["failure"] = trace.failure;
  return j;
}

int cmd_solve(const ExperimentConfig& config, std::ostream& out) {
  const IterateTrace trace = run_experiment(config);
  const std::filesystem::path dir(config.output_dir);
  std::filesystem::create_directories(dir);
  const auto csv_path = dir / (config.output_name + ".csv");
  const auto json_path = dir / (config.output_name + ".json");
  {
    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv) throw Error(ErrorCode::kParse, "cannot write " + csv_path.string());
    write_trace_csv(csv, trace);
  }
  const Json sidecar = sidecar_json(config, trace);
  {
    std::ofstream js(json_path, std::ios::binary);
    if (!js) throw Error(ErrorCode::kParse, "cannot write " + json_path.string());
    js << sidecar.dump(2) << '\n';
  }
  Json summary;
  summary["status"] = sidecar["status"];
  summary["iterations"] = sidecar["iterations"];
  summary["final_point"] = sidecar["final_point"];
  summary["trace"] = csv_path.string();
  summary["sidecar"] = json_path.string();
  if (sidecar.contains("failure")) summary["failure"] = sidecar["failure"];
  out << summary.dump(2) << '\n';
  return exit_code(trace.status);
}

}  // namespace hadeq
