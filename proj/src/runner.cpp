#include "vfb/runner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "vfb/errors.hpp"

namespace vfb {

using nlohmann::json;

namespace {

const std::set<std::string> kTopLevelKeys = {
    "algorithm", "algorithms", "instance", "schedule", "psi0",    "tol",    "max_iter",
    "selection", "strict",     "history",  "sweep",    "seed",    "audit_samples"};

[[noreturn]] void bad(const std::string& condition, const std::string& detail) {
  throw ConfigError(condition, detail);
}

double number(const json& j, const std::string& what) {
  if (!j.is_number()) bad("well-formed config", what + " must be a number");
  return j.get<double>();
}

Point point_from(const json& j, std::size_t dim, const std::string& what) {
  if (j.is_number()) return Point::Constant(Eigen::Index(dim), j.get<double>());
  if (!j.is_array()) bad("well-formed config", what + " must be a number or an array");
  if (j.size() != dim) throw DimensionMismatch(dim, j.size());
  Point p(static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < dim; ++i) p(Eigen::Index(i)) = number(j[i], what);
  return p;
}

Sequence sequence_from(const json& j, const std::string& what) {
  if (j.is_number()) return Sequence::constant(j.get<double>());
  if (!j.is_object() || !j.contains("type"))
    bad("well-formed config", what + " must be a number or an object with a type");
  const std::string type = j.at("type").get<std::string>();
  if (type == "constant") return Sequence::constant(number(j.at("value"), what + ".value"));
  if (type == "harmonic")
    return Sequence::harmonic(j.value("scale", 1.0), j.value("offset", 1.0), j.value("power", 1.0));
  if (type == "approach_one") return Sequence::approach_one(j.value("scale", 1.0), j.value("offset", 1.0));
  if (type == "table") {
    std::vector<double> values;
    for (const auto& v : j.at("values")) values.push_back(number(v, what + ".values"));
    return Sequence(Tabulated{std::move(values)});
  }
  bad("known sequence type", what + ": unknown sequence type '" + type + "'");
}

ConvexSet set_from(const json& j, std::size_t dim) {
  const std::string type = j.value("type", "box");
  if (type == "whole_space") return ConvexSet::whole_space();
  if (type == "box")
    return ConvexSet::box(point_from(j.value("lower", json(-1.0)), dim, "set.lower"),
                          point_from(j.value("upper", json(1.0)), dim, "set.upper"));
  if (type == "ball")
    return ConvexSet::ball(point_from(j.value("center", json(0.0)), dim, "set.center"),
                           j.value("radius", 1.0));
  if (type == "half_space")
    return ConvexSet::half_space(point_from(j.at("normal"), dim, "set.normal"), j.value("offset", 0.0));
  bad("known set type", "unknown set type '" + type + "'");
}

InclusionOptions options_from(const json& inst, const json& root) {
  InclusionOptions o;
  if (inst.contains("params")) {
    const json& p = inst["params"];
    o.params.gamma = p.value("gamma", o.params.gamma);
    o.params.eta = p.value("eta", o.params.eta);
    o.params.b = p.value("b", o.params.b);
  }
  o.beta_demi = inst.value("beta_demi", o.beta_demi);
  if (inst.contains("contraction")) {
    const json& c = inst["contraction"];
    o.contraction_coef = c.value("coef", 0.0);
    if (c.contains("offset")) {
      const std::size_t dim = inst.value("dim", std::size_t{1});
      o.contraction_offset = point_from(c["offset"], dim, "contraction.offset");
    }
  }
  try {
    o.selection = selection_rule_from_string(root.value("selection", std::string("metric")));
  } catch (const InvalidDescriptor& e) {
    bad("known selection rule", e.what());
  }
  const std::string mode = inst.value("mode", std::string("strict"));
  if (mode == "strict") o.mode = FixedPointMode::Strict;
  else if (mode == "metric_projection") o.mode = FixedPointMode::MetricProjection;
  else bad("known fixed-point mode", "unknown mode '" + mode + "'");
  return o;
}

ProblemInstance instance_from(const json& root) {
  const json inst = root.value("instance", json::object());
  const std::string id = inst.value("id", std::string("inclusion"));
  const InclusionOptions options = options_from(inst, root);

  if (id == "trivial") return make_trivial_instance(inst.value("dim", std::size_t{2}), options);
  if (id == "example3") return make_example3_instance(options);

  std::size_t dim = 0;
  json set = json::object();
  if (id == "inclusion") dim = inst.value("dim", std::size_t{2});
  else if (id == "inclusion1d") dim = 1;
  else if (id == "inclusion2d") dim = 2;
  else if (id == "inclusion10d") dim = 10;
  else if (id == "inclusion_ball2d") {
    dim = 2;
    set = {{"type", "ball"}, {"center", {1.0, 1.0}}, {"radius", std::sqrt(2.0)}};
  } else {
    bad("known instance id", "unknown instance '" + id + "'");
  }
  if (inst.contains("dim") && inst["dim"].get<std::size_t>() != dim)
    throw DimensionMismatch(dim, inst["dim"].get<std::size_t>());
  if (inst.contains("set")) set = inst["set"];
  const Point shift = point_from(inst.value("shift", json(0.0)), dim, "instance.shift");
  ProblemInstance p = make_inclusion_instance(dim, set_from(set, dim), shift, inst.value("scale", 0.5), options);
  if (id != "inclusion") p.name = id;
  return p;
}

Schedule schedule_from(const json& root, const ProblemInstance& problem) {
  Schedule s = default_schedule(problem.params, problem.beta_demi, problem.alpha_ism());
  const json sj = root.value("schedule", json::object());
  for (const auto& [key, value] : sj.items()) {
    if (key == "alpha") s.alpha = sequence_from(value, "schedule.alpha");
    else if (key == "beta") s.beta = sequence_from(value, "schedule.beta");
    else if (key == "gamma") s.gamma = sequence_from(value, "schedule.gamma");
    else if (key == "theta") s.theta = sequence_from(value, "schedule.theta");
    else if (key == "mu") s.mu = sequence_from(value, "schedule.mu");
    else if (key == "lambda") {
      s.lambda = sequence_from(value, "schedule.lambda");
      if (value.is_number()) s.lambda_lo = s.lambda_hi = value.get<double>();
    } else if (key == "lambda_bounds") {
      if (!value.is_array() || value.size() != 2) bad("well-formed config", "lambda_bounds must be [a, b]");
      s.lambda_lo = number(value[0], "lambda_bounds");
      s.lambda_hi = number(value[1], "lambda_bounds");
    } else {
      bad("known schedule key", "unknown schedule key '" + key + "'");
    }
  }
  if (root.contains("strict")) s.summable_alpha = root["strict"].value("summable_alpha", false);
  return s;
}

std::string cell_id(std::size_t index, Algorithm a, const std::string& instance) {
  return fmt::format("{:03d}-{}-{}", index, to_string(a), instance);
}

Cell build_cell(const json& doc, Algorithm algorithm, std::size_t index) {
  Cell c;
  c.algorithm = algorithm;
  c.config = doc;
  c.problem = instance_from(doc);
  c.schedule = schedule_from(doc, c.problem);
  c.start = point_from(doc.value("psi0", json(1.0)), c.problem.dim, "psi0");
  c.stop.tol = doc.value("tol", 1e-10);
  c.stop.max_iter = doc.value("max_iter", std::size_t{100000});
  if (!(c.stop.tol > 0.0)) bad("tol > 0", fmt::format("tol = {}", c.stop.tol));
  if (c.stop.max_iter == 0) bad("max_iter ≥ 1", "max_iter = 0");
  if (doc.contains("history")) {
    c.options.history.dense_until = doc["history"].value("dense_until", c.options.history.dense_until);
    c.options.history.stride = doc["history"].value("stride", c.options.history.stride);
  }
  if (doc.contains("strict"))
    c.options.solver.sow_uses_t2_point = doc["strict"].value("sow_uses_t2_point", false);
  c.audit_samples = doc.value("audit_samples", std::size_t{200});

  c.validation = validate(c.schedule, c.problem.params, std::min<std::size_t>(c.stop.max_iter, 10000));
  if (const auto* f = c.validation.first_failure()) bad(f->label, f->id + ": " + f->detail);
  c.id = cell_id(index, algorithm, c.problem.name);
  return c;
}

std::string g17(double x) {
  if (std::isnan(x)) return "nan";
  return fmt::format("{:.17g}", x);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

json to_json(const Point& p) {
  json a = json::array();
  for (Eigen::Index i = 0; i < p.size(); ++i) a.push_back(p(i));
  return a;
}

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

RunPlan parse_config(const std::string& text, std::optional<std::uint64_t> seed_override) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    bad("well-formed config", e.what());
  }
  if (!root.is_object()) bad("well-formed config", "top level must be an object");
  for (const auto& [key, _] : root.items())
    if (!kTopLevelKeys.count(key)) bad("known config key", "unknown key '" + key + "'");

  RunPlan plan;
  plan.seed = seed_override.value_or(root.value("seed", std::uint64_t{0}));

  std::vector<Algorithm> algorithms;
  try {
    if (root.contains("algorithms"))
      for (const auto& a : root["algorithms"]) algorithms.push_back(algorithm_from_string(a.get<std::string>()));
    else
      algorithms.push_back(algorithm_from_string(root.value("algorithm", std::string("main"))));
  } catch (const json::exception& e) {
    bad("well-formed config", e.what());
  } catch (const std::invalid_argument& e) {
    bad("known algorithm id", e.what());
  }
  if (algorithms.empty()) bad("non-empty algorithm list", "no algorithms given");

  std::vector<json> docs{root};
  if (root.contains("sweep")) {
    const json sweep = root["sweep"];
    if (!sweep.is_object()) bad("well-formed config", "sweep must be an object");
    for (const auto& [path, values] : sweep.items()) {
      if (!values.is_array() || values.empty())
        bad("well-formed config", "sweep '" + path + "' must be a non-empty list");
      std::string pointer = "/" + path;
      std::replace(pointer.begin(), pointer.end(), '.', '/');
      std::vector<json> expanded;
      for (const auto& doc : docs)
        for (const auto& v : values) {
          json d = doc;
          d[json::json_pointer(pointer)] = v;
          expanded.push_back(std::move(d));
        }
      docs = std::move(expanded);
    }
  }

  for (auto& d : docs) {
    d.erase("sweep");
    d.erase("algorithms");
    d.erase("algorithm");
  }
  for (const auto& doc : docs)
    for (const Algorithm a : algorithms) {
      try {
        plan.cells.push_back(build_cell(doc, a, plan.cells.size()));
      } catch (const ConfigError&) {
        throw;
      } catch (const json::exception& e) {
        bad("well-formed config", e.what());
      } catch (const std::exception& e) {
        bad("valid instance", e.what());
      }
      plan.cells.back().config["algorithm"] = to_string(a);
    }
  return plan;
}

RunPlan load_config(const std::filesystem::path& path, std::optional<std::uint64_t> seed_override) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), seed_override);
}

std::string trajectory_csv(const RunReport& report) {
  std::string out = kTrajectoryHeader;
  out += '\n';
  auto cell = [](const std::optional<double>& v) { return v ? g17(*v) : std::string("nan"); };
  for (const auto& row : report.trajectory) {
    out += fmt::format("{},{},{},{},{},{},{},{},{}\n", row.n, g17(row.iterate_norm),
                       cell(row.dist_to_solution), cell(row.residual_t1), cell(row.residual_t2),
                       cell(row.residual_t3), cell(row.fb_residual), row.fejer_ok ? 1 : 0,
                       g17(row.alpha));
  }
  return out;
}

json cell_summary(const Cell& cell, const CellResult& result) {
  const RunReport& r = result.report;
  json j;
  j["id"] = cell.id;
  j["algorithm"] = to_string(cell.algorithm);
  j["instance"] = cell.problem.name;
  j["config"] = cell.config;
  j["final_point"] = to_json(r.final_iterate);
  j["iterations"] = r.iterations;
  j["recorded_rows"] = r.trajectory.size();
  j["terminated_by"] = to_string(r.terminated_by);
  j["vi_residual"] = opt(r.vi_residual);
  j["final_dist_to_solution"] =
      r.trajectory.empty() ? json(nullptr) : opt(r.trajectory.back().dist_to_solution);
  j["audit"] = {{"fejer_checks", r.audit.fejer_checks},
                {"fejer_violations", r.audit.fejer_violations},
                {"descent_violations", r.audit.descent_violations},
                {"bounded_checks", r.audit.bounded_checks},
                {"bounded_violations", r.audit.bounded_violations},
                {"bounded_vacuous", r.audit.bounded_vacuous},
                {"bound_radius", r.audit.bound_radius},
                {"mu_bar", r.audit.mu_bar},
                {"violations", r.audit.violations()}};
  json ia = json::array();
  for (const auto& [label, rec] : result.instance_audit.records)
    ia.push_back({{"property", label},
                  {"checked", rec.checked},
                  {"violations", rec.violations},
                  {"vacuous", rec.vacuous},
                  {"worst_slack", std::isfinite(rec.worst_slack) ? json(rec.worst_slack) : json(nullptr)}});
  j["instance_audit"] = ia;
  json conds = json::array();
  for (const auto& c : cell.validation.conditions)
    conds.push_back({{"id", c.id}, {"passed", c.passed}, {"empirical", c.empirical}});
  j["validation"] = conds;
  j["note"] = r.note;
  j["success"] = result.success;
  return j;
}

ExecuteResult execute(const RunPlan& plan, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create '" + out_dir.string() + "': " + ec.message());

  ExecuteResult result;
  json summary;
  summary["seed"] = plan.seed;
  summary["cells"] = json::array();
  for (const Cell& cell : plan.cells) {
    CellResult cr;
    cr.id = cell.id;
    if (cell.audit_samples > 0) cr.instance_audit = audit_instance(cell.problem, cell.audit_samples, plan.seed);
    try {
      cr.report = run(cell.algorithm, cell.problem, cell.schedule, cell.start, cell.stop, cell.options);
    } catch (const ScheduleExhausted& e) {
      cr.report.algorithm = cell.algorithm;
      cr.report.final_iterate = cell.start;
      cr.report.note = e.what();
    }
    cr.success = cr.report.terminated_by == Termination::Tolerance && cr.report.audit.violations() == 0 &&
                 cr.instance_audit.passed();
    if (!cr.success) result.exit_code = kExitNotConverged;

    write_file(out_dir / (cell.id + ".csv"), trajectory_csv(cr.report));
    write_file(out_dir / (cell.id + ".json"), cell_summary(cell, cr).dump(2) + "\n");
    summary["cells"].push_back({{"id", cell.id},
                                {"algorithm", to_string(cell.algorithm)},
                                {"instance", cell.problem.name},
                                {"terminated_by", to_string(cr.report.terminated_by)},
                                {"iterations", cr.report.iterations},
                                {"final_point", to_json(cr.report.final_iterate)},
                                {"vi_residual", opt(cr.report.vi_residual)},
                                {"audit_violations", cr.report.audit.violations()},
                                {"success", cr.success}});
    result.cells.push_back(std::move(cr));
  }
  summary["exit_code"] = result.exit_code;
  write_file(out_dir / "summary.json", summary.dump(2) + "\n");
  return result;
}

}  // namespace vfb
