#include "fracp/cli.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fracp/battery.hpp"
#include "fracp/inequalities.hpp"
#include "fracp/parallel.hpp"

namespace fracp::cli {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& key, const std::string& what) {
  throw Error(ErrorCode::InvalidParams, key + ": " + what);
}

void reject_unknown(const json& obj, const std::string& where, std::set<std::string> allowed) {
  if (!obj.is_object()) config_error(where.empty() ? "config" : where, "expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) config_error(where.empty() ? key : where + "." + key, "unknown key");
  }
}

double get_number(const json& obj, const std::string& key, const std::string& path, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) config_error(path, "expected a number");
  return obj[key].get<double>();
}

long get_integer(const json& obj, const std::string& key, const std::string& path, long fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer()) config_error(path, "expected an integer");
  return obj[key].get<long>();
}

std::vector<double> get_vector(const json& v, const std::string& path) {
  if (!v.is_array()) config_error(path, "expected an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) config_error(path, "expected an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

Primitive parse_primitive(const json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
    config_error(path + ".type", "missing primitive type");
  }
  const std::string type = j["type"];
  if (type == "interval") {
    reject_unknown(j, path, {"type", "lo", "hi"});
    return Interval{get_number(j, "lo", path + ".lo", 0.0), get_number(j, "hi", path + ".hi", 1.0)};
  }
  if (type == "ball") {
    reject_unknown(j, path, {"type", "center", "radius"});
    if (!j.contains("center")) config_error(path + ".center", "required");
    return Ball{get_vector(j["center"], path + ".center"), get_number(j, "radius", path + ".radius", 1.0)};
  }
  if (type == "box") {
    reject_unknown(j, path, {"type", "lo", "hi"});
    if (!j.contains("lo") || !j.contains("hi")) config_error(path, "box needs lo and hi");
    return Box{get_vector(j["lo"], path + ".lo"), get_vector(j["hi"], path + ".hi")};
  }
  config_error(path + ".type", "unknown primitive '" + type + "'");
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void emit_json(const RunConfig& cfg, const json& doc, std::ostream& log) {
  const std::string text = doc.dump(2) + "\n";
  if (cfg.output.empty()) {
    log << text;
  } else {
    write_atomically(cfg.output, text);
  }
}

KernelOperator kernel_for(const RunConfig& cfg) {
  const LatticeDomain dom = build_lattice(cfg.shape, cfg.h, cfg.params);
  return assemble_kernel(dom, cfg.params, cfg.trunc_factor);
}

json not_converged_json(const NotConverged& e) {
  const EigenResult& b = e.best();
  return json{{"converged", false},
              {"error", e.what()},
              {"lambda", b.lambda},
              {"residual", b.residual},
              {"iterations", b.iterations}};
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidParams, std::string("config: malformed JSON: ") + e.what());
  }
  reject_unknown(j, "", {"params", "shape", "h", "trunc_factor", "solver", "experiment", "output", "seed"});
  RunConfig cfg;

  if (j.contains("params")) {
    const json& p = j["params"];
    reject_unknown(p, "params", {"s", "p", "dim"});
    cfg.params.s = get_number(p, "s", "params.s", cfg.params.s);
    cfg.params.p = get_number(p, "p", "params.p", cfg.params.p);
    cfg.params.dim = static_cast<int>(get_integer(p, "dim", "params.dim", cfg.params.dim));
  }
  validate(cfg.params);

  if (j.contains("shape")) {
    if (!j["shape"].is_array()) config_error("shape", "expected a list of primitives");
    for (std::size_t i = 0; i < j["shape"].size(); ++i) {
      cfg.shape.primitives.push_back(parse_primitive(j["shape"][i], "shape[" + std::to_string(i) + "]"));
    }
  }
  cfg.h = get_number(j, "h", "h", cfg.h);
  if (!(cfg.h > 0.0)) config_error("h", "must be positive");
  cfg.trunc_factor = get_number(j, "trunc_factor", "trunc_factor", cfg.trunc_factor);
  if (!(cfg.trunc_factor >= 1.0)) config_error("trunc_factor", "must be at least 1");

  if (j.contains("solver")) {
    const json& s = j["solver"];
    reject_unknown(s, "solver",
                   {"max_iter", "grad_tol", "step0", "armijo_c", "path_nodes", "path_iters", "seed"});
    auto& o = cfg.solver;
    o.max_iter = static_cast<int>(get_integer(s, "max_iter", "solver.max_iter", o.max_iter));
    o.grad_tol = get_number(s, "grad_tol", "solver.grad_tol", o.grad_tol);
    o.step0 = get_number(s, "step0", "solver.step0", o.step0);
    o.armijo_c = get_number(s, "armijo_c", "solver.armijo_c", o.armijo_c);
    o.path_nodes = static_cast<int>(get_integer(s, "path_nodes", "solver.path_nodes", o.path_nodes));
    o.path_iters = static_cast<int>(get_integer(s, "path_iters", "solver.path_iters", o.path_iters));
    o.seed = static_cast<std::uint64_t>(get_integer(s, "seed", "solver.seed", static_cast<long>(o.seed)));
  }
  validate(cfg.solver);

  if (j.contains("experiment")) {
    const json& e = j["experiment"];
    reject_unknown(e, "experiment",
                   {"distances", "radius", "tol_fk", "hks_slack", "nodal_check", "samples"});
    auto& x = cfg.experiment;
    if (e.contains("distances")) x.distances = get_vector(e["distances"], "experiment.distances");
    x.radius = get_number(e, "radius", "experiment.radius", x.radius);
    x.tol_fk = get_number(e, "tol_fk", "experiment.tol_fk", x.tol_fk);
    x.hks_slack = get_number(e, "hks_slack", "experiment.hks_slack", x.hks_slack);
    if (e.contains("nodal_check")) {
      if (!e["nodal_check"].is_boolean()) config_error("experiment.nodal_check", "expected a boolean");
      x.nodal_check = e["nodal_check"];
    }
    const long samples = get_integer(e, "samples", "experiment.samples", static_cast<long>(x.samples));
    if (samples < 1) config_error("experiment.samples", "must be positive");
    x.samples = static_cast<std::uint64_t>(samples);
    if (!(x.radius > 0.0)) config_error("experiment.radius", "must be positive");
  }

  if (j.contains("output")) {
    if (!j["output"].is_string()) config_error("output", "expected a path string");
    cfg.output = j["output"];
  }
  if (j.contains("seed")) {
    const long seed = get_integer(j, "seed", "seed", 1);
    if (seed < 0) config_error("seed", "must be nonnegative");
    cfg.seed = static_cast<std::uint64_t>(seed);
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidParams, "config: cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void write_atomically(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + tmp.string());
    out << text;
    if (!out.flush()) throw Error(ErrorCode::InvalidArgument, "write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

int cmd_lambda1(const RunConfig& cfg, std::ostream& log) {
  const KernelOperator K = kernel_for(cfg);
  try {
    const EigenResult r = solve_lambda1(K, cfg.solver);
    emit_json(cfg,
              json{{"lambda1", r.lambda},
                   {"residual", r.residual},
                   {"iterations", r.iterations},
                   {"min_u", r.u.minCoeff()},
                   {"measure", K.domain().measure()}},
              log);
    return kOk;
  } catch (const NotConverged& e) {
    emit_json(cfg, not_converged_json(e), log);
    log << e.what() << "\n";
    return kNotConverged;
  }
}

int cmd_lambda2(const RunConfig& cfg, std::ostream& log) {
  const KernelOperator K = kernel_for(cfg);
  try {
    const EigenResult r1 = solve_lambda1(K, cfg.solver);
    const EigenResult r2 = solve_lambda2_path(K, r1.u, cfg.solver);
    json doc{{"lambda1", r1.lambda},
             {"lambda2", r2.lambda},
             {"gap", r2.lambda - r1.lambda},
             {"residual", r2.residual},
             {"sign_change", r2.u.maxCoeff() > 0.0 && r2.u.minCoeff() < 0.0},
             {"nodal_check", nullptr}};
    if (cfg.experiment.nodal_check) {
      const NodalReport n = nodal_lemma_check(K, r2, cfg.solver);
      doc["nodal_check"] = json{{"lambda", n.lambda},
                                {"lambda1_plus", n.lambda1_plus},
                                {"lambda1_minus", n.lambda1_minus},
                                {"margin", n.margin},
                                {"holds", n.holds}};
    }
    emit_json(cfg, doc, log);
    return kOk;
  } catch (const NotConverged& e) {
    emit_json(cfg, not_converged_json(e), log);
    log << e.what() << "\n";
    return kNotConverged;
  }
}

int cmd_hks_sweep(const RunConfig& cfg, std::ostream& log) {
  const auto& x = cfg.experiment;
  if (x.distances.empty()) config_error("experiment.distances", "must be a nonempty list");
  for (double d : x.distances) {
    if (!(d > 2.0 * x.radius)) {
      throw Error(ErrorCode::OverlappingBalls, "experiment.distances: every distance must exceed 2R");
    }
  }
  const auto rows = hks_sweep(x.radius, x.distances, cfg.params, cfg.h, cfg.solver, cfg.trunc_factor);
  std::string csv = "distance,lambda2_union,lambda1_ball,scaled_bound,gap\n";
  for (const auto& r : rows) {
    csv += fmt(r.distance) + "," + fmt(r.lambda2_union) + "," + fmt(r.lambda1_ball) + "," +
           fmt(r.scaled_bound) + "," + fmt(r.gap) + "\n";
  }
  if (cfg.output.empty()) {
    log << csv;
  } else {
    write_atomically(cfg.output, csv);
  }
  return kOk;
}

int cmd_faber_krahn(const RunConfig& cfg, std::ostream& log) {
  const LatticeDomain dom = build_lattice(cfg.shape, cfg.h, cfg.params);
  const FaberKrahnReport r =
      faber_krahn_check(dom, cfg.params, cfg.solver, cfg.trunc_factor, cfg.experiment.tol_fk);
  emit_json(cfg,
            json{{"lambda1", r.lambda1},
                 {"lambda1_ball", r.lambda1_ball},
                 {"measure", r.measure},
                 {"ball_measure", r.ball_measure},
                 {"ball_bound", r.ball_bound},
                 {"margin", r.margin},
                 {"holds", r.holds}},
            log);
  return kOk;
}

int cmd_propcheck(const RunConfig& cfg, std::ostream& log) {
  const auto summaries = run_property_battery(cfg.experiment.samples, cfg.seed);
  json doc = json::array();
  bool clean = true;
  for (const auto& s : summaries) {
    doc.push_back(json{{"check", s.check},
                       {"samples", s.samples},
                       {"violations", s.violations},
                       {"worst_slack", s.worst_slack}});
    if (s.violations > 0) {
      clean = false;
      log << "violation in " << s.check << " at (" << s.counterexample << ")\n";
    }
  }
  emit_json(cfg, doc, log);
  return clean ? kOk : kViolation;
}

int cmd_oracle_compare(const RunConfig& cfg, std::ostream& log) {
  if (cfg.params.p != 2.0) throw Error(ErrorCode::WrongExponent, "oracle-compare requires p = 2");
  const KernelOperator K = kernel_for(cfg);
  const std::vector<double> ev = matrix_oracle_p2(K);
  try {
    const EigenResult r1 = solve_lambda1(K, cfg.solver);
    const EigenResult r2 = solve_lambda2_path(K, r1.u, cfg.solver);
    json doc = json::array();
    const double variational[2] = {r1.lambda, r2.lambda};
    for (int k = 0; k < 2 && k < static_cast<int>(ev.size()); ++k) {
      doc.push_back(json{{"k", k + 1},
                         {"lambda_variational", variational[k]},
                         {"lambda_matrix", ev[static_cast<std::size_t>(k)]},
                         {"rel_err", std::abs(variational[k] - ev[static_cast<std::size_t>(k)]) /
                                         std::abs(ev[static_cast<std::size_t>(k)])}});
    }
    emit_json(cfg, doc, log);
    return kOk;
  } catch (const NotConverged& e) {
    emit_json(cfg, not_converged_json(e), log);
    log << e.what() << "\n";
    return kNotConverged;
  }
}

std::vector<std::string> subcommands() {
  return {"lambda1", "lambda2", "hks-sweep", "faber-krahn", "propcheck", "oracle-compare"};
}

int run(const std::string& subcommand, const RunConfig& cfg, std::ostream& log) {
  try {
    if (subcommand == "lambda1") return cmd_lambda1(cfg, log);
    if (subcommand == "lambda2") return cmd_lambda2(cfg, log);
    if (subcommand == "hks-sweep") return cmd_hks_sweep(cfg, log);
    if (subcommand == "faber-krahn") return cmd_faber_krahn(cfg, log);
    if (subcommand == "propcheck") return cmd_propcheck(cfg, log);
    if (subcommand == "oracle-compare") return cmd_oracle_compare(cfg, log);
    log << "unknown subcommand: " << subcommand << "\n";
    return kConfigError;
  } catch (const NotConverged& e) {
    log << e.what() << "\n";
    return kNotConverged;
  } catch (const Error& e) {
    log << e.what() << "\n";
    return kConfigError;
  } catch (const std::filesystem::filesystem_error& e) {
    log << e.what() << "\n";
    return kConfigError;
  }
}

int run_from_file(const std::string& subcommand, const std::filesystem::path& config,
                  const std::optional<std::string>& out, std::optional<std::uint64_t> seed,
                  std::optional<int> threads, std::ostream& log) {
  RunConfig cfg;
  try {
    cfg = load_config(config);
  } catch (const Error& e) {
    log << e.what() << "\n";
    return kConfigError;
  }
  if (out) cfg.output = *out;
  if (seed) {
    cfg.seed = *seed;
    cfg.solver.seed = *seed;
  }
  if (threads) set_num_threads(*threads);
  return run(subcommand, cfg, log);
}

}  // namespace fracp::cli
