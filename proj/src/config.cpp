#include "nsoc/config.hpp"

#include "nsoc/expression.hpp"

#include <set>

namespace nsoc {

const char* to_string(Task t) {
  switch (t) {
    case Task::SolveState: return "solve-state";
    case Task::Optimize: return "optimize";
    case Task::Verify: return "verify";
    case Task::BouligandLimit: return "bouligand-limit";
    case Task::WsetLimit: return "wset-limit";
    case Task::ConvergenceStudy: return "convergence-study";
  }
  return "?";
}

Task parse_task(const std::string& name) {
  for (Task t : {Task::SolveState, Task::Optimize, Task::Verify, Task::BouligandLimit,
                 Task::WsetLimit, Task::ConvergenceStudy}) {
    if (name == to_string(t)) return t;
  }
  throw std::invalid_argument("unknown task '" + name + "'");
}

namespace {

/// Maps key paths back to line numbers of the raw document.
class Locator {
 public:
  explicit Locator(const std::string& text) : text_(text) {}

  int line_of(const std::vector<std::string>& path) const {
    std::size_t pos = 0;
    for (const auto& key : path) {
      const std::size_t hit = text_.find('"' + key + '"', pos);
      if (hit == std::string::npos) break;
      pos = hit;
    }
    return line_at(pos);
  }
  int line_at(std::size_t offset) const {
    int line = 1;
    for (std::size_t i = 0; i < offset && i < text_.size(); ++i) line += text_[i] == '\n';
    return line;
  }

 private:
  const std::string& text_;
};

using Path = std::vector<std::string>;

std::string dotted(const Path& p) {
  std::string s;
  for (const auto& k : p) s += (s.empty() ? "" : ".") + k;
  return s;
}

class Reader {
 public:
  Reader(const Locator& loc, std::filesystem::path base) : loc_(loc), base_(std::move(base)) {}

  [[noreturn]] void fail(const Path& p, const std::string& msg) const {
    throw ConfigError(dotted(p) + ": " + msg, loc_.line_of(p));
  }

  void allow(const Json& obj, const Path& p, std::set<std::string> keys) const {
    if (!obj.is_object()) fail(p, "expected an object");
    for (const auto& [k, v] : obj.items()) {
      if (!keys.count(k)) {
        Path q = p;
        q.push_back(k);
        fail(q, "unknown key");
      }
    }
  }

  double number(const Json& j, const Path& p) const {
    if (!j.is_number()) fail(p, "expected a number");
    return j.get<double>();
  }
  int integer(const Json& j, const Path& p) const {
    if (!j.is_number_integer()) fail(p, "expected an integer");
    return j.get<int>();
  }
  bool boolean(const Json& j, const Path& p) const {
    if (!j.is_boolean()) fail(p, "expected true or false");
    return j.get<bool>();
  }
  std::string string(const Json& j, const Path& p) const {
    if (!j.is_string()) fail(p, "expected a string");
    return j.get<std::string>();
  }

  std::filesystem::path file(const Json& j, const Path& p) const {
    std::filesystem::path f = string(j, p);
    if (f.is_relative()) f = base_ / f;
    if (!std::filesystem::exists(f)) fail(p, "file not found: " + f.string());
    return f;
  }

  /// number | expression string | {"csv": path}
  Field field(const Json& j, const Path& p, const GridPtr& g) const {
    try {
      if (j.is_number()) return Field::constant(g, j.get<double>());
      if (j.is_string()) {
        const Expression e(j.get<std::string>());
        return Field::sample(g, e);
      }
      if (j.is_object()) {
        allow(j, p, {"csv"});
        if (!j.contains("csv")) fail(p, "expected {\"csv\": path}");
        return read_field_csv(file(j["csv"], concat(p, "csv")), g);
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      fail(p, e.what());
    }
    fail(p, "expected a number, an expression string or {\"csv\": path}");
  }

  BoundaryField boundary(const Json& j, const Path& p, const GridPtr& g) const {
    try {
      if (j.is_number()) return BoundaryField::constant(g, j.get<double>());
      if (j.is_string()) {
        const Expression e(j.get<std::string>());
        return BoundaryField::sample(g, e);
      }
      if (j.is_object()) {
        allow(j, p, {"csv"});
        if (!j.contains("csv")) fail(p, "expected {\"csv\": path}");
        return read_boundary_csv(file(j["csv"], concat(p, "csv")), g);
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      fail(p, e.what());
    }
    fail(p, "expected a number, an expression string or {\"csv\": path}");
  }

  static Path concat(Path p, const std::string& k) {
    p.push_back(k);
    return p;
  }

 private:
  const Locator& loc_;
  std::filesystem::path base_;
};

CubicBranch cubic(const Reader& r, const Json& j, const Path& p) {
  if (!j.is_array() || j.size() != 4) r.fail(p, "expected [c0, c1, c2, c3]");
  return CubicBranch{r.number(j[0], p), r.number(j[1], p), r.number(j[2], p), r.number(j[3], p)};
}

Pc1Function nonlinearity(const Reader& r, const Json& j, const Path& p) {
  r.allow(j, p, {"kind", "params"});
  const std::string kind = j.contains("kind") ? r.string(j["kind"], Reader::concat(p, "kind")) : "max0";
  const Json params = j.value("params", Json::object());
  const Path pp = Reader::concat(p, "params");
  auto num = [&](const char* key, double dflt) {
    return params.contains(key) ? r.number(params[key], Reader::concat(pp, key)) : dflt;
  };
  try {
    if (kind == "max0") {
      r.allow(params, pp, {});
      return Pc1Function::max0();
    }
    if (kind == "kink") {
      r.allow(params, pp, {"s1", "s2", "t_bar", "value"});
      return Pc1Function::kink(num("s1", 0.0), num("s2", 1.0), num("t_bar", 0.0), num("value", 0.0));
    }
    if (kind == "smooth") {
      r.allow(params, pp, {"t_bar"});
      return Pc1Function::smooth(num("t_bar", 0.0));
    }
    if (kind == "cubic") {
      r.allow(params, pp, {"t_bar", "left", "right"});
      if (!params.contains("left") || !params.contains("right")) {
        r.fail(pp, "cubic needs 'left' and 'right' coefficient lists");
      }
      return Pc1Function(num("t_bar", 0.0), cubic(r, params["left"], Reader::concat(pp, "left")),
                         cubic(r, params["right"], Reader::concat(pp, "right")));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    r.fail(p, e.what());
  }
  r.fail(Reader::concat(p, "kind"), "unknown kind '" + kind + "' (max0, kink, smooth, cubic)");
}

SolverConfig solver(const Reader& r, const Json& j, const Path& p) {
  r.allow(j, p, {"newton_tol", "newton_max_iter", "linear_tol", "linear_max_iter", "kink_branch",
                 "armijo_c", "armijo_backtrack", "armijo_max_backtracks"});
  SolverConfig c;
  auto at = [&](const char* k) { return Reader::concat(p, k); };
  if (j.contains("newton_tol")) c.newton_tol = r.number(j["newton_tol"], at("newton_tol"));
  if (j.contains("newton_max_iter")) c.newton_max_iter = r.integer(j["newton_max_iter"], at("newton_max_iter"));
  if (j.contains("linear_tol")) c.linear_tol = r.number(j["linear_tol"], at("linear_tol"));
  if (j.contains("linear_max_iter")) c.linear_max_iter = r.integer(j["linear_max_iter"], at("linear_max_iter"));
  if (j.contains("armijo_c")) c.line_search.c = r.number(j["armijo_c"], at("armijo_c"));
  if (j.contains("armijo_backtrack")) c.line_search.backtrack = r.number(j["armijo_backtrack"], at("armijo_backtrack"));
  if (j.contains("armijo_max_backtracks")) {
    c.line_search.max_backtracks = r.integer(j["armijo_max_backtracks"], at("armijo_max_backtracks"));
  }
  if (j.contains("kink_branch")) {
    const std::string b = r.string(j["kink_branch"], at("kink_branch"));
    if (b == "left") c.kink_branch = KinkBranch::Left;
    else if (b == "right") c.kink_branch = KinkBranch::Right;
    else r.fail(at("kink_branch"), "expected 'left' or 'right'");
  }
  try {
    c.validate();
  } catch (const std::exception& e) {
    r.fail(p, e.what());
  }
  return c;
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what(),
                      Locator(text).line_at(e.byte > 0 ? e.byte - 1 : 0));
  }
  const Locator loc(text);
  const Reader r(loc, base_dir);
  r.allow(doc, {}, {"task", "grid", "nonlinearity", "y_omega", "y_gamma", "alpha", "kappa_omega",
                    "kappa_gamma", "b", "u_b", "v_b", "controls", "solver", "optimize", "verify",
                    "limit", "convergence", "seed", "delta_level", "output"});

  RunConfig cfg;
  cfg.echo = doc;
  if (doc.contains("task")) {
    try {
      cfg.task = parse_task(r.string(doc["task"], {"task"}));
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      r.fail({"task"}, e.what());
    }
  }

  int nx = 17, ny = 17;
  Rect rect;
  if (doc.contains("grid")) {
    const Json& g = doc["grid"];
    r.allow(g, {"grid"}, {"nx", "ny", "rect"});
    if (g.contains("nx")) nx = r.integer(g["nx"], {"grid", "nx"});
    ny = nx;
    if (g.contains("ny")) ny = r.integer(g["ny"], {"grid", "ny"});
    if (g.contains("rect")) {
      const Json& rc = g["rect"];
      if (!rc.is_array() || rc.size() != 4) r.fail({"grid", "rect"}, "expected [x0, y0, lx, ly]");
      rect = Rect{r.number(rc[0], {"grid", "rect"}), r.number(rc[1], {"grid", "rect"}),
                  r.number(rc[2], {"grid", "rect"}), r.number(rc[3], {"grid", "rect"})};
    }
  }
  ProblemSpec& s = cfg.problem;
  try {
    s.grid = build_grid(nx, ny, rect);
  } catch (const std::exception& e) {
    r.fail({"grid"}, e.what());
  }
  const GridPtr& g = s.grid;

  if (doc.contains("nonlinearity")) s.pc1 = nonlinearity(r, doc["nonlinearity"], {"nonlinearity"});
  s.y_omega = doc.contains("y_omega") ? r.field(doc["y_omega"], {"y_omega"}, g) : Field::constant(g, 0.0);
  s.y_gamma = doc.contains("y_gamma") ? r.boundary(doc["y_gamma"], {"y_gamma"}, g)
                                      : BoundaryField::constant(g, 0.0);
  if (doc.contains("alpha")) s.alpha = r.number(doc["alpha"], {"alpha"});
  if (doc.contains("kappa_omega")) s.kappa_omega = r.number(doc["kappa_omega"], {"kappa_omega"});
  if (doc.contains("kappa_gamma")) s.kappa_gamma = r.number(doc["kappa_gamma"], {"kappa_gamma"});
  if (!(s.alpha >= 0.0)) r.fail({"alpha"}, "alpha must be >= 0");
  if (!(s.kappa_omega > 0.0)) r.fail({"kappa_omega"}, "kappa_omega must be > 0");
  if (!(s.kappa_gamma > 0.0)) r.fail({"kappa_gamma"}, "kappa_gamma must be > 0");
  s.b = doc.contains("b") ? r.boundary(doc["b"], {"b"}, g) : BoundaryField::constant(g, 1.0);
  if ((s.b.values.array() <= 0.0).any()) r.fail({"b"}, "the Robin coefficient b must be > 0");
  if (doc.contains("u_b") && !doc["u_b"].is_null()) s.u_b = r.field(doc["u_b"], {"u_b"}, g);
  if (doc.contains("v_b") && !doc["v_b"].is_null()) s.v_b = r.boundary(doc["v_b"], {"v_b"}, g);
  if (doc.contains("solver")) s.solver = solver(r, doc["solver"], {"solver"});
  if (doc.contains("delta_level") && !doc["delta_level"].is_null()) {
    s.delta_level = r.number(doc["delta_level"], {"delta_level"});
  }
  try {
    finalize(s);
  } catch (const std::exception& e) {
    r.fail({}, e.what());
  }

  cfg.controls = ControlPair::zero(g);
  if (doc.contains("controls")) {
    const Json& c = doc["controls"];
    r.allow(c, {"controls"}, {"u", "v"});
    if (c.contains("u")) cfg.controls.u = r.field(c["u"], {"controls", "u"}, g);
    if (c.contains("v")) cfg.controls.v = r.boundary(c["v"], {"controls", "v"}, g);
  }

  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) r.fail({"seed"}, "expected a nonnegative integer");
    cfg.seed = doc["seed"].get<std::uint64_t>();
  }

  if (doc.contains("optimize")) {
    const Json& o = doc["optimize"];
    const Path p{"optimize"};
    r.allow(o, p, {"max_iters", "tol", "armijo_c", "backtrack", "max_backtracks", "initial_step",
                   "bb_steps", "b_stat_probes", "start_from_controls"});
    auto at = [&](const char* k) { return Reader::concat(p, k); };
    OptimizeConfig& oc = cfg.optimize;
    if (o.contains("max_iters")) oc.max_iters = r.integer(o["max_iters"], at("max_iters"));
    if (o.contains("tol")) oc.tol = r.number(o["tol"], at("tol"));
    if (o.contains("armijo_c")) oc.armijo_c = r.number(o["armijo_c"], at("armijo_c"));
    if (o.contains("backtrack")) oc.backtrack = r.number(o["backtrack"], at("backtrack"));
    if (o.contains("max_backtracks")) oc.max_backtracks = r.integer(o["max_backtracks"], at("max_backtracks"));
    if (o.contains("initial_step")) oc.initial_step = r.number(o["initial_step"], at("initial_step"));
    if (o.contains("bb_steps")) oc.bb_steps = r.boolean(o["bb_steps"], at("bb_steps"));
    if (o.contains("b_stat_probes")) oc.b_stat_probes = r.integer(o["b_stat_probes"], at("b_stat_probes"));
    try {
      oc.validate();
    } catch (const std::exception& e) {
      r.fail(p, e.what());
    }
  }
  cfg.optimize.initial = cfg.controls;

  if (doc.contains("verify")) {
    r.allow(doc["verify"], {"verify"}, {"probes"});
    if (doc["verify"].contains("probes")) {
      cfg.verify_probes = r.integer(doc["verify"]["probes"], {"verify", "probes"});
      if (cfg.verify_probes < 1) r.fail({"verify", "probes"}, "must be >= 1");
    }
  }

  if (doc.contains("limit")) {
    const Json& l = doc["limit"];
    const Path p{"limit"};
    r.allow(l, p, {"epsilons", "sigma", "side", "probes"});
    if (l.contains("epsilons")) {
      if (!l["epsilons"].is_array()) r.fail(Reader::concat(p, "epsilons"), "expected a list");
      cfg.limit.limit.epsilons.clear();
      for (const auto& e : l["epsilons"]) {
        cfg.limit.limit.epsilons.push_back(r.number(e, Reader::concat(p, "epsilons")));
      }
    }
    if (l.contains("sigma")) cfg.limit.limit.sigma = r.number(l["sigma"], Reader::concat(p, "sigma"));
    if (l.contains("side")) {
      const std::string side = r.string(l["side"], Reader::concat(p, "side"));
      if (side == "minus") cfg.limit.plus = false;
      else if (side == "plus") cfg.limit.minus = false;
      else if (side != "both") r.fail(Reader::concat(p, "side"), "expected minus, plus or both");
    }
    if (l.contains("probes")) {
      cfg.limit.probes = r.integer(l["probes"], Reader::concat(p, "probes"));
      if (cfg.limit.probes < 1) r.fail(Reader::concat(p, "probes"), "must be >= 1");
    }
    try {
      cfg.limit.limit.validate();
    } catch (const std::exception& e) {
      r.fail(p, e.what());
    }
  }

  if (doc.contains("convergence")) {
    const Json& c = doc["convergence"];
    r.allow(c, {"convergence"}, {"sizes"});
    if (c.contains("sizes")) {
      const Path p{"convergence", "sizes"};
      if (!c["sizes"].is_array() || c["sizes"].size() < 2) r.fail(p, "expected at least two sizes");
      cfg.study_sizes.clear();
      for (const auto& n : c["sizes"]) {
        const int v = r.integer(n, p);
        if (v < 3) r.fail(p, "sizes must be >= 3");
        cfg.study_sizes.push_back(v);
      }
    }
  }

  if (doc.contains("output")) {
    const Json& o = doc["output"];
    r.allow(o, {"output"}, {"dir", "vtk"});
    if (o.contains("dir")) cfg.output_dir = r.string(o["dir"], {"output", "dir"});
    if (o.contains("vtk")) cfg.vtk = r.boolean(o["vtk"], {"output", "vtk"});
  }
  return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_text(path);
  } catch (const IoError& e) {
    throw ConfigError(e.what(), 0);
  }
  return parse_config_text(text, path.parent_path().empty() ? "." : path.parent_path());
}

}  // namespace nsoc
