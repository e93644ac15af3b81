#include "nsoc/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace nsoc {

namespace {

constexpr int kDigits = std::numeric_limits<double>::max_digits10;

std::string header(const Grid& g) {
  std::ostringstream os;
  os << std::setprecision(kDigits) << "# " << g.nx() << ',' << g.ny() << ',' << g.hx() << ','
     << g.hy() << ',' << g.rect().x0 << ',' << g.rect().y0 << '\n';
  return os.str();
}

struct Header {
  int nx = 0, ny = 0;
  double hx = 0, hy = 0, x0 = 0, y0 = 0;
};

std::vector<double> split_numbers(const std::string& line, std::size_t lineno) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    std::size_t used = 0;
    try {
      out.push_back(std::stod(cell, &used));
    } catch (const std::exception&) {
      throw IoError("line " + std::to_string(lineno) + ": not a number: '" + cell + "'");
    }
    while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
    if (used != cell.size()) {
      throw IoError("line " + std::to_string(lineno) + ": trailing characters in '" + cell + "'");
    }
  }
  return out;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

Header parse_header(const std::vector<std::string>& lines) {
  if (lines.empty() || lines[0].rfind("# ", 0) != 0) {
    throw IoError("line 1: expected header '# nx,ny,hx,hy,x0,y0'");
  }
  const auto v = split_numbers(lines[0].substr(2), 1);
  if (v.size() != 6) throw IoError("line 1: header needs 6 values");
  Header h{static_cast<int>(v[0]), static_cast<int>(v[1]), v[2], v[3], v[4], v[5]};
  if (h.nx != v[0] || h.ny != v[1] || h.nx < 2 || h.ny < 2) {
    throw IoError("line 1: nx, ny must be integers >= 2");
  }
  return h;
}

void check_header(const Header& h, const Grid& g) {
  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12 * (1.0 + std::abs(b)); };
  if (h.nx != g.nx() || h.ny != g.ny() || !close(h.hx, g.hx()) || !close(h.hy, g.hy()) ||
      !close(h.x0, g.rect().x0) || !close(h.y0, g.rect().y0)) {
    throw IoError("CSV header does not match the problem grid");
  }
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(kDigits) << v;
  return os.str();
}

}  // namespace

std::string field_to_csv(const Field& f) {
  const Grid& g = *f.grid;
  std::ostringstream os;
  os << header(g) << std::setprecision(kDigits);
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      if (i) os << ',';
      os << f[j * g.nx() + i];
    }
    os << '\n';
  }
  return os.str();
}

GridPtr grid_from_csv(const std::string& text) {
  const Header h = parse_header(lines_of(text));
  return build_grid(h.nx, h.ny, Rect{h.x0, h.y0, h.hx * (h.nx - 1), h.hy * (h.ny - 1)});
}

Field field_from_csv(const std::string& text, const GridPtr& grid) {
  const auto lines = lines_of(text);
  check_header(parse_header(lines), *grid);
  if (static_cast<int>(lines.size()) != grid->ny() + 1) {
    throw IoError("expected " + std::to_string(grid->ny()) + " data rows, found " +
                  std::to_string(lines.size() - 1));
  }
  Vector v(grid->num_nodes());
  for (int j = 0; j < grid->ny(); ++j) {
    const auto row = split_numbers(lines[j + 1], j + 2);
    if (static_cast<int>(row.size()) != grid->nx()) {
      throw IoError("line " + std::to_string(j + 2) + ": expected " + std::to_string(grid->nx()) +
                    " values");
    }
    for (int i = 0; i < grid->nx(); ++i) v[j * grid->nx() + i] = row[i];
  }
  return Field(grid, std::move(v));
}

std::string boundary_to_csv(const BoundaryField& f) {
  std::ostringstream os;
  os << header(*f.grid) << std::setprecision(kDigits);
  for (int k = 0; k < f.size(); ++k) os << f.values[k] << '\n';
  return os.str();
}

BoundaryField boundary_from_csv(const std::string& text, const GridPtr& grid) {
  const auto lines = lines_of(text);
  check_header(parse_header(lines), *grid);
  if (static_cast<int>(lines.size()) != grid->num_boundary() + 1) {
    throw IoError("expected " + std::to_string(grid->num_boundary()) + " boundary values");
  }
  Vector v(grid->num_boundary());
  for (int k = 0; k < grid->num_boundary(); ++k) {
    const auto row = split_numbers(lines[k + 1], k + 2);
    if (row.size() != 1) throw IoError("line " + std::to_string(k + 2) + ": expected one value");
    v[k] = row[0];
  }
  return BoundaryField(grid, std::move(v));
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
}

void write_field_csv(const std::filesystem::path& path, const Field& f) {
  write_text(path, field_to_csv(f));
}

Field read_field_csv(const std::filesystem::path& path, const GridPtr& grid) {
  try {
    return field_from_csv(read_text(path), grid);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

void write_boundary_csv(const std::filesystem::path& path, const BoundaryField& f) {
  write_text(path, boundary_to_csv(f));
}

BoundaryField read_boundary_csv(const std::filesystem::path& path, const GridPtr& grid) {
  try {
    return boundary_from_csv(read_text(path), grid);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

std::string field_to_vtk(const Field& f, const std::string& name) {
  const Grid& g = *f.grid;
  std::ostringstream os;
  os << std::setprecision(kDigits);
  os << "# vtk DataFile Version 3.0\n" << name << "\nASCII\nDATASET STRUCTURED_POINTS\n";
  os << "DIMENSIONS " << g.nx() << ' ' << g.ny() << " 1\n";
  os << "ORIGIN " << g.rect().x0 << ' ' << g.rect().y0 << " 0\n";
  os << "SPACING " << g.hx() << ' ' << g.hy() << " 1\n";
  os << "POINT_DATA " << g.num_nodes() << "\nSCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
  for (int n = 0; n < g.num_nodes(); ++n) os << f[n] << '\n';
  return os.str();
}

std::string limit_table_csv(const std::vector<LimitRow>& rows) {
  std::ostringstream os;
  os << "eps,rho,probe_id,err_h1,err_max,degenerate_flag\n";
  for (const auto& r : rows) {
    os << fmt(r.eps) << ',' << fmt(r.rho) << ',' << r.probe_id << ',' << fmt(r.err_h1) << ','
       << fmt(r.err_max) << ',' << (r.degenerate ? 1 : 0) << '\n';
  }
  return os.str();
}

std::string trace_csv(const std::vector<TraceRow>& rows) {
  std::ostringstream os;
  os << "iter,objective,pg_norm,step,defect,armijo_decrease\n";
  for (const auto& r : rows) {
    os << r.iter << ',' << fmt(r.objective) << ',' << fmt(r.pg_norm) << ',' << fmt(r.step) << ','
       << fmt(r.defect) << ',' << fmt(r.armijo_decrease) << '\n';
  }
  return os.str();
}

Json to_json(const SolveReport& r) {
  return Json{{"iterations", r.iterations},       {"picard_steps", r.picard_steps},
              {"residual", r.residual},           {"converged", r.converged},
              {"linear_solves", r.linear_solves}, {"linear_iterations", r.linear_iterations}};
}

Json to_json(const BStationarity& b) {
  Json probes = Json::array();
  for (const auto& p : b.probes) probes.push_back({{"kind", p.kind}, {"value", p.value}});
  return Json{{"min_value", b.min_value},
              {"scale", b.scale},
              {"n_probes", b.probes.size()},
              {"pass", b.pass},
              {"probes", probes}};
}

Json to_json(const StrongRecord& s) {
  return Json{{"inactive_omega", s.inactive_omega},
              {"active_omega", s.active_omega},
              {"inactive_gamma", s.inactive_gamma},
              {"active_gamma", s.active_gamma},
              {"sign", s.sign},
              {"clarke", s.clarke},
              {"max_residual", s.max_residual()},
              {"cq", s.cq},
              {"conditional", s.conditional},
              {"pass", s.pass}};
}

Json to_json(const MultiplierRecord& m) {
  return Json{{"side", to_string(m.side)},
              {"residual_max", m.residual_max},
              {"residual_l2", m.residual_l2},
              {"mu_norm", m.mu_norm},
              {"mu_min", m.mu_min},
              {"support_in_band", m.support_in_band},
              {"band_nodes", m.band_nodes},
              {"pass", m.pass}};
}

Json to_json(const BoundCaseRecord& b) {
  return Json{{"omega", b.omega}, {"gamma", b.gamma}, {"pass", b.pass}};
}

Json to_json(const AppendixRecord& a) {
  return Json{{"strong_residual", a.strong_residual},
              {"band_laplacian", a.band_laplacian},
              {"band_discrepancy", a.band_discrepancy},
              {"band_nodes", a.band_nodes}};
}

Json to_json(const EquivalenceVerdict& e) {
  return Json{{"b_pass", e.b_pass},
              {"strong_pass", e.strong_pass},
              {"cq_holds", e.cq_holds},
              {"conditional", e.conditional},
              {"strong_implies_b", e.strong_implies_b},
              {"b_implies_strong", e.b_implies_strong},
              {"pass", e.pass}};
}

Json to_json(const StationarityReport& r) {
  Json j;
  j["objective"] = r.objective;
  j["b_stat"] = to_json(r.b_stat);
  j["cq"] = r.cq;
  j["cq_threshold"] = r.cq_threshold;
  j["strong"] = to_json(r.strong);
  j["multiplier_minus"] = r.multiplier_minus ? to_json(*r.multiplier_minus) : Json(nullptr);
  j["multiplier_plus"] = r.multiplier_plus ? to_json(*r.multiplier_plus) : Json(nullptr);
  j["ubvb"] = r.ubvb ? to_json(*r.ubvb) : Json(nullptr);
  j["appendix"] = to_json(r.appendix);
  j["verdicts"] = Json{{"b_stationary", r.b_stat.pass},
                       {"strong", r.strong.pass},
                       {"multiplier_minus", r.multiplier_minus ? Json(r.multiplier_minus->pass) : Json(nullptr)},
                       {"multiplier_plus", r.multiplier_plus ? Json(r.multiplier_plus->pass) : Json(nullptr)},
                       {"ubvb", r.ubvb ? Json(r.ubvb->pass) : Json(nullptr)},
                       {"equivalence", to_json(r.equivalence)},
                       {"all_pass", r.all_pass()}};
  return j;
}

Json to_json(const std::vector<LimitRow>& rows) {
  Json a = Json::array();
  for (const auto& r : rows) {
    a.push_back({{"eps", r.eps},
                 {"rho", r.rho},
                 {"probe_id", r.probe_id},
                 {"err_h1", r.err_h1},
                 {"err_max", r.err_max},
                 {"degenerate", r.degenerate}});
  }
  return a;
}

Json to_json(const std::vector<TraceRow>& rows) {
  Json a = Json::array();
  for (const auto& r : rows) {
    a.push_back({{"iter", r.iter},
                 {"objective", r.objective},
                 {"pg_norm", r.pg_norm},
                 {"step", r.step},
                 {"defect", r.defect},
                 {"armijo_decrease", r.armijo_decrease}});
  }
  return a;
}

Json field_summary(const Field& f, bool with_values) {
  Json j{{"min", f.values.minCoeff()}, {"max", f.values.maxCoeff()}, {"l2", norm_omega(f)}};
  if (with_values) j["values"] = std::vector<double>(f.values.data(), f.values.data() + f.size());
  return j;
}

}  // namespace nsoc
