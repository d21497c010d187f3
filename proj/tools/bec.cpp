// Command-line front end: scene runner, geometry fuzzer, operator dumps, curve
// tracing and CSV diffs. Every command writes CSV to stdout; the exit code is 1 when
// an assertion fails and 2 on errors.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "bec/scene.hpp"

namespace {

using namespace bec;

int cmd_run(const std::string& config, std::string out) {
  const SceneConfig cfg = load_scene(config);
  if (out.empty()) out = "out/" + cfg.name;
  const RunManifest m = run_scene(cfg, out);
  std::cout << "assertion,value,threshold,pass\n";
  for (const auto& a : m.assertions)
    std::cout << a.name << ',' << csv_number(a.value) << ',' << csv_number(a.threshold) << ',' << (a.pass ? 1 : 0)
              << '\n';
  return m.all_pass() ? 0 : 1;
}

int cmd_fuzz(int n, std::uint64_t seed, int L) {
  const auto s = geometry::fuzz_geometry(n, seed, L);
  std::cout << "scene,property,detail\n";
  for (const auto& f : s.failures) std::cout << f.scene << ',' << f.property << ",\"" << f.detail << "\"\n";
  std::cout << "scenes,checks,failures\n" << s.scenes << ',' << s.checks << ',' << s.failures.size() << '\n';
  return s.failures.empty() ? 0 : 1;
}

int cmd_lattice_build(const std::string& model, double u, int L, double nu, const std::string& format,
                      const std::string& out) {
  if (model != "qwz") throw ValidationError("model", "only qwz is available");
  OperatorMatrix h = build_qwz(u, BoxWindow(L, 2));
  h.nu = nu;
  const auto esr = verify_esr(h, nu);
  auto emit = [&](std::ostream& os) {
    if (format == "binary") write_matrix_binary(os, h);
    else write_matrix_text(os, h);
  };
  if (out.empty()) {
    if (format == "binary") throw ValidationError("out", "binary dumps need --out");
    emit(std::cout);
  } else {
    std::ofstream os(out, format == "binary" ? std::ios::binary : std::ios::out);
    if (!os) throw ValidationError("out", "cannot open " + out);
    emit(os);
    std::cout << "model,u,L,nu,dimension,hermiticity_residual,esr_max_ratio,esr_pass\n"
              << model << ',' << csv_number(u) << ',' << L << ',' << csv_number(nu) << ',' << h.window.dimension()
              << ',' << csv_number(h.hermiticity_residual()) << ',' << csv_number(esr.max_ratio) << ','
              << (esr.pass ? 1 : 0) << '\n';
  }
  return esr.pass ? 0 : 1;
}

int cmd_geom_trace(const std::string& config) {
  const SceneConfig cfg = load_scene(config);
  const auto [u, v] = cfg.sets();
  std::cout << "set,curve_id,kind,index,qx,qy\n";
  for (const auto& [label, set] : {std::pair{"U", &u}, {"V", &v}}) {
    const auto curves = geometry::oriented_boundary(geometry::GoodSet(*set));
    for (std::size_t c = 0; c < curves.size(); ++c)
      for (std::size_t i = 0; i < curves[c].points.size(); ++i)
        std::cout << label << ',' << c << ',' << (curves[c].kind == geometry::CurveKind::Loop ? "LOOP" : "PATH")
                  << ',' << i << ',' << curves[c].points[i].qx << ',' << curves[c].points[i].qy << '\n';
  }
  return 0;
}

int cmd_geom_chi(const std::string& config) {
  const SceneConfig cfg = load_scene(config);
  const auto [u, v] = cfg.sets();
  const geometry::GoodSet gu(u), gv(v);
  const auto direct = geometry::intersection_number_direct(gu, gv);
  const auto decomposed = geometry::intersection_number_decomposed(gu, gv);
  std::cout << "method,curve_id,value\n";
  for (const auto* r : {&direct, &decomposed}) {
    for (const auto& c : r->per_curve) std::cout << geometry::to_string(r->method) << ',' << c.curve_id << ',' << c.value << '\n';
    std::cout << geometry::to_string(r->method) << ",total," << r->total << '\n';
  }
  bool ok = direct.total == decomposed.total;
  if (auto e = cfg.expected_intersection()) ok = ok && *e == direct.total;
  return ok ? 0 : 1;
}

int cmd_geom_transverse(const std::string& config, double c) {
  const SceneConfig cfg = load_scene(config);
  const auto [u, v] = cfg.sets();
  const auto t = geometry::transversality_profile(u, v, c);
  std::cout << "r_min,r_max,min_psi,min_ratio,samples\n";
  for (const auto& row : t.profile)
    std::cout << csv_number(row.r_min) << ',' << csv_number(row.r_max) << ',' << csv_number(row.min_psi) << ','
              << csv_number(row.min_ratio) << ',' << row.samples << '\n';
  std::cout << "c,exponent_estimate,pass\n"
            << csv_number(c) << ',' << csv_number(t.exponent_estimate) << ',' << (t.pass ? 1 : 0) << '\n';
  return t.pass ? 0 : 1;
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ValidationError("file", "cannot open " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(is, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(std::move(cells));
  }
  return rows;
}

/// Cell-by-cell comparison; numeric cells within `tol`, other cells exactly.
int cmd_report_diff(const std::string& a, const std::string& b, double tol) {
  const auto ra = read_csv(a), rb = read_csv(b);
  std::cout << "row,column,a,b,abs_diff\n";
  int differences = 0;
  const std::size_t rows = std::max(ra.size(), rb.size());
  for (std::size_t r = 0; r < rows; ++r) {
    const auto& ca = r < ra.size() ? ra[r] : std::vector<std::string>{};
    const auto& cb = r < rb.size() ? rb[r] : std::vector<std::string>{};
    const std::size_t cols = std::max(ca.size(), cb.size());
    for (std::size_t c = 0; c < cols; ++c) {
      const std::string x = c < ca.size() ? ca[c] : "", y = c < cb.size() ? cb[c] : "";
      if (x == y) continue;
      double dx = 0, dy = 0;
      std::size_t ux = 0, uy = 0;
      bool numeric = false;
      try {
        dx = std::stod(x, &ux);
        dy = std::stod(y, &uy);
        numeric = ux == x.size() && uy == y.size();
      } catch (const std::exception&) {
      }
      const double diff = numeric ? std::abs(dx - dy) : std::numeric_limits<double>::infinity();
      if (numeric && diff <= tol) continue;
      ++differences;
      std::cout << r << ',' << c << ',' << x << ',' << y << ',' << csv_number(diff) << '\n';
    }
  }
  return differences == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Curved bulk-edge correspondence: conductances, intersection numbers, diagnostics"};
  app.require_subcommand(1);

  std::string config, out, model = "qwz", format = "text", file_a, file_b;
  int n = 0, L = 15, fuzz_L = 10;
  std::uint64_t seed = 7;
  double u = 1, nu = 0.3, c = 0.1, tol = 0;

  auto* run = app.add_subcommand("run", "run the full pipeline on a scene config");
  run->add_option("config", config, "scene config file")->required();
  run->add_option("--out", out, "output directory (default out/<scene>)");

  auto* fuzz = app.add_subcommand("fuzz", "geometry property suite on random scenes");
  fuzz->add_option("--n", n, "number of scenes")->required();
  fuzz->add_option("--seed", seed, "random seed");
  fuzz->add_option("--L", fuzz_L, "window half-width");

  auto* lattice = app.add_subcommand("lattice", "operator construction");
  lattice->require_subcommand(1);
  auto* build = lattice->add_subcommand("build", "build and dump a bulk Hamiltonian");
  build->add_option("--model", model, "model name (qwz)");
  build->add_option("--u", u, "mass parameter")->required();
  build->add_option("--L", L, "window half-width")->required();
  build->add_option("--nu", nu, "claimed decay rate");
  build->add_option("--format", format, "text|binary")->check(CLI::IsMember({"text", "binary"}));
  build->add_option("--out", out, "dump file (text goes to stdout if omitted)");

  auto* geom = app.add_subcommand("geom", "geometry of a scene");
  geom->require_subcommand(1);
  auto* trace = geom->add_subcommand("trace", "oriented boundary curves in quarter units");
  trace->add_option("config", config)->required();
  auto* chi = geom->add_subcommand("chi", "intersection number by both methods");
  chi->add_option("config", config)->required();
  auto* transverse = geom->add_subcommand("check-transverse", "windowed transversality diagnostic");
  transverse->add_option("config", config)->required();
  transverse->add_option("--c", c, "exponent")->required();

  auto* report = app.add_subcommand("report", "compare reports");
  report->require_subcommand(1);
  auto* diff = report->add_subcommand("diff", "cell-by-cell CSV diff");
  diff->add_option("a", file_a)->required();
  diff->add_option("b", file_b)->required();
  diff->add_option("--tol", tol, "absolute tolerance for numeric cells");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config, out);
    if (*fuzz) return cmd_fuzz(n, seed, fuzz_L);
    if (*build) return cmd_lattice_build(model, u, L, nu, format, out);
    if (*trace) return cmd_geom_trace(config);
    if (*chi) return cmd_geom_chi(config);
    if (*transverse) return cmd_geom_transverse(config, c);
    if (*diff) return cmd_report_diff(file_a, file_b, tol);
  } catch (const ValidationError& e) {
    std::cerr << "error,validation," << e.field() << ",\"" << e.what() << "\"\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error,runtime,,\"" << e.what() << "\"\n";
    return 2;
  }
  return 2;
}
