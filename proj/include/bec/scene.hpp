#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bec/conductance.hpp"
#include "bec/geometry.hpp"

namespace bec {

// ---------------------------------------------------------------------------
// Tail and membership text forms

/// Inverse of TailSpec::describe().
inline geometry::TailSpec parse_tail(const std::string& text, const std::string& field) {
  using geometry::TailSpec;
  std::istringstream is(text);
  std::string kind;
  is >> kind;
  auto nums = [&](std::size_t n) {
    std::vector<long> v(n);
    for (auto& x : v)
      if (!(is >> x)) throw ValidationError(field, "expected " + std::to_string(n) + " integers after " + kind);
    return v;
  };
  if (kind == "EMPTY") return TailSpec::empty();
  if (kind == "FULL") return TailSpec::full();
  if (kind == "HALF_PLANE") {
    const auto v = nums(3);
    return TailSpec::half_plane(static_cast<int>(v[0]), static_cast<int>(v[1]), v[2]);
  }
  if (kind == "QUADRANT") {
    const auto v = nums(3);
    return TailSpec::quadrant(static_cast<unsigned>(v[0]), static_cast<int>(v[1]), static_cast<int>(v[2]));
  }
  if (kind == "VSTRIP") {
    const auto v = nums(2);
    std::string side;
    is >> side;
    if (side != "interior" && side != "complement") throw ValidationError(field, "VSTRIP needs interior|complement");
    return TailSpec::vstrip(static_cast<int>(v[0]), static_cast<int>(v[1]), side == "interior");
  }
  if (kind == "WEDGE") {
    const auto v = nums(6);
    return TailSpec::wedge({static_cast<int>(v[0]), static_cast<int>(v[1]), v[2]},
                           {static_cast<int>(v[3]), static_cast<int>(v[4]), v[5]});
  }
  if (kind == "PIECES") {
    std::vector<geometry::Piece> pieces(1);
    std::string tok;
    std::vector<long> buf;
    auto flush = [&] {
      if (buf.size() % 3) throw ValidationError(field, "PIECES half-planes need 3 integers each");
      for (std::size_t i = 0; i < buf.size(); i += 3)
        pieces.back().push_back({static_cast<int>(buf[i]), static_cast<int>(buf[i + 1]), buf[i + 2]});
      buf.clear();
    };
    while (is >> tok) {
      if (tok == "|") {
        flush();
        pieces.emplace_back();
      } else {
        try {
          buf.push_back(std::stol(tok));
        } catch (const std::exception&) {
          throw ValidationError(field, "bad token '" + tok + "'");
        }
      }
    }
    flush();
    return TailSpec::from_pieces(std::move(pieces));
  }
  throw ValidationError(field, "unknown tail kind '" + kind + "'");
}

/// Run lengths over the window in the frozen site order, starting with a run of 0s.
inline std::string encode_membership(const geometry::DiscreteSet& set) {
  std::ostringstream os;
  std::uint8_t cur = 0;
  long run = 0;
  bool first = true;
  for (std::uint8_t b : set.bits()) {
    if (b == cur) {
      ++run;
      continue;
    }
    os << (first ? "" : " ") << run;
    first = false;
    cur = b;
    run = 1;
  }
  os << (first ? "" : " ") << run;
  return os.str();
}

inline geometry::DiscreteSet decode_membership(int L, const geometry::TailSpec& tail, const std::string& rle,
                                               const std::string& field) {
  const std::size_t n = static_cast<std::size_t>(2 * L + 1) * (2 * L + 1);
  std::vector<std::uint8_t> bits;
  bits.reserve(n);
  std::istringstream is(rle);
  long run = 0;
  std::uint8_t cur = 0;
  while (is >> run) {
    if (run < 0) throw ValidationError(field, "negative run length");
    bits.insert(bits.end(), static_cast<std::size_t>(run), cur);
    cur ^= 1;
  }
  if (bits.size() != n) throw ValidationError(field, "run lengths cover " + std::to_string(bits.size()) +
                                                         " sites, window has " + std::to_string(n));
  return geometry::DiscreteSet(L, tail, std::move(bits));
}

// ---------------------------------------------------------------------------
// Scene configuration

/// Flat key-value text, one [section] per concern:
///   [model] u_plus, u_minus, nu       [gap] lambda, lower, upper
///   [window] L, W, B                  [geometry] preset   or   [U]/[V] tail, grid
///   [spectral] rho = canonical|quintic
///   [run] seed, transversality_c
struct SceneConfig {
  std::string name = "scene";
  double u_plus = 1, u_minus = 3, nu = 0.3;
  GapSpec gap{0, -0.5, 0.5};
  int L = 15, W = 7, B = 8;
  std::optional<geometry::Preset> preset;
  std::string u_tail, u_grid, v_tail, v_grid;
  SmoothStep::Profile rho = SmoothStep::Profile::Canonical;
  std::uint64_t seed = 7;
  double transversality_c = 0.1;
  std::string source;  // normalized key=value text, hashed into the manifest

  void validate() const {
    if (L <= 0) throw ValidationError("window.L", "must be positive");
    if (!(W > 0 && W < L)) throw ValidationError("window.W", "need 0 < W < L (got W = " + std::to_string(W) + ", L = " + std::to_string(L) + ")");
    if (B != L - W) throw ValidationError("window.B", "must equal L - W");
    if (B < 4) throw ValidationError("window.B", "buffer must be at least 4");
    if (!(nu > 0)) throw ValidationError("model.nu", "must be positive");
    if (!(gap.lower < gap.lambda && gap.lambda < gap.upper))
      throw ValidationError("gap.lambda", "need lower < lambda < upper");
    if (!preset && (u_tail.empty() || v_tail.empty()))
      throw ValidationError("geometry.preset", "give a preset or both [U] and [V] tails");
    if (!(transversality_c > 0)) throw ValidationError("run.transversality_c", "must be positive");
  }

  std::pair<geometry::DiscreteSet, geometry::DiscreteSet> sets() const {
    if (preset) {
      auto s = geometry::preset_scene(*preset, L);
      return {s.u, s.v};
    }
    auto make = [&](const std::string& tail_text, const std::string& grid, const std::string& field) {
      const auto tail = parse_tail(tail_text, field + ".tail");
      return grid.empty() ? geometry::DiscreteSet(L, tail) : decode_membership(L, tail, grid, field + ".grid");
    };
    return {make(u_tail, u_grid, "U"), make(v_tail, v_grid, "V")};
  }

  std::optional<int> expected_intersection() const {
    if (!preset) return std::nullopt;
    return geometry::preset_scene(*preset, L).expected_intersection;
  }
};

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

inline SceneConfig parse_scene(std::istream& is, const std::string& name = "scene") {
  SceneConfig c;
  c.name = name;
  std::map<std::string, std::string> kv;
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ValidationError("line " + std::to_string(lineno), "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ValidationError("line " + std::to_string(lineno), "expected key = value");
    const std::string key = (section.empty() ? "" : section + ".") + trim(line.substr(0, eq));
    kv[key] = trim(line.substr(eq + 1));
  }

  auto take = [&](const std::string& key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  auto num = [&](const std::string& key, double& out) {
    if (auto v = take(key)) {
      try {
        std::size_t used = 0;
        out = std::stod(*v, &used);
        if (used != v->size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw ValidationError(key, "not a number: '" + *v + "'");
      }
    }
  };
  auto integer = [&](const std::string& key, auto& out) {
    double d = static_cast<double>(out);
    num(key, d);
    if (d != std::floor(d)) throw ValidationError(key, "must be an integer");
    out = static_cast<std::remove_reference_t<decltype(out)>>(d);
  };

  std::ostringstream norm;
  for (const auto& [k, v] : kv) norm << k << '=' << v << '\n';
  c.source = norm.str();

  num("model.u_plus", c.u_plus);
  num("model.u_minus", c.u_minus);
  num("model.nu", c.nu);
  num("gap.lambda", c.gap.lambda);
  num("gap.lower", c.gap.lower);
  num("gap.upper", c.gap.upper);
  integer("window.L", c.L);
  integer("window.W", c.W);
  c.B = c.L - c.W;
  integer("window.B", c.B);
  if (auto p = take("geometry.preset")) {
    try {
      c.preset = geometry::parse_preset(*p);
    } catch (const ValidationError& e) {
      throw ValidationError("geometry.preset", e.what());
    }
  }
  if (auto v = take("U.tail")) c.u_tail = *v;
  if (auto v = take("U.grid")) c.u_grid = *v;
  if (auto v = take("V.tail")) c.v_tail = *v;
  if (auto v = take("V.grid")) c.v_grid = *v;
  if (auto v = take("spectral.rho")) {
    if (*v == "canonical") c.rho = SmoothStep::Profile::Canonical;
    else if (*v == "quintic") c.rho = SmoothStep::Profile::Quintic;
    else throw ValidationError("spectral.rho", "expected canonical or quintic");
  }
  integer("run.seed", c.seed);
  num("run.transversality_c", c.transversality_c);
  if (!kv.empty()) throw ValidationError(kv.begin()->first, "unknown key");
  c.validate();
  return c;
}

inline SceneConfig load_scene(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ValidationError("config", "cannot open " + path.string());
  return parse_scene(is, path.stem().string());
}

/// 64-bit FNV-1a of a string, for config identity.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

// ---------------------------------------------------------------------------
// Pipeline

inline constexpr const char* kArtifactVersion = "1.0.0";

struct Assertion {
  std::string name;
  double value = 0;
  double threshold = 0;
  bool pass = false;
};

struct RunManifest {
  std::string scene;
  std::string config_hash;
  std::string version = kArtifactVersion;
  std::vector<std::pair<std::string, double>> timings;  // seconds per stage
  std::vector<std::filesystem::path> outputs;
  std::vector<Assertion> assertions;

  bool all_pass() const {
    for (const auto& a : assertions)
      if (!a.pass) return false;
    return true;
  }
};

namespace detail {

inline void write_conductance_row(std::ostream& os, const std::string& scene, const ConductanceReport& r, int L) {
  os << scene << ',' << r.quantity << ',' << csv_number(r.value) << ',' << csv_number(r.imag_residue) << ','
     << csv_number(r.tail) << ',' << csv_number(r.full_trace) << ',' << r.window.W << ',' << L - r.window.W << ','
     << r.window.centre->x1 << ',' << r.window.centre->x2 << '\n';
}

class StageTimer {
 public:
  explicit StageTimer(RunManifest& m) : m_(m) {}
  template <class F>
  auto run(const std::string& stage, F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      if constexpr (std::is_void_v<decltype(f())>) {
        f();
        record(stage, t0);
      } else {
        auto out = f();
        record(stage, t0);
        return out;
      }
    } catch (const ValidationError&) {
      throw;
    } catch (const std::exception& e) {
      throw Error("stage " + stage + ": " + e.what());
    }
  }

 private:
  void record(const std::string& stage, std::chrono::steady_clock::time_point t0) {
    m_.timings.push_back({stage, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()});
  }
  RunManifest& m_;
};

}  // namespace detail

/// Runs the full pipeline for one scene and writes its CSV reports into `out_dir`:
/// conductance.csv, intersection.csv, kernel_field.csv, decay.csv, assertions.csv,
/// manifest.csv (deterministic) and timings.csv (wall clock, not reproducible).
inline RunManifest run_scene(const SceneConfig& cfg, const std::filesystem::path& out_dir) {
  cfg.validate();
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  RunManifest m;
  m.scene = cfg.name;
  {
    std::ostringstream h;
    h << std::hex << std::setw(16) << std::setfill('0') << fnv1a(cfg.source);
    m.config_hash = h.str();
  }
  detail::StageTimer timer(m);
  auto check = [&](const std::string& name, double value, double threshold) {
    m.assertions.push_back({name, value, threshold, value < threshold});
  };

  // geometry
  auto [u, v] = timer.run("geometry.sets", [&] {
    auto s = cfg.sets();
    s.first.validate("U");
    s.second.validate("V");
    return s;
  });
  const auto direct = timer.run("geometry.intersection_direct", [&] {
    return geometry::intersection_number_direct(geometry::GoodSet(u), geometry::GoodSet(v));
  });
  const auto decomposed = timer.run("geometry.intersection_decomposed", [&] {
    return geometry::intersection_number_decomposed(geometry::GoodSet(u), geometry::GoodSet(v));
  });
  check("intersection_methods_differ", std::abs(direct.total - decomposed.total), 0.5);
  if (auto expected = cfg.expected_intersection())
    check("intersection_vs_preset", std::abs(direct.total - *expected), 0.5);
  const auto transversal =
      timer.run("geometry.transversality", [&] { return geometry::transversality_profile(u, v, cfg.transversality_c); });
  check("transversality_fail", transversal.pass ? 0 : 1, 0.5);
  {
    const fs::path p = out_dir / "intersection.csv";
    std::ofstream os(p);
    os << "scene,method,curve_id,value\n";
    for (const auto* r : {&direct, &decomposed}) {
      for (const auto& c : r->per_curve)
        os << cfg.name << ',' << geometry::to_string(r->method) << ',' << c.curve_id << ',' << c.value << '\n';
      os << cfg.name << ',' << geometry::to_string(r->method) << ",total," << r->total << '\n';
    }
    m.outputs.push_back(p);
  }

  // operators
  const BoxWindow window(cfg.L, 2);
  OperatorMatrix hp = timer.run("lattice.build_plus", [&] { return build_qwz(cfg.u_plus, window); });
  OperatorMatrix hm = timer.run("lattice.build_minus", [&] { return build_qwz(cfg.u_minus, window); });
  hp.nu = hm.nu = cfg.nu;
  const bool gapped = timer.run("lattice.gap_check", [&] { return spectral_gap_check({&hp, &hm}, cfg.gap); });
  if (!gapped) throw Error("stage lattice.gap_check: bulk spectrum enters the gap");
  const DecayReport esr_p = timer.run("lattice.esr_plus", [&] { return verify_esr(hp, cfg.nu); });
  const DecayReport esr_m = timer.run("lattice.esr_minus", [&] { return verify_esr(hm, cfg.nu); });
  check("esr_plus_ratio", esr_p.max_ratio, 1 + 1e-12);
  check("esr_minus_ratio", esr_m.max_ratio, 1 + 1e-12);
  const OperatorMatrix he = timer.run("lattice.glue", [&] { return build_edge_hamiltonian({hp, hm, u, {}}); });

  // spectra
  const EigenSystem ep = timer.run("spectral.diagonalize_plus", [&] { return diagonalize(hp); });
  const EigenSystem em = timer.run("spectral.diagonalize_minus", [&] { return diagonalize(hm); });
  const EigenSystem ee = timer.run("spectral.diagonalize_edge", [&] { return diagonalize(he); });
  const SpectralProjector pp = timer.run("spectral.projector_plus", [&] { return fermi_projector(ep, cfg.gap.lambda); });
  const SpectralProjector pm = timer.run("spectral.projector_minus", [&] { return fermi_projector(em, cfg.gap.lambda); });
  const SmoothStep rho(cfg.gap.lower, cfg.gap.upper, cfg.rho);

  // conductances
  const TraceWindow tw{cfg.W, {}};
  auto named_hall = [&](const SpectralProjector& p, const char* name) {
    ConductanceReport r = hall_conductance(p, tw);
    r.quantity = name;
    return r;
  };
  const auto hall_p = timer.run("conductance.hall_plus", [&] { return named_hall(pp, "hall_plus"); });
  const auto hall_m = timer.run("conductance.hall_minus", [&] { return named_hall(pm, "hall_minus"); });
  const TraceWindow located = resolve_window(tw, u, v);
  const KernelField kp = timer.run("conductance.kernel_plus", [&] { return kuv_diagonal(pp, u, v); });
  const KernelField km = timer.run("conductance.kernel_minus", [&] { return kuv_diagonal(pm, u, v); });
  const auto uv_p = windowed(kp, located, "bulk_uv_plus");
  const auto uv_m = windowed(km, located, "bulk_uv_minus");
  const KernelField ke = timer.run("conductance.edge_field", [&] {
    return edge_diagonal(apply_smooth_derivative(ee, rho), he, indicator(v, window));
  });
  const auto edge = windowed(ke, located, "edge");
  const auto res = bec_residual(direct.total, edge, hall_p, hall_m, uv_p, uv_m);

  for (const auto* r : {&hall_p, &hall_m, &uv_p, &uv_m, &edge}) {
    check(r->quantity + "_tail", r->tail, 0.1);
    check(r->quantity + "_imag_residue", r->imag_residue, 1e-9);
    check(r->quantity + "_full_trace", std::abs(r->full_trace), 1e-9);
  }
  check("residual_intersection", res.residual_intersection, 0.1);
  check("residual_equality", res.residual_equality, 0.1);
  // window stability W -> W + 2 where the larger window still leaves a buffer of 4
  std::vector<ConductanceReport> grown;
  if (cfg.W + 2 <= cfg.L - 4) {
    TraceWindow wider = located;
    wider.W += 2;
    for (const auto& [f, r] : {std::pair{&kp, &uv_p}, {&km, &uv_m}, {&ke, &edge}}) {
      const auto g = windowed(*f, wider, r->quantity + "_W+2");
      check(r->quantity + "_window_stability", std::abs(g.value - r->value), 3 * r->tail + 1e-12);
      grown.push_back(g);
    }
  }

  {
    const fs::path p = out_dir / "conductance.csv";
    std::ofstream os(p);
    os << "scene,quantity,value,imag_residue,tail,full_trace,W,B,centre_x1,centre_x2\n";
    for (const auto* r : {&hall_p, &hall_m, &uv_p, &uv_m, &edge}) detail::write_conductance_row(os, cfg.name, *r, cfg.L);
    for (const auto& g : grown) detail::write_conductance_row(os, cfg.name, g, cfg.L);
    // scalar rows leave the window columns empty
    os << cfg.name << ",intersection," << res.intersection << ",,,,,,,\n";
    os << cfg.name << ",residual_intersection," << csv_number(res.residual_intersection) << ",,,,,,,\n";
    os << cfg.name << ",residual_equality," << csv_number(res.residual_equality) << ",,,,,,,\n";
    m.outputs.push_back(p);
  }
  {
    const fs::path p = out_dir / "kernel_field.csv";
    std::ofstream os(p);
    os << "field,x1,x2,value\n";
    for (const auto* f : {&kp, &km, &ke})
      for (std::size_t i = 0; i < f->window.site_count(); ++i) {
        const Site x = f->window.site_at(i);
        os << (f == &kp ? "K_UV_plus" : f == &km ? "K_UV_minus" : "edge") << ',' << x.x1 << ',' << x.x2 << ','
           << csv_number(kConductanceUnit * f->values(i)) << '\n';
      }
    m.outputs.push_back(p);
  }
  {
    const auto decay = timer.run("spectral.projector_decay", [&] { return projector_decay_check(pp, u, v, 1); });
    const auto ct = timer.run("spectral.combes_thomas", [&] { return resolvent_decay_check(hp, cx(0, 0.5)); });
    check("combes_thomas_ratio", ct.max_ratio, 1 + 1e-12);
    const fs::path p = out_dir / "decay.csv";
    std::ofstream os(p);
    os << "bound,distance,max_entry,max_ratio\n";
    for (const auto* r : {&esr_p, &esr_m, &ct, &decay.p, &decay.pu, &decay.pv, &decay.k}) r->write_csv(os, false);
    os << "bound,fitted_constant_N1\n";
    for (const auto* r : {&decay.p, &decay.pu, &decay.pv, &decay.k})
      os << r->bound << ',' << csv_number(r->fitted_constant) << '\n';
    m.outputs.push_back(p);
  }
  {
    const fs::path p = out_dir / "transversality.csv";
    std::ofstream os(p);
    os << "r_min,r_max,min_psi,min_ratio,samples\n";
    for (const auto& row : transversal.profile)
      os << csv_number(row.r_min) << ',' << csv_number(row.r_max) << ',' << csv_number(row.min_psi) << ','
         << csv_number(row.min_ratio) << ',' << row.samples << '\n';
    os << "c,exponent_estimate,pass\n"
       << csv_number(transversal.c) << ',' << csv_number(transversal.exponent_estimate) << ','
       << (transversal.pass ? 1 : 0) << '\n';
    m.outputs.push_back(p);
  }
  {
    const fs::path p = out_dir / "assertions.csv";
    std::ofstream os(p);
    os << "assertion,value,threshold,pass\n";
    for (const auto& a : m.assertions)
      os << a.name << ',' << csv_number(a.value) << ',' << csv_number(a.threshold) << ',' << (a.pass ? 1 : 0) << '\n';
    m.outputs.push_back(p);
  }
  {
    const fs::path p = out_dir / "manifest.csv";
    m.outputs.push_back(p);
    m.outputs.push_back(out_dir / "timings.csv");
    std::ofstream os(p);
    os << "key,value\n";
    os << "scene," << m.scene << "\nconfig_hash," << m.config_hash << "\nversion," << m.version << '\n';
    for (const auto& o : m.outputs) os << "output," << o.filename().string() << '\n';
  }
  {
    std::ofstream os(out_dir / "timings.csv");
    os << "stage,seconds\n";
    for (const auto& [stage, s] : m.timings) os << stage << ',' << csv_number(s) << '\n';
  }
  return m;
}

}  // namespace bec
