#include "qesband/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "qesband/compare.hpp"
#include "qesband/errors.hpp"
#include "qesband/numeric_spectra.hpp"
#include "qesband/qes_core.hpp"
#include "qesband/transforms.hpp"

namespace qesband::cli {

namespace {

struct RunConfig {
  std::string a = "0";
  double b = 0.0;
  double m = 0.5;
  double beta = 1.0;
  int n_basis = 128;
  std::string format = "csv";
  std::string output;
  double tol = -1.0;  // < 0: QESBAND_TOL or built-in default
  int index = 0;
  int samples = 512;
  double half_width = kLineHalfWidth;
  int n_grid = kLineGrid;
  std::vector<std::string> a_list;
  std::vector<double> b_list;
  std::vector<double> m_list;
  std::string m_range;
  std::string b_range;
};

constexpr double kDefaultTolerance = 1e-6;

double resolve_tolerance(const RunConfig& cfg) {
  if (cfg.tol > 0.0) return cfg.tol;
  if (const char* env = std::getenv("QESBAND_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0.0)) throw DomainError("QESBAND_TOL must be a positive number");
    return v;
  }
  return kDefaultTolerance;
}

// Writes to the configured file or to `out`.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& out) : out_(&out) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw IoError("cannot open output file: " + path);
      out_ = &file_;
    }
  }
  std::ostream& stream() { return *out_; }
  void finish() {
    out_->flush();
    if (!*out_) throw IoError("write failed");
  }

 private:
  std::ofstream file_;
  std::ostream* out_;
};

std::string json_string(std::string_view s) {
  std::string r = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') r += '\\';
    r += c;
  }
  return r + "\"";
}

std::string join_reals(const std::vector<double>& v, std::string_view sep) {
  std::string r;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) r += sep;
    r += format_real(v[i]);
  }
  return r;
}

std::string params_json(const PotentialParams& p) {
  return "{\"a\":" + format_real(p.a()) + ",\"b\":" + format_real(p.b) + ",\"m\":" + format_real(p.m) + "}";
}

PotentialParams params_from(const RunConfig& cfg) {
  const auto p = PotentialParams::make(parse_twice_a(cfg.a), cfg.b, cfg.m);
  if (!(p.m < 1.0)) throw DomainError("band edges require m < 1");
  return p;
}

std::vector<double> energies_of(const std::vector<BandEdgeSolution>& s) {
  std::vector<double> e;
  for (const auto& x : s) e.push_back(x.E);
  return e;
}

// ---------------------------------------------------------------- edges

int cmd_edges(const RunConfig& cfg, std::ostream& out) {
  const auto p = params_from(cfg);
  const auto levels = solve_band_edges(p);
  Sink sink(cfg.output, out);
  auto& os = sink.stream();
  if (cfg.format == "json") {
    os << "{\"params\":" << params_json(p) << ",\"edges\":[";
    for (std::size_t i = 0; i < levels.size(); ++i) {
      const auto& s = levels[i];
      if (i) os << ',';
      os << "{\"E\":" << format_real(s.E) << ",\"sector\":" << json_string(to_string(s.sector.tag))
         << ",\"nodes\":" << s.nodes_4K << ",\"periodicity\":" << json_string(to_string(s.periodicity))
         << ",\"coeffs\":[" << join_reals(s.coeffs, ",") << "]}";
    }
    os << "]}\n";
  } else {
    os << "index,E,sector,nodes,periodicity,coeffs\n";
    for (std::size_t i = 0; i < levels.size(); ++i) {
      const auto& s = levels[i];
      os << i << ',' << format_real(s.E) << ',' << to_string(s.sector.tag) << ',' << s.nodes_4K << ','
         << to_string(s.periodicity) << ',' << join_reals(s.coeffs, ";") << '\n';
    }
  }
  sink.finish();
  return kOk;
}

// ---------------------------------------------------------------- check

struct CheckRow {
  std::string name;
  bool informational = false;
  bool pass = true;
  double measured = 0.0;
  double tolerance = 0.0;
};

CheckRow bound(std::string name, double measured, double tolerance) {
  return {std::move(name), false, measured < tolerance, measured, tolerance};
}

int cmd_check(const RunConfig& cfg, std::ostream& out) {
  const auto p = params_from(cfg);
  const double tol = resolve_tolerance(cfg);
  std::vector<CheckRow> rows;

  double closure = 0.0;
  for (const auto& s : enumerate_sectors(p)) closure = std::max(closure, build_sector_matrix(p, s).closure_residual);
  const auto levels = solve_band_edges(p);
  const auto energies = energies_of(levels);
  double imag = 0.0;
  for (const auto& s : levels) imag = std::max(imag, s.imag_part);

  rows.push_back({"count", false, static_cast<int>(levels.size()) == p.level_count(),
                  static_cast<double>(levels.size()), static_cast<double>(p.level_count())});
  rows.push_back(bound("closure", closure, kClosureTolerance));
  rows.push_back(bound("reality", imag, kRealityTolerance));

  if (p.twice_a <= 4) {
    std::vector<double> closed;
    for (const auto& l : closed_form_energies(p.twice_a, p.b, p.m)) closed.push_back(l.E);
    rows.push_back(bound("closed_form", multiset_deviation(energies, closed), 1e-9));
  }

  const Boundary own = p.integer_a() ? Boundary::Periodic : Boundary::Antiperiodic;
  const Boundary other = p.integer_a() ? Boundary::Antiperiodic : Boundary::Periodic;
  const auto v = [&p](double x) { return v_elliptic(x, p); };
  const int count = p.level_count() + 6;
  const auto own_spec = floquet_edges({p.period, own, cfg.n_basis, v}, count);
  const auto other_spec = floquet_edges({p.period, other, cfg.n_basis, v}, count);
  rows.push_back(bound("floquet_membership", membership_distance(energies, own_spec.eigenvalues), tol));
  // How the algebraic levels sit among the other boundary class is reported only.
  rows.push_back({"floquet_other_bc_lowest", true, true, other_spec.eigenvalues.front(), 0.0});

  if (p.integer_a()) rows.push_back(bound("sl2", sl2_verify(p), 1e-12));

  double residual = 0.0;
  double periodic = 0.0;
  for (const auto& s : levels) {
    const auto layers = layers_for(s, p);
    const auto psi = [&layers](double x) { return assemble_psi(layers, x); };
    residual = std::max(residual, schrodinger_residual(psi, v, s.E, p.period));
    periodic = std::max(periodic, periodicity_defect(psi, p.period, s.periodicity == Periodicity::P4K ? 1.0 : -1.0));
  }
  rows.push_back(bound("residual", residual, tol));
  rows.push_back(bound("periodicity", periodic, 1e-8));

  const auto mirrored = energies_of(solve_band_edges(PotentialParams::make(p.twice_a, -p.b, p.m)));
  rows.push_back(bound("b_symmetry", multiset_deviation(energies, mirrored), 1e-9));

  if (p.m == 0.5) {
    CheckRow r = bound("m_half_symmetry", symmetry_defect(energies), 1e-9);
    r.informational = p.twice_a > 4;
    if (r.informational) r.pass = true;
    rows.push_back(r);
  }

  bool all = true;
  for (const auto& r : rows) all = all && r.pass;

  Sink sink(cfg.output, out);
  auto& os = sink.stream();
  auto status = [](const CheckRow& r) { return r.informational ? "info" : (r.pass ? "pass" : "fail"); };
  if (cfg.format == "json") {
    os << "{\"params\":" << params_json(p) << ",\"checks\":[";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i) os << ',';
      os << "{\"name\":" << json_string(rows[i].name) << ",\"status\":" << json_string(status(rows[i]))
         << ",\"measured\":" << format_real(rows[i].measured) << ",\"tolerance\":" << format_real(rows[i].tolerance)
         << '}';
    }
    os << "],\"pass\":" << (all ? "true" : "false") << "}\n";
  } else {
    os << "criterion,status,measured,tolerance\n";
    for (const auto& r : rows)
      os << r.name << ',' << status(r) << ',' << format_real(r.measured) << ',' << format_real(r.tolerance) << '\n';
  }
  sink.finish();
  return all ? kOk : kConsistency;
}

// ---------------------------------------------------------------- sweep

// "MIN:MAX:STEP", inclusive of MAX; values snapped to 1e-12.
std::vector<double> expand_range(const std::string& text, const char* name) {
  std::vector<double> r;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) {
    char* end = nullptr;
    r.push_back(std::strtod(item.c_str(), &end));
    if (item.empty() || *end != '\0' || !std::isfinite(r.back())) r.back() = std::nan("");
  }
  if (r.size() != 3 || std::isnan(r[0] + r[1] + r[2]) || !(r[2] > 0.0) || r[1] < r[0] || (r[1] - r[0]) / r[2] > 1e6)
    throw DomainError(std::string(name) + " range must be MIN:MAX:STEP with STEP > 0 and MAX >= MIN");
  std::vector<double> out;
  for (int i = 0;; ++i) {
    const double v = std::round((r[0] + i * r[2]) * 1e12) / 1e12;
    if (v > r[1] + 1e-12) break;
    out.push_back(v);
  }
  return out;
}

template <class T>
std::vector<T> sorted_unique(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  std::vector<int> as;
  for (const auto& t : cfg.a_list.empty() ? std::vector<std::string>{cfg.a} : cfg.a_list) as.push_back(parse_twice_a(t));
  std::vector<double> bs = cfg.b_list;
  if (!cfg.b_range.empty()) {
    const auto r = expand_range(cfg.b_range, "b");
    bs.insert(bs.end(), r.begin(), r.end());
  }
  std::vector<double> ms = cfg.m_list;
  if (!cfg.m_range.empty()) {
    const auto r = expand_range(cfg.m_range, "m");
    ms.insert(ms.end(), r.begin(), r.end());
  }
  if (bs.empty()) bs.push_back(cfg.b);
  if (ms.empty()) ms.push_back(cfg.m);
  as = sorted_unique(as);
  bs = sorted_unique(bs);
  ms = sorted_unique(ms);
  for (double m : ms)
    if (!(m > 0.0 && m < 1.0)) throw DomainError("sweep grid requires m in (0, 1)");

  // Solve before opening the output so a domain error leaves no partial file.
  std::ostringstream body;
  body << "a,b,m,level_index,E,sector,nodes,periodicity\n";
  for (int ta : as)
    for (double b : bs)
      for (double m : ms) {
        const auto p = PotentialParams::make(ta, b, m);
        const auto levels = solve_band_edges(p);
        for (std::size_t i = 0; i < levels.size(); ++i) {
          const auto& s = levels[i];
          body << format_real(p.a()) << ',' << format_real(b) << ',' << format_real(m) << ',' << i << ','
               << format_real(s.E) << ',' << to_string(s.sector.tag) << ',' << s.nodes_4K << ','
               << to_string(s.periodicity) << '\n';
        }
      }
  Sink sink(cfg.output, out);
  sink.stream() << body.str();
  sink.finish();
  return kOk;
}

// ---------------------------------------------------------- boundstates

int cmd_boundstates(const RunConfig& cfg, std::ostream& out) {
  const int ta = parse_twice_a(cfg.a);
  const auto numeric = bound_states_line(ta, cfg.beta, cfg.half_width, cfg.n_grid);
  // Limit levels merge in pairs; keep distinct values below threshold.
  std::vector<double> limit;
  for (double e : limit_edges(ta, cfg.beta, Limit::HyperbolicM1)) {
    if (e >= -1e-6) continue;
    if (limit.empty() || std::abs(e - limit.back()) > 1e-6) limit.push_back(e);
  }
  constexpr double kLineTolerance = 1e-4;
  bool ok = limit.size() == numeric.eigenvalues.size();
  const std::size_t rows = std::max(limit.size(), numeric.eigenvalues.size());

  Sink sink(cfg.output, out);
  auto& os = sink.stream();
  const bool json = cfg.format == "json";
  if (json)
    os << "{\"params\":{\"a\":" << format_real(0.5 * ta) << ",\"beta\":" << format_real(cfg.beta)
       << "},\"grid_step\":" << format_real(numeric.grid_step) << ",\"states\":[";
  else
    os << "index,numeric,limit,abs_diff\n";
  for (std::size_t i = 0; i < rows; ++i) {
    const bool has_n = i < numeric.eigenvalues.size();
    const bool has_l = i < limit.size();
    const std::string n = has_n ? format_real(numeric.eigenvalues[i]) : (json ? "null" : "");
    const std::string l = has_l ? format_real(limit[i]) : (json ? "null" : "");
    std::string d = json ? "null" : "";
    if (has_n && has_l) {
      const double diff = std::abs(numeric.eigenvalues[i] - limit[i]);
      ok = ok && diff < kLineTolerance;
      d = format_real(diff);
    }
    if (json)
      os << (i ? "," : "") << "{\"numeric\":" << n << ",\"limit\":" << l << ",\"abs_diff\":" << d << '}';
    else
      os << i << ',' << n << ',' << l << ',' << d << '\n';
  }
  if (json) os << "],\"pass\":" << (ok ? "true" : "false") << "}\n";
  sink.finish();
  return ok ? kOk : kConsistency;
}

// --------------------------------------------------------- wavefunction

int cmd_wavefunction(const RunConfig& cfg, std::ostream& out) {
  const auto p = params_from(cfg);
  if (cfg.samples < 2) throw DomainError("samples must be at least 2");
  const auto levels = solve_band_edges(p);
  if (cfg.index < 0 || cfg.index >= static_cast<int>(levels.size()))
    throw DomainError("index out of range: there are " + std::to_string(levels.size()) + " levels");
  const auto layers = layers_for(levels[static_cast<std::size_t>(cfg.index)], p);
  Sink sink(cfg.output, out);
  auto& os = sink.stream();
  os << "x,psi,u,gauge,dn_power\n";
  for (int i = 0; i < cfg.samples; ++i) {
    const double x = p.period * i / cfg.samples;
    os << format_real(x) << ',' << format_real(assemble_psi(layers, x)) << ',' << format_real(layers.u(x)) << ','
       << format_real(layers.gauge(x)) << ',' << format_real(layers.dn_power(x)) << '\n';
  }
  sink.finish();
  return kOk;
}

void add_params(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--a", cfg.a, "a: non-negative integer or half-integer")->default_str("0");
  sub->add_option("--b", cfg.b, "coupling b");
  sub->add_option("--m", cfg.m, "elliptic parameter m in [0, 1)");
}

void add_output(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--output,-o", cfg.output, "output file (default stdout)");
}

}  // namespace

int parse_twice_a(const std::string& text) {
  double value = 0.0;
  const auto slash = text.find('/');
  try {
    std::size_t used = 0;
    if (slash == std::string::npos) {
      value = std::stod(text, &used);
      if (used != text.size()) throw DomainError("");
    } else {
      const std::string num = text.substr(0, slash);
      const std::string den = text.substr(slash + 1);
      std::size_t u1 = 0, u2 = 0;
      const double n = std::stod(num, &u1);
      const double d = std::stod(den, &u2);
      if (u1 != num.size() || u2 != den.size() || d == 0.0) throw DomainError("");
      value = n / d;
    }
  } catch (const std::exception&) {
    throw DomainError("a must be a number, got '" + text + "'");
  }
  const double twice = 2.0 * value;
  const double rounded = std::round(twice);
  if (!std::isfinite(twice) || rounded < 0.0 || std::abs(twice - rounded) > 1e-12 || rounded > 1e6)
    throw DomainError("a must be a non-negative integer or half-integer, got '" + text + "'");
  return static_cast<int>(rounded);
}

std::string format_real(double v) {
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Algebraic band edges of the quasi-exactly solvable elliptic potential", "qesband"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* edges = app.add_subcommand("edges", "2a+1 algebraic band edges");
  add_params(edges, cfg);
  add_output(edges, cfg);

  auto* check = app.add_subcommand("check", "cross-validate the band edges against independent solvers");
  add_params(check, cfg);
  add_output(check, cfg);
  check->add_option("--n-basis", cfg.n_basis, "plane waves for the Floquet reference");
  check->add_option("--tol", cfg.tol, "Floquet/residual tolerance (overrides QESBAND_TOL)");

  auto* sweep = app.add_subcommand("sweep", "band edges over a parameter grid, CSV");
  sweep->add_option("--a", cfg.a_list, "a values")->delimiter(',');
  sweep->add_option("--b", cfg.b_list, "b values")->delimiter(',');
  sweep->add_option("--m", cfg.m_list, "m values")->delimiter(',');
  sweep->add_option("--b-range", cfg.b_range, "MIN:MAX:STEP");
  sweep->add_option("--m-range", cfg.m_range, "MIN:MAX:STEP");
  sweep->add_option("--output,-o", cfg.output, "output file (default stdout)");

  auto* bounds = app.add_subcommand("boundstates", "bound states of the hyperbolic potential vs the m -> 1 limit");
  bounds->add_option("--a", cfg.a, "a");
  bounds->add_option("--beta", cfg.beta, "beta");
  bounds->add_option("--half-width", cfg.half_width, "half width of the box");
  bounds->add_option("--n-grid", cfg.n_grid, "grid points (odd)");
  add_output(bounds, cfg);

  auto* wave = app.add_subcommand("wavefunction", "sample psi(x) over one period, CSV");
  add_params(wave, cfg);
  wave->add_option("--index", cfg.index, "level index in ascending energy order");
  wave->add_option("--samples", cfg.samples, "number of samples over [0, 4K)");
  wave->add_option("--output,-o", cfg.output, "output file (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "qesband: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (edges->parsed()) return cmd_edges(cfg, out);
    if (check->parsed()) return cmd_check(cfg, out);
    if (sweep->parsed()) return cmd_sweep(cfg, out);
    if (bounds->parsed()) return cmd_boundstates(cfg, out);
    if (wave->parsed()) return cmd_wavefunction(cfg, out);
  } catch (const DomainError& e) {
    err << "qesband: domain error: " << e.what() << '\n';
    return kDomain;
  } catch (const ConsistencyError& e) {
    err << "qesband: consistency failure: " << e.what() << '\n';
    return kConsistency;
  } catch (const IoError& e) {
    err << "qesband: I/O error: " << e.what() << '\n';
    return kIo;
  }
  return kUsage;
}

}  // namespace qesband::cli
