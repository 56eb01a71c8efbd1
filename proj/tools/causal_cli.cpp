// Command-line front end. Exit codes: 0 success, 2 configuration error,
// 3 numerical budget failure, 1 anything else.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "causal/causal.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace causal;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitBudget = 3;

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

json grid_json(const GridSpec& g) { return {{"n", g.n}, {"length", g.length}, {"dx", g.dx()}}; }

/// Writes `doc` to `out` (with a manifest beside it) or to stdout with the
/// manifest embedded.
void emit_json(json doc, const std::string& out, config::RunManifest m, const Stopwatch& clock) {
  m.wall_time_s = clock.seconds();
  if (out.empty()) {
    doc["manifest"] = config::to_json(m);
    std::cout << doc.dump(2) << '\n';
    return;
  }
  m.artifacts = {out};
  io::detail::open_out(out) << doc.dump(2) << '\n';
  config::write_manifest(m, config::manifest_path(out));
}

void finish_manifest(config::RunManifest m, const std::vector<std::string>& artifacts, const Stopwatch& clock) {
  m.wall_time_s = clock.seconds();
  m.artifacts = artifacts;
  config::write_manifest(m, config::manifest_path(artifacts.front()));
}

std::optional<GridSpec> grid_from(std::size_t n, double length) {
  if (n == 0 && length == 0.0) return std::nullopt;
  if (n == 0 || length <= 0.0) throw ConfigError("--n and --length must be given together");
  GridSpec g{n, length};
  g.validate();
  return g;
}

// ----------------------------------------------------------------- evolve

struct EvolveArgs {
  std::string family = "gaussian:d=1";
  std::string dispersion = "relativistic:m=1";
  double t = 0.0;
  std::string out;
  std::size_t n = 0;
  double length = 0.0;
  std::size_t stride = 1;
};

int run_evolve(const EvolveArgs& a) {
  Stopwatch clock;
  const auto fam = config::parse_family(a.family);
  const auto disp = config::parse_dispersion(a.dispersion);
  if (a.t < 0.0) throw ConfigError("--t must be >= 0");
  const auto budget = default_budget(fam, disp);
  const auto grid = grid_from(a.n, a.length).value_or(choose_grid(fam, disp, a.t, budget));
  Evolver ev(fam, disp, grid, budget);
  const auto w = ev.evolve(a.t);
  io::write_packet(a.out, w, a.stride);

  json cfg{{"family", fam.name()}, {"dispersion", disp.name()}, {"t", a.t}, {"grid", grid_json(grid)},
           {"stride", a.stride}};
  auto m = config::make_manifest("evolve", cfg);
  m.grid = grid;
  m.diagnostics = {w.diagnostics.renormalization, w.diagnostics.edge_mass, w.diagnostics.spectral_edge_mass};
  finish_manifest(m, {a.out}, clock);
  return 0;
}

// --------------------------------------------------------------- quantify

struct ScanArgs {
  double a_min = 1e-3;
  double a_max = 1e2;
  int per_decade = 200;
  double rel_tol = 1e-3;
  std::string mode = "auto";

  quantify::ScanSpec spec() const {
    quantify::ScanSpec s{a_min, a_max, per_decade, rel_tol, config::parse_mode(mode)};
    (void)quantify::a_grid(s);
    return s;
  }
};

void add_scan_options(CLI::App* sub, ScanArgs& s) {
  sub->add_option("--a-min", s.a_min, "Smallest half-width of the scan");
  sub->add_option("--a-max", s.a_max, "Largest half-width of the scan");
  sub->add_option("--per-decade", s.per_decade, "Log-spaced scan points per decade");
  sub->add_option("--rel-tol", s.rel_tol, "Relative refinement tolerance in a");
  sub->add_option("--mode", s.mode, "Interval mode: auto, symmetric or asymmetric");
}

struct QuantifyArgs {
  std::string family = "gaussian:d=1";
  std::string dispersion = "relativistic:m=1";
  double t = 0.0;
  std::optional<double> a;
  std::optional<double> lo, hi;
  bool scan = false;
  bool n_tilde = false;
  bool hegerfeldt = false;
  ScanArgs scan_args;
  std::size_t n = 0;
  double length = 0.0;
  std::string out;
};

int run_quantify(const QuantifyArgs& q) {
  Stopwatch clock;
  const auto fam = config::parse_family(q.family);
  const auto disp = config::parse_dispersion(q.dispersion);
  if (q.t < 0.0) throw ConfigError("--t must be >= 0");
  const int modes = (q.a ? 1 : 0) + (q.lo || q.hi ? 1 : 0) + (q.scan ? 1 : 0);
  if (modes != 1) throw ConfigError("quantify: give exactly one of --a, --lo/--hi or --scan");
  if ((q.lo.has_value()) != (q.hi.has_value())) throw ConfigError("quantify: --lo and --hi go together");

  quantify::PipelineOptions popt;
  popt.grid = grid_from(q.n, q.length);
  quantify::PacketPipeline pipe(fam, disp, q.t, popt);
  const auto pt = pipe.at(q.t);

  json doc{{"family", fam.name()}, {"dispersion", disp.name()}, {"t", q.t}};
  json cfg = doc;
  if (q.scan) {
    const auto spec = q.scan_args.spec();
    const auto r = quantify::m_tilde(pipe.initial(), pt, spec, quantify::asymmetric_scan(fam, spec.mode));
    doc["m_tilde"] = r.value;
    doc["raw"] = r.raw;
    doc["a_M"] = r.a;
    doc["interval"] = {r.lo, r.hi};
    doc["asymmetric"] = r.asymmetric;
    cfg["scan"] = {{"a_min", spec.a_min}, {"a_max", spec.a_max}, {"per_decade", spec.per_decade},
                   {"rel_tol", spec.rel_tol}, {"mode", config::mode_name(spec.mode)}};
  } else {
    const auto k = q.a ? SpatialRegion::symmetric(*q.a) : SpatialRegion::interval(*q.lo, *q.hi);
    const auto& iv = k.intervals().front();
    const double raw = quantify::deficiency(pipe.initial(), pt, k);
    doc["interval"] = {iv.lo, iv.hi};
    doc["M"] = std::max(0.0, raw);
    doc["raw"] = raw;
    cfg["interval"] = doc["interval"];
  }
  if (q.n_tilde) {
    const auto r = quantify::n_tilde_packet(pipe.initial(), pt);
    doc["n_tilde"] = {{"value", r.n_tilde}, {"compact_deficiency", r.compact_deficiency}, {"half_window", r.half_window},
                      {"cells", r.cells}, {"targets", r.targets}, {"min_width", r.min_width}};
  }
  if (q.hegerfeldt) {
    const auto w = quantify::hegerfeldt_witness(pipe.initial(), pt);
    doc["hegerfeldt"] = w ? json{{"center", w->center}, {"radius", w->radius}, {"excess", w->excess}} : json(nullptr);
  }
  cfg["grid"] = grid_json(pipe.grid());
  auto m = config::make_manifest("quantify", cfg);
  m.grid = pipe.grid();
  m.diagnostics = pipe.diagnostics();
  emit_json(doc, q.out, m, clock);
  return 0;
}

// ------------------------------------------------------------------ sweep

struct SweepArgs {
  std::string config_path;
  std::string write_config;
  config::ExperimentConfig cfg;
  std::size_t n = 0;
  double length = 0.0;
  double t_max = std::nan("");
  ScanArgs scan;
};

void write_profile(const fs::path& csv, const quantify::ViolationProfile& p) {
  auto out = io::detail::open_out(csv);
  out << "t,a,M\n";
  for (std::size_t i = 0; i < p.t.size(); ++i)
    for (std::size_t k = 0; k < p.a.size(); ++k)
      out << io::fmt(p.t[i]) << ',' << io::fmt(p.a[k]) << ',' << io::fmt(p.sample(i, k)) << '\n';
}

void write_mtilde(const fs::path& csv, const quantify::ViolationProfile& p) {
  auto out = io::detail::open_out(csv);
  out << "t,m_tilde,a_M\n";
  for (std::size_t i = 0; i < p.t.size(); ++i)
    out << io::fmt(p.t[i]) << ',' << io::fmt(p.m_tilde[i]) << ',' << io::fmt(p.a_m[i]) << '\n';
}

void write_timescales(const fs::path& csv, const quantify::ViolationProfile& p) {
  auto out = io::detail::open_out(csv);
  out << "a,t0,t1,t2\n";
  auto cell = [](const std::optional<double>& v) { return v ? io::fmt(*v) : std::string(); };
  for (std::size_t k = 0; k < p.a.size(); ++k)
    out << io::fmt(p.a[k]) << ',' << cell(p.t0[k]) << ',' << cell(p.t1[k]) << ',' << cell(p.t2[k]) << '\n';
}

fs::path with_suffix(const fs::path& csv, const std::string& tag) {
  auto p = csv;
  p.replace_filename(csv.stem().string() + tag + csv.extension().string());
  return p;
}

int run_sweep(SweepArgs& s, const CLI::App& sub, std::size_t workers, bool workers_given) {
  Stopwatch clock;
  auto cfg = s.config_path.empty() ? config::ExperimentConfig{} : config::load_config(s.config_path);
  // Flags given on the command line override the configuration file.
  auto given = [&](const char* name) { return sub.count(name) > 0; };
  if (given("--family")) cfg.family = s.cfg.family;
  if (given("--dispersion")) cfg.dispersion = s.cfg.dispersion;
  if (given("--t-min")) cfg.t_min = s.cfg.t_min;
  if (given("--t-max")) cfg.t_max = s.t_max;
  if (given("--t-step")) cfg.t_step = s.cfg.t_step;
  if (given("--epsilon")) cfg.epsilon_m = s.cfg.epsilon_m;
  if (given("--tail-budget")) cfg.tail_budget = s.cfg.tail_budget;
  if (given("--out")) cfg.output = s.cfg.output;
  if (given("--n") || given("--length")) cfg.grid = grid_from(s.n, s.length);
  if (given("--a-min")) cfg.scan.a_min = s.scan.a_min;
  if (given("--a-max")) cfg.scan.a_max = s.scan.a_max;
  if (given("--per-decade")) cfg.scan.per_decade = s.scan.per_decade;
  if (given("--rel-tol")) cfg.scan.rel_tol = s.scan.rel_tol;
  if (given("--mode")) cfg.scan.mode = config::parse_mode(s.scan.mode);
  if (workers_given) cfg.workers = workers;
  if (cfg.output.empty()) throw ConfigError("sweep: --out (or \"output\" in the config) is required");
  cfg.validate();
  if (!s.write_config.empty()) io::detail::open_out(s.write_config) << config::to_json(cfg).dump(2) << '\n';

  const auto fam = cfg.state_family();
  const auto disp = cfg.dispersion_relation();
  const auto prof = quantify::sweep(fam, disp, cfg.sweep_spec());

  const fs::path csv = cfg.output;
  const auto mt_csv = with_suffix(csv, "_mtilde");
  const auto ts_csv = with_suffix(csv, "_timescales");
  write_profile(csv, prof);
  write_mtilde(mt_csv, prof);
  write_timescales(ts_csv, prof);

  // The output path and worker count do not change results; keep them out
  // of the hash so identical experiments share one.
  auto hashed = config::to_json(cfg);
  hashed.erase("output");
  hashed.erase("workers");
  auto m = config::make_manifest("sweep", hashed);
  m.grid = prof.grid;
  m.diagnostics = prof.diagnostics;
  m.wall_time_s = clock.seconds();
  m.artifacts = {csv.string(), mt_csv.string(), ts_csv.string()};
  auto j = config::to_json(m);
  j["result"] = {{"m_star", prof.m_star}, {"t1_star", prof.t1_star}, {"a_M", prof.a_star},
                 {"epsilon_m", prof.floor.epsilon_M}};
  io::detail::open_out(config::manifest_path(csv)) << j.dump(2) << '\n';
  std::cout << json{{"m_star", prof.m_star}, {"t1_star", prof.t1_star}, {"a_M", prof.a_star}}.dump() << '\n';
  return 0;
}

// -------------------------------------------------------- reproduce-table

struct TableArgs {
  std::string table;
  std::string out;
  double t_step = 0.01;
};

struct TableRow {
  std::string label;
  StateFamily family;
};

int run_table(const TableArgs& a, std::size_t workers) {
  Stopwatch clock;
  std::string key;
  std::vector<TableRow> rows;
  if (a.table == "gaussian") {
    key = "d";
    for (const char* d : {"1", "0.1", "0.01", "0.001", "0.0001", "0.00001"})
      rows.push_back({d, StateFamily::gaussian(std::stod(d))});
  } else if (a.table == "sech") {
    key = "alpha";
    rows = {{"3", StateFamily::sech(3.0)},
            {"2", StateFamily::sech(2.0)},
            {"5/3", StateFamily::sech(5.0 / 3.0)},
            {"3/2", StateFamily::sech(1.5)}};
  } else if (a.table == "sinexp") {
    key = "alpha";
    for (int i = 0; i <= 16; ++i) rows.push_back({io::fmt(0.25 * i), StateFamily::sinc_sech(0.25 * i)});
  } else {
    throw ConfigError("unknown table '" + a.table + "' (gaussian, sech or sinexp)");
  }
  if (!(a.t_step > 0.0)) throw ConfigError("--t-step must be positive");

  const auto disp = Dispersion::relativistic(1.0);
  std::ostringstream csv;
  csv << key << ",M_tilde,t1,a_M\n";
  quantify::GridDiagnostics worst;
  for (const auto& row : rows) {
    quantify::SweepSpec spec;
    spec.t_step = a.t_step;
    spec.workers = workers;
    const auto p = quantify::sweep(row.family, disp, spec);
    csv << row.label << ',' << io::fmt(p.m_star) << ',' << io::fmt(p.t1_star) << ',' << io::fmt(p.a_star) << '\n';
    worst.max_renormalization = std::max(worst.max_renormalization, p.diagnostics.max_renormalization);
    worst.max_edge_mass = std::max(worst.max_edge_mass, p.diagnostics.max_edge_mass);
  }
  if (a.out.empty()) {
    std::cout << csv.str();
    return 0;
  }
  io::detail::open_out(a.out) << csv.str();
  auto m = config::make_manifest("reproduce-table", json{{"table", a.table}, {"t_step", a.t_step},
                                                         {"dispersion", disp.name()}});
  m.diagnostics = worst;
  finish_manifest(m, {a.out}, clock);
  return 0;
}

// ------------------------------------------------------------ dirac-check

/// gaussian:m=1,center=0,width=1,boost=0,c1=1,c2=0,phase=0 | plane:m=1,k=3,sign=1
dirac::SpinorField parse_spinor(const std::string& text, const GridSpec& grid) {
  const auto colon = text.find(':');
  const std::string kind = io::detail::trim(text.substr(0, colon));
  std::map<std::string, double> p;
  if (colon != std::string::npos) {
    for (auto item : io::detail::split(std::string_view(text).substr(colon + 1))) {
      const auto eq = item.find('=');
      if (eq == std::string_view::npos) throw ConfigError("state parameter without '=': " + std::string(item));
      p[io::detail::trim(item.substr(0, eq))] = io::parse_double(item.substr(eq + 1));
    }
  }
  auto take = [&](const std::string& k, double fallback) {
    auto it = p.find(k);
    if (it == p.end()) return fallback;
    const double v = it->second;
    p.erase(it);
    return v;
  };
  dirac::SpinorField f;
  if (kind == "gaussian") {
    const double m = take("m", 1.0), center = take("center", 0.0), width = take("width", 1.0),
                 boost = take("boost", 0.0), c1 = take("c1", 1.0), c2 = take("c2", 0.0), phase = take("phase", 0.0);
    f = dirac::gaussian_spinor(grid, m, center, width, boost, c1, std::polar(c2, phase));
  } else if (kind == "plane") {
    const double m = take("m", 1.0), k = take("k", 1.0), sign = take("sign", 1.0);
    if (k != std::floor(k) || (sign != 1.0 && sign != -1.0)) throw ConfigError("plane: need integer k and sign=+-1");
    f = dirac::plane_wave(grid, m, static_cast<long>(k), static_cast<int>(sign));
  } else {
    throw ConfigError("unknown spinor state '" + kind + "' (gaussian or plane)");
  }
  if (!p.empty()) throw ConfigError("unknown parameter '" + p.begin()->first + "' for " + kind);
  return f;
}

struct DiracArgs {
  std::string state = "gaussian:m=1";
  std::string times = "0,1,2,3,4,5";
  std::size_t n = 4096;
  double length = 80.0;
  std::string flow_out;
  std::string out;
};

int run_dirac(const DiracArgs& a) {
  Stopwatch clock;
  GridSpec grid{a.n, a.length};
  grid.validate();
  const auto init = parse_spinor(a.state, grid);
  const auto times = config::parse_list(a.times);
  const auto rep = dirac::dirac_causality_check(init, times);

  json doc{{"state", a.state}, {"causal", rep.causal}, {"max_n_tilde", rep.max_n_tilde},
           {"max_current_ratio", rep.max_current_ratio}, {"max_norm_error", rep.max_norm_error}};
  json pairs = json::array();
  for (const auto& v : rep.pairs) pairs.push_back({{"s", v.s}, {"t", v.t}, {"n_tilde", v.n_tilde}});
  doc["pairs"] = pairs;

  if (!a.flow_out.empty()) {
    dirac::DiracEvolver ev(init);
    std::vector<double> x(grid.n), rho, j;
    for (std::size_t i = 0; i < grid.n; ++i) x[i] = grid.x(i);
    for (double t : times) {
      const auto c = dirac::current(ev.evolve(t));
      rho.insert(rho.end(), c.rho.begin(), c.rho.end());
      j.insert(j.end(), c.j.begin(), c.j.end());
    }
    io::write_flow(a.flow_out, continuity::SampledFlow(times, x, rho, j));
  }

  auto m = config::make_manifest("dirac-check", json{{"state", a.state}, {"times", times}, {"grid", grid_json(grid)}});
  m.grid = grid;
  if (!a.flow_out.empty()) m.artifacts.push_back(a.flow_out);
  emit_json(doc, a.out, m, clock);
  return 0;
}

// -------------------------------------------------------------- transport

struct TransportArgs {
  std::string mu, nu;
  double dt = 0.0;
  double slack = 0.0;
  std::string out;
};

int run_transport(const TransportArgs& a) {
  Stopwatch clock;
  if (a.dt < 0.0) throw ConfigError("--dt must be >= 0");
  const auto mu = io::read_measure(a.mu, 0.0);
  const auto nu = io::read_measure(a.nu, a.dt);
  transport::TransportOptions opt;
  opt.slack = a.slack;
  const auto r = transport::max_causal_mass(mu, nu, opt);
  json witness = json::array();
  for (auto i : r.witness) witness.push_back(mu.x(i));
  json doc{{"causal_mass", r.causal_mass},
           {"n_tilde", r.n_tilde},
           {"witness", witness},
           {"witness_deficiency", r.witness_deficiency},
           {"causal", r.n_tilde <= opt.tolerance},
           {"support_condition", transport::support_condition(mu, nu, opt)}};
  auto m = config::make_manifest("transport solve",
                                 json{{"mu", a.mu}, {"nu", a.nu}, {"dt", a.dt}, {"slack", a.slack}});
  emit_json(doc, a.out, m, clock);
  return 0;
}

// ------------------------------------------------------- continuity-check

int run_continuity(const std::string& flow_path, const std::string& out) {
  Stopwatch clock;
  const auto f = io::read_flow(flow_path);
  const auto cur = continuity::causal_current_check(f);
  const auto speed = continuity::velocity_bound_check(f);
  json doc{{"current_ok", cur.ok}, {"worst_ratio", cur.worst_ratio},
           {"zero_density_flux", cur.zero_density_flux}, {"speed_ok", speed.ok},
           {"max_speed", speed.max_speed}};
  doc["residual"] = f.nt() >= 2 && f.nx() >= 3 ? json(continuity::continuity_residual_check(f)) : json(nullptr);
  emit_json(doc, out, config::make_manifest("continuity-check", json{{"flow", flow_path}}), clock);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Causality of probability flow for 1+1 dimensional wave packets"};
  app.set_version_flag("--version", std::string(config::kVersion));
  app.require_subcommand(1);
  app.fallthrough();
  std::size_t workers = 0;
  auto* workers_opt = app.add_option("--workers", workers, "Worker threads (0 = all cores; capped by CAUSAL_MAX_WORKERS)");

  EvolveArgs ev;
  auto* evolve = app.add_subcommand("evolve", "Evolve a packet and write x,re,im,abs2");
  evolve->add_option("--family", ev.family, "State family spec")->capture_default_str();
  evolve->add_option("--dispersion", ev.dispersion, "Dispersion spec")->capture_default_str();
  evolve->add_option("--t", ev.t, "Time")->required();
  evolve->add_option("--out", ev.out, "Output CSV")->required();
  evolve->add_option("--n", ev.n, "Grid points (with --length)");
  evolve->add_option("--length", ev.length, "Domain length (with --n)");
  evolve->add_option("--stride", ev.stride, "Write every stride-th point");

  QuantifyArgs q;
  auto* quant = app.add_subcommand("quantify", "M over one interval, or M~ over a scan");
  quant->add_option("--family", q.family, "State family spec")->capture_default_str();
  quant->add_option("--dispersion", q.dispersion, "Dispersion spec")->capture_default_str();
  quant->add_option("--t", q.t, "Time")->required();
  quant->add_option("--a", q.a, "Half-width of K = [-a, a]");
  quant->add_option("--lo", q.lo, "Left end of K");
  quant->add_option("--hi", q.hi, "Right end of K");
  quant->add_flag("--scan", q.scan, "Maximize over intervals");
  quant->add_flag("--n-tilde", q.n_tilde, "Also compute the discrete N~");
  quant->add_flag("--hegerfeldt", q.hegerfeldt, "Also search a Hegerfeldt witness");
  quant->add_option("--n", q.n, "Grid points (with --length)");
  quant->add_option("--length", q.length, "Domain length (with --n)");
  quant->add_option("--out", q.out, "Output JSON (stdout if omitted)");
  add_scan_options(quant, q.scan_args);

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "Fill the (t, a) table of M and extract timescales");
  sweep->add_option("--config", sw.config_path, "Experiment configuration (JSON)");
  sweep->add_option("--write-config", sw.write_config, "Write the effective configuration here");
  sweep->add_option("--family", sw.cfg.family, "State family spec");
  sweep->add_option("--dispersion", sw.cfg.dispersion, "Dispersion spec");
  sweep->add_option("--t-min", sw.cfg.t_min, "First time");
  sweep->add_option("--t-max", sw.t_max, "Last time (default 3/m)");
  sweep->add_option("--t-step", sw.cfg.t_step, "Time step");
  sweep->add_option("--epsilon", sw.cfg.epsilon_m, "Noise floor epsilon_M");
  sweep->add_option("--tail-budget", sw.cfg.tail_budget, "Truncated tail mass budget");
  sweep->add_option("--n", sw.n, "Grid points (with --length)");
  sweep->add_option("--length", sw.length, "Domain length (with --n)");
  sweep->add_option("--out", sw.cfg.output, "Profile CSV (t,a,M)");
  add_scan_options(sweep, sw.scan);

  TableArgs tab;
  auto* table = app.add_subcommand("reproduce-table", "Recompute a violation table (m = 1)");
  table->add_option("table", tab.table, "gaussian, sech or sinexp")->required();
  table->add_option("--out", tab.out, "Output CSV (stdout if omitted)");
  table->add_option("--t-step", tab.t_step, "Time step of the sweeps");

  DiracArgs dc;
  auto* dcheck = app.add_subcommand("dirac-check", "Transport-level causality of a Dirac evolution");
  dcheck->add_option("--state", dc.state, "Spinor spec")->capture_default_str();
  dcheck->add_option("--times", dc.times, "Comma-separated increasing times")->capture_default_str();
  dcheck->add_option("--n", dc.n, "Grid points")->capture_default_str();
  dcheck->add_option("--length", dc.length, "Periodic domain length")->capture_default_str();
  dcheck->add_option("--flow-out", dc.flow_out, "Also write rho and j as t,x,rho,j");
  dcheck->add_option("--out", dc.out, "Output JSON (stdout if omitted)");

  TransportArgs tr;
  auto* transport_cmd = app.add_subcommand("transport", "Causal coupling between discrete measures");
  transport_cmd->require_subcommand(1);
  auto* solve = transport_cmd->add_subcommand("solve", "Maximal causal mass of mu at 0 and nu at dt");
  solve->add_option("--mu", tr.mu, "Source measure CSV (x,mass or x_left,weight)")->required();
  solve->add_option("--nu", tr.nu, "Target measure CSV")->required();
  solve->add_option("--dt", tr.dt, "Time gap")->required();
  solve->add_option("--slack", tr.slack, "Extra cone radius");
  solve->add_option("--out", tr.out, "Output JSON (stdout if omitted)");

  std::string flow, flow_json;
  auto* cont = app.add_subcommand("continuity-check", "Check a sampled density/flux field");
  cont->add_option("--flow", flow, "CSV with columns t,x,rho,j")->required();
  cont->add_option("--out", flow_json, "Output JSON (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*evolve) return run_evolve(ev);
    if (*quant) return run_quantify(q);
    if (*sweep) return run_sweep(sw, *sweep, workers, workers_opt->count() > 0);
    if (*table) return run_table(tab, workers);
    if (*dcheck) return run_dirac(dc);
    if (*solve) return run_transport(tr);
    if (*cont) return run_continuity(flow, flow_json);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const BudgetError& e) {
    std::cerr << "budget failure: " << e.what() << '\n';
    return kExitBudget;
  } catch (const std::exception& e) {
    std::cerr << "fatal: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
