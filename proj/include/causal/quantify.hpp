#pragma once

// Violation quantifiers for evolved packets.
//
//   M(t, K)  = max(0, mu_0(K) - mu_t(J+(K)))
//   M~(t)    = sup_a M(t, [-a, a])
//   N~(t)    = 1 - max causal mass between mu_0 and mu_t
//
// Deficiencies are evaluated as differences of complement masses,
// out_t(J+(K)) - out_0(K), so values far below 1 keep their digits.

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "causal/error.hpp"
#include "causal/mass_profile.hpp"
#include "causal/packets.hpp"
#include "causal/parallel.hpp"
#include "causal/spacetime.hpp"
#include "causal/transport.hpp"

namespace causal::quantify {

struct NoiseFloor {
  double epsilon_M = 1e-11;
};

/// Unclamped mu_0(K) - mu_t(J+(K)) between two cumulative profiles.
inline double deficiency(const MassProfile& p0, const MassProfile& pt, const SpatialRegion& k) {
  const double dt = pt.t() - p0.t();
  causal::detail::require(dt >= 0.0, "deficiency: profiles out of time order");
  if (k.empty()) return 0.0;
  return pt.outside(future_region(k, dt)) - p0.outside(k);
}

// --------------------------------------------------------------- pipeline

struct PipelineOptions {
  std::optional<GridSpec> grid;
  std::optional<Budget> budget;
  std::size_t n_min = kDefaultGridPoints;
  std::size_t n_max = kMaxGridPoints;
};

struct GridDiagnostics {
  double max_renormalization = 0.0;
  double max_edge_mass = 0.0;
  double spectral_edge_mass = 0.0;
};

/// One evolver plus the initial profile, valid for times up to t_max.
/// Not thread-safe; build one per worker.
class PacketPipeline {
 public:
  PacketPipeline(const StateFamily& family, const Dispersion& disp, double t_max,
                 const PipelineOptions& opt = {})
      : family_(family),
        disp_(disp),
        budget_(opt.budget.value_or(default_budget(family, disp))),
        evolver_(family, disp,
                 opt.grid.value_or(choose_grid(family, disp, t_max, budget_, opt.n_min, opt.n_max)),
                 budget_),
        initial_(evolver_.profile(0.0)) {
    note(evolver_.last_diagnostics());
  }

  const StateFamily& family() const noexcept { return family_; }
  const Dispersion& dispersion() const noexcept { return disp_; }
  const GridSpec& grid() const noexcept { return evolver_.grid(); }
  const Budget& budget() const noexcept { return budget_; }
  const MassProfile& initial() const noexcept { return initial_; }
  const GridDiagnostics& diagnostics() const noexcept { return diag_; }

  MassProfile at(double t) {
    causal::detail::require(t >= 0.0, "PacketPipeline: negative time");
    auto p = evolver_.profile(t);
    note(evolver_.last_diagnostics());
    return p;
  }

  WavePacket packet(double t) {
    auto w = evolver_.evolve(t);
    note(w.diagnostics);
    return w;
  }

  double deficiency(double t, const SpatialRegion& k) { return quantify::deficiency(initial_, at(t), k); }

 private:
  void note(const EvolutionDiagnostics& d) {
    diag_.max_renormalization = std::max(diag_.max_renormalization, d.renormalization);
    diag_.max_edge_mass = std::max(diag_.max_edge_mass, d.edge_mass);
    diag_.spectral_edge_mass = d.spectral_edge_mass;
  }

  StateFamily family_;
  Dispersion disp_;
  Budget budget_;
  Evolver evolver_;
  MassProfile initial_;
  GridDiagnostics diag_;
};

/// M(t, K) for a single region.
inline double m_of_region(const StateFamily& family, const Dispersion& disp, double t,
                          const SpatialRegion& k, const PipelineOptions& opt = {}) {
  PacketPipeline pipe(family, disp, t, opt);
  return std::max(0.0, pipe.deficiency(t, k));
}

// ---------------------------------------------------------------- M tilde

enum class IntervalMode { Automatic, Symmetric, Asymmetric };

struct ScanSpec {
  double a_min = 1e-3;
  double a_max = 1e2;
  int per_decade = 200;
  double rel_tol = 1e-3;
  IntervalMode mode = IntervalMode::Automatic;
};

inline std::vector<double> a_grid(const ScanSpec& s) {
  causal::detail::require(s.a_min > 0.0 && s.a_max > s.a_min && s.per_decade > 0,
                          "ScanSpec: need 0 < a_min < a_max and per_decade > 0");
  const double decades = std::log10(s.a_max / s.a_min);
  const auto n = static_cast<std::size_t>(std::ceil(decades * s.per_decade - 1e-9)) + 1;
  std::vector<double> a(n);
  for (std::size_t i = 0; i < n; ++i)
    a[i] = i + 1 == n ? s.a_max : s.a_min * std::pow(10.0, static_cast<double>(i) / s.per_decade);
  return a;
}

struct MTilde {
  double value = 0.0;  // clamped at 0
  double raw = 0.0;    // best unclamped deficiency
  double a = std::numeric_limits<double>::quiet_NaN();  // half-width of the symmetric maximizer
  double lo = std::numeric_limits<double>::quiet_NaN();
  double hi = std::numeric_limits<double>::quiet_NaN();
  bool asymmetric = false;
};

namespace detail {

/// Maximizes f over a sorted grid, then refines with Brent's method inside
/// the neighbouring grid cells to relative tolerance `rel_tol`.
template <class F>
std::pair<double, double> grid_then_refine(const std::vector<double>& grid, F&& f, double rel_tol) {
  std::size_t best = 0;
  double best_v = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = f(grid[i]);
    if (v > best_v) {
      best_v = v;
      best = i;
    }
  }
  const double lo = grid[best == 0 ? 0 : best - 1];
  const double hi = grid[std::min(best + 1, grid.size() - 1)];
  if (hi > lo) {
    const int bits = std::max(4, static_cast<int>(std::ceil(-std::log2(rel_tol))) + 1);
    const auto r = boost::math::tools::brent_find_minima([&](double x) { return -f(x); }, lo, hi, bits);
    if (-r.second > best_v) return {r.first, -r.second};
  }
  return {grid[best], best_v};
}

}  // namespace detail

inline bool asymmetric_scan(const StateFamily& family, IntervalMode mode) {
  return mode == IntervalMode::Asymmetric || (mode == IntervalMode::Automatic && family.boost != 0.0);
}

/// M~ between two profiles over K = [-a, a], or over K = [lo, hi] with
/// lo < 0 < hi when `asymmetric` (the deficiency separates into a left and a
/// right part, maximized independently).
inline MTilde m_tilde(const MassProfile& p0, const MassProfile& pt, const ScanSpec& spec,
                      bool asymmetric) {
  const double t = pt.t() - p0.t();
  causal::detail::require(t >= 0.0, "m_tilde: profiles out of time order");
  const auto grid = a_grid(spec);
  MTilde r;
  r.asymmetric = asymmetric;
  if (!asymmetric) {
    auto f = [&](double a) {
      return (pt.left(-a - t) - p0.left(-a)) + (pt.right(a + t) - p0.right(a));
    };
    const auto [a, v] = detail::grid_then_refine(grid, f, spec.rel_tol);
    r.a = a;
    r.lo = -a;
    r.hi = a;
    r.raw = v;
  } else {
    auto left = [&](double a) { return pt.left(-a - t) - p0.left(-a); };
    auto right = [&](double a) { return pt.right(a + t) - p0.right(a); };
    const auto [al, vl] = detail::grid_then_refine(grid, left, spec.rel_tol);
    const auto [ar, vr] = detail::grid_then_refine(grid, right, spec.rel_tol);
    r.lo = -al;
    r.hi = ar;
    r.a = 0.5 * (al + ar);
    r.raw = vl + vr;
  }
  r.value = std::max(0.0, r.raw);
  return r;
}

inline MTilde m_tilde(PacketPipeline& pipe, double t, const ScanSpec& spec = {}) {
  return m_tilde(pipe.initial(), pipe.at(t), spec, asymmetric_scan(pipe.family(), spec.mode));
}

inline MTilde m_tilde(const StateFamily& family, const Dispersion& disp, double t,
                      const ScanSpec& spec = {}, const PipelineOptions& opt = {}) {
  PacketPipeline pipe(family, disp, t, opt);
  return m_tilde(pipe, t, spec);
}

// ------------------------------------------------------------------ sweep

struct SweepSpec {
  double t_min = 0.0;
  /// Defaults to 3 / m (3 for the massless dispersion) when NaN.
  double t_max = std::numeric_limits<double>::quiet_NaN();
  double t_step = 0.01;
  ScanSpec scan;
  NoiseFloor floor;
  bool refine_peak = true;
  std::size_t workers = 0;
  PipelineOptions pipeline;
};

struct ViolationProfile {
  std::string family;
  std::string dispersion;
  std::vector<double> t;
  std::vector<double> a;
  std::vector<double> samples;  // M(t_i, K_{a_k}) at i * a.size() + k
  std::vector<double> m_tilde;  // refined over a, per t
  std::vector<double> a_m;      // maximizer per t
  std::vector<std::optional<double>> t0, t1, t2;  // per a
  double m_star = 0.0;
  double t1_star = std::numeric_limits<double>::quiet_NaN();
  double a_star = std::numeric_limits<double>::quiet_NaN();
  NoiseFloor floor;
  GridSpec grid;
  GridDiagnostics diagnostics;

  double sample(std::size_t i, std::size_t k) const { return samples[i * a.size() + k]; }
};

inline double default_horizon(const Dispersion& disp) {
  return disp.kind == Dispersion::Kind::Massless ? 3.0 : 3.0 / disp.m;
}

inline std::vector<double> time_grid(double t_min, double t_max, double step) {
  causal::detail::require(step > 0.0 && t_max >= t_min && t_min >= 0.0,
                          "time grid: need 0 <= t_min <= t_max and step > 0");
  const auto n = static_cast<std::size_t>(std::floor((t_max - t_min) / step + 1e-9)) + 1;
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = t_min + static_cast<double>(i) * step;
  return t;
}

/// Fills the (t, a) table of M over symmetric intervals, extracts the per-a
/// timescales and the global maximum, refined in t around the best sample.
inline ViolationProfile sweep(const StateFamily& family, const Dispersion& disp, const SweepSpec& spec = {}) {
  const double t_max = std::isnan(spec.t_max) ? default_horizon(disp) : spec.t_max;
  ViolationProfile prof;
  prof.family = family.name();
  prof.dispersion = disp.name();
  prof.floor = spec.floor;
  prof.t = time_grid(spec.t_min, t_max, spec.t_step);
  prof.a = a_grid(spec.scan);
  const std::size_t nt = prof.t.size();
  const std::size_t na = prof.a.size();
  prof.samples.assign(nt * na, 0.0);
  prof.m_tilde.assign(nt, 0.0);
  prof.a_m.assign(nt, std::numeric_limits<double>::quiet_NaN());
  const bool asym = asymmetric_scan(family, spec.scan.mode);

  // Pin the grid so that every worker evolves on the same one.
  PipelineOptions popt = spec.pipeline;
  if (!popt.budget) popt.budget = default_budget(family, disp);
  if (!popt.grid) popt.grid = choose_grid(family, disp, t_max, *popt.budget, popt.n_min, popt.n_max);
  prof.grid = *popt.grid;

  std::vector<GridDiagnostics> diags(nt);
  parallel_for(
      nt, worker_count(spec.workers), [&] { return PacketPipeline(family, disp, t_max, popt); },
      [&](PacketPipeline& pipe, std::size_t i) {
        const auto& p0 = pipe.initial();
        const double t = prof.t[i];
        const auto pt = pipe.at(t);
        diags[i] = pipe.diagnostics();
        for (std::size_t k = 0; k < na; ++k) {
          const double a = prof.a[k];
          const double d = (pt.left(-a - t) - p0.left(-a)) + (pt.right(a + t) - p0.right(a));
          prof.samples[i * na + k] = std::clamp(d, 0.0, 1.0);
        }
        const auto mt = m_tilde(p0, pt, spec.scan, asym);
        prof.m_tilde[i] = mt.value;
        prof.a_m[i] = mt.a;
      });
  for (const auto& d : diags) {
    prof.diagnostics.max_renormalization = std::max(prof.diagnostics.max_renormalization, d.max_renormalization);
    prof.diagnostics.max_edge_mass = std::max(prof.diagnostics.max_edge_mass, d.max_edge_mass);
    prof.diagnostics.spectral_edge_mass = d.spectral_edge_mass;
  }

  // Timescales per a.
  const double eps = spec.floor.epsilon_M;
  prof.t0.assign(na, std::nullopt);
  prof.t1.assign(na, std::nullopt);
  prof.t2.assign(na, std::nullopt);
  for (std::size_t k = 0; k < na; ++k) {
    std::size_t peak = nt;
    double peak_v = eps;
    for (std::size_t i = 0; i < nt; ++i) {
      const double v = prof.sample(i, k);
      if (v > eps && !prof.t0[k]) prof.t0[k] = prof.t[i];
      if (v > peak_v) {
        peak_v = v;
        peak = i;
      }
    }
    if (peak == nt) continue;
    prof.t1[k] = prof.t[peak];
    for (std::size_t i = peak + 1; i < nt; ++i)
      if (prof.sample(i, k) <= eps) {
        prof.t2[k] = prof.t[i];
        break;
      }
  }

  // Global maximum.
  std::size_t best = 0;
  for (std::size_t i = 1; i < nt; ++i)
    if (prof.m_tilde[i] > prof.m_tilde[best]) best = i;
  prof.m_star = prof.m_tilde[best];
  prof.t1_star = prof.t[best];
  prof.a_star = prof.a_m[best];
  if (spec.refine_peak && prof.m_star > eps && nt > 1) {
    PacketPipeline pipe(family, disp, t_max, popt);
    const double lo = prof.t[best == 0 ? 0 : best - 1];
    const double hi = prof.t[std::min(best + 1, nt - 1)];
    auto f = [&](double t) {
      const auto r = m_tilde(pipe.initial(), pipe.at(t), spec.scan, asym);
      return -r.value;
    };
    const auto r = boost::math::tools::brent_find_minima(f, lo, hi, 20);
    if (-r.second > prof.m_star) {
      const auto at_best = m_tilde(pipe.initial(), pipe.at(r.first), spec.scan, asym);
      prof.m_star = at_best.value;
      prof.t1_star = r.first;
      prof.a_star = at_best.a;
    }
  }
  return prof;
}

// ----------------------------------------------------- outside probability

/// N(t) = 1 - mu_t(J+(supp mu_0)) for compactly supported initial states.
inline double outside_probability(PacketPipeline& pipe, double t) {
  const auto& fam = pipe.family();
  causal::detail::require(fam.compact_support(),
                          "outside_probability: initial state has no compact support");
  return std::clamp(pipe.at(t).outside(future_region(fam.support(), t)), 0.0, 1.0);
}

inline double outside_probability(const StateFamily& family, const Dispersion& disp, double t,
                                  const PipelineOptions& opt = {}) {
  causal::detail::require(family.compact_support(),
                          "outside_probability: initial state has no compact support");
  PacketPipeline pipe(family, disp, t, opt);
  return outside_probability(pipe, t);
}

// ---------------------------------------------------------------- N tilde

struct NTildeSpec {
  /// Widest source cell.
  double h = 0.01;
  /// Largest mass per source cell, of mu_0 and of mu_t shifted by +t and -t.
  /// Any interval then has an aligned neighbour whose deficiency differs by
  /// at most 4 cell_mass.
  double cell_mass = 2e-5;
  /// Mass allowed outside the window, lumped into the end cells.
  double tail = 1e-14;
  bool cross_check = true;
};

struct NTildeResult {
  double n_tilde = 0.0;
  double compact_deficiency = std::numeric_limits<double>::quiet_NaN();
  double min_width = 0.0;     // narrowest source cell
  std::size_t cells = 0;      // source cells
  std::size_t targets = 0;    // target cells
  double half_window = 0.0;   // source cells cover [-half_window, half_window]
  std::vector<std::size_t> witness;  // indices of source cells with mass
};

namespace detail {

/// Source cell boundaries on [-x, x]: a uniform grid of width <= h, bisected
/// until every cell meets the mass bound of `spec`.
inline std::vector<double> source_boundaries(const MassProfile& p0, const MassProfile& pt, double t, double x,
                                             const NTildeSpec& spec) {
  auto heavy = [&](double a, double b) {
    return p0.mass(a, b) > spec.cell_mass || pt.mass(a + t, b + t) > spec.cell_mass ||
           pt.mass(a - t, b - t) > spec.cell_mass;
  };
  const double min_width = 1e-12 * std::max(1.0, x);
  const auto coarse = static_cast<std::size_t>(std::ceil(2.0 * x / spec.h));
  std::vector<double> out{-x};
  std::vector<std::pair<double, double>> stack;
  for (std::size_t i = 0; i < coarse; ++i) {
    const double a = -x + 2.0 * x * static_cast<double>(i) / static_cast<double>(coarse);
    const double b = i + 1 == coarse ? x : -x + 2.0 * x * static_cast<double>(i + 1) / static_cast<double>(coarse);
    stack.push_back({a, b});
    while (!stack.empty()) {
      const auto [lo, hi] = stack.back();
      stack.pop_back();
      if (hi - lo > min_width && heavy(lo, hi)) {
        const double mid = 0.5 * (lo + hi);
        stack.push_back({mid, hi});
        stack.push_back({lo, mid});
      } else {
        out.push_back(hi);
      }
    }
  }
  return out;
}

}  // namespace detail

/// Discrete N~ between two profiles. Source cells [b_i, b_{i+1}) carry exact
/// masses of mu_0; target cells have boundaries b_i - t and b_i + t, so the
/// cone of every source cell is exactly a union of target cells. Hence every
/// continuum causal coupling induces a discrete one and every cell-aligned
/// set keeps its exact deficiency: M(aligned K) <= discrete N~ <= N~ up to
/// quadrature error.
inline NTildeResult n_tilde_packet(const MassProfile& p0, const MassProfile& pt, const NTildeSpec& spec = {}) {
  const double t = pt.t() - p0.t();
  causal::detail::require(t >= 0.0, "n_tilde_packet: profiles out of time order");
  causal::detail::require(spec.h > 0.0 && spec.cell_mass > 0.0, "n_tilde_packet: need h > 0 and cell_mass > 0");
  NTildeResult r;

  const double cap = std::min({-p0.x_start(), p0.x_end(), -pt.x_start(), pt.x_end()});
  auto tails = [&](double x) {
    return std::max(p0.left(-x) + p0.right(x), pt.left(-x) + pt.right(x));
  };
  double half = std::min(cap, 1.0);
  while (half < cap && tails(half) > spec.tail) half = std::min(cap, 2.0 * half);
  r.half_window = half;

  const auto b = detail::source_boundaries(p0, pt, t, half, spec);
  const std::size_t n = b.size() - 1;
  std::vector<double> c;
  c.reserve(2 * b.size());
  for (double v : b) {
    c.push_back(v - t);
    c.push_back(v + t);
  }
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  const std::size_t m = c.size() - 1;

  // Cell masses; the end cells absorb the tails.
  auto cell_masses = [](const MassProfile& p, const std::vector<double>& e) {
    auto w = p.cell_masses(e);
    w.front() += p.left(e.front());
    w.back() += p.right(e.back());
    return w;
  };
  const auto w0 = cell_masses(p0, b);
  const auto wt = cell_masses(pt, c);

  // Drop empty cells and renumber the cones.
  std::vector<std::size_t> kept_before(m + 1, 0);
  std::vector<transport::Atom> nu_atoms;
  for (std::size_t j = 0; j < m; ++j) {
    kept_before[j + 1] = kept_before[j] + (wt[j] > 0.0);
    if (wt[j] > 0.0) nu_atoms.push_back({0.5 * (c[j] + c[j + 1]), wt[j]});
  }
  std::vector<transport::Atom> mu_atoms;
  transport::ConeRanges cones;
  r.min_width = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    r.min_width = std::min(r.min_width, b[i + 1] - b[i]);
    if (w0[i] <= 0.0) continue;
    mu_atoms.push_back({0.5 * (b[i] + b[i + 1]), w0[i]});
    const auto lo = static_cast<std::size_t>(std::lower_bound(c.begin(), c.end(), b[i] - t) - c.begin());
    const auto hi = static_cast<std::size_t>(std::lower_bound(c.begin(), c.end(), b[i + 1] + t) - c.begin());
    cones.lo.push_back(kept_before[lo]);
    cones.hi.push_back(kept_before[hi]);
  }
  r.cells = n;
  r.targets = m;

  const transport::DiscreteMeasure mu(p0.t(), std::move(mu_atoms)), nu(pt.t(), std::move(nu_atoms));
  const auto res = transport::max_causal_mass(mu, nu, cones);
  r.n_tilde = res.n_tilde;
  r.witness = res.witness;
  if (spec.cross_check) r.compact_deficiency = transport::check_precedence_compact(mu, nu, cones).worst_deficiency;
  return r;
}

inline NTildeResult n_tilde_packet(PacketPipeline& pipe, double t, const NTildeSpec& spec = {}) {
  return n_tilde_packet(pipe.initial(), pipe.at(t), spec);
}

inline NTildeResult n_tilde_packet(const StateFamily& family, const Dispersion& disp, double t,
                                   const NTildeSpec& spec = {}, const PipelineOptions& opt = {}) {
  PacketPipeline pipe(family, disp, t, opt);
  return n_tilde_packet(pipe, t, spec);
}

// ------------------------------------------------------ Hegerfeldt witness

struct HegerfeldtSpec {
  double center_min = -20.0;
  double center_max = 20.0;
  double center_step = 0.25;
  std::vector<double> radii = {0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0};
  NoiseFloor floor;
};

struct HegerfeldtWitness {
  double center = 0.0;
  double radius = 0.0;
  double excess = 0.0;  // mu_t(B) - mu_0(B widened by t)
};

/// Ball B = [c - r, c + r] holding more mass at t than the initial state held
/// in [c - r - t, c + r + t], beyond the noise floor; the largest excess found.
inline std::optional<HegerfeldtWitness> hegerfeldt_witness(const MassProfile& p0, const MassProfile& pt,
                                                           const HegerfeldtSpec& spec = {}) {
  const double t = pt.t() - p0.t();
  causal::detail::require(t >= 0.0, "hegerfeldt_witness: profiles out of time order");
  causal::detail::require(spec.center_step > 0.0 && spec.center_max >= spec.center_min,
                          "hegerfeldt_witness: invalid center grid");
  if (t == 0.0) return std::nullopt;
  std::optional<HegerfeldtWitness> best;
  const auto nc = static_cast<std::size_t>(std::floor((spec.center_max - spec.center_min) / spec.center_step + 1e-9)) + 1;
  for (std::size_t i = 0; i < nc; ++i) {
    const double c = spec.center_min + static_cast<double>(i) * spec.center_step;
    for (double r : spec.radii) {
      const double excess = pt.mass(c - r, c + r) - p0.mass(c - r - t, c + r + t);
      if (excess > spec.floor.epsilon_M && (!best || excess > best->excess)) best = HegerfeldtWitness{c, r, excess};
    }
  }
  return best;
}

inline std::optional<HegerfeldtWitness> hegerfeldt_witness(const StateFamily& family, const Dispersion& disp,
                                                           double t, const HegerfeldtSpec& spec = {},
                                                           const PipelineOptions& opt = {}) {
  causal::detail::require(t >= 0.0, "hegerfeldt_witness: negative time");
  if (t == 0.0) return std::nullopt;
  PacketPipeline pipe(family, disp, t, opt);
  return hegerfeldt_witness(pipe.initial(), pipe.at(t), spec);
}

// ---------------------------------------------------------- mass scaling

struct ScalingResult {
  double lhs = 0.0;  // deficiency at mass m
  double rhs = 0.0;  // deficiency of the dilated state at mass 1, time m t, region m K
  double discrepancy = 0.0;
};

/// Compares the unclamped deficiency of K at time t under relativistic(m)
/// with that of the state dilated by m under relativistic(1) at time m t
/// over m K; each side runs its own pipeline.
inline ScalingResult scaling_check(const StateFamily& family, double m, double t, const SpatialRegion& k,
                                   const PipelineOptions& opt = {}) {
  causal::detail::require(m > 0.0 && std::isfinite(m), "scaling_check: mass must be positive");
  causal::detail::require(t >= 0.0, "scaling_check: negative time");
  ScalingResult r;
  {
    PacketPipeline pipe(family, Dispersion::relativistic(m), t, opt);
    r.lhs = pipe.deficiency(t, k);
  }
  std::vector<Interval> scaled;
  for (const auto& iv : k.intervals()) scaled.push_back({m * iv.lo, m * iv.hi});
  {
    PacketPipeline pipe(family.dilated(m), Dispersion::relativistic(1.0), m * t, opt);
    r.rhs = pipe.deficiency(m * t, SpatialRegion(std::move(scaled)));
  }
  r.discrepancy = std::abs(r.lhs - r.rhs) / std::max({std::abs(r.lhs), std::abs(r.rhs), 1e-9});
  return r;
}

}  // namespace causal::quantify
