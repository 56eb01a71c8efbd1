#pragma once

// Causal precedence of discrete measures on 1+1 Minkowski spacetime.
//
// mu (at time t_mu) causally precedes nu (at t_nu >= t_mu) iff there is a
// coupling of the two whose mass sits on pairs (x, y) with |y - x| <= t_nu - t_mu.
// The largest such mass is a maximum flow on the bipartite graph
// source -> atoms(mu) -> cone edges -> atoms(nu) -> sink, and by min-cut duality
// its shortfall equals the largest Hall deficiency mu(S) - nu(J+(S)).
//
// Three independent routes are provided:
//   * FlowNetwork: Dinic max-flow on masses scaled to the 1e-12 integer lattice;
//   * Staircase:   an O(n + m) greedy that is an exact max flow when cones are
//                  intervals with monotone end points (always true in 1D);
//   * check_precedence_compact: a dynamic program over unions of atom-supported
//                  intervals that maximizes the deficiency directly.
// brute_force_deficiency enumerates all subsets and is the oracle for tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <span>
#include <vector>

#include "causal/error.hpp"
#include "causal/spacetime.hpp"

namespace causal::transport {

struct Atom {
  double x = 0.0;
  double mass = 0.0;
};

/// Finitely many (position, mass) atoms at a fixed time. Positions strictly
/// increase and masses are positive with unit total.
class DiscreteMeasure {
 public:
  static constexpr double kMassTolerance = 1e-12;

  DiscreteMeasure(double t, std::vector<Atom> atoms) : t_(t), atoms_(std::move(atoms)) {
    causal::detail::require(std::isfinite(t), "DiscreteMeasure: non-finite time");
    causal::detail::require(!atoms_.empty(), "DiscreteMeasure: no atoms");
    long double total = 0.0L;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      causal::detail::require(std::isfinite(atoms_[i].x), "DiscreteMeasure: non-finite position");
      causal::detail::require(atoms_[i].mass > 0.0 && std::isfinite(atoms_[i].mass),
                      "DiscreteMeasure: atom masses must be positive");
      causal::detail::require(i == 0 || atoms_[i - 1].x < atoms_[i].x,
                      "DiscreteMeasure: positions must be strictly increasing");
      total += atoms_[i].mass;
    }
    causal::detail::require(std::abs(static_cast<double>(total) - 1.0) <= kMassTolerance,
                    "DiscreteMeasure: masses do not sum to 1");
  }

  /// Atoms at the cell centers of the nonzero cells of `mu`.
  static DiscreteMeasure from_grid(const GridMeasure& mu) {
    std::vector<Atom> atoms;
    atoms.reserve(mu.size());
    long double total = 0.0L;
    for (std::size_t i = 0; i < mu.size(); ++i) {
      if (mu.weight(i) > 0.0) {
        atoms.push_back({mu.cell_center(i), mu.weight(i)});
        total += mu.weight(i);
      }
    }
    for (auto& a : atoms) a.mass = static_cast<double>(a.mass / total);
    return DiscreteMeasure(mu.t(), std::move(atoms));
  }

  double t() const noexcept { return t_; }
  std::span<const Atom> atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  double x(std::size_t i) const noexcept { return atoms_[i].x; }
  double mass(std::size_t i) const noexcept { return atoms_[i].mass; }

 private:
  double t_;
  std::vector<Atom> atoms_;
};

struct CouplingEntry {
  std::size_t source = 0;
  std::size_t target = 0;
  double mass = 0.0;
  bool causal = false;
};

struct CouplingResult {
  double causal_mass = 0.0;  ///< sup omega(J+)
  double n_tilde = 0.0;      ///< 1 - causal_mass
  std::vector<CouplingEntry> coupling;
  /// Source atoms on the source side of a minimum cut.
  std::vector<std::size_t> witness;
  /// mu(witness) - nu(J+(witness)), equal to n_tilde up to rounding.
  double witness_deficiency = 0.0;
};

enum class Solver { Automatic, FlowNetwork, Staircase };

struct TransportOptions {
  /// Added to the cone radius; used for cell-center discretizations.
  double slack = 0.0;
  Solver solver = Solver::Automatic;
  /// Automatic switches to Staircase above this many cone edges.
  std::size_t max_network_edges = 2'000'000;
  /// n_tilde at or below this counts as causal.
  double tolerance = 1e-9;
};

/// Options for measures discretized at cell centers of a grid with spacing dx.
inline TransportOptions grid_options(double dx) {
  TransportOptions o;
  o.slack = dx;
  return o;
}

namespace detail {

/// For every source atom, the half-open range [lo, hi) of target atoms inside
/// its cone. Both ends are nondecreasing in the source index.
struct ConeRanges {
  double radius = 0.0;
  std::vector<std::size_t> lo;
  std::vector<std::size_t> hi;

  std::size_t edge_count() const {
    std::size_t e = 0;
    for (std::size_t i = 0; i < lo.size(); ++i) e += hi[i] - lo[i];
    return e;
  }
};

inline double cone_radius(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                          const TransportOptions& opt) {
  causal::detail::require(nu.t() >= mu.t(), "transport: target measure precedes source in time");
  causal::detail::require(opt.slack >= 0.0, "transport: negative slack");
  const double r = (nu.t() - mu.t()) + opt.slack;
  // Absorb rounding in differences of grid coordinates.
  return r + 1e-12 * std::max(1.0, r);
}

inline ConeRanges cone_ranges(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                              const TransportOptions& opt) {
  ConeRanges c;
  c.radius = cone_radius(mu, nu, opt);
  const std::size_t n = mu.size();
  const std::size_t m = nu.size();
  c.lo.resize(n);
  c.hi.resize(n);
  std::size_t lo = 0;
  std::size_t hi = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = mu.x(i);
    while (lo < m && nu.x(lo) < x - c.radius) ++lo;
    if (hi < lo) hi = lo;
    while (hi < m && nu.x(hi) <= x + c.radius) ++hi;
    c.lo[i] = lo;
    c.hi[i] = hi;
  }
  return c;
}

/// Pairs leftover supplies with leftover demands (north-west corner). With a
/// maximum causal part only rounding residue can land on a causal pair.
inline void complete_coupling(std::span<const double> supply_left, std::span<const double> demand_left,
                              const ConeRanges& cones, std::vector<CouplingEntry>& out) {
  std::size_t i = 0;
  std::size_t j = 0;
  std::vector<double> s(supply_left.begin(), supply_left.end());
  std::vector<double> d(demand_left.begin(), demand_left.end());
  while (i < s.size() && j < d.size()) {
    if (s[i] <= 0.0) { ++i; continue; }
    if (d[j] <= 0.0) { ++j; continue; }
    const double take = std::min(s[i], d[j]);
    out.push_back({i, j, take, cones.lo[i] <= j && j < cones.hi[i]});
    s[i] -= take;
    d[j] -= take;
    if (s[i] <= 0.0) ++i;
    if (d[j] <= 0.0) ++j;
  }
}

inline double witness_deficiency(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                 const ConeRanges& cones, std::span<const std::size_t> witness) {
  // Witness indices ascend and cone ends are monotone: merge the ranges.
  long double in = 0.0L, out = 0.0L;
  std::size_t done = 0;
  for (auto i : witness) {
    in += mu.mass(i);
    for (std::size_t j = std::max(done, cones.lo[i]); j < cones.hi[i]; ++j) out += nu.mass(j);
    done = std::max(done, cones.hi[i]);
  }
  return static_cast<double>(in - out);
}

/// Dinic's algorithm on int64 capacities.
class FlowNetwork {
 public:
  static constexpr std::int64_t kInfinity = std::numeric_limits<std::int64_t>::max() / 4;

  explicit FlowNetwork(std::size_t nodes) : head_(nodes, -1) {}

  std::size_t add_edge(std::size_t from, std::size_t to, std::int64_t cap) {
    const std::size_t id = to_.size();
    push(from, to, cap);
    push(to, from, 0);
    return id;
  }

  std::int64_t max_flow(std::size_t s, std::size_t t) {
    std::int64_t total = 0;
    while (bfs(s, t)) {
      iter_.assign(head_.begin(), head_.end());
      while (std::int64_t f = dfs(s, t, kInfinity)) total += f;
    }
    return total;
  }

  std::int64_t flow(std::size_t edge) const { return cap_[edge ^ 1U]; }

  /// Nodes reachable from s in the residual graph (valid after max_flow).
  std::vector<char> reachable(std::size_t s) const {
    std::vector<char> seen(head_.size(), 0);
    std::vector<std::size_t> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      const auto v = stack.back();
      stack.pop_back();
      for (auto e = head_[v]; e != -1; e = next_[static_cast<std::size_t>(e)]) {
        const auto ue = static_cast<std::size_t>(e);
        if (cap_[ue] > 0 && !seen[to_[ue]]) {
          seen[to_[ue]] = 1;
          stack.push_back(to_[ue]);
        }
      }
    }
    return seen;
  }

 private:
  void push(std::size_t from, std::size_t to, std::int64_t cap) {
    to_.push_back(to);
    cap_.push_back(cap);
    next_.push_back(head_[from]);
    head_[from] = static_cast<std::ptrdiff_t>(to_.size() - 1);
  }

  bool bfs(std::size_t s, std::size_t t) {
    level_.assign(head_.size(), -1);
    std::queue<std::size_t> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
      const auto v = q.front();
      q.pop();
      for (auto e = head_[v]; e != -1; e = next_[static_cast<std::size_t>(e)]) {
        const auto ue = static_cast<std::size_t>(e);
        if (cap_[ue] > 0 && level_[to_[ue]] < 0) {
          level_[to_[ue]] = level_[v] + 1;
          q.push(to_[ue]);
        }
      }
    }
    return level_[t] >= 0;
  }

  std::int64_t dfs(std::size_t v, std::size_t t, std::int64_t pushed) {
    if (v == t) return pushed;
    for (auto& e = iter_[v]; e != -1; e = next_[static_cast<std::size_t>(e)]) {
      const auto ue = static_cast<std::size_t>(e);
      const auto w = to_[ue];
      if (cap_[ue] <= 0 || level_[w] != level_[v] + 1) continue;
      if (std::int64_t f = dfs(w, t, std::min(pushed, cap_[ue]))) {
        cap_[ue] -= f;
        cap_[ue ^ 1U] += f;
        return f;
      }
    }
    return 0;
  }

  std::vector<std::ptrdiff_t> head_;
  std::vector<std::ptrdiff_t> next_;
  std::vector<std::size_t> to_;
  std::vector<std::int64_t> cap_;
  std::vector<int> level_;
  std::vector<std::ptrdiff_t> iter_;
};

inline constexpr double kLattice = 1e12;

inline CouplingResult solve_network(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                    const ConeRanges& cones) {
  const std::size_t n = mu.size();
  const std::size_t m = nu.size();
  const std::size_t source = n + m;
  const std::size_t sink = n + m + 1;
  FlowNetwork net(n + m + 2);

  // Rounded down so that no flow exceeds an atom mass.
  for (std::size_t i = 0; i < n; ++i)
    net.add_edge(source, i, static_cast<std::int64_t>(std::floor(mu.mass(i) * kLattice)));
  for (std::size_t j = 0; j < m; ++j)
    net.add_edge(n + j, sink, static_cast<std::int64_t>(std::floor(nu.mass(j) * kLattice)));

  struct Middle {
    std::size_t edge, i, j;
  };
  std::vector<Middle> middle;
  middle.reserve(cones.edge_count());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = cones.lo[i]; j < cones.hi[i]; ++j)
      middle.push_back({net.add_edge(i, n + j, FlowNetwork::kInfinity), i, j});

  net.max_flow(source, sink);

  CouplingResult r;

  std::vector<double> supply(n), demand(m);
  for (std::size_t i = 0; i < n; ++i) supply[i] = mu.mass(i);
  for (std::size_t j = 0; j < m; ++j) demand[j] = nu.mass(j);
  for (const auto& e : middle) {
    const auto f = net.flow(e.edge);
    if (f <= 0) continue;
    const double mass = static_cast<double>(f) / kLattice;
    r.coupling.push_back({e.i, e.j, mass, true});
    supply[e.i] -= mass;
    demand[e.j] -= mass;
  }
  complete_coupling(supply, demand, cones, r.coupling);

  const auto seen = net.reachable(source);
  for (std::size_t i = 0; i < n; ++i)
    if (seen[i]) r.witness.push_back(i);
  r.witness_deficiency = witness_deficiency(mu, nu, cones, r.witness);
  // The cut is exact on the lattice; its deficiency in the unrounded masses
  // removes the rounding of the capacities from the reported optimum.
  r.n_tilde = std::max(0.0, r.witness_deficiency);
  r.causal_mass = 1.0 - r.n_tilde;
  return r;
}

/// Residual-graph search on the implicit interval graph: sources with unused
/// mass seed the search, a source reaches every target in its cone and a
/// target reaches every source that sends it flow.
inline std::vector<std::size_t> staircase_witness(const ConeRanges& cones,
                                                  std::span<const double> leftover,
                                                  std::span<const CouplingEntry> flows,
                                                  std::size_t targets) {
  const std::size_t n = leftover.size();
  // Flow entries are produced with nondecreasing target index.
  std::vector<std::size_t> first(targets + 1, 0);
  for (const auto& e : flows) ++first[e.target + 1];
  for (std::size_t j = 0; j < targets; ++j) first[j + 1] += first[j];

  // next_free[j]: smallest unvisited target >= j (path-compressed).
  std::vector<std::size_t> next_free(targets + 1);
  for (std::size_t j = 0; j <= targets; ++j) next_free[j] = j;
  auto find = [&](std::size_t j) {
    std::size_t root = j;
    while (next_free[root] != root) root = next_free[root];
    while (next_free[j] != root) {
      const auto up = next_free[j];
      next_free[j] = root;
      j = up;
    }
    return root;
  };

  std::vector<char> in_set(n, 0);
  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < n; ++i)
    if (leftover[i] > 0.0) {
      in_set[i] = 1;
      stack.push_back(i);
    }
  while (!stack.empty()) {
    const auto i = stack.back();
    stack.pop_back();
    for (auto j = find(cones.lo[i]); j < cones.hi[i]; j = find(j)) {
      next_free[j] = j + 1;
      for (auto k = first[j]; k < first[j + 1]; ++k) {
        const auto src = flows[k].source;
        if (!in_set[src]) {
          in_set[src] = 1;
          stack.push_back(src);
        }
      }
    }
  }
  std::vector<std::size_t> witness;
  for (std::size_t i = 0; i < n; ++i)
    if (in_set[i]) witness.push_back(i);
  return witness;
}

/// Each source, left to right, fills the leftmost targets still open in its
/// cone. Cone end points are monotone, so a target skipped by one source is
/// out of reach for every later source and greedy filling is a maximum flow.
inline CouplingResult solve_staircase(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                      const ConeRanges& cones) {
  const std::size_t n = mu.size();
  const std::size_t m = nu.size();
  std::vector<double> capacity(m);
  for (std::size_t j = 0; j < m; ++j) capacity[j] = nu.mass(j);
  std::vector<double> leftover(n, 0.0);

  CouplingResult r;
  long double moved = 0.0L;
  std::size_t ptr = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double need = mu.mass(i);
    std::size_t j = std::max(ptr, cones.lo[i]);
    while (need > 0.0 && j < cones.hi[i]) {
      if (capacity[j] <= 0.0) {
        ++j;
        continue;
      }
      const double take = std::min(capacity[j], need);
      r.coupling.push_back({i, j, take, true});
      moved += take;
      if (capacity[j] <= need) {
        need -= capacity[j];
        capacity[j] = 0.0;
        ++j;
      } else {
        capacity[j] -= need;
        need = 0.0;
      }
    }
    ptr = std::max(ptr, j);
    leftover[i] = need;
  }
  r.causal_mass = std::clamp(static_cast<double>(moved), 0.0, 1.0);
  r.n_tilde = std::max(0.0, static_cast<double>(1.0L - moved));

  r.witness = staircase_witness(cones, leftover, r.coupling, m);
  r.witness_deficiency = witness_deficiency(mu, nu, cones, r.witness);
  complete_coupling(leftover, capacity, cones, r.coupling);
  return r;
}

}  // namespace detail

/// Source i may send mass to targets [lo[i], hi[i]) only. For measures whose
/// cones are not given by atom distances, e.g. cells of unequal width.
using ConeRanges = detail::ConeRanges;

namespace detail {

inline void validate_cones(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const ConeRanges& c) {
  causal::detail::require(c.lo.size() == mu.size() && c.hi.size() == mu.size(),
                          "transport: one cone range per source atom required");
  for (std::size_t i = 0; i < mu.size(); ++i) {
    causal::detail::require(c.lo[i] <= c.hi[i] && c.hi[i] <= nu.size(), "transport: bad cone range");
    if (i > 0)
      causal::detail::require(c.lo[i - 1] <= c.lo[i] && c.hi[i - 1] <= c.hi[i],
                              "transport: cone ranges must be nondecreasing");
  }
}

}  // namespace detail

/// Maximum causal mass for explicit monotone cone ranges.
inline CouplingResult max_causal_mass(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                      const ConeRanges& cones, Solver solver = Solver::Staircase) {
  detail::validate_cones(mu, nu, cones);
  return solver == Solver::FlowNetwork ? detail::solve_network(mu, nu, cones)
                                       : detail::solve_staircase(mu, nu, cones);
}

/// Largest causally transported mass between mu and nu, an optimal coupling
/// and a min-cut witness set of source atoms.
inline CouplingResult max_causal_mass(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                      const TransportOptions& opt = {}) {
  const auto cones = detail::cone_ranges(mu, nu, opt);
  Solver solver = opt.solver;
  if (solver == Solver::Automatic)
    solver = cones.edge_count() <= opt.max_network_edges ? Solver::FlowNetwork : Solver::Staircase;
  return solver == Solver::FlowNetwork ? detail::solve_network(mu, nu, cones)
                                       : detail::solve_staircase(mu, nu, cones);
}

struct PrecedenceVerdict {
  bool causal = true;
  double worst_deficiency = 0.0;
  /// Union of atom-supported intervals attaining worst_deficiency.
  SpatialRegion worst_set;
  std::vector<std::size_t> worst_atoms;
};

/// Maximizes mu(K) - nu(J+(K)) over unions of intervals [x_i, x_k] spanned by
/// source atoms. Components whose cones share no target atom contribute
/// additively; components sharing one are dominated by their merged hull, so a
/// linear-time dynamic program over component end points is exact.
inline PrecedenceVerdict check_precedence_compact(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                                  const ConeRanges& cones, double tolerance = 1e-9) {
  detail::validate_cones(mu, nu, cones);
  const std::size_t n = mu.size();
  const std::size_t m = nu.size();
  std::vector<long double> mu_before(n + 1, 0.0L), nu_before(m + 1, 0.0L);
  for (std::size_t i = 0; i < n; ++i) mu_before[i + 1] = mu_before[i] + mu.mass(i);
  for (std::size_t j = 0; j < m; ++j) nu_before[j + 1] = nu_before[j] + nu.mass(j);

  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  // end_value[k]: best total over component sets whose last component ends at k.
  std::vector<long double> end_value(n);
  std::vector<std::size_t> end_start(n), start_prev(n, kNone);

  long double best_g = -std::numeric_limits<long double>::infinity();
  std::size_t best_g_at = 0;
  // Running max of end_value over admissible predecessors.
  long double prev_best = 0.0L;
  std::size_t prev_best_at = kNone;
  std::size_t p = 0;

  for (std::size_t k = 0; k < n; ++k) {
    // Start a component at i = k.
    while (p < k && cones.hi[p] <= cones.lo[k]) {
      if (end_value[p] > prev_best) {
        prev_best = end_value[p];
        prev_best_at = p;
      }
      ++p;
    }
    const long double g = -mu_before[k] + nu_before[cones.lo[k]] + prev_best;
    start_prev[k] = prev_best_at;
    if (g > best_g) {
      best_g = g;
      best_g_at = k;
    }
    end_value[k] = mu_before[k + 1] - nu_before[cones.hi[k]] + best_g;
    end_start[k] = best_g_at;
  }

  PrecedenceVerdict v;
  long double worst = 0.0L;
  std::size_t worst_end = kNone;
  for (std::size_t k = 0; k < n; ++k)
    if (end_value[k] > worst) {
      worst = end_value[k];
      worst_end = k;
    }
  std::vector<Interval> pieces;
  for (auto k = worst_end; k != kNone;) {
    const auto i = end_start[k];
    pieces.push_back({mu.x(i), mu.x(k)});
    for (auto a = i; a <= k; ++a) v.worst_atoms.push_back(a);
    k = start_prev[i];
  }
  std::sort(v.worst_atoms.begin(), v.worst_atoms.end());
  v.worst_set = SpatialRegion(std::move(pieces));
  v.worst_deficiency = static_cast<double>(worst);
  v.causal = v.worst_deficiency <= tolerance;
  return v;
}

inline PrecedenceVerdict check_precedence_compact(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                                  const TransportOptions& opt = {}) {
  return check_precedence_compact(mu, nu, detail::cone_ranges(mu, nu, opt), opt.tolerance);
}

/// Exhaustive max(0, max_S mu(S) - nu(J+(S))) over all subsets S of source
/// atoms. Oracle for small instances only.
inline double brute_force_deficiency(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                     const TransportOptions& opt = {}) {
  constexpr std::size_t kMaxAtoms = 20;
  causal::detail::require(mu.size() <= kMaxAtoms, "brute_force_deficiency: more than 20 source atoms");
  const auto cones = detail::cone_ranges(mu, nu, opt);
  const std::size_t n = mu.size();
  const std::size_t m = nu.size();
  const std::size_t words = (m + 63) / 64;

  std::vector<std::uint64_t> reach(n * words, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = cones.lo[i]; j < cones.hi[i]; ++j)
      reach[i * words + j / 64] |= std::uint64_t{1} << (j % 64);

  double best = 0.0;
  std::vector<std::uint64_t> cover(words);
  for (std::uint64_t subset = 1; subset < (std::uint64_t{1} << n); ++subset) {
    std::fill(cover.begin(), cover.end(), 0);
    long double in = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
      if (!(subset >> i & 1U)) continue;
      in += mu.mass(i);
      for (std::size_t w = 0; w < words; ++w) cover[w] |= reach[i * words + w];
    }
    long double out = 0.0L;
    for (std::size_t j = 0; j < m; ++j)
      if (cover[j / 64] >> (j % 64) & 1U) out += nu.mass(j);
    best = std::max(best, static_cast<double>(in - out));
  }
  return best;
}

/// Necessary condition supp nu within J+(supp mu): every target atom is in the
/// cone of some source atom.
inline bool support_condition(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                              const TransportOptions& opt = {}) {
  const double r = detail::cone_radius(mu, nu, opt);
  for (const auto& a : nu.atoms()) {
    const auto atoms = mu.atoms();
    auto it = std::lower_bound(atoms.begin(), atoms.end(), a.x,
                               [](const Atom& s, double x) { return s.x < x; });
    bool hit = false;
    if (it != atoms.end() && it->x - a.x <= r) hit = true;
    if (it != atoms.begin() && a.x - std::prev(it)->x <= r) hit = true;
    if (!hit) return false;
  }
  return true;
}

}  // namespace causal::transport
