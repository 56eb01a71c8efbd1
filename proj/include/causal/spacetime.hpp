#pragma once

// Events, the light-cone order of 1+1 Minkowski spacetime (c = 1), finite
// unions of closed intervals and piecewise-constant probability measures on
// a uniform spatial grid.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "causal/error.hpp"

namespace causal {

struct Event {
  double t = 0.0;
  double x = 0.0;
};

/// p causally precedes q iff q lies in the closed future light cone of p.
constexpr bool causally_precedes(const Event& p, const Event& q) noexcept {
  const double dt = q.t - p.t;
  const double dx = q.x > p.x ? q.x - p.x : p.x - q.x;
  return dt >= 0.0 && dx <= dt;
}

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const noexcept { return hi - lo; }
  bool contains(double x) const noexcept { return lo <= x && x <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Finite union of disjoint, sorted closed intervals. Overlapping or touching
/// input intervals are merged on construction.
class SpatialRegion {
 public:
  SpatialRegion() = default;

  explicit SpatialRegion(std::vector<Interval> intervals) {
    for (const auto& iv : intervals) {
      detail::require(std::isfinite(iv.lo) && std::isfinite(iv.hi),
                      "SpatialRegion: non-finite interval bound");
      detail::require(iv.lo <= iv.hi, "SpatialRegion: interval with lo > hi");
    }
    std::sort(intervals.begin(), intervals.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    for (const auto& iv : intervals) {
      if (!intervals_.empty() && iv.lo <= intervals_.back().hi) {
        intervals_.back().hi = std::max(intervals_.back().hi, iv.hi);
      } else {
        intervals_.push_back(iv);
      }
    }
  }

  static SpatialRegion interval(double lo, double hi) {
    return SpatialRegion({Interval{lo, hi}});
  }
  /// K_a = [-a, a].
  static SpatialRegion symmetric(double a) { return interval(-a, a); }

  std::span<const Interval> intervals() const noexcept { return intervals_; }
  std::size_t size() const noexcept { return intervals_.size(); }
  bool empty() const noexcept { return intervals_.empty(); }

  double length() const noexcept {
    double total = 0.0;
    for (const auto& iv : intervals_) total += iv.length();
    return total;
  }

  bool contains(double x) const noexcept {
    auto it = std::upper_bound(
        intervals_.begin(), intervals_.end(), x,
        [](double v, const Interval& iv) { return v < iv.lo; });
    return it != intervals_.begin() && std::prev(it)->contains(x);
  }

  /// True iff every interval of `other` lies inside one interval of *this.
  bool includes(const SpatialRegion& other) const noexcept {
    for (const auto& iv : other.intervals_) {
      auto it = std::upper_bound(
          intervals_.begin(), intervals_.end(), iv.lo,
          [](double v, const Interval& w) { return v < w.lo; });
      if (it == intervals_.begin()) return false;
      const auto& host = *std::prev(it);
      if (!(host.lo <= iv.lo && iv.hi <= host.hi)) return false;
    }
    return true;
  }

  friend bool operator==(const SpatialRegion&, const SpatialRegion&) = default;

 private:
  std::vector<Interval> intervals_;
};

/// Slice of J+(K) at time gap dt: every [a, b] widens to [a - dt, b + dt].
inline SpatialRegion future_region(const SpatialRegion& k, double dt) {
  detail::require(dt >= 0.0, "future_region: negative time gap");
  std::vector<Interval> grown;
  grown.reserve(k.size());
  for (const auto& iv : k.intervals()) grown.push_back({iv.lo - dt, iv.hi + dt});
  return SpatialRegion(std::move(grown));
}

/// Nonnegative cell weights on a uniform grid at a fixed time; cell i covers
/// [x0 + i dx, x0 + (i + 1) dx] and the weights sum to one.
class GridMeasure {
 public:
  static constexpr double kMassTolerance = 1e-12;

  GridMeasure(double t, double x0, double dx, std::vector<double> weights)
      : t_(t), x0_(x0), dx_(dx), w_(std::move(weights)) {
    detail::require(std::isfinite(t) && std::isfinite(x0), "GridMeasure: non-finite t or x0");
    detail::require(dx > 0.0 && std::isfinite(dx), "GridMeasure: dx must be positive");
    detail::require(!w_.empty(), "GridMeasure: no cells");
    long double total = 0.0L;
    for (double w : w_) {
      detail::require(std::isfinite(w) && w >= 0.0, "GridMeasure: negative or non-finite weight");
      total += w;
    }
    detail::require(std::abs(static_cast<double>(total) - 1.0) <= kMassTolerance,
                    "GridMeasure: weights do not sum to 1");
  }

  /// Scales nonnegative raw weights to unit mass. `renormalization` receives
  /// |1 - sum(raw)| when non-null.
  static GridMeasure normalized(double t, double x0, double dx, std::vector<double> raw,
                                double* renormalization = nullptr) {
    long double total = 0.0L;
    for (double& w : raw) {
      detail::require(std::isfinite(w), "GridMeasure: non-finite weight");
      if (w < 0.0) w = 0.0;
      total += w;
    }
    detail::require(total > 0.0L, "GridMeasure: zero total mass");
    for (double& w : raw) w = static_cast<double>(w / total);
    if (renormalization) *renormalization = std::abs(1.0 - static_cast<double>(total));
    return GridMeasure(t, x0, dx, std::move(raw));
  }

  double t() const noexcept { return t_; }
  double x0() const noexcept { return x0_; }
  double dx() const noexcept { return dx_; }
  std::size_t size() const noexcept { return w_.size(); }
  std::span<const double> weights() const noexcept { return w_; }
  double weight(std::size_t i) const { return w_.at(i); }
  double cell_left(std::size_t i) const noexcept { return x0_ + static_cast<double>(i) * dx_; }
  double cell_center(std::size_t i) const noexcept {
    return x0_ + (static_cast<double>(i) + 0.5) * dx_;
  }
  double x_end() const noexcept { return cell_left(w_.size()); }

 private:
  double t_;
  double x0_;
  double dx_;
  std::vector<double> w_;
};

/// Mass of K under the piecewise-constant density of `mu`; partially covered
/// cells contribute in proportion to the covered length.
inline double region_mass(const GridMeasure& mu, const SpatialRegion& k) {
  const auto n = static_cast<std::ptrdiff_t>(mu.size());
  const auto w = mu.weights();
  long double total = 0.0L;
  for (const auto& iv : k.intervals()) {
    const double lo = std::max(iv.lo, mu.x0());
    const double hi = std::min(iv.hi, mu.x_end());
    if (!(lo < hi)) continue;
    auto first = static_cast<std::ptrdiff_t>(std::floor((lo - mu.x0()) / mu.dx()));
    auto last = static_cast<std::ptrdiff_t>(std::floor((hi - mu.x0()) / mu.dx()));
    first = std::clamp<std::ptrdiff_t>(first, 0, n - 1);
    last = std::clamp<std::ptrdiff_t>(last, 0, n - 1);
    for (auto i = first; i <= last; ++i) {
      const double cl = mu.cell_left(static_cast<std::size_t>(i));
      const double overlap = std::min(hi, cl + mu.dx()) - std::max(lo, cl);
      if (overlap <= 0.0) continue;
      total += static_cast<long double>(w[static_cast<std::size_t>(i)]) *
               std::min(1.0, overlap / mu.dx());
    }
  }
  return std::clamp(static_cast<double>(total), 0.0, 1.0);
}

}  // namespace causal
