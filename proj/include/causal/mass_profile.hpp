#pragma once

// Cumulative mass of a smooth periodic density sampled on uniform nodes.
//
// Between nodes the density is replaced by the degree-7 Lagrange interpolant
// through the eight surrounding samples, integrated exactly by 4-point
// Gauss-Legendre. Full-cell integrals therefore form an eighth-order rule, and
// masses at arbitrary end points keep the same order.
//
// Masses left and right of a point come from separate prefix and suffix sums,
// so tail masses of 1e-12 keep their relative accuracy next to a bulk of 1.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "causal/error.hpp"
#include "causal/spacetime.hpp"

namespace causal {

namespace detail {

struct LagrangeCell {
  static constexpr int kPoints = 8;
  static constexpr int kFirst = -3;  // stencil offsets -3..4 around node j

  std::array<double, kPoints> inv_denom{};
  std::array<double, kPoints> full{};  // weights of the whole cell [0, 1]

  static constexpr std::array<double, 4> kGaussX = {-0.8611363115940526, -0.3399810435848563,
                                                     0.3399810435848563, 0.8611363115940526};
  static constexpr std::array<double, 4> kGaussW = {0.3478548451374538, 0.6521451548625461,
                                                     0.6521451548625461, 0.3478548451374538};

  LagrangeCell() {
    for (int k = 0; k < kPoints; ++k) {
      double d = 1.0;
      for (int l = 0; l < kPoints; ++l)
        if (l != k) d *= static_cast<double>(k - l);
      inv_denom[static_cast<std::size_t>(k)] = 1.0 / d;
    }
    full = weights(0.0, 1.0);
  }

  /// Weights w_k with integral_{u0}^{u1} p(u) du = sum_k w_k f(j + kFirst + k),
  /// u measured in cells from node j.
  std::array<double, kPoints> weights(double u0, double u1) const {
    std::array<double, kPoints> w{};
    const double half = 0.5 * (u1 - u0);
    const double mid = 0.5 * (u1 + u0);
    for (std::size_t g = 0; g < kGaussX.size(); ++g) {
      const double u = mid + half * kGaussX[g];
      // prod_{l != k} (u - node_l) from prefix and suffix products.
      std::array<double, kPoints + 1> pre{}, suf{};
      pre[0] = 1.0;
      suf[kPoints] = 1.0;
      for (std::size_t l = 0; l < kPoints; ++l) pre[l + 1] = pre[l] * (u - (kFirst + static_cast<double>(l)));
      for (std::size_t l = kPoints; l-- > 0;) suf[l] = suf[l + 1] * (u - (kFirst + static_cast<double>(l)));
      const double scale = half * kGaussW[g];
      for (std::size_t k = 0; k < kPoints; ++k) w[k] += scale * pre[k] * suf[k + 1] * inv_denom[k];
    }
    return w;
  }

  static const LagrangeCell& instance() {
    static const LagrangeCell cell;
    return cell;
  }
};

}  // namespace detail

/// Normalized cumulative distribution of a periodic density sampled at
/// x_j = x_start + j dx, j = 0..n-1, over the period [x_start, x_start + n dx).
class MassProfile {
 public:
  MassProfile(double t, double x_start, double dx, std::vector<double> density)
      : t_(t), x0_(x_start), dx_(dx), rho_(std::move(density)) {
    detail::require(dx > 0.0, "MassProfile: dx must be positive");
    detail::require(rho_.size() >= static_cast<std::size_t>(detail::LagrangeCell::kPoints),
                    "MassProfile: too few nodes");
    const std::size_t n = rho_.size();
    const auto& w = detail::LagrangeCell::instance().full;
    cell_.resize(n);
    long double total = 0.0L;
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < detail::LagrangeCell::kPoints; ++k)
        s += w[static_cast<std::size_t>(k)] * node(static_cast<std::ptrdiff_t>(j) + detail::LagrangeCell::kFirst + k);
      cell_[j] = s * dx_;
      total += cell_[j];
    }
    detail::require(total > 0.0L, "MassProfile: zero total mass");
    raw_total_ = static_cast<double>(total);
    const double inv = static_cast<double>(1.0L / total);
    for (auto& c : cell_) c *= inv;
    for (auto& r : rho_) r *= inv;
    before_.resize(n + 1);
    after_.resize(n + 1);
    long double acc = 0.0L;
    for (std::size_t j = 0; j < n; ++j) {
      before_[j] = static_cast<double>(acc);
      acc += cell_[j];
    }
    before_[n] = static_cast<double>(acc);
    acc = 0.0L;
    for (std::size_t j = n; j-- > 0;) {
      after_[j + 1] = static_cast<double>(acc);
      acc += cell_[j];
    }
    after_[0] = static_cast<double>(acc);
  }

  double t() const noexcept { return t_; }
  double x_start() const noexcept { return x0_; }
  double x_end() const noexcept { return x0_ + dx_ * static_cast<double>(rho_.size()); }
  double dx() const noexcept { return dx_; }
  std::size_t size() const noexcept { return rho_.size(); }
  /// Integral of the samples before normalization.
  double raw_total() const noexcept { return raw_total_; }
  /// Normalized density samples.
  std::span<const double> density() const noexcept { return rho_; }

  /// Mass in [x_start, y].
  double left(double y) const {
    if (y <= x0_) return 0.0;
    if (y >= x_end()) return 1.0;
    const auto [j, u] = locate(y);
    return before_[j] + partial(j, 0.0, u);
  }

  /// Mass in [y, x_end].
  double right(double y) const {
    if (y <= x0_) return 1.0;
    if (y >= x_end()) return 0.0;
    const auto [j, u] = locate(y);
    return after_[j + 1] + partial(j, u, 1.0);
  }

  /// Mass in [lo, hi] computed from whichever side keeps it well conditioned.
  double mass(double lo, double hi) const {
    if (!(lo < hi)) return 0.0;
    const double mid = 0.5 * (x0_ + x_end());
    if (hi <= mid) return std::max(0.0, left(hi) - left(lo));
    if (lo >= mid) return std::max(0.0, right(lo) - right(hi));
    return std::max(0.0, 1.0 - left(lo) - right(hi));
  }

  /// mass(e[i], e[i+1]) for ascending edges, one cumulative per edge.
  std::vector<double> cell_masses(std::span<const double> e) const {
    const double mid = 0.5 * (x0_ + x_end());
    std::vector<double> l(e.size()), r(e.size()), w(e.size() > 0 ? e.size() - 1 : 0);
    // Each cell reads l only at edges <= mid and r only at edges >= mid.
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] <= mid) l[i] = left(e[i]);
      if (e[i] >= mid) r[i] = right(e[i]);
    }
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (!(e[i] < e[i + 1])) continue;
      const double v = e[i + 1] <= mid ? l[i + 1] - l[i] : e[i] >= mid ? r[i] - r[i + 1] : 1.0 - l[i] - r[i + 1];
      w[i] = std::max(0.0, v);
    }
    return w;
  }

  double mass(const SpatialRegion& k) const {
    double total = 0.0;
    for (const auto& iv : k.intervals()) total += mass(iv.lo, iv.hi);
    return std::min(total, 1.0);
  }

  /// Mass of the complement of K; accurate when K holds almost everything.
  double outside(const SpatialRegion& k) const {
    if (k.empty()) return 1.0;
    const auto ivs = k.intervals();
    double total = left(ivs.front().lo) + right(ivs.back().hi);
    for (std::size_t i = 0; i + 1 < ivs.size(); ++i) total += mass(ivs[i].hi, ivs[i + 1].lo);
    return std::min(total, 1.0);
  }

  /// Cells of width h starting at x_lo holding their exact masses; tail mass
  /// beyond the covered range is lumped into the first and last cell.
  GridMeasure resample(double x_lo, double h, std::size_t cells) const {
    detail::require(h > 0.0 && cells > 0, "MassProfile::resample: empty grid");
    std::vector<double> w(cells);
    const double mid = 0.5 * (x0_ + x_end());
    double prev_left = left(x_lo);
    double prev_right = right(x_lo);
    for (std::size_t i = 0; i < cells; ++i) {
      const double b = x_lo + h * static_cast<double>(i + 1);
      const double l = left(b);
      const double r = right(b);
      const double a = b - h;
      w[i] = std::max(0.0, a >= mid ? prev_right - r : l - prev_left);
      prev_left = l;
      prev_right = r;
    }
    w.front() += left(x_lo);
    w.back() += right(x_lo + h * static_cast<double>(cells));
    return GridMeasure::normalized(t_, x_lo, h, std::move(w));
  }

  /// Cells centered on the sample nodes with exact masses.
  GridMeasure cell_measure() const { return resample(x0_ - 0.5 * dx_, dx_, rho_.size()); }

 private:
  double node(std::ptrdiff_t j) const {
    const auto n = static_cast<std::ptrdiff_t>(rho_.size());
    j %= n;
    if (j < 0) j += n;
    return rho_[static_cast<std::size_t>(j)];
  }

  std::pair<std::size_t, double> locate(double y) const {
    const double s = (y - x0_) / dx_;
    auto j = static_cast<std::size_t>(std::floor(s));
    j = std::min(j, rho_.size() - 1);
    return {j, std::clamp(s - static_cast<double>(j), 0.0, 1.0)};
  }

  double partial(std::size_t j, double u0, double u1) const {
    if (u1 <= u0) return 0.0;
    if (u0 == 0.0 && u1 == 1.0) return cell_[j];
    const auto w = detail::LagrangeCell::instance().weights(u0, u1);
    double s = 0.0;
    for (int k = 0; k < detail::LagrangeCell::kPoints; ++k)
      s += w[static_cast<std::size_t>(k)] *
           node(static_cast<std::ptrdiff_t>(j) + detail::LagrangeCell::kFirst + k);
    return s * dx_;
  }

  double t_;
  double x0_;
  double dx_;
  std::vector<double> rho_;
  std::vector<double> cell_;
  std::vector<double> before_;
  std::vector<double> after_;
  double raw_total_ = 0.0;
};

}  // namespace causal
