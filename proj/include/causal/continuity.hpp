#pragma once

// Checks on sampled density/flux fields rho(t, x), j(t, x): the continuity
// equation d_t rho + d_x j = 0, the causal-current condition |j| <= rho and
// the speed bound |v| <= 1 with v = j / rho (v = 0 where rho = 0).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <vector>

#include "causal/error.hpp"
#include "causal/spacetime.hpp"

namespace causal::continuity {

struct FlowSample {
  double t = 0.0;
  double x = 0.0;
  double rho = 0.0;
  double j = 0.0;
};

/// rho and j on a tensor grid of strictly increasing times and positions,
/// stored time-major.
class SampledFlow {
 public:
  SampledFlow(std::vector<double> t, std::vector<double> x, std::vector<double> rho, std::vector<double> j)
      : t_(std::move(t)), x_(std::move(x)), rho_(std::move(rho)), j_(std::move(j)) {
    causal::detail::require(!t_.empty() && !x_.empty(), "SampledFlow: empty grid");
    causal::detail::require(rho_.size() == t_.size() * x_.size() && j_.size() == rho_.size(),
                            "SampledFlow: sample count does not match the grid");
    for (std::size_t i = 1; i < t_.size(); ++i)
      causal::detail::require(t_[i - 1] < t_[i], "SampledFlow: times must increase");
    for (std::size_t i = 1; i < x_.size(); ++i)
      causal::detail::require(x_[i - 1] < x_[i], "SampledFlow: positions must increase");
    for (std::size_t i = 0; i < rho_.size(); ++i) {
      causal::detail::require(std::isfinite(rho_[i]) && std::isfinite(j_[i]), "SampledFlow: non-finite sample");
      causal::detail::require(rho_[i] >= 0.0, "SampledFlow: negative density");
    }
  }

  /// Builds the grid from unordered (t, x, rho, j) rows; every (t, x) pair of
  /// the tensor grid must appear exactly once.
  static SampledFlow from_samples(const std::vector<FlowSample>& rows) {
    std::map<double, std::size_t> ti, xi;
    for (const auto& r : rows) {
      ti.emplace(r.t, 0);
      xi.emplace(r.x, 0);
    }
    std::vector<double> t, x;
    for (auto& [v, idx] : ti) {
      idx = t.size();
      t.push_back(v);
    }
    for (auto& [v, idx] : xi) {
      idx = x.size();
      x.push_back(v);
    }
    causal::detail::require(rows.size() == t.size() * x.size(),
                            "SampledFlow: samples do not form a complete (t, x) grid");
    std::vector<double> rho(rows.size()), j(rows.size());
    std::vector<char> seen(rows.size(), 0);
    for (const auto& r : rows) {
      const std::size_t k = ti[r.t] * x.size() + xi[r.x];
      causal::detail::require(!seen[k], "SampledFlow: duplicate (t, x) sample");
      seen[k] = 1;
      rho[k] = r.rho;
      j[k] = r.j;
    }
    return SampledFlow(std::move(t), std::move(x), std::move(rho), std::move(j));
  }

  std::size_t nt() const noexcept { return t_.size(); }
  std::size_t nx() const noexcept { return x_.size(); }
  const std::vector<double>& t() const noexcept { return t_; }
  const std::vector<double>& x() const noexcept { return x_; }
  double rho(std::size_t i, std::size_t k) const noexcept { return rho_[i * x_.size() + k]; }
  double j(std::size_t i, std::size_t k) const noexcept { return j_[i * x_.size() + k]; }

 private:
  std::vector<double> t_, x_, rho_, j_;
};

struct CurrentCheck {
  bool ok = true;
  double worst_ratio = 0.0;          // max |j| / rho over rho > 0
  std::size_t zero_density_flux = 0;  // samples with rho = 0 but j != 0
};

inline constexpr double kCausalTolerance = 1e-12;

inline CurrentCheck causal_current_check(const SampledFlow& f, double tol = kCausalTolerance) {
  CurrentCheck c;
  for (std::size_t i = 0; i < f.nt(); ++i)
    for (std::size_t k = 0; k < f.nx(); ++k) {
      const double r = f.rho(i, k), j = f.j(i, k);
      if (r > 0.0) c.worst_ratio = std::max(c.worst_ratio, std::abs(j) / r);
      else if (j != 0.0) ++c.zero_density_flux;
    }
  c.ok = c.worst_ratio <= 1.0 + tol && c.zero_density_flux == 0;
  return c;
}

/// Max over interior points of the centered residual between consecutive
/// time slices: (rho_{n+1} - rho_n)/dt + d_x of the time-averaged j.
inline double continuity_residual_check(const SampledFlow& f) {
  causal::detail::require(f.nt() >= 2 && f.nx() >= 3,
                          "continuity_residual_check: need >= 2 times and >= 3 positions");
  double worst = 0.0;
  const auto& t = f.t();
  const auto& x = f.x();
  for (std::size_t i = 0; i + 1 < f.nt(); ++i) {
    const double dt = t[i + 1] - t[i];
    for (std::size_t k = 1; k + 1 < f.nx(); ++k) {
      const double jp = 0.5 * (f.j(i, k + 1) + f.j(i + 1, k + 1));
      const double jm = 0.5 * (f.j(i, k - 1) + f.j(i + 1, k - 1));
      const double r = (f.rho(i + 1, k) - f.rho(i, k)) / dt + (jp - jm) / (x[k + 1] - x[k - 1]);
      worst = std::max(worst, std::abs(r));
    }
  }
  return worst;
}

struct SpeedCheck {
  bool ok = true;
  double max_speed = 0.0;
};

inline SpeedCheck velocity_bound_check(const SampledFlow& f, double tol = kCausalTolerance) {
  SpeedCheck s;
  for (std::size_t i = 0; i < f.nt(); ++i)
    for (std::size_t k = 0; k < f.nx(); ++k) {
      const double r = f.rho(i, k);
      const double v = r > 0.0 ? f.j(i, k) / r : 0.0;
      s.max_speed = std::max(s.max_speed, std::abs(v));
    }
  s.ok = s.max_speed <= 1.0 + tol;
  return s;
}

/// Time slice i as a cell measure (cells centered on uniform x samples).
inline GridMeasure slice_measure(const SampledFlow& f, std::size_t i) {
  causal::detail::require(i < f.nt() && f.nx() >= 2, "slice_measure: bad slice");
  const auto& x = f.x();
  const double dx = (x.back() - x.front()) / static_cast<double>(f.nx() - 1);
  std::vector<double> w(f.nx());
  for (std::size_t k = 0; k < f.nx(); ++k) w[k] = f.rho(i, k) * dx;
  return GridMeasure::normalized(f.t()[i], x.front() - 0.5 * dx, dx, std::move(w));
}

}  // namespace causal::continuity
