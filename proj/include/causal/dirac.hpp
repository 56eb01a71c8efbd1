#pragma once

// Free Dirac equation in 1+1 dimensions with gamma^0 = sigma_z and
// gamma^1 = i sigma_y, so that i d/dt psi = H psi with H(p) = p sigma_x + m sigma_z.
// Each momentum mode is propagated by the exact 2x2 exponential
//
//   exp(-i H t) = cos(E t) I - i sin(E t) H / E,   E = sqrt(p^2 + m^2).
//
// rho = |psi_1|^2 + |psi_2|^2 and j = psi^dagger sigma_x psi = 2 Re(conj(psi_1) psi_2).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "causal/error.hpp"
#include "causal/fft.hpp"
#include "causal/mass_profile.hpp"
#include "causal/packets.hpp"
#include "causal/transport.hpp"

namespace causal::dirac {

struct SpinorField {
  GridSpec grid;
  double t = 0.0;
  double m = 1.0;
  std::vector<complex> psi1;
  std::vector<complex> psi2;

  static constexpr double kNormTolerance = 1e-10;

  double norm() const {
    long double s = 0.0L;
    for (std::size_t i = 0; i < psi1.size(); ++i) s += std::norm(psi1[i]) + std::norm(psi2[i]);
    return static_cast<double>(s) * grid.dx();
  }

  void validate() const {
    grid.validate();
    causal::detail::require(m >= 0.0 && std::isfinite(m), "SpinorField: mass must be >= 0");
    causal::detail::require(psi1.size() == grid.n && psi2.size() == grid.n,
                            "SpinorField: component length differs from grid size");
    causal::detail::require(std::abs(norm() - 1.0) <= kNormTolerance, "SpinorField: not unit norm");
  }

  /// Rescales to unit norm.
  void normalize() {
    const double s = 1.0 / std::sqrt(norm());
    for (auto& v : psi1) v *= s;
    for (auto& v : psi2) v *= s;
  }
};

struct CurrentField {
  double t = 0.0;
  double x0 = 0.0;  // position of sample 0
  double dx = 1.0;
  std::vector<double> rho;
  std::vector<double> j;
};

/// Largest |j| / rho over samples with rho above `floor`.
inline double max_current_ratio(const CurrentField& c, double floor = 0.0) {
  double r = 0.0;
  for (std::size_t i = 0; i < c.rho.size(); ++i)
    if (c.rho[i] > floor) r = std::max(r, std::abs(c.j[i]) / c.rho[i]);
  return r;
}

/// Pointwise density and current. Throws std::logic_error if |j| > rho beyond
/// rounding, which can only come from a bug.
inline CurrentField current(const SpinorField& f) {
  CurrentField c;
  c.t = f.t;
  c.x0 = f.grid.x(0);
  c.dx = f.grid.dx();
  c.rho.resize(f.psi1.size());
  c.j.resize(f.psi1.size());
  double rho_max = 0.0;
  for (std::size_t i = 0; i < f.psi1.size(); ++i) {
    c.rho[i] = std::norm(f.psi1[i]) + std::norm(f.psi2[i]);
    c.j[i] = 2.0 * std::real(std::conj(f.psi1[i]) * f.psi2[i]);
    rho_max = std::max(rho_max, c.rho[i]);
  }
  for (std::size_t i = 0; i < c.rho.size(); ++i) {
    if (std::abs(c.j[i]) > c.rho[i] * (1.0 + 1e-12) + 1e-300) {
      std::ostringstream os;
      os << "current: |j| > rho at sample " << i << " (j=" << c.j[i] << ", rho=" << c.rho[i] << ")";
      throw std::logic_error(os.str());
    }
  }
  return c;
}

/// Exact per-mode propagator for one initial spinor on a periodic grid.
class DiracEvolver {
 public:
  /// Relative momentum mass allowed beyond half the Nyquist momentum.
  static constexpr double kSpectralBudget = 1e-10;

  explicit DiracEvolver(const SpinorField& initial, double spectral_budget = kSpectralBudget)
      : grid_(initial.grid), m_(initial.m), t0_(initial.t), ws_(initial.grid.n) {
    initial.validate();
    const std::size_t n = grid_.n;
    c1_ = transform(initial.psi1);
    c2_ = transform(initial.psi2);
    momentum_.resize(n);
    long double total = 0.0L, edge = 0.0L;
    const double quarter = 0.25 * static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double idx = k < n / 2 ? static_cast<double>(k) : static_cast<double>(k) - n;
      momentum_[k] = idx * grid_.dp();
      const double w = std::norm(c1_[k]) + std::norm(c2_[k]);
      total += w;
      if (std::abs(idx) > quarter) edge += w;
    }
    spectral_edge_ = static_cast<double>(edge / total);
    if (spectral_edge_ > spectral_budget) {
      std::ostringstream os;
      os << "dirac: insufficient resolution, momentum mass " << spectral_edge_
         << " beyond half the Nyquist momentum";
      throw BudgetError(os.str());
    }
  }

  double spectral_edge_mass() const noexcept { return spectral_edge_; }
  const GridSpec& grid() const noexcept { return grid_; }
  double mass() const noexcept { return m_; }

  SpinorField evolve(double t) {
    causal::detail::require(std::isfinite(t), "evolve_dirac: non-finite time");
    const double tau = t - t0_;
    const std::size_t n = grid_.n;
    std::vector<complex> a(n), b(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double p = momentum_[k];
      const double e = std::hypot(p, m_);
      const double c = std::cos(e * tau);
      const double s_over_e = e > 0.0 ? std::sin(e * tau) / e : tau;
      const complex mi(0.0, -s_over_e);
      a[k] = c * c1_[k] + mi * (m_ * c1_[k] + p * c2_[k]);
      b[k] = c * c2_[k] + mi * (p * c1_[k] - m_ * c2_[k]);
    }
    SpinorField out{grid_, t, m_, inverse(a), inverse(b)};
    return out;
  }

 private:
  std::vector<complex> transform(const std::vector<complex>& v) {
    auto d = ws_.data();
    std::copy(v.begin(), v.end(), d.begin());
    ws_.forward();
    return {d.begin(), d.end()};
  }

  std::vector<complex> inverse(const std::vector<complex>& v) {
    auto d = ws_.data();
    std::copy(v.begin(), v.end(), d.begin());
    ws_.backward();
    const double s = 1.0 / static_cast<double>(grid_.n);
    std::vector<complex> out(d.begin(), d.end());
    for (auto& z : out) z *= s;
    return out;
  }

  GridSpec grid_;
  double m_;
  double t0_;
  FourierWorkspace ws_;
  std::vector<complex> c1_, c2_;
  std::vector<double> momentum_;
  double spectral_edge_ = 0.0;
};

inline SpinorField evolve_dirac(const SpinorField& initial, double t) {
  return DiracEvolver(initial).evolve(t);
}

/// max over interior samples of |(rho_b - rho_a)/dt + d_x j| with j at the
/// time midpoint and a central difference in x.
inline double continuity_residual(const CurrentField& a, const CurrentField& b) {
  causal::detail::require(a.rho.size() == b.rho.size() && a.rho.size() >= 3,
                          "continuity_residual: snapshots on different grids");
  const double dt = b.t - a.t;
  causal::detail::require(dt > 0.0, "continuity_residual: snapshots must be time ordered");
  const double inv2dx = 0.5 / a.dx;
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < a.rho.size(); ++i) {
    const double drho = (b.rho[i] - a.rho[i]) / dt;
    const double jp = 0.5 * (a.j[i + 1] + b.j[i + 1]);
    const double jm = 0.5 * (a.j[i - 1] + b.j[i - 1]);
    worst = std::max(worst, std::abs(drho + (jp - jm) * inv2dx));
  }
  return worst;
}

inline double continuity_residual(const SpinorField& a, const SpinorField& b) {
  return continuity_residual(current(a), current(b));
}

// ----------------------------------------------------------------- states

/// (c1, c2) g(x) with g a boosted Gaussian of given center and width,
/// normalized on the grid.
inline SpinorField gaussian_spinor(const GridSpec& grid, double m, double center, double width,
                                   double boost, complex c1, complex c2) {
  causal::detail::require(width > 0.0, "gaussian_spinor: width must be positive");
  SpinorField f{grid, 0.0, m, std::vector<complex>(grid.n), std::vector<complex>(grid.n)};
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double y = (grid.x(i) - center) / width;
    const complex g = std::exp(-0.5 * y * y) * std::polar(1.0, boost * grid.x(i));
    f.psi1[i] = c1 * g;
    f.psi2[i] = c2 * g;
  }
  f.normalize();
  return f;
}

/// Positive (sign = +1) or negative energy plane wave with momentum
/// 2 pi k / L, an exact eigenmode on the periodic grid.
inline SpinorField plane_wave(const GridSpec& grid, double m, long k, int sign = +1) {
  const double p = 2.0 * std::numbers::pi * static_cast<double>(k) / grid.length;
  const double e = sign * std::hypot(p, m);
  // (H - e) u = 0 with H = [[m, p], [p, -m]]
  complex u1, u2;
  if (std::abs(e + m) >= std::abs(e - m)) {
    u1 = e + m;
    u2 = p;
  } else {
    u1 = p;
    u2 = e - m;
  }
  SpinorField f{grid, 0.0, m, std::vector<complex>(grid.n), std::vector<complex>(grid.n)};
  for (std::size_t i = 0; i < grid.n; ++i) {
    const complex w = std::polar(1.0, p * grid.x(i));
    f.psi1[i] = u1 * w;
    f.psi2[i] = u2 * w;
  }
  f.normalize();
  return f;
}

// -------------------------------------------------------- causality check

struct PairVerdict {
  double s = 0.0;
  double t = 0.0;
  double n_tilde = 0.0;
};

struct DiracCausalityReport {
  std::vector<PairVerdict> pairs;
  double max_n_tilde = 0.0;
  double max_current_ratio = 0.0;
  double max_norm_error = 0.0;
  bool causal = true;
};

/// Cell measure of the spinor density, cells centered on the grid nodes with
/// masses from the high-order cumulative.
inline GridMeasure density_measure(const SpinorField& f) {
  std::vector<double> rho(f.psi1.size());
  for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = std::norm(f.psi1[i]) + std::norm(f.psi2[i]);
  return MassProfile(f.t, f.grid.x(0), f.grid.dx(), std::move(rho)).cell_measure();
}

/// For every pair s <= t of `times`, the minimal acausally transported mass
/// between the discretized densities. Cell-center atoms are connected within
/// t - s + dx.
inline DiracCausalityReport dirac_causality_check(const SpinorField& initial,
                                                  const std::vector<double>& times,
                                                  double tolerance = 1e-6) {
  causal::detail::require(!times.empty(), "dirac_causality_check: no times");
  for (std::size_t i = 1; i < times.size(); ++i)
    causal::detail::require(times[i - 1] <= times[i], "dirac_causality_check: times must increase");
  DiracEvolver ev(initial);
  DiracCausalityReport rep;
  std::vector<transport::DiscreteMeasure> slices;
  slices.reserve(times.size());
  for (double t : times) {
    const auto f = ev.evolve(t);
    rep.max_norm_error = std::max(rep.max_norm_error, std::abs(f.norm() - 1.0));
    const auto c = current(f);
    double rho_max = 0.0;
    for (double r : c.rho) rho_max = std::max(rho_max, r);
    rep.max_current_ratio = std::max(rep.max_current_ratio, max_current_ratio(c, 1e-12 * rho_max));
    slices.push_back(transport::DiscreteMeasure::from_grid(density_measure(f)));
  }
  auto opt = transport::grid_options(initial.grid.dx());
  opt.solver = transport::Solver::Staircase;
  for (std::size_t a = 0; a < times.size(); ++a) {
    for (std::size_t b = a; b < times.size(); ++b) {
      const auto r = transport::max_causal_mass(slices[a], slices[b], opt);
      rep.pairs.push_back({times[a], times[b], r.n_tilde});
      rep.max_n_tilde = std::max(rep.max_n_tilde, r.n_tilde);
    }
  }
  rep.causal = rep.max_n_tilde <= tolerance;
  return rep;
}

}  // namespace causal::dirac
