#pragma once

// Scalar wave packets: initial-state families with closed-form momentum
// amplitudes, dispersion relations, and spectral evolution
//
//   psi(t, x) = (2 pi)^{-1/2} \int psihat0(p) exp(-i E(p) t + i p x) dp
//
// on a periodic grid. Momentum samples sit at half-integer multiples of
// dp = 2 pi / L so that p = 0 is straddled, never hit.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <sstream>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "causal/error.hpp"
#include "causal/fft.hpp"
#include "causal/mass_profile.hpp"
#include "causal/spacetime.hpp"

namespace causal {

using complex = std::complex<double>;

// ---------------------------------------------------------------- families

struct Gaussian {
  double d = 1.0;
};
struct Sech {
  double alpha = 1.0;
};
struct SincSech {
  double alpha = 0.0;
};
struct SincPower {
  int n = 1;
  double p_m = 1.0;
};
struct Box {
  double d = 1.0;
};

using Profile = std::variant<Gaussian, Sech, SincSech, SincPower, Box>;

/// psi0(x) = exp(i boost x) phi(x / scale) / sqrt(scale), phi one of the
/// unit-norm even profiles above.
struct StateFamily {
  Profile profile = Gaussian{};
  double boost = 0.0;
  double scale = 1.0;

  static StateFamily gaussian(double d) { return make(Gaussian{d}); }
  static StateFamily sech(double alpha) { return make(Sech{alpha}); }
  static StateFamily sinc_sech(double alpha) { return make(SincSech{alpha}); }
  static StateFamily sinc_power(int n, double p_m) { return make(SincPower{n, p_m}); }
  static StateFamily box(double d) { return make(Box{d}); }

  StateFamily boosted(double p0) const {
    StateFamily f = *this;
    f.boost = p0;
    return f;
  }

  /// psi0(x) -> psi0(x / s) / sqrt(s), boost included.
  StateFamily dilated(double s) const {
    detail::require(s > 0.0 && std::isfinite(s), "StateFamily::dilated: factor must be positive");
    StateFamily f = *this;
    f.scale *= s;
    f.boost /= s;
    return f;
  }

  void validate() const {
    detail::require(std::isfinite(boost), "StateFamily: non-finite boost");
    detail::require(scale > 0.0 && std::isfinite(scale), "StateFamily: scale must be positive");
    std::visit(
        [](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, Gaussian> || std::is_same_v<T, Box>) {
            detail::require(p.d > 0.0 && std::isfinite(p.d), "StateFamily: d must be positive");
          } else if constexpr (std::is_same_v<T, Sech>) {
            detail::require(p.alpha > 0.0 && std::isfinite(p.alpha),
                            "StateFamily: sech alpha must be positive");
          } else if constexpr (std::is_same_v<T, SincSech>) {
            detail::require(p.alpha >= 0.0 && std::isfinite(p.alpha),
                            "StateFamily: sinc_sech alpha must be nonnegative");
          } else {
            detail::require(p.n >= 1 && p.n <= 12, "StateFamily: sinc_power n must be in 1..12");
            detail::require(p.p_m > 0.0 && std::isfinite(p.p_m),
                            "StateFamily: sinc_power p_m must be positive");
          }
        },
        profile);
  }

  bool compact_support() const { return std::holds_alternative<Box>(profile); }

  /// Support of the initial density when compact.
  SpatialRegion support() const {
    detail::require(compact_support(), "StateFamily: support is not compact");
    const double d = std::get<Box>(profile).d * scale;
    return SpatialRegion::symmetric(d);
  }

  std::string name() const {
    std::ostringstream os;
    os.precision(17);
    std::visit(
        [&](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, Gaussian>) os << "gaussian:d=" << p.d;
          else if constexpr (std::is_same_v<T, Sech>) os << "sech:alpha=" << p.alpha;
          else if constexpr (std::is_same_v<T, SincSech>) os << "sinc_sech:alpha=" << p.alpha;
          else if constexpr (std::is_same_v<T, SincPower>) os << "sinc_power:n=" << p.n << ",p_m=" << p.p_m;
          else os << "box:d=" << p.d;
        },
        profile);
    if (boost != 0.0) os << ",boost=" << boost;
    if (scale != 1.0) os << ",scale=" << scale;
    return os.str();
  }

 private:
  static StateFamily make(Profile p) {
    StateFamily f;
    f.profile = p;
    f.validate();
    return f;
  }
};

// ------------------------------------------------------------- dispersion

struct Dispersion {
  enum class Kind { Relativistic, Massless, NonRelativistic };
  Kind kind = Kind::Relativistic;
  double m = 1.0;

  static Dispersion relativistic(double m) { return make(Kind::Relativistic, m); }
  static Dispersion massless() { return make(Kind::Massless, 0.0); }
  static Dispersion nonrelativistic(double m) { return make(Kind::NonRelativistic, m); }

  void validate() const {
    if (kind != Kind::Massless)
      detail::require(m > 0.0 && std::isfinite(m), "Dispersion: mass must be positive");
  }

  double energy(double p) const noexcept {
    switch (kind) {
      case Kind::Relativistic: return std::hypot(p, m);
      case Kind::Massless: return std::abs(p);
      case Kind::NonRelativistic: return 0.5 * p * p / m;
    }
    return 0.0;
  }

  std::string name() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind) {
      case Kind::Relativistic: os << "relativistic:m=" << m; break;
      case Kind::Massless: os << "massless"; break;
      case Kind::NonRelativistic: os << "nonrelativistic:m=" << m; break;
    }
    return os.str();
  }

 private:
  static Dispersion make(Kind k, double m) {
    Dispersion d{k, m};
    d.validate();
    return d;
  }
};

// --------------------------------------------------------- special helpers

namespace detail {

/// gd(u1) - gd(u0) for the Gudermannian gd(u) = 2 atan(tanh(u / 2)),
/// without cancellation when both arguments sit far in the same tail.
inline double gudermannian_difference(double u1, double u0) {
  if (u0 >= 0.0) return 2.0 * (std::atan(std::exp(-u0)) - std::atan(std::exp(-u1)));
  if (u1 <= 0.0) return 2.0 * (std::atan(std::exp(u1)) - std::atan(std::exp(u0)));
  return 2.0 * (std::atan(std::tanh(0.5 * u1)) - std::atan(std::tanh(0.5 * u0)));
}

/// Centered cardinal B-spline of order n (n-fold convolution of the unit box).
inline double cardinal_bspline(int n, double u) {
  const double half = 0.5 * n;
  if (std::abs(u) >= half) return std::abs(u) == half && n == 1 ? 0.5 : 0.0;
  if (n == 1) return 1.0;
  long double sum = 0.0L;
  long double binom = 1.0L;
  long double fact = 1.0L;
  for (int k = 1; k < n; ++k) fact *= k;
  for (int k = 0; k <= n; ++k) {
    const long double s = static_cast<long double>(u) + half - k;
    if (s > 0.0L) sum += ((k % 2) ? -binom : binom) * std::pow(s, n - 1);
    binom = binom * (n - k) / (k + 1);
  }
  return static_cast<double>(std::max(sum / fact, 0.0L));
}

inline double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

}  // namespace detail

// ------------------------------------------------------ momentum amplitude

/// Closed-form unit-norm psihat0(p) of a StateFamily.
class MomentumAmplitude {
 public:
  explicit MomentumAmplitude(StateFamily family) : family_(std::move(family)) {
    family_.validate();
    if (const auto* s = std::get_if<SincSech>(&family_.profile); s && s->alpha > 0.0) {
      const double alpha = s->alpha;
      auto g2 = [alpha](double p) {
        const double g = unnormalized_sinc_sech(alpha, p);
        return g * g;
      };
      using boost::math::quadrature::gauss_kronrod;
      const double tail = 1.0 + alpha / std::numbers::pi * 40.0;
      const double total = 2.0 * (gauss_kronrod<double, 61>::integrate(g2, 0.0, 1.0, 15, 1e-15) +
                                  gauss_kronrod<double, 61>::integrate(g2, 1.0, tail, 15, 1e-15));
      sinc_sech_norm_ = 1.0 / std::sqrt(total);
    } else {
      sinc_sech_norm_ = 1.0 / std::sqrt(std::numbers::pi);
    }
  }

  const StateFamily& family() const noexcept { return family_; }

  complex operator()(double p) const {
    const double s = family_.scale;
    return complex(std::sqrt(s) * base(s * (p - family_.boost)), 0.0);
  }

  /// Initial position amplitude psi0(x).
  complex position(double x) const {
    const double s = family_.scale;
    const double v = base_position(x / s) / std::sqrt(s);
    return family_.boost == 0.0 ? complex(v, 0.0) : v * std::polar(1.0, family_.boost * x);
  }

  /// P with at most `tol` of |psihat0|^2 outside [boost - P, boost + P].
  double half_extent(double tol) const {
    return std::visit(
               [&](const auto& q) -> double {
                 using T = std::decay_t<decltype(q)>;
                 if constexpr (std::is_same_v<T, Gaussian>) {
                   return boost::math::erfc_inv(tol) / std::sqrt(q.d);
                 } else if constexpr (std::is_same_v<T, Sech>) {
                   return q.alpha / std::numbers::pi * std::log(2.0 / tol);
                 } else if constexpr (std::is_same_v<T, SincSech>) {
                   return 1.0 + q.alpha / std::numbers::pi * std::log(4.0 / tol);
                 } else if constexpr (std::is_same_v<T, SincPower>) {
                   return q.n * q.p_m;
                 } else {
                   return 2.0 / (std::numbers::pi * q.d * tol);
                 }
               },
               family_.profile) /
           family_.scale;
  }

  /// Max |p| carrying more than `tol` of the momentum mass.
  double extent(double tol) const { return half_extent(tol) + std::abs(family_.boost); }

  /// X with at most `tol` of the initial density outside [-X, X].
  double position_extent(double tol) const {
    return std::visit(
               [&](const auto& q) -> double {
                 using T = std::decay_t<decltype(q)>;
                 const double pi = std::numbers::pi;
                 if constexpr (std::is_same_v<T, Gaussian>) {
                   return std::sqrt(q.d) * boost::math::erfc_inv(tol);
                 } else if constexpr (std::is_same_v<T, Sech>) {
                   return std::log(2.0 / tol) / (2.0 * q.alpha);
                 } else if constexpr (std::is_same_v<T, SincSech>) {
                   if (q.alpha == 0.0) return 1.0 / (pi * tol);
                   return std::max(1.0, std::log(2.0 / tol) / (2.0 * q.alpha));
                 } else if constexpr (std::is_same_v<T, SincPower>) {
                   // density ~ N^2 <sin^{2n}> / (p x)^{2n}
                   const int n = q.n;
                   const double m2n = detail::cardinal_bspline(2 * n, 0.0);
                   const double norm2 = q.p_m / (pi * m2n);
                   double mean = 1.0;
                   for (int k = 1; k <= n; ++k) mean *= (n + k) / (4.0 * k);
                   const double c = 2.0 * norm2 * mean /
                                    (std::pow(q.p_m, 2 * n) * (2 * n - 1) * tol);
                   return std::max(1.0 / q.p_m, std::pow(c, 1.0 / (2 * n - 1)));
                 } else {
                   return q.d;
                 }
               },
               family_.profile) *
           family_.scale;
  }

  /// True when the position density decays only like a power of |x|.
  bool power_law_tails() const {
    if (const auto* s = std::get_if<SincSech>(&family_.profile)) return s->alpha == 0.0;
    return std::holds_alternative<SincPower>(family_.profile);
  }

  /// Largest |psihat0(p)|^2; bounds the kink-induced massless tails.
  double peak_density() const {
    const double v = std::abs((*this)(family_.boost));
    return v * v;
  }

 private:
  static double unnormalized_sinc_sech(double alpha, double p) {
    const double c = std::numbers::pi / (2.0 * alpha);
    return detail::gudermannian_difference(c * (p + 1.0), c * (p - 1.0)) /
           std::sqrt(2.0 * std::numbers::pi);
  }

  double base(double q) const {
    const double pi = std::numbers::pi;
    return std::visit(
        [&](const auto& f) -> double {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, Gaussian>) {
            return std::pow(f.d / pi, 0.25) * std::exp(-0.5 * f.d * q * q);
          } else if constexpr (std::is_same_v<T, Sech>) {
            return std::sqrt(pi / (4.0 * f.alpha)) / std::cosh(pi * q / (2.0 * f.alpha));
          } else if constexpr (std::is_same_v<T, SincSech>) {
            if (f.alpha == 0.0) {
              const double a = std::abs(q);
              return a < 1.0 ? std::sqrt(0.5) : (a == 1.0 ? 0.5 * std::sqrt(0.5) : 0.0);
            }
            return sinc_sech_norm_ * unnormalized_sinc_sech(f.alpha, q);
          } else if constexpr (std::is_same_v<T, SincPower>) {
            const double m2n = detail::cardinal_bspline(2 * f.n, 0.0);
            return detail::cardinal_bspline(f.n, q / (2.0 * f.p_m)) / std::sqrt(2.0 * f.p_m * m2n);
          } else {
            if (q == 0.0) return std::sqrt(f.d / pi);
            return std::sin(q * f.d) / (q * std::sqrt(pi * f.d));
          }
        },
        family_.profile);
  }

  double base_position(double y) const {
    const double pi = std::numbers::pi;
    return std::visit(
        [&](const auto& f) -> double {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, Gaussian>) {
            return std::pow(pi * f.d, -0.25) * std::exp(-0.5 * y * y / f.d);
          } else if constexpr (std::is_same_v<T, Sech>) {
            return std::sqrt(0.5 * f.alpha) / std::cosh(f.alpha * y);
          } else if constexpr (std::is_same_v<T, SincSech>) {
            return sinc_sech_norm_ * detail::sinc(y) / std::cosh(f.alpha * y);
          } else if constexpr (std::is_same_v<T, SincPower>) {
            const double m2n = detail::cardinal_bspline(2 * f.n, 0.0);
            return std::sqrt(f.p_m / (pi * m2n)) * std::pow(detail::sinc(f.p_m * y), f.n);
          } else {
            return std::abs(y) <= f.d ? 1.0 / std::sqrt(2.0 * f.d) : 0.0;
          }
        },
        family_.profile);
  }

  StateFamily family_;
  double sinc_sech_norm_ = 1.0;
};

// ------------------------------------------------------------------- grids

/// Periodic grid x_j = -L/2 + j L/n with momenta p_k = (k - n/2 + 1/2) 2 pi / L.
struct GridSpec {
  std::size_t n = std::size_t{1} << 18;
  double length = 64.0;

  double dx() const noexcept { return length / static_cast<double>(n); }
  double dp() const noexcept { return 2.0 * std::numbers::pi / length; }
  double x(std::size_t j) const noexcept { return -0.5 * length + static_cast<double>(j) * dx(); }
  double p(std::size_t k) const noexcept {
    return (static_cast<double>(k) - 0.5 * static_cast<double>(n) + 0.5) * dp();
  }
  double p_nyquist() const noexcept { return std::numbers::pi / dx(); }

  void validate() const {
    detail::require(n >= 16 && (n & (n - 1)) == 0, "GridSpec: n must be a power of two >= 16");
    detail::require(length > 0.0 && std::isfinite(length), "GridSpec: length must be positive");
  }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Truncation budgets checked after every evolution.
struct Budget {
  double tail = 1e-13;      // density mass in the outer band of the domain
  double momentum = 1e-13;  // momentum mass beyond half the Nyquist momentum
};

inline Budget default_budget(const StateFamily& family, const Dispersion& disp) {
  Budget b;
  std::visit(
      [&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, SincPower>) {
          b.tail = f.n == 1 ? 1e-5 : 1e-10;
        } else if constexpr (std::is_same_v<T, SincSech>) {
          if (f.alpha == 0.0) b.tail = 1e-5;
        } else if constexpr (std::is_same_v<T, Box>) {
          b.tail = 1e-10;
          b.momentum = 1e-4;
        }
      },
      family.profile);
  if (disp.kind == Dispersion::Kind::Massless) b.tail = std::max(b.tail, 1e-8);
  if (!std::holds_alternative<Box>(family.profile)) b.momentum = b.tail;
  return b;
}

inline constexpr std::size_t kDefaultGridPoints = std::size_t{1} << 18;
inline constexpr std::size_t kMaxGridPoints = std::size_t{1} << 20;
/// Fraction of the half-domain beyond which the density must be negligible.
inline constexpr double kEdgeBand = 0.8;

/// Domain half-width holding all but `budget.tail` of the density up to t_max.
inline double required_half_width(const MomentumAmplitude& amp, const Dispersion& disp,
                                  double t_max, const Budget& budget) {
  const double tol = budget.tail;
  const double x0 = amp.position_extent(0.25 * tol);
  switch (disp.kind) {
    case Dispersion::Kind::Relativistic: {
      const double xm = std::log(1.0 / tol) / (2.0 * disp.m);
      return std::max(x0, xm) + t_max;
    }
    case Dispersion::Kind::Massless: {
      const double a = amp.peak_density();
      const double xk = std::cbrt(4.0 * a * t_max * t_max / (3.0 * std::numbers::pi * tol));
      return std::max(x0, xk) + t_max;
    }
    case Dispersion::Kind::NonRelativistic: {
      const double v = amp.extent(0.25 * tol) / disp.m;
      return x0 + t_max * v;
    }
  }
  return x0;
}

/// Grid meeting the truncation budget up to time t_max: the domain holds the
/// evolved density, the spacing resolves twice the momentum extent.
inline GridSpec choose_grid(const StateFamily& family, const Dispersion& disp, double t_max,
                            const Budget& budget, std::size_t n_min = kDefaultGridPoints,
                            std::size_t n_max = kMaxGridPoints) {
  detail::require(t_max >= 0.0 && std::isfinite(t_max), "choose_grid: t_max must be >= 0");
  const MomentumAmplitude amp(family);
  const double half = required_half_width(amp, disp, t_max, budget) / kEdgeBand;
  const double length = 2.0 * half;
  const double p_max = amp.extent(budget.momentum);
  const double dx_max = std::numbers::pi / (2.0 * p_max);
  std::size_t n = n_min;
  while (n < n_max && length / static_cast<double>(n) > dx_max) n <<= 1;
  GridSpec g{n, length};
  g.validate();
  return g;
}

// --------------------------------------------------------------- evolution

struct EvolutionDiagnostics {
  double renormalization = 0.0;     // |1 - sum |psi|^2 dx|
  double edge_mass = 0.0;           // density mass beyond kEdgeBand of the half-domain
  double spectral_edge_mass = 0.0;  // momentum mass beyond half the Nyquist momentum
};

struct WavePacket {
  GridSpec grid;
  double t = 0.0;
  std::vector<complex> psi;
  MomentumAmplitude momentum_amplitude;
  EvolutionDiagnostics diagnostics;

  double x0() const noexcept { return grid.x(0); }
  double dx() const noexcept { return grid.dx(); }
  double x(std::size_t j) const noexcept { return grid.x(j); }
  std::size_t size() const noexcept { return psi.size(); }
};

/// Spectral propagator for one (family, dispersion, grid). Holds an FFT
/// workspace, so an instance must not be shared between threads.
class Evolver {
 public:
  Evolver(const StateFamily& family, const Dispersion& disp, GridSpec grid,
          Budget budget = {}, bool enforce_budget = true)
      : amp_(family), disp_(disp), grid_(grid), budget_(budget), enforce_(enforce_budget),
        ws_((grid.validate(), grid.n)) {
    disp_.validate();
    const std::size_t n = grid_.n;
    const double dp = grid_.dp();
    const double weight = dp / std::sqrt(2.0 * std::numbers::pi);
    const double p_half = 0.5 * grid_.p_nyquist();
    coeff_.resize(n);
    energy_.resize(n);
    long double edge = 0.0L;
    for (std::size_t k = 0; k < n; ++k) {
      const double p = grid_.p(k);
      const complex a = amp_(p);
      if (std::abs(p) > p_half) edge += std::norm(a) * dp;
      coeff_[k] = ((k & 1) ? -weight : weight) * a;
      energy_[k] = disp_.energy(p);
    }
    spectral_edge_ = static_cast<double>(edge);
    if (enforce_ && spectral_edge_ > budget_.momentum) {
      std::ostringstream os;
      os << "insufficient resolution: momentum mass " << spectral_edge_
         << " beyond half the Nyquist momentum exceeds " << budget_.momentum;
      throw BudgetError(os.str());
    }
    // Mass beyond Nyquist aliases back and is invisible to the edge sum.
    if (enforce_ && amp_.extent(budget_.momentum) > grid_.p_nyquist()) {
      std::ostringstream os;
      os << "insufficient resolution: momentum extent " << amp_.extent(budget_.momentum)
         << " exceeds the Nyquist momentum " << grid_.p_nyquist();
      throw BudgetError(os.str());
    }
    // e^{i p_k x_j} = (-1)^k e^{2 pi i kj/n} (-1)^j e^{i pi j/n} i^{n-1}
    static constexpr complex kPowersOfI[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const complex c = kPowersOfI[(n - 1) % 4];
    post_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double phase = std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
      post_[j] = ((j & 1) ? -c : c) * std::polar(1.0, phase);
    }
  }

  const GridSpec& grid() const noexcept { return grid_; }
  const Budget& budget() const noexcept { return budget_; }
  const MomentumAmplitude& amplitude() const noexcept { return amp_; }
  const Dispersion& dispersion() const noexcept { return disp_; }
  const EvolutionDiagnostics& last_diagnostics() const noexcept { return diag_; }

  WavePacket evolve(double t) {
    synthesize(t);
    const auto data = ws_.data();
    std::vector<complex> psi(data.begin(), data.end());
    const double inv = 1.0 / std::sqrt(1.0 - signed_renorm_);
    for (auto& v : psi) v *= inv;
    return WavePacket{grid_, t, std::move(psi), amp_, diag_};
  }

  /// Cumulative density of psi(t, .) on the grid nodes.
  MassProfile profile(double t) {
    synthesize(t);
    const auto data = ws_.data();
    std::vector<double> rho(data.size());
    for (std::size_t j = 0; j < rho.size(); ++j) rho[j] = std::norm(data[j]);
    return MassProfile(t, grid_.x(0), grid_.dx(), std::move(rho));
  }

 private:
  void synthesize(double t) {
    detail::require(std::isfinite(t), "evolve: non-finite time");
    auto data = ws_.data();
    const std::size_t n = grid_.n;
    for (std::size_t k = 0; k < n; ++k) data[k] = coeff_[k] * std::polar(1.0, -energy_[k] * t);
    ws_.backward();
    const double dx = grid_.dx();
    const double edge_x = kEdgeBand * 0.5 * grid_.length;
    long double total = 0.0L;
    long double edge = 0.0L;
    for (std::size_t j = 0; j < n; ++j) {
      data[j] *= post_[j];
      const double r = std::norm(data[j]) * dx;
      total += r;
      if (std::abs(grid_.x(j)) > edge_x) edge += r;
    }
    signed_renorm_ = static_cast<double>(1.0L - total);
    diag_.renormalization = std::abs(signed_renorm_);
    diag_.edge_mass = static_cast<double>(edge / total);
    diag_.spectral_edge_mass = spectral_edge_;
    if (enforce_ && diag_.edge_mass > budget_.tail) {
      std::ostringstream os;
      os << "truncated tail mass " << diag_.edge_mass << " at t=" << t << " exceeds budget "
         << budget_.tail << " (domain length " << grid_.length << ")";
      throw BudgetError(os.str());
    }
  }

  MomentumAmplitude amp_;
  Dispersion disp_;
  GridSpec grid_;
  Budget budget_;
  bool enforce_;
  FourierWorkspace ws_;
  std::vector<complex> coeff_;
  std::vector<double> energy_;
  std::vector<complex> post_;
  double spectral_edge_ = 0.0;
  double signed_renorm_ = 0.0;
  EvolutionDiagnostics diag_;
};

inline WavePacket evolve(const StateFamily& family, const Dispersion& disp, double t,
                         const GridSpec& grid) {
  return Evolver(family, disp, grid, default_budget(family, disp)).evolve(t);
}

/// Grid chosen automatically for time t.
inline WavePacket evolve(const StateFamily& family, const Dispersion& disp, double t) {
  const Budget b = default_budget(family, disp);
  return Evolver(family, disp, choose_grid(family, disp, t, b), b).evolve(t);
}

/// Cells centered on the nodes with w_i = |psi_i|^2 dx.
inline GridMeasure density(const WavePacket& packet, double* renormalization = nullptr) {
  std::vector<double> w(packet.size());
  for (std::size_t j = 0; j < w.size(); ++j) w[j] = std::norm(packet.psi[j]) * packet.dx();
  return GridMeasure::normalized(packet.t, packet.x0() - 0.5 * packet.dx(), packet.dx(),
                                 std::move(w), renormalization);
}

/// High-order cumulative density of a packet.
inline MassProfile mass_profile(const WavePacket& packet) {
  std::vector<double> rho(packet.size());
  for (std::size_t j = 0; j < rho.size(); ++j) rho[j] = std::norm(packet.psi[j]);
  return MassProfile(packet.t, packet.x0(), packet.dx(), std::move(rho));
}

/// Free-particle mass of [-a-t, a+t] at time t for the initial state
/// (2/pi)^{1/4} exp(-x^2), i.e. gaussian d = 1/2.
inline double nonrel_cone_mass(double a, double t, double m) {
  detail::require(a > 0.0 && t >= 0.0 && m > 0.0, "nonrel_cone_mass: need a > 0, t >= 0, m > 0");
  return std::erf(std::sqrt(2.0) * m * (a + t) / std::sqrt(m * m + 4.0 * t * t));
}

/// erf(sqrt(2) a) - nonrel_cone_mass(a, t, m), written with erfc so that
/// values far below double resolution of 1 stay accurate.
inline double nonrel_deficiency(double a, double t, double m) {
  detail::require(a > 0.0 && t >= 0.0 && m > 0.0, "nonrel_deficiency: need a > 0, t >= 0, m > 0");
  return std::erfc(std::sqrt(2.0) * m * (a + t) / std::sqrt(m * m + 4.0 * t * t)) - std::erfc(std::sqrt(2.0) * a);
}

}  // namespace causal
