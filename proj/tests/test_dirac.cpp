#include <gtest/gtest.h>

#include <random>

#include "causal/dirac.hpp"
#include "causal/quantify.hpp"

using namespace causal;
using namespace causal::dirac;

namespace {

SpinorField random_spinor(std::mt19937_64& rng, const GridSpec& g) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> width(0.6, 2.0);
  SpinorField f{g, 0.0, 1.0, std::vector<complex>(g.n), std::vector<complex>(g.n)};
  for (int bump = 0; bump < 3; ++bump) {
    const auto b = gaussian_spinor(g, 1.0, 6 * u(rng), width(rng), 2 * u(rng), {u(rng), u(rng)}, {u(rng), u(rng)});
    for (std::size_t i = 0; i < g.n; ++i) {
      f.psi1[i] += b.psi1[i];
      f.psi2[i] += b.psi2[i];
    }
  }
  f.normalize();
  return f;
}

/// Strang splitting: half steps of the mass term in position space around a
/// full step of p sigma_x in momentum space.
SpinorField split_step(const SpinorField& init, double t, std::size_t steps) {
  const auto& g = init.grid;
  const std::size_t n = g.n;
  const double dt = t / static_cast<double>(steps);
  const complex half_up = std::polar(1.0, -0.5 * init.m * dt), half_down = std::conj(half_up);
  FourierWorkspace a(n), b(n);
  auto pa = a.data(), pb = b.data();
  std::copy(init.psi1.begin(), init.psi1.end(), pa.begin());
  std::copy(init.psi2.begin(), init.psi2.end(), pb.begin());
  std::vector<double> c(n), s(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double idx = k < n / 2 ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(n);
    const double p = idx * g.dp();
    c[k] = std::cos(p * dt);
    s[k] = std::sin(p * dt);
  }
  for (std::size_t step = 0; step < steps; ++step) {
    for (std::size_t i = 0; i < n; ++i) {
      pa[i] *= half_up;
      pb[i] *= half_down;
    }
    a.forward();
    b.forward();
    for (std::size_t k = 0; k < n; ++k) {
      const complex x = pa[k], y = pb[k];
      pa[k] = c[k] * x - complex(0, s[k]) * y;
      pb[k] = c[k] * y - complex(0, s[k]) * x;
    }
    a.backward();
    b.backward();
    for (std::size_t i = 0; i < n; ++i) {
      pa[i] *= half_up / static_cast<double>(n);
      pb[i] *= half_down / static_cast<double>(n);
    }
  }
  SpinorField out{g, t, init.m, {pa.begin(), pa.end()}, {pb.begin(), pb.end()}};
  return out;
}

}  // namespace

TEST(DiracEvolve, IdentityAtTimeZero) {
  const GridSpec g{512, 40.0};
  const auto f = gaussian_spinor(g, 1.0, 0.5, 1.0, 0.3, {1, 0}, {0, 0.5});
  const auto e = evolve_dirac(f, 0.0);
  for (std::size_t i = 0; i < g.n; ++i) {
    EXPECT_NEAR(std::abs(e.psi1[i] - f.psi1[i]), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(e.psi2[i] - f.psi2[i]), 0.0, 1e-14);
  }
}

TEST(DiracEvolve, PlaneWaveEigenmodeAcquiresPhase) {
  const GridSpec g{256, 30.0};
  for (int sign : {+1, -1}) {
    const auto f = plane_wave(g, 1.0, 3, sign);
    const double p = 2 * std::numbers::pi * 3 / g.length;
    const double e = sign * std::hypot(p, 1.0);
    const double t = 2.7;
    const auto out = evolve_dirac(f, t);
    const complex phase = std::polar(1.0, -e * t);
    for (std::size_t i = 0; i < g.n; ++i) {
      EXPECT_NEAR(std::abs(out.psi1[i] - phase * f.psi1[i]), 0.0, 1e-12);
      EXPECT_NEAR(std::abs(out.psi2[i] - phase * f.psi2[i]), 0.0, 1e-12);
    }
    EXPECT_NEAR(continuity_residual(f, out), 0.0, 1e-10);
  }
}

TEST(DiracEvolve, MatchesSplitStepOracle) {
  const GridSpec g{512, 40.0};
  const auto f = gaussian_spinor(g, 1.0, 0.0, 1.0, 0.0, {1, 0}, {0, 0});
  const auto exact = evolve_dirac(f, 1.0);
  // Richardson combination of two Strang runs is fourth order in dt.
  const auto coarse = split_step(f, 1.0, 1000);
  const auto fine = split_step(f, 1.0, 2000);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.n; ++i) {
    const complex r1 = (4.0 * fine.psi1[i] - coarse.psi1[i]) / 3.0;
    const complex r2 = (4.0 * fine.psi2[i] - coarse.psi2[i]) / 3.0;
    worst = std::max({worst, std::abs(r1 - exact.psi1[i]), std::abs(r2 - exact.psi2[i])});
  }
  EXPECT_LT(worst, 1e-8);
}

TEST(DiracEvolve, NormConservation) {
  std::mt19937_64 rng(31);
  const GridSpec g{2048, 80.0};
  for (int rep = 0; rep < 5; ++rep) {
    DiracEvolver ev(random_spinor(rng, g));
    for (double t : {0.5, 2.0, 5.0}) EXPECT_NEAR(ev.evolve(t).norm(), 1.0, 1e-10);
  }
}

TEST(DiracEvolve, RejectsUnderResolvedState) {
  const GridSpec g{64, 40.0};
  const auto f = gaussian_spinor(g, 1.0, 0.0, 0.3, 0.0, {1, 0}, {0, 0});
  EXPECT_THROW((DiracEvolver(f)), BudgetError);
}

TEST(Current, SingleComponentCarriesNoFlux) {
  const GridSpec g{128, 20.0};
  const auto c = current(gaussian_spinor(g, 1.0, 0.0, 1.0, 0.0, {1, 0}, {0, 0}));
  for (double j : c.j) EXPECT_EQ(j, 0.0);
}

TEST(Current, EqualRealComponentsAreNull) {
  const GridSpec g{128, 20.0};
  const auto c = current(gaussian_spinor(g, 1.0, 0.0, 1.0, 0.0, {1, 0}, {1, 0}));
  for (std::size_t i = 0; i < c.rho.size(); ++i) EXPECT_NEAR(c.j[i], c.rho[i], 1e-15 * c.rho[i] + 1e-300);
}

TEST(Current, RandomSamplesAreCausal) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> z;
  const GridSpec g{4096, 10.0};
  SpinorField f{g, 0.0, 1.0, std::vector<complex>(g.n), std::vector<complex>(g.n)};
  for (std::size_t i = 0; i < g.n; ++i) {
    f.psi1[i] = {z(rng), z(rng)};
    f.psi2[i] = {z(rng), z(rng)};
  }
  f.normalize();
  const auto c = current(f);
  EXPECT_LE(max_current_ratio(c), 1.0 + 1e-12);
}

TEST(Continuity, SecondOrderConvergence) {
  const double t = 1.0;
  std::vector<double> res;
  for (std::size_t n : {1024u, 2048u, 4096u}) {
    const GridSpec g{n, 60.0};
    const double dt = 0.01 * 1024.0 / static_cast<double>(n);
    DiracEvolver ev(gaussian_spinor(g, 1.0, 0.0, 1.0, 0.5, {1, 0}, {0.3, 0.2}));
    res.push_back(continuity_residual(ev.evolve(t), ev.evolve(t + dt)));
  }
  for (std::size_t i = 0; i + 1 < res.size(); ++i) {
    const double ratio = res[i] / res[i + 1];
    EXPECT_GT(ratio, 3.5);
    EXPECT_LT(ratio, 4.5);
  }
}

TEST(CausalityCheck, RandomSpinorsAreCausal) {
  std::mt19937_64 rng(5);
  const GridSpec g{2048, 80.0};
  const std::vector<double> times = {0, 1, 2.5, 5};
  for (int rep = 0; rep < 4; ++rep) {
    const auto rep_ = dirac_causality_check(random_spinor(rng, g), times);
    EXPECT_TRUE(rep_.causal);
    EXPECT_LE(rep_.max_n_tilde, 1e-6);
    EXPECT_LE(rep_.max_current_ratio, 1.0 + 1e-12);
    EXPECT_EQ(rep_.pairs.size(), 10u);
  }
}

TEST(CausalityCheck, EqualTimesGiveZero) {
  const GridSpec g{1024, 60.0};
  const auto rep = dirac_causality_check(gaussian_spinor(g, 1.0, 0, 1, 0, {1, 0}, {0, 1}), {1.0, 1.0});
  for (const auto& p : rep.pairs) EXPECT_EQ(p.n_tilde, 0.0);
}

TEST(CausalityCheck, HalvedTimeGapIsAcausal) {
  // Densities 2 apart in time relabelled as 1 apart.
  const GridSpec g{1024, 60.0};
  DiracEvolver ev(gaussian_spinor(g, 1.0, 0.0, 0.7, 0.0, {1, 0}, {0, 0}));
  auto mu = transport::DiscreteMeasure::from_grid(density_measure(ev.evolve(0.0)));
  const auto late = density_measure(ev.evolve(2.0));
  const auto nu = transport::DiscreteMeasure::from_grid(
      GridMeasure(1.0, late.x0(), late.dx(), {late.weights().begin(), late.weights().end()}));
  auto opt = transport::grid_options(g.dx());
  opt.solver = transport::Solver::Staircase;
  EXPECT_GT(transport::max_causal_mass(mu, nu, opt).n_tilde, 1e-3);
}

TEST(CausalityCheck, NoHegerfeldtWitness) {
  const GridSpec g{2048, 80.0};
  DiracEvolver ev(gaussian_spinor(g, 1.0, 0.0, 1.0, 0.0, {1, 0}, {0, 0}));
  auto profile = [&](double t) {
    const auto c = current(ev.evolve(t));
    return MassProfile(t, g.x(0), g.dx(), c.rho);
  };
  quantify::HegerfeldtSpec spec;
  spec.floor.epsilon_M = 1e-9;
  const auto p0 = profile(0.0);
  for (double t : {0.5, 1.0, 3.0}) EXPECT_FALSE(quantify::hegerfeldt_witness(p0, profile(t), spec).has_value()) << t;
}

TEST(SpinorField, ValidateRejectsWrongNorm) {
  const GridSpec g{64, 20.0};
  SpinorField f{g, 0.0, 1.0, std::vector<complex>(g.n, 1.0), std::vector<complex>(g.n, 0.0)};
  EXPECT_THROW(f.validate(), ConfigError);
  f.normalize();
  EXPECT_NO_THROW(f.validate());
}
