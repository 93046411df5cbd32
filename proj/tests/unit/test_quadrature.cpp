#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <functional>

#include "oracles.hpp"
#include "resonance/errors.hpp"
#include "resonance/quadrature.hpp"

using namespace resonance;

namespace {

Potential parabola() { return Potential::polynomial({0.0, 1.0, -1.0}); }
Potential mixed() { return Potential::polynomial({0.0, 0.0, 1.0, -3.0, 3.0, -1.0}); }

Potential bump() {
  return Potential(2.0, {Piece{0.0, 2.0, {GaussianBump{0.3, 1.0, 0.4}}}});
}

}  // namespace

TEST(Quadrature, GaussKronrodPolynomialIsExact) {
  const auto r = gauss_kronrod(std::function<double(double)>([](double x) { return x * x * x - 2.0 * x; }), 0.0, 2.0, 1e-14);
  EXPECT_NEAR(r.value, 0.0, 1e-14);
  const auto c = gauss_kronrod(std::function<cplx(double)>([](double x) { return cplx(std::cos(x), std::sin(x)); }), 0.0,
                               1.0, 1e-14);
  EXPECT_NEAR(std::abs(c.value - cplx(std::sin(1.0), 1.0 - std::cos(1.0))), 0.0, 1e-14);
}

TEST(Quadrature, ConstantPotentials) {
  const Potential flat(1.0, {Piece{0.0, 1.0, {Polynomial{{0.0}}}}});
  EXPECT_NEAR(action(flat, 4.0), 2.0, 1e-14);
  EXPECT_NEAR(period(flat, 4.0), 0.25, 1e-14);
  const Potential step = Potential::constant(1.0);
  EXPECT_NEAR(action(step, 2.0), 1.0, 1e-14);
  EXPECT_NEAR(period(step, 2.0), 0.5, 1e-14);
}

TEST(Quadrature, FrozenParabolaValues) {
  const Potential v = parabola();
  EXPECT_NEAR(action(v, 1.5), 1.1542566397523977145, 1e-13);
  EXPECT_NEAR(period(v, 1.5), 0.43350736324528255198, 1e-13);
  EXPECT_NEAR(action(v, 2.0), 1.3537299820568188243, 1e-13);
  EXPECT_NEAR(period(v, 2.0), 0.36949897192586931423, 1e-13);
  EXPECT_NEAR(action(v, 2.5), 1.5273322530759263305, 1e-13);
  EXPECT_NEAR(period(v, 2.5), 0.32745015023725844332, 1e-13);
}

TEST(Quadrature, FrozenMixedAndBumpValues) {
  EXPECT_NEAR(action(mixed(), 1.0), 0.99161175854707411017, 1e-13);
  EXPECT_NEAR(period(mixed(), 1.0), 0.50424983984511934677, 1e-13);
  EXPECT_NEAR(action(mixed(), 2.0), 1.4083017348978378913, 1e-13);
  EXPECT_NEAR(period(mixed(), 2.0), 0.35504105325603132566, 1e-13);
  EXPECT_NEAR(action(bump(), 1.0), 1.8872266066909566571, 1e-12);
}

TEST(Quadrature, AgreesWithSimpsonOracle) {
  for (const Potential& v : {parabola(), mixed(), bump()}) {
    for (double e : {0.9, 1.3, 2.7}) {
      const double L = v.support_right();
      const double s = oracle::simpson<double>(
          [&](double x) { return std::sqrt(e - v.eval(x, 0, Side::Right)); }, 0.0, L);
      const double t = oracle::simpson<double>(
          [&](double x) { return 0.5 / std::sqrt(e - v.eval(x, 0, Side::Right)); }, 0.0, L);
      EXPECT_NEAR(action(v, e), s, 1e-11);
      EXPECT_NEAR(period(v, e), t, 1e-11);
    }
  }
}

TEST(Quadrature, WindowErrors) {
  EXPECT_THROW(action(parabola(), 0.25), WindowError);
  EXPECT_THROW(period(parabola(), 0.1), WindowError);
  EXPECT_THROW(action(Potential::constant(1.0), 1.0), WindowError);
}

TEST(Quadrature, TravelTime) {
  const Potential v = parabola();
  EXPECT_NEAR(travel_time(v, 2.0, 0.0, 1.0), period(v, 2.0), 1e-13);
  EXPECT_NEAR(travel_time(v, 2.0, 0.0, 0.5) * 2.0, period(v, 2.0), 1e-13);
  // Free flight outside the support.
  EXPECT_NEAR(travel_time(v, 4.0, 1.0, 2.0), 0.25, 1e-14);
  EXPECT_THROW(travel_time(v, 0.2, 0.0, 1.0), TurningPointError);
}

TEST(Quadrature, InvertAction) {
  const Potential step = Potential::constant(1.0);
  EXPECT_NEAR(invert_action(step, 1.0, {1.5, 3.0}), 2.0, 1e-12);
  const Potential v = parabola();
  const Interval w{1.5, 2.5};
  EXPECT_NEAR(invert_action(v, action(v, 2.3), w), 2.3, 1e-12);
  EXPECT_THROW(invert_action(v, 0.5, w), OutOfRangeError);
  EXPECT_THROW(invert_action(v, 2.0, w), OutOfRangeError);
}

TEST(Quadrature, ActionTableInterpolates) {
  const Potential v = parabola();
  const ActionTable table(v, {1.5, 2.5});
  EXPECT_NEAR(table.action_range().lo, action(v, 1.5), 1e-13);
  EXPECT_NEAR(table.action_range().hi, action(v, 2.5), 1e-13);
  for (double e : {1.53, 1.77, 2.01, 2.49}) {
    EXPECT_NEAR(table.action(e), action(v, e), 1e-9);
    EXPECT_NEAR(table.period(e), period(v, e), 1e-7);
    EXPECT_NEAR(table.invert(action(v, e)), e, 1e-8);
  }
}

TEST(Quadrature, ComplexPhaseExamples) {
  const Potential flat(1.0, {Piece{0.0, 1.0, {Polynomial{{0.0}}}}});
  EXPECT_NEAR(std::abs(complex_phase(flat, 1.0, 4.0) - 2.0), 0.0, 1e-14);
  const cplx z(4.0, -0.1);
  EXPECT_NEAR(std::abs(complex_phase(flat, 1.0, z) - std::sqrt(z)), 0.0, 1e-14);
  const Potential v = parabola();
  EXPECT_NEAR(std::abs(complex_phase(v, 1.0, cplx(2.0, 0.0)) - action(v, 2.0)), 0.0, 1e-13);
  EXPECT_THROW(complex_phase(v, 1.0, cplx(0.2, -0.1)), BranchError);
}

TEST(Quadrature, FrozenComplexPhase) {
  const Potential v = parabola();
  const cplx z(2.0, -0.3);
  EXPECT_NEAR(std::abs(complex_phase(v, 1.0, z) -
                       cplx(1.3582378095191163945, -0.11048065494595169541)),
              0.0, 1e-13);
  EXPECT_NEAR(std::abs(complex_phase_dz(v, 1.0, z) -
                       cplx(0.3658372085655362701, 0.029803319970431121657)),
              0.0, 1e-13);
  const cplx w(2.0, -0.05);
  EXPECT_NEAR(std::abs(complex_phase(v, 1.0, w) -
                       cplx(1.3538562215087636024, -0.018473220481930502124)),
              0.0, 1e-13);
  EXPECT_NEAR(std::abs(complex_phase(v, 0.5, w) -
                       cplx(0.67692811075438180122, -0.009236610240965251062)),
              0.0, 1e-13);
}

// Property: dS/dE = T on a grid of 20 energies.
TEST(QuadratureProperty, ActionDerivativeIsPeriod) {
  for (const Potential& v : {parabola(), mixed(), bump()}) {
    const double lo = sup_V(v) + 0.3;
    for (int i = 0; i < 20; ++i) {
      const double e = lo + 0.1 * i;
      const double ds = oracle::derivative([&](double x) { return action(v, x); }, e, 1e-3);
      EXPECT_NEAR(ds, period(v, e), 1e-8) << e;
    }
  }
}

// Property: S increases and T decreases with E above sup V.
TEST(QuadratureProperty, Monotone) {
  const Potential v = mixed();
  double s_prev = action(v, 0.2), t_prev = period(v, 0.2);
  for (int i = 1; i <= 40; ++i) {
    const double e = 0.2 + 0.1 * i;
    const double s = action(v, e), t = period(v, e);
    EXPECT_GT(s, s_prev);
    EXPECT_LT(t, t_prev);
    s_prev = s;
    t_prev = t;
  }
}

// Property: phi(L; z) is holomorphic (Cauchy-Riemann) and its z-derivative
// matches complex_phase_dz.
TEST(QuadratureProperty, PhaseIsHolomorphic) {
  const Potential v = parabola();
  for (cplx z : {cplx(1.6, -0.02), cplx(2.0, -0.3), cplx(2.4, -0.1)}) {
    auto f = [&](cplx w) { return complex_phase(v, 1.0, w); };
    const cplx dx = oracle::derivative_z(f, z, 1e-3);
    const cplx dy = (f(z + cplx(0, 5e-4)) - f(z - cplx(0, 5e-4))) / cplx(0, 1e-3);
    EXPECT_LE(std::abs(dx - dy), 1e-6);
    EXPECT_LE(std::abs(dx - complex_phase_dz(v, 1.0, z)), 1e-8);
  }
}
