#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "oracles.hpp"
#include "resonance/errors.hpp"
#include "resonance/shooting.hpp"

using namespace resonance;

namespace {

Potential parabola() { return Potential::polynomial({0.0, 1.0, -1.0}); }
Potential free_potential() { return Potential(1.0, {Piece{0.0, 1.0, {Polynomial{{0.0}}}}}); }

cplx newton(const Potential& v, cplx z, double h, const ShootOptions& opts = {}) {
  for (int i = 0; i < 30; ++i) {
    const auto r = outgoing_residual(v, z, h, opts);
    const cplx step = r.value / r.derivative_dz;
    z -= step;
    if (std::abs(step) < 1e-14) break;
  }
  return z;
}

}  // namespace

TEST(Shooting, FreeSolutionIsPlaneWave) {
  const cplx z(3.0, -0.2);
  const double h = 0.05;
  const auto r = integrate_out(free_potential(), z, h);
  const cplx scale = std::exp(r.state.log_scale);
  const cplx expected = std::exp(-cplx(0, 1) * std::sqrt(z) / h);
  EXPECT_EQ(r.state.x, 1.0);
  EXPECT_LE(std::abs(r.state.u * scale - expected), 1e-10 * std::abs(expected));
  EXPECT_LE(std::abs(r.state.v * scale + cplx(0, 1) * std::sqrt(z) * expected),
            1e-10 * std::abs(expected));
}

TEST(Shooting, FreeResidualNeverVanishes) {
  const double h = 0.02;
  for (cplx z : {cplx(2.0, 0.0), cplx(2.5, -0.1), cplx(3.0, -0.3)}) {
    const auto r = outgoing_residual(free_potential(), z, h);
    // |hDu - z^{1/2} u| = 2 |z^{1/2}| |u| and |v| = |z^{1/2}| |u|.
    EXPECT_NEAR(std::abs(r.value), 2.0, 1e-9);
    const auto t = transfer_matrix_constant(0.0, 1.0, z, h);
    EXPECT_GT(std::abs(t.value), 0.1);
  }
}

TEST(Shooting, ConstantWellRootsAreShootingRoots) {
  const double h = 0.02;
  const auto roots = constant_well_roots(1.0, 1.0, h, {2.0, 3.0}, 0.5);
  ASSERT_EQ(roots.size(), 7u);
  for (cplx z : roots) {
    EXPECT_LE(std::abs(constant_well_condition(1.0, 1.0, z, h)), 1e-12);
    EXPECT_LE(std::abs(transfer_matrix_constant(1.0, 1.0, z, h).value), 1e-10);
    EXPECT_LE(std::abs(outgoing_residual(Potential::constant(1.0), z, h).value), 1e-10);
    EXPECT_LE(std::abs(newton(Potential::constant(1.0), z, h) - z), 1e-9);
  }
}

TEST(Shooting, TransferMatrixMatchesIntegratorRay) {
  const double h = 0.02;
  for (cplx z : {cplx(2.2, -0.05), cplx(2.7, -0.2)}) {
    const auto exact = transfer_matrix_constant(1.0, 1.0, z, h);
    const auto shot = outgoing_residual(Potential::constant(1.0), z, h);
    const cplx ratio_exact = exact.value / exact.derivative_dz;
    const cplx ratio_shot = shot.value / shot.derivative_dz;
    EXPECT_LE(std::abs(ratio_exact - ratio_shot), 1e-9 * std::abs(ratio_exact));
  }
}

TEST(Shooting, StepDepthMatchesLeadingOrder) {
  // No log(1/h) term for a step: Im z = (h / 2T) log |r(E)|^2 + O(h^2). The
  // closed form replaces r by its small-V0 limit V0 / (4E).
  const double h = 0.01;
  for (cplx z : constant_well_roots(1.0, 1.0, h, {2.0, 3.0}, 0.5)) {
    const double e = z.real();
    const double t = 0.5 / std::sqrt(e - 1.0);
    const double r = (std::sqrt(e) - std::sqrt(e - 1.0)) / (std::sqrt(e) + std::sqrt(e - 1.0));
    EXPECT_NEAR(z.imag(), h / (2.0 * t) * std::log(r * r), 50.0 * h * h);
    EXPECT_NEAR(z.imag(), h / (2.0 * t) * std::log(1.0 / (16.0 * e * e)), 2.0 * h);
  }
}

TEST(Shooting, BudgetError) {
  ShootOptions opts;
  opts.max_steps = 3;
  try {
    integrate_out(parabola(), cplx(2.0, -0.01), 0.005, opts);
    FAIL() << "expected IntegrationBudgetError";
  } catch (const IntegrationBudgetError& e) {
    EXPECT_EQ(e.h(), 0.005);
    EXPECT_EQ(e.tol(), opts.tol);
  }
}

TEST(Shooting, VariationalDerivativeMatchesDifferences) {
  const Potential v = parabola();
  const double h = 0.02;
  for (cplx z : {cplx(1.7, -0.05), cplx(2.3, -0.12)}) {
    const auto r = outgoing_residual(v, z, h);
    const cplx fd =
        oracle::derivative_z([&](cplx w) { return outgoing_residual(v, w, h).raw(); }, z, 1e-5);
    EXPECT_LE(std::abs(fd - r.raw_derivative()), 1e-5 * std::abs(r.raw_derivative()));
  }
}

// Property: the Wronskian of two solutions is constant for real z.
TEST(ShootingProperty, WronskianConserved) {
  const Potential v = parabola();
  const double h = 0.02;
  const cplx z = 1.9;
  const auto a = integrate(v, z, h, ShootState{0.0, 1.0, 0.0, 0.0}, 0.0, 0.0);
  const auto b = integrate(v, z, h, ShootState{0.0, 0.0, 1.0, 0.0}, 0.0, 0.0);
  const cplx w = (a.state.u * b.state.v - b.state.u * a.state.v) *
                 std::exp(a.state.log_scale + b.state.log_scale);
  EXPECT_LE(std::abs(w - 1.0), 1e-10);
}

// Property: roots do not depend on the renormalization schedule.
TEST(ShootingProperty, RenormalizationInvariant) {
  const Potential v = parabola();
  const double h = 0.01;
  ShootOptions tight;
  tight.renormalize_threshold = 1e2;
  ShootOptions loose;
  loose.renormalize_threshold = 1e3;
  const cplx seed(2.0, -0.08);
  const cplx z1 = newton(v, seed, h, tight);
  const cplx z2 = newton(v, seed, h, loose);
  EXPECT_LE(std::abs(outgoing_residual(v, z1, h).value), 1e-9);
  EXPECT_LE(std::abs(z1 - z2), 1e-11);
}

// Property: the residual is holomorphic.
TEST(ShootingProperty, CauchyRiemann) {
  const Potential v = parabola();
  const double h = 0.02;
  const cplx z(2.1, -0.07);
  auto f = [&](cplx w) { return outgoing_residual(v, w, h).raw(); };
  const double step = 1e-5;
  const cplx dx = (f(z + step) - f(z - step)) / (2.0 * step);
  const cplx dy = (f(z + cplx(0, step)) - f(z - cplx(0, step))) / cplx(0, 2.0 * step);
  EXPECT_LE(std::abs(dx - dy), 1e-6 * std::abs(dx));
}

// Property: no resonances on the real axis.
TEST(ShootingProperty, RealAxisIsZeroFree) {
  const Potential v = parabola();
  for (int i = 0; i <= 20; ++i) {
    const double e = 1.5 + 0.05 * i;
    EXPECT_GT(std::abs(outgoing_residual(v, e, 0.01).value), 1e-4) << e;
  }
}
