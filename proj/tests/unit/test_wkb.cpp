#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "oracles.hpp"
#include "resonance/errors.hpp"
#include "resonance/wkb.hpp"

using namespace resonance;
using c = std::complex<double>;

namespace {

Potential parabola() { return Potential::polynomial({0.0, 1.0, -1.0}); }
Potential mixed() { return Potential::polynomial({0.0, 0.0, 1.0, -3.0, 3.0, -1.0}); }
Potential cubic_left() { return Potential::polynomial({0.0, 0.0, 0.0, 1.0, -1.0}); }

const c I(0.0, 1.0);

}  // namespace

TEST(Wkb, FreeSeriesTerminates) {
  const Potential zero(1.0, {Piece{0.0, 1.0, {Polynomial{{0.0}}}}});
  const c z(3.0, -0.2);
  const auto jets = wkb_jets(zero, z, 0.4, Side::Right, 4, WkbSign::Plus);
  EXPECT_NEAR(std::abs(jets[0].value() - std::sqrt(z)), 0.0, 1e-15);
  for (int j = 1; j <= 4; ++j)
    for (const auto& coeff : jets[j].coefficients()) EXPECT_EQ(std::abs(coeff), 0.0);
}

TEST(Wkb, FirstOrderAtSimpleZero) {
  const auto s = wkb_series(parabola(), 2.0, WkbSign::Plus, 2);
  EXPECT_NEAR(std::abs(s.at_left[1] - c(0.0, -0.125)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(s.at_left[0] - std::sqrt(2.0)), 0.0, 1e-15);
}

TEST(Wkb, SecondOrderMatchesDifferencedRecursion) {
  // psi_2 = i/(2 psi_0) psi_1' - psi_1^2 / (2 psi_0) with psi_1 evaluated pointwise
  // from the recursion and differentiated numerically.
  const Potential v = parabola();
  const c z = 2.0;
  auto psi1 = [&](double x) {
    return wkb_jets(v, z, x, Side::TwoSided, 1, WkbSign::Plus)[1].value();
  };
  const double x = 0.5;
  const c psi0 = std::sqrt(z - v.eval(x));
  const c d1 = oracle::derivative(psi1, x, 1e-4);
  const c expected = I / (2.0 * psi0) * d1 - psi1(x) * psi1(x) / (2.0 * psi0);
  const auto jets = wkb_jets(v, z, x, Side::TwoSided, 2, WkbSign::Plus);
  EXPECT_NEAR(std::abs(jets[2].value() - expected), 0.0, 1e-9);
}

TEST(Wkb, DegreeExhaustion) {
  EXPECT_THROW(wkb_jets(parabola(), 2.0, 0.0, Side::Right, 4, WkbSign::Plus, 3),
               DegreeExhaustionError);
  EXPECT_THROW(endpoint_values(mixed(), 2.0, 2), DegreeExhaustionError);
}

TEST(Wkb, StepEndpointValue) {
  const c z(2.5, -0.1);
  const auto ev = endpoint_values(Potential::constant(1.0), z, 1);
  EXPECT_NEAR(std::abs(ev.minus_at_left[0] - std::sqrt(z - 1.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(ev.minus_at_left[1]), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(assemble(ev.minus_at_left, 0.01) - std::sqrt(z) -
                       (std::sqrt(z - 1.0) - std::sqrt(z))),
              0.0, 1e-15);
}

TEST(Wkb, EndpointLeadingTermAtSimpleZero) {
  const c z(2.0, -0.05);
  const auto ev = endpoint_values(parabola(), z, 2);
  const c expected = -I * std::pow(2.0 * std::sqrt(z), -2.0) * (-1.0);
  EXPECT_NEAR(std::abs(ev.plus_at_right[0] - std::sqrt(z)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(ev.plus_at_right[1] - expected), 0.0, 1e-14);
}

TEST(Wkb, LowerOrdersVanishAtHigherOrderZero) {
  const auto plus = wkb_series(mixed(), 2.0, WkbSign::Plus, 3);
  const auto minus = wkb_series(mixed(), 2.0, WkbSign::Minus, 3);
  EXPECT_LE(std::abs(plus.at_left[1]), 1e-12);
  EXPECT_LE(std::abs(minus.at_left[1]), 1e-12);
  for (int j = 1; j <= 2; ++j) {
    EXPECT_LE(std::abs(plus.at_right[j]), 1e-12);
    EXPECT_LE(std::abs(minus.at_right[j]), 1e-12);
  }
}

TEST(Wkb, VerifyPsiAtVanishing) {
  for (const auto& [v, endpoint, order] :
       {std::tuple{parabola(), Endpoint::Left, 1}, std::tuple{parabola(), Endpoint::Right, 1},
        std::tuple{mixed(), Endpoint::Left, 2}, std::tuple{mixed(), Endpoint::Right, 3},
        std::tuple{cubic_left(), Endpoint::Left, 3}}) {
    const auto r = verify_psiatvanishing(v, c(2.0, -0.1), endpoint);
    EXPECT_EQ(r.order, order);
    EXPECT_TRUE(r.exact);
    EXPECT_LE(r.relative_error, 1e-10);
    EXPECT_LE(r.lower_order_max, 1e-12);
  }
}

TEST(Wkb, VerifyStepLeadingDeviation) {
  // sqrt(z - V0) - sqrt(z) = -(V0 / 2) z^{-1/2} + O(V0^2)
  const Potential v = Potential::constant(0.01);
  const c z = 2.0;
  const auto r = verify_psiatvanishing(v, z, Endpoint::Left);
  EXPECT_EQ(r.order, 0);
  EXPECT_FALSE(r.exact);
  const c taylor = -0.005 / std::sqrt(z);
  EXPECT_NEAR(std::abs(r.recursion_plus - taylor), 0.0, 1e-5);
  EXPECT_LE(r.relative_error, 0.01);
}

TEST(Wkb, IntegratedFirstCorrection) {
  const Potential v = Potential::polynomial({0.3, 0.2, -0.4});
  const c z(2.0, -0.2);
  const c closed = integrated_first_correction(v, z, WkbSign::Plus);
  const c quad = oracle::simpson<c>(
      [&](double x) {
        const Side side = x <= 0.0 ? Side::Right : x >= 1.0 ? Side::Left : Side::TwoSided;
        return wkb_jets(v, z, x, side, 1, WkbSign::Plus)[1].value();
      },
      0.0, 1.0, 1e-12);
  EXPECT_NEAR(std::abs(closed - quad), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(closed + integrated_first_correction(v, z, WkbSign::Minus)), 0.0, 1e-15);
}

// Property: psi_{+,1} = -psi_{-,1} at the endpoints and interior points.
TEST(WkbProperty, FirstOrderAntisymmetry) {
  const Potential v = Potential(1.0, {Piece{0.0, 1.0, {Sine{0.4, 2.0, 0.3}, Polynomial{{0.1, 0.5}}}}});
  const c z(1.8, -0.15);
  auto check = [&](double x, Side side) {
    const c p = wkb_jets(v, z, x, side, 1, WkbSign::Plus)[1].value();
    const c m = wkb_jets(v, z, x, side, 1, WkbSign::Minus)[1].value();
    EXPECT_LE(std::abs(p + m), 1e-12) << x;
  };
  check(0.0, Side::Right);
  check(1.0, Side::Left);
  for (int i = 1; i <= 10; ++i) check(i / 11.0, Side::TwoSided);
}

// Property: psi_{+,0} = psi_{-,0} = psi_0.
TEST(WkbProperty, ZerothOrderSharedBySigns) {
  const auto plus = wkb_series(mixed(), c(1.7, -0.3), WkbSign::Plus, 3);
  const auto minus = wkb_series(mixed(), c(1.7, -0.3), WkbSign::Minus, 3);
  EXPECT_EQ(plus.at_left[0], minus.at_left[0]);
  EXPECT_EQ(plus.at_right[0], minus.at_right[0]);
}
