#include "resonance/wkb.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "resonance/errors.hpp"

namespace resonance {
namespace {

using cplx = std::complex<double>;
constexpr cplx kI{0.0, 1.0};

cplx ipow(int n) {
  switch (((n % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

double endpoint_position(const Potential& v, Endpoint e) {
  return e == Endpoint::Left ? 0.0 : v.support_right();
}

Side inward_side(Endpoint e) { return e == Endpoint::Left ? Side::Right : Side::Left; }

}  // namespace

std::vector<Jet> wkb_jets(const Potential& v, cplx z, double x0, Side side, int order,
                          WkbSign sign, int v_degree) {
  if (order < 0) throw DegreeExhaustionError("WKB order must be nonnegative");
  if (v_degree < 0) v_degree = 2 * order;
  if (v_degree < order) {
    std::ostringstream os;
    os << "V jet of degree " << v_degree << " cannot carry the recursion to order " << order;
    throw DegreeExhaustionError(os.str());
  }
  const auto vt = v.taylor(x0, v_degree, side);
  Jet potential = Jet::from_real(x0, side, vt);
  if (!((z - vt[0]).real() > 0.0)) {
    std::ostringstream os;
    os << "Re(z - V(x0)) must be positive for psi_0; got z = " << z << ", V = " << vt[0];
    throw BranchError(os.str());
  }
  Jet psi0 = (Jet::constant(x0, side, z, v_degree) - potential).sqrt();
  const Jet half_inv = psi0.reciprocal() * cplx{0.5, 0.0};
  const cplx s = static_cast<double>(static_cast<int>(sign)) * kI;

  std::vector<Jet> psi;
  psi.reserve(order + 1);
  psi.push_back(psi0);
  for (int k = 1; k <= order; ++k) {
    Jet next = (psi[k - 1].derivative() * half_inv) * s;
    if (k >= 2) {
      Jet sum = psi[1] * psi[k - 1];
      for (int j = 2; j <= k - 1; ++j) sum += psi[j] * psi[k - j];
      next -= sum * half_inv;
    }
    psi.push_back(std::move(next));
  }
  return psi;
}

WkbSeries wkb_series(const Potential& v, cplx z, WkbSign sign, int order) {
  WkbSeries out{z, sign, order, {}, {}};
  for (const Jet& j : wkb_jets(v, z, 0.0, Side::Right, order, sign))
    out.at_left.push_back(j.value());
  for (const Jet& j : wkb_jets(v, z, v.support_right(), Side::Left, order, sign))
    out.at_right.push_back(j.value());
  return out;
}

EndpointValues endpoint_values(const Potential& v, cplx z, int order) {
  if (!v.is_zero()) {
    const auto orders = vanishing_orders(v);
    if (order < std::max(orders.k, orders.l)) {
      std::ostringstream os;
      os << "truncation order " << order << " is below max(k, l) = "
         << std::max(orders.k, orders.l);
      throw DegreeExhaustionError(os.str());
    }
  }
  EndpointValues out;
  for (const Jet& j : wkb_jets(v, z, v.support_right(), Side::Left, order, WkbSign::Plus))
    out.plus_at_right.push_back(j.value());
  for (const Jet& j : wkb_jets(v, z, 0.0, Side::Right, order, WkbSign::Minus))
    out.minus_at_left.push_back(j.value());
  return out;
}

cplx assemble(const std::vector<cplx>& coefficients, double h) {
  cplx acc{};
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * h + *it;
  return acc;
}

cplx integrated_first_correction(const Potential& v, cplx z, WkbSign sign) {
  const cplx at_left = std::sqrt(z - v.eval(0.0, 0, Side::Right));
  const cplx at_right = std::sqrt(z - v.eval(v.support_right(), 0, Side::Left));
  // psi_0 stays in the right half-plane, so the principal log of the ratio
  // is the continuous one.
  return static_cast<double>(static_cast<int>(sign)) * 0.5 * kI * std::log(at_right / at_left);
}

PsiAtVanishingReport verify_psiatvanishing(const Potential& v, cplx z, Endpoint endpoint) {
  PsiAtVanishingReport report;
  report.endpoint = endpoint;
  const std::size_t idx = endpoint == Endpoint::Left ? 0 : v.interfaces().size() - 1;
  const int order = v.interface_order(idx);
  if (order > Potential::kMaxOrder)
    throw DegenerateOrderError("V vanishes to infinite order at this endpoint");
  report.order = order;

  const double x0 = endpoint_position(v, endpoint);
  const Side side = inward_side(endpoint);
  const int depth = std::max(order, 1);
  const auto plus = wkb_jets(v, z, x0, side, depth, WkbSign::Plus);
  const auto minus = wkb_jets(v, z, x0, side, depth, WkbSign::Minus);

  double factorial = 1.0;
  for (int j = 2; j <= order; ++j) factorial *= j;
  const double vk = v.taylor(x0, order, side)[order] * factorial;
  const cplx root = std::sqrt(z);
  const cplx base = std::pow(2.0 * root, -order - 1) * vk;
  report.closed_plus = -ipow(order) * base;
  report.closed_minus = -ipow(-order) * base;

  if (order == 0) {
    report.exact = false;
    report.recursion_plus = plus[0].value() - root;
    report.recursion_minus = minus[0].value() - root;
  } else {
    report.recursion_plus = plus[order].value();
    report.recursion_minus = minus[order].value();
    for (int j = 1; j < order; ++j)
      report.lower_order_max = std::max(
          {report.lower_order_max, std::abs(plus[j].value()), std::abs(minus[j].value())});
  }
  const double scale = std::max(std::abs(report.closed_plus), 1e-300);
  report.relative_error =
      std::max(std::abs(report.recursion_plus - report.closed_plus),
               std::abs(report.recursion_minus - report.closed_minus)) /
      scale;
  return report;
}

}  // namespace resonance
