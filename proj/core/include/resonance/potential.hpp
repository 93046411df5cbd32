#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace resonance {

enum class Side { Left, Right, TwoSided };

/// sum_i coefficients[i] * x^i, in the global coordinate x.
struct Polynomial {
  std::vector<double> coefficients;
};

/// amplitude * sin(frequency * x + phase)
struct Sine {
  double amplitude = 1.0;
  double frequency = 1.0;
  double phase = 0.0;
};

/// amplitude * exp(rate * x)
struct Exponential {
  double amplitude = 1.0;
  double rate = 1.0;
};

/// amplitude * exp(-((x - center) / width)^2)
struct GaussianBump {
  double amplitude = 1.0;
  double center = 0.0;
  double width = 1.0;
};

using Term = std::variant<Polynomial, Sine, Exponential, GaussianBump>;

/// A smooth piece of V on [left, right]: the sum of its terms.
struct Piece {
  double left = 0.0;
  double right = 0.0;
  std::vector<Term> terms;
};

struct VanishingOrders {
  int k = 0;  ///< order at x = 0
  int l = 0;  ///< order at x = L
};

struct Maximum {
  double value = 0.0;
  double argmax = 0.0;
};

/// Compactly supported piecewise-smooth real potential with supp V in [0, L].
///
/// The pieces tile [0, L]; every piece endpoint is an interface, so the
/// interface set always contains 0 and L. Each piece carries exact Taylor
/// data of arbitrary order, which is what the WKB endpoint jets and the
/// Taylor-series shooting integrator consume.
///
/// Immutable after construction.
class Potential {
 public:
  /// `declared_orders` maps interface position to the order of vanishing of
  /// the jump there. Undeclared interfaces get their order inferred.
  Potential(double support_right, std::vector<Piece> pieces,
            std::map<double, int> declared_orders = {});

  static Potential constant(double value, double support_right = 1.0);
  /// V(x) = sum_i c[i] x^i on [0, L].
  static Potential polynomial(std::vector<double> coefficients, double support_right = 1.0);

  double support_right() const noexcept { return support_right_; }
  std::span<const Piece> pieces() const noexcept { return pieces_; }
  std::span<const double> interfaces() const noexcept { return interfaces_; }

  /// True when every piece is identically zero.
  bool is_zero() const noexcept { return is_zero_; }

  /// Only Y = {0, L}.
  bool has_interior_interfaces() const noexcept { return interfaces_.size() > 2; }

  /// Cached global maximum of V over [0, L].
  const Maximum& maximum() const noexcept { return maximum_; }

  /// V^(m)(x). Side is honoured at interfaces and ignored elsewhere.
  double eval(double x, int m = 0, Side side = Side::TwoSided) const;

  /// Taylor coefficients V^(j)(x0 +/- 0) / j! for j = 0..degree, taken from
  /// the piece on `side` of x0 (TwoSided is only legal off interfaces).
  std::vector<double> taylor(double x0, int degree, Side side) const;

  /// Index of the piece containing x on the given side, or nullopt when that
  /// side of x lies outside [0, L].
  std::optional<std::size_t> piece_at(double x, Side side) const;

  /// Returns the interface index if x coincides with an interface.
  std::optional<std::size_t> interface_index(double x) const;

  /// V^(j)(y+) - V^(j)(y-) at interface index i.
  double jump(std::size_t interface, int j) const;

  /// Declared order at an interface, or the one inferred from the jump data.
  int interface_order(std::size_t interface) const;
  std::optional<int> declared_order(std::size_t interface) const;

  /// Largest order probed when inferring vanishing orders.
  static constexpr int kMaxOrder = 24;

 private:
  double support_right_;
  std::vector<Piece> pieces_;
  std::vector<double> interfaces_;
  std::vector<std::optional<int>> declared_;
  bool is_zero_ = false;
  Maximum maximum_;
};

/// Taylor coefficients of a single term at x0, degree 0..degree.
std::vector<double> term_taylor(const Term& term, double x0, int degree);

/// Checks the declared orders at 0 and L against the derivative oracle and
/// returns them. Throws ValidationError on disagreement and
/// DegenerateOrderError for V == 0.
VanishingOrders vanishing_orders(const Potential& v);

/// Global maximum of V over [0, L] together with a maximizer.
Maximum maximize(const Potential& v);

/// Maximum of V over [x0, x1] intersected with [0, L] (one-sided values at
/// interfaces count).
Maximum maximize_on(const Potential& v, double x0, double x1);

double sup_V(const Potential& v);

}  // namespace resonance
