#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "capra/conjugacy.hpp"
#include "capra/l0.hpp"
#include "capra/norms.hpp"
#include "capra/xreal.hpp"

namespace capra {

/// Slack on |x|^2 - 1 for deciding that a planar point lies on the unit circle.
inline constexpr double kSphereTolerance = 1e-12;
/// Slack on the region inequalities when several closed regions meet.
inline constexpr double kRegionTolerance = 1e-12;
/// Two branch formulas evaluated on a shared boundary must agree this closely.
inline constexpr double kBranchAgreement = 1e-9;
/// Feasibility slack for decompositions (sum and norm-budget constraints).
inline constexpr double kFeasibilityTolerance = 1e-12;

enum class Branch { Lozenge, NailX1, NailX2, Triangle, SphereAxis, SphereOffAxis, Infeasible };

inline const char* to_string(Branch b) {
  switch (b) {
    case Branch::Lozenge: return "lozenge";
    case Branch::NailX1: return "nail_x1";
    case Branch::NailX2: return "nail_x2";
    case Branch::Triangle: return "triangle";
    case Branch::SphereAxis: return "sphere_axis";
    case Branch::SphereOffAxis: return "sphere_off_axis";
    case Branch::Infeasible: return "infeasible";
  }
  return "?";
}

template <typename Scalar>
struct L0Evaluation {
  ExtendedReal<Scalar> value;
  Branch branch = Branch::Infeasible;
};

namespace detail {

inline double sqrt2_minus_1() { return std::numbers::sqrt2 - 1.0; }

// Interior branch formulas on the nonnegative quadrant (a, b) = (|x1|, |x2|).
template <typename Scalar>
Scalar interior_branch_value(Branch branch, Scalar a, Scalar b) {
  const Scalar s = Scalar(std::numbers::sqrt2);
  switch (branch) {
    case Branch::Lozenge: return a + b;
    case Branch::Triangle: return (a + b - Scalar(2) + s) / (s - Scalar(1));
    case Branch::NailX1: return (Scalar(3) - a) / Scalar(2) + b * b / (Scalar(2) * (Scalar(1) - a));
    case Branch::NailX2: return (Scalar(3) - b) / Scalar(2) + a * a / (Scalar(2) * (Scalar(1) - b));
    default: break;
  }
  throw std::logic_error("interior_branch_value: not an interior branch");
}

// Closed region membership with slack `tol`.
template <typename Scalar>
bool in_closed_region(Branch branch, Scalar a, Scalar b, double tol) {
  const double m = sqrt2_minus_1();
  const double A = static_cast<double>(a), B = static_cast<double>(b);
  switch (branch) {
    case Branch::Lozenge: return A + B <= 1 + tol;
    case Branch::Triangle: return A + B >= 1 - tol && m * A + B <= 1 + tol && A + m * B <= 1 + tol;
    case Branch::NailX1: return A + m * B >= 1 - tol && A >= B - tol;
    case Branch::NailX2: return m * A + B >= 1 - tol && B >= A - tol;
    default: return false;
  }
}

// Strict classification of an interior point of the quadrant.
template <typename Scalar>
Branch classify_interior(Scalar a, Scalar b) {
  const double m = sqrt2_minus_1();
  const double A = static_cast<double>(a), B = static_cast<double>(b);
  if (A + B <= 1) return Branch::Lozenge;
  if (A + m * B >= 1 && A > B) return Branch::NailX1;
  if (m * A + B >= 1 && B > A) return Branch::NailX2;
  return Branch::Triangle;
}

}  // namespace detail

/// Closed form of the convex extension L0 in the plane, with its branch.
///
/// Outside the closed disk the value is +inf; on the circle it is 1 at the four
/// axis points and 2 elsewhere. Inside, the lozenge, triangle and two nail
/// formulas apply. On a shared region boundary every applicable formula is
/// evaluated and they must agree to kBranchAgreement.
template <typename Derived>
L0Evaluation<typename Derived::Scalar> calL0_2d_eval(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  using Value = ExtendedReal<Scalar>;
  if (x.size() != 2) throw std::invalid_argument("calL0_2d: dimension must be 2");
  if (!x.allFinite()) throw std::invalid_argument("calL0_2d: components must be finite");
  const Scalar a = std::abs(x(0));
  const Scalar b = std::abs(x(1));
  const Scalar sq = a * a + b * b;
  if (sq > Scalar(1) + Scalar(kSphereTolerance)) return {Value::pos_inf(), Branch::Infeasible};
  if (sq >= Scalar(1) - Scalar(kSphereTolerance)) {
    if (a == Scalar(0) || b == Scalar(0)) return {Value(Scalar(1)), Branch::SphereAxis};
    return {Value(Scalar(2)), Branch::SphereOffAxis};
  }

  const Branch primary = detail::classify_interior(a, b);
  const Scalar value = detail::interior_branch_value(primary, a, b);
  for (Branch other : {Branch::Lozenge, Branch::Triangle, Branch::NailX1, Branch::NailX2}) {
    if (other == primary || !detail::in_closed_region(other, a, b, kRegionTolerance)) continue;
    // NailX1/NailX2 only meet on the diagonal outside the open disk; their
    // closed regions overlap a sliver near it only through the slack.
    const Scalar v = detail::interior_branch_value(other, a, b);
    if (std::abs(static_cast<double>(v - value)) > kBranchAgreement) {
      std::ostringstream msg;
      msg << "calL0_2d: branches " << to_string(primary) << " and " << to_string(other) << " disagree at ("
          << x(0) << ", " << x(1) << "): " << value << " vs " << v;
      throw std::logic_error(msg.str());
    }
  }
  return {Value(value), primary};
}

template <typename Derived>
ExtendedReal<typename Derived::Scalar> calL0_2d(const Eigen::MatrixBase<Derived>& x) {
  return calL0_2d_eval(x).value;
}

/// Minimizer of  |x1bar|_1 + 2 |x2bar|  subject to  |x1bar|_1 + |x2bar| <= 1
/// and x1bar + x2bar = x, for planar x in the open unit disk.
template <typename Scalar>
struct Decomposition2D {
  Vector<Scalar> x1bar;  // order-1 support norm part (l1)
  Vector<Scalar> x2bar;  // order-2 support norm part (Euclidean)
  Branch branch = Branch::Infeasible;
  std::optional<Scalar> lambda;  // multiplier of the norm budget when it is active
  Scalar objective = 0;
};

template <typename Scalar>
Scalar decomposition_objective(const Vector<Scalar>& x1bar, const Vector<Scalar>& x2bar) {
  return support_norm(x1bar, 1) + Scalar(2) * support_norm(x2bar, 2);
}

/// Closed-form minimizer, by case analysis on the nonnegative quadrant with
/// signs restored afterwards.
///
/// In the triangle region the common value beta of the two components of
/// x2bar is (x1 + x2 - 1) / (2 - sqrt 2): it is the root of the budget
/// equation (x1 - beta) + (x2 - beta) + sqrt(2) beta = 1.
template <typename Derived>
Decomposition2D<typename Derived::Scalar> decompose_2d(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  if (x.size() != 2) throw std::invalid_argument("decompose_2d: dimension must be 2");
  if (!x.allFinite()) throw std::invalid_argument("decompose_2d: components must be finite");
  const Scalar a = std::abs(x(0));
  const Scalar b = std::abs(x(1));
  if (!(a * a + b * b < Scalar(1))) throw std::domain_error("decompose_2d: x must lie in the open unit disk");

  Decomposition2D<Scalar> dec;
  dec.branch = detail::classify_interior(a, b);
  Vector<Scalar> u1(2), u2(2);
  const Scalar one(1), two(2);
  const Scalar sq = a * a + b * b;
  switch (dec.branch) {
    case Branch::Lozenge:
      u1 << a, b;
      u2 << 0, 0;
      break;
    case Branch::NailX1: {
      const Scalar head = (one - sq) / (two * (one - a));
      u1 << head, 0;
      u2 << (two * a - a * a + b * b - one) / (two * (one - a)), b;
      const Scalar ratio = u2(0) / (one - head);  // (1 + lambda) / (2 + lambda)
      dec.lambda = (two * ratio - one) / (one - ratio);
      break;
    }
    case Branch::NailX2: {
      const Scalar head = (one - sq) / (two * (one - b));
      u1 << 0, head;
      u2 << a, (two * b - b * b + a * a - one) / (two * (one - b));
      const Scalar ratio = u2(1) / (one - head);
      dec.lambda = (two * ratio - one) / (one - ratio);
      break;
    }
    case Branch::Triangle: {
      const Scalar s = Scalar(std::numbers::sqrt2);
      const Scalar beta = (a + b - one) / (two - s);
      u2 << beta, beta;
      u1 << a - beta, b - beta;
      dec.lambda = s;
      break;
    }
    default: throw std::logic_error("decompose_2d: unexpected branch");
  }
  const Scalar s0 = x(0) < 0 ? Scalar(-1) : Scalar(1);
  const Scalar s1 = x(1) < 0 ? Scalar(-1) : Scalar(1);
  dec.x1bar = Vector<Scalar>(2);
  dec.x2bar = Vector<Scalar>(2);
  dec.x1bar << s0 * u1(0), s1 * u1(1);
  dec.x2bar << s0 * u2(0), s1 * u2(1);
  dec.objective = decomposition_objective(dec.x1bar, dec.x2bar);
  return dec;
}

/// Outcome of the optimality check of a planar decomposition.
template <typename Scalar>
struct KktReport {
  bool ok = false;
  std::optional<Scalar> lambda;
  Scalar sum_residual = 0;  // max-norm of x1bar + x2bar - x
  Scalar budget = 0;        // |x1bar|_1 + |x2bar|
  Face2D face1;
  bool face2_whole_ball = false;
  std::string message;
};

/// Checks optimality conditions of a planar decomposition.
///
/// Either x2bar = 0, x1bar = x and |x|_1 <= 1 (inactive budget), or there is
/// lambda > 0 with an active budget and
///     (2 + lambda) F2(x2bar)  intersecting  (1 + lambda) F1(x1bar),
/// F1 the exposed face of [-1,1]^2 and F2 that of the Euclidean ball.
/// Lambda is solved in closed form from the face kind.
template <typename Derived, typename Scalar = typename Derived::Scalar>
KktReport<Scalar> verify_kkt_2d(const Eigen::MatrixBase<Derived>& x, const Decomposition2D<Scalar>& dec) {
  KktReport<Scalar> report;
  if (x.size() != 2 || dec.x1bar.size() != 2 || dec.x2bar.size() != 2) {
    report.message = "dimension mismatch";
    return report;
  }
  const Vector<Scalar> xv = x;
  report.sum_residual = (dec.x1bar + dec.x2bar - xv).template lpNorm<Eigen::Infinity>();
  report.budget = support_norm(dec.x1bar, 1) + support_norm(dec.x2bar, 2);
  report.face1 = face_l1_ball_2d(dec.x1bar);
  const auto face2 = face_euclidean_ball(dec.x2bar);
  report.face2_whole_ball = face2.whole_ball;

  if (report.sum_residual > Scalar(kFeasibilityTolerance)) {
    report.message = "sum constraint violated";
    return report;
  }
  if (report.budget > Scalar(1) + Scalar(kFeasibilityTolerance)) {
    report.message = "norm budget exceeded";
    return report;
  }

  // Inactive budget: the l1 part carries everything.
  if (face2.whole_ball && (dec.x1bar - xv).template lpNorm<Eigen::Infinity>() <= Scalar(kFeasibilityTolerance)) {
    report.ok = support_norm(xv, 1) <= Scalar(1) + Scalar(kFeasibilityTolerance);
    report.message = report.ok ? "budget inactive, l1 ball" : "x outside the l1 ball";
    return report;
  }

  if (std::abs(report.budget - Scalar(1)) > Scalar(kFeasibilityTolerance)) {
    report.message = "norm budget not active";
    return report;
  }

  // rho = (2 + lambda) / (1 + lambda) ranges over (1, 2) for lambda > 0.
  auto lambda_from_rho = [](Scalar rho) { return (Scalar(2) - rho) / (rho - Scalar(1)); };
  const double tol = kBallTolerance;
  const Face2D& f1 = report.face1;

  if (face2.whole_ball) {
    // Need a point of F1 with norm <= rho for some rho in (1, 2).
    switch (f1.kind) {
      case Face2D::Kind::FullSquare:
      case Face2D::Kind::VerticalEdge:
      case Face2D::Kind::HorizontalEdge: report.lambda = Scalar(1); break;
      case Face2D::Kind::Corner: report.lambda = Scalar(std::numbers::sqrt2); break;
    }
    report.ok = true;
    report.message = "x2bar = 0 with active budget";
    return report;
  }

  const Vector<Scalar>& u = face2.point;
  std::optional<Scalar> rho;
  switch (f1.kind) {
    case Face2D::Kind::FullSquare: {
      const Scalar m = u.template lpNorm<Eigen::Infinity>();
      if (m < Scalar(1)) rho = std::min(Scalar(2), Scalar(1) / m) / Scalar(2) + Scalar(0.5);
      break;
    }
    case Face2D::Kind::VerticalEdge:
      if (u(0) * Scalar(f1.sign1) > Scalar(0.5)) rho = Scalar(f1.sign1) / u(0);
      break;
    case Face2D::Kind::HorizontalEdge:
      if (u(1) * Scalar(f1.sign2) > Scalar(0.5)) rho = Scalar(f1.sign2) / u(1);
      break;
    case Face2D::Kind::Corner: rho = Scalar(std::numbers::sqrt2); break;
  }
  if (!rho || !(*rho > Scalar(1)) || !(*rho < Scalar(2))) {
    report.message = std::string("no positive multiplier for face ") + to_string(f1.kind);
    return report;
  }
  const Vector<Scalar> scaled = *rho * u;
  if (!f1.contains(scaled, tol)) {
    report.message = std::string("scaled Euclidean face misses face ") + to_string(f1.kind);
    return report;
  }
  report.lambda = lambda_from_rho(*rho);
  report.ok = *report.lambda > Scalar(0);
  report.message = report.ok ? "budget active, faces intersect" : "multiplier not positive";
  return report;
}

/// Integer staircase on the nested support-norm balls: 0 at the origin, the
/// smallest l with support_norm(x, l) <= 1 in the closed ball, +inf outside.
struct LBar0Value {
  std::optional<Index> level;  // empty means +inf

  bool is_infinite() const { return !level.has_value(); }
  template <typename Scalar = double>
  ExtendedReal<Scalar> to_ext() const {
    return level ? ExtendedReal<Scalar>(Scalar(*level)) : ExtendedReal<Scalar>::pos_inf();
  }
  friend bool operator==(const LBar0Value&, const LBar0Value&) = default;
};

template <typename Derived>
LBar0Value lbar0(const Eigen::MatrixBase<Derived>& x) {
  detail::require_valid_vector(x, "lbar0");
  if (l0(x) == 0) return {Index{0}};
  if (!support_ball_contains(x, x.size(), 1)) return {};
  for (Index l = 1; l <= x.size(); ++l)
    if (support_ball_contains(x, l, 1)) return {l};
  return {};
}

template <typename Scalar>
struct AscentResult {
  ExtendedReal<Scalar> value;  // best dual objective found (a lower bound)
  Vector<Scalar> dual_point;
  Index iterations = 0;
  bool converged = false;
};

/// Dual objective <x, y> - capra_conj_l0(y), whose supremum over y is L0(x).
template <typename DerivedX, typename DerivedY>
typename DerivedX::Scalar l0_dual_objective(const Eigen::MatrixBase<DerivedX>& x, const Eigen::MatrixBase<DerivedY>& y) {
  return inner(x, y) - capra_conj_l0(y);
}

/// L0(x) in any dimension by normalized supergradient ascent on the concave
/// dual objective, with best-iterate tracking.
///
/// A supergradient at y is x minus the normalized restriction of y to its
/// top-l support, l being an active order of the conjugate (none when the
/// l = 0 term is active). The base step along the unit supergradient is
/// 1/sqrt(t). When it improves the objective the step is doubled while that
/// keeps improving, then refined by golden section: on the sphere the
/// supremum is only approached at dual points of norm about 1/z^2, z the
/// smallest nonzero |x_i|, which plain diminishing steps never reach.
///
/// Stops after max_iter steps, or when the best value has improved by less
/// than tol/100 over the last 1000 steps (converged = true).
template <typename Derived>
AscentResult<typename Derived::Scalar> calL0_general(const Eigen::MatrixBase<Derived>& x, double tol = 1e-4,
                                                     Index max_iter = 100000) {
  using Scalar = typename Derived::Scalar;
  detail::require_valid_vector(x, "calL0_general");
  const Index d = x.size();
  AscentResult<Scalar> result;
  result.dual_point = Vector<Scalar>::Zero(d);
  if (euclidean_norm(x) > Scalar(1) + Scalar(kBallTolerance)) {
    result.value = ExtendedReal<Scalar>::pos_inf();
    result.converged = true;
    return result;
  }
  const Vector<Scalar> xv = x;
  if (l0(xv) == 0) {
    result.value = ExtendedReal<Scalar>(Scalar(0));
    result.converged = true;
    return result;
  }

  auto psi = [&](const Vector<Scalar>& v) { return l0_dual_objective(xv, v); };
  Vector<Scalar> y = xv;
  Scalar current = psi(y);
  Scalar best = current;
  Vector<Scalar> best_y = y;
  constexpr Index window = 1000;
  Scalar best_at_window_start = best;
  Index t = 1;
  for (; t <= max_iter; ++t) {
    const auto norms = gauge_norms(y);
    Index active = 0;
    Scalar top(0);
    for (Index l = 1; l <= d; ++l)
      if (norms(l) - Scalar(l) > top) {
        top = norms(l) - Scalar(l);
        active = l;
      }
    Vector<Scalar> g = xv;
    if (active > 0 && norms(active) > Scalar(0))
      for (Index i : top_support(y, active)) g(i) -= y(i) / norms(active);
    const Scalar gn = euclidean_norm(g);
    if (gn == Scalar(0)) {  // y is a maximizer
      result.converged = true;
      break;
    }
    g /= gn;

    Scalar step = Scalar(1) / std::sqrt(Scalar(t));
    Scalar value = psi(y + step * g);
    if (value > current) {
      Scalar wide = 2 * step, wide_value = psi(y + wide * g);
      while (wide_value > value) {
        step = wide;
        value = wide_value;
        wide *= 2;
        wide_value = psi(y + wide * g);
      }
      // the maximum along g lies in [step / 2, wide]
      Scalar lo = step / 2, hi = wide;
      constexpr Scalar r = Scalar(0.6180339887498949);
      for (int k = 0; k < 30; ++k) {
        const Scalar m1 = hi - r * (hi - lo), m2 = lo + r * (hi - lo);
        if (psi(y + m1 * g) < psi(y + m2 * g))
          lo = m1;
        else
          hi = m2;
      }
      const Scalar mid = (lo + hi) / 2, mid_value = psi(y + mid * g);
      if (mid_value > value) {
        step = mid;
        value = mid_value;
      }
    }
    y += step * g;
    current = value;
    if (current > best) {
      best = current;
      best_y = y;
    }
    if (t % window == 0) {
      if (best - best_at_window_start < Scalar(tol) / 100) {
        result.converged = true;
        break;
      }
      best_at_window_start = best;
    }
  }
  result.value = ExtendedReal<Scalar>(best);
  result.dual_point = best_y;
  result.iterations = std::min(t, max_iter);
  return result;
}

namespace detail {

// Euclidean projection onto the l1 ball of the given radius.
template <typename Scalar>
Vector<Scalar> project_l1_ball(const Vector<Scalar>& v, Scalar radius) {
  if (radius <= Scalar(0)) return Vector<Scalar>::Zero(v.size());
  if (v.template lpNorm<1>() <= radius) return v;
  std::vector<Scalar> u(static_cast<std::size_t>(v.size()));
  for (Index i = 0; i < v.size(); ++i) u[static_cast<std::size_t>(i)] = std::abs(v(i));
  std::sort(u.begin(), u.end(), std::greater<Scalar>());
  Scalar cumsum(0), theta(0);
  for (std::size_t j = 0; j < u.size(); ++j) {
    cumsum += u[j];
    const Scalar t = (cumsum - radius) / Scalar(j + 1);
    if (u[j] - t > Scalar(0)) theta = t;
  }
  Vector<Scalar> out(v.size());
  for (Index i = 0; i < v.size(); ++i) {
    const Scalar m = std::max(std::abs(v(i)) - theta, Scalar(0));
    out(i) = v(i) < 0 ? -m : m;
  }
  return out;
}

// Upper bound on the distance from x to sum_l weights[l-1] * B_l (support-norm
// balls of orders 1..weights.size()), by Frank-Wolfe with exact line search.
// The linear oracle over B_l returns the normalized top-l restriction.
template <typename Scalar>
Scalar distance_to_ball_sum(const Vector<Scalar>& x, const std::vector<Scalar>& weights, int iterations) {
  const Index d = x.size();
  Vector<Scalar> a = Vector<Scalar>::Zero(d);
  Scalar total(0);
  for (Scalar w : weights) total += w;
  if (total == Scalar(0)) return euclidean_norm(x);
  for (int it = 0; it < iterations; ++it) {
    const Vector<Scalar> g = x - a;
    Vector<Scalar> s = Vector<Scalar>::Zero(d);
    for (std::size_t k = 0; k < weights.size(); ++k) {
      if (weights[k] == Scalar(0)) continue;
      const auto l = static_cast<Index>(k) + 1;
      const auto support = top_support(g, l);
      Scalar n(0);
      for (Index i : support) n += g(i) * g(i);
      n = std::sqrt(n);
      if (n == Scalar(0)) continue;
      for (Index i : support) s(i) += weights[k] * g(i) / n;
    }
    const Vector<Scalar> dir = s - a;
    const Scalar gap = inner(g, dir);
    if (gap <= Scalar(1e-15)) break;
    const Scalar step = std::min(Scalar(1), gap / dir.squaredNorm());
    a += step * dir;
  }
  return euclidean_norm(Vector<Scalar>(x - a));
}

}  // namespace detail

/// Upper bound on L0(x) from the decomposition form
///     min sum_l l * mu_l  s.t.  x in sum_l mu_l B_l,  sum_l mu_l <= 1,
/// with B_l the unit ball of the l-support norm. Weights mu_1..mu_{d-1} are
/// scanned on the simplex grid of step 1/resolution; mu_d is the smallest
/// feasible value, the distance from x to the partial Minkowski sum (exact
/// l1 projection for d = 2, Frank-Wolfe otherwise). Returns +inf when no
/// scanned point is feasible.
template <typename Derived>
ExtendedReal<typename Derived::Scalar> calL0_decomposition_oracle(const Eigen::MatrixBase<Derived>& x, Index resolution,
                                                                  int fw_iterations = 400) {
  using Scalar = typename Derived::Scalar;
  detail::require_valid_vector(x, "calL0_decomposition_oracle");
  if (resolution < 1) throw std::invalid_argument("calL0_decomposition_oracle: resolution must be >= 1");
  const Index d = x.size();
  const Vector<Scalar> xv = x;
  if (l0(xv) == 0) return ExtendedReal<Scalar>(Scalar(0));

  Scalar best = std::numeric_limits<Scalar>::infinity();
  std::vector<Index> counts(static_cast<std::size_t>(d - 1), 0);
  auto evaluate = [&]() {
    std::vector<Scalar> weights(counts.size());
    Scalar used(0), objective(0);
    for (std::size_t k = 0; k < counts.size(); ++k) {
      weights[k] = Scalar(counts[k]) / Scalar(resolution);
      used += weights[k];
      objective += Scalar(k + 1) * weights[k];
    }
    Scalar last;
    if (d == 1) {
      last = std::abs(xv(0));
    } else if (d == 2) {
      last = euclidean_norm(Vector<Scalar>(xv - detail::project_l1_ball(xv, weights[0])));
    } else {
      last = detail::distance_to_ball_sum(xv, weights, fw_iterations);
    }
    if (used + last <= Scalar(1) + Scalar(kFeasibilityTolerance)) best = std::min(best, objective + Scalar(d) * last);
  };
  // Enumerate nonnegative integer counts with sum <= resolution.
  auto recurse = [&](auto&& self, std::size_t k, Index remaining) -> void {
    if (k == counts.size()) {
      evaluate();
      return;
    }
    for (Index c = 0; c <= remaining; ++c) {
      counts[k] = c;
      self(self, k + 1, remaining - c);
    }
    counts[k] = 0;
  };
  recurse(recurse, 0, resolution);
  return std::isinf(best) ? ExtendedReal<Scalar>::pos_inf() : ExtendedReal<Scalar>(best);
}

/// Result of comparing a grid biconjugate of lbar0 with the planar closed form.
struct EpigraphCheck {
  double max_abs_error = 0;      // over interior points away from region boundaries
  Index checked_points = 0;
  Index resolution = 0;
  double dual_step = 0;
  double dual_radius = 0;
  bool origin_consistent = false;   // biconjugate, lbar0 and L0 all vanish at the origin
  bool outside_consistent = false;  // lbar0 and L0 both +inf outside the closed disk
  std::vector<double> axis;         // primal grid coordinates
  std::vector<double> biconjugate;  // row-major values, axis[i] first coordinate
};

namespace detail {

// Distance from (a, b) in the quadrant to the nearest region boundary of the
// planar closed form (circle, l1 edge, triangle/nail lines, nail diagonal).
inline double distance_to_region_boundary(double a, double b) {
  const double m = sqrt2_minus_1();
  const double mixed = std::sqrt(1 + m * m);
  double dist = 1 - std::hypot(a, b);
  dist = std::min(dist, std::abs(a + b - 1) / std::numbers::sqrt2);
  dist = std::min(dist, std::abs(m * a + b - 1) / mixed);
  dist = std::min(dist, std::abs(a + m * b - 1) / mixed);
  if (a + b > 1 && (m * a + b >= 1 || a + m * b >= 1)) dist = std::min(dist, std::abs(a - b) / std::numbers::sqrt2);
  return dist;
}

}  // namespace detail

/// Bilinear-coupling grid biconjugate of lbar0 in the plane, compared with
/// the closed form of L0.
///
/// Primal samples: the square grid of `resolution` points per axis on
/// [-1.1, 1.1]^2 plus 4 (resolution - 1) equally spaced points of the unit
/// circle (which include the four axis points). The circle matters: square
/// grids never hit it, and the closed convex hull is pinned there. Dual grid:
/// step 1 / round((resolution - 1) / 20), so that (+-1, +-1) are grid points,
/// and radius (resolution - 1) / 10.
///
/// Both transforms are plain maxima over the sample sets, organized one
/// coordinate at a time on the product grids. Errors are measured at grid
/// points of the open disk farther than one cell diagonal from every region
/// boundary.
inline EpigraphCheck epigraph_grid_check(Index resolution) {
  if (resolution < 21 || resolution % 2 == 0)
    throw std::invalid_argument("epigraph_grid_check: resolution must be odd and >= 21");
  const auto n = static_cast<std::size_t>(resolution);
  const double h = 2.2 / static_cast<double>(resolution - 1);
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i) xs[i] = (static_cast<double>(i) - static_cast<double>(n - 1) / 2.0) * h;

  const long q = std::max(1L, std::lround(static_cast<double>(resolution - 1) / 20.0));
  const double dy = 1.0 / static_cast<double>(q);
  const double radius = static_cast<double>(resolution - 1) / 10.0;
  const auto half = static_cast<long>(std::lround(radius / dy));
  const auto m = static_cast<std::size_t>(2 * half + 1);
  std::vector<double> ys(m);
  for (std::size_t k = 0; k < m; ++k) ys[k] = static_cast<double>(static_cast<long>(k) - half) * dy;

  constexpr double inf = std::numeric_limits<double>::infinity();
  auto lbar = [](double a, double b) {
    VectorXd p(2);
    p << a, b;
    return lbar0(p).to_ext().value();
  };
  std::vector<double> f(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) f[i * n + j] = lbar(xs[i], xs[j]);

  // Circle samples, angle 2 pi c / count.
  const auto count = static_cast<long>(4 * (resolution - 1));
  auto circle_point = [&](long c) {
    c = ((c % count) + count) % count;
    if ((4 * c) % count == 0) {
      static constexpr double c4[] = {1, 0, -1, 0};
      const auto qd = static_cast<std::size_t>(4 * c / count);
      return std::pair<double, double>{c4[qd], c4[(qd + 3) % 4]};
    }
    const double t = 2.0 * std::numbers::pi * static_cast<double>(c) / static_cast<double>(count);
    return std::pair<double, double>{std::cos(t), std::sin(t)};
  };
  // Max over circle samples of <p, y> - lbar0(p). Off the axes lbar0 is
  // constant, so the best such sample is an angular neighbor of y's direction;
  // the four axis samples carry a smaller value and are always included.
  auto circle_conjugate = [&](double y1, double y2) {
    double best = std::max({y1, -y1, y2, -y2}) - lbar(1.0, 0.0);
    const double phi = std::atan2(y2, y1);
    const auto c = static_cast<long>(std::floor(phi / (2.0 * std::numbers::pi) * static_cast<double>(count)));
    for (long k = c - 2; k <= c + 3; ++k) {
      const auto [p1, p2] = circle_point(k);
      best = std::max(best, p1 * y1 + p2 * y2 - lbar(p1, p2));
    }
    return best;
  };

  // conjugate: f*(y1, y2) = max_i [ x_i y1 + max_j ( x_j y2 - f_ij ) ]
  std::vector<double> inner_max(n * m, -inf);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < m; ++k) {
      double best = -inf;
      for (std::size_t j = 0; j < n; ++j) best = std::max(best, xs[j] * ys[k] - f[i * n + j]);
      inner_max[i * m + k] = best;
    }
  std::vector<double> conj(m * m, -inf);
  for (std::size_t l = 0; l < m; ++l)
    for (std::size_t k = 0; k < m; ++k) {
      double best = circle_conjugate(ys[l], ys[k]);
      for (std::size_t i = 0; i < n; ++i) best = std::max(best, xs[i] * ys[l] + inner_max[i * m + k]);
      conj[l * m + k] = best;
    }
  // biconjugate on the square grid: max_l [ x_i y_l + max_k ( x_j y_k - f*_lk ) ]
  std::vector<double> partial(m * n, -inf);
  for (std::size_t l = 0; l < m; ++l)
    for (std::size_t j = 0; j < n; ++j) {
      double best = -inf;
      for (std::size_t k = 0; k < m; ++k) best = std::max(best, xs[j] * ys[k] - conj[l * m + k]);
      partial[l * n + j] = best;
    }
  EpigraphCheck out;
  out.resolution = resolution;
  out.dual_step = dy;
  out.dual_radius = radius;
  out.axis = xs;
  out.biconjugate.assign(n * n, -inf);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double best = -inf;
      for (std::size_t l = 0; l < m; ++l) best = std::max(best, xs[i] * ys[l] + partial[l * n + j]);
      out.biconjugate[i * n + j] = best;
    }

  const double cell = h * std::numbers::sqrt2;
  bool outside_ok = true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      VectorXd p(2);
      p << xs[i], xs[j];
      const double a = std::abs(xs[i]), b = std::abs(xs[j]);
      const auto closed = calL0_2d(p);
      if (a * a + b * b > 1) {
        outside_ok = outside_ok && closed.is_pos_inf() && std::isinf(f[i * n + j]);
        continue;
      }
      if (detail::distance_to_region_boundary(a, b) <= cell) continue;
      out.max_abs_error = std::max(out.max_abs_error, std::abs(out.biconjugate[i * n + j] - closed.value()));
      ++out.checked_points;
    }
  const std::size_t c = (n - 1) / 2;
  VectorXd origin = VectorXd::Zero(2);
  out.origin_consistent = out.biconjugate[c * n + c] == 0.0 && f[c * n + c] == 0.0 && calL0_2d(origin).value() == 0.0;
  out.outside_consistent = outside_ok;
  return out;
}

}  // namespace capra
