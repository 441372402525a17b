#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "capra/xreal.hpp"

namespace capra {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using VectorXd = Vector<double>;
using Index = Eigen::Index;

/// Absolute slack used by the ball membership tests.
inline constexpr double kBallTolerance = 1e-9;

namespace detail {

template <typename Derived>
void require_valid_vector(const Eigen::MatrixBase<Derived>& x, const char* who) {
  if (x.size() < 1) throw std::invalid_argument(std::string(who) + ": vector must have dimension >= 1");
  if (!x.allFinite()) throw std::invalid_argument(std::string(who) + ": vector components must be finite");
}

inline void require_order(Index k, Index lo, Index hi, const char* who) {
  if (k < lo || k > hi)
    throw std::out_of_range(std::string(who) + ": order k=" + std::to_string(k) + " outside [" +
                            std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

}  // namespace detail

/// Indices sorted by decreasing magnitude; ties keep the smaller index first,
/// so the top-l support is the lexicographically smallest one.
template <typename Derived>
std::vector<Index> magnitude_ranking(const Eigen::MatrixBase<Derived>& x) {
  std::vector<Index> order(static_cast<std::size_t>(x.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return std::abs(x(a)) > std::abs(x(b)); });
  return order;
}

/// Indices of the l largest-magnitude components, in increasing index order.
template <typename Derived>
std::vector<Index> top_support(const Eigen::MatrixBase<Derived>& x, Index l) {
  detail::require_order(l, 0, x.size(), "top_support");
  auto order = magnitude_ranking(x);
  order.resize(static_cast<std::size_t>(l));
  std::sort(order.begin(), order.end());
  return order;
}

/// All top-k gauge norms at once: entry l is the Euclidean norm of the l
/// largest-magnitude components (entry 0 is 0, entry d is the Euclidean norm).
///
/// Squares are always summed in increasing index order over the selected set.
/// Zero components therefore never perturb a sum, and entries l >= l0(x) are
/// bitwise equal to the Euclidean norm.
template <typename Derived>
Vector<typename Derived::Scalar> gauge_norms(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  detail::require_valid_vector(x, "gauge_norms");
  const Index d = x.size();
  const auto order = magnitude_ranking(x);
  std::vector<bool> selected(static_cast<std::size_t>(d), false);
  Vector<Scalar> out(d + 1);
  out(0) = Scalar(0);
  for (Index l = 1; l <= d; ++l) {
    selected[static_cast<std::size_t>(order[static_cast<std::size_t>(l - 1)])] = true;
    Scalar sum(0);
    for (Index i = 0; i < d; ++i)
      if (selected[static_cast<std::size_t>(i)]) sum += x(i) * x(i);
    out(l) = std::sqrt(sum);
  }
  return out;
}

/// 2-k-symmetric gauge (top-k) norm. k = 0 gives 0, k = d the Euclidean norm.
template <typename Derived>
typename Derived::Scalar gauge_norm(const Eigen::MatrixBase<Derived>& x, Index k) {
  using Scalar = typename Derived::Scalar;
  detail::require_valid_vector(x, "gauge_norm");
  detail::require_order(k, 0, x.size(), "gauge_norm");
  Scalar sum(0);
  for (Index i : top_support(x, k)) sum += x(i) * x(i);
  return std::sqrt(sum);
}

/// Euclidean norm, summed the same way as gauge_norm(x, d).
template <typename Derived>
typename Derived::Scalar euclidean_norm(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  Scalar sum(0);
  for (Index i = 0; i < x.size(); ++i) sum += x(i) * x(i);
  return std::sqrt(sum);
}

/// k-support norm, the dual norm of gauge_norm(., k).
///
/// Sorted closed form: with z = |x| sorted decreasingly (z_0 = +inf), pick the
/// r in {0, ..., k-1} such that
///     z_{k-r-1} > T_r / (r+1) >= z_{k-r},   T_r = sum_{i >= k-r} z_i,
/// then the squared norm is sum_{i < k-r} z_i^2 + T_r^2 / (r+1).
template <typename Derived>
typename Derived::Scalar support_norm(const Eigen::MatrixBase<Derived>& x, Index k) {
  using Scalar = typename Derived::Scalar;
  detail::require_valid_vector(x, "support_norm");
  const Index d = x.size();
  detail::require_order(k, 1, d, "support_norm");

  std::vector<Scalar> z(static_cast<std::size_t>(d) + 1);
  z[0] = std::numeric_limits<Scalar>::infinity();
  for (Index i = 0; i < d; ++i) z[static_cast<std::size_t>(i) + 1] = std::abs(x(i));
  std::sort(z.begin() + 1, z.end(), std::greater<Scalar>());
  if (z[1] == Scalar(0)) return Scalar(0);

  // suffix[j] = z_j + ... + z_d (1-based)
  std::vector<Scalar> suffix(static_cast<std::size_t>(d) + 2, Scalar(0));
  for (Index j = d; j >= 1; --j)
    suffix[static_cast<std::size_t>(j)] = suffix[static_cast<std::size_t>(j) + 1] + z[static_cast<std::size_t>(j)];

  auto norm_for = [&](Index r) {
    const Index head = k - r - 1;
    Scalar sq(0);
    for (Index i = 1; i <= head; ++i) sq += z[static_cast<std::size_t>(i)] * z[static_cast<std::size_t>(i)];
    const Scalar tail = suffix[static_cast<std::size_t>(k - r)];
    return std::sqrt(sq + tail * tail / Scalar(r + 1));
  };

  Index best_r = k - 1;
  Scalar best_violation = std::numeric_limits<Scalar>::infinity();
  for (Index r = 0; r < k; ++r) {
    const Scalar avg = suffix[static_cast<std::size_t>(k - r)] / Scalar(r + 1);
    const Scalar upper = z[static_cast<std::size_t>(k - r - 1)];
    const Scalar lower = z[static_cast<std::size_t>(k - r)];
    if (upper > avg && avg >= lower) return norm_for(r);
    // Rounding can break the exact bracketing when magnitudes tie; fall back
    // to the least-violated candidate.
    const Scalar violation = std::max(Scalar(0), avg - upper) + std::max(Scalar(0), lower - avg);
    if (violation < best_violation) {
      best_violation = violation;
      best_r = r;
    }
  }
  return norm_for(best_r);
}

template <typename Derived>
bool gauge_ball_contains(const Eigen::MatrixBase<Derived>& x, Index k, typename Derived::Scalar radius,
                         double tolerance = kBallTolerance) {
  if (radius < 0) throw std::invalid_argument("gauge_ball_contains: radius must be nonnegative");
  return gauge_norm(x, k) <= radius + tolerance;
}

template <typename Derived>
bool support_ball_contains(const Eigen::MatrixBase<Derived>& x, Index k, typename Derived::Scalar radius,
                           double tolerance = kBallTolerance) {
  if (radius < 0) throw std::invalid_argument("support_ball_contains: radius must be nonnegative");
  return support_norm(x, k) <= radius + tolerance;
}

/// Support function of a finite point set: max over points of <p, y>.
/// The empty set gives -inf.
template <typename Scalar, typename Derived>
ExtendedReal<Scalar> support_function_sampled(const std::vector<Vector<Scalar>>& points,
                                              const Eigen::MatrixBase<Derived>& y) {
  auto best = ExtendedReal<Scalar>::neg_inf();
  for (const auto& p : points) {
    if (p.size() != y.size()) throw std::invalid_argument("support_function_sampled: dimension mismatch");
    best = max(best, ExtendedReal<Scalar>(p.dot(y)));
  }
  return best;
}

/// Exposed face of the square [-1,1]^2 (the unit ball of the top-1 norm in
/// the plane) in the direction of an anchor point.
struct Face2D {
  enum class Kind { FullSquare, VerticalEdge, HorizontalEdge, Corner };

  Kind kind = Kind::FullSquare;
  int sign1 = 0;  // fixed first coordinate for VerticalEdge and Corner
  int sign2 = 0;  // fixed second coordinate for HorizontalEdge and Corner

  /// Membership with absolute slack on every constraint.
  template <typename Derived>
  bool contains(const Eigen::MatrixBase<Derived>& p, double tolerance = kBallTolerance) const {
    const double p1 = static_cast<double>(p(0));
    const double p2 = static_cast<double>(p(1));
    auto in_segment = [&](double v) { return std::abs(v) <= 1 + tolerance; };
    auto at = [&](double v, int s) { return std::abs(v - s) <= tolerance; };
    switch (kind) {
      case Kind::FullSquare: return in_segment(p1) && in_segment(p2);
      case Kind::VerticalEdge: return at(p1, sign1) && in_segment(p2);
      case Kind::HorizontalEdge: return in_segment(p1) && at(p2, sign2);
      case Kind::Corner: return at(p1, sign1) && at(p2, sign2);
    }
    return false;
  }

  friend bool operator==(const Face2D&, const Face2D&) = default;
};

inline const char* to_string(Face2D::Kind kind) {
  switch (kind) {
    case Face2D::Kind::FullSquare: return "full_square";
    case Face2D::Kind::VerticalEdge: return "vertical_edge";
    case Face2D::Kind::HorizontalEdge: return "horizontal_edge";
    case Face2D::Kind::Corner: return "corner";
  }
  return "?";
}

namespace detail {
template <typename Scalar>
int sign_of(Scalar v) {
  return (v > Scalar(0)) - (v < Scalar(0));
}
}  // namespace detail

template <typename Derived>
Face2D face_l1_ball_2d(const Eigen::MatrixBase<Derived>& anchor) {
  if (anchor.size() != 2) throw std::invalid_argument("face_l1_ball_2d: anchor must be two-dimensional");
  const int s1 = detail::sign_of(anchor(0));
  const int s2 = detail::sign_of(anchor(1));
  if (s1 == 0 && s2 == 0) return {Face2D::Kind::FullSquare, 0, 0};
  if (s2 == 0) return {Face2D::Kind::VerticalEdge, s1, 0};
  if (s1 == 0) return {Face2D::Kind::HorizontalEdge, 0, s2};
  return {Face2D::Kind::Corner, s1, s2};
}

/// Exposed face of the Euclidean unit ball: the normalized anchor, or the
/// whole ball when the anchor is zero.
template <typename Scalar>
struct EuclideanFace {
  bool whole_ball = true;
  Vector<Scalar> point;

  template <typename Derived>
  bool contains(const Eigen::MatrixBase<Derived>& p, double tolerance = kBallTolerance) const {
    if (whole_ball) return euclidean_norm(p) <= 1 + tolerance;
    return (p - point).template lpNorm<Eigen::Infinity>() <= tolerance;
  }
};

template <typename Derived>
EuclideanFace<typename Derived::Scalar> face_euclidean_ball(const Eigen::MatrixBase<Derived>& anchor) {
  using Scalar = typename Derived::Scalar;
  const Scalar n = euclidean_norm(anchor);
  if (n == Scalar(0)) return {true, Vector<Scalar>::Zero(anchor.size())};
  return {false, anchor / n};
}

}  // namespace capra
