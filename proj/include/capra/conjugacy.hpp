#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "capra/norms.hpp"
#include "capra/xreal.hpp"

namespace capra {

/// Plain index-order inner product. Every coupling and support function in
/// the library goes through this, so identities between grid transforms that
/// visit the same pairs of vectors hold bit for bit.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar inner(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("inner: dimension mismatch");
  typename DerivedA::Scalar s(0);
  for (Index i = 0; i < a.size(); ++i) s += a(i) * b(i);
  return s;
}

/// Normalization mapping: x / |x| for x != 0, and exactly 0 at the origin.
template <typename Derived>
Vector<typename Derived::Scalar> normalize(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  const Scalar n = euclidean_norm(x);
  if (n == Scalar(0)) return Vector<Scalar>::Zero(x.size());
  return x / n;
}

/// Constant-along-primal-rays coupling <x, y> / |x|, with value 0 at x = 0.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar capra_eval(const Eigen::MatrixBase<DerivedA>& x, const Eigen::MatrixBase<DerivedB>& y) {
  return inner(normalize(x), y);
}

/// Sampled support function with the library inner product; -inf on the empty set.
template <typename Scalar, typename Derived>
ExtendedReal<Scalar> support_function(const std::vector<Vector<Scalar>>& points, const Eigen::MatrixBase<Derived>& y) {
  auto best = ExtendedReal<Scalar>::neg_inf();
  for (const auto& p : points) best = max(best, ExtendedReal<Scalar>(inner(p, y)));
  return best;
}

/// Function sampled on a finite set of distinct points, with extended values.
template <typename Scalar>
class GridFunction {
 public:
  using Point = Vector<Scalar>;
  using Value = ExtendedReal<Scalar>;

  GridFunction() = default;

  GridFunction(std::vector<Point> points, std::vector<Value> values)
      : points_(std::move(points)), values_(std::move(values)) {
    if (points_.size() != values_.size())
      throw std::invalid_argument("GridFunction: points and values differ in length");
    if (!points_.empty()) {
      const Index d = points_.front().size();
      for (const auto& p : points_)
        if (p.size() != d) throw std::invalid_argument("GridFunction: points of different dimensions");
    }
    require_distinct();
  }

  /// Samples `f` at every point.
  template <typename F>
  static GridFunction sample(std::vector<Point> points, F&& f) {
    std::vector<Value> values;
    values.reserve(points.size());
    for (const auto& p : points) values.push_back(Value(f(p)));
    return GridFunction(std::move(points), std::move(values));
  }

  /// Characteristic function of `subset` (0 on the subset, +inf elsewhere)
  /// on the grid `points`.
  template <typename Predicate>
  static GridFunction indicator(std::vector<Point> points, Predicate&& in_subset) {
    std::vector<Value> values;
    values.reserve(points.size());
    for (const auto& p : points) values.push_back(in_subset(p) ? Value(Scalar(0)) : Value::pos_inf());
    return GridFunction(std::move(points), std::move(values));
  }

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  Index dimension() const { return points_.empty() ? 0 : points_.front().size(); }
  const std::vector<Point>& points() const { return points_; }
  const std::vector<Value>& values() const { return values_; }
  const Point& point(std::size_t i) const { return points_[i]; }
  const Value& value(std::size_t i) const { return values_[i]; }

 private:
  void require_distinct() const {
    std::vector<std::size_t> order(points_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    auto less = [&](std::size_t a, std::size_t b) {
      const auto& pa = points_[a];
      const auto& pb = points_[b];
      return std::lexicographical_compare(pa.data(), pa.data() + pa.size(), pb.data(), pb.data() + pb.size());
    };
    std::sort(order.begin(), order.end(), less);
    for (std::size_t i = 1; i < order.size(); ++i)
      if (points_[order[i - 1]] == points_[order[i]])
        throw std::invalid_argument("GridFunction: duplicate domain point");
  }

  std::vector<Point> points_;
  std::vector<Value> values_;
};

/// Evaluation rule c(x, y) between primal and dual points.
///
/// Bilinear, one-sided linear and Capra couplings all have the form
/// <theta(x), y>; the engine exploits that by mapping primal points once.
template <typename Scalar>
class Coupling {
 public:
  enum class Tag { Bilinear, OneSidedLinear, Capra, Negated, Custom };

  using Point = Vector<Scalar>;
  using Value = ExtendedReal<Scalar>;
  using Mapping = std::function<Point(const Point&)>;
  using Evaluator = std::function<Value(const Point&, const Point&)>;

  static Coupling bilinear() { return Coupling(Tag::Bilinear); }

  static Coupling one_sided_linear(Mapping theta) {
    if (!theta) throw std::invalid_argument("Coupling: empty mapping");
    Coupling c(Tag::OneSidedLinear);
    c.theta_ = std::move(theta);
    return c;
  }

  static Coupling capra() { return Coupling(Tag::Capra); }

  /// Test hook: a Capra coupling whose origin convention is broken, giving
  /// c(0, y) = |y| instead of 0. Used as a negative control by the verifier.
  static Coupling capra_with_origin_fault() {
    Coupling c(Tag::Capra);
    c.origin_fault_ = true;
    return c;
  }

  static Coupling custom(Evaluator eval) {
    if (!eval) throw std::invalid_argument("Coupling: empty evaluator");
    Coupling c(Tag::Custom);
    c.custom_ = std::move(eval);
    return c;
  }

  /// The coupling -c.
  Coupling negated() const {
    Coupling c(Tag::Negated);
    c.inner_ = std::make_shared<const Coupling>(*this);
    return c;
  }

  Tag tag() const { return tag_; }
  bool has_origin_fault() const { return origin_fault_ || (inner_ && inner_->has_origin_fault()); }

  /// True when c(x, y) = sign * <theta(x), y> for a primal mapping theta.
  bool is_one_sided_linear() const {
    switch (tag_) {
      case Tag::Bilinear:
      case Tag::OneSidedLinear: return true;
      case Tag::Capra: return !origin_fault_;
      case Tag::Negated: return inner_->is_one_sided_linear();
      case Tag::Custom: return false;
    }
    return false;
  }

  /// +1 or -1, the sign in front of <theta(x), y> (one-sided linear only).
  int sign() const { return tag_ == Tag::Negated ? -inner_->sign() : 1; }

  /// theta(x) for one-sided linear couplings.
  Point primal_image(const Point& x) const {
    switch (tag_) {
      case Tag::Bilinear: return x;
      case Tag::OneSidedLinear: return theta_(x);
      case Tag::Capra: return normalize(x);
      case Tag::Negated: return inner_->primal_image(x);
      case Tag::Custom: break;
    }
    throw std::logic_error("Coupling: no primal image for this coupling");
  }

  Value operator()(const Point& x, const Point& y) const {
    switch (tag_) {
      case Tag::Bilinear: return Value(inner(x, y));
      case Tag::OneSidedLinear: return Value(inner(theta_(x), y));
      case Tag::Capra:
        if (origin_fault_ && euclidean_norm(x) == Scalar(0)) return Value(euclidean_norm(y));
        return Value(capra_eval(x, y));
      case Tag::Negated: return -(*inner_)(x, y);
      case Tag::Custom: return custom_(x, y);
    }
    throw std::logic_error("Coupling: unknown tag");
  }

 private:
  explicit Coupling(Tag tag) : tag_(tag) {}

  Tag tag_;
  bool origin_fault_ = false;
  Mapping theta_;
  Evaluator custom_;
  std::shared_ptr<const Coupling> inner_;
};

namespace detail {

// sup over (a, fa) of lower_add(c(a, b), -fa) for every b.
template <typename Scalar>
std::vector<ExtendedReal<Scalar>> sup_transform(const std::vector<Vector<Scalar>>& sources,
                                                const std::vector<ExtendedReal<Scalar>>& source_values,
                                                const std::vector<Vector<Scalar>>& targets,
                                                const Coupling<Scalar>& c, bool sources_are_primal) {
  using Value = ExtendedReal<Scalar>;
  std::vector<Value> out(targets.size(), Value::neg_inf());

  if (c.is_one_sided_linear()) {
    // Map whichever side is primal once; the dual side enters linearly.
    const int sign = c.sign();
    std::vector<Vector<Scalar>> mapped_sources;
    std::vector<Vector<Scalar>> mapped_targets;
    const auto* src = &sources;
    const auto* tgt = &targets;
    if (sources_are_primal) {
      mapped_sources.reserve(sources.size());
      for (const auto& s : sources) mapped_sources.push_back(c.primal_image(s));
      src = &mapped_sources;
    } else {
      mapped_targets.reserve(targets.size());
      for (const auto& t : targets) mapped_targets.push_back(c.primal_image(t));
      tgt = &mapped_targets;
    }
    std::vector<Value> minus_f;
    minus_f.reserve(source_values.size());
    for (const auto& v : source_values) minus_f.push_back(-v);
    for (std::size_t j = 0; j < tgt->size(); ++j) {
      Value best = Value::neg_inf();
      const auto& t = (*tgt)[j];
      for (std::size_t i = 0; i < src->size(); ++i) {
        const Scalar dot = inner((*src)[i], t);
        const Value cv(sign > 0 ? dot : -dot);
        best = max(best, lower_add(cv, minus_f[i]));
      }
      out[j] = best;
    }
    return out;
  }

  for (std::size_t j = 0; j < targets.size(); ++j) {
    Value best = Value::neg_inf();
    for (std::size_t i = 0; i < sources.size(); ++i) {
      const Value cv = sources_are_primal ? c(sources[i], targets[j]) : c(targets[j], sources[i]);
      best = max(best, lower_add(cv, -source_values[i]));
    }
    out[j] = best;
  }
  return out;
}

}  // namespace detail

/// c-Fenchel-Moreau conjugate on a grid: y -> sup_x [ c(x,y) +lower (-f(x)) ].
template <typename Scalar>
GridFunction<Scalar> conjugate(const GridFunction<Scalar>& f, const Coupling<Scalar>& c,
                               std::vector<Vector<Scalar>> dual_points) {
  if (f.empty()) throw std::invalid_argument("conjugate: empty primal grid");
  auto values = detail::sup_transform(f.points(), f.values(), dual_points, c, true);
  return GridFunction<Scalar>(std::move(dual_points), std::move(values));
}

/// Conjugate with respect to the reverse coupling: x -> sup_y [ c(x,y) +lower (-g(y)) ].
template <typename Scalar>
GridFunction<Scalar> reverse_conjugate(const GridFunction<Scalar>& g, const Coupling<Scalar>& c,
                                       std::vector<Vector<Scalar>> primal_points) {
  if (g.empty()) throw std::invalid_argument("reverse_conjugate: empty dual grid");
  auto values = detail::sup_transform(g.points(), g.values(), primal_points, c, false);
  return GridFunction<Scalar>(std::move(primal_points), std::move(values));
}

template <typename Scalar>
GridFunction<Scalar> biconjugate(const GridFunction<Scalar>& f, const Coupling<Scalar>& c,
                                 std::vector<Vector<Scalar>> dual_points) {
  return reverse_conjugate(conjugate(f, c, std::move(dual_points)), c, f.points());
}

/// Conjugate with respect to the negated coupling -c.
template <typename Scalar>
GridFunction<Scalar> minus_conjugate(const GridFunction<Scalar>& f, const Coupling<Scalar>& c,
                                     std::vector<Vector<Scalar>> dual_points) {
  return conjugate(f, c.negated(), std::move(dual_points));
}

template <typename Scalar>
struct DualityBounds {
  ExtendedReal<Scalar> dual_bound;    // sup_y [ (-f^c(y)) +lower (-h^{-c}(y)) ]
  ExtendedReal<Scalar> primal_value;  // inf_x [ f(x) +upper h(x) ]

  ExtendedReal<Scalar> gap() const { return upper_add(primal_value, -dual_bound); }
};

/// Both sides of the generic weak duality inequality on a shared primal grid.
template <typename Scalar>
DualityBounds<Scalar> weak_duality_gap(const GridFunction<Scalar>& f, const GridFunction<Scalar>& h,
                                       const Coupling<Scalar>& c, const std::vector<Vector<Scalar>>& dual_points) {
  if (f.points() != h.points()) throw std::invalid_argument("weak_duality_gap: f and h must share their grid");
  using Value = ExtendedReal<Scalar>;
  const auto fc = conjugate(f, c, dual_points);
  const auto hc = minus_conjugate(h, c, dual_points);
  Value dual = Value::neg_inf();
  for (std::size_t j = 0; j < dual_points.size(); ++j) dual = max(dual, lower_add(-fc.value(j), -hc.value(j)));
  Value primal = Value::pos_inf();
  for (std::size_t i = 0; i < f.size(); ++i) primal = min(primal, upper_add(f.value(i), h.value(i)));
  return {dual, primal};
}

/// Infimal postcomposition: x -> inf { f(w) : theta(w) = x }, +inf on an empty
/// preimage. Points match exactly by default; a positive `match_tolerance`
/// matches in the max-norm instead.
template <typename Scalar, typename Mapping>
GridFunction<Scalar> infimal_postcomposition(Mapping&& theta, const GridFunction<Scalar>& f,
                                             std::vector<Vector<Scalar>> targets, double match_tolerance = 0.0) {
  using Value = ExtendedReal<Scalar>;
  std::vector<Value> values(targets.size(), Value::pos_inf());
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.value(i).is_pos_inf()) continue;  // outside the effective domain theta need not be defined
    const Vector<Scalar> image = theta(f.point(i));
    for (std::size_t j = 0; j < targets.size(); ++j) {
      if (targets[j].size() != image.size()) throw std::invalid_argument("infimal_postcomposition: dimension mismatch");
      const bool match = match_tolerance > 0
                             ? (targets[j] - image).template lpNorm<Eigen::Infinity>() <= match_tolerance
                             : targets[j] == image;
      if (match) values[j] = min(values[j], f.value(i));
    }
  }
  return GridFunction<Scalar>(std::move(targets), std::move(values));
}

enum class SphereScheme { Auto, Uniform, Fibonacci, QuasiRandom };

/// Deterministic point sets on the unit sphere of R^d.
///
/// Uniform angles (d = 2, shifted by `phase` steps), a Fibonacci lattice
/// (d = 3) or normalized Halton points (any d, starting at index `seed`).
/// For d = 1 the sphere is {1, -1} and n must be 2.
template <typename Scalar = double>
std::vector<Vector<Scalar>> sphere_grid(Index d, Index n, SphereScheme scheme = SphereScheme::Auto,
                                        std::uint64_t seed = 0, double phase = 0.0) {
  if (d < 1) throw std::invalid_argument("sphere_grid: dimension must be >= 1");
  if (n < 2) throw std::invalid_argument("sphere_grid: need at least 2 points");
  std::vector<Vector<Scalar>> out;
  out.reserve(static_cast<std::size_t>(n));
  if (d == 1) {
    if (n != 2) throw std::invalid_argument("sphere_grid: the 0-sphere has exactly 2 points");
    out.push_back(Vector<Scalar>::Constant(1, Scalar(1)));
    out.push_back(Vector<Scalar>::Constant(1, Scalar(-1)));
    return out;
  }
  if (scheme == SphereScheme::Auto) scheme = d == 2 ? SphereScheme::Uniform : d == 3 ? SphereScheme::Fibonacci : SphereScheme::QuasiRandom;

  if (scheme == SphereScheme::Uniform) {
    if (d != 2) throw std::invalid_argument("sphere_grid: uniform angles need d = 2");
    for (Index i = 0; i < n; ++i) {
      Vector<Scalar> p(2);
      if (phase == 0.0 && (4 * i) % n == 0) {
        // exact quarter turns
        static constexpr int c4[] = {1, 0, -1, 0};
        const auto q = static_cast<std::size_t>(4 * i / n);
        p << Scalar(c4[q]), Scalar(c4[(q + 3) % 4]);
      } else {
        const double angle = 2.0 * std::numbers::pi * (static_cast<double>(i) + phase) / static_cast<double>(n);
        p << Scalar(std::cos(angle)), Scalar(std::sin(angle));
      }
      out.push_back(std::move(p));
    }
    return out;
  }

  if (scheme == SphereScheme::Fibonacci) {
    if (d != 3) throw std::invalid_argument("sphere_grid: Fibonacci lattice needs d = 3");
    const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (Index i = 0; i < n; ++i) {
      const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(n);
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double t = golden_angle * static_cast<double>(i) + 2.0 * std::numbers::pi * phase;
      Vector<Scalar> p(3);
      p << Scalar(r * std::cos(t)), Scalar(r * std::sin(t)), Scalar(z);
      out.push_back(normalize(p));
    }
    return out;
  }

  // Halton sequence in [-1,1]^d, normalized; points too close to the origin are skipped.
  static constexpr int primes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
                                   59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131};
  if (d > static_cast<Index>(std::size(primes))) throw std::invalid_argument("sphere_grid: dimension too large for Halton points");
  auto radical_inverse = [](std::uint64_t index, int base) {
    double result = 0.0;
    double f = 1.0 / base;
    while (index > 0) {
      result += f * static_cast<double>(index % static_cast<std::uint64_t>(base));
      index /= static_cast<std::uint64_t>(base);
      f /= base;
    }
    return result;
  };
  for (std::uint64_t index = seed + 1; static_cast<Index>(out.size()) < n; ++index) {
    Vector<Scalar> p(d);
    for (Index k = 0; k < d; ++k) p(k) = Scalar(2.0 * radical_inverse(index, primes[k]) - 1.0);
    if (euclidean_norm(p) < Scalar(1e-3)) continue;
    out.push_back(normalize(p));
  }
  return out;
}

}  // namespace capra
