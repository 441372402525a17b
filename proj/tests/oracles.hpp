#pragma once

// Reference computations written without the library's algorithms: subset
// enumeration, direct maximization and direct minimization. Slow on purpose.

#include <Eigen/Core>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

using Vec = Eigen::VectorXd;
using Rng = std::mt19937_64;

/// max over subsets K with |K| <= k of |x_K|, squares summed in index order.
inline double gauge_by_subsets(const Vec& x, long k) {
  const auto d = static_cast<unsigned>(x.size());
  double best = 0;
  for (unsigned mask = 0; mask < (1u << d); ++mask) {
    if (std::popcount(mask) > k) continue;
    double s = 0;
    for (unsigned i = 0; i < d; ++i)
      if (mask & (1u << i)) s += x(i) * x(i);
    best = std::max(best, std::sqrt(s));
  }
  return best;
}

inline double ratio_to_gauge(const Vec& x, const Vec& y, long k) {
  const double g = gauge_by_subsets(y, k);
  return g == 0 ? 0 : x.dot(y) / g;
}

/// Dual norm of the top-k norm by local ascent of <x, y> / |y|_(k).
///
/// The ratio is maximized on the curve y(c) = sign(x) * max(|x|, c), c >= 0:
/// a dense scan followed by golden-section refinement around the best cell.
inline double support_by_ascent(const Vec& x, long k) {
  const double top = x.cwiseAbs().maxCoeff();
  if (top == 0) return 0;
  auto curve = [&](double c) {
    Vec y(x.size());
    for (long i = 0; i < x.size(); ++i) y(i) = x(i) == 0 ? 0 : std::copysign(std::max(std::abs(x(i)), c), x(i));
    return ratio_to_gauge(x, y, k);
  };
  constexpr int cells = 400;
  int best_i = 0;
  double best = curve(0);
  for (int i = 1; i <= cells; ++i) {
    const double v = curve(top * i / cells);
    if (v > best) best = v, best_i = i;
  }
  double lo = top * std::max(0, best_i - 1) / cells, hi = top * std::min(cells, best_i + 1) / cells;
  for (int it = 0; it < 100; ++it) {
    const double m1 = lo + (hi - lo) * 0.381966, m2 = lo + (hi - lo) * 0.618034;
    if (curve(m1) < curve(m2)) lo = m1; else hi = m2;
  }
  return std::max(best, curve((lo + hi) / 2));
}

/// Capra conjugate of l0 from its definition on the sphere pieces:
/// max over l of ( max_{|K| <= l} |y_K| - l ).
inline double capra_conj_l0_by_subsets(const Vec& y) {
  double best = 0;
  for (long l = 1; l <= y.size(); ++l) best = std::max(best, gauge_by_subsets(y, l) - double(l));
  return best;
}

/// min |x1|_1 + 2 |x2| subject to |x1|_1 + |x2| <= 1, x1 + x2 = x, for planar x,
/// by scanning x2 on a polar grid and polishing with a shrinking pattern search.
inline double planar_decomposition_min(const Vec& x) {
  auto cost = [&](double u, double v) {
    const double l1 = std::abs(x(0) - u) + std::abs(x(1) - v);
    const double l2 = std::hypot(u, v);
    if (l1 + l2 > 1 + 1e-15) return std::numeric_limits<double>::infinity();
    return l1 + 2 * l2;
  };
  double bu = 0, bv = 0, best = cost(0, 0);
  const double r = std::hypot(x(0), x(1));
  for (int i = 0; i <= 300; ++i)
    for (int j = 0; j <= 300; ++j) {
      const double u = -r + 2 * r * i / 300, v = -r + 2 * r * j / 300;
      const double c = cost(u, v);
      if (c < best) best = c, bu = u, bv = v;
    }
  for (double h = 2 * r / 300; h > 1e-13; h *= 0.5) {
    bool moved = true;
    while (moved) {
      moved = false;
      for (auto [du, dv] : {std::pair{h, 0.0}, {-h, 0.0}, {0.0, h}, {0.0, -h}, {h, h}, {-h, -h}, {h, -h}, {-h, h}}) {
        const double c = cost(bu + du, bv + dv);
        if (c < best) best = c, bu += du, bv += dv, moved = true;
      }
    }
  }
  return best;
}

// --- random inputs ---------------------------------------------------------

inline Vec gaussian(Rng& rng, long d) {
  std::normal_distribution<double> n;
  Vec x(d);
  for (long i = 0; i < d; ++i) x(i) = n(rng);
  return x;
}

/// Gaussian vector with a uniformly random support size in 1..d.
inline Vec sparse(Rng& rng, long d) {
  Vec x = gaussian(rng, d);
  std::vector<long> idx(static_cast<std::size_t>(d));
  std::iota(idx.begin(), idx.end(), 0L);
  std::shuffle(idx.begin(), idx.end(), rng);
  const long l = std::uniform_int_distribution<long>(1, d)(rng);
  for (long i = l; i < d; ++i) x(idx[static_cast<std::size_t>(i)]) = 0;
  return x;
}

inline Vec in_disk(Rng& rng, double radius) {
  std::uniform_real_distribution<double> u(-radius, radius);
  Vec x(2);
  do x << u(rng), u(rng);
  while (x.norm() > radius);
  return x;
}

inline Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

}  // namespace oracle
