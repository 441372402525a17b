#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "capra/conjugacy.hpp"
#include "capra/norms.hpp"
#include "capra/xreal.hpp"

namespace capra {

/// Slack for the norm-equality level-set test.
inline constexpr double kLevelTolerance = 1e-10;

/// Number of components with |x_i| > zero_tolerance. The default counts
/// exact nonzeros; thresholding real data is the caller's policy.
template <typename Derived>
Index l0(const Eigen::MatrixBase<Derived>& x, double zero_tolerance = 0.0) {
  Index count = 0;
  for (Index i = 0; i < x.size(); ++i)
    if (std::abs(static_cast<double>(x(i))) > zero_tolerance) ++count;
  return count;
}

/// l0(x) <= k, tested through the equality of the top-k and Euclidean norms.
template <typename Derived>
bool level_set_member(const Eigen::MatrixBase<Derived>& x, Index k, double tolerance = kLevelTolerance) {
  detail::require_order(k, 0, x.size(), "level_set_member");
  return std::abs(static_cast<double>(gauge_norm(x, k) - euclidean_norm(x))) <= tolerance;
}

/// Capra conjugate (and -Capra conjugate) of the characteristic function of
/// the level set {l0 <= k}: the top-k norm.
template <typename Derived>
typename Derived::Scalar capra_conj_levelset(Index k, const Eigen::MatrixBase<Derived>& y) {
  return gauge_norm(y, k);
}

/// Capra conjugate of l0: max over l in {0..d} of (top-l norm of y) - l.
template <typename Derived>
typename Derived::Scalar capra_conj_l0(const Eigen::MatrixBase<Derived>& y) {
  using Scalar = typename Derived::Scalar;
  const auto norms = gauge_norms(y);
  Scalar best(0);
  for (Index l = 1; l < norms.size(); ++l) best = std::max(best, norms(l) - Scalar(l));
  return best;
}

/// Evidence that the Capra biconjugate of l0 at x equals l0(x): along the ray
/// y = lambda * x the dual objective phi(lambda) reaches l0(x) for every
/// lambda >= lambda_threshold.
template <typename Scalar>
struct RayCertificate {
  Vector<Scalar> x;
  Index l = 0;
  Scalar lambda_threshold = 0;
  std::vector<std::pair<Scalar, Scalar>> phi_samples;  // (lambda, phi(lambda))
};

/// phi(lambda) = c(x, lambda x) +lower (-capra_conj_l0(lambda x)) along the ray.
///
/// With s_j the top-j norms of x, c(x, lambda x) = lambda |x| and the conjugate
/// is max_j (lambda s_j - j), so phi(lambda) = min_j (lambda (|x| - s_j) + j).
/// The termwise form is evaluated: for j >= l0(x) the bracket is exactly zero,
/// which makes phi(lambda) = l0(x) an exact floating-point identity past the
/// threshold.
template <typename Derived>
typename Derived::Scalar ray_phi(const Eigen::MatrixBase<Derived>& x, typename Derived::Scalar lambda) {
  using Scalar = typename Derived::Scalar;
  const auto s = gauge_norms(x);
  const Index d = x.size();
  const Scalar norm = s(d);
  Scalar best = std::numeric_limits<Scalar>::infinity();
  for (Index j = 0; j <= d; ++j) best = std::min(best, lambda * (norm - s(j)) + Scalar(j));
  return best;
}

/// Capra biconjugate of l0 at x, returned with its ray certificate.
///
/// The threshold is max over j < l of (l - j) / (s_l - s_j), the last lambda
/// at which one of the lower-order terms can still undercut l.
template <typename Derived>
std::pair<Index, RayCertificate<typename Derived::Scalar>> capra_biconj_l0(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  RayCertificate<Scalar> cert;
  cert.x = x;
  cert.l = l0(x);
  if (cert.l == 0) return {0, cert};

  const auto s = gauge_norms(x);
  const Scalar sl = s(cert.l);
  Scalar threshold(0);
  for (Index j = 0; j < cert.l; ++j) threshold = std::max(threshold, Scalar(cert.l - j) / (sl - s(j)));
  cert.lambda_threshold = threshold;
  for (Scalar factor : {Scalar(1.25), Scalar(1.5), Scalar(2), Scalar(4), Scalar(16)}) {
    const Scalar lambda = factor * threshold;
    cert.phi_samples.emplace_back(lambda, ray_phi(x, lambda));
  }
  return {cert.l, cert};
}

/// Generic dual objective at a sampled y: capra_eval(x, y) +lower (-capra_conj_l0(y)).
/// Never above l0(x) (up to rounding).
template <typename DerivedX, typename DerivedY>
typename DerivedX::Scalar capra_dual_value(const Eigen::MatrixBase<DerivedX>& x, const Eigen::MatrixBase<DerivedY>& y) {
  return capra_eval(x, y) - capra_conj_l0(y);
}

/// n unit vectors with at most k nonzero components, cycling over all supports
/// of size k. On each support the direction comes from sphere_grid(k, .);
/// for k = 1 the points alternate between +e_i and -e_i.
template <typename Scalar = double>
std::vector<Vector<Scalar>> sphere_levelset_samples(Index d, Index k, Index n, std::uint64_t seed = 0) {
  if (k < 1 || k > d) throw std::out_of_range("sphere_levelset_samples: need 1 <= k <= d");
  if (n < 1) throw std::invalid_argument("sphere_levelset_samples: need n >= 1");

  std::vector<std::vector<Index>> supports;
  std::vector<Index> current;
  auto enumerate = [&](auto&& self, Index start) -> void {
    if (static_cast<Index>(current.size()) == k) {
      supports.push_back(current);
      return;
    }
    for (Index i = start; i < d; ++i) {
      current.push_back(i);
      self(self, i + 1);
      current.pop_back();
    }
  };
  enumerate(enumerate, 0);

  const auto m = static_cast<Index>(supports.size());
  std::vector<Vector<Scalar>> out;
  out.reserve(static_cast<std::size_t>(n));
  for (Index s = 0; s < m && s < n; ++s) {
    const Index count = n / m + (s < n % m ? 1 : 0);
    std::vector<Vector<Scalar>> local;
    if (k == 1) {
      for (Index i = 0; i < count; ++i) local.push_back(Vector<Scalar>::Constant(1, i % 2 == 0 ? Scalar(1) : Scalar(-1)));
    } else {
      local = sphere_grid<Scalar>(k, std::max<Index>(count, 2), SphereScheme::Auto, seed);
      local.resize(static_cast<std::size_t>(count));
    }
    for (const auto& dir : local) {
      Vector<Scalar> p = Vector<Scalar>::Zero(d);
      for (Index i = 0; i < k; ++i) p(supports[static_cast<std::size_t>(s)][static_cast<std::size_t>(i)]) = dir(i);
      out.push_back(std::move(p));
    }
  }
  // Interleave so that any prefix covers supports evenly.
  std::vector<Vector<Scalar>> interleaved;
  interleaved.reserve(out.size());
  std::vector<std::size_t> offsets;
  std::size_t pos = 0;
  for (Index s = 0; s < m && s < n; ++s) {
    offsets.push_back(pos);
    pos += static_cast<std::size_t>(n / m + (s < n % m ? 1 : 0));
  }
  for (std::size_t round = 0; interleaved.size() < out.size(); ++round)
    for (std::size_t s = 0; s < offsets.size(); ++s) {
      const std::size_t end = s + 1 < offsets.size() ? offsets[s + 1] : out.size();
      if (offsets[s] + round < end) interleaved.push_back(out[offsets[s] + round]);
    }
  return interleaved;
}

/// l0 sampled on {0} and on unit vectors of every sparsity level: n samples
/// per level k = 1..d, duplicates (axis points reached from several levels)
/// removed. Since the Capra coupling only sees directions, this grid is the
/// natural primal discretization for the Capra conjugate of l0.
template <typename Scalar = double>
GridFunction<Scalar> l0_sphere_grid(Index d, Index n, std::uint64_t seed = 0) {
  std::vector<Vector<Scalar>> points{Vector<Scalar>::Zero(d)};
  for (Index k = 1; k <= d; ++k) {
    const Index count = k == 1 ? std::min<Index>(n, 2 * d) : n;
    for (auto& p : sphere_levelset_samples<Scalar>(d, k, count, seed)) points.push_back(std::move(p));
  }
  auto less = [](const Vector<Scalar>& a, const Vector<Scalar>& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
  };
  std::sort(points.begin(), points.end(), less);
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return GridFunction<Scalar>::sample(std::move(points), [](const Vector<Scalar>& x) { return Scalar(l0(x)); });
}

}  // namespace capra
