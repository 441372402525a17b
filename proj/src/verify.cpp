#include "capra/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "capra/conjugacy.hpp"
#include "capra/hidden_convexity.hpp"
#include "capra/l0.hpp"
#include "capra/norms.hpp"
#include "capra/xreal.hpp"

namespace capra::verify {
namespace {

using Rng = std::mt19937_64;

// Accumulates checks for one suite; keeps the first failure message.
class Tally {
 public:
  Tally(SuiteResult& result, double tolerance) : r_(result), tol_(tolerance) {}

  void deviation(double dev, const std::string& what) { deviation(dev, what, tol_); }
  void deviation(double dev, const std::string& what, double tol) {
    ++r_.checks;
    r_.max_deviation = std::max(r_.max_deviation, dev);
    if (!(dev <= tol)) fail(what + " (deviation " + format(dev) + ")");
  }
  void expect(bool ok, const std::string& what) {
    ++r_.checks;
    if (!ok) fail(what);
  }

 private:
  static std::string format(double v) {
    std::ostringstream os;
    os << std::setprecision(3) << v;
    return os.str();
  }
  void fail(const std::string& what) {
    if (r_.passed) r_.detail = what;
    r_.passed = false;
  }

  SuiteResult& r_;
  double tol_;
};

std::size_t scaled(const Config& c, std::size_t n) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(static_cast<double>(n) * c.scale)));
}

VectorXd random_vector(Rng& rng, Index d) {
  std::normal_distribution<double> normal;
  VectorXd x(d);
  for (Index i = 0; i < d; ++i) x(i) = normal(rng);
  return x;
}

// Random vector with a random support of random size in 1..d.
VectorXd random_sparse(Rng& rng, Index d) {
  VectorXd x = random_vector(rng, d);
  std::vector<Index> idx(static_cast<std::size_t>(d));
  std::iota(idx.begin(), idx.end(), Index{0});
  std::shuffle(idx.begin(), idx.end(), rng);
  const Index l = std::uniform_int_distribution<Index>(1, d)(rng);
  for (Index i = l; i < d; ++i) x(idx[static_cast<std::size_t>(i)]) = 0;
  return x;
}

VectorXd random_in_disk(Rng& rng, double radius) {
  std::uniform_real_distribution<double> u(-radius, radius);
  VectorXd x(2);
  do x << u(rng), u(rng);
  while (x.norm() > radius);
  return x;
}

VectorXd vec2(double a, double b) {
  VectorXd v(2);
  v << a, b;
  return v;
}

// --- xreal -----------------------------------------------------------------

SuiteResult suite_xreal(const Config& config) {
  SuiteResult result;
  result.name = "xreal";
  Tally t(result, kExactTolerance);
  const ExtReal P = ExtReal::pos_inf(), N = ExtReal::neg_inf();
  const std::vector<ExtReal> A = {N, -1.0, 0.0, 1.0, P};
  auto name = [](const ExtReal& a) { return to_string(a); };

  for (const auto& u : A) {
    t.expect(lower_add(-u, u) <= ExtReal(0.0), "(-u) +lower u <= 0 at u=" + name(u));
    t.expect(upper_add(-u, u) >= ExtReal(0.0), "(-u) +upper u >= 0 at u=" + name(u));
    for (const auto& v : A) {
      const std::string uv = " at (" + name(u) + ", " + name(v) + ")";
      t.expect(lower_add(u, v) == lower_add(v, u), "lower commutativity" + uv);
      t.expect(upper_add(u, v) == upper_add(v, u), "upper commutativity" + uv);
      t.expect(lower_add(u, v) <= upper_add(u, v), "lower <= upper" + uv);
      t.expect(-upper_add(u, v) == lower_add(-u, -v), "-(u +upper v) = (-u) +lower (-v)" + uv);
      t.expect(-lower_add(u, v) == upper_add(-u, -v), "-(u +lower v) = (-u) +upper (-v)" + uv);
      t.expect(lower_add(-u, -v) <= -lower_add(u, v), "(-u) +lower (-v) <= -(u +lower v)" + uv);
      t.expect(upper_add(-u, -v) >= -upper_add(u, v), "(-u) +upper (-v) >= -(u +upper v)" + uv);
      const bool le = u <= v;
      t.expect((lower_add(u, -v) <= ExtReal(0.0)) == le, "u +lower (-v) <= 0 iff u <= v" + uv);
      t.expect((ExtReal(0.0) <= upper_add(v, -u)) == le, "0 <= v +upper (-u) iff u <= v" + uv);
      for (const auto& w : A) {
        const std::string uvw = " at (" + name(u) + ", " + name(v) + ", " + name(w) + ")";
        t.expect(lower_add(lower_add(u, v), w) == lower_add(u, lower_add(v, w)), "lower associativity" + uvw);
        t.expect(upper_add(upper_add(u, v), w) == upper_add(u, upper_add(v, w)), "upper associativity" + uvw);
        const ExtReal lhs = lower_add(upper_add(u, v), w);
        const ExtReal rhs = upper_add(u, lower_add(v, w));
        t.expect(lhs <= rhs, "mixed inequality" + uvw);
        const bool strict_case = (u == P && w == N) || (u == N && w == P && v.is_finite());
        t.expect((lhs < rhs) == strict_case, "mixed inequality strict exactly in the listed cases" + uvw);
        const bool a = lower_add(u, -v) <= w, b = u <= upper_add(v, w), c = lower_add(u, -w) <= v;
        t.expect(a == b && b == c, "comparison chain 2" + uvw);
        const bool d = w <= upper_add(v, -u), e = lower_add(u, w) <= v, f = u <= upper_add(v, -w);
        t.expect(d == e && e == f, "comparison chain 3" + uvw);
        for (const auto& u2 : A)
          for (const auto& v2 : A) {
            if (!(u <= u2 && v <= v2)) continue;
            t.expect(lower_add(u, v) <= lower_add(u2, v2), "lower monotonicity" + uvw);
            t.expect(upper_add(u, v) <= upper_add(u2, v2), "upper monotonicity" + uvw);
          }
      }
    }
  }

  // Sup/inf distribution over random finite families.
  Rng rng(config.seed);
  std::uniform_int_distribution<int> pick(0, 6);
  std::uniform_int_distribution<int> length(1, 6);
  std::uniform_real_distribution<double> real(-5, 5);
  auto draw = [&]() -> ExtReal {
    const int k = pick(rng);
    if (k == 0) return P;
    if (k == 1) return N;
    return ExtReal(std::round(real(rng) * 4) / 4);  // quarter steps keep sums exact
  };
  auto family = [&]() {
    std::vector<ExtReal> f(static_cast<std::size_t>(length(rng)));
    for (auto& v : f) v = draw();
    return f;
  };
  auto sup = [&](const std::vector<ExtReal>& f) {
    ExtReal s = N;
    for (const auto& v : f) s = max(s, v);
    return s;
  };
  auto inf = [&](const std::vector<ExtReal>& f) {
    ExtReal s = P;
    for (const auto& v : f) s = min(s, v);
    return s;
  };
  for (std::size_t trial = 0; trial < scaled(config, 2000); ++trial) {
    const auto f = family(), g = family();
    ExtReal sup_low = N, inf_low = P, sup_up = N, inf_up = P;
    for (const auto& a : f)
      for (const auto& b : g) {
        sup_low = max(sup_low, lower_add(a, b));
        inf_low = min(inf_low, lower_add(a, b));
        sup_up = max(sup_up, upper_add(a, b));
        inf_up = min(inf_up, upper_add(a, b));
      }
    t.expect(lower_add(sup(f), sup(g)) == sup_low, "sup distributes over lower addition");
    t.expect(lower_add(inf(f), inf(g)) <= inf_low, "inf inequality for lower addition");
    t.expect(upper_add(inf(f), inf(g)) == inf_up, "inf distributes over upper addition");
    t.expect(upper_add(sup(f), sup(g)) >= sup_up, "sup inequality for upper addition");
    const ExtReal c = draw();
    if (c < P) {
      ExtReal s = P;
      for (const auto& a : f) s = min(s, lower_add(a, c));
      t.expect(lower_add(inf(f), c) == s, "constant shift of inf under lower addition");
    }
    if (c > N) {
      ExtReal s = N;
      for (const auto& a : f) s = max(s, upper_add(a, c));
      t.expect(upper_add(sup(f), c) == s, "constant shift of sup under upper addition");
    }
  }
  return result;
}

// --- norms -----------------------------------------------------------------

double brute_force_gauge(const VectorXd& x, Index k) {
  const Index d = x.size();
  double best = 0;
  for (unsigned mask = 0; mask < (1u << d); ++mask) {
    if (std::popcount(mask) > k) continue;
    double s = 0;
    for (Index i = 0; i < d; ++i)
      if (mask & (1u << i)) s += x(i) * x(i);
    best = std::max(best, std::sqrt(s));
  }
  return best;
}

SuiteResult suite_norms(const Config& config) {
  SuiteResult result;
  result.name = "norms";
  Tally t(result, kRoundoffTolerance);
  Rng rng(config.seed + 1);
  std::uniform_int_distribution<Index> dim(2, 8);
  for (std::size_t trial = 0; trial < scaled(config, 300); ++trial) {
    const Index d = dim(rng);
    VectorXd x = random_sparse(rng, d);
    const VectorXd y = random_vector(rng, d);
    for (Index k = 0; k <= d; ++k) {
      t.deviation(std::abs(gauge_norm(x, k) - brute_force_gauge(x, k)), "gauge norm vs subset enumeration");
      if (k >= 1) {
        t.deviation(std::max(0.0, gauge_norm(x, k - 1) - gauge_norm(x, k)), "gauge chain increasing");
        t.deviation(std::max(0.0, gauge_norm(x, k) - std::sqrt(double(k)) * gauge_norm(x, 1)),
                    "gauge norm <= sqrt(k) top-1 norm");
        t.deviation(std::max(0.0, inner(x, y) - support_norm(x, k) * gauge_norm(y, k)),
                    "generalized Cauchy-Schwarz");
      }
      if (k >= 2)
        t.deviation(std::max(0.0, support_norm(x, k) - support_norm(x, k - 1)), "support chain decreasing");
    }
    t.deviation(std::abs(support_norm(x, 1) - x.lpNorm<1>()), "support norm of order 1 is l1");
    t.deviation(std::abs(support_norm(x, d) - x.norm()), "support norm of order d is Euclidean");
    // Permutation and sign invariance.
    VectorXd z = x;
    std::shuffle(z.data(), z.data() + d, rng);
    for (Index i = 0; i < d; i += 2) z(i) = -z(i);
    for (Index k = 1; k <= d; ++k) {
      t.deviation(std::abs(gauge_norm(z, k) - gauge_norm(x, k)), "gauge norm symmetric");
      t.deviation(std::abs(support_norm(z, k) - support_norm(x, k)), "support norm symmetric");
    }
  }
  // The exposed face of [-1,1]^2 is the argmax set of <., anchor> over its boundary.
  for (const auto& anchor : {vec2(0, 0), vec2(0.5, 0), vec2(0, -2), vec2(0.3, -0.2), vec2(-1, 4)}) {
    const Face2D face = face_l1_ball_2d(anchor);
    double best = -1e300;
    std::vector<VectorXd> boundary;
    for (int i = -400; i <= 400; ++i) {
      const double s = i / 400.0;
      for (const auto& p : {vec2(1, s), vec2(-1, s), vec2(s, 1), vec2(s, -1)}) boundary.push_back(p);
    }
    for (const auto& p : boundary) best = std::max(best, inner(p, anchor));
    for (const auto& p : boundary) {
      const bool argmax = inner(p, anchor) >= best - 1e-12;
      t.expect(argmax == face.contains(p, 1e-12), std::string("face of the square for kind ") + to_string(face.kind));
    }
  }
  return result;
}

// --- conjugacy -------------------------------------------------------------

SuiteResult suite_conjugacy(const Config& config) {
  SuiteResult result;
  result.name = "conjugacy";
  Tally t(result, kExactTolerance);
  Rng rng(config.seed + 2);
  std::uniform_int_distribution<int> size(2, 40);
  std::uniform_int_distribution<int> coin(0, 5);
  std::uniform_real_distribution<double> val(-3, 3);
  for (std::size_t trial = 0; trial < scaled(config, 30); ++trial) {
    const Index dw = std::uniform_int_distribution<Index>(1, 3)(rng);
    const Index dx = std::uniform_int_distribution<Index>(1, 3)(rng);
    std::vector<VectorXd> W, images, Y;
    for (int i = 0, n = size(rng); i < n; ++i) W.push_back(random_vector(rng, dw));
    const int n_images = std::max(1, size(rng) / 2);
    for (int i = 0; i < n_images; ++i) images.push_back(random_vector(rng, dx));
    for (int i = 0, n = size(rng); i < n; ++i) Y.push_back(random_vector(rng, dx));
    std::vector<std::size_t> assign(W.size());
    for (auto& a : assign) a = std::uniform_int_distribution<std::size_t>(0, images.size() - 1)(rng);
    auto theta = [&](const VectorXd& w) -> VectorXd {
      for (std::size_t i = 0; i < W.size(); ++i)
        if (W[i] == w) return images[assign[i]];
      throw std::logic_error("theta: point outside its domain");
    };
    std::vector<ExtReal> fw;
    for (std::size_t i = 0; i < W.size(); ++i) fw.push_back(coin(rng) == 0 ? ExtReal::pos_inf() : ExtReal(val(rng)));
    const GridFunction<double> f(W, fw);
    const auto c = Coupling<double>::one_sided_linear(theta);
    const auto fenchel = Coupling<double>::bilinear();

    const auto post = infimal_postcomposition(theta, f, images);
    const auto lhs1 = conjugate(f, c, Y), rhs1 = conjugate(post, fenchel, Y);
    t.expect(lhs1.values() == rhs1.values(), "conjugate factors through the infimal postcomposition");

    std::vector<ExtReal> gy;
    for (std::size_t i = 0; i < Y.size(); ++i) gy.push_back(coin(rng) == 0 ? ExtReal::pos_inf() : ExtReal(val(rng)));
    const GridFunction<double> g(Y, gy);
    const auto lhs2 = reverse_conjugate(g, c, W);
    const auto rhs2 = reverse_conjugate(g, fenchel, images);
    for (std::size_t i = 0; i < W.size(); ++i)
      t.expect(lhs2.value(i) == rhs2.value(assign[i]), "reverse conjugate is the Fenchel one composed with theta");

    const auto lhs3 = biconjugate(f, c, Y);
    const auto rhs3 = biconjugate(post, fenchel, Y);
    for (std::size_t i = 0; i < W.size(); ++i) {
      t.expect(lhs3.value(i) == rhs3.value(assign[i]), "biconjugate factorization");
      t.expect(lhs3.value(i) <= upper_add(f.value(i), ExtReal(kIdentityTolerance)), "biconjugate below the function");
    }

    const auto delta = GridFunction<double>::indicator(W, [](const VectorXd&) { return true; });
    const auto lhs4 = minus_conjugate(delta, c, Y);
    std::vector<VectorXd> minus_images;
    for (const auto& w : W) minus_images.push_back(-theta(w));
    for (std::size_t j = 0; j < Y.size(); ++j)
      t.expect(lhs4.value(j) == support_function(minus_images, Y[j]), "minus conjugate of an indicator");
  }

  // Capra biconjugates are constant along primal rays when both points are on the grid.
  const auto capra = Coupling<double>::capra();
  for (std::size_t trial = 0; trial < scaled(config, 10); ++trial) {
    std::vector<VectorXd> X{VectorXd::Zero(3)}, Y;
    std::vector<ExtReal> fx{ExtReal(val(rng))};
    for (int i = 0; i < 15; ++i) {
      const VectorXd x = random_vector(rng, 3);
      X.push_back(x);
      X.push_back(7.3 * x);
      fx.push_back(ExtReal(val(rng)));
      fx.push_back(ExtReal(val(rng)));
    }
    for (int i = 0; i < 30; ++i) Y.push_back(random_vector(rng, 3));
    const auto bi = biconjugate(GridFunction<double>(X, fx), capra, Y);
    for (std::size_t i = 1; i < X.size(); i += 2)
      t.deviation(std::abs(bi.value(i).value() - bi.value(i + 1).value()), "Capra biconjugate constant along rays",
                  kRoundoffTolerance);
  }
  return result;
}

// --- l0 --------------------------------------------------------------------

SuiteResult suite_l0(const Config& config) {
  SuiteResult result;
  result.name = "l0";
  Tally t(result, kGridConjugateTolerance);
  // Capra conjugate of l0 on the plane: primal grid {0} plus circle samples
  // carrying l0; dual grid of directions times radii.
  std::vector<VectorXd> X{VectorXd::Zero(2)};
  const auto nx = static_cast<Index>(scaled(config, 720));
  for (const auto& p : sphere_grid(2, std::max<Index>(nx, 8))) X.push_back(p);
  const auto f = GridFunction<double>::sample(X, [](const VectorXd& x) { return double(l0(x)); });
  std::vector<VectorXd> Y{VectorXd::Zero(2)};
  for (const auto& dir : sphere_grid(2, 360, SphereScheme::Uniform, 0, 0.5))
    for (int r = 1; r < 20; ++r) Y.push_back((5.0 * r / 19.0) * dir);
  const auto conj = conjugate(f, Coupling<double>::capra(), Y);
  for (std::size_t j = 0; j < Y.size(); ++j)
    t.deviation(std::abs(conj.value(j).value() - capra_conj_l0(Y[j])), "grid Capra conjugate of l0");

  // Level set {l0 <= 1} through its sphere part: exact top-1 norm.
  const auto axes = sphere_levelset_samples(2, 1, 4);
  std::vector<VectorXd> X1{VectorXd::Zero(2)};
  X1.insert(X1.end(), axes.begin(), axes.end());
  const auto conj1 = conjugate(GridFunction<double>::sample(X1, [](const VectorXd&) { return 0.0; }),
                               Coupling<double>::capra(), Y);
  for (std::size_t j = 0; j < Y.size(); ++j)
    t.deviation(std::abs(conj1.value(j).value() - capra_conj_levelset(1, Y[j])), "grid Capra conjugate of a level set");

  Rng rng(config.seed + 3);
  for (std::size_t trial = 0; trial < scaled(config, 500); ++trial) {
    const Index d = std::uniform_int_distribution<Index>(1, 8)(rng);
    const VectorXd x = random_sparse(rng, d);
    const Index l = l0(x);
    t.expect(l0(normalize(x)) == l, "l0 invariant under normalization");
    for (Index k = 0; k <= d; ++k) t.expect(level_set_member(x, k) == (l <= k), "level set test agrees with l0");
    if (l >= 1) t.expect(gauge_norm(x, l - 1) < gauge_norm(x, l), "strict gap below l0");
    t.expect(gauge_norm(x, l) == euclidean_norm(x), "top-l0 norm is the Euclidean norm");
    const VectorXd u = normalize(x);
    for (Index k = 1; k <= d; ++k)
      t.expect((l <= k) == (support_norm(u, k) <= 1 + kLevelTolerance), "sphere decomposition via support balls");
  }
  return result;
}

// --- hidden convexity ------------------------------------------------------

SuiteResult suite_hidden_convexity(const Config& config) {
  SuiteResult result;
  result.name = "hidden_convexity";
  Tally t(result, kOracleTolerance);
  Rng rng(config.seed + 4);
  for (std::size_t trial = 0; trial < scaled(config, 60); ++trial) {
    const VectorXd x = random_in_disk(rng, 0.99);
    const double closed = calL0_2d(x).value();
    const double oracle = calL0_decomposition_oracle(x, 200).value();
    t.deviation(std::abs(closed - oracle), "closed form vs decomposition oracle");
    t.expect(oracle >= closed - kRoundoffTolerance, "decomposition oracle is an upper bound");
    if (trial < scaled(config, 15)) {
      const auto ascent = calL0_general(x, 1e-4, 100000);
      t.deviation(std::abs(closed - ascent.value.value()), "closed form vs ascent", kGeneralTolerance);
      t.expect(ascent.value.value() <= closed + kRoundoffTolerance, "ascent is a lower bound");
    }
  }
  for (std::size_t trial = 0; trial < scaled(config, 300); ++trial) {
    const VectorXd x = random_in_disk(rng, 0.999);
    const auto dec = decompose_2d(x);
    const auto kkt = verify_kkt_2d(x, dec);
    t.expect(kkt.ok, "KKT conditions: " + kkt.message);
    t.deviation(std::abs(dec.objective - calL0_2d(x).value()), "decomposition objective vs closed form",
                kIdentityTolerance);
    if (dec.branch == Branch::Triangle)
      t.expect(std::abs(*kkt.lambda - std::numbers::sqrt2) <= kRoundoffTolerance, "triangle multiplier is sqrt 2");
    t.expect(calL0_2d(x) == calL0_2d(VectorXd(x.cwiseAbs())), "sign symmetry");
    t.expect(lbar0(x).to_ext() >= calL0_2d(x), "lbar0 majorizes the convex extension");
    const VectorXd y = random_in_disk(rng, 1.0);
    const double mid = calL0_2d(VectorXd((x + y) / 2)).value();
    t.expect(mid <= (calL0_2d(x).value() + calL0_2d(y).value()) / 2 + kRoundoffTolerance, "midpoint convexity");
    const VectorXd z = random_vector(rng, 2);
    t.expect(calL0_2d(normalize(z)).value() == double(l0(z)), "convex extension of l0 on the circle");
  }
  const auto epi = epigraph_grid_check(101);
  t.deviation(epi.max_abs_error, "grid biconjugate of lbar0", kEpigraphTolerance);
  t.expect(epi.origin_consistent && epi.outside_consistent, "grid biconjugate at the origin and outside the disk");
  return result;
}

// --- Capra biconjugate of l0 -----------------------------------------------

SuiteResult suite_biconjugate(const Config& config) {
  SuiteResult result;
  result.name = "biconjugate";
  Tally t(result, kIdentityTolerance);
  Rng rng(config.seed + 5);
  const auto c = config.inject_fault ? Coupling<double>::capra_with_origin_fault() : Coupling<double>::capra();
  for (std::size_t trial = 0; trial < scaled(config, 5); ++trial) {
    const Index d = std::uniform_int_distribution<Index>(2, 5)(rng);
    std::vector<VectorXd> X{VectorXd::Zero(d)}, Y{VectorXd::Zero(d)};
    for (int i = 0; i < 40; ++i) {
      const VectorXd x = random_sparse(rng, d);
      X.push_back(x);
      // the dual grid holds the certificate ray point of every primal point
      const auto [l, cert] = capra_biconj_l0(x);
      const VectorXd ray = 2 * cert.lambda_threshold * x;
      if (std::find(Y.begin(), Y.end(), ray) == Y.end()) Y.push_back(ray);  // 1-sparse points share theirs
      Y.push_back(random_vector(rng, d));
      for (const auto& [lambda, phi] : cert.phi_samples) t.deviation(std::abs(phi - double(l)), "ray certificate");
    }
    const auto f = GridFunction<double>::sample(X, [](const VectorXd& x) { return double(l0(x)); });
    const auto bi = biconjugate(f, c, Y);
    for (std::size_t i = 0; i < X.size(); ++i)
      t.deviation(std::abs(bi.value(i).value() - f.value(i).value()), "grid Capra biconjugate of l0");
  }
  return result;
}

using SuiteFn = SuiteResult (*)(const Config&);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> r = {
      {"xreal", suite_xreal},           {"norms", suite_norms},
      {"conjugacy", suite_conjugacy},   {"l0", suite_l0},
      {"hidden_convexity", suite_hidden_convexity}, {"biconjugate", suite_biconjugate}};
  return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, fn] : registry()) n.push_back(name);
    return n;
  }();
  return names;
}

SuiteResult run_suite(std::string_view name, const Config& config) {
  for (const auto& [n, fn] : registry())
    if (n == name) {
      try {
        return fn(config);
      } catch (const std::exception& e) {
        SuiteResult r;
        r.name = std::string(name);
        r.passed = false;
        r.detail = std::string("exception: ") + e.what();
        return r;
      }
    }
  throw std::invalid_argument("unknown suite '" + std::string(name) + "'");
}

int run(const Config& config, std::ostream& os) {
  std::vector<std::string> selected = config.suites.empty() ? suite_names() : config.suites;
  for (const auto& s : selected)
    if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
      throw std::invalid_argument("unknown suite '" + s + "'");
  if (config.scale <= 0) throw std::invalid_argument("scale must be positive");

  os << "# seed " << config.seed << " scale " << config.scale << " inject_fault " << (config.inject_fault ? 1 : 0)
     << '\n';
  os << "# tolerances exact " << kExactTolerance << " roundoff " << kRoundoffTolerance << " identity "
     << kIdentityTolerance << " grid_conjugate " << kGridConjugateTolerance
     << " oracle " << kOracleTolerance << " general " << kGeneralTolerance << " epigraph " << kEpigraphTolerance
     << " ball " << kBallTolerance << " level " << kLevelTolerance << '\n';
  bool all = true;
  for (const auto& s : selected) {
    const SuiteResult r = run_suite(s, config);
    all = all && r.passed;
    os << (r.passed ? "PASS " : "FAIL ") << std::left << std::setw(17) << r.name << " checks " << r.checks
       << " max_deviation " << std::setprecision(3) << r.max_deviation;
    if (!r.passed) os << "  first failure: " << r.detail;
    os << '\n';
  }
  return all ? 0 : 2;
}

}  // namespace capra::verify
