// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: acceptance <path to the capra executable>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "capra/conjugacy.hpp"
#include "capra/csv.hpp"
#include "capra/hidden_convexity.hpp"
#include "capra/l0.hpp"
#include "capra/norms.hpp"
#include "capra/xreal.hpp"
#include "oracles.hpp"

using namespace capra;
using oracle::v2;

namespace {

struct Outcome {
  bool ok = true;
  std::string summary;
};

struct Criterion {
  int id;
  std::string title;
  double budget_seconds;
  std::function<Outcome()> run;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

// --- 1: Moreau laws over {-inf, -1, 0, 1, +inf} -----------------------------

Outcome moreau_laws() {
  const ExtReal P = ExtReal::pos_inf(), N = ExtReal::neg_inf(), Z(0.0);
  const std::vector<ExtReal> A = {N, -1.0, 0.0, 1.0, P};
  long checks = 0, failures = 0;
  auto expect = [&](bool ok) {
    ++checks;
    if (!ok) ++failures;
  };
  for (const auto& u : A) {
    expect(lower_add(-u, u) <= Z);
    expect(upper_add(-u, u) >= Z);
    for (const auto& v : A) {
      expect(lower_add(u, v) == lower_add(v, u));
      expect(upper_add(u, v) == upper_add(v, u));
      expect(lower_add(-u, -v) <= -lower_add(u, v));
      expect(upper_add(-u, -v) >= -upper_add(u, v));
      expect(lower_add(u, v) <= upper_add(u, v));
      expect(-upper_add(u, v) == lower_add(-u, -v));
      expect(-lower_add(u, v) == upper_add(-u, -v));
      expect((lower_add(u, -v) <= Z) == (u <= v));
      expect((u <= v) == (Z <= upper_add(v, -u)));
      for (const auto& w : A) {
        expect(lower_add(lower_add(u, v), w) == lower_add(u, lower_add(v, w)));
        expect(upper_add(upper_add(u, v), w) == upper_add(u, upper_add(v, w)));
        const ExtReal lhs = lower_add(upper_add(u, v), w), rhs = upper_add(u, lower_add(v, w));
        expect(lhs <= rhs);
        expect((lhs < rhs) == ((u == P && w == N) || (u == N && w == P && v.is_finite())));
        const bool a = lower_add(u, -v) <= w, b = u <= upper_add(v, w), c = lower_add(u, -w) <= v;
        expect(a == b && b == c);
        const bool d = w <= upper_add(v, -u), e = lower_add(u, w) <= v, f = u <= upper_add(v, -w);
        expect(d == e && e == f);
        for (const auto& u2 : A)
          for (const auto& v2_ : A)
            if (u <= u2 && v <= v2_) {
              expect(lower_add(u, v) <= lower_add(u2, v2_));
              expect(upper_add(u, v) <= upper_add(u2, v2_));
            }
      }
    }
  }
  // Families: every nonempty subset of the alphabet, paired with every other.
  std::vector<std::vector<ExtReal>> families;
  for (unsigned mask = 1; mask < 32; ++mask) {
    std::vector<ExtReal> f;
    for (unsigned i = 0; i < 5; ++i)
      if (mask & (1u << i)) f.push_back(A[i]);
    families.push_back(f);
  }
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
  for (const auto& f : families) {
    for (const auto& g : families) {
      ExtReal sl = N, il = P, su = N, iu = P;
      for (const auto& a : f)
        for (const auto& b : g) {
          sl = max(sl, lower_add(a, b));
          il = min(il, lower_add(a, b));
          su = max(su, upper_add(a, b));
          iu = min(iu, upper_add(a, b));
        }
      expect(lower_add(sup(f), sup(g)) == sl);
      expect(lower_add(inf(f), inf(g)) <= il);
      expect(upper_add(inf(f), inf(g)) == iu);
      expect(upper_add(sup(f), sup(g)) >= su);
    }
    for (const auto& t : A) {
      if (t < P) {
        ExtReal s = P;
        for (const auto& a : f) s = min(s, lower_add(a, t));
        expect(lower_add(inf(f), t) == s);
      }
      if (t > N) {
        ExtReal s = N;
        for (const auto& a : f) s = max(s, upper_add(a, t));
        expect(upper_add(sup(f), t) == s);
      }
    }
  }
  return {failures == 0, std::to_string(checks) + " law instances, " + std::to_string(failures) + " violations"};
}

// --- 2: norms against enumeration and duality ------------------------------

Outcome norm_oracles() {
  oracle::Rng rng(2002);
  long mismatches = 0, bound_violations = 0;
  double worst_ascent = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const long d = 2 + trial % 7;
    const VectorXd x = trial % 2 ? oracle::sparse(rng, d) : oracle::gaussian(rng, d);
    for (Index k = 0; k <= d; ++k)
      if (gauge_norm(x, k) != oracle::gauge_by_subsets(x, k)) ++mismatches;
    for (Index k = 1; k <= d; ++k) {
      const double s = support_norm(x, k);
      for (int j = 0; j < 40; ++j) {
        const VectorXd y = oracle::gaussian(rng, d);
        if (oracle::ratio_to_gauge(x, y, k) > s + 1e-12 * (1 + s)) ++bound_violations;
      }
      worst_ascent = std::max(worst_ascent, std::abs(s - oracle::support_by_ascent(x, k)));
    }
  }
  return {mismatches == 0 && bound_violations == 0 && worst_ascent <= 1e-6,
          "gauge/subset mismatches " + std::to_string(mismatches) + ", sampled ratios above the support norm " +
              std::to_string(bound_violations) + ", max |support - ascent| " + fmt(worst_ascent) + " (tol 1e-6)"};
}

// --- 3: grid Capra conjugate of l0 -----------------------------------------

double conjugate_deviation(Index d, Index primal_per_level, const std::vector<VectorXd>& directions) {
  const auto f = l0_sphere_grid(d, primal_per_level);
  std::vector<VectorXd> Y{VectorXd::Zero(d)};
  for (const auto& u : directions)
    for (int r = 1; r < 50; ++r) Y.push_back((5.0 * r / 49.0) * u);
  const auto conj = conjugate(f, Coupling<double>::capra(), Y);
  double worst = 0;
  for (std::size_t j = 0; j < Y.size(); ++j)
    worst = std::max(worst, std::abs(conj.value(j).value() - oracle::capra_conj_l0_by_subsets(Y[j])));
  return worst;
}

Outcome conjugate_formula() {
  bool ok = true;
  std::string text;
  const std::vector<std::pair<Index, std::vector<Index>>> plans = {{2, {90, 180, 360, 720}},
                                                                   {3, {250, 500, 1000, 2000}}};
  for (const auto& [d, refinements] : plans) {
    const auto directions = d == 2 ? sphere_grid(2, 720, SphereScheme::Uniform, 0, 0.5) : sphere_grid(3, 2000);
    const double tol = d == 2 ? 2e-2 : 5e-2;
    std::vector<double> devs;
    for (Index n : refinements) devs.push_back(conjugate_deviation(d, n, directions));
    bool monotone = devs.back() < devs.front();
    for (std::size_t i = 1; i < devs.size(); ++i) monotone = monotone && devs[i] <= devs[i - 1];
    ok = ok && monotone && devs.back() <= tol;
    if (!text.empty()) text += "; ";
    text += "d=" + std::to_string(d) + " deviations";
    for (double v : devs) text += " " + fmt(v);
    text += " (tol " + fmt(tol) + (monotone ? ", decreasing" : ", NOT decreasing") + ")";
  }
  return {ok, text};
}

// --- 4: biconjugate certificates -------------------------------------------

Outcome biconjugate_recovery() {
  oracle::Rng rng(2004);
  long exact_failures = 0, dual_violations = 0;
  double threshold_dev = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const long d = 1 + trial % 6;
    const VectorXd x = oracle::sparse(rng, d);
    const auto [l, cert] = capra_biconj_l0(x);
    double expected = 0, condition = 1;
    for (long j = 0; j < l; ++j) {
      const double gap = x.norm() - oracle::gauge_by_subsets(x, j);
      expected = std::max(expected, double(l - j) / gap);
      condition = std::max(condition, x.norm() / gap);
    }
    // relative deviation in units of the cancellation in |x| - |x|_(j)
    threshold_dev = std::max(threshold_dev, std::abs(cert.lambda_threshold - expected) / (expected * condition));
    const double phi = ray_phi(x, 2 * cert.lambda_threshold);
    if (l != l0(x) || phi != double(l0(x))) ++exact_failures;
    std::vector<VectorXd> samples;
    for (double s : {0.5, 1.0, 2.0, 8.0}) samples.push_back(s * cert.lambda_threshold * x);
    for (int j = 0; j < 50; ++j) samples.push_back(10 * oracle::gaussian(rng, d));
    for (const auto& y : samples)
      if (capra_dual_value(x, y) > double(l0(x)) + 1e-12 * (1 + y.norm())) ++dual_violations;
  }
  return {exact_failures == 0 && dual_violations == 0 && threshold_dev <= 1e-14,
          "phi(2 lambda*) != l0 in " + std::to_string(exact_failures) + " of 200, dual samples above l0 " +
              std::to_string(dual_violations) + ", conditioned threshold deviation " + fmt(threshold_dev)};
}

// --- 5: closed form vs optimization ----------------------------------------

Outcome closed_form_vs_optimization() {
  oracle::Rng rng(2005);
  double worst_oracle = 0, worst_ascent = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const VectorXd x = oracle::in_disk(rng, 0.99);
    const double closed = calL0_2d(x).value();
    worst_oracle = std::max(worst_oracle, std::abs(closed - calL0_decomposition_oracle(x, 400).value()));
    if (trial < 100) worst_ascent = std::max(worst_ascent, std::abs(closed - calL0_general(x, 1e-4, 100000).value.value()));
  }
  return {worst_oracle <= 5e-3 && worst_ascent <= 1e-3, "max |closed - oracle(400)| " + fmt(worst_oracle) +
                                                            " (tol 5e-3), max |closed - ascent| " + fmt(worst_ascent) +
                                                            " (tol 1e-3)"};
}

// --- 6: sphere coincidence -------------------------------------------------

Outcome sphere_coincidence() {
  oracle::Rng rng(2006);
  long mismatches = 0;
  std::vector<VectorXd> circle{v2(1, 0), v2(-1, 0), v2(0, 1), v2(0, -1)};
  while (circle.size() < 1000) circle.push_back(normalize(oracle::gaussian(rng, 2)));
  for (const auto& u : circle)
    if (calL0_2d(u).value() != double(l0(u))) ++mismatches;
  double worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const long d = 3 + trial % 3;
    const VectorXd u = normalize(oracle::sparse(rng, d));
    worst = std::max(worst, std::abs(calL0_general(u, 1e-4, 100000).value.value() - double(l0(u))));
  }
  return {mismatches == 0 && worst <= 5e-2, "d=2 mismatches " + std::to_string(mismatches) +
                                                " of 1000, d=3..5 max |ascent - l0| " + fmt(worst) + " (tol 5e-2)"};
}

// --- 7: KKT certification --------------------------------------------------

Outcome kkt_certification() {
  oracle::Rng rng(2007);
  long failures = 0, triangle = 0;
  double worst_objective = 0, worst_lambda = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const VectorXd x = oracle::in_disk(rng, 0.9999);
    const auto dec = decompose_2d(x);
    if (!verify_kkt_2d(x, dec).ok) ++failures;
    worst_objective = std::max(worst_objective, std::abs(dec.objective - calL0_2d(x).value()));
    if (dec.branch == Branch::Triangle) {
      ++triangle;
      worst_lambda = std::max(worst_lambda, std::abs(*dec.lambda - std::numbers::sqrt2));
    }
  }
  return {failures == 0 && worst_objective <= 1e-9 && worst_lambda <= 1e-12 && triangle > 0,
          "KKT failures " + std::to_string(failures) + " of 300, max objective gap " + fmt(worst_objective) +
              ", triangle points " + std::to_string(triangle) + " with max |lambda - sqrt 2| " + fmt(worst_lambda)};
}

// --- 8: grid biconjugate of lbar0 ------------------------------------------

Outcome epigraph_identity() {
  const auto a = epigraph_grid_check(201);
  const auto b = epigraph_grid_check(401);
  const bool ok = a.max_abs_error <= 6e-2 && b.max_abs_error < a.max_abs_error && a.origin_consistent &&
                  a.outside_consistent && b.origin_consistent && b.outside_consistent;
  return {ok, "max interior error " + fmt(a.max_abs_error) + " at 201 (" + std::to_string(a.checked_points) +
                  " points), " + fmt(b.max_abs_error) + " at 401; origin and exterior consistent: " +
                  (a.origin_consistent && a.outside_consistent && b.origin_consistent && b.outside_consistent ? "yes"
                                                                                                              : "no")};
}

// --- 9: one-sided linear identities ----------------------------------------

Outcome one_sided_linear() {
  oracle::Rng rng(2009);
  std::uniform_int_distribution<int> size(1, 40), dim(1, 4), coin(0, 4);
  std::uniform_real_distribution<double> val(-3, 3);
  long failures = 0, comparisons = 0;
  auto same = [&](const ExtReal& a, const ExtReal& b) {
    ++comparisons;
    if (!(a == b)) ++failures;
  };
  for (int trial = 0; trial < 50; ++trial) {
    const long dw = dim(rng), dx = dim(rng);
    std::vector<VectorXd> W, X, Y;
    for (int i = 0, n = size(rng); i < n; ++i) W.push_back(oracle::gaussian(rng, dw));
    for (int i = 0, n = size(rng); i < n; ++i) X.push_back(oracle::gaussian(rng, dx));
    for (int i = 0, n = size(rng); i < n; ++i) Y.push_back(oracle::gaussian(rng, dx));
    std::vector<std::size_t> image_of(W.size());
    for (auto& k : image_of) k = std::uniform_int_distribution<std::size_t>(0, X.size() - 1)(rng);
    auto theta = [&](const VectorXd& w) -> VectorXd {
      for (std::size_t i = 0; i < W.size(); ++i)
        if (W[i] == w) return X[image_of[i]];
      throw std::logic_error("outside the domain of theta");
    };
    std::vector<ExtReal> fv, gv;
    for (std::size_t i = 0; i < W.size(); ++i) fv.push_back(coin(rng) == 0 ? ExtReal::pos_inf() : ExtReal(val(rng)));
    for (std::size_t i = 0; i < Y.size(); ++i) gv.push_back(coin(rng) == 0 ? ExtReal::pos_inf() : ExtReal(val(rng)));
    const GridFunction<double> f(W, fv), g(Y, gv);
    const auto c = Coupling<double>::one_sided_linear(theta);
    const auto fenchel = Coupling<double>::bilinear();
    const auto post = infimal_postcomposition(theta, f, X);

    const auto i_lhs = conjugate(f, c, Y), i_rhs = conjugate(post, fenchel, Y);
    for (std::size_t j = 0; j < Y.size(); ++j) same(i_lhs.value(j), i_rhs.value(j));

    const auto ii_lhs = reverse_conjugate(g, c, W), ii_rhs = reverse_conjugate(g, fenchel, X);
    for (std::size_t i = 0; i < W.size(); ++i) same(ii_lhs.value(i), ii_rhs.value(image_of[i]));

    const auto iii_lhs = biconjugate(f, c, Y), iii_rhs = biconjugate(post, fenchel, Y);
    for (std::size_t i = 0; i < W.size(); ++i) same(iii_lhs.value(i), iii_rhs.value(image_of[i]));

    const auto delta = GridFunction<double>::indicator(W, [](const VectorXd&) { return true; });
    const auto iv = minus_conjugate(delta, c, Y);
    for (std::size_t j = 0; j < Y.size(); ++j) {
      ExtReal support = ExtReal::neg_inf();
      for (std::size_t i = 0; i < W.size(); ++i) support = max(support, ExtReal(inner(VectorXd(-X[image_of[i]]), Y[j])));
      same(iv.value(j), support);
    }
  }
  return {failures == 0, std::to_string(comparisons) + " exact comparisons over 50 instances, " +
                             std::to_string(failures) + " mismatches"};
}

// --- 10: surface export through the command line ----------------------------

std::string capture(const std::string& command, int& status) {
  std::string out;
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) {
    status = -1;
    return out;
  }
  char buf[1 << 16];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  status = pclose(pipe);
  return out;
}

Outcome surface_export(const std::string& tool) {
  if (tool.empty()) return {false, "no executable given"};
  int s1 = 0, s2 = 0;
  const std::string first = capture(tool + " l0ext --grid 201", s1);
  const std::string second = capture(tool + " l0ext --grid 201", s2);
  if (s1 != 0 || s2 != 0) return {false, "l0ext --grid failed"};
  const bool deterministic = first == second;

  std::istringstream is(first);
  std::string line;
  std::getline(is, line);
  const bool header = line == "x_1,x_2,value,branch";
  long rows = 0, bad_value = 0, bad_branch = 0;
  bool origin_zero = false;
  std::map<std::string, long> branch_count;
  const double m = std::numbers::sqrt2 - 1;
  while (std::getline(is, line)) {
    ++rows;
    const auto f = split_csv_line(line);
    const double a = std::abs(std::stod(f[0])), b = std::abs(std::stod(f[1]));
    const ExtReal value = parse_ext_real(f[2]);
    ++branch_count[f[3]];
    if (a == 0 && b == 0) origin_zero = value == ExtReal(0.0) && f[3] == "lozenge";
    std::string expected;
    if (a * a + b * b > 1) expected = "infeasible";
    else if (a + b <= 1) expected = "lozenge";
    else if (a + m * b >= 1 && a > b) expected = "nail_x1";
    else if (m * a + b >= 1 && b > a) expected = "nail_x2";
    else expected = "triangle";
    if (f[3] != expected) ++bad_branch;
    if ((expected == "infeasible") != value.is_pos_inf()) ++bad_value;
    if (expected != "infeasible" && !(value >= ExtReal(0.0) && value <= ExtReal(2.0))) ++bad_value;
  }
  const bool regions = branch_count["lozenge"] > 0 && branch_count["triangle"] > 0 && branch_count["nail_x1"] > 0 &&
                       branch_count["nail_x2"] > 0;

  // The circle itself is not on the grid: probe it point by point.
  long sphere_bad = 0;
  auto probe = [&](double x, double y, const std::string& value) {
    int st = 0;
    std::ostringstream cmd;
    cmd.precision(17);
    cmd << tool << " l0ext --x=" << x << ',' << y;
    const std::string out = capture(cmd.str(), st);
    if (st != 0 || out.rfind("value " + value + "\n", 0) != 0) ++sphere_bad;
  };
  for (auto [x, y] : {std::pair{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}}) probe(x, y, "1");
  for (int i = 0; i < 8; ++i) {
    const double t = 0.3 + i * std::numbers::pi / 4;
    probe(std::cos(t), std::sin(t), "2");
  }

  const bool ok = deterministic && header && rows == 201 * 201 && bad_value == 0 && bad_branch == 0 && origin_zero &&
                  regions && sphere_bad == 0;
  return {ok, std::to_string(rows) + " rows, deterministic " + (deterministic ? "yes" : "no") + ", origin 0 " +
                  (origin_zero ? "yes" : "no") + ", branch mismatches " + std::to_string(bad_branch) +
                  ", value mismatches " + std::to_string(bad_value) + ", regions lozenge/triangle/nail_x1/nail_x2 " +
                  std::to_string(branch_count["lozenge"]) + "/" + std::to_string(branch_count["triangle"]) + "/" +
                  std::to_string(branch_count["nail_x1"]) + "/" + std::to_string(branch_count["nail_x2"]) +
                  ", circle probes wrong " + std::to_string(sphere_bad) + " of 12"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string tool = argc > 1 ? argv[1] : "";
  const std::vector<Criterion> criteria = {
      {1, "Moreau laws, exhaustive alphabet", 1, moreau_laws},
      {2, "norms vs subset enumeration and duality ascent", 30, norm_oracles},
      {3, "grid Capra conjugate of l0 vs closed form", 60, conjugate_formula},
      {4, "biconjugate recovery by ray certificate", 10, biconjugate_recovery},
      {5, "planar closed form vs decomposition oracle and ascent", 120, closed_form_vs_optimization},
      {6, "L0 = l0 on the sphere", 60, sphere_coincidence},
      {7, "KKT certification of planar decompositions", 5, kkt_certification},
      {8, "grid biconjugate of lbar0 vs closed form", 60, epigraph_identity},
      {9, "one-sided linear identities", 5, one_sided_linear},
      {10, "surface and region export via l0ext --grid 201", 10, [&] { return surface_export(tool); }},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds <= c.budget_seconds;
    const bool pass = o.ok && in_time;
    failed += pass ? 0 : 1;
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << " | " << o.summary << " | "
              << fmt(seconds) << " s of " << c.budget_seconds << " s" << (in_time ? "" : " (over budget)") << '\n';
    std::cout.flush();
  }
  std::cout << (failed == 0 ? "all criteria pass" : std::to_string(failed) + " criteria fail") << '\n';
  return failed == 0 ? 0 : 1;
}
