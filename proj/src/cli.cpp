#include "capra/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "capra/conjugacy.hpp"
#include "capra/csv.hpp"
#include "capra/hidden_convexity.hpp"
#include "capra/l0.hpp"
#include "capra/verify.hpp"
#include "capra/xreal.hpp"

namespace capra::cli {
namespace {

std::string fmt15(double v) {
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v + 0.0);  // no "-0"
  return buf;
}

std::string join(const VectorXd& v, std::string (*f)(double)) {
  std::string s;
  for (Index i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += f(v(i));
  }
  return s;
}

std::string shortest(double v) { return to_string(ExtReal(v)); }

}  // namespace

VectorXd parse_vector(std::string_view text) {
  const auto fields = split_csv_line(text);
  VectorXd x(static_cast<Index>(fields.size()));
  for (std::size_t i = 0; i < fields.size(); ++i) {
    ExtReal v;
    try {
      v = parse_ext_real(fields[i]);
    } catch (const std::invalid_argument& e) {
      throw ValidationError(e.what());
    }
    if (!v.is_finite()) throw ValidationError("vector components must be finite");
    x(static_cast<Index>(i)) = v.value();
  }
  return x;
}

void cmd_norm(const VectorXd& x, const std::vector<Index>& ks, std::ostream& out) {
  for (Index k : ks)
    if (k < 1 || k > x.size())
      throw ValidationError("k=" + std::to_string(k) + " outside [1, " + std::to_string(x.size()) + "]");
  for (Index k : ks)
    out << "k " << k << " gauge " << fmt15(gauge_norm(x, k)) << " support " << fmt15(support_norm(x, k)) << '\n';
}

double cmd_conj(const ConjConfig& config, std::ostream& out) {
  if (config.d < 2 || config.d > 5) throw ValidationError("conj: d must be in 2..5");
  if (config.resolution < 4) throw ValidationError("conj: resolution must be >= 4");
  if (config.radii < 2) throw ValidationError("conj: radii must be >= 2");
  if (!(config.radius > 0) || !std::isfinite(config.radius)) throw ValidationError("conj: radius must be positive");
  const Index samples = config.samples > 0 ? config.samples : 2 * config.resolution;

  const auto f = l0_sphere_grid(config.d, samples, config.seed);
  std::vector<VectorXd> Y{VectorXd::Zero(config.d)};
  for (const auto& dir : sphere_grid(config.d, config.resolution, SphereScheme::Auto, config.seed))
    for (Index r = 1; r < config.radii; ++r)
      Y.push_back((config.radius * double(r) / double(config.radii - 1)) * dir);
  const auto conj = conjugate(f, Coupling<double>::capra(), Y);

  for (Index i = 0; i < config.d; ++i) out << "y_" << (i + 1) << ',';
  out << "grid,closed,delta\n";
  double worst = 0;
  for (std::size_t j = 0; j < Y.size(); ++j) {
    const double grid = conj.value(j).value();
    const double closed = capra_conj_l0(Y[j]);
    worst = std::max(worst, std::abs(grid - closed));
    out << join(Y[j], shortest) << ',' << shortest(grid) << ',' << shortest(closed) << ',' << shortest(grid - closed)
        << '\n';
  }
  return worst;
}

void cmd_l0ext_point(const VectorXd& x, std::ostream& out) {
  if (x.size() == 2) {
    const auto eval = calL0_2d_eval(x);
    out << "value " << (eval.value.is_finite() ? fmt15(eval.value.value()) : to_string(eval.value)) << '\n';
    out << "branch " << to_string(eval.branch) << '\n';
    if (x.squaredNorm() < 1) {
      const auto dec = decompose_2d(x);
      out << "x1bar " << join(dec.x1bar, fmt15) << '\n';
      out << "x2bar " << join(dec.x2bar, fmt15) << '\n';
      out << "lambda " << (dec.lambda ? fmt15(*dec.lambda) : std::string("none")) << '\n';
    }
    return;
  }
  if (x.size() < 1 || x.size() > 5) throw ValidationError("l0ext: dimension must be 2 (closed form) or at most 5");
  const auto r = calL0_general(x, 1e-4, 100000);
  out << "value " << (r.value.is_finite() ? fmt15(r.value.value()) : to_string(r.value)) << '\n';
  out << "branch ascent\n";
  out << "iterations " << r.iterations << " converged " << (r.converged ? "yes" : "no") << '\n';
  out << "dual_point " << join(r.dual_point, fmt15) << '\n';
}

void cmd_l0ext_grid(Index resolution, std::ostream& out) {
  if (resolution < 2) throw ValidationError("l0ext: grid resolution must be >= 2");
  const double h = 2.2 / double(resolution - 1);
  std::vector<double> axis(static_cast<std::size_t>(resolution));
  for (Index i = 0; i < resolution; ++i) axis[static_cast<std::size_t>(i)] = (double(i) - double(resolution - 1) / 2) * h;
  out << "x_1,x_2,value,branch\n";
  VectorXd p(2);
  for (double a : axis)
    for (double b : axis) {
      p << a, b;
      const auto eval = calL0_2d_eval(p);
      out << shortest(a) << ',' << shortest(b) << ',' << to_string(eval.value) << ',' << to_string(eval.branch) << '\n';
    }
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Capra conjugacy of the l0 pseudonorm", "capra"};
  app.require_subcommand(1);
  std::string output_path;
  app.add_option("-o,--output", output_path, "write results to this file instead of standard output");

  auto* norm = app.add_subcommand("norm", "top-k gauge and k-support norms of a vector");
  std::string x_text;
  std::vector<Index> ks;
  norm->add_option("--x", x_text, "vector, comma separated")->required();
  norm->add_option("--k", ks, "orders (repeatable or comma separated)")->required()->delimiter(',');

  auto* conj = app.add_subcommand("conj", "grid vs closed-form Capra conjugate of l0, as CSV");
  ConjConfig cc;
  conj->add_option("--d", cc.d, "dimension")->capture_default_str();
  conj->add_option("--resolution", cc.resolution, "dual directions")->capture_default_str();
  conj->add_option("--samples", cc.samples, "primal unit vectors per sparsity level (0: twice the resolution)")
      ->capture_default_str();
  conj->add_option("--radius", cc.radius, "largest dual radius")->capture_default_str();
  conj->add_option("--radii", cc.radii, "dual radii per direction, origin included")->capture_default_str();
  conj->add_option("--seed", cc.seed, "quasi-random offset")->capture_default_str();

  auto* l0ext = app.add_subcommand("l0ext", "convex extension L0: one point, or a CSV grid of the plane");
  std::string ext_x;
  Index grid = 0;
  auto* ext_x_opt = l0ext->add_option("--x", ext_x, "point, comma separated");
  l0ext->add_option("--grid", grid, "grid points per axis on [-1.1, 1.1]^2")->excludes(ext_x_opt);

  auto* ver = app.add_subcommand("verify", "run the invariant suites");
  verify::Config vc;
  ver->add_option("--suite", vc.suites, "suite to run (repeatable); default all")->delimiter(',');
  ver->add_option("--seed", vc.seed, "random seed")->capture_default_str();
  ver->add_option("--scale", vc.scale, "sample count multiplier")->capture_default_str();
  ver->add_flag("--inject-fault", vc.inject_fault, "break the Capra origin convention (negative control)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  std::ofstream file;
  if (!output_path.empty()) {
    file.open(output_path, std::ios::binary);
    if (!file) {
      err << "error: cannot open " << output_path << '\n';
      return 1;
    }
  }
  std::ostream& sink = output_path.empty() ? out : file;

  try {
    if (norm->parsed()) {
      cmd_norm(parse_vector(x_text), ks, sink);
    } else if (conj->parsed()) {
      cmd_conj(cc, sink);
    } else if (l0ext->parsed()) {
      if (grid > 0)
        cmd_l0ext_grid(grid, sink);
      else if (!ext_x.empty())
        cmd_l0ext_point(parse_vector(ext_x), sink);
      else
        throw ValidationError("l0ext: give --x or --grid");
    } else if (ver->parsed()) {
      return verify::run(vc, sink);
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  sink.flush();
  if (!sink) {
    err << "error: write failed\n";
    return 1;
  }
  return 0;
}

}  // namespace capra::cli
