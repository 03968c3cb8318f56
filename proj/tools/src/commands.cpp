#include "qpencil_cli/commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "qpencil/bounded_spectrum.hpp"
#include "qpencil/debranges.hpp"
#include "qpencil/errors.hpp"
#include "qpencil/line_spectrum.hpp"
#include "qpencil/pencil.hpp"
#include "qpencil_cli/problem_io.hpp"

namespace qpencil::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::uint64_t kSeed = 20240917;

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<double> split_numbers(const std::string& text, std::size_t count, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError(std::string(flag) + ": cannot parse '" + item + "'");
    }
  }
  if (out.size() != count) {
    throw ValidationError(std::string(flag) + ": expected " + std::to_string(count) + " values");
  }
  return out;
}

double pencil_radius(const Coefficients& coeffs, const Geometry& geometry) {
  const auto m = assemble_pencil(coeffs, geometry, true);
  double r = 0.0;
  for (const cplx& z : pencil_spectrum(m)) r = std::max(r, std::abs(z));
  return r;
}

const WholeLine* whole_line(const Problem& p) { return std::get_if<WholeLine>(&p.geometry); }

void require_whole_line(const Problem& p, const char* command) {
  if (!whole_line(p)) {
    throw ValidationError(std::string(command) + " requires a whole_line problem");
  }
}

cplx weyl_value(const Problem& p, cplx z) {
  if (const auto* h = std::get_if<HalfLine>(&p.geometry)) return weyl_m_halfline(p.coeffs, z, *h);
  if (const auto* b = std::get_if<Bounded>(&p.geometry)) {
    return weyl_m_bounded(BoundedProblem{p.coeffs, *b}, z);
  }
  return singular_M(p.coeffs, z);
}

std::vector<Eigenvalue> eigenvalues(const Problem& p, double lo, double hi, double tol) {
  if (const auto* h = std::get_if<HalfLine>(&p.geometry)) {
    return eigenvalues_halfline(p.coeffs, *h, lo, hi, tol);
  }
  if (const auto* b = std::get_if<Bounded>(&p.geometry)) {
    return eigenvalues_bounded(BoundedProblem{p.coeffs, *b}, lo, hi, tol);
  }
  std::vector<Eigenvalue> out;
  for (double l : eigenvalues_line(p.coeffs, lo, hi, tol)) out.push_back({l, 1});
  return out;
}

bool dirichlet(const Geometry& g) {
  if (const auto* h = std::get_if<HalfLine>(&g)) return h->gamma == 0.0;
  if (const auto* b = std::get_if<Bounded>(&g)) return b->alpha == 0.0 && b->beta == 0.0;
  return true;
}

struct OracleComparison {
  std::size_t shooting_count;
  std::size_t pencil_count;
  double max_deviation;
};

/// Nonzero eigenvalues in [lo, hi] from shooting against the Galerkin pencil.
OracleComparison compare_with_pencil(const Problem& p, const std::vector<Eigenvalue>& eig,
                                     double lo, double hi) {
  if (!dirichlet(p.geometry)) {
    throw PreconditionError("the pencil oracle covers Dirichlet boundary conditions only");
  }
  const auto m = assemble_pencil(p.coeffs, p.geometry, true);
  std::vector<double> shooting;
  for (const auto& e : eig) {
    if (e.lambda != 0.0) shooting.push_back(e.lambda);
  }
  std::vector<double> pencil;
  for (double l : pencil_real_spectrum(m)) {
    if (l >= lo && l <= hi) pencil.push_back(l);
  }
  OracleComparison c{shooting.size(), pencil.size(), 0.0};
  if (shooting.size() == pencil.size()) {
    for (std::size_t i = 0; i < shooting.size(); ++i) {
      c.max_deviation = std::max(c.max_deviation, std::abs(shooting[i] - pencil[i]));
    }
  } else {
    c.max_deviation = std::numeric_limits<double>::infinity();
  }
  return c;
}

std::vector<double> probe_points(const Coefficients& coeffs) {
  const auto hull = coeffs.hull().value_or(std::pair{-0.5, 0.5});
  std::vector<double> xs{hull.first - 1.0, hull.second + 1.0};
  for (double x : coeffs.nodes()) xs.push_back(x);
  for (std::size_t i = 0; i + 1 < coeffs.nodes().size(); ++i) {
    xs.push_back(0.5 * (coeffs.nodes()[i] + coeffs.nodes()[i + 1]));
  }
  std::sort(xs.begin(), xs.end());
  return xs;
}

cplx random_upper(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> re(-4.0, 4.0);
  std::uniform_real_distribution<double> im(0.05, 4.0);
  return {re(rng), im(rng)};
}

void push(std::vector<CheckItem>& items, std::string name, double value, double limit) {
  items.push_back({std::move(name), value <= limit, value, limit});
}

void check_propagation(const Problem& p, std::mt19937_64& rng, std::vector<CheckItem>& items) {
  const auto xs = probe_points(p.coeffs);
  double wr = 0.0;
  double lag = 0.0;
  for (int k = 0; k < 5; ++k) {
    const cplx z1 = random_upper(rng);
    const cplx z2 = std::conj(random_upper(rng));
    const auto fp = fundamental_pair(p.coeffs, z1, xs.front(), 0.3 * k, xs);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const auto& t = fp.theta[i];
      const auto& f = fp.phi[i];
      const double scale = std::abs(t.f * f.df_left) + std::abs(t.df_left * f.f);
      wr = std::max(wr, std::abs(wronskian(t, f) - z1) / scale);
    }
    const double x = xs.front();
    const double y = xs.back();
    const double at[] = {x, y};
    const auto f = solve_ivp(p.coeffs, z1, x, 1.0, 0.25, at);
    const auto g = solve_ivp(p.coeffs, z2, x, 0.5, -0.75, at);
    const double scale =
        std::max(1.0, (1.0 + std::abs(z1) + std::abs(z2)) *
                          (std::abs(f[1].f) + std::abs(f[1].df_left)) *
                          (std::abs(g[1].f) + std::abs(g[1].df_left)));
    lag = std::max(lag, lagrange_residual(p.coeffs, z1, z2, f[0], g[0], x, y) / scale);
  }
  push(items, "wronskian_constancy", wr, 1e-12);
  push(items, "lagrange_identity", lag, 1e-10);
}

void check_weyl(const Problem& p, std::mt19937_64& rng, std::vector<CheckItem>& items) {
  double herglotz = 0.0;
  double conj = 0.0;
  double extra = 0.0;
  for (int k = 0; k < 50; ++k) {
    const cplx z = random_upper(rng);
    const cplx m = weyl_value(p, z);
    if (!whole_line(p)) herglotz = std::max(herglotz, -m.imag() / std::max(1.0, std::abs(m)));
    conj = std::max(conj, std::abs(weyl_value(p, std::conj(z)) - std::conj(m)) /
                              std::max(1.0, std::abs(m)));
    if (const auto* b = std::get_if<Bounded>(&p.geometry)) {
      const cplx alt = weyl_m_bounded_fundamental(BoundedProblem{p.coeffs, *b}, z);
      extra = std::max(extra, std::abs(alt - m) / std::max(1.0, std::abs(m)));
    } else if (const auto* h = std::get_if<HalfLine>(&p.geometry)) {
      HalfLine d = *h;
      d.gamma = 0.0;
      HalfLine n = *h;
      n.gamma = std::numbers::pi / 2;
      const cplx m0 = weyl_m_halfline(p.coeffs, z, d);
      const cplx m1 = weyl_m_halfline(p.coeffs, z, n);
      extra = std::max(extra, std::abs(m1 + 1.0 / m0) / std::max(1.0, std::abs(m1)));
    }
  }
  if (!whole_line(p)) push(items, "herglotz", herglotz, 1e-12);
  push(items, "weyl_conjugation", conj, 1e-12);
  if (std::holds_alternative<Bounded>(p.geometry)) push(items, "weyl_forms_agree", extra, 1e-11);
  if (std::holds_alternative<HalfLine>(p.geometry)) {
    push(items, "weyl_quarter_turn", extra, 1e-11);
  }
}

void check_spectrum(const Problem& p, std::vector<CheckItem>& items) {
  if (!p.coeffs.is_dirac_comb() || !dirichlet(p.geometry)) return;
  const auto [lo, hi] = eigen_window(p);
  const auto eig = eigenvalues(p, lo, hi, 1e-12);
  const auto c = compare_with_pencil(p, eig, lo, hi);
  push(items, "pencil_oracle", c.max_deviation, 1e-8);
}

void check_measure(const Problem& p, std::vector<CheckItem>& items) {
  if (!whole_line(p)) return;
  const auto [lo, hi] = default_window(p.coeffs);
  const auto data = spectral_measure(p.coeffs, lo, hi);
  double res = 0.0;
  for (double r : residue_check(p.coeffs, data)) res = std::max(res, r);
  push(items, "residue_masses", res, 1e-6);
  if (!p.coeffs.is_dirac_comb()) return;
  double iso = 0.0;
  for (double c : p.coeffs.atom_sites()) {
    double sum = 0.0;
    for (const auto& d : data) {
      const auto phi = weyl_solution(p.coeffs, d.lambda, Side::plus);
      sum += std::norm(phi.value(c)) * d.mass;
    }
    iso = std::max(iso, std::abs(sum - 1.0));
  }
  push(items, "isometry_at_atoms", iso, 1e-8);
}

void write_csv_row(std::ostream& out, std::initializer_list<std::string> cells) {
  bool first = true;
  for (const auto& c : cells) {
    if (!first) out << ',';
    out << c;
    first = false;
  }
  out << '\n';
}

}  // namespace

std::pair<double, double> eigen_window(const Problem& problem) {
  if (whole_line(problem)) return default_window(problem.coeffs);
  const double base =
      std::max(pencil_radius(problem.coeffs, problem.geometry),
               pencil_radius(problem.coeffs, WholeLine{}));
  double bc = 1.0;
  auto add_angle = [&](double angle, double length) {
    const double c = std::abs(std::cos(angle));
    if (angle != 0.0 && c > 1e-12) bc += 1.0 / (c * std::tanh(length / 2.0));
  };
  if (const auto* b = std::get_if<Bounded>(&problem.geometry)) {
    add_angle(b->alpha, b->b - b->a);
    add_angle(b->beta, b->b - b->a);
  } else {
    add_angle(std::get<HalfLine>(problem.geometry).gamma, std::numeric_limits<double>::infinity());
  }
  const double r = std::min(1e4, (2.0 * base + 1.0) * bc);
  return {-r, r};
}

std::vector<CheckItem> check_suite(const Problem& problem) {
  std::mt19937_64 rng(kSeed);
  std::vector<CheckItem> items;
  check_propagation(problem, rng, items);
  check_weyl(problem, rng, items);
  check_spectrum(problem, items);
  check_measure(problem, items);
  return items;
}

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral computations for -f'' + f/4 = z omega f + z^2 upsilon f", "qpencil"};
  app.require_subcommand(1);
  std::string problem_path;
  std::string output_path;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("problem", problem_path, "Problem file (JSON)")->required();
    sub->add_option("-o,--output", output_path, "Write CSV here instead of stdout");
  };

  std::string window;
  double tol = 1e-10;
  bool oracle = false;
  auto* eig = app.add_subcommand("eig", "Eigenvalues in a window");
  add_common(eig);
  eig->add_option("--window", window, "lo,hi");
  eig->add_option("--tol", tol, "Root tolerance");
  eig->add_flag("--oracle", oracle, "Compare with the Galerkin pencil");

  std::string grid;
  auto* weyl = app.add_subcommand("weyl", "Weyl function samples");
  add_common(weyl);
  weyl->add_option("--grid", grid, "zre0,zre1,zim0,zim1,n")->required();

  auto* spec = app.add_subcommand("specmeasure", "Spectral measure with residue cross-check");
  add_common(spec);

  std::string element_path;
  auto* transform = app.add_subcommand("transform", "Generalized Fourier transform");
  add_common(transform);
  transform->add_option("--input", element_path, "Element file (JSON)")->required();

  double c = 0.0;
  auto* branges = app.add_subcommand("debranges", "de Branges kernel identities at c");
  add_common(branges);
  branges->add_option("--c", c, "Point in the support")->required();

  auto* check = app.add_subcommand("check", "Invariant suite");
  add_common(check);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  std::ofstream file;
  if (!output_path.empty()) {
    file.open(output_path);
    if (!file) {
      err << "error: cannot write " << output_path << '\n';
      return kExitValidation;
    }
  }
  std::ostream& csv = output_path.empty() ? out : file;

  try {
    const Problem problem = parse_problem(problem_path);
    if (eig->parsed()) {
      auto [lo, hi] = eigen_window(problem);
      if (!window.empty()) {
        const auto w = split_numbers(window, 2, "--window");
        lo = w[0];
        hi = w[1];
      }
      const auto list = eigenvalues(problem, lo, hi, tol);
      const bool with_mult = !whole_line(problem);
      csv << (with_mult ? "lambda,multiplicity\n" : "lambda\n");
      for (const auto& e : list) {
        if (with_mult) {
          write_csv_row(csv, {fmt(e.lambda), std::to_string(e.multiplicity)});
        } else {
          write_csv_row(csv, {fmt(e.lambda)});
        }
      }
      if (oracle) {
        if (!problem.coeffs.is_dirac_comb()) {
          err << "note: density pieces lumped for the pencil oracle\n";
        }
        const auto cmp = compare_with_pencil(problem, list, lo, hi);
        err << "oracle: shooting " << cmp.shooting_count << ", pencil " << cmp.pencil_count
            << ", max deviation " << fmt(cmp.max_deviation) << '\n';
        if (cmp.shooting_count != cmp.pencil_count) return kExitInvariant;
      }
    } else if (weyl->parsed()) {
      const auto g = split_numbers(grid, 5, "--grid");
      const double nd = g[4];
      if (!(nd >= 1.0) || nd != std::floor(nd) || nd > 1e4) {
        throw ValidationError("--grid: n must be an integer in [1, 10000]");
      }
      const int n = static_cast<int>(nd);
      auto node = [&](double a, double b, int i) { return n == 1 ? a : a + (b - a) * i / (n - 1); };
      csv << "z_re,z_im,m_re,m_im\n";
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          const cplx z{node(g[0], g[1], i), node(g[2], g[3], j)};
          cplx m{kNaN, kNaN};
          try {
            m = weyl_value(problem, z);
          } catch (const SingularParameterError&) {
          }
          write_csv_row(csv, {fmt(z.real()), fmt(z.imag()), fmt(m.real()), fmt(m.imag())});
        }
      }
    } else if (spec->parsed()) {
      require_whole_line(problem, "specmeasure");
      const auto [lo, hi] = default_window(problem.coeffs);
      const auto data = spectral_measure(problem.coeffs, lo, hi);
      const auto res = residue_check(problem.coeffs, data);
      csv << "lambda,mass,residue_check\n";
      for (std::size_t i = 0; i < data.size(); ++i) {
        write_csv_row(csv, {fmt(data[i].lambda), fmt(data[i].mass), fmt(res[i])});
      }
    } else if (transform->parsed()) {
      require_whole_line(problem, "transform");
      const auto f = parse_element(element_path);
      const auto [lo, hi] = default_window(problem.coeffs);
      csv << "lambda,fhat_re,fhat_im\n";
      for (const auto& d : spectral_measure(problem.coeffs, lo, hi)) {
        const cplx v = transform_hat(problem.coeffs, f, d.lambda);
        write_csv_row(csv, {fmt(d.lambda), fmt(v.real()), fmt(v.imag())});
      }
    } else if (branges->parsed()) {
      require_whole_line(problem, "debranges");
      const std::vector<cplx> zetas{{0.3, 0.7}, {-1.1, 0.4}, {0.5, -0.9}, {0.0, 2.0}, {1.7, 0.0}};
      double embed = 0.0;
      double kernel = 0.0;
      for (const cplx& a : zetas) {
        for (const cplx& b : zetas) {
          embed = std::max(embed, embedding_residual(problem.coeffs, a, b, c));
          const cplx q = kernel_K(problem.coeffs, a, b, c);
          const cplx i = kernel_K_integral(problem.coeffs, a, b, c);
          kernel = std::max(kernel, std::abs(q - i) / std::max(1.0, std::abs(i)));
        }
      }
      csv << "quantity,value\n";
      write_csv_row(csv, {"embedding_residual_max", fmt(embed)});
      write_csv_row(csv, {"kernel_quotient_vs_integral_max", fmt(kernel)});
      write_csv_row(csv, {"base_point_estimate", fmt(base_point_estimate(problem.coeffs, c))});
      write_csv_row(csv, {"exp_minus_c", fmt(std::exp(-c))});
    } else if (check->parsed()) {
      bool ok = true;
      for (const auto& item : check_suite(problem)) {
        csv << (item.pass ? "PASS " : "FAIL ") << item.name << ' ' << fmt(item.value)
            << " <= " << fmt(item.limit) << '\n';
        ok = ok && item.pass;
      }
      if (!ok) return kExitInvariant;
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace qpencil::cli
