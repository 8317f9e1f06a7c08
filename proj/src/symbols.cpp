#include "fracrate/symbols.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <ostream>

#include "fracrate/parallel.hpp"

namespace fracrate {

namespace {

constexpr double kPi = std::numbers::pi;

void require_dimension(int n) {
  if (n < 1 || n > 3)
    throw std::invalid_argument("dimension must be 1, 2 or 3");
}

void require_s_open(double s) {
  if (!(s > 0.0 && s < 1.0))
    throw std::invalid_argument("s must lie in (0,1)");
}

void require_s_closed(double s) {
  if (!(s > 0.0 && s <= 1.0))
    throw std::invalid_argument("s must lie in (0,1]");
}

/// Composite Gauss-Kronrod panels over [a, b]; panel count chosen by the
/// caller from the integrand's oscillation count.
template <class F>
double composite_panels(F&& f, double a, double b, int panels) {
  double sum = 0.0;
  const double width = (b - a) / panels;
  for (int i = 0; i < panels; ++i) {
    const double lo = a + i * width;
    sum += detail::gauss_kronrod_15(f, lo, lo + width).value;
  }
  return sum;
}

/// One-sided master integral I1(s) = \int_0^inf (1 - cos r) r^{-1-2s} dr,
/// split as exact series on [0,1] plus power and oscillatory tails.
/// The k = 1 series term 1/(4(1-s)) carries the whole s -> 1 blow-up.
double one_sided_cos_master(double s, const QuadratureConfig& cfg) {
  double series = 0.0;
  double factorial_sign = 0.5;  // (-1)^{k+1} / (2k)! at k = 1
  for (int k = 1; k < 24; ++k) {
    const double term = factorial_sign / (2.0 * k - 2.0 * s);
    series += term;
    if (std::abs(term) < 1e-18 * std::abs(series)) break;
    factorial_sign /= -((2.0 * k + 1.0) * (2.0 * k + 2.0));
  }
  const double tail_power = 1.0 / (2.0 * s);
  const double tail_cos = integrate_oscillatory_tail(2.0 * s, 1.0, 1.0, cfg).value;
  return series + tail_power - tail_cos;
}

/// I1(s) - 1/(4(1-s)); regular across s = 1 (used by the split rate symbol).
double one_sided_cos_master_regular(double s, const QuadratureConfig& cfg) {
  double series = 0.0;
  double factorial_sign = 0.5;
  for (int k = 1; k < 24; ++k) {
    factorial_sign /= -((2.0 * k + 1.0) * (2.0 * k + 2.0));
    const double term = factorial_sign / (2.0 * k + 2.0 - 2.0 * s);
    series += term;
    if (std::abs(term) < 1e-18 * (std::abs(series) + 1e-30)) break;
  }
  const double tail_power = 1.0 / (2.0 * s);
  const double tail_cos = integrate_oscillatory_tail(2.0 * s, 1.0, 1.0, cfg).value;
  return series + tail_power - tail_cos;
}

/// (K_N(2) - K_N(2s)) / (1 - s), evaluated without cancellation. Vanishes
/// identically for N = 1 and has a closed form for N = 3.
double angular_moment_rate(int dimension, double s, const QuadratureConfig& cfg) {
  switch (dimension) {
    case 1:
      return 0.0;
    case 2: {
      // 4 \int_0^{pi/2} 2 c^2 expm1(2(s-1) ln c) / (2(s-1)) dtheta, c = cos.
      const double ds = 2.0 * (s - 1.0);
      auto integrand = [ds](double theta) {
        const double c = std::cos(theta);
        if (c <= 0.0) return 0.0;
        const double lc = std::log(c);
        const double ratio = (ds * lc > -1e-14 && ds * lc < 1e-14)
                                 ? lc
                                 : std::expm1(ds * lc) / ds;
        return 2.0 * c * c * ratio;
      };
      return 4.0 * integrate_adaptive(integrand, 0.0, 0.5 * kPi, cfg).value;
    }
    case 3:
      // (4pi/3 - 4pi/(2s+1)) / (1-s) = -8pi / (3(2s+1)).
      return -8.0 * kPi / (3.0 * (2.0 * s + 1.0));
    default:
      require_dimension(dimension);
      return 0.0;
  }
}

/// The s -> 1 regular part of the rate symbol's |xi|^{2s} coefficient:
/// kappa(N,s) = (omega_N/2 - 2(1-s)/C(N,s)) / (1-s)
///            = (K_N(2) - K_N(2s))/(2(1-s)) - 2 K_N(2s) I1reg(s).
double rate_kappa(int dimension, double s, const QuadratureConfig& cfg) {
  const double kn = angular_cos_moment(dimension, 2.0 * s, cfg);
  const double reg = one_sided_cos_master_regular(s, cfg);
  return 0.5 * angular_moment_rate(dimension, s, cfg) - 2.0 * kn * reg;
}

/// sin-weighted tail \int_R^inf sin(omega r) r^{-q} dr (q > 1), reduced to
/// the cosine tail by one integration by parts.
double sin_tail(double q, double omega, double R, const QuadratureConfig& cfg) {
  if (omega == 0.0) return 0.0;
  if (omega * R >= cfg.tail_truncation_radius) {
    const double boundary = std::cos(omega * R) * std::pow(R, -q) / omega;
    return boundary -
           (q / omega) * integrate_oscillatory_tail(q, omega, R, cfg).value;
  }
  const double bridge_end = cfg.tail_truncation_radius / omega;
  const double head =
      integrate_adaptive(
          [=](double r) { return std::sin(omega * r) * std::pow(r, -q); }, R,
          bridge_end, cfg)
          .value;
  const double boundary = std::cos(omega * bridge_end) * std::pow(bridge_end, -q) / omega;
  return head + boundary -
         (q / omega) *
             integrate_oscillatory_tail(q, omega, bridge_end, cfg).value;
}

/// \int_1^inf cos(omega r) r^{-1-2s} dr. For omega <= 1 the exact identity
///   1/(2s) - omega^{2s} I1(s) + sum_k (-1)^{k+1} omega^{2k}/((2k)!(2k-2s))
/// (substitute t = omega r and peel off the [0, omega] series) avoids the
/// long quadrature bridge the direct oscillatory tail would need.
double radial_cos_tail(double s, double omega, const QuadratureConfig& cfg) {
  if (omega == 0.0) return 1.0 / (2.0 * s);
  if (omega <= 1.0) {
    double series = 0.0;
    double factorial_sign = 0.5;
    const double w2 = omega * omega;
    double power = 1.0;
    for (int k = 1; k < 24; ++k) {
      power *= w2;
      series += factorial_sign * power / (2.0 * k - 2.0 * s);
      factorial_sign /= -((2.0 * k + 1.0) * (2.0 * k + 2.0));
      if (std::abs(factorial_sign * power) < 1e-19) break;
    }
    return 1.0 / (2.0 * s) -
           std::pow(omega, 2.0 * s) * one_sided_cos_master(s, cfg) + series;
  }
  return integrate_oscillatory_tail(2.0 * s, omega, 1.0, cfg).value;
}

QuadratureConfig inner_config(const QuadratureConfig& cfg) {
  QuadratureConfig inner = cfg;
  inner.abs_tol = std::max(cfg.abs_tol * 0.1, 1e-15);
  inner.rel_tol = std::max(cfg.rel_tol * 0.1, 1e-15);
  return inner;
}

}  // namespace

Constants Constants::for_dimension(int n) {
  require_dimension(n);
  Constants c;
  c.dimension = n;
  c.omega_n = (n == 1) ? 2.0 : (n == 2) ? kPi : 4.0 * kPi / 3.0;
  c.sphere_measure = n * c.omega_n;
  c.lambda_default = 8.0 * c.sphere_measure;
  return c;
}

void Constants::validate() const {
  require_dimension(dimension);
  const Constants ref = for_dimension(dimension);
  if (std::abs(omega_n - ref.omega_n) > 1e-12 ||
      std::abs(sphere_measure - ref.sphere_measure) > 1e-12)
    throw std::invalid_argument("Constants inconsistent with dimension");
  if (lambda_default < 8.0 * sphere_measure - 1e-12)
    throw std::invalid_argument("lambda_default below 8 N omega_N");
}

double angular_cos_moment(int dimension, double alpha,
                          const QuadratureConfig& cfg) {
  require_dimension(dimension);
  if (!(alpha > -1.0))
    throw std::invalid_argument("angular moment requires alpha > -1");
  switch (dimension) {
    case 1:
      return 2.0;
    case 2:
      return 4.0 * integrate_adaptive(
                       [alpha](double theta) {
                         return std::pow(std::cos(theta), alpha);
                       },
                       0.0, 0.5 * kPi, cfg)
                 .value;
    default:
      return 4.0 * kPi / (alpha + 1.0);
  }
}

double cos_defect_angular(int dimension, double r, const QuadratureConfig& cfg) {
  switch (dimension) {
    case 1:
      return 2.0 * cos_defect(r, cfg.series_switch_radius);
    case 2: {
      const int panels = std::max(2, static_cast<int>(std::ceil(r / 5.0)));
      auto integrand = [r, &cfg](double theta) {
        return cos_defect(r * std::cos(theta), cfg.series_switch_radius);
      };
      return 4.0 * composite_panels(integrand, 0.0, 0.5 * kPi, panels);
    }
    case 3: {
      if (std::abs(r) < cfg.series_switch_radius) {
        // 8 pi sum_{k>=2} (-1)^k r^{2k} / (2k+1)!
        const double r2 = r * r;
        double term = r2 * r2 / 120.0;
        double sum = term;
        for (int k = 2; k < 40; ++k) {
          term *= -r2 / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
          sum += term;
          if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        }
        return 8.0 * kPi * sum;
      }
      return 2.0 * kPi * (2.0 * r * r / 3.0 - 4.0 + 4.0 * std::sin(r) / r);
    }
    default:
      require_dimension(dimension);
      return 0.0;
  }
}

double frac_constant(int dimension, double s, const QuadratureConfig& cfg) {
  require_dimension(dimension);
  require_s_open(s);
  const double kn = angular_cos_moment(dimension, 2.0 * s, cfg);
  return 1.0 / (kn * one_sided_cos_master(s, cfg));
}

double sigma_factor(int dimension, double s, const QuadratureConfig& cfg) {
  const Constants c = Constants::for_dimension(dimension);
  return 4.0 * (1.0 - s) / (c.omega_n * frac_constant(dimension, s, cfg));
}

double phi_s(int dimension, double s, double xi_mag,
             const QuadratureConfig& cfg) {
  require_s_open(s);
  if (xi_mag < 0.0) throw std::invalid_argument("xi_mag must be >= 0");
  if (xi_mag == 0.0) return 0.0;
  return 2.0 * std::pow(xi_mag, 2.0 * s) / frac_constant(dimension, s, cfg);
}

double m_multiplier(int dimension, double xi_mag, const QuadratureConfig& cfg) {
  require_dimension(dimension);
  if (xi_mag < 0.0) throw std::invalid_argument("xi_mag must be >= 0");
  if (xi_mag == 0.0) return 0.0;
  const QuadratureConfig inner = inner_config(cfg);
  auto integrand = [dimension, &inner](double r) {
    return cos_defect_angular(dimension, r, inner) / (r * r * r);
  };
  const double radial = integrate_adaptive(integrand, 0.0, xi_mag, cfg).value;
  return xi_mag * xi_mag * radial;
}

double j_multiplier(int dimension, double s, double xi_mag,
                    const QuadratureConfig& cfg) {
  require_dimension(dimension);
  require_s_closed(s);
  if (xi_mag < 0.0) throw std::invalid_argument("xi_mag must be >= 0");
  if (xi_mag == 0.0) return 0.0;
  const QuadratureConfig inner = inner_config(cfg);
  auto integrand = [dimension, s, xi_mag, &inner](double r) {
    return cos_defect_angular(dimension, xi_mag * r, inner) *
           std::pow(r, -1.0 - 2.0 * s);
  };
  return integrate_adaptive(integrand, 0.0, 1.0, cfg).value;
}

double cos_tail(int dimension, double s, double xi_mag,
                const QuadratureConfig& cfg) {
  require_dimension(dimension);
  require_s_closed(s);
  if (xi_mag < 0.0) throw std::invalid_argument("xi_mag must be >= 0");
  const Constants c = Constants::for_dimension(dimension);
  if (xi_mag == 0.0) return c.sphere_measure / (2.0 * s);
  switch (dimension) {
    case 1:
      return 2.0 * radial_cos_tail(s, xi_mag, cfg);
    case 2: {
      const QuadratureConfig inner = inner_config(cfg);
      auto integrand = [s, xi_mag, &inner](double theta) {
        return radial_cos_tail(s, xi_mag * std::cos(theta), inner);
      };
      return 4.0 * integrate_adaptive(integrand, 0.0, 0.5 * kPi, cfg).value;
    }
    default:
      return 4.0 * kPi / xi_mag * sin_tail(2.0 + 2.0 * s, xi_mag, 1.0, cfg);
  }
}

double tail_T(int dimension, double s, double xi_mag,
              const QuadratureConfig& cfg) {
  const Constants c = Constants::for_dimension(dimension);
  return c.sphere_measure / s - 2.0 * cos_tail(dimension, s, xi_mag, cfg);
}

double rate_symbol(int dimension, double s, double xi_mag,
                   const QuadratureConfig& cfg) {
  require_dimension(dimension);
  require_s_open(s);
  if (s > kRateSymbolMaxS)
    throw std::invalid_argument(
        "rate_symbol: s within 1e-6 of 1 rejected (precision guard)");
  if (xi_mag < 0.0) throw std::invalid_argument("xi_mag must be >= 0");
  if (xi_mag == 0.0) return 0.0;
  const Constants c = Constants::for_dimension(dimension);
  const double a = xi_mag * xi_mag;
  if (a < 1e-280) return 0.0;
  const double log_a = std::log(a);
  // (a - a^s)/(1-s) = a expm1((s-1) ln a)/(s-1), exact at xi = 1.
  const double homogeneous =
      (log_a == 0.0) ? a * log_a
                     : a * std::expm1((s - 1.0) * log_a) / (s - 1.0);
  return 0.5 * c.omega_n * homogeneous +
         std::pow(xi_mag, 2.0 * s) * rate_kappa(dimension, s, cfg);
}

double limit_symbol(int dimension, double xi_mag, const QuadratureConfig& cfg) {
  return m_multiplier(dimension, xi_mag, cfg) -
         tail_T(dimension, 1.0, xi_mag, cfg);
}

double L_symbol(int dimension, double xi_mag, const QuadratureConfig& cfg) {
  const Constants c = Constants::for_dimension(dimension);
  return -2.0 * c.sphere_measure + 4.0 * cos_tail(dimension, 1.0, xi_mag, cfg) +
         2.0 * m_multiplier(dimension, xi_mag, cfg);
}

MBoundsReport check_m_bounds(int dimension, const std::vector<double>& xi_grid,
                             const QuadratureConfig& cfg, double tolerance) {
  require_dimension(dimension);
  if (xi_grid.empty())
    throw std::invalid_argument("check_m_bounds: empty wavenumber grid");
  for (double xi : xi_grid)
    if (!(xi > 0.0))
      throw std::invalid_argument("check_m_bounds: wavenumbers must be > 0");

  const Constants c = Constants::for_dimension(dimension);
  const double nw = c.sphere_measure;

  MBoundsReport report;
  report.dimension = dimension;
  report.tolerance = tolerance;
  report.rows.resize(xi_grid.size());
  report.worst_margin = std::numeric_limits<double>::infinity();

  parallel_for(xi_grid.size(), [&](std::size_t i) {
    const double xi = xi_grid[i];
    MBoundsRow row;
    row.xi = xi;
    row.m = m_multiplier(dimension, xi, cfg);
    const double xi2 = xi * xi;
    const double xi4 = xi2 * xi2;

    auto add = [&](const std::string& name, bool upper, double bound) {
      MBoundCheck check;
      check.name = name;
      check.is_upper = upper;
      check.bound = bound;
      check.margin = upper ? bound - row.m : row.m - bound;
      check.pass = check.margin >= -std::abs(tolerance);
      row.checks.push_back(check);
    };

    if (xi <= 2.0) add("upper_quartic", true, nw / 24.0 * xi4);
    if (xi > 2.0)
      add("upper_log", true, nw * xi2 * (1.0 / 6.0 + std::log(xi)));
    if (xi < 3.0) add("lower_quartic", false, nw / 768.0 * xi4);
    if (xi >= 3.0)
      // Quartic piece restricted to B(0,3) contributes 9 |xi|^2 / 768.
      add("lower_log", false,
          nw * xi2 * (9.0 / 768.0 + 5.0 / 36.0 * (std::log(xi) - std::log(3.0))));

    report.rows[i] = std::move(row);
  });

  for (const auto& row : report.rows)
    for (const auto& check : row.checks) {
      report.all_pass = report.all_pass && check.pass;
      report.worst_margin = std::min(report.worst_margin, check.margin);
    }
  return report;
}

SymbolTable build_symbol_table(const Constants& constants, double s,
                               bool is_limit, std::vector<double> xi_values,
                               const QuadratureConfig& cfg) {
  constants.validate();
  if (!is_limit) {
    require_s_open(s);
    if (s > kRateSymbolMaxS)
      throw std::invalid_argument("symbol table: s too close to 1");
  }

  std::sort(xi_values.begin(), xi_values.end());
  xi_values.erase(std::unique(xi_values.begin(), xi_values.end()),
                  xi_values.end());
  for (double xi : xi_values)
    if (!(xi >= 0.0) || !std::isfinite(xi))
      throw std::invalid_argument("symbol table: invalid wavenumber");

  SymbolTable table;
  table.constants = constants;
  table.s = is_limit ? 1.0 : s;
  table.is_limit = is_limit;
  table.cfg = cfg;
  table.entries.resize(xi_values.size());

  const int n = constants.dimension;
  parallel_for(xi_values.size(), [&](std::size_t i) {
    const double xi = xi_values[i];
    SymbolEntry e;
    e.xi = xi;
    e.m = m_multiplier(n, xi, cfg);
    const double ct1 = cos_tail(n, 1.0, xi, cfg);
    const double tt1 = constants.sphere_measure - 2.0 * ct1;
    e.limit_m = e.m - tt1;
    e.l_symbol = -2.0 * constants.sphere_measure + 4.0 * ct1 + 2.0 * e.m;
    if (is_limit) {
      e.phi_s = 0.5 * constants.omega_n * xi * xi;
      e.cos_tail = ct1;
      e.tail_t = tt1;
      e.rate_m = e.limit_m;
    } else {
      e.phi_s = phi_s(n, s, xi, cfg);
      e.cos_tail = cos_tail(n, s, xi, cfg);
      e.tail_t = constants.sphere_measure / s - 2.0 * e.cos_tail;
      e.rate_m = rate_symbol(n, s, xi, cfg);
    }
    table.entries[i] = e;
  });
  return table;
}

std::vector<double> default_probe_wavenumbers() {
  std::vector<double> probes;
  for (int k = 0; k <= 20; ++k) probes.push_back(std::pow(10.0, -2.0 + 0.2 * k));
  return probes;
}

std::string format_sig12(double v) {
  char buf[40];
  const int len = std::snprintf(buf, sizeof(buf), "%.12g", v);
  return std::string(buf, buf + len);
}

void write_symbol_csv(const SymbolTable& table, std::ostream& out) {
  out << "xi,phi_s,m,tail_T,cos_tail,rate_M,limit_M,L_symbol\n";
  for (const auto& e : table.entries) {
    out << format_sig12(e.xi) << ',' << format_sig12(e.phi_s) << ','
        << format_sig12(e.m) << ',' << format_sig12(e.tail_t) << ','
        << format_sig12(e.cos_tail) << ',' << format_sig12(e.rate_m) << ','
        << format_sig12(e.limit_m) << ',' << format_sig12(e.l_symbol) << '\n';
  }
}

}  // namespace fracrate
