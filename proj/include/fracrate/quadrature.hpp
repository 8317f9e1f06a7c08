#pragma once

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracrate {

/// Tolerances and switch radii shared by all 1D integration primitives.
struct QuadratureConfig {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  int max_subdivisions = 4000;
  /// |t| below which series branches replace direct kernel evaluation.
  double series_switch_radius = 0.5;
  /// Phase omega*r beyond which integration by parts replaces quadrature
  /// for oscillatory tails.
  double tail_truncation_radius = 30.0;

  void validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
      throw std::invalid_argument("quadrature tolerances must be positive");
    if (max_subdivisions < 1)
      throw std::invalid_argument("max_subdivisions must be >= 1");
    if (!(series_switch_radius > 0.0 && series_switch_radius < 1.0))
      throw std::invalid_argument("series_switch_radius must lie in (0,1)");
    if (!(tail_truncation_radius >= 1.0))
      throw std::invalid_argument("tail_truncation_radius must be >= 1");
  }
};

struct IntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int subdivisions_used = 0;
};

/// Raised when the subdivision budget is exhausted or an asymptotic
/// expansion fails to reach tolerance; carries the best estimate so far.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, IntegralResult best)
      : std::runtime_error(what), best_estimate(best) {}
  IntegralResult best_estimate;
};

namespace detail {

// Gauss-Kronrod 7/15 nodes and weights (positive half, QUADPACK dqk15).
inline constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelEstimate {
  double value;
  double error;
};

/// One Gauss-Kronrod 7/15 panel on [a, b] with a QUADPACK-style error bound.
template <class F>
PanelEstimate gauss_kronrod_15(F&& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  const double fc = f(center);
  double resk = fc * kKronrodWeights[7];
  double resg = fc * kGaussWeights[3];
  double resabs = std::abs(resk);

  double fv[7][2];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    fv[j][0] = f(center - dx);
    fv[j][1] = f(center + dx);
    const double sum = fv[j][0] + fv[j][1];
    resk += kKronrodWeights[j] * sum;
    resabs += kKronrodWeights[j] * (std::abs(fv[j][0]) + std::abs(fv[j][1]));
    if (j % 2 == 1) resg += kGaussWeights[j / 2] * sum;
  }

  const double mean = resk * 0.5;
  double resasc = kKronrodWeights[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j)
    resasc += kKronrodWeights[j] *
              (std::abs(fv[j][0] - mean) + std::abs(fv[j][1] - mean));

  const double value = resk * half;
  resabs *= std::abs(half);
  resasc *= std::abs(half);

  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  const double eps50 = 50.0 * std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / eps50)
    err = std::max(err, eps50 * resabs);
  return {value, err};
}

}  // namespace detail

/// Adaptive Gauss-Kronrod 7/15 bisection on [a, b]. Deterministic for fixed
/// inputs: the worst panel (ties broken by position) is split first. Nodes
/// are interior, so integrable endpoint singularities are tolerated.
template <class F>
IntegralResult integrate_adaptive(F&& f, double a, double b,
                                  const QuadratureConfig& cfg) {
  cfg.validate();
  if (!(a < b)) {
    if (a == b) return {0.0, 0.0, 0};
    throw std::invalid_argument("integrate_adaptive: requires a < b");
  }

  struct Panel {
    double a, b, value, error;
  };
  struct WorstFirst {
    bool operator()(const Panel& x, const Panel& y) const {
      if (x.error != y.error) return x.error < y.error;
      return x.a > y.a;  // leftmost wins ties
    }
  };

  std::priority_queue<Panel, std::vector<Panel>, WorstFirst> panels;
  auto first = detail::gauss_kronrod_15(f, a, b);
  panels.push({a, b, first.value, first.error});
  double total_value = first.value;
  double total_error = first.error;
  int splits = 0;

  auto tolerance = [&] {
    return std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total_value));
  };

  while (total_error > tolerance() && splits < cfg.max_subdivisions) {
    Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      // Panel no longer representable; put it back and stop refining.
      panels.push(worst);
      break;
    }
    auto left = detail::gauss_kronrod_15(f, worst.a, mid);
    auto right = detail::gauss_kronrod_15(f, mid, worst.b);
    total_value += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    panels.push({worst.a, mid, left.value, left.error});
    panels.push({mid, worst.b, right.value, right.error});
    ++splits;
  }

  IntegralResult result{total_value, total_error, splits};
  if (total_error > tolerance())
    throw QuadratureError("integrate_adaptive: subdivision budget exhausted",
                          result);
  return result;
}

namespace detail {

/// Asymptotic tail of \int_R^inf cos(omega r) r^{-1-p} dr by repeated
/// integration by parts; valid once the phase omega*R is large.
inline IntegralResult oscillatory_tail_ibp(double p, double omega, double R,
                                           const QuadratureConfig& cfg) {
  double value = 0.0;
  double coef = 1.0;
  double q = p;
  const double sin_wr = std::sin(omega * R);
  const double cos_wr = std::cos(omega * R);
  double prev_bound = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < 60; ++iter) {
    value += coef * (-sin_wr * std::pow(R, -1.0 - q) / omega +
                     (1.0 + q) * cos_wr * std::pow(R, -2.0 - q) /
                         (omega * omega));
    coef *= -(1.0 + q) * (2.0 + q) / (omega * omega);
    q += 2.0;
    const double bound = std::abs(coef) * std::pow(R, -q) / q;
    const double tol = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(value));
    if (bound <= tol) return {value, bound, iter + 1};
    if (bound >= prev_bound)
      throw QuadratureError(
          "oscillatory tail: asymptotic series stopped converging",
          {value, bound, iter + 1});
    prev_bound = bound;
  }
  throw QuadratureError("oscillatory tail: iteration cap reached",
                        {value, prev_bound, 60});
}

}  // namespace detail

/// \int_R^inf cos(omega r) r^{-1-p} dr for p > 0, R >= 1, omega >= 0.
/// Slowly oscillating heads are bridged by quadrature up to the phase
/// threshold, then integration by parts bounds the remainder.
inline IntegralResult integrate_oscillatory_tail(double p, double omega,
                                                 double R,
                                                 const QuadratureConfig& cfg) {
  cfg.validate();
  if (!(p > 0.0)) throw std::invalid_argument("oscillatory tail: p must be > 0");
  if (!(R >= 1.0)) throw std::invalid_argument("oscillatory tail: R must be >= 1");
  if (omega < 0.0) throw std::invalid_argument("oscillatory tail: omega < 0");

  if (omega == 0.0)
    return {std::pow(R, -p) / p,
            std::numeric_limits<double>::epsilon() * std::pow(R, -p) / p, 0};

  if (omega * R >= cfg.tail_truncation_radius)
    return detail::oscillatory_tail_ibp(p, omega, R, cfg);

  const double bridge_end = cfg.tail_truncation_radius / omega;
  auto head = integrate_adaptive(
      [=](double r) { return std::cos(omega * r) * std::pow(r, -1.0 - p); }, R,
      bridge_end, cfg);
  auto tail = detail::oscillatory_tail_ibp(p, omega, bridge_end, cfg);
  return {head.value + tail.value, head.error_estimate + tail.error_estimate,
          head.subdivisions_used + tail.subdivisions_used};
}

/// t^2 - 2 + 2 cos(t). Direct evaluation loses every significant digit near
/// t = 0 (the value is Theta(t^4) while each summand is Theta(t^2)), so below
/// the switch radius the alternating series t^4/12 - t^6/360 + ... is used.
inline double cos_defect(double t, double series_switch_radius = 0.5) {
  const double at = std::abs(t);
  if (at >= series_switch_radius) return t * t - 2.0 + 2.0 * std::cos(t);
  const double t2 = t * t;
  double term = t2 * t2 / 12.0;  // k = 2 term of 2*sum (-1)^k t^{2k}/(2k)!
  double sum = term;
  for (int k = 2; k < 40; ++k) {
    term *= -t2 / ((2.0 * k + 1.0) * (2.0 * k + 2.0));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

/// sinh(t) - t, series-guarded for the same reason as cos_defect.
inline double sinh_minus_linear(double t) {
  if (std::abs(t) >= 0.5) return std::sinh(t) - t;
  const double t2 = t * t;
  double term = t * t2 / 6.0;
  double sum = term;
  for (int k = 1; k < 40; ++k) {
    term *= t2 / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace fracrate
