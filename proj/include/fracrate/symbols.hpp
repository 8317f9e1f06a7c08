#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fracrate/quadrature.hpp"

namespace fracrate {

/// Dimension-dependent constants; omega_n is the unit-ball volume.
struct Constants {
  int dimension = 1;
  double omega_n = 2.0;
  double sphere_measure = 2.0;   // N * omega_n
  double lambda_default = 16.0;  // 8 * N * omega_n

  static Constants for_dimension(int n);
  void validate() const;
};

/// Angular moment K_N(alpha) = \int_{S^{N-1}} |sigma_1|^alpha dH^{N-1}.
/// Exact for N = 1 and N = 3, polar-angle quadrature for N = 2.
double angular_cos_moment(int dimension, double alpha,
                          const QuadratureConfig& cfg);

/// W_N(r) = \int_{S^{N-1}} g(r sigma_1) dH^{N-1} with g(t) = t^2 - 2 + 2cos t.
/// Exact two-point sum for N = 1, closed form (series-guarded) for N = 3,
/// composite panel quadrature over the polar angle for N = 2.
double cos_defect_angular(int dimension, double r, const QuadratureConfig& cfg);

/// Normalization constant C(N,s) of the fractional Laplacian,
/// (\int_{R^N} (1 - cos h_1)/|h|^{N+2s} dh)^{-1}, by radial-angular reduction.
double frac_constant(int dimension, double s, const QuadratureConfig& cfg);

/// Scaling factor sigma_{N,s} = 4(1-s) / (omega_N C(N,s)); tends to 1 as s->1.
double sigma_factor(int dimension, double s, const QuadratureConfig& cfg);

/// Multiplier of the scaled Gagliardo form:
/// phi_s(|xi|) = \int (2 - 2cos(xi.h))/|h|^{N+2s} dh = 2|xi|^{2s}/C(N,s).
double phi_s(int dimension, double s, double xi_mag,
             const QuadratureConfig& cfg);

/// Singular-ball multiplier
/// m(xi) = \int_{B(0,1)} (|xi.h|^2 - 2 + 2cos(xi.h))/|h|^{N+2} dh,
/// evaluated in rescaled form |xi|^2 \int_0^{|xi|} W_N(r)/r^3 dr.
double m_multiplier(int dimension, double xi_mag, const QuadratureConfig& cfg);

/// Ball multiplier of the J_s energy (same kernel as m, exponent N+2s):
/// \int_{B(0,1)} (|xi.h|^2 - 2 + 2cos(xi.h))/|h|^{N+2s} dh.
double j_multiplier(int dimension, double s, double xi_mag,
                    const QuadratureConfig& cfg);

/// cos_tail = \int_{B(0,1)^c} cos(xi.h)/|h|^{N+2s} dh, s in (0,1].
double cos_tail(int dimension, double s, double xi_mag,
                const QuadratureConfig& cfg);

/// tail_T = \int_{B(0,1)^c} (2 - 2cos(xi.h))/|h|^{N+2s} dh
///        = N omega_N / s - 2 cos_tail, exact by construction.
double tail_T(int dimension, double s, double xi_mag,
              const QuadratureConfig& cfg);

/// Rate multiplier M_s(xi) = [(omega_N/2)|xi|^2 - (1-s) phi_s(|xi|)]/(1-s),
/// evaluated in split form to avoid catastrophic cancellation as s -> 1.
/// Rejects s within 1e-6 of 1.
double rate_symbol(int dimension, double s, double xi_mag,
                   const QuadratureConfig& cfg);

/// Limit multiplier M_inf(xi) = m(xi) - tail_T(N, 1, xi).
double limit_symbol(int dimension, double xi_mag, const QuadratureConfig& cfg);

/// Fourier symbol of the limit first-variation operator:
/// -2 N omega_N + 4 cos_tail(N, 1, xi) + 2 m(xi)  (= 2 M_inf(xi)).
double L_symbol(int dimension, double xi_mag, const QuadratureConfig& cfg);

constexpr double kRateSymbolMaxS = 1.0 - 1e-6;

/// One explicit inequality on m at a single wavenumber.
struct MBoundCheck {
  std::string name;
  bool is_upper = false;
  double bound = 0.0;
  double margin = 0.0;  // slack in the direction of validity; negative = violated
  bool pass = false;
};

struct MBoundsRow {
  double xi = 0.0;
  double m = 0.0;
  std::vector<MBoundCheck> checks;
};

struct MBoundsReport {
  int dimension = 1;
  double tolerance = 0.0;
  std::vector<MBoundsRow> rows;
  bool all_pass = true;
  double worst_margin = 0.0;
};

/// Verifies the explicit quartic/logarithmic bounds on m at each wavenumber.
/// An inequality counts as passing when its margin >= -tolerance.
MBoundsReport check_m_bounds(int dimension, const std::vector<double>& xi_grid,
                             const QuadratureConfig& cfg,
                             double tolerance = 1e-8);

struct SymbolEntry {
  double xi = 0.0;
  double phi_s = 0.0;
  double m = 0.0;
  double tail_t = 0.0;
  double cos_tail = 0.0;
  double rate_m = 0.0;
  double limit_m = 0.0;
  double l_symbol = 0.0;
};

/// Precomputed multiplier values over a wavenumber set. For the limit table
/// (is_limit = true) the phi_s column holds the G_1 multiplier
/// (omega_N/2)|xi|^2 and rate_m coincides with limit_m.
struct SymbolTable {
  Constants constants;
  double s = 1.0;
  bool is_limit = false;
  QuadratureConfig cfg;
  std::vector<SymbolEntry> entries;  // ascending xi
};

SymbolTable build_symbol_table(const Constants& constants, double s,
                               bool is_limit, std::vector<double> xi_values,
                               const QuadratureConfig& cfg);

/// Logarithmic probe set {1e-2, ..., 1e2}, five points per decade.
std::vector<double> default_probe_wavenumbers();

/// CSV with header xi,phi_s,m,tail_T,cos_tail,rate_M,limit_M,L_symbol,
/// 12 significant digits, locale-independent.
void write_symbol_csv(const SymbolTable& table, std::ostream& out);

/// Formats a double with 12 significant digits ('.' decimal separator).
std::string format_sig12(double v);

}  // namespace fracrate
