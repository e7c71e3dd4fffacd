#pragma once

#include <span>
#include <string>
#include <vector>

#include "epflow/chebyshev.hpp"
#include "epflow/functionals.hpp"
#include "epflow/mixture.hpp"
#include "epflow/quadrature.hpp"

// Evaluation of the three sign conjectures along the flow, with margins and
// honest tolerances, plus the implication machinery connecting them:
//   EP:  (-1)^{m-1} d^m N/dt^m >= 0
//   McK: (-1)^{m-1} ydot^{(m-1)} >= (m-1)!/sigma_t^{2m}
//   GCM: (-1)^{m-1} ydot^{(m-1)} >= 0
// The m-th entropy-power derivative is computed two ways: analytically as
// e^y B_m(ydot, ydot', ...) and spectrally by differentiating a Chebyshev
// fit of sampled N(t); the two must agree within the combined estimate.
//
// Sign tests use value >= -error_estimate, so noise at an equality case (the
// Gaussian saturates McK) cannot produce spurious violations. Cells beyond
// that slack are flagged as violation candidates for re-runs at tighter
// tolerance; this tool never claims a refutation.

namespace epflow::conjectures {

inline constexpr int kDefaultOrder = 4;
inline constexpr int kMaxOrder = kMaxDerivativeOrder;  // 6, behind an explicit opt-in

enum class Method { analytic, spectral, both };

std::string method_name(Method m);
Method method_from_name(const std::string& name);

struct CellRecord {
  double t = 0;
  int m = 0;
  double sigma_t2 = 0;
  double ep_value = 0;           // preferred route, analytic when available
  double ep_value_spectral = 0;  // NaN when the spectral route did not run
  double ep_error = 0;
  double ep_spectral_error = 0;  // NaN when the spectral route did not run
  double gcm_value = 0;
  double gcm_error = 0;
  double mck_bound = 0;
  double mck_slack = 0;
  bool ep_ok = false;
  bool gcm_ok = false;
  bool mck_ok = false;
  bool violation_candidate = false;
  bool cell_error = false;
  std::string method;  // "analytic" | "spectral" | "both"
};

enum class ChainStatus { satisfied, vacuous, failed };

std::string chain_status_name(ChainStatus s);

// Per-t verification of the proof chain: the beta = -1 identity
// (-1)^{m-1} d^m N/dt^m = -e^y B_m(Y), the inequality chain on
// Y_k = (-1)^k ydot^{(k-1)}, and the Cramer-Rao endpoint.
struct ChainRecord {
  double t = 0;
  double identity_rel_err = 0;  // worst m, relative to the monomial mass
  bool identity_ok = false;
  bool premises_hold = false;     // B_m(Y) <= tol for all m <= M  (EP, numerically)
  bool conclusions_hold = false;  // (-1)^{m-1} ydot^{(m-1)} >= (m-1)! ydot^m for all m
  bool cramer_rao_ok = false;     // ydot >= 1/sigma_t^2 - slack
  ChainStatus status = ChainStatus::vacuous;
  double min_conclusion_margin = 0;
};

struct PointRecord {
  double t = 0;
  double entropy_value = 0;  // H
  double entropy_error = 0;
  double fisher_value = 0;   // I
  double fisher_error = 0;
  double y = 0;
  double y_dot = 0;  // I; the derivative list below carries -2 dH/dt instead
  double entropy_power = 0;  // N = e^y
  double sigma_t2 = 0;
  double cramer_rao_product = 0;  // y_dot * sigma_t2
  double de_bruijn_residual = 0;
  double de_bruijn_error = 0;
  std::vector<double> ydot_derivs;        // ydot^{(k)}, k = 0..M-1 (analytic route)
  std::vector<double> ydot_deriv_errors;
  bool evaluation_failed = false;
  bool spectral_failed = false;
  bool spectral_low_confidence = false;
  std::string failure_message;
};

struct ConjectureReport {
  int order = 0;
  Method method = Method::both;
  QuadratureConfig config;
  double sigma0_sq = 0;
  std::vector<MixtureComponent> mixture;
  std::vector<double> t_grid;
  std::vector<PointRecord> points;
  std::vector<CellRecord> cells;  // ordered by (t, m)
  std::vector<ChainRecord> chain;
  bool any_violation_candidate = false;
  bool any_hard_failure = false;
  bool any_cell_error = false;
};

// Default grid: 16 log-spaced times in [0.05, 5].
std::vector<double> default_t_grid();
std::vector<double> log_spaced_grid(int count, double lo, double hi);

ConjectureReport evaluate_conjectures(const MixtureSpec& spec, std::span<const double> t_grid,
                                      int order, const QuadratureConfig& cfg,
                                      Method method = Method::both);

// The chain check on already computed data; exposed for tests and synthetic
// inputs (e.g. sequences violating the premise must come back vacuous).
struct ChainInputs {
  double t = 0;
  double y = 0;
  double sigma_t2 = 0;
  std::vector<double> ydot_derivs;
  std::vector<double> ydot_deriv_errors;
};

ChainRecord verify_proposition_chain(const ChainInputs& in);

// Chebyshev fits of H(t) and N(t) sampled in extended precision on the
// window [t/4, 3t]; the spectral (oracle) route for the t-derivatives.
struct SpectralFlow {
  tderiv::SampledCurve<long double> entropy_curve;
  tderiv::SampledCurve<long double> power_curve;
  double t = 0;
  int degree = 0;
  bool tail_ok = false;
};

SpectralFlow spectral_flow(const MixtureSpec& spec, double t, int order,
                           const QuadratureConfig& cfg);

struct SpectralDerivative {
  double value = 0;
  double error_estimate = 0;
  bool low_confidence = false;
};

SpectralDerivative spectral_entropy_derivative(const SpectralFlow& flow, int m);
SpectralDerivative spectral_power_derivative(const SpectralFlow& flow, int m);

// Natural magnitude scales for agreement metrics: a difference of two routes
// to a quantity that cancels to ~0 (the Gaussian) is only meaningful
// relative to the mass that cancels.
//   N-scale: e^y B_m(|Y_1|, ..., |Y_m|)  (Bell monomial mass)
//   H-scale: (m-1)!/2 sum_i w_i / (v_i + t)^m  (componentwise Gaussian magnitude)
double power_derivative_scale(double y, std::span<const double> ydot_derivs, int m);
double entropy_derivative_scale(const MixtureSpec& spec, double t, int m);

}  // namespace epflow::conjectures
