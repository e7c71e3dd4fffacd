#include "epflow/conjectures.hpp"

#include <algorithm>
#include <cmath>

#include "epflow/bell.hpp"

namespace epflow::conjectures {

namespace {

constexpr double kIdentityTolerance = 1e-9;
constexpr double kSignSlack = 1e-9;  // relative slack in sign tests, scaled by magnitude

double sign_for(int m) { return (m % 2 == 1) ? 1.0 : -1.0; }

double factorial(int n) {
  double f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Quadrature settings for the oracle samples: the spectral route must
// out-resolve the pipeline it checks, so node values are integrated in long
// double at near-machine tolerances.
QuadratureConfig oracle_config(const QuadratureConfig& cfg) {
  QuadratureConfig out = cfg;
  out.abs_tol = std::min(cfg.abs_tol, 1e-16);
  out.rel_tol = std::min(cfg.rel_tol, 1e-16);
  out.max_panels = std::max(cfg.max_panels, 16384);
  return out;
}

// RMS-style floor for coefficient noise pushed through m differentiation
// passes: unit noise in coefficient k contributes the l1 mass of its
// differentiated column; columns combine root-sum-square.
long double spectral_noise_floor(const tderiv::SampledCurve<long double>& curve, int m) {
  const std::size_t n = curve.coeffs.size();
  long double max_value = 0;
  for (long double v : curve.values) max_value = std::max(max_value, std::fabs(v));
  const long double eps = std::numeric_limits<long double>::epsilon() * 8;
  long double sumsq = 0;
  std::vector<long double> col(n, 0.0L);
  for (std::size_t k = 0; k < n; ++k) {
    std::fill(col.begin(), col.end(), 0.0L);
    col[k] = 1.0L;
    std::vector<long double> d(col);
    for (int pass = 0; pass < m; ++pass) {
      d = tderiv::differentiate_coefficients<long double>(std::span<const long double>(d),
                                                          curve.halfwidth());
    }
    long double l1 = 0;
    for (long double v : d) l1 += std::fabs(v);
    sumsq += l1 * l1;
  }
  return eps * max_value * std::sqrt(sumsq);
}

SpectralDerivative spectral_curve_derivative(const tderiv::SampledCurve<long double>& curve,
                                             int m, double t) {
  // differentiate the series with the noise plateau trimmed away; the
  // untrimmed curve keeps the raw samples and the tail diagnostics
  const auto trimmed = curve.trimmed_for_derivative(m);
  auto full = tderiv::spectral_derivative<long double>(trimmed, m, static_cast<long double>(t));

  // sensitivity to the cut: redo with the last few kept coefficients dropped
  tderiv::SampledCurve<long double> shorter = trimmed;
  const std::size_t drop = std::max<std::size_t>(2, trimmed.coeffs.size() / 10);
  const std::size_t keep =
      std::max<std::size_t>(trimmed.coeffs.size() - drop, static_cast<std::size_t>(2 * m + 2));
  long double trunc_gap = 0;
  if (keep < trimmed.coeffs.size()) {
    shorter.coeffs.resize(keep);
    shorter.degree = static_cast<int>(keep) - 1;
    auto partial = tderiv::spectral_derivative<long double>(shorter, m,
                                                            static_cast<long double>(t));
    trunc_gap = std::fabs(full.value - partial.value);
  }

  SpectralDerivative out;
  out.value = static_cast<double>(full.value);
  out.error_estimate = static_cast<double>(trunc_gap + spectral_noise_floor(trimmed, m));
  out.low_confidence = !curve.tail_trusted();
  return out;
}

}  // namespace

std::string method_name(Method m) {
  switch (m) {
    case Method::analytic: return "analytic";
    case Method::spectral: return "spectral";
    default: return "both";
  }
}

Method method_from_name(const std::string& name) {
  if (name == "analytic") return Method::analytic;
  if (name == "spectral") return Method::spectral;
  if (name == "both") return Method::both;
  throw invalid_input("unknown method '" + name + "'; expected analytic|spectral|both");
}

std::string chain_status_name(ChainStatus s) {
  switch (s) {
    case ChainStatus::satisfied: return "satisfied";
    case ChainStatus::vacuous: return "vacuous";
    default: return "failed";
  }
}

std::vector<double> log_spaced_grid(int count, double lo, double hi) {
  if (count < 1) throw invalid_input("grid count must be positive");
  if (!(lo > 0) || !(hi > lo)) throw invalid_input("grid bounds must satisfy 0 < lo < hi");
  std::vector<double> grid(static_cast<std::size_t>(count));
  if (count == 1) {
    grid[0] = lo;
    return grid;
  }
  const double ratio = std::log(hi / lo) / (count - 1);
  for (int i = 0; i < count; ++i) grid[static_cast<std::size_t>(i)] = lo * std::exp(ratio * i);
  grid.back() = hi;
  return grid;
}

std::vector<double> default_t_grid() { return log_spaced_grid(16, 0.05, 5.0); }

SpectralFlow spectral_flow(const MixtureSpec& spec, double t, int order,
                           const QuadratureConfig& cfg) {
  if (!(t > 0)) throw invalid_input("spectral_flow: t must be strictly positive");
  const QuadratureConfig ocfg = oracle_config(cfg);
  const long double a = static_cast<long double>(t) / 4;
  const long double b = 3 * static_cast<long double>(t);

  auto entropy_of = [&](long double tt) {
    FlowedMixture fm(spec, static_cast<double>(tt));
    return functionals::entropy<long double>(fm, ocfg).value;
  };

  SpectralFlow flow;
  flow.t = t;
  // high orders amplify the coefficient tail by k^{2m}; they need the
  // series resolved down to the sampling noise floor, not just to 1e-12
  const long double tail_target = order >= 4 ? 1e-15L : 1e-12L;
  int degree = std::max(32, 2 * order + 8);
  for (int attempt = 0; attempt < 2; ++attempt) {
    flow.entropy_curve = tderiv::chebyshev_fit<long double>(entropy_of, a, b, degree);
    flow.tail_ok = flow.entropy_curve.tail_trusted(tail_target);
    if (flow.tail_ok) break;
    degree *= 2;  // one retry at doubled resolution
  }
  flow.degree = flow.entropy_curve.degree;

  // N = e^{-2H} shares the nodes; rebuild the series from transformed values
  std::vector<long double> power_values(flow.entropy_curve.values.size());
  for (std::size_t j = 0; j < power_values.size(); ++j) {
    power_values[j] = std::exp(-2.0L * flow.entropy_curve.values[j]);
  }
  flow.power_curve = tderiv::chebyshev_from_values<long double>(
      flow.entropy_curve.a, flow.entropy_curve.b, std::move(power_values));
  return flow;
}

SpectralDerivative spectral_entropy_derivative(const SpectralFlow& flow, int m) {
  return spectral_curve_derivative(flow.entropy_curve, m, flow.t);
}

SpectralDerivative spectral_power_derivative(const SpectralFlow& flow, int m) {
  return spectral_curve_derivative(flow.power_curve, m, flow.t);
}

double power_derivative_scale(double y, std::span<const double> ydot_derivs, int m) {
  std::vector<double> abs_derivs(ydot_derivs.begin(),
                                 ydot_derivs.begin() + static_cast<std::ptrdiff_t>(m));
  for (double& v : abs_derivs) v = std::fabs(v);
  const auto b = bell::bell_complete_all<double>({abs_derivs.data(), abs_derivs.size()}, m);
  return std::exp(y) * b[static_cast<std::size_t>(m)];
}

double entropy_derivative_scale(const MixtureSpec& spec, double t, int m) {
  double acc = 0;
  for (const auto& c : spec.components()) acc += c.weight / std::pow(c.variance + t, m);
  return 0.5 * factorial(m - 1) * acc;
}

ChainRecord verify_proposition_chain(const ChainInputs& in) {
  const int order = static_cast<int>(in.ydot_derivs.size());
  if (order < 1) throw invalid_input("verify_proposition_chain: empty derivative list");

  ChainRecord rec;
  rec.t = in.t;

  const std::span<const double> derivs(in.ydot_derivs.data(), in.ydot_derivs.size());
  const std::vector<double> y_seq = bell::sign_flip<double>(derivs);
  const std::span<const double> y_span(y_seq.data(), y_seq.size());
  const auto bells = bell::bell_complete_all<double>(y_span, order);

  std::vector<double> abs_y(y_seq);
  for (double& v : abs_y) v = std::fabs(v);
  const auto bell_mass = bell::bell_complete_all<double>({abs_y.data(), abs_y.size()}, order);

  const std::vector<double> errs =
      in.ydot_deriv_errors.empty() ? std::vector<double>(y_seq.size(), 0.0)
                                   : in.ydot_deriv_errors;

  // (a) the beta = -1 identity, evaluated through both code paths
  rec.identity_rel_err = 0;
  const double n_value = std::exp(in.y);
  for (int m = 1; m <= order; ++m) {
    const double lhs = sign_for(m) * bell::faa_di_bruno_exp(in.y, derivs, m);
    const double rhs = -n_value * bells[static_cast<std::size_t>(m)];
    const double scale = n_value * bell_mass[static_cast<std::size_t>(m)] + std::fabs(lhs) +
                         std::numeric_limits<double>::min();
    rec.identity_rel_err = std::max(rec.identity_rel_err, std::fabs(lhs - rhs) / scale);
  }
  rec.identity_ok = rec.identity_rel_err <= kIdentityTolerance;

  // (b) premises B_m(Y) <= 0 within propagated error, i.e. EP numerically
  rec.premises_hold = true;
  for (int m = 1; m <= order; ++m) {
    double propagated = 0;
    for (int k = 1; k <= m; ++k) {
      propagated += scalar_from_bigint<double>(bell::binomial(m, k)) *
                    bell_mass[static_cast<std::size_t>(m - k)] *
                    errs[static_cast<std::size_t>(k) - 1];
    }
    const double tol = propagated + kSignSlack * bell_mass[static_cast<std::size_t>(m)] +
                       std::numeric_limits<double>::min();
    if (bells[static_cast<std::size_t>(m)] > tol) {
      rec.premises_hold = false;
      break;
    }
  }

  // (c) conclusions Y_m <= -(m-1)! (-Y_1)^m, the McK intermediate inequality
  rec.conclusions_hold = true;
  rec.min_conclusion_margin = std::numeric_limits<double>::infinity();
  const double ydot = -y_seq[0];
  double ydot_pow = 1;
  for (int m = 1; m <= order; ++m) {
    ydot_pow *= ydot;
    const double bound = -factorial(m - 1) * ydot_pow;
    const double margin = bound - y_seq[static_cast<std::size_t>(m) - 1];
    rec.min_conclusion_margin = std::min(rec.min_conclusion_margin, margin);
    const double tol = errs[static_cast<std::size_t>(m) - 1] +
                       factorial(m - 1) * m * std::fabs(ydot_pow / std::max(ydot, 1e-300)) *
                           errs[0] +
                       kSignSlack * std::fabs(bound) + std::numeric_limits<double>::min();
    if (margin < -tol) rec.conclusions_hold = false;
  }

  rec.cramer_rao_ok = ydot * in.sigma_t2 >= 1.0 - 1e-9;

  if (!rec.identity_ok) {
    rec.status = ChainStatus::failed;
  } else if (!rec.premises_hold) {
    rec.status = ChainStatus::vacuous;
  } else if (rec.conclusions_hold && rec.cramer_rao_ok) {
    rec.status = ChainStatus::satisfied;
  } else {
    rec.status = ChainStatus::failed;
  }
  return rec;
}

ConjectureReport evaluate_conjectures(const MixtureSpec& spec, std::span<const double> t_grid,
                                      int order, const QuadratureConfig& cfg, Method method) {
  if (order < 1 || order > kMaxOrder) {
    throw invalid_input("order must be in 1.." + std::to_string(kMaxOrder));
  }
  if (t_grid.empty()) throw invalid_input("t grid must be nonempty");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0)) throw invalid_input("t grid must be strictly positive");
    if (i > 0 && !(t_grid[i] > t_grid[i - 1])) {
      throw invalid_input("t grid must be strictly increasing");
    }
  }
  cfg.validate();

  ConjectureReport report;
  report.order = order;
  report.method = method;
  report.config = cfg;
  report.mixture = spec.components();
  report.sigma0_sq = spec.moments().variance;
  report.t_grid.assign(t_grid.begin(), t_grid.end());

  const bool run_analytic = method != Method::spectral;
  const bool run_spectral = method != Method::analytic;

  for (double t : t_grid) {
    PointRecord pt;
    pt.t = t;
    pt.sigma_t2 = report.sigma0_sq + t;
    FlowedMixture fm(spec, t);

    SpectralFlow sflow;
    bool have_spectral = false;

    try {
      const auto h = functionals::entropy<double>(fm, cfg);
      const auto fisher = functionals::fisher_information<double>(fm, cfg);
      pt.entropy_value = h.value;
      pt.entropy_error = h.error_estimate;
      pt.fisher_value = fisher.value;
      pt.fisher_error = fisher.error_estimate;
      pt.y = -2.0 * h.value;
      pt.y_dot = fisher.value;
      pt.entropy_power = std::exp(pt.y);
      pt.cramer_rao_product = pt.y_dot * pt.sigma_t2;

      if (run_analytic) {
        const auto derivs = functionals::entropy_time_derivatives<double>(fm, order, cfg);
        for (const auto& d : derivs) {
          pt.ydot_derivs.push_back(-2.0 * d.value);
          pt.ydot_deriv_errors.push_back(2.0 * d.error_estimate);
        }
        pt.de_bruijn_residual = derivs[0].value + fisher.value / 2.0;
        pt.de_bruijn_error = derivs[0].error_estimate + fisher.error_estimate / 2.0;
      }

      if (run_spectral) {
        try {
          sflow = spectral_flow(spec, t, order, cfg);
          have_spectral = true;
          pt.spectral_low_confidence = !sflow.tail_ok;
        } catch (const error& e) {
          // the analytic results survive; only the oracle column is lost
          pt.spectral_failed = true;
          pt.failure_message = e.what();
          report.any_cell_error = true;
          if (!run_analytic) throw;
        }
        if (!run_analytic && have_spectral) {
          for (int k = 0; k < order; ++k) {
            const auto d = spectral_entropy_derivative(sflow, k + 1);
            pt.ydot_derivs.push_back(-2.0 * d.value);
            pt.ydot_deriv_errors.push_back(2.0 * d.error_estimate);
          }
          pt.de_bruijn_residual = -pt.ydot_derivs[0] / 2.0 + pt.fisher_value / 2.0;
          pt.de_bruijn_error = pt.ydot_deriv_errors[0] / 2.0;
        }
      }
    } catch (const error& e) {
      pt.evaluation_failed = true;
      pt.failure_message = e.what();
      report.any_cell_error = true;
    }

    if (!pt.evaluation_failed) {
      const std::span<const double> derivs(pt.ydot_derivs.data(), pt.ydot_derivs.size());
      for (int m = 1; m <= order; ++m) {
        CellRecord cell;
        cell.t = t;
        cell.m = m;
        cell.sigma_t2 = pt.sigma_t2;
        cell.method = have_spectral ? (run_analytic ? "both" : "spectral") : "analytic";
        const double sign = sign_for(m);

        cell.gcm_value = sign * pt.ydot_derivs[static_cast<std::size_t>(m) - 1];
        cell.gcm_error = pt.ydot_deriv_errors[static_cast<std::size_t>(m) - 1];

        // analytic entropy-power derivative via the exponential chain rule,
        // with first-order error propagation through dB_m/dX_k = C(m,k) B_{m-k}
        const double ep_analytic = sign * bell::faa_di_bruno_exp(pt.y, derivs, m);
        std::vector<double> abs_derivs(derivs.begin(),
                                       derivs.begin() + static_cast<std::ptrdiff_t>(m));
        for (double& v : abs_derivs) v = std::fabs(v);
        const auto mass =
            bell::bell_complete_all<double>({abs_derivs.data(), abs_derivs.size()}, m);
        double propagated = 0;
        for (int k = 1; k <= m; ++k) {
          propagated += scalar_from_bigint<double>(bell::binomial(m, k)) *
                        mass[static_cast<std::size_t>(m - k)] *
                        pt.ydot_deriv_errors[static_cast<std::size_t>(k) - 1];
        }
        // first-order propagation: dB_m/dX_k = C(m,k) B_{m-k}, plus the e^y
        // factor error through y = -2H and a representation floor on the mass
        const double ep_err_analytic =
            pt.entropy_power * propagated +
            std::fabs(ep_analytic) * 2.0 * pt.entropy_error +
            pt.entropy_power * mass[static_cast<std::size_t>(m)] * 1e-14;

        cell.ep_value = ep_analytic;
        cell.ep_error = ep_err_analytic;
        cell.ep_value_spectral = std::numeric_limits<double>::quiet_NaN();
        cell.ep_spectral_error = std::numeric_limits<double>::quiet_NaN();
        if (have_spectral) {
          try {
            const auto sp = spectral_power_derivative(sflow, m);
            cell.ep_value_spectral = sign * sp.value;
            cell.ep_spectral_error = sp.error_estimate;
            if (!run_analytic) {
              cell.ep_value = cell.ep_value_spectral;
              cell.ep_error = sp.error_estimate;
            }
          } catch (const error& e) {
            cell.cell_error = true;
            report.any_cell_error = true;
            (void)e;
          }
        }

        cell.mck_bound = factorial(m - 1) / std::pow(cell.sigma_t2, m);
        cell.mck_slack = cell.gcm_value - cell.mck_bound;

        const double eps_rep = 4 * std::numeric_limits<double>::epsilon();
        cell.ep_ok = cell.ep_value >= -cell.ep_error;
        cell.gcm_ok = cell.gcm_value >= -cell.gcm_error;
        cell.mck_ok = cell.mck_slack >= -(cell.gcm_error + eps_rep * cell.mck_bound);
        cell.violation_candidate = !(cell.ep_ok && cell.gcm_ok && cell.mck_ok);
        if (cell.violation_candidate) report.any_violation_candidate = true;
        report.cells.push_back(std::move(cell));
      }

      ChainInputs chain_in;
      chain_in.t = t;
      chain_in.y = pt.y;
      chain_in.sigma_t2 = pt.sigma_t2;
      chain_in.ydot_derivs = pt.ydot_derivs;
      chain_in.ydot_deriv_errors = pt.ydot_deriv_errors;
      ChainRecord chain = verify_proposition_chain(chain_in);
      if (chain.status == ChainStatus::failed) report.any_hard_failure = true;
      report.chain.push_back(std::move(chain));
    } else {
      for (int m = 1; m <= order; ++m) {
        CellRecord cell;
        cell.t = t;
        cell.m = m;
        cell.sigma_t2 = pt.sigma_t2;
        cell.cell_error = true;
        cell.method = method_name(method);
        cell.ep_value = cell.gcm_value = cell.mck_slack =
            std::numeric_limits<double>::quiet_NaN();
        cell.ep_value_spectral = std::numeric_limits<double>::quiet_NaN();
        cell.mck_bound = factorial(m - 1) / std::pow(cell.sigma_t2, m);
        report.cells.push_back(std::move(cell));
      }
      ChainRecord chain;
      chain.t = t;
      chain.status = ChainStatus::vacuous;
      report.chain.push_back(chain);
    }
    report.points.push_back(std::move(pt));
  }
  return report;
}

}  // namespace epflow::conjectures
