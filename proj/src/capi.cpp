#include "epflow.h"

#include <cmath>
#include <cstring>
#include <memory>
#include <string>

#include "epflow/bell.hpp"
#include "epflow/conjectures.hpp"
#include "epflow/functionals.hpp"
#include "epflow/mixture.hpp"
#include "epflow/mixture_io.hpp"
#include "epflow/report_io.hpp"

// C facade over the C++ core: exceptions become status codes, objects become
// opaque handles, and the failure message lands in thread-local storage.

struct epf_mixture {
  epflow::MixtureSpec spec;
  std::string name;
  std::vector<std::string> warnings;

  explicit epf_mixture(epflow::MixtureSpec s) : spec(std::move(s)) {}
};

struct epf_report {
  epflow::conjectures::ConjectureReport report;
  mutable std::string json_cache;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

template <class F>
epf_status guarded(F&& body) {
  try {
    return body();
  } catch (const epflow::parse_error& e) {
    set_error(e.what());
    return EPF_ERR_PARSE;
  } catch (const epflow::accuracy_error& e) {
    set_error(e.what());
    return EPF_ERR_ACCURACY;
  } catch (const epflow::invalid_input& e) {
    set_error(e.what());
    return EPF_ERR_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    set_error(e.what());
    return EPF_ERR_INTERNAL;
  } catch (...) {
    set_error("unknown failure");
    return EPF_ERR_INTERNAL;
  }
}

epf_status require(bool ok, const char* what) {
  if (!ok) {
    set_error(std::string("invalid argument: ") + what);
    return EPF_ERR_INVALID_ARGUMENT;
  }
  return EPF_OK;
}

epflow::QuadratureConfig to_config(const epf_quad_options* options) {
  epflow::QuadratureConfig cfg;
  if (options != nullptr) {
    cfg.abs_tol = options->abs_tol;
    cfg.rel_tol = options->rel_tol;
    cfg.max_panels = options->max_panels;
    cfg.tail_sigma_multiplier = options->tail_sigma_multiplier;
  }
  return cfg;
}

epflow::conjectures::Method to_method(epf_method m) {
  switch (m) {
    case EPF_METHOD_ANALYTIC: return epflow::conjectures::Method::analytic;
    case EPF_METHOD_SPECTRAL: return epflow::conjectures::Method::spectral;
    default: return epflow::conjectures::Method::both;
  }
}

epf_method from_method_name(const std::string& name) {
  if (name == "analytic") return EPF_METHOD_ANALYTIC;
  if (name == "spectral") return EPF_METHOD_SPECTRAL;
  return EPF_METHOD_BOTH;
}

}  // namespace

extern "C" {

const char* epf_status_name(epf_status status) {
  switch (status) {
    case EPF_OK: return "ok";
    case EPF_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case EPF_ERR_PARSE: return "parse-error";
    case EPF_ERR_ACCURACY: return "accuracy-error";
    case EPF_ERR_IO: return "io-error";
    default: return "internal-error";
  }
}

const char* epf_last_error_message(void) { return g_last_error.c_str(); }

void epf_quad_options_default(epf_quad_options* options) {
  if (options == nullptr) return;
  const epflow::QuadratureConfig cfg;
  options->abs_tol = cfg.abs_tol;
  options->rel_tol = cfg.rel_tol;
  options->max_panels = cfg.max_panels;
  options->tail_sigma_multiplier = cfg.tail_sigma_multiplier;
}

epf_status epf_mixture_create(const double* weights, const double* means,
                              const double* variances, int n, epf_mixture** out) {
  if (auto s = require(out && weights && means && variances, "null pointer"); s != EPF_OK)
    return s;
  if (auto s = require(n > 0, "component count must be positive"); s != EPF_OK) return s;
  return guarded([&] {
    std::vector<epflow::MixtureComponent> comps(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      comps[static_cast<std::size_t>(i)] = {weights[i], means[i], variances[i]};
    }
    auto handle = std::make_unique<epf_mixture>(epflow::MixtureSpec(std::move(comps)));
    if (handle->spec.weight_sum_deviation() > epflow::kWeightSumExact) {
      handle->warnings.push_back("weights renormalized");
    }
    *out = handle.release();
    return EPF_OK;
  });
}

epf_status epf_mixture_load(const char* path, epf_mixture** out) {
  if (auto s = require(out && path, "null pointer"); s != EPF_OK) return s;
  return guarded([&] {
    auto loaded = epflow::io::load_mixture_spec(path);
    auto handle = std::make_unique<epf_mixture>(std::move(loaded.spec));
    handle->name = std::move(loaded.name);
    handle->warnings = std::move(loaded.warnings);
    *out = handle.release();
    return EPF_OK;
  });
}

void epf_mixture_free(epf_mixture* mixture) { delete mixture; }

epf_status epf_mixture_component_count(const epf_mixture* mixture, int* out) {
  if (auto s = require(mixture && out, "null pointer"); s != EPF_OK) return s;
  *out = static_cast<int>(mixture->spec.size());
  return EPF_OK;
}

epf_status epf_mixture_component(const epf_mixture* mixture, int index, double* weight,
                                 double* mean, double* variance) {
  if (auto s = require(mixture != nullptr, "null mixture"); s != EPF_OK) return s;
  if (auto s = require(index >= 0 && index < static_cast<int>(mixture->spec.size()),
                       "component index out of range");
      s != EPF_OK)
    return s;
  const auto& c = mixture->spec.components()[static_cast<std::size_t>(index)];
  if (weight) *weight = c.weight;
  if (mean) *mean = c.mean;
  if (variance) *variance = c.variance;
  return EPF_OK;
}

epf_status epf_mixture_moments(const epf_mixture* mixture, double* mean, double* variance) {
  if (auto s = require(mixture != nullptr, "null mixture"); s != EPF_OK) return s;
  const auto m = mixture->spec.moments();
  if (mean) *mean = m.mean;
  if (variance) *variance = m.variance;
  return EPF_OK;
}

epf_status epf_mixture_name(const epf_mixture* mixture, const char** out) {
  if (auto s = require(mixture && out, "null pointer"); s != EPF_OK) return s;
  *out = mixture->name.c_str();
  return EPF_OK;
}

epf_status epf_mixture_warning_count(const epf_mixture* mixture, int* out) {
  if (auto s = require(mixture && out, "null pointer"); s != EPF_OK) return s;
  *out = static_cast<int>(mixture->warnings.size());
  return EPF_OK;
}

epf_status epf_mixture_warning(const epf_mixture* mixture, int index, const char** out) {
  if (auto s = require(mixture && out, "null pointer"); s != EPF_OK) return s;
  if (auto s = require(index >= 0 && index < static_cast<int>(mixture->warnings.size()),
                       "warning index out of range");
      s != EPF_OK)
    return s;
  *out = mixture->warnings[static_cast<std::size_t>(index)].c_str();
  return EPF_OK;
}

epf_status epf_mixture_density(const epf_mixture* mixture, double t, double x, double* out) {
  if (auto s = require(mixture && out, "null pointer"); s != EPF_OK) return s;
  return guarded([&] {
    epflow::FlowedMixture fm(mixture->spec, t);
    *out = epflow::mixture::density<double>(fm, x);
    return EPF_OK;
  });
}

epf_status epf_flow_eval(const epf_mixture* mixture, double t, int order,
                         const epf_quad_options* options, double* entropy, double* fisher,
                         double* ydot_derivs, double* ydot_errors) {
  if (auto s = require(mixture != nullptr, "null mixture"); s != EPF_OK) return s;
  if (auto s = require(order >= 1 && order <= epflow::kMaxDerivativeOrder, "order out of range");
      s != EPF_OK)
    return s;
  return guarded([&] {
    const auto cfg = to_config(options);
    epflow::FlowedMixture fm(mixture->spec, t);
    const auto f = epflow::functionals::flow_functionals(fm, order, cfg);
    if (entropy) *entropy = f.entropy_value;
    if (fisher) *fisher = f.fisher_value;
    for (int k = 0; k < order; ++k) {
      if (ydot_derivs) ydot_derivs[k] = f.ydot_derivs[static_cast<std::size_t>(k)].value;
      if (ydot_errors) ydot_errors[k] = f.ydot_derivs[static_cast<std::size_t>(k)].error_estimate;
    }
    return EPF_OK;
  });
}

epf_status epf_bell_complete(const double* x, int n, double* out) {
  if (auto s = require(out && (x || n == 0), "null pointer"); s != EPF_OK) return s;
  if (auto s = require(n >= 0, "negative length"); s != EPF_OK) return s;
  return guarded([&] {
    const auto b = epflow::bell::bell_complete_all<double>(
        std::span<const double>(x, static_cast<std::size_t>(n)), n);
    for (int i = 0; i <= n; ++i) out[i] = b[static_cast<std::size_t>(i)];
    return EPF_OK;
  });
}

epf_status epf_evaluate(const epf_mixture* mixture, const double* t_grid, int n_t, int order,
                        const epf_quad_options* options, epf_method method, epf_report** out) {
  if (auto s = require(mixture && t_grid && out, "null pointer"); s != EPF_OK) return s;
  if (auto s = require(n_t > 0, "empty grid"); s != EPF_OK) return s;
  return guarded([&] {
    const auto cfg = to_config(options);
    auto handle = std::make_unique<epf_report>();
    handle->report = epflow::conjectures::evaluate_conjectures(
        mixture->spec, std::span<const double>(t_grid, static_cast<std::size_t>(n_t)), order,
        cfg, to_method(method));
    *out = handle.release();
    return EPF_OK;
  });
}

void epf_report_free(epf_report* report) { delete report; }

epf_status epf_report_cell_count(const epf_report* report, int* out) {
  if (auto s = require(report && out, "null pointer"); s != EPF_OK) return s;
  *out = static_cast<int>(report->report.cells.size());
  return EPF_OK;
}

epf_status epf_report_cell(const epf_report* report, int index, epf_cell* out) {
  if (auto s = require(report && out, "null pointer"); s != EPF_OK) return s;
  if (auto s = require(index >= 0 && index < static_cast<int>(report->report.cells.size()),
                       "cell index out of range");
      s != EPF_OK)
    return s;
  const auto& c = report->report.cells[static_cast<std::size_t>(index)];
  out->t = c.t;
  out->m = c.m;
  out->sigma_t2 = c.sigma_t2;
  out->ep_value = c.ep_value;
  out->ep_value_spectral = c.ep_value_spectral;
  out->ep_error = c.ep_error;
  out->ep_spectral_error = c.ep_spectral_error;
  out->gcm_value = c.gcm_value;
  out->gcm_error = c.gcm_error;
  out->mck_bound = c.mck_bound;
  out->mck_slack = c.mck_slack;
  out->ep_ok = c.ep_ok ? 1 : 0;
  out->gcm_ok = c.gcm_ok ? 1 : 0;
  out->mck_ok = c.mck_ok ? 1 : 0;
  out->violation_candidate = c.violation_candidate ? 1 : 0;
  out->cell_error = c.cell_error ? 1 : 0;
  out->method = from_method_name(c.method);
  return EPF_OK;
}

epf_status epf_report_point_count(const epf_report* report, int* out) {
  if (auto s = require(report && out, "null pointer"); s != EPF_OK) return s;
  *out = static_cast<int>(report->report.points.size());
  return EPF_OK;
}

epf_status epf_report_point(const epf_report* report, int index, epf_point* out) {
  if (auto s = require(report && out, "null pointer"); s != EPF_OK) return s;
  if (auto s = require(index >= 0 && index < static_cast<int>(report->report.points.size()),
                       "point index out of range");
      s != EPF_OK)
    return s;
  const auto& p = report->report.points[static_cast<std::size_t>(index)];
  const auto& ch = report->report.chain[static_cast<std::size_t>(index)];
  out->t = p.t;
  out->entropy = p.entropy_value;
  out->fisher = p.fisher_value;
  out->y = p.y;
  out->y_dot = p.y_dot;
  out->entropy_power = p.entropy_power;
  out->sigma_t2 = p.sigma_t2;
  out->cramer_rao_product = p.cramer_rao_product;
  out->de_bruijn_residual = p.de_bruijn_residual;
  out->evaluation_failed = p.evaluation_failed ? 1 : 0;
  using epflow::conjectures::ChainStatus;
  out->chain_satisfied = ch.status == ChainStatus::satisfied ? 1
                         : ch.status == ChainStatus::vacuous ? 0
                                                             : -1;
  out->chain_identity_rel_err = ch.identity_rel_err;
  return EPF_OK;
}

epf_status epf_report_has_violation_candidate(const epf_report* report, int* out) {
  if (auto s = require(report && out, "null pointer"); s != EPF_OK) return s;
  *out = report->report.any_violation_candidate ? 1 : 0;
  return EPF_OK;
}

epf_status epf_report_has_hard_failure(const epf_report* report, int* out) {
  if (auto s = require(report && out, "null pointer"); s != EPF_OK) return s;
  *out = report->report.any_hard_failure ? 1 : 0;
  return EPF_OK;
}

epf_status epf_report_has_cell_error(const epf_report* report, int* out) {
  if (auto s = require(report && out, "null pointer"); s != EPF_OK) return s;
  *out = report->report.any_cell_error ? 1 : 0;
  return EPF_OK;
}

epf_status epf_report_write_json(const epf_report* report, const char* path) {
  if (auto s = require(report && path, "null pointer"); s != EPF_OK) return s;
  return guarded([&] {
    epflow::io::write_report_json(report->report, path);
    return EPF_OK;
  });
}

epf_status epf_report_write_table_csv(const epf_report* report, const char* path) {
  if (auto s = require(report && path, "null pointer"); s != EPF_OK) return s;
  return guarded([&] {
    epflow::io::write_table_csv(report->report, path);
    return EPF_OK;
  });
}

epf_status epf_report_write_curves_csv(const epf_report* report, const char* path) {
  if (auto s = require(report && path, "null pointer"); s != EPF_OK) return s;
  return guarded([&] {
    epflow::io::write_curves_csv(report->report, path);
    return EPF_OK;
  });
}

epf_status epf_report_json(const epf_report* report, const char** out) {
  if (auto s = require(report && out, "null pointer"); s != EPF_OK) return s;
  return guarded([&] {
    if (report->json_cache.empty()) {
      report->json_cache = epflow::io::render_report_json(report->report);
    }
    *out = report->json_cache.c_str();
    return EPF_OK;
  });
}

}  // extern "C"
