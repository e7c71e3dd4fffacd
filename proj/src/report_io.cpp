#include "epflow/report_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace epflow::io {

namespace {

// locale-independent formatting; byte determinism must not depend on the
// host process's locale settings
std::string fmt(double v, int digits) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, digits);
  return std::string(buf, res.ptr);
}

// JSON has no NaN; absent spectral values serialize as null.
std::string json_number(double v) {
  if (!std::isfinite(v)) return "null";
  return fmt(v, 17);
}

std::string json_string(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  out += '"';
  return out;
}

const char* json_bool(bool b) { return b ? "true" : "false"; }

void append_number_array(std::ostringstream& os, const std::vector<double>& v) {
  os << '[';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ',';
    os << json_number(v[i]);
  }
  os << ']';
}

}  // namespace

std::string render_report_json(const conjectures::ConjectureReport& report) {
  std::ostringstream os;
  os << "{\n";
  os << "  \"order\": " << report.order << ",\n";
  os << "  \"method\": " << json_string(conjectures::method_name(report.method)) << ",\n";
  os << "  \"config\": {"
     << "\"abs_tol\": " << json_number(report.config.abs_tol)
     << ", \"rel_tol\": " << json_number(report.config.rel_tol)
     << ", \"max_panels\": " << report.config.max_panels
     << ", \"tail_sigma_multiplier\": " << json_number(report.config.tail_sigma_multiplier)
     << "},\n";
  os << "  \"mixture\": [";
  for (std::size_t i = 0; i < report.mixture.size(); ++i) {
    const auto& c = report.mixture[i];
    if (i) os << ", ";
    os << "{\"weight\": " << json_number(c.weight) << ", \"mean\": " << json_number(c.mean)
       << ", \"variance\": " << json_number(c.variance) << "}";
  }
  os << "],\n";
  os << "  \"sigma0_sq\": " << json_number(report.sigma0_sq) << ",\n";
  os << "  \"t_grid\": ";
  append_number_array(os, report.t_grid);
  os << ",\n";

  os << "  \"points\": [\n";
  for (std::size_t i = 0; i < report.points.size(); ++i) {
    const auto& p = report.points[i];
    os << "    {\"t\": " << json_number(p.t) << ", \"entropy\": " << json_number(p.entropy_value)
       << ", \"entropy_error\": " << json_number(p.entropy_error)
       << ", \"fisher\": " << json_number(p.fisher_value)
       << ", \"fisher_error\": " << json_number(p.fisher_error) << ", \"y\": " << json_number(p.y)
       << ", \"y_dot\": " << json_number(p.y_dot)
       << ", \"entropy_power\": " << json_number(p.entropy_power)
       << ", \"sigma_t2\": " << json_number(p.sigma_t2)
       << ", \"cramer_rao_product\": " << json_number(p.cramer_rao_product)
       << ", \"de_bruijn_residual\": " << json_number(p.de_bruijn_residual)
       << ", \"de_bruijn_error\": " << json_number(p.de_bruijn_error) << ", \"ydot_derivs\": ";
    append_number_array(os, p.ydot_derivs);
    os << ", \"ydot_deriv_errors\": ";
    append_number_array(os, p.ydot_deriv_errors);
    os << ", \"evaluation_failed\": " << json_bool(p.evaluation_failed)
       << ", \"spectral_failed\": " << json_bool(p.spectral_failed)
       << ", \"spectral_low_confidence\": " << json_bool(p.spectral_low_confidence)
       << ", \"failure_message\": " << json_string(p.failure_message) << "}";
    os << (i + 1 < report.points.size() ? ",\n" : "\n");
  }
  os << "  ],\n";

  os << "  \"cells\": [\n";
  for (std::size_t i = 0; i < report.cells.size(); ++i) {
    const auto& c = report.cells[i];
    os << "    {\"t\": " << json_number(c.t) << ", \"m\": " << c.m
       << ", \"sigma_t2\": " << json_number(c.sigma_t2)
       << ", \"ep_value\": " << json_number(c.ep_value)
       << ", \"ep_value_spectral\": " << json_number(c.ep_value_spectral)
       << ", \"ep_error\": " << json_number(c.ep_error)
       << ", \"ep_spectral_error\": " << json_number(c.ep_spectral_error)
       << ", \"gcm_value\": " << json_number(c.gcm_value)
       << ", \"gcm_error\": " << json_number(c.gcm_error)
       << ", \"mck_bound\": " << json_number(c.mck_bound)
       << ", \"mck_slack\": " << json_number(c.mck_slack) << ", \"ep_ok\": " << json_bool(c.ep_ok)
       << ", \"gcm_ok\": " << json_bool(c.gcm_ok) << ", \"mck_ok\": " << json_bool(c.mck_ok)
       << ", \"violation_candidate\": " << json_bool(c.violation_candidate)
       << ", \"cell_error\": " << json_bool(c.cell_error)
       << ", \"method\": " << json_string(c.method) << "}";
    os << (i + 1 < report.cells.size() ? ",\n" : "\n");
  }
  os << "  ],\n";

  os << "  \"chain\": [\n";
  for (std::size_t i = 0; i < report.chain.size(); ++i) {
    const auto& ch = report.chain[i];
    os << "    {\"t\": " << json_number(ch.t)
       << ", \"identity_rel_err\": " << json_number(ch.identity_rel_err)
       << ", \"identity_ok\": " << json_bool(ch.identity_ok)
       << ", \"premises_hold\": " << json_bool(ch.premises_hold)
       << ", \"conclusions_hold\": " << json_bool(ch.conclusions_hold)
       << ", \"cramer_rao_ok\": " << json_bool(ch.cramer_rao_ok)
       << ", \"status\": " << json_string(conjectures::chain_status_name(ch.status))
       << ", \"min_conclusion_margin\": " << json_number(ch.min_conclusion_margin) << "}";
    os << (i + 1 < report.chain.size() ? ",\n" : "\n");
  }
  os << "  ],\n";

  os << "  \"summary\": {\"any_violation_candidate\": "
     << json_bool(report.any_violation_candidate)
     << ", \"any_hard_failure\": " << json_bool(report.any_hard_failure)
     << ", \"any_cell_error\": " << json_bool(report.any_cell_error)
     << ", \"coverage\": \"grid-only\""
     << ", \"note\": "
     << json_string(report.any_violation_candidate
                        ? "violation candidates present: re-run at tighter tolerances; "
                          "this tool never claims a refutation"
                        : "sign checks cover the listed grid times only")
     << "}\n";
  os << "}\n";
  return os.str();
}

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw parse_error("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw parse_error("write failed for '" + path + "'");
}

}  // namespace

void write_report_json(const conjectures::ConjectureReport& report, const std::string& path) {
  write_file(path, render_report_json(report));
}

std::string render_table_csv(const conjectures::ConjectureReport& report) {
  std::ostringstream os;
  os << "t,m,sigma_t2,ep_value,ep_value_spectral,ep_error,ep_spectral_error,gcm_value,"
        "gcm_error,mck_bound,mck_slack,ep_ok,gcm_ok,mck_ok,violation_candidate,cell_error,"
        "method\n";
  for (const auto& c : report.cells) {
    os << fmt(c.t, 12) << ',' << c.m << ',' << fmt(c.sigma_t2, 12) << ',' << fmt(c.ep_value, 12)
       << ',' << fmt(c.ep_value_spectral, 12) << ',' << fmt(c.ep_error, 12) << ','
       << fmt(c.gcm_value, 12) << ',' << fmt(c.gcm_error, 12) << ',' << fmt(c.mck_bound, 12)
       << ',' << fmt(c.mck_slack, 12) << ',' << (c.ep_ok ? 1 : 0) << ',' << (c.gcm_ok ? 1 : 0)
       << ',' << (c.mck_ok ? 1 : 0) << ',' << (c.violation_candidate ? 1 : 0) << ','
       << (c.cell_error ? 1 : 0) << ',' << c.method << '\n';
  }
  return os.str();
}

void write_table_csv(const conjectures::ConjectureReport& report, const std::string& path) {
  write_file(path, render_table_csv(report));
}

std::string render_curves_csv(const conjectures::ConjectureReport& report) {
  std::ostringstream os;
  os << "t,H,I,y,ydot,N\n";
  for (const auto& p : report.points) {
    os << fmt(p.t, 12) << ',' << fmt(p.entropy_value, 12) << ',' << fmt(p.fisher_value, 12)
       << ',' << fmt(p.y, 12) << ',' << fmt(p.y_dot, 12) << ',' << fmt(p.entropy_power, 12)
       << '\n';
  }
  return os.str();
}

void write_curves_csv(const conjectures::ConjectureReport& report, const std::string& path) {
  write_file(path, render_curves_csv(report));
}

namespace {

double number_or_nan(const nlohmann::json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return j.get<double>();
}

}  // namespace

conjectures::ConjectureReport load_report_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error("cannot open report '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw parse_error("report '" + path + "': " + e.what());
  }

  conjectures::ConjectureReport r;
  try {
    r.order = j.at("order").get<int>();
    r.method = conjectures::method_from_name(j.at("method").get<std::string>());
    r.config.abs_tol = j.at("config").at("abs_tol").get<double>();
    r.config.rel_tol = j.at("config").at("rel_tol").get<double>();
    r.config.max_panels = j.at("config").at("max_panels").get<int>();
    r.config.tail_sigma_multiplier = j.at("config").at("tail_sigma_multiplier").get<double>();
    for (const auto& c : j.at("mixture")) {
      r.mixture.push_back({c.at("weight").get<double>(), c.at("mean").get<double>(),
                           c.at("variance").get<double>()});
    }
    r.sigma0_sq = j.at("sigma0_sq").get<double>();
    r.t_grid = j.at("t_grid").get<std::vector<double>>();
    for (const auto& p : j.at("points")) {
      conjectures::PointRecord pt;
      pt.t = p.at("t").get<double>();
      pt.entropy_value = number_or_nan(p.at("entropy"));
      pt.entropy_error = number_or_nan(p.at("entropy_error"));
      pt.fisher_value = number_or_nan(p.at("fisher"));
      pt.fisher_error = number_or_nan(p.at("fisher_error"));
      pt.y = number_or_nan(p.at("y"));
      pt.y_dot = number_or_nan(p.at("y_dot"));
      pt.entropy_power = number_or_nan(p.at("entropy_power"));
      pt.sigma_t2 = p.at("sigma_t2").get<double>();
      pt.cramer_rao_product = number_or_nan(p.at("cramer_rao_product"));
      pt.de_bruijn_residual = number_or_nan(p.at("de_bruijn_residual"));
      pt.de_bruijn_error = number_or_nan(p.at("de_bruijn_error"));
      pt.ydot_derivs = p.at("ydot_derivs").get<std::vector<double>>();
      pt.ydot_deriv_errors = p.at("ydot_deriv_errors").get<std::vector<double>>();
      pt.evaluation_failed = p.at("evaluation_failed").get<bool>();
      pt.spectral_failed = p.at("spectral_failed").get<bool>();
      pt.spectral_low_confidence = p.at("spectral_low_confidence").get<bool>();
      pt.failure_message = p.at("failure_message").get<std::string>();
      r.points.push_back(std::move(pt));
    }
    for (const auto& c : j.at("cells")) {
      conjectures::CellRecord cell;
      cell.t = c.at("t").get<double>();
      cell.m = c.at("m").get<int>();
      cell.sigma_t2 = c.at("sigma_t2").get<double>();
      cell.ep_value = number_or_nan(c.at("ep_value"));
      cell.ep_value_spectral = number_or_nan(c.at("ep_value_spectral"));
      cell.ep_error = number_or_nan(c.at("ep_error"));
      cell.ep_spectral_error = number_or_nan(c.at("ep_spectral_error"));
      cell.gcm_value = number_or_nan(c.at("gcm_value"));
      cell.gcm_error = number_or_nan(c.at("gcm_error"));
      cell.mck_bound = number_or_nan(c.at("mck_bound"));
      cell.mck_slack = number_or_nan(c.at("mck_slack"));
      cell.ep_ok = c.at("ep_ok").get<bool>();
      cell.gcm_ok = c.at("gcm_ok").get<bool>();
      cell.mck_ok = c.at("mck_ok").get<bool>();
      cell.violation_candidate = c.at("violation_candidate").get<bool>();
      cell.cell_error = c.at("cell_error").get<bool>();
      cell.method = c.at("method").get<std::string>();
      r.cells.push_back(std::move(cell));
    }
    for (const auto& c : j.at("chain")) {
      conjectures::ChainRecord ch;
      ch.t = c.at("t").get<double>();
      ch.identity_rel_err = number_or_nan(c.at("identity_rel_err"));
      ch.identity_ok = c.at("identity_ok").get<bool>();
      ch.premises_hold = c.at("premises_hold").get<bool>();
      ch.conclusions_hold = c.at("conclusions_hold").get<bool>();
      ch.cramer_rao_ok = c.at("cramer_rao_ok").get<bool>();
      const std::string status = c.at("status").get<std::string>();
      ch.status = status == "satisfied" ? conjectures::ChainStatus::satisfied
                  : status == "vacuous" ? conjectures::ChainStatus::vacuous
                                        : conjectures::ChainStatus::failed;
      ch.min_conclusion_margin = number_or_nan(c.at("min_conclusion_margin"));
      r.chain.push_back(ch);
    }
    const auto& s = j.at("summary");
    r.any_violation_candidate = s.at("any_violation_candidate").get<bool>();
    r.any_hard_failure = s.at("any_hard_failure").get<bool>();
    r.any_cell_error = s.at("any_cell_error").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw parse_error("report '" + path + "': " + e.what());
  }
  return r;
}

}  // namespace epflow::io
