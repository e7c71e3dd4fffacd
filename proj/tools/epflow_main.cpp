// Batch front end: load a mixture spec, run the conjecture checks along the
// flow, write the machine-readable reports, print a human summary.
//
// Exit codes: 0 all checks passed, 1 error, 2 violation candidate present.

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "epflow.h"

namespace {

struct MixtureDeleter {
  void operator()(epf_mixture* m) const { epf_mixture_free(m); }
};
struct ReportDeleter {
  void operator()(epf_report* r) const { epf_report_free(r); }
};
using MixtureHandle = std::unique_ptr<epf_mixture, MixtureDeleter>;
using ReportHandle = std::unique_ptr<epf_report, ReportDeleter>;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t next = text.find(sep, pos);
    out.push_back(text.substr(pos, next == std::string::npos ? next : next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

bool parse_double(const std::string& tok, double* out) {
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), *out);
  return res.ec == std::errc{} && res.ptr == tok.data() + tok.size();
}

// grid spec: "log:COUNT:LO:HI" or "list:t1,t2,..."
std::vector<double> parse_grid(const std::string& text) {
  auto fail = [&](const std::string& why) -> std::vector<double> {
    throw CLI::ValidationError("--t-grid", "'" + text + "': " + why);
  };
  std::vector<double> grid;
  if (text.rfind("log:", 0) == 0) {
    const auto parts = split(text.substr(4), ':');
    int count = 0;
    double lo = 0, hi = 0;
    if (parts.size() != 3) return fail("expected log:COUNT:LO:HI");
    {
      const auto res =
          std::from_chars(parts[0].data(), parts[0].data() + parts[0].size(), count);
      if (res.ec != std::errc{} || res.ptr != parts[0].data() + parts[0].size()) {
        return fail("'" + parts[0] + "' is not a count");
      }
    }
    if (!parse_double(parts[1], &lo) || !parse_double(parts[2], &hi)) {
      return fail("bounds must be numbers");
    }
    if (count < 1 || !(lo > 0) || !(hi > lo)) return fail("need COUNT >= 1 and 0 < LO < HI");
    grid.resize(static_cast<std::size_t>(count));
    if (count == 1) {
      grid[0] = lo;
    } else {
      const double step = std::log(hi / lo) / (count - 1);
      for (int i = 0; i < count; ++i) grid[static_cast<std::size_t>(i)] = lo * std::exp(step * i);
      grid.back() = hi;
    }
    return grid;
  }
  if (text.rfind("list:", 0) == 0) {
    for (const auto& tok : split(text.substr(5), ',')) {
      double v = 0;
      if (!parse_double(tok, &v)) return fail("'" + tok + "' is not a number");
      grid.push_back(v);
    }
    if (grid.empty()) return fail("empty list");
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!(grid[i] > 0)) return fail("times must be positive");
      if (i > 0 && !(grid[i] > grid[i - 1])) return fail("times must be strictly increasing");
    }
    return grid;
  }
  return fail("expected log:... or list:...");
}

int report_error(const char* stage, epf_status status) {
  std::fprintf(stderr, "error: %s: %s: %s\n", stage, epf_status_name(status),
               epf_last_error_message());
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"entropy-power flow conjecture checks for 1-D Gaussian mixtures"};

  std::string input_path;
  std::string grid_spec = "log:16:0.05:5";
  std::string method_name = "both";
  std::string out_dir = ".";
  int order = 4;
  bool allow_high_order = false;
  epf_quad_options quad;
  epf_quad_options_default(&quad);

  app.add_option("--input", input_path, "mixture specification file")->required();
  app.add_option("--order", order, "highest derivative order M")->capture_default_str();
  app.add_option("--t-grid", grid_spec, "log:COUNT:LO:HI or list:t1,t2,...")
      ->capture_default_str();
  app.add_option("--method", method_name, "analytic | spectral | both")
      ->check(CLI::IsMember({"analytic", "spectral", "both"}))
      ->capture_default_str();
  app.add_option("--abs-tol", quad.abs_tol, "quadrature absolute tolerance")
      ->capture_default_str();
  app.add_option("--rel-tol", quad.rel_tol, "quadrature relative tolerance")
      ->capture_default_str();
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_flag("--allow-high-order", allow_high_order, "unlock orders 5 and 6");

  CLI11_PARSE(app, argc, argv);

  if (order < 1) {
    std::fprintf(stderr, "error: --order must be at least 1\n");
    return 1;
  }
  if (order > 4 && !allow_high_order) {
    std::fprintf(stderr,
                 "error: order %d needs --allow-high-order (orders above 4 lose digits)\n",
                 order);
    return 1;
  }
  if (order > 6) {
    std::fprintf(stderr, "error: order %d exceeds the supported maximum 6\n", order);
    return 1;
  }

  std::vector<double> grid;
  try {
    grid = parse_grid(grid_spec);
  } catch (const CLI::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }

  epf_mixture* mixture_raw = nullptr;
  if (auto s = epf_mixture_load(input_path.c_str(), &mixture_raw); s != EPF_OK) {
    return report_error("loading mixture", s);
  }
  MixtureHandle mixture(mixture_raw);

  int warning_count = 0;
  epf_mixture_warning_count(mixture.get(), &warning_count);
  for (int i = 0; i < warning_count; ++i) {
    const char* w = nullptr;
    if (epf_mixture_warning(mixture.get(), i, &w) == EPF_OK) {
      std::fprintf(stderr, "warning: %s: %s\n", input_path.c_str(), w);
    }
  }

  const epf_method method = method_name == "analytic"   ? EPF_METHOD_ANALYTIC
                            : method_name == "spectral" ? EPF_METHOD_SPECTRAL
                                                        : EPF_METHOD_BOTH;

  epf_report* report_raw = nullptr;
  if (auto s = epf_evaluate(mixture.get(), grid.data(), static_cast<int>(grid.size()), order,
                            &quad, method, &report_raw);
      s != EPF_OK) {
    return report_error("evaluating conjectures", s);
  }
  ReportHandle report(report_raw);

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    std::fprintf(stderr, "error: cannot create output directory '%s': %s\n", out_dir.c_str(),
                 ec.message().c_str());
    return 1;
  }
  const std::string json_path = out_dir + "/report.json";
  const std::string table_path = out_dir + "/table.csv";
  const std::string curves_path = out_dir + "/curves.csv";
  if (auto s = epf_report_write_json(report.get(), json_path.c_str()); s != EPF_OK) {
    return report_error("writing report.json", s);
  }
  if (auto s = epf_report_write_table_csv(report.get(), table_path.c_str()); s != EPF_OK) {
    return report_error("writing table.csv", s);
  }
  if (auto s = epf_report_write_curves_csv(report.get(), curves_path.c_str()); s != EPF_OK) {
    return report_error("writing curves.csv", s);
  }

  // human summary
  double mean = 0, variance = 0;
  epf_mixture_moments(mixture.get(), &mean, &variance);
  const char* name = nullptr;
  epf_mixture_name(mixture.get(), &name);
  int n_comp = 0;
  epf_mixture_component_count(mixture.get(), &n_comp);
  std::printf("mixture: %s (%d component%s), mean %.6g, variance %.6g\n",
              (name != nullptr && name[0] != '\0') ? name : input_path.c_str(), n_comp,
              n_comp == 1 ? "" : "s", mean, variance);
  std::printf("order M = %d, method = %s, grid = %zu points in [%.4g, %.4g]\n", order,
              method_name.c_str(), grid.size(), grid.front(), grid.back());

  int n_points = 0;
  epf_report_point_count(report.get(), &n_points);
  std::printf("%10s %12s %12s %12s %6s %s\n", "t", "H", "I", "N", "chain", "");
  int failed_points = 0;
  for (int i = 0; i < n_points; ++i) {
    epf_point p{};
    if (epf_report_point(report.get(), i, &p) != EPF_OK) continue;
    if (p.evaluation_failed) {
      ++failed_points;
      std::printf("%10.4g %12s %12s %12s %6s\n", p.t, "-", "-", "-", "error");
      continue;
    }
    std::printf("%10.4g %12.6g %12.6g %12.6g %6s\n", p.t, p.entropy, p.fisher, p.entropy_power,
                p.chain_satisfied > 0   ? "ok"
                : p.chain_satisfied < 0 ? "FAIL"
                                        : "vac");
  }

  int n_cells = 0, n_violations = 0, n_cell_errors = 0;
  epf_report_cell_count(report.get(), &n_cells);
  for (int i = 0; i < n_cells; ++i) {
    epf_cell c{};
    if (epf_report_cell(report.get(), i, &c) != EPF_OK) continue;
    if (c.violation_candidate) ++n_violations;
    if (c.cell_error) ++n_cell_errors;
  }

  int has_violation = 0, has_hard_failure = 0;
  epf_report_has_violation_candidate(report.get(), &has_violation);
  epf_report_has_hard_failure(report.get(), &has_hard_failure);

  if (n_violations > 0) {
    std::printf("%d of %d cells are VIOLATION-CANDIDATES: re-run with tighter --abs-tol/"
                "--rel-tol before reading anything into them\n",
                n_violations, n_cells);
  } else {
    std::printf("all %d cells passed (EP, McK, GCM) on this grid\n", n_cells);
  }
  if (n_cell_errors > 0) {
    std::printf("%d cells failed to evaluate; see report.json\n", n_cell_errors);
  }
  std::printf("wrote %s, %s, %s\n", json_path.c_str(), table_path.c_str(), curves_path.c_str());

  if (has_hard_failure != 0) {
    std::fprintf(stderr, "error: internal consistency failure (see report.json chain records)\n");
    return 1;
  }
  if (failed_points == n_points) {
    std::fprintf(stderr, "error: every grid point failed to evaluate\n");
    return 1;
  }
  return has_violation != 0 ? 2 : 0;
}
