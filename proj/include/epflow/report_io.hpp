#pragma once

#include <string>

#include "epflow/conjectures.hpp"

// Report serialization. The JSON and CSV writers format every float
// explicitly (17 significant digits in JSON for exact round-trips, 12 in
// CSV for readability) and emit fields in a fixed order, so identical runs
// produce byte-identical files.

namespace epflow::io {

std::string render_report_json(const conjectures::ConjectureReport& report);
void write_report_json(const conjectures::ConjectureReport& report, const std::string& path);

// One row per (t, m) cell.
std::string render_table_csv(const conjectures::ConjectureReport& report);
void write_table_csv(const conjectures::ConjectureReport& report, const std::string& path);

// One row per grid time: t, H, I, y, ydot, N.
std::string render_curves_csv(const conjectures::ConjectureReport& report);
void write_curves_csv(const conjectures::ConjectureReport& report, const std::string& path);

conjectures::ConjectureReport load_report_json(const std::string& path);

}  // namespace epflow::io
