#ifndef FGS_REPORT_HPP
#define FGS_REPORT_HPP

#include "fgs/ground_state.hpp"
#include <json.hpp>
#include <string>
#include <vector>

namespace fgs {

using ojson = nlohmann::ordered_json;

/// 17 significant digits: round-trips any double exactly.
std::string format_double(double x);

/// Write via a temp file in the same directory plus rename.
void write_text_atomic(const std::string& path, const std::string& content);

void write_json_atomic(const std::string& path, const ojson& doc);

/// CSV with a header row, comma separators, \n line endings; numbers at
/// 17 significant digits.
std::string to_csv(const std::vector<std::string>& header,
                   const std::vector<std::vector<double>>& rows);

/// Minimal SVG 1.1 polyline chart; one polyline per series, linear axes
/// (callers transform to log space themselves).
std::string svg_line_plot(const std::string& title,
                          const std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>>& series,
                          const std::string& x_label, const std::string& y_label);

ojson record_to_json(const GroundStateRecord& rec, bool include_values = true);
GroundStateRecord record_from_json(const ojson& doc);

} // namespace fgs

#endif
