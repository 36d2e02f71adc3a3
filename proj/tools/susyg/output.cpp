#include "output.hpp"

#include <cmath>
#include <cstdio>

#include "susyg/errors.hpp"

namespace susyg::cli {

void Table::add(std::string name, std::vector<double> values) {
  if (values.size() != rows()) {
    throw NumericalError("series '" + name + "' has " + std::to_string(values.size()) + " rows, axis has " +
                         std::to_string(rows()));
  }
  series.push_back({std::move(name), std::move(values)});
}

void merge_into(Table& a, const Table& b, const std::string& prefix) {
  if (a.axis != b.axis || a.axis_values != b.axis_values || a.axis_labels != b.axis_labels) {
    throw ConfigError("cases produce different " + b.axis + " axes; use one grid for all cases");
  }
  for (const auto& s : b.series) a.series.push_back({prefix + ":" + s.name, s.values});
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_csv(std::ostream& os, const Table& t) {
  os << t.axis;
  for (const auto& s : t.series) os << ',' << s.name;
  os << '\n';
  for (size_t i = 0; i < t.rows(); ++i) {
    os << (t.axis_labels.empty() ? format_number(t.axis_values[i]) : t.axis_labels[i]);
    for (const auto& s : t.series) os << ',' << format_number(s.values[i]);
    os << '\n';
  }
}

nlohmann::json table_json(const Table& t, const nlohmann::json& meta) {
  nlohmann::json out;
  out["meta"] = meta;
  auto series = nlohmann::json::array();
  nlohmann::json axis{{"name", t.axis}, {"axis", t.axis}};
  if (t.axis_labels.empty()) {
    axis["values"] = t.axis_values;
  } else {
    axis["values"] = t.axis_labels;
  }
  series.push_back(axis);
  for (const auto& s : t.series) series.push_back({{"name", s.name}, {"axis", t.axis}, {"values", s.values}});
  out["series"] = series;
  return out;
}

nlohmann::json config_echo(const RunConfig& cfg) {
  nlohmann::json j;
  j["config"] = cfg.values;
  auto cases = nlohmann::json::array();
  for (const auto& c : cfg.cases) cases.push_back({{"name", c.name}, {"config", c.values}});
  j["cases"] = cases;
  return j;
}

}  // namespace susyg::cli
