#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"

namespace susyg::cli {

struct Series {
  std::string name;
  std::vector<double> values;
};

// One axis column plus any number of series of the same length. String
// labels replace the numeric axis when set (spectrum levels).
struct Table {
  std::string axis;
  std::vector<double> axis_values;
  std::vector<std::string> axis_labels;
  std::vector<Series> series;

  size_t rows() const { return axis_labels.empty() ? axis_values.size() : axis_labels.size(); }
  void add(std::string name, std::vector<double> values);
};

// Appends the series of b to a with names prefixed "prefix:". Axes must match.
void merge_into(Table& a, const Table& b, const std::string& prefix);

// Header row, then one row per axis point; %.12g.
void write_csv(std::ostream& os, const Table& t);

// {"meta": meta, "series": [{"name", "axis", "values"}, ...]}; the axis is
// the first entry.
nlohmann::json table_json(const Table& t, const nlohmann::json& meta);

// Config echo for the meta block: {"config": {...}, "cases": [...]}.
nlohmann::json config_echo(const RunConfig& cfg);

std::string format_number(double v);

}  // namespace susyg::cli
