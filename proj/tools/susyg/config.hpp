#pragma once

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "susyg/coherent.hpp"
#include "susyg/specfun.hpp"
#include "susyg/susy.hpp"

namespace susyg::cli {

// Raw key -> value strings, exactly as given. Kept raw so the JSON echo
// re-parses to the same doubles.
using RawConfig = std::map<std::string, std::string>;

struct CaseOverride {
  std::string name;
  RawConfig values;
};

struct RunConfig {
  RawConfig values;                // defaults < file < flags
  std::vector<CaseOverride> cases; // [case NAME] sections, in file order
};

// Known keys with their defaults. An empty default means "command decides".
const RawConfig& defaults();

// Throws ConfigError on unknown keys.
void check_keys(const RawConfig& raw);

// Flat key = value lines, '#' or ';' comments, [section] headers. A section
// named "case NAME" collects overrides for one run; any other section name
// only groups keys.
RunConfig parse_ini(const std::string& text);

// The meta block of a JSON output file: {"config": {...}, "cases": [...]}.
RunConfig parse_json_meta(const std::string& text);

RunConfig load_config_file(const std::string& path);

// Real number with an optional pi factor: "0.5", "-1e-3", "pi/3", "2pi/3", "6*pi".
double parse_real(const std::string& s);
int parse_int(const std::string& s);

// "a, b, c" or "start:stop:count".
std::vector<double> parse_list(const std::string& s);

// "n:value, n:value".
std::map<int, double> parse_f_values(const std::string& s);

// Typed view of one resolved run (one case).
struct Resolved {
  RawConfig raw;
  std::string case_name;  // empty for a single run

  susy::SusyContext context() const;
  Grid grid() const;
  susy::WMethod w_method() const;
  coherent::LadderSpec ladder(const susy::SusyContext& ctx) const;
  std::string family() const;
  int extremal_index() const;
  std::optional<int> n_max() const;
  std::vector<bg::Label> levels() const;
  std::vector<double> r_values() const;
  std::vector<double> theta_values() const;
  std::vector<double> times() const;
  std::string what() const;
  specfun::Tolerances tolerances() const;

  double real(const std::string& key) const;
  int integer(const std::string& key) const;
  const std::string& str(const std::string& key) const;
};

// One Resolved per case, or a single one without case sections.
std::vector<Resolved> resolve(const RunConfig& cfg);

coherent::CoherentState build_state(const Resolved& run, const susy::SusyContext& ctx,
                                    const coherent::LadderSpec& spec, std::complex<double> alpha);

}  // namespace susyg::cli
