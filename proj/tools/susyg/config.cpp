#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "susyg/errors.hpp"

namespace susyg::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  return out;
}

// Reads a plain number at s[pos...]; returns false when none is there.
bool read_number(const std::string& s, size_t& pos, double& v) {
  if (pos >= s.size()) return false;
  const char c = s[pos];
  if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '.')) return false;
  const char* begin = s.c_str() + pos;
  char* end = nullptr;
  v = std::strtod(begin, &end);
  if (end == begin) return false;
  pos += static_cast<size_t>(end - begin);
  return true;
}

std::string value_string(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

}  // namespace

const RawConfig& defaults() {
  static const RawConfig d = {
      {"omega", "1"},          {"k_wave", "1"},        {"epsilon", "0.5"},
      {"w0", "1"},             {"x_min", "-12"},       {"x_max", "12"},
      {"n_points", "2401"},    {"w_method", "differential"},
      {"family", "bgcs"},      {"ladder", "diagonal"}, {"extremal_index", "0"},
      {"n_max", ""},           {"levels", "0"},        {"r", "1"},
      {"theta", "0"},          {"t_min", "0"},         {"t_max", "2pi"},
      {"t_points", "101"},     {"f_values", ""},       {"roots", ""},
      {"what", "observables"}, {"format", "csv"},      {"output", ""},
      {"tol_kernel", "1e-12"}, {"tol_derived", "1e-8"},
  };
  return d;
}

void check_keys(const RawConfig& raw) {
  for (const auto& [k, v] : raw) {
    if (!defaults().contains(k)) throw ConfigError("unknown config key '" + k + "'");
  }
}

RunConfig parse_ini(const std::string& text) {
  RunConfig cfg;
  CaseOverride* current = nullptr;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto c = line.find_first_of("#;"); c != std::string::npos) line.erase(c);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": bad section header");
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (name.rfind("case", 0) == 0 && name.size() > 4 && std::isspace(static_cast<unsigned char>(name[4]))) {
        cfg.cases.push_back({trim(name.substr(4)), {}});
        current = &cfg.cases.back();
      } else {
        current = nullptr;
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!defaults().contains(key)) {
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    (current ? current->values : cfg.values)[key] = value;
  }
  return cfg;
}

RunConfig parse_json_meta(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("json config: ") + e.what());
  }
  const nlohmann::json& meta = j.contains("meta") ? j["meta"] : j;
  RunConfig cfg;
  if (meta.contains("config")) {
    for (const auto& [k, v] : meta["config"].items()) cfg.values[k] = value_string(v);
  }
  if (meta.contains("cases")) {
    for (const auto& c : meta["cases"]) {
      CaseOverride co{c.value("name", ""), {}};
      if (c.contains("config")) {
        for (const auto& [k, v] : c["config"].items()) co.values[k] = value_string(v);
      }
      cfg.cases.push_back(std::move(co));
    }
  }
  check_keys(cfg.values);
  for (const auto& c : cfg.cases) check_keys(c.values);
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  const std::string text = ss.str();
  const bool json = path.size() >= 5 && path.substr(path.size() - 5) == ".json";
  return json ? parse_json_meta(text) : parse_ini(text);
}

double parse_real(const std::string& raw) {
  const std::string s = trim(raw);
  size_t pos = 0;
  double sign = 1.0;
  if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) {
    if (s[pos] == '-') sign = -1.0;
    ++pos;
  }
  double v = 1.0;
  const bool has_number = read_number(s, pos, v);
  if (pos < s.size() && s[pos] == '*') {
    if (!has_number) throw ConfigError("bad number '" + raw + "'");
    ++pos;
  }
  bool has_pi = false;
  if (s.compare(pos, 2, "pi") == 0) {
    has_pi = true;
    pos += 2;
    v *= std::numbers::pi;
  }
  if (!has_number && !has_pi) throw ConfigError("bad number '" + raw + "'");
  if (pos < s.size() && s[pos] == '/') {
    ++pos;
    double den = 0.0;
    if (!read_number(s, pos, den) || den == 0.0) throw ConfigError("bad number '" + raw + "'");
    v /= den;
  }
  if (pos != s.size() || !std::isfinite(v)) throw ConfigError("bad number '" + raw + "'");
  return sign * v;
}

int parse_int(const std::string& raw) {
  const std::string s = trim(raw);
  size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("bad integer '" + raw + "'");
  }
  if (used != s.size()) throw ConfigError("bad integer '" + raw + "'");
  return v;
}

std::vector<double> parse_list(const std::string& s) {
  if (trim(s).empty()) return {};
  if (s.find(':') != std::string::npos) {
    const auto parts = split(s, ':');
    if (parts.size() != 3) throw ConfigError("range must be start:stop:count, got '" + s + "'");
    const double a = parse_real(parts[0]), b = parse_real(parts[1]);
    const int n = parse_int(parts[2]);
    if (n < 1) throw ConfigError("range count must be >= 1");
    if (n == 1) return {a};
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = i == n - 1 ? b : a + (b - a) * i / (n - 1);
    return out;
  }
  std::vector<double> out;
  for (const auto& p : split(s, ',')) out.push_back(parse_real(p));
  return out;
}

std::map<int, double> parse_f_values(const std::string& s) {
  std::map<int, double> out;
  if (trim(s).empty()) return out;
  for (const auto& item : split(s, ',')) {
    const auto c = item.find(':');
    if (c == std::string::npos) throw ConfigError("f_values entries are n:value, got '" + item + "'");
    const int n = parse_int(item.substr(0, c));
    if (n < 0) throw ConfigError("f_values level must be >= 0");
    out[n] = parse_real(item.substr(c + 1));
  }
  return out;
}

const std::string& Resolved::str(const std::string& key) const {
  const auto it = raw.find(key);
  if (it == raw.end()) throw ConfigError("missing config key '" + key + "'");
  return it->second;
}

double Resolved::real(const std::string& key) const {
  try {
    return parse_real(str(key));
  } catch (const ConfigError& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

int Resolved::integer(const std::string& key) const {
  try {
    return parse_int(str(key));
  } catch (const ConfigError& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

susy::SusyContext Resolved::context() const {
  const double w0 = real("w0");
  if (w0 < 0.0) throw ConfigError("w0 must be >= 0");
  return susy::SusyContext::make(real("omega"), real("k_wave"), real("epsilon"), w0);
}

Grid Resolved::grid() const {
  const int n = integer("n_points");
  if (n < 2) throw ConfigError("n_points must be >= 2");
  return Grid(real("x_min"), real("x_max"), n);
}

susy::WMethod Resolved::w_method() const {
  const auto& m = str("w_method");
  if (m == "differential") return susy::WMethod::differential;
  if (m == "integral") return susy::WMethod::integral;
  throw ConfigError("w_method must be integral or differential");
}

coherent::LadderSpec Resolved::ladder(const susy::SusyContext& ctx) const {
  const auto& k = str("ladder");
  coherent::LadderKind kind;
  if (k == "diagonal") {
    kind = coherent::LadderKind::diagonal;
  } else if (k == "nondiagonal") {
    kind = coherent::LadderKind::nondiagonal;
  } else {
    throw ConfigError("ladder must be diagonal or nondiagonal");
  }
  auto f = parse_f_values(str("f_values"));
  for (double root : parse_list(str("roots"))) {
    const int n = static_cast<int>(std::lround(root));
    if (n < 0 || std::abs(root - n) > 0) throw ConfigError("roots must be non-negative integers");
    f[n] = 0.0;
  }
  return coherent::make_ladder(ctx, kind, f);
}

std::string Resolved::family() const {
  const auto& f = str("family");
  if (f != "bgcs" && f != "gpcs" && f != "standard") throw ConfigError("family must be bgcs, gpcs or standard");
  return f;
}

int Resolved::extremal_index() const {
  const int e = integer("extremal_index");
  if (e < 0) throw ConfigError("extremal_index must be >= 0");
  return e;
}

std::optional<int> Resolved::n_max() const {
  if (trim(str("n_max")).empty()) return std::nullopt;
  const int n = integer("n_max");
  if (n < 1) throw ConfigError("n_max must be >= 1");
  return n;
}

std::vector<bg::Label> Resolved::levels() const {
  std::vector<bg::Label> out;
  for (const auto& tok : split(str("levels"), ',')) {
    if (tok == "nu") {
      out.push_back(bg::Label::nu());
    } else {
      const int n = parse_int(tok);
      if (n < 0) throw ConfigError("levels must be >= 0 or 'nu'");
      out.push_back(bg::Label::level(n));
    }
  }
  if (out.empty()) throw ConfigError("levels is empty");
  return out;
}

std::vector<double> Resolved::r_values() const {
  auto r = parse_list(str("r"));
  if (r.empty()) throw ConfigError("r is empty");
  for (double v : r) {
    if (v < 0.0) throw ConfigError("r must be >= 0");
  }
  return r;
}

std::vector<double> Resolved::theta_values() const {
  auto t = parse_list(str("theta"));
  if (t.empty()) throw ConfigError("theta is empty");
  return t;
}

std::vector<double> Resolved::times() const {
  const int n = integer("t_points");
  if (n < 1) throw ConfigError("t_points must be >= 1");
  return parse_list(str("t_min") + ":" + str("t_max") + ":" + std::to_string(n));
}

std::string Resolved::what() const {
  const auto& w = str("what");
  if (w != "observables" && w != "probabilities") throw ConfigError("what must be observables or probabilities");
  return w;
}

specfun::Tolerances Resolved::tolerances() const {
  specfun::Tolerances t;
  t.kernel = real("tol_kernel");
  t.derived = real("tol_derived");
  if (!(t.kernel > 0.0) || !(t.derived > 0.0)) throw ConfigError("tolerances must be positive");
  return t;
}

std::vector<Resolved> resolve(const RunConfig& cfg) {
  check_keys(cfg.values);
  RawConfig base = defaults();
  for (const auto& [k, v] : cfg.values) base[k] = v;
  if (cfg.cases.empty()) return {Resolved{base, ""}};
  std::vector<Resolved> out;
  for (const auto& c : cfg.cases) {
    check_keys(c.values);
    if (c.name.empty()) throw ConfigError("case section without a name");
    RawConfig raw = base;
    for (const auto& [k, v] : c.values) raw[k] = v;
    out.push_back({raw, c.name});
  }
  return out;
}

coherent::CoherentState build_state(const Resolved& run, const susy::SusyContext& ctx,
                                    const coherent::LadderSpec& spec, std::complex<double> alpha) {
  const auto fam = run.family();
  const int n_max = run.n_max().value_or(0);
  if (fam == "standard") return coherent::standard_cs(alpha, n_max);
  if (fam == "gpcs") return coherent::gpcs(spec, ctx, alpha, run.extremal_index());
  return coherent::bgcs(spec, ctx, alpha, n_max);
}

}  // namespace susyg::cli
