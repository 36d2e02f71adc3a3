#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>

#include "susyg/bg.hpp"
#include "susyg/coherent.hpp"
#include "susyg/dynamics.hpp"
#include "susyg/errors.hpp"
#include "susyg/susy.hpp"

namespace susyg::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using coherent::CoherentState;
using Complex = std::complex<double>;

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// "[r=1;theta=1.0472]" with only the parameters that vary.
std::string tag(std::initializer_list<std::pair<const char*, std::optional<double>>> items) {
  std::string s;
  for (const auto& [k, v] : items) {
    if (!v) continue;
    s += (s.empty() ? "[" : ";") + std::string(k) + "=" + short_number(*v);
  }
  return s.empty() ? s : s + "]";
}

std::optional<double> if_many(const std::vector<double>& list, double v) {
  return list.size() > 1 ? std::optional<double>(v) : std::nullopt;
}

Table x_table(const Grid& g) {
  Table t;
  t.axis = "x";
  t.axis_values = g.points();
  return t;
}

struct State {
  double r, theta;
  CoherentState cs;
};

std::vector<State> states(const Resolved& run, const susy::SusyContext& ctx) {
  const auto spec = run.ladder(ctx);
  std::vector<State> out;
  for (double r : run.r_values()) {
    for (double th : run.theta_values()) out.push_back({r, th, build_state(run, ctx, spec, std::polar(r, th))});
  }
  return out;
}

std::string state_tag(const Resolved& run, const State& s) {
  return tag({{"r", if_many(run.r_values(), s.r)}, {"theta", if_many(run.theta_values(), s.theta)}});
}

coherent::LevelTable level_table(const susy::Transform& t, const std::vector<State>& sts) {
  int count = 1;
  for (const auto& s : sts) count = std::max(count, coherent::significant_terms(s.cs.coeffs));
  return coherent::LevelTable(t, sts.front().cs.K, count);
}

void check_same_K(const std::vector<State>& sts) {
  for (const auto& s : sts) {
    if (s.cs.K != sts.front().cs.K) throw ConfigError("states of one run must share K");
  }
}

Table cmd_field(const Resolved& run) {
  const auto ctx = run.context();
  const auto g = run.grid();
  susy::Transform t(ctx, g, run.w_method());
  Table out = x_table(g);
  out.add("B", t.magnetic_field());
  out.add("A", t.vector_potential());
  out.add("w", t.w().values);
  return out;
}

Table cmd_potential(const Resolved& run) {
  const auto ctx = run.context();
  const auto g = run.grid();
  susy::Transform t(ctx, g, run.w_method());
  Table out = x_table(g);
  out.add("V0", t.v0());
  out.add("V2", t.v2());
  return out;
}

Table cmd_spectrum(const Resolved& run, nlohmann::json& info) {
  const auto ctx = run.context();
  const auto table = bg::spectrum(ctx, run.n_max().value_or(10));
  Table out;
  out.axis = "level";
  std::vector<double> e, d, rank;
  for (const auto& entry : table.entries) {
    out.axis_labels.push_back(bg::to_string(entry.label));
    e.push_back(entry.energy);
    d.push_back(entry.degeneracy);
    rank.push_back(entry.rank);
  }
  out.add("energy", e);
  out.add("degeneracy", d);
  out.add("rank", rank);
  info["spacing"] = bg::to_string(bg::classify_spacing(table));
  info["includes_E_nu"] = table.includes_E_nu;
  return out;
}

Table cmd_eigenstate(const Resolved& run) {
  const auto ctx = run.context();
  const auto g = run.grid();
  susy::Transform t(ctx, g, run.w_method());
  Table out = x_table(g);
  for (const auto& label : run.levels()) {
    const auto s = bg::eigenspinor(t, label);
    const std::string k = "[" + bg::to_string(label) + "]";
    out.add("upper" + k, s.upper);
    out.add("lower" + k, s.lower);
    out.add("rho" + k, bg::density_n(s));
    out.add("jx" + k, bg::current_x_n(t, s));
    out.add("jy" + k, bg::current_y_n(t, s));
  }
  return out;
}

Table cmd_coherent(const Resolved& run, nlohmann::json& info) {
  const auto ctx = run.context();
  const auto sts = states(run, ctx);
  info["family"] = coherent::to_string(sts.front().cs.family);
  info["K"] = sts.front().cs.K;
  if (run.what() == "probabilities") {
    int K = sts.front().cs.K, len = 0;
    check_same_K(sts);
    for (const auto& s : sts) len = std::max(len, s.cs.size());
    Table out;
    out.axis = "n";
    for (int n = 0; n < len; ++n) out.axis_values.push_back(K + n);
    for (const auto& s : sts) {
      std::vector<double> p(len, 0.0), re(len, 0.0), im(len, 0.0);
      for (int n = 0; n < s.cs.size(); ++n) {
        p[n] = std::norm(s.cs.coeffs[n]);
        re[n] = s.cs.coeffs[n].real();
        im[n] = s.cs.coeffs[n].imag();
      }
      const auto k = state_tag(run, s);
      out.add("P" + k, p);
      out.add("c_re" + k, re);
      out.add("c_im" + k, im);
    }
    return out;
  }
  check_same_K(sts);
  const auto g = run.grid();
  susy::Transform t(ctx, g, run.w_method());
  const auto table = level_table(t, sts);
  Table out = x_table(g);
  for (const auto& s : sts) {
    auto obs = table.observables(s.cs.coeffs);
    const auto k = state_tag(run, s);
    out.add("rho" + k, std::move(obs.rho));
    out.add("jx" + k, std::move(obs.jx));
    out.add("jy" + k, std::move(obs.jy));
  }
  return out;
}

Table cmd_evolve(const Resolved& run) {
  const auto ctx = run.context();
  const auto sts = states(run, ctx);
  check_same_K(sts);
  const auto g = run.grid();
  susy::Transform t(ctx, g, run.w_method());
  const auto table = level_table(t, sts);
  const auto times = run.times();
  Table out = x_table(g);
  for (const auto& s : sts) {
    const auto k = state_tag(run, s);
    for (double tt : times) {
      const auto spec = dynamics::EvolutionSpec::make(ctx, s.cs, tt);
      std::string name = "rho" + (k.empty() ? "[t=" + short_number(tt) + "]"
                                            : k.substr(0, k.size() - 1) + ";t=" + short_number(tt) + "]");
      out.add(name, dynamics::density_t(spec, table));
    }
  }
  return out;
}

Table cmd_fidelity(const Resolved& run) {
  const auto ctx = run.context();
  const auto sts = states(run, ctx);
  Table out;
  out.axis = "t";
  out.axis_values = run.times();
  for (const auto& s : sts) out.add("F" + state_tag(run, s), dynamics::fidelity_series(ctx, s.cs, out.axis_values));
  return out;
}

Table cmd_phase(const Resolved& run, nlohmann::json& info) {
  const auto ctx = run.context();
  const auto spec = run.ladder(ctx);
  const auto rs = run.r_values();
  const auto ths = run.theta_values();
  Table out;
  out.axis = "r";
  out.axis_values = rs;
  auto rules = nlohmann::json::array();
  for (double th : ths) {
    std::vector<double> cyc, coh, tau, phi_raw, phi, beta, closed;
    for (double r : rs) {
      const auto cs = build_state(run, ctx, spec, std::polar(r, th));
      const auto rep = dynamics::cyclic_analysis(ctx, cs);
      cyc.push_back(rep.cyclic);
      coh.push_back(rep.is_coherent_evolution);
      tau.push_back(rep.tau.value_or(kNaN));
      phi_raw.push_back(rep.cyclic ? rep.global_phase_raw : kNaN);
      phi.push_back(rep.cyclic ? rep.global_phase : kNaN);
      beta.push_back(rep.geometric_phase.value_or(kNaN));
      closed.push_back(dynamics::geometric_phase_closed(ctx, cs).value_or(kNaN));
      nlohmann::json rj{{"r", r}, {"theta", th}, {"rule", rep.rule}};
      if (rep.approx_tau) rj["approx_tau"] = *rep.approx_tau;
      if (rep.two_nu) rj["two_nu"] = {rep.two_nu->p, rep.two_nu->q};
      rules.push_back(rj);
    }
    const auto k = tag({{"theta", if_many(ths, th)}});
    out.add("cyclic" + k, cyc);
    out.add("coherent" + k, coh);
    out.add("tau" + k, tau);
    out.add("phi_raw" + k, phi_raw);
    out.add("phi" + k, phi);
    out.add("beta" + k, beta);
    out.add("beta_closed" + k, closed);
  }
  info["rules"] = rules;
  return out;
}

bool roots_only_at(const coherent::LadderSpec& spec, int j) {
  if (spec.roots != std::vector<int>{j, j + 1}) return false;
  for (const auto& [n, g] : spec.g_values) {
    if (n != j && n != j + 1 && g != 1.0) return false;
  }
  return true;
}

double product_closed(const susy::SusyContext& ctx, const CoherentState& cs) {
  if (cs.family == coherent::Family::standard) return 0.5;
  if (!ctx.on_spectrum() || !roots_only_at(cs.spec, ctx.j)) return kNaN;
  const int j = ctx.j;
  if (cs.family == coherent::Family::BGCS && cs.K == j + 1) return coherent::bgcs_product_closed(j, cs.r());
  if (cs.family == coherent::Family::GPCS && cs.K == 0 && cs.N == j - 1) {
    return coherent::gpcs_product_closed(j, cs.alpha);
  }
  return kNaN;
}

Table cmd_uncertainty(const Resolved& run) {
  const auto ctx = run.context();
  const auto spec = run.ladder(ctx);
  const auto rs = run.r_values();
  const auto ths = run.theta_values();
  Table out;
  out.axis = "r";
  out.axis_values = rs;
  for (double th : ths) {
    std::vector<double> dx, dp, prod, comm, half, closed;
    for (double r : rs) {
      const auto cs = build_state(run, ctx, spec, std::polar(r, th));
      const auto q = coherent::uncertainty(cs);
      dx.push_back(q.dx);
      dp.push_back(q.dp);
      prod.push_back(q.product);
      comm.push_back(q.commutator);
      half.push_back(0.5 * q.commutator);
      closed.push_back(product_closed(ctx, cs));
    }
    const auto k = tag({{"theta", if_many(ths, th)}});
    out.add("dX" + k, dx);
    out.add("dP" + k, dp);
    out.add("product" + k, prod);
    out.add("commutator" + k, comm);
    out.add("half_commutator" + k, half);
    out.add("product_closed" + k, closed);
  }
  return out;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"field",  "potential", "spectrum", "eigenstate",  "coherent",
                                                 "evolve", "fidelity",  "phase",    "uncertainty", "validate"};
  return names;
}

Table run_command(const std::string& command, const Resolved& run, nlohmann::json& info) {
  const auto ctx = run.context();
  info["case"] = susy::to_string(ctx.case_tag);
  info["nu"] = ctx.nu;
  if (command == "field") return cmd_field(run);
  if (command == "potential") return cmd_potential(run);
  if (command == "spectrum") return cmd_spectrum(run, info);
  if (command == "eigenstate") return cmd_eigenstate(run);
  if (command == "coherent") return cmd_coherent(run, info);
  if (command == "evolve") return cmd_evolve(run);
  if (command == "fidelity") return cmd_fidelity(run);
  if (command == "phase") return cmd_phase(run, info);
  if (command == "uncertainty") return cmd_uncertainty(run);
  throw ConfigError("unknown command '" + command + "'");
}

void run_and_write(const std::string& command, const RunConfig& cfg, std::ostream& stdout_stream) {
  const auto runs = resolve(cfg);
  for (const auto& c : cfg.cases) {
    if (c.values.contains("format") || c.values.contains("output")) {
      throw ConfigError("format and output cannot be set per case");
    }
  }
  const auto& first = runs.front();
  const std::string format = first.str("format");
  if (format != "csv" && format != "json") throw ConfigError("format must be csv or json");

  Table merged;
  nlohmann::json cases_info = nlohmann::json::object();
  nlohmann::json single_info;
  for (size_t i = 0; i < runs.size(); ++i) {
    nlohmann::json info;
    Table t = run_command(command, runs[i], info);
    if (runs[i].case_name.empty()) {
      merged = std::move(t);
      single_info = info;
    } else {
      cases_info[runs[i].case_name] = info;
      if (i == 0) {
        merged.axis = t.axis;
        merged.axis_values = t.axis_values;
        merged.axis_labels = t.axis_labels;
      }
      merge_into(merged, t, runs[i].case_name);
    }
  }

  // Echo the full resolved base config so the file re-ingests without defaults.
  RunConfig echo = cfg;
  echo.values = defaults();
  for (const auto& [k, v] : cfg.values) echo.values[k] = v;
  nlohmann::json meta = config_echo(echo);
  meta["command"] = command;
  if (cfg.cases.empty()) {
    for (const auto& [k, v] : single_info.items()) meta[k] = v;
  } else {
    meta["case"] = cases_info;
  }

  const std::string path = first.str("output");
  std::ofstream file;
  if (!path.empty()) {
    file.open(path);
    if (!file) throw ConfigError("cannot write '" + path + "'");
  }
  std::ostream& os = path.empty() ? stdout_stream : file;
  if (format == "csv") {
    write_csv(os, merged);
  } else {
    os << table_json(merged, meta).dump(1) << '\n';
  }
  if (!os) throw NumericalError("write failed");
}

}  // namespace susyg::cli
