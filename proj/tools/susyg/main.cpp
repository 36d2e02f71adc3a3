#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "susyg/errors.hpp"

namespace {

struct FlagSpec {
  const char* flag;
  const char* key;
  const char* help;
};

const FlagSpec kFlags[] = {
    {"--omega", "omega", "oscillator frequency"},
    {"--k", "k_wave", "wave number k"},
    {"--epsilon", "epsilon", "factorization energy"},
    {"--w0", "w0", "w-function constant (>= 0)"},
    {"--x-min", "x_min", "grid start"},
    {"--x-max", "x_max", "grid end"},
    {"--n-points", "n_points", "grid points"},
    {"--w-method", "w_method", "integral | differential"},
    {"--family", "family", "bgcs | gpcs | standard"},
    {"--ladder", "ladder", "diagonal | nondiagonal"},
    {"--extremal", "extremal_index", "GPCS extremal index"},
    {"--n-max", "n_max", "spectrum size / coherent truncation"},
    {"--levels", "levels", "eigenstates, e.g. nu,0,1"},
    {"--r", "r", "|alpha| list or start:stop:count"},
    {"--theta", "theta", "arg alpha list, e.g. 0,pi/3"},
    {"--t-min", "t_min", "first time"},
    {"--t-max", "t_max", "last time"},
    {"--t-points", "t_points", "number of times"},
    {"--f-values", "f_values", "f overrides n:value,..."},
    {"--roots", "roots", "levels with f = 0"},
    {"--what", "what", "observables | probabilities"},
    {"--format", "format", "csv | json"},
    {"--output,-o", "output", "output file (stdout if empty)"},
    {"--tol-kernel", "tol_kernel", "kernel tolerance"},
    {"--tol-derived", "tol_derived", "derived tolerance"},
};

}  // namespace

int main(int argc, char** argv) {
  using namespace susyg;
  CLI::App app{"Confluent SUSY bilayer graphene toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> sets;
  std::map<std::string, std::string> flag_values;
  std::map<std::string, CLI::Option*> flag_opts;

  const std::map<std::string, std::string> help = {
      {"field", "magnetic field B(x), vector potential A(x) and w(x)"},
      {"potential", "V0(x) and V2(x)"},
      {"spectrum", "energy table and spacing class"},
      {"eigenstate", "eigenspinors, densities and currents"},
      {"coherent", "coherent-state densities/currents or P_n"},
      {"evolve", "time-dependent densities"},
      {"fidelity", "F(t)"},
      {"phase", "cyclic analysis and geometric phase vs r"},
      {"uncertainty", "quadrature uncertainty product vs r"},
      {"validate", "run the invariant suites"},
  };

  std::vector<std::pair<std::string, CLI::App*>> subs;
  for (const auto& name : cli::command_names()) {
    auto* sub = app.add_subcommand(name, help.at(name));
    sub->add_option("-c,--config", config_path, "INI config or a JSON output file");
    sub->add_option("--set", sets, "key=value override (repeatable)");
    for (const auto& f : kFlags) {
      auto* opt = sub->add_option(f.flag, flag_values[std::string(f.key) + "@" + name], f.help);
      flag_opts[std::string(f.key) + "@" + name] = opt;
    }
    subs.push_back({name, sub});
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  std::string command;
  for (const auto& [name, sub] : subs) {
    if (sub->parsed()) command = name;
  }

  try {
    cli::RunConfig cfg;
    if (!config_path.empty()) cfg = cli::load_config_file(config_path);
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
      cfg.values[s.substr(0, eq)] = s.substr(eq + 1);
    }
    for (const auto& f : kFlags) {
      const std::string id = std::string(f.key) + "@" + command;
      if (flag_opts[id]->count() > 0) cfg.values[f.key] = flag_values[id];
    }
    cli::check_keys(cfg.values);

    if (command == "validate") {
      const auto runs = cli::resolve(cfg);
      return cli::run_validate(runs.front(), std::cout) ? 0 : 2;
    }
    cli::run_and_write(command, cfg, std::cout);
    return 0;
  } catch (const DomainError& e) {
    std::cerr << "susyg " << command << ": " << e.what() << '\n';
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "susyg " << command << ": numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "susyg " << command << ": " << e.what() << '\n';
    return 2;
  }
}
