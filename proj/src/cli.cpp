#include "hyperheat/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"

#include "hyperheat/error.hpp"
#include "hyperheat/kernel.hpp"

namespace hyperheat {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

std::pair<std::string, std::string> split_assignment(const std::string& line, const std::string& where) {
  auto eq = line.find('=');
  if (eq == std::string::npos) {
    throw Error(ErrorCode::UsageError, where + ": expected key=value, got '" + line + "'");
  }
  std::string key = trim(line.substr(0, eq));
  std::string value = trim(line.substr(eq + 1));
  if (key.empty()) throw Error(ErrorCode::UsageError, where + ": empty key");
  return {key, value};
}

Config read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::UsageError, "cannot read config file " + path.string());
  Config cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto [key, value] = split_assignment(line, path.string() + ":" + std::to_string(lineno));
    cfg[key] = value;
  }
  return cfg;
}

struct Flags {
  std::string experiment;
  std::optional<std::string> n, t_list, a, r_max, nodes, dt, config, out;
  std::vector<std::string> sets;
};

std::unique_ptr<CLI::App> make_app(Flags& f) {
  auto app = std::make_unique<CLI::App>("Heat flow experiments on hyperbolic space", "converge");
  app->add_option("experiment", f.experiment, "Experiment name")->required();
  app->add_option("--n", f.n, "Dimension list, e.g. 3 or 3,5");
  app->add_option("--t-list", f.t_list, "Comma separated times");
  app->add_option("--a", f.a, "Displacement of the second pole");
  app->add_option("--r-max", f.r_max, "Initial radial grid extent");
  app->add_option("--nodes", f.nodes, "Initial radial grid node count");
  app->add_option("--dt", f.dt, "Time step (0 selects it from the grid)");
  app->add_option("--set", f.sets, "Extra key=value setting (repeatable)");
  app->add_option("--config", f.config, "key=value config file");
  app->add_option("--out", f.out, "Output directory (default: results)");
  return app;
}

}  // namespace

std::string usage_text() {
  Flags f;
  auto app = make_app(f);
  std::string text = app->help();
  text += "\nExperiments:";
  for (const auto& name : experiment_names()) text += " " + name;
  text += "\nConfig keys:";
  for (const auto& key : config_keys()) text += " " + key;
  text += "\n";
  return text;
}

CliRequest parse_cli(const std::vector<std::string>& args) {
  Flags f;
  auto app = make_app(f);
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  CliRequest req;
  try {
    app->parse(reversed);
  } catch (const CLI::CallForHelp&) {
    req.help = true;
    return req;
  } catch (const CLI::ParseError& e) {
    throw Error(ErrorCode::UsageError, e.what());
  }

  req.experiment = f.experiment;
  if (f.config) req.config = read_config_file(*f.config);
  for (const auto& s : f.sets) {
    auto [key, value] = split_assignment(s, "--set");
    req.config[key] = value;
  }
  auto put = [&](const char* key, const std::optional<std::string>& v) {
    if (v) req.config[key] = *v;
  };
  put("n", f.n);
  put("t", f.t_list);
  put("a", f.a);
  put("r_max", f.r_max);
  put("nodes", f.nodes);
  put("dt", f.dt);

  std::string out = "results";
  if (auto it = req.config.find("out"); it != req.config.end()) {
    out = it->second;
    req.config.erase(it);
  }
  if (f.out) out = *f.out;
  req.out_dir = out;

  if (auto it = req.config.find("n"); it != req.config.end()) {
    std::string list = it->second;
    std::size_t start = 0;
    while (true) {
      auto comma = list.find(',', start);
      std::string item = trim(list.substr(start, comma - start));
      int n = 0;
      try {
        std::size_t used = 0;
        n = std::stoi(item, &used);
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw Error(ErrorCode::UsageError, "--n expects integers, got '" + item + "'");
      }
      KernelSpec spec(n);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  return req;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    CliRequest req = parse_cli(args);
    if (req.help) {
      out << usage_text();
      return 0;
    }
    ExperimentReport report = run_experiment(req.experiment, req.config);
    for (const auto& path : write_report(report, req.out_dir)) out << path.string() << "\n";
    return 0;
  } catch (const Error& e) {
    err << "converge: " << e.what() << "\n";
    if (e.code() == ErrorCode::UsageError || e.code() == ErrorCode::UnknownExperiment) {
      err << usage_text();
    }
    return e.exit_code();
  } catch (const std::exception& e) {
    err << "converge: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace hyperheat
