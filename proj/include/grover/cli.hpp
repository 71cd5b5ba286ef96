#pragma once

// grover_lab command-line front end.  run_cli() does all the work so tests
// can drive it in-process; tools/grover_lab.cpp only forwards main().

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "grover/analysis.hpp"
#include "grover/exact_sim.hpp"
#include "grover/perturbation.hpp"
#include "grover/validate.hpp"

#if defined(_WIN32)
#include <process.h>
#define GROVER_GETPID _getpid
#else
#include <unistd.h>
#define GROVER_GETPID getpid
#endif

namespace grover::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kParameterError = 1, kNumericalFailure = 2, kValidationFailure = 3 };

/// Cap on Monte Carlo work per invocation, in amplitude updates.
inline constexpr double kMonteCarloBudget = 2e12;

using json = nlohmann::ordered_json;

/// Thrown for bad user input; maps to exit code 1.
struct ParameterError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Formatting and files

/// Shortest round-trip decimal form, so reruns produce identical bytes.
inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  // prefer the shorter form when it reads back to the same double
  char shorter[32];
  std::snprintf(shorter, sizeof shorter, "%.15g", v);
  if (std::strtod(shorter, nullptr) == v) return shorter;
  return buf;
}

struct Manifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> params;
  std::string output;

  json to_json() const {
    json j;
    j["command"] = command;
    j["version"] = kVersion;
    json p = json::object();
    for (const auto& [k, v] : params) p[k] = v;
    j["params"] = p;
    j["output"] = output;
    return j;
  }

  std::string comment_block() const {
    std::ostringstream os;
    os << "# grover_lab " << kVersion << '\n';
    os << "# command: " << command << '\n';
    for (const auto& [k, v] : params) os << "# " << k << ": " << v << '\n';
    os << "# output: " << output << '\n';
    return os.str();
  }
};

/// Writes via a temporary sibling and renames, so a failed run leaves no file.
inline void write_atomically(const std::filesystem::path& path, const std::string& text) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(GROVER_GETPID());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ParameterError("cannot open '" + tmp.string() + "' for writing");
    f << text;
    f.flush();
    if (!f) {
      std::filesystem::remove(tmp);
      throw ParameterError("write to '" + tmp.string() + "' failed");
    }
  }
  std::filesystem::rename(tmp, path);
}

/// Either prints the artifact or writes it together with a manifest sidecar
/// that also records the wall-clock duration.
inline void emit(const std::string& out_path, const std::string& text, const Manifest& manifest,
                 double seconds, std::ostream& out) {
  if (out_path.empty() || out_path == "-") {
    out << text;
    return;
  }
  write_atomically(out_path, text);
  json side = manifest.to_json();
  side["duration_seconds"] = seconds;
  write_atomically(out_path + ".manifest.json", side.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Grids and config

struct GridSpec {
  std::string values;  // comma separated; wins over the range
  double start = 0.0;
  double stop = 0.0;
  double step = 0.0;
};

inline std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    const auto e = item.find_last_not_of(" \t");
    const std::string token = item.substr(b, e - b + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size()) throw ParameterError(what + ": '" + token + "' is not a number");
    out.push_back(v);
  }
  return out;
}

inline std::vector<double> make_grid(const GridSpec& g, const std::string& what) {
  std::vector<double> out;
  if (!g.values.empty()) {
    out = parse_list(g.values, what);
  } else {
    if (!(g.step > 0.0)) throw ParameterError(what + ": step must be > 0");
    if (g.stop < g.start) throw ParameterError(what + ": stop < start gives an empty grid");
    const double slack = 1e-9 * g.step;
    for (long long i = 0;; ++i) {
      const double v = g.start + static_cast<double>(i) * g.step;
      if (v > g.stop + slack) break;
      out.push_back(v);
      if (out.size() > 10000000) throw ParameterError(what + ": grid exceeds 10^7 points");
    }
  }
  if (out.empty()) throw ParameterError(what + ": empty grid");
  return out;
}

/// key=value lines; '#' starts a comment.
inline std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParameterError("cannot read config file '" + path + "'");
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int number = 0;
  while (std::getline(f, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParameterError(path + ":" + std::to_string(number) + ": expected key=value");
    }
    auto trim = [](std::string s) {
      const auto l = s.find_first_not_of(" \t\r");
      if (l == std::string::npos) return std::string{};
      const auto r = s.find_last_not_of(" \t\r");
      return s.substr(l, r - l + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParameterError(path + ":" + std::to_string(number) + ": empty key");
    out.emplace_back(key, value);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Commands

struct Common {
  std::string out;
  bool pi_units = false;
  bool force_even = false;
  std::string config;
};

inline double angle_input(double v, const Common& c) { return c.pi_units ? v * std::numbers::pi : v; }

inline std::vector<std::pair<std::string, std::string>> collect_params(const CLI::App& sub) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help" || name == "out" || name == "config") continue;
    std::string value;
    if (opt->count() > 0) {
      value = opt->as<std::string>();
      if (opt->get_type_size() == 0) value = "true";
    } else {
      value = opt->get_default_str();
      if (opt->get_type_size() == 0) value = "false";
    }
    out.emplace_back(name, value);
  }
  return out;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Grover search under per-qubit dephasing", "grover_lab"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  Common common;
  auto add_common = [&](CLI::App* sub, bool with_out) {
    if (with_out) sub->add_option("-o,--out", common.out, "output file ('-' or empty for stdout)");
    sub->add_flag("--pi-units", common.pi_units, "angles given as multiples of pi");
    sub->add_flag("--force-even-order", common.force_even, "allow even truncation orders");
    sub->add_option("--config", common.config, "key=value file with option defaults");
  };

  // ideal
  int ideal_n = 8;
  int ideal_M = 12;
  auto* ideal = app.add_subcommand("ideal", "noiseless success probability per iteration");
  ideal->add_option("--n", ideal_n, "qubit count");
  ideal->add_option("--M", ideal_M, "Grover iterations");
  add_common(ideal, true);

  // mc / exact share the p grid
  int sim_n = 8;
  int sim_M = 12;
  std::uint64_t trials = 20000;
  std::uint64_t seed = 20011112;
  GridSpec p_grid{"", 5e-4, 5.5e-3, 5e-4};
  auto add_sim = [&](CLI::App* sub) {
    sub->add_option("--n", sim_n, "qubit count (2..12)");
    sub->add_option("--M", sim_M, "Grover iterations");
    sub->add_option("--p", p_grid.values, "comma-separated error probabilities (overrides range)");
    sub->add_option("--p-start", p_grid.start, "first p of the range");
    sub->add_option("--p-stop", p_grid.stop, "last p of the range");
    sub->add_option("--p-step", p_grid.step, "range step");
    add_common(sub, true);
  };
  auto* mc = app.add_subcommand("mc", "Monte Carlo trajectories over a p grid");
  add_sim(mc);
  mc->add_option("--trials", trials, "trajectories per grid point");
  mc->add_option("--seed", seed, "RNG seed");
  auto* exact = app.add_subcommand("exact", "exact dephasing channel over a p grid");
  add_sim(exact);

  // series
  double series_theta = std::numbers::pi / 4.0;
  double series_x = 0.0;
  int order = kDefaultOrder;
  auto* series = app.add_subcommand("series", "F_h, C_h and the truncated success probability");
  series->add_option("--theta", series_theta, "Theta (radians, or multiples of pi with --pi-units)");
  series->add_option("--x", series_x, "expected error count 2Mnp");
  series->add_option("--order", order, "truncation order (0..6)");
  add_common(series, true);

  // sweep
  std::string target = "xc";
  GridSpec sweep_grid{"", 0.3, 0.999, 0.01};
  double P_th = 0.5;
  int sweep_n = 8;
  double sweep_tol = 1e-4;
  auto* sweep = app.add_subcommand("sweep", "threshold and critical-point sweeps");
  sweep->add_option("--target", target, "xc | theta-th-x | theta-th-p")
      ->check(CLI::IsMember({"xc", "theta-th-x", "theta-th-p"}));
  sweep->add_option("--values", sweep_grid.values, "comma-separated grid (overrides range)");
  sweep->add_option("--start", sweep_grid.start, "first grid value");
  sweep->add_option("--stop", sweep_grid.stop, "last grid value");
  sweep->add_option("--step", sweep_grid.step, "grid step");
  sweep->add_option("--P-th", P_th, "success threshold (theta-th-x, theta-th-p)");
  sweep->add_option("--n", sweep_n, "qubit count (theta-th-p)");
  sweep->add_option("--order", order, "truncation order");
  sweep->add_option("--tol", sweep_tol, "x_c bisection tolerance (xc)");
  add_common(sweep, true);

  // coupling
  double coupling_angle = 0.0;
  auto* coupling = app.add_subcommand("coupling", "error probability from a coupling angle");
  coupling->add_option("--angle", coupling_angle, "dimensionless coupling angle")->required();
  add_common(coupling, false);

  // validate
  std::string level = "quick";
  std::string fault;
  auto* validate = app.add_subcommand("validate", "run the self-check suites");
  validate->add_option("--level", level, "quick | full")->check(CLI::IsMember({"quick", "full"}));
  validate->add_option("--inject-fault", fault, "corrupt a closed form (harness use: f3)");
  validate->add_option("--seed", seed, "seed for sampled suites");
  add_common(validate, false);

  // A config file supplies defaults: its pairs become options placed before
  // the user's own, and the last occurrence of an option wins.
  std::vector<std::string> args(argv + 1, argv + argc);
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string path;
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    if (path.empty()) continue;
    std::size_t sub_at = args.size();
    for (std::size_t j = 0; j < args.size(); ++j) {
      if (app.get_subcommand_no_throw(args[j]) != nullptr) {
        sub_at = j;
        break;
      }
    }
    if (sub_at == args.size()) {
      err << "error: --config needs a subcommand\n";
      return kParameterError;
    }
    try {
      std::vector<std::string> injected;
      for (const auto& [k, v] : read_config(path)) injected.push_back("--" + k + "=" + v);
      args.insert(args.begin() + static_cast<std::ptrdiff_t>(sub_at) + 1, injected.begin(),
                  injected.end());
    } catch (const ParameterError& e) {
      err << "error: " << e.what() << '\n';
      return kParameterError;
    }
    break;
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "error: " << e.what() << '\n';
    return kParameterError;
  }

  CLI::App* sub = app.get_subcommands().front();
  Manifest manifest{sub->get_name(), collect_params(*sub), common.out.empty() ? "-" : common.out};
  const auto started = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  };

  try {
    if (sub == ideal) {
      if (ideal_n < 2 || ideal_n > kMaxStateQubits) {
        throw ParameterError("--n must be in [2, " + std::to_string(kMaxStateQubits) + "]");
      }
      if (ideal_M < 0) throw ParameterError("--M must be >= 0");
      std::ostringstream csv;
      csv << manifest.comment_block() << "step,probability\n";
      for (int m = 0; m <= ideal_M; ++m) {
        csv << m << ',' << fmt(t0_element(ideal_n, m)) << '\n';
      }
      emit(common.out, csv.str(), manifest, elapsed(), out);
      return kOk;
    }

    if (sub == mc || sub == exact) {
      const auto grid = make_grid(p_grid, "p grid");
      for (double p : grid) SimConfig{sim_n, sim_M, p, trials, seed}.validate();
      std::ostringstream csv;
      csv << manifest.comment_block();
      if (sub == mc) {
        const double work = static_cast<double>(trials) * std::ldexp(1.0, sim_n) * sim_n * 2.0 *
                            sim_M * static_cast<double>(grid.size());
        if (work > kMonteCarloBudget) {
          throw ParameterError("trials * 2^n * 2Mn * grid size exceeds the Monte Carlo budget");
        }
        csv << "p,x,mean,stderr\n";
        for (double p : grid) {
          const SimConfig cfg{sim_n, sim_M, p, trials, seed};
          const auto e = monte_carlo(cfg);
          csv << fmt(p) << ',' << fmt(cfg.x()) << ',' << fmt(e.mean) << ',' << fmt(e.std_error) << '\n';
        }
      } else {
        csv << "p,x,probability\n";
        for (double p : grid) {
          const SimConfig cfg{sim_n, sim_M, p, 1, seed};
          csv << fmt(p) << ',' << fmt(cfg.x()) << ',' << fmt(evolve_density(cfg).back()) << '\n';
        }
      }
      emit(common.out, csv.str(), manifest, elapsed(), out);
      return kOk;
    }

    if (sub == series) {
      const double theta = angle_input(series_theta, common);
      detail::require_theta(theta, "series");
      const auto table = series_table(theta, order);
      const auto value = prob_series_with_slope(theta, series_x, order, common.force_even);
      json j;
      j["manifest"] = manifest.to_json();
      j["Theta"] = theta;
      j["x"] = series_x;
      j["order"] = order;
      j["F"] = table.F;
      j["C"] = table.C;
      j["P_rob"] = value.value;
      j["reliable"] = value.reliable;
      emit(common.out, j.dump(2) + "\n", manifest, elapsed(), out);
      return kOk;
    }

    if (sub == sweep) {
      const auto grid = make_grid(sweep_grid, "sweep grid");
      detail::require_series_args(0.0, order, common.force_even, "sweep");
      std::vector<SweepRecord> rows;
      if (target == "xc") {
        if (!(sweep_tol > 0.0)) throw ParameterError("--tol must be > 0");
        for (double P : grid) require_threshold(P, "sweep");
        rows = sweep_x_critical(grid, order, sweep_tol, common.force_even);
      } else if (target == "theta-th-x") {
        require_threshold(P_th, "sweep");
        for (double x : grid) detail::require_series_args(x, order, common.force_even, "sweep");
        rows = sweep_theta_th_x(grid, P_th, order, common.force_even);
      } else {
        require_threshold(P_th, "sweep");
        for (double p : grid) require_p(p, sweep_n, "sweep");
        rows = sweep_theta_th_p(grid, P_th, sweep_n, order, common.force_even);
      }
      std::ostringstream csv;
      csv << manifest.comment_block() << "input,theta,theta_over_pi,critical,probability,status,iterations,reliable\n";
      bool failed = false;
      for (const auto& r : rows) {
        failed = failed || r.status == RootStatus::not_converged;
        csv << fmt(r.input) << ',' << fmt(r.theta) << ',' << fmt(r.theta / std::numbers::pi) << ','
            << fmt(r.critical) << ',' << fmt(r.probability) << ',' << to_string(r.status) << ','
            << r.iterations << ',' << (r.reliable ? "true" : "false") << '\n';
      }
      emit(common.out, csv.str(), manifest, elapsed(), out);
      if (failed) {
        err << "error: at least one grid point did not converge\n";
        return kNumericalFailure;
      }
      return kOk;
    }

    if (sub == coupling) {
      json j;
      j["angle"] = angle_input(coupling_angle, common);
      j["p"] = dephasing_p_from_coupling(angle_input(coupling_angle, common));
      out << j.dump(2) << '\n';
      return kOk;
    }

    if (sub == validate) {
      ValidateOptions opt;
      opt.level = level == "full" ? ValidateLevel::full : ValidateLevel::quick;
      opt.seed = seed;
      if (!fault.empty()) opt.closed_forms = inject_fault(opt.closed_forms, fault);
      const auto results = run_validation(opt);
      bool ok = true;
      for (const auto& r : results) {
        ok = ok && r.passed;
        out << (r.passed ? "PASS " : "FAIL ") << r.name << "  worst=" << fmt(r.worst)
            << " tol=" << fmt(r.tolerance) << " at [" << r.detail << "]\n";
      }
      out << (ok ? "all suites passed\n" : "validation failed\n");
      return ok ? kOk : kValidationFailure;
    }
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return kParameterError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kParameterError;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kParameterError;
  } catch (const std::length_error& e) {
    err << "error: " << e.what() << '\n';
    return kParameterError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalFailure;
  }
  return kOk;
}

}  // namespace grover::cli
