// Copyright 2026 The qexcite Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// qexcite command-line driver: steady states, sweeps, spectra, correlations,
// Wigner functions, chart curves and the acceptance report.

#include <cmath>
#include <fstream>
#include <limits>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qexcite/acceptance.hpp"
#include "qexcite/analytic.hpp"
#include "qexcite/chart.hpp"
#include "qexcite/dynamics.hpp"
#include "qexcite/observables.hpp"
#include "qexcite/sweep.hpp"

namespace {

using namespace qexcite;
using qexcite::detail::format_real;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitConfig = 2;
constexpr int kExitVerify = 3;

struct Common {
  std::string config;
  std::string out;
  std::string format = "csv";
  std::string mode = "target";
};

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text)) throw std::runtime_error("cannot write '" + path + "'");
}

SystemConfig load_system(const Common& c) { return load_config(c.config).config; }

/// A bare steady state of the requested config, for the single-state commands.
struct Solved {
  SystemConfig config;
  Liouvillian l;
  DensityMatrix rho;
  Operator c;
};

Solved solve_for_mode(const Common& opt) {
  const SystemConfig cfg = load_system(opt);
  const SteadyState ss = solve_steady(cfg);
  const HilbertSpec spec = ss.rho.spec();
  Operator op = opt.mode == "source" ? tls_lowering(spec) : fock_annihilation(spec);
  return {cfg, build_liouvillian(cfg, spec), ss.rho, std::move(op)};
}

/// Columns of equal length as CSV, or as a JSON object of arrays plus scalars.
std::string emit_table(const std::string& format, const std::vector<std::string>& names,
                       const std::vector<std::vector<double>>& columns,
                       const std::vector<std::pair<std::string, double>>& scalars = {}) {
  if (format == "json") {
    nlohmann::json j;
    for (std::size_t k = 0; k < names.size(); ++k) j[names[k]] = columns[k];
    for (const auto& [name, value] : scalars) j[name] = value;
    return j.dump(1) + "\n";
  }
  std::string out;
  for (const auto& [name, value] : scalars) out += "# " + name + "=" + format_real(value) + "\n";
  for (std::size_t k = 0; k < names.size(); ++k) out += (k ? "," : "") + names[k];
  out += '\n';
  for (std::size_t row = 0; row < columns.front().size(); ++row) {
    for (std::size_t k = 0; k < columns.size(); ++k) out += (k ? "," : "") + format_real(columns[k][row]);
    out += '\n';
  }
  return out;
}

double largest_rate(const SystemConfig& c) {
  return std::max({c.gamma_sigma + c.P_sigma + c.gamma_sigma_star + c.gamma_phi, c.gamma_a, 1e-3});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qexcite: quantum excitation of a harmonic oscillator by a two-level source"};
  app.require_subcommand(1);
  Common opt;
  auto add_io = [&](CLI::App* cmd, bool needs_config) {
    auto* cfg = cmd->add_option("--config", opt.config, "key=value configuration file");
    if (needs_config) cfg->required();
    cmd->add_option("--out", opt.out, "output path (stdout when omitted)");
    cmd->add_option("--format", opt.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };
  auto add_mode = [&](CLI::App* cmd) {
    cmd->add_option("--mode", opt.mode, "target or source")->check(CLI::IsMember({"target", "source"}));
  };

  auto* steady = app.add_subcommand("steady", "steady-state observables of one configuration");
  add_io(steady, true);

  int jobs = 1;
  auto* sweep = app.add_subcommand("sweep", "parameter sweep described by sweep.* keys");
  add_io(sweep, true);
  sweep->add_option("--jobs", jobs, "worker threads")->check(CLI::Range(1, 256));

  double w_min = NAN, w_max = NAN;
  int w_points = 2001;
  auto* spectrum = app.add_subcommand("spectrum", "stationary emission spectrum");
  add_io(spectrum, true);
  add_mode(spectrum);
  spectrum->add_option("--omega-min", w_min, "lower frequency (default from the rates)");
  spectrum->add_option("--omega-max", w_max, "upper frequency (default from the rates)");
  spectrum->add_option("--points", w_points, "frequency samples")->check(CLI::Range(2, 1000000));

  double tau_max = NAN;
  int tau_points = 201;
  auto* g2tau = app.add_subcommand("g2tau", "two-time g2(tau) by quantum regression");
  add_io(g2tau, true);
  add_mode(g2tau);
  g2tau->add_option("--tau-max", tau_max, "largest delay (default 10 / smallest rate)");
  g2tau->add_option("--points", tau_points, "delay samples")->check(CLI::Range(2, 1000000));

  double extent = NAN;
  int grid_points = 101;
  auto* wig = app.add_subcommand("wigner", "Wigner function of the target");
  add_io(wig, true);
  wig->add_option("--extent", extent, "half-width of the square phase-space window");
  wig->add_option("--points", grid_points, "samples per axis")->check(CLI::Range(2, 2001));

  double n_lo = 0.01, n_hi = 6.0, eps1 = 0.5;
  int chart_points = 200;
  auto* chart_cmd = app.add_subcommand("chart", "Fock-duo boundary and source envelopes");
  add_io(chart_cmd, false);
  chart_cmd->add_option("--n-min", n_lo, "smallest population")->check(CLI::PositiveNumber);
  chart_cmd->add_option("--n-max", n_hi, "largest population")->check(CLI::PositiveNumber);
  chart_cmd->add_option("--points", chart_points, "samples")->check(CLI::Range(2, 100000));
  chart_cmd->add_option("--epsilon-1", eps1, "input-channel fraction of the coherent source")
      ->check(CLI::Range(0.0, 1.0));

  std::string only;
  acceptance::Options verify_opt;
  auto* verify = app.add_subcommand("verify", "run the acceptance criteria");
  verify->add_option("--only", only, "suite name or criterion number");
  verify->add_option("--mutate-cascade", verify_opt.cascade_scale,
                     "scale the cascaded coupling (mutation test)")
      ->check(CLI::Range(1e-6, 1.0));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*steady) {
      ObservableRecord r = evaluate_point(load_system(opt));
      r.param1 = std::numeric_limits<double>::quiet_NaN();  // nothing swept
      const std::vector<ObservableRecord> rows{r};
      write_output(opt.out, opt.format == "json" ? to_json(rows) : to_csv(rows));
      return r.status == "ok" ? kExitOk : kExitUsage;
    }
    if (*sweep) {
      const ConfigFile file = load_config(opt.config);
      if (!file.plan) throw ConfigError(0, "no sweep.* keys in '" + opt.config + "'");
      SweepPlan plan = *file.plan;
      plan.jobs = jobs;
      const auto rows = run_sweep(plan);
      write_output(opt.out, opt.format == "json" ? to_json(rows) : to_csv(rows));
      return kExitOk;
    }
    if (*spectrum) {
      const Solved s = solve_for_mode(opt);
      const double span = 4.0 * s.config.effective_drive() +
                          std::max(std::abs(s.config.delta_sigma), std::abs(s.config.delta_a)) +
                          10.0 * largest_rate(s.config);
      const auto grid = linear_grid(std::isnan(w_min) ? -span : w_min,
                                    std::isnan(w_max) ? span : w_max, w_points);
      const Spectrum sp = emission_spectrum(s.l, s.rho, s.c, grid);
      write_output(opt.out, emit_table(opt.format, {"omega", "density"}, {sp.omega, sp.density},
                                       {{"coherent_weight", sp.coherent_weight},
                                        {"population", sp.population}}));
      return kExitOk;
    }
    if (*g2tau) {
      const Solved s = solve_for_mode(opt);
      const double slowest =
          std::max(1e-3, std::min(s.config.gamma_sigma + s.config.P_sigma, s.config.gamma_a));
      const auto grid = linear_grid(0.0, std::isnan(tau_max) ? 10.0 / slowest : tau_max, tau_points);
      const auto g = two_time_g2(s.l, s.rho, s.c, grid);
      write_output(opt.out, emit_table(opt.format, {"tau", "g2"}, {grid, g}));
      return kExitOk;
    }
    if (*wig) {
      const SteadyState ss = solve_steady(load_system(opt));
      const DensityMatrix target = reduced_density_matrix(ss.rho, Subsystem::target);
      const double n = population(ss.rho, Mode::target);
      const double half = std::isnan(extent) ? 2.0 + 1.5 * std::sqrt(n) : extent;
      const auto axis = linear_grid(-half, half, grid_points);
      const WignerField field = wigner(target, axis, axis);
      std::vector<double> xs, ps, ws;
      for (std::size_t i = 0; i < axis.size(); ++i) {
        for (std::size_t j = 0; j < axis.size(); ++j) {
          xs.push_back(axis[i]);
          ps.push_back(axis[j]);
          ws.push_back(field.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
        }
      }
      write_output(opt.out, emit_table(opt.format, {"x", "p", "W"}, {xs, ps, ws}, {{"norm", field.norm}}));
      return kExitOk;
    }
    if (*chart_cmd) {
      if (!(n_hi > n_lo)) throw ConfigError(0, "--n-max must exceed --n-min");
      const auto grid = log_grid(n_lo, n_hi, chart_points);
      const analytic::CoherentEnvelope coherent(eps1);
      std::vector<double> b2, b3, inc, coh;
      for (const double n : grid) {
        b2.push_back(chart::boundary_g2(n));
        b3.push_back(chart::boundary_gn(3, n));
        inc.push_back(n < 1.0 ? analytic::incoherent_envelope(n) : NAN);
        coh.push_back(coherent.at(n).g2);
      }
      write_output(opt.out, emit_table(opt.format,
                                       {"n_a", "boundary_g2", "boundary_g3", "incoherent_envelope",
                                        "coherent_envelope"},
                                       {grid, b2, b3, inc, coh}));
      return kExitOk;
    }
    if (*verify) {
      bool any = false, all = true;
      acceptance::run(verify_opt, only, [&](const acceptance::Result& r) {
        std::cout << acceptance::format(r) << std::endl;
        any = true;
        all = all && r.passed;
      });
      if (!any) {
        std::cerr << "no criterion matches --only " << only << "\n";
        return kExitUsage;
      }
      return all ? kExitOk : kExitVerify;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InvalidConfig& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
