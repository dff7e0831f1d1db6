// Command line front end: sweeps, the two optimizers, Monte Carlo
// validation, figure reproduction and the qualitative self-check.
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "arqlink/experiments.hpp"

namespace ax = arqlink::experiments;

namespace {

struct FlagSet {
  std::map<std::string, std::string> values;   // config-key -> raw value
  std::vector<std::pair<CLI::Option*, std::string>> tracked;
  std::string config_path;
  std::string out_dir = "arqlink-out";

  void add_common(CLI::App* cmd) {
    add(cmd, "--lambda", "lambda", "interferer density, nodes/m^2");
    add(cmd, "--alpha", "alpha", "path-loss exponent (> 2)");
    add(cmd, "--r0", "r0", "reference link distance, m");
    add(cmd, "--power-ratio", "power_ratio",
        "own over interferer transmit power");
    add(cmd, "--epsilon", "epsilon", "drop-probability requirement in (0,1)");
    add(cmd, "--m", "m", "retransmission cap (>= 0)");
    add(cmd, "--beta", "beta", "SIR decoding threshold (linear)");
    add(cmd, "--delta", "delta", "amplifier drain efficiency in (0,1]");
    add(cmd, "--p-tx", "p_tx", "transmission circuit power, W");
    add(cmd, "--p-rx", "p_rx", "reception circuit power, W");
    add(cmd, "--seed", "seed", "Monte Carlo seed");
    add(cmd, "--samples", "samples", "Monte Carlo episodes");
    add(cmd, "--radius", "radius", "field truncation radius, m (0 = auto)");
    add(cmd, "--threads", "threads", "Monte Carlo worker count");
    add(cmd, "--m-max", "m_max", "upper bound of the cap sweep");
    cmd->add_option("--config", config_path,
                    "key=value config file (flags take precedence)");
    cmd->add_option("--out", out_dir, "output directory for artifacts");
  }

  void add(CLI::App* cmd, const std::string& flag, const std::string& key,
           const std::string& help) {
    auto* opt = cmd->add_option(flag, values[key], help);
    tracked.emplace_back(opt, key);
  }

  void add_sweep(CLI::App* cmd) {
    add(cmd, "--axis", "axis",
        "swept variable (lambda|alpha|r0|power_ratio|epsilon|m|beta)");
    add(cmd, "--from", "from", "grid start");
    add(cmd, "--to", "to", "grid end");
    add(cmd, "--points", "points", "grid point count");
    add(cmd, "--scale", "scale", "grid scale (linear|geometric)");
  }

  std::map<std::string, std::string> given() const {
    std::map<std::string, std::string> kv;
    for (const auto& [opt, key] : tracked) {
      if (opt->count() > 0) kv[key] = values.at(key);
    }
    return kv;
  }
};

ax::Params resolve_params(const FlagSet& flags, const ax::Params& base,
                           const std::string& command,
                           const std::string& figure_id) {
  ax::Params p = base;
  if (!flags.config_path.empty()) {
    const auto kv = ax::read_config(flags.config_path);
    const auto check = [&](const std::string& key, const std::string& want) {
      const auto it = kv.find(key);
      if (it != kv.end() && !want.empty() && it->second != want)
        throw std::invalid_argument("config " + key + "=" + it->second +
                                    " does not match invoked " + want);
    };
    check("command", command);
    check("figure", figure_id);
    p = ax::apply_overrides(p, kv);
  }
  return ax::apply_overrides(p, flags.given());
}

void print_optimum(const char* objective_name, const arqlink::Optimum& opt) {
  std::printf("m_star = %d\n", opt.m_star);
  std::printf("beta_star = %s\n", ax::format_value(opt.beta_star).c_str());
  std::printf("%s = %s\n", objective_name,
              ax::format_value(opt.objective).c_str());
  std::printf("constraint_residual = %s\n",
              ax::format_value(opt.constraint_residual).c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "arqlink: analytical model, optimizers and Monte Carlo checks for an "
      "interference-limited link with capped retransmissions"};
  app.require_subcommand(1);

  FlagSet sweep_flags, opt_t_flags, opt_ee_flags, validate_flags, fig_flags,
      check_flags;

  auto* cmd_sweep =
      app.add_subcommand("sweep", "sweep one variable over a grid and tabulate "
                                  "every closed-form quantity");
  sweep_flags.add_common(cmd_sweep);
  sweep_flags.add_sweep(cmd_sweep);

  auto* cmd_opt_t = app.add_subcommand(
      "optimize-throughput",
      "maximize throughput subject to the drop-probability constraint");
  opt_t_flags.add_common(cmd_opt_t);

  auto* cmd_opt_ee = app.add_subcommand(
      "optimize-ee",
      "maximize energy efficiency subject to the drop-probability constraint");
  opt_ee_flags.add_common(cmd_opt_ee);

  auto* cmd_validate = app.add_subcommand(
      "validate-mc", "compare the closed forms against the Monte Carlo oracle");
  validate_flags.add_common(cmd_validate);

  std::string figure_id;
  auto* cmd_figure = app.add_subcommand(
      "reproduce-figure",
      "emit the data behind one result figure "
      "(E1 E2 E3 E4 T1 T2 EE1 EE2 EE3 EE4)");
  cmd_figure->add_option("figure", figure_id, "figure id")->required();
  fig_flags.add_common(cmd_figure);

  auto* cmd_check = app.add_subcommand(
      "self-check", "run the qualitative figure-shape assertions");
  check_flags.add_common(cmd_check);

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_sweep->parsed()) {
      const ax::Params p =
          resolve_params(sweep_flags, ax::Params{}, "sweep", "");
      const ax::Table t = ax::sweep_table(p);
      ax::write_artifacts(sweep_flags.out_dir, "sweep", "", p, t, std::nullopt,
                           "# gnuplot script\nset datafile separator \",\"\n"
                           "set key autotitle columnhead\nset key outside\n"
                           "set xlabel \"" + p.axis + "\"\n" +
                           (p.scale == "geometric" ? "set logscale x\n" : "") +
                           "plot for [col=2:" + std::to_string(t.columns.size()) +
                           "] \"data.csv\" using 1:col with lines\n");
      std::printf("wrote %s (%zu rows)\n",
                  (std::filesystem::path(sweep_flags.out_dir) / "data.csv")
                      .string().c_str(),
                  t.rows.size());
    } else if (cmd_opt_t->parsed()) {
      const ax::Params p = resolve_params(opt_t_flags, ax::Params{},
                                           "optimize-throughput", "");
      arqlink::Optimum opt{};
      const ax::Table t = ax::optimize_throughput_table(p, opt);
      ax::write_artifacts(
          opt_t_flags.out_dir, "optimize-throughput", "", p, t, std::nullopt,
          "# gnuplot script\nset datafile separator \",\"\n"
          "set key autotitle columnhead\nset xlabel \"m\"\n"
          "set ylabel \"throughput (bits/s/Hz)\"\n"
          "plot \"data.csv\" using 1:3 with linespoints\n");
      print_optimum("T_star", opt);
    } else if (cmd_opt_ee->parsed()) {
      const ax::Params p =
          resolve_params(opt_ee_flags, ax::Params{}, "optimize-ee", "");
      arqlink::Optimum opt{};
      const ax::Table t = ax::optimize_ee_table(p, opt);
      ax::write_artifacts(
          opt_ee_flags.out_dir, "optimize-ee", "", p, t, std::nullopt,
          "# gnuplot script\nset datafile separator \",\"\n"
          "set key autotitle columnhead\nset xlabel \"m\"\n"
          "set ylabel \"energy efficiency (bits/s/Hz/W)\"\n"
          "plot \"data.csv\" using 1:3 with linespoints\n");
      print_optimum("EE_star", opt);
    } else if (cmd_validate->parsed()) {
      const ax::Params p =
          resolve_params(validate_flags, ax::Params{}, "validate-mc", "");
      const ax::Table t = ax::validate_mc_table(p);
      ax::write_artifacts(
          validate_flags.out_dir, "validate-mc", "", p, t, std::nullopt,
          "# gnuplot script\nset datafile separator \",\"\n"
          "set ylabel \"value\"\nset xtics rotate by -30\n"
          "plot \"data.csv\" using 0:2:xticlabels(1) with points"
          " title \"analytic\", \"data.csv\" using 0:3:4 with yerrorbars"
          " title \"monte carlo\"\n");
      for (const auto& row : t.rows) {
        std::printf("%-28s analytic=%-22s mc=%-22s se=%-14s z=%s\n",
                    row[0].c_str(), row[1].c_str(), row[2].c_str(),
                    row[3].c_str(), row[4].c_str());
      }
    } else if (cmd_figure->parsed()) {
      const ax::Params p = resolve_params(
          fig_flags, ax::figure_defaults(figure_id), "reproduce-figure",
          figure_id);
      const ax::FigureResult fig = ax::reproduce_figure(figure_id, p);
      ax::write_artifacts(fig_flags.out_dir, "reproduce-figure", figure_id, p,
                           fig.data, fig.data_lambda, fig.plot_script);
      std::printf("wrote %s (%zu rows)\n",
                  (std::filesystem::path(fig_flags.out_dir) / "data.csv")
                      .string().c_str(),
                  fig.data.rows.size());
      if (fig.data_lambda.has_value()) {
        std::printf("wrote %s (%zu rows)\n",
                    (std::filesystem::path(fig_flags.out_dir) /
                     "data-lambda.csv").string().c_str(),
                    fig.data_lambda->rows.size());
      }
    } else if (cmd_check->parsed()) {
      const ax::Params p =
          resolve_params(check_flags, ax::Params{}, "self-check", "");
      const auto checks = ax::self_check(p);
      bool all_pass = true;
      for (const auto& c : checks) {
        std::printf("[%s] %s: %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                    c.detail.c_str());
        all_pass = all_pass && c.pass;
      }
      return all_pass ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "arqlink: error: %s\n", e.what());
    return 1;
  }
  return 0;
}
