// Experiment front end shared by the CLI: parameter resolution, sweeps,
// optimizer and Monte Carlo validation tables, figure reproduction, the
// qualitative self-check suite, and CSV/meta/plot artifact emission.
#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "arqlink/mc.hpp"
#include "arqlink/model.hpp"
#include "arqlink/optimize.hpp"

namespace arqlink::experiments {

enum class Scale { linear, geometric };

struct Grid {
  double from;
  double to;
  int points;
  Scale scale;

  std::vector<double> values() const;
};

/// Fully resolved run parameters. Field defaults are the CLI defaults.
struct Params {
  double lambda = 0.01;
  double alpha = 4.0;
  double r0 = 1.0;
  double power_ratio = 1.0;
  double epsilon = 0.01;
  int m = 1;
  double beta = 1.0;
  double delta = 0.35;
  double p_tx = 0.0979;
  double p_rx = 0.1122;
  std::uint64_t seed = 1;
  std::uint64_t samples = 100000;
  double radius = 0.0;  ///< 0 = derive from beta and the network
  int threads = 1;
  int m_max = 50;
  // sweep axis
  std::string axis = "beta";
  double from = 0.1;
  double to = 100.0;
  int points = 200;
  std::string scale = "geometric";

  NetworkParams net() const;
  ProtocolParams proto() const;
  PowerModel power() const;
  mc::McConfig mc_config(double beta_for_radius) const;
};

/// Parse a flat key=value config file. Lines starting with '#' and blank
/// lines are skipped. Returns raw key/value pairs.
std::map<std::string, std::string> read_config(
    const std::filesystem::path& path);

/// Apply key=value overrides onto a base parameter set. Unknown keys and
/// malformed values throw. The bookkeeping keys `version`, `command` and
/// `figure` are accepted and ignored here.
Params apply_overrides(const Params& base,
                       const std::map<std::string, std::string>& kv);

/// Figure-specific parameter defaults (T1 uses epsilon=0.02, the EE figures
/// epsilon=0.001 and m=5, ...).
Params figure_defaults(const std::string& figure_id);

/// Shortest round-trip decimal formatting used for every emitted number.
std::string format_value(double v);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

struct FigureResult {
  Table data;
  /// Second projection, only for EE4 (written as data-lambda.csv).
  std::optional<Table> data_lambda;
  std::string plot_script;
};

Table sweep_table(const Params& params);
Table optimize_throughput_table(const Params& params, Optimum& out);
Table optimize_ee_table(const Params& params, Optimum& out);
/// Closed forms against the Monte Carlo oracle at one operating point.
/// Throws when the conditional-attempts estimate has no data.
Table validate_mc_table(const Params& params);
FigureResult reproduce_figure(const std::string& figure_id,
                              const Params& params);

struct CheckResult {
  std::string name;
  bool pass;
  std::string detail;
};

/// Qualitative figure-shape assertions (unimodality, monotonicity,
/// extreme-case agreement, curve crossing, error saturation).
std::vector<CheckResult> self_check(const Params& params);

/// Write data.csv (and data-lambda.csv when present), meta.txt and plot.gp
/// under out_dir. meta.txt is itself a valid config file.
void write_artifacts(const std::filesystem::path& out_dir,
                     const std::string& command, const std::string& figure_id,
                     const Params& params, const Table& data,
                     const std::optional<Table>& data_lambda,
                     const std::string& plot_script);

std::string version();

}  // namespace arqlink::experiments
