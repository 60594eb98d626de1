// Command-line front end: run / sweep / analyze / presets.
#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <optional>

#include "fsilab/analysis.hpp"
#include "fsilab/csv.hpp"
#include "fsilab/errors.hpp"
#include "fsilab/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDivergence = 2;
constexpr int kExitConfig = 3;
constexpr int kExitSolver = 4;

std::vector<std::pair<std::string, std::string>> parse_sets(const std::vector<std::string>& sets) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw fsilab::ConfigError("--set expects key=value, got '" + s + "'");
    out.emplace_back(s.substr(0, eq), s.substr(eq + 1));
  }
  return out;
}

int status_to_exit(const std::string& status) {
  if (status == "ok") return kExitOk;
  if (status == "divergence") return kExitDivergence;
  return kExitSolver;
}

fsilab::TimeSeries series_from_csv(const std::string& path, const std::string& channel) {
  const fsilab::Table table = fsilab::read_csv(path);
  fsilab::TimeSeries series;
  series.label = channel;
  series.t = table.column("t");
  series.y = table.column(channel);
  return series;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fsilab: partitioned FSI laboratory for Robin-coupling schemes"};
  app.require_subcommand(1);

  std::string preset, config_path, out_dir = "out";
  std::vector<std::string> sets;
  int workers = 1;
  bool seedless = false;

  auto add_scenario_flags = [&](CLI::App* cmd) {
    cmd->add_option("--preset", preset, "preset name (see `fsilab presets`)");
    cmd->add_option("--config", config_path, "flat key=value config file");
    cmd->add_option("--set", sets, "override, key=value (repeatable)")->take_all();
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_flag("--seedless", seedless,
                  "assert the run uses no random number generator anywhere");
  };

  auto* run_cmd = app.add_subcommand("run", "run one scenario");
  add_scenario_flags(run_cmd);

  auto* sweep_cmd = app.add_subcommand("sweep", "run a cartesian parameter sweep");
  add_scenario_flags(sweep_cmd);
  std::vector<std::string> grid_args;
  double phase_period = 0.0;
  sweep_cmd->add_option("--grid", grid_args, "grid axis, key=v1,v2,... (repeatable)")
      ->take_all()
      ->required();
  sweep_cmd->add_option("--workers", workers, "concurrent sweep cells");
  sweep_cmd->add_option("--phase-period", phase_period,
                        "forcing period for phase-lag summary (0 disables)");

  auto* analyze_cmd = app.add_subcommand("analyze", "post-hoc metrics on an existing CSV");
  std::string csv_path, channel = "ux_A", against_path, channel2;
  double band = 0.02, settle_final = std::nan(""), period = 0.0;
  bool want_frequency = false;
  analyze_cmd->add_option("--csv", csv_path, "series CSV")->required();
  analyze_cmd->add_option("--channel", channel, "channel name (default ux_A)");
  analyze_cmd->add_option("--settling-band", band, "settling band fraction (default 0.02)");
  analyze_cmd->add_option("--final-value", settle_final, "known steady value for settling");
  analyze_cmd->add_flag("--frequency", want_frequency, "report dominant frequency");
  analyze_cmd->add_option("--phase-against", against_path, "second CSV for phase lag");
  analyze_cmd->add_option("--channel2", channel2, "channel in the second CSV");
  analyze_cmd->add_option("--period", period, "forcing period for phase lag");

  auto* presets_cmd = app.add_subcommand("presets", "list or dump scenario presets");
  std::string dump_name;
  presets_cmd->add_option("--dump", dump_name, "print the full config of one preset");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed() || sweep_cmd->parsed()) {
      if (preset.empty() && config_path.empty())
        throw fsilab::ConfigError("one of --preset or --config is required");
      const std::string source = config_path.empty() ? preset : config_path;
      const fsilab::ScenarioSpec spec = fsilab::load_scenario(source, parse_sets(sets));

      if (run_cmd->parsed()) {
        const fsilab::RunOutputs out = fsilab::run_scenario(spec, out_dir, seedless);
        std::cout << "status: " << out.manifest.status << "\n";
        for (const auto& o : out.manifest.outputs)
          std::cout << "  " << o.path << "  " << o.digest << "\n";
        if (!out.manifest.error_message.empty())
          std::cerr << "error: " << out.manifest.error_message << "\n";
        return status_to_exit(out.manifest.status);
      }

      std::vector<std::pair<std::string, std::vector<std::string>>> grid;
      for (const auto& axis : grid_args) {
        const auto eq = axis.find('=');
        if (eq == std::string::npos)
          throw fsilab::ConfigError("--grid expects key=v1,v2,..., got '" + axis + "'");
        std::vector<std::string> values;
        std::string rest = axis.substr(eq + 1);
        std::size_t pos = 0;
        while (pos != std::string::npos) {
          const auto comma = rest.find(',', pos);
          values.push_back(rest.substr(pos, comma == std::string::npos ? comma : comma - pos));
          pos = comma == std::string::npos ? comma : comma + 1;
        }
        grid.emplace_back(axis.substr(0, eq), std::move(values));
      }
      const fsilab::SweepResult result =
          fsilab::sweep_scenario(spec, grid, out_dir, workers, phase_period, seedless);
      std::cout << "summary: " << result.summary_path << "\n";
      int exit_code = kExitOk;
      for (const auto& cell : result.cells)
        if (cell.status != "ok") exit_code = std::max(exit_code, status_to_exit(cell.status));
      return exit_code;
    }

    if (analyze_cmd->parsed()) {
      const fsilab::TimeSeries series = series_from_csv(csv_path, channel);
      std::optional<double> final_value;
      if (!std::isnan(settle_final)) final_value = settle_final;
      try {
        std::cout << "settling_time," << fsilab::format_double(
                         fsilab::settling_time(series, final_value, band)) << "\n";
      } catch (const fsilab::NotSettledError&) {
        std::cout << "settling_time,nan\n";
      }
      if (want_frequency)
        std::cout << "dominant_frequency,"
                  << fsilab::format_double(fsilab::dominant_frequency(series)) << "\n";
      if (!against_path.empty()) {
        if (!(period > 0.0))
          throw fsilab::ConfigError("--phase-against requires --period");
        const fsilab::TimeSeries other =
            series_from_csv(against_path, channel2.empty() ? channel : channel2);
        std::cout << "phase_lag," << fsilab::format_double(fsilab::phase_lag(series, other, period))
                  << "\n";
      }
      return kExitOk;
    }

    if (presets_cmd->parsed()) {
      if (!dump_name.empty()) {
        std::cout << fsilab::serialize_scenario(fsilab::preset_scenario(dump_name));
      } else {
        for (const auto& name : fsilab::preset_names()) std::cout << name << "\n";
      }
      return kExitOk;
    }
  } catch (const fsilab::ConfigError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return kExitConfig;
  } catch (const fsilab::DivergenceError& err) {
    std::cerr << "divergence: " << err.what() << "\n";
    return kExitDivergence;
  } catch (const std::invalid_argument& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitSolver;
  }
  return kExitOk;
}
