// iobsim: command-line front end for body-area-network lifetime projections
// and simulations.
//
// Exit codes: 0 success, 1 scenario/validation errors, 2 usage errors.

#include <unistd.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "iob/analysis.hpp"
#include "iob/csv.hpp"
#include "iob/scenario.hpp"
#include "iob/sim_engine.hpp"
#include "iob/units.hpp"

namespace fs = std::filesystem;
using namespace iob;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitScenario = 1;
constexpr int kExitUsage = 2;

// Flag value that does not parse, or names something that does not exist.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double flag_quantity(const std::string& flag, const std::string& text, Dimension dim) {
  try {
    const double v = parse_quantity(text, dim);
    if (v < 0.0) throw UsageError(flag + ": negative quantity '" + text + "'");
    return v;
  } catch (const UnitError& e) {
    throw UsageError(flag + ": " + e.what());
  }
}

// Writes `content` to `path` via a temporary file and rename, so a failed
// run never leaves a partial file behind.
void write_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw std::runtime_error("write to '" + tmp.string() + "' failed");
    }
  }
  fs::rename(tmp, path);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  cells.push_back(std::move(cur));
  return cells;
}

std::string csv_to_table(const std::string& csv) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(csv);
  for (std::string line; std::getline(in, line);) rows.push_back(split_csv_line(line));
  std::vector<std::size_t> width;
  for (const auto& r : rows) {
    if (width.size() < r.size()) width.resize(r.size(), 0);
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
  }
  std::ostringstream out;
  for (std::size_t ri = 0; ri < rows.size(); ++ri) {
    for (std::size_t i = 0; i < rows[ri].size(); ++i) {
      out << rows[ri][i];
      if (i + 1 < rows[ri].size()) out << std::string(width[i] - rows[ri][i].size() + 2, ' ');
    }
    out << '\n';
    if (ri == 0) {
      std::size_t total = 0;
      for (auto w : width) total += w + 2;
      out << std::string(total > 2 ? total - 2 : total, '-') << '\n';
    }
  }
  return out.str();
}

// Data goes to --out, else to stdout (aligned table on a terminal, CSV
// when piped).
void emit(const std::string& out_path, const std::string& csv) {
  if (!out_path.empty()) {
    write_atomic(out_path, csv);
  } else if (::isatty(STDOUT_FILENO)) {
    std::cout << csv_to_table(csv);
  } else {
    std::cout << csv;
  }
}

ParseOptions parse_options_from_env() {
  ParseOptions opts;
  if (const char* env = std::getenv("IOBSIM_EPOCH"); env && *env) {
    const double e = flag_quantity("IOBSIM_EPOCH", env, Dimension::Time);
    if (!(e > 0.0)) throw UsageError("IOBSIM_EPOCH: epoch must be positive");
    opts.default_epoch_s = e;
  }
  return opts;
}

const LinkTech& resolve_link(const Scenario* s, const std::vector<LinkTech>& presets, const std::string& name,
                             const std::string& flag) {
  if (s) {
    if (const auto* l = s->find_link(name)) return *l;
  }
  for (const auto& l : presets) {
    if (l.name == name) return l;
  }
  throw UsageError(flag + ": unknown link '" + name + "'");
}

SweepSpec parse_sweep_flag(const std::string& text, SweepSpec spec) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  if (parts.size() != 4) throw UsageError("--sweep: expected MIN:MAX:log|linear:POINTS, got '" + text + "'");
  spec.rate_min.bps = flag_quantity("--sweep", parts[0], Dimension::BitRate);
  spec.rate_max.bps = flag_quantity("--sweep", parts[1], Dimension::BitRate);
  if (parts[2] == "log") {
    spec.spacing = Spacing::Log;
  } else if (parts[2] == "linear") {
    spec.spacing = Spacing::Linear;
  } else {
    throw UsageError("--sweep: spacing must be 'log' or 'linear', got '" + parts[2] + "'");
  }
  try {
    std::size_t used = 0;
    const long long n = std::stoll(parts[3], &used);
    if (used != parts[3].size() || n < 2) throw std::invalid_argument("points");
    spec.points = static_cast<std::size_t>(n);
  } catch (const std::exception&) {
    throw UsageError("--sweep: point count must be an integer >= 2, got '" + parts[3] + "'");
  }
  return spec;
}

std::string catalog_csv() {
  std::ostringstream out;
  out << "name,typical_rate_bps,sense_static_W,sense_energy_per_bit_J,default_compression,provenance,note\n";
  for (const auto& c : default_catalog()) {
    out << csv_field(c.name) << ',' << format_number(c.typical_raw_rate.bps) << ','
        << format_number(c.sense_model.static_power.watts) << ','
        << format_number(c.sense_model.energy_per_sensed_bit.joules_per_bit) << ','
        << format_number(c.default_compression) << ",calibration default (not measured data)," << csv_field(c.catalog_note)
        << '\n';
  }
  return out.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"iobsim: body-area-network energy, lifetime and architecture simulator"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand all help");

  std::string out_path;
  std::string scenario_path;

  // project
  auto* project = app.add_subcommand("project", "Analytic battery-life vs data-rate sweep (CSV)");
  std::string p_class, p_link, p_sweep = "1kbps:10Mbps:log:50", p_node, p_plot;
  std::string p_battery, p_voltage, p_harvest, p_compression, p_isa;
  project->add_option("--class", p_class, "Device class from the catalog");
  project->add_option("--link", p_link, "Link name (scenario link or preset: wir, ble)");
  project->add_option("--sweep", p_sweep, "MIN:MAX:log|linear:POINTS, e.g. 1kbps:10Mbps:log:50")
      ->capture_default_str();
  project->add_option("--scenario", scenario_path, "Take class/link/battery from a scenario node");
  project->add_option("--node", p_node, "Node id within --scenario");
  project->add_option("--battery", p_battery, "Battery capacity, e.g. 1000mAh");
  project->add_option("--voltage", p_voltage, "Battery nominal voltage, e.g. 3V");
  project->add_option("--harvest", p_harvest, "Harvested power, e.g. 100uW");
  project->add_option("--compression", p_compression, "Transmitted/raw bit ratio in (0,1] (default 1)");
  project->add_option("--isa", p_isa, "In-sensor analytics energy per raw bit, e.g. 1pJ");
  project->add_option("--plot", p_plot, "Also write a gnuplot script here");
  project->add_option("--out", out_path, "Output CSV file");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Epoch-based simulation of a scenario (CSV per node)");
  std::optional<std::uint64_t> s_seed;
  std::string s_epoch, s_duration, s_trace;
  simulate->add_option("--scenario", scenario_path, "Scenario file")->required();
  simulate->add_option("--seed", s_seed, "Override the scenario seed");
  simulate->add_option("--epoch", s_epoch, "Override the epoch length, e.g. 60s");
  simulate->add_option("--duration", s_duration, "Override the simulated duration, e.g. 8760h");
  simulate->add_option("--trace", s_trace, "Write a per-epoch trace CSV here");
  simulate->add_option("--out", out_path, "Output CSV file");

  // compare
  auto* compare = app.add_subcommand("compare", "Standalone (RF) vs hub-offload (Wi-R) power for one node");
  std::string c_node, c_rf = "ble", c_wir = "wir";
  compare->add_option("--scenario", scenario_path, "Scenario file")->required();
  compare->add_option("--node", c_node, "Node id")->required();
  compare->add_option("--rf-link", c_rf, "Radio link for the standalone design")->capture_default_str();
  compare->add_option("--wir-link", c_wir, "Body link for the hub-offload design")->capture_default_str();
  compare->add_option("--out", out_path, "Output CSV file");

  // catalog
  auto* catalog = app.add_subcommand("catalog", "List built-in device classes");
  catalog->add_option("--out", out_path, "Output CSV file");

  // validate
  auto* validate_cmd = app.add_subcommand("validate", "Check a scenario and report diagnostics");
  validate_cmd->add_option("--scenario", scenario_path, "Scenario file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    const auto presets = default_links();
    const ParseOptions parse_opts = parse_options_from_env();

    if (*catalog) {
      std::cerr << "note: sensing coefficients are calibration defaults, not measured device data\n";
      emit(out_path, catalog_csv());
      return kExitOk;
    }

    if (*validate_cmd) {
      const auto s = load_scenario(scenario_path, parse_opts);
      const auto diags = validate(s);
      for (const auto& d : diags) std::cerr << format_diagnostic(d) << '\n';
      if (has_errors(diags)) return kExitScenario;
      std::cerr << scenario_path << ": ok (" << s.nodes.size() << " nodes, " << s.links.size() << " links)\n";
      return kExitOk;
    }

    if (*simulate) {
      auto s = load_scenario(scenario_path, parse_opts);
      if (s_seed) s.seed = *s_seed;
      if (!s_epoch.empty()) s.epoch_s = flag_quantity("--epoch", s_epoch, Dimension::Time);
      if (!s_duration.empty()) s.duration_s = flag_quantity("--duration", s_duration, Dimension::Time);
      const auto diags = validate(s);
      for (const auto& d : diags) std::cerr << format_diagnostic(d) << '\n';
      if (has_errors(diags)) return kExitScenario;

      std::ostringstream trace;
      RunOptions opts;
      if (!s_trace.empty()) opts.trace = &trace;
      const auto result = run(s, opts);

      std::ostringstream csv;
      write_result_csv(csv, result);
      if (!s_trace.empty()) write_atomic(s_trace, trace.str());
      emit(out_path, csv.str());

      std::cerr << "hub '" << s.hub.id << "': " << format_quantity(result.hub_avg_power_W, Dimension::Power)
                << " average, "
                << (result.hub_lifetime.is_perpetual() ? std::string("perpetual")
                                                       : format_number(result.hub_lifetime.hours()) + " h")
                << " per charge\n";
      for (const auto& u : result.channel_utilization) {
        std::cerr << "link '" << u.link << "': utilization " << format_number(u.utilization) << '\n';
      }
      return kExitOk;
    }

    if (*compare) {
      const auto s = load_scenario(scenario_path, parse_opts);
      const auto* node = s.find_node(c_node);
      if (!node) throw UsageError("--node: no node '" + c_node + "' in " + scenario_path);
      const auto& rf = resolve_link(&s, presets, c_rf, "--rf-link");
      const auto& wir = resolve_link(&s, presets, c_wir, "--wir-link");
      const auto cmp = compare_architectures(*node, wir, rf);
      std::ostringstream csv;
      write_comparison_csv(csv, cmp);
      emit(out_path, csv.str());
      return kExitOk;
    }

    if (*project) {
      SweepSpec spec;
      std::optional<Scenario> s;
      if (!scenario_path.empty()) {
        s = load_scenario(scenario_path, parse_opts);
        if (p_node.empty()) throw UsageError("project: --scenario requires --node");
        const auto* node = s->find_node(p_node);
        if (!node) throw UsageError("--node: no node '" + p_node + "' in " + scenario_path);
        spec.device_class = node->device_class;
        spec.link = *s->find_link(node->link);
        spec.battery = node->battery;
        spec.harvester = node->harvester;
      } else if (p_class.empty() || p_link.empty()) {
        throw UsageError("project: give --class and --link, or --scenario and --node");
      }
      if (!p_class.empty()) {
        const auto cat = default_catalog();
        const auto* cls = find_class(cat, p_class);
        if (!cls) throw UsageError("--class: unknown device class '" + p_class + "'");
        spec.device_class = *cls;
      }
      if (!p_link.empty()) spec.link = resolve_link(s ? &*s : nullptr, presets, p_link, "--link");
      if (!p_battery.empty()) spec.battery.capacity_mah = flag_quantity("--battery", p_battery, Dimension::Charge);
      if (!p_voltage.empty()) {
        spec.battery.nominal_voltage_v = flag_quantity("--voltage", p_voltage, Dimension::Voltage);
      }
      if (!p_harvest.empty()) {
        spec.harvester.harvest_power.watts = flag_quantity("--harvest", p_harvest, Dimension::Power);
      }
      if (!p_compression.empty()) {
        spec.compression = flag_quantity("--compression", p_compression, Dimension::Dimensionless);
      }
      if (!p_isa.empty()) spec.isa_energy_per_bit.joules_per_bit = flag_quantity("--isa", p_isa, Dimension::EnergyPerBit);
      spec = parse_sweep_flag(p_sweep, spec);
      try {
        check_sweep(spec);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }

      const auto rows = project_curve(spec);
      std::ostringstream csv;
      write_curve_csv(csv, rows);
      emit(out_path, csv.str());
      if (!p_plot.empty()) {
        const std::string data = out_path.empty() ? std::string("curve.csv") : out_path;
        write_atomic(p_plot, gnuplot_script(data, spec.device_class.name + " on " + spec.link.name));
      }
      return kExitOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ScenarioError& e) {
    std::cerr << "scenario error: " << e.what() << '\n';
    return kExitScenario;
  } catch (const CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << '\n';
    return kExitScenario;
  } catch (const SimulationError& e) {
    std::cerr << "simulation error: " << e.what() << '\n';
    return kExitScenario;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitScenario;
  }
  return kExitUsage;
}
