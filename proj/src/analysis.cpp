#include "iob/analysis.hpp"

#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "iob/csv.hpp"
#include "iob/units.hpp"

namespace iob {

void check_sweep(const SweepSpec& spec) {
  if (!(std::isfinite(spec.rate_min.bps) && spec.rate_min.bps >= 0.0)) {
    throw std::invalid_argument("sweep rate_min must be non-negative");
  }
  if (!(std::isfinite(spec.rate_max.bps) && spec.rate_min < spec.rate_max)) {
    throw std::invalid_argument("sweep rate_min must be below rate_max");
  }
  if (spec.points < 2) throw std::invalid_argument("sweep needs at least 2 points");
  if (spec.spacing == Spacing::Log && !(spec.rate_min.bps > 0.0)) {
    throw std::invalid_argument("log sweep needs rate_min > 0");
  }
  if (!(spec.compression > 0.0 && spec.compression <= 1.0)) {
    throw std::invalid_argument("sweep compression must be in (0, 1]");
  }
  if (!(spec.battery.capacity_mah > 0.0 && spec.battery.nominal_voltage_v > 0.0)) {
    throw std::invalid_argument("sweep battery must have positive capacity and voltage");
  }
  if (auto problems = link_problems(spec.link); !problems.empty()) {
    throw std::invalid_argument("sweep link '" + spec.link.name + "': " + problems.front());
  }
}

std::vector<BitRate> sweep_grid(const SweepSpec& spec) {
  check_sweep(spec);
  std::vector<BitRate> grid(spec.points);
  const double lo = spec.rate_min.bps;
  const double hi = spec.rate_max.bps;
  const double last = static_cast<double>(spec.points - 1);
  for (std::size_t i = 0; i < spec.points; ++i) {
    const double f = static_cast<double>(i) / last;
    grid[i].bps = spec.spacing == Spacing::Log ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f;
  }
  grid.front().bps = lo;
  grid.back().bps = hi;
  return grid;
}

std::vector<CurveRow> project_curve(const SweepSpec& spec) {
  const auto grid = sweep_grid(spec);
  std::vector<CurveRow> rows;
  rows.reserve(grid.size());
  for (const auto rate : grid) {
    const BitRate tx = spec.compression * rate;
    CurveRow row;
    row.rate = rate;
    row.feasible = tx <= spec.link.max_rate;
    row.sense = sense_power(spec.device_class.sense_model, rate);
    row.compute = spec.isa_energy_per_bit * rate;
    // Computed directly so infeasible rows still carry the hypothetical draw.
    row.comm = spec.link.energy_per_bit * tx + spec.link.static_power;
    row.total = (row.sense + row.compute) + row.comm;
    row.life = battery_life(spec.battery, row.total, spec.harvester);
    row.class_label = classify_lifetime(row.life);
    rows.push_back(row);
  }
  return rows;
}

void write_curve_csv(std::ostream& out, const std::vector<CurveRow>& rows) {
  out << "rate_bps,sense_W,comm_W,total_W,life_h,class,feasible\n";
  for (const auto& r : rows) {
    out << format_number(r.rate.bps) << ',' << format_number(r.sense.watts) << ',' << format_number(r.comm.watts)
        << ',' << format_number(r.total.watts) << ','
        << (r.life.is_perpetual() ? std::string() : format_number(r.life.hours())) << ','
        << (r.feasible ? to_string(r.class_label) : std::string_view("INFEASIBLE")) << ','
        << (r.feasible ? "true" : "false") << '\n';
  }
}

std::string gnuplot_script(const std::string& csv_file, const std::string& title) {
  std::ostringstream s;
  s << "# gnuplot script: battery life vs data rate\n"
    << "set datafile separator ','\n"
    << "set logscale xy\n"
    << "set xlabel 'data rate (bps)'\n"
    << "set ylabel 'battery life (h)'\n"
    << "set title '" << title << "'\n"
    << "set key top right\n"
    << "set arrow from graph 0, first 8760 to graph 1, first 8760 nohead dt 2\n"
    << "set arrow from graph 0, first 168 to graph 1, first 168 nohead dt 3\n"
    << "set arrow from graph 0, first 24 to graph 1, first 24 nohead dt 4\n"
    << "plot '" << csv_file << "' every ::1 using 1:(strcol(7) eq 'true' && strcol(5) ne '' ? $5 : 1/0) "
    << "with linespoints title 'projected life'\n";
  return s.str();
}

ArchitectureComparison compare_architectures(const NodeSpec& node, const LinkTech& wir, const LinkTech& rf) {
  NodeSpec standalone = node;
  standalone.architecture = Architecture::Standalone;
  NodeSpec offload = node;
  offload.architecture = Architecture::HubOffload;

  ArchitectureComparison c;
  c.node_id = node.id;
  c.rf_link = rf.name;
  c.wir_link = wir.name;
  c.standalone = node_power_breakdown(standalone, rf);
  c.hub_offload = node_power_breakdown(offload, wir);
  const double num = c.standalone.total().watts;
  const double den = c.hub_offload.total().watts;
  if (den > 0.0) {
    c.ratio = num / den;
  } else {
    c.ratio = num > 0.0 ? INFINITY : 1.0;
  }
  return c;
}

void write_comparison_csv(std::ostream& out, const ArchitectureComparison& c) {
  out << "node,architecture,link,tx_rate_bps,sense_W,compute_W,comm_W,total_W,ratio_to_hub_offload\n";
  const auto row = [&](std::string_view arch, const std::string& link, const PowerBreakdown& p, double ratio) {
    out << csv_field(c.node_id) << ',' << arch << ',' << csv_field(link) << ',' << format_number(p.tx_rate.bps)
        << ',' << format_number(p.sense.watts) << ',' << format_number(p.compute.watts) << ','
        << format_number(p.comm.watts) << ',' << format_number(p.total().watts) << ',' << format_number(ratio)
        << '\n';
  };
  row("standalone", c.rf_link, c.standalone, c.ratio);
  row("hub-offload", c.wir_link, c.hub_offload, 1.0);
}

std::vector<NodeClassification> classify_scenario(const SimResult& result) {
  std::vector<NodeClassification> out;
  out.reserve(result.nodes.size());
  for (const auto& n : result.nodes) out.push_back({n.id, n.lifetime, classify_lifetime(n.lifetime)});
  return out;
}

}  // namespace iob
