// Battery-life-vs-data-rate projections, standalone vs hub-offload
// comparison, and lifetime classification of simulation results.

#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "iob/energy_model.hpp"
#include "iob/scenario.hpp"
#include "iob/sim_engine.hpp"

namespace iob {

enum class Spacing { Log, Linear };

struct SweepSpec {
  BitRate rate_min{1e3};
  BitRate rate_max{10e6};
  std::size_t points = 50;
  Spacing spacing = Spacing::Log;
  DeviceClass device_class;
  LinkTech link;
  BatterySpec battery;
  HarvesterSpec harvester;
  // The sweep axis is the transmitted rate; a factor < 1 sweeps the raw
  // sensed rate instead and transmits compression * rate.
  double compression = 1.0;
  EnergyPerBit isa_energy_per_bit{0.0};
};

// Throws std::invalid_argument when the spec is malformed.
void check_sweep(const SweepSpec& spec);

// Rate grid of `spec`, endpoints exact.
std::vector<BitRate> sweep_grid(const SweepSpec& spec);

struct CurveRow {
  BitRate rate;
  PowerDraw sense;
  PowerDraw compute;
  PowerDraw comm;
  PowerDraw total;  // (sense + compute) + comm
  Lifetime life = Lifetime::perpetual();
  LifetimeClass class_label = LifetimeClass::Perpetual;
  bool feasible = true;  // transmitted rate within link capacity
};

// Analytic rows in grid order. Rows whose transmitted rate exceeds the link
// capacity are kept with feasible = false; their power figures are what the
// link would draw if it could carry the rate.
std::vector<CurveRow> project_curve(const SweepSpec& spec);

// rate_bps,sense_W,comm_W,total_W,life_h,class,feasible
void write_curve_csv(std::ostream& out, const std::vector<CurveRow>& rows);

// gnuplot script plotting life_h against rate from `csv_file`.
std::string gnuplot_script(const std::string& csv_file, const std::string& title);

struct ArchitectureComparison {
  std::string node_id;
  std::string rf_link;
  std::string wir_link;
  PowerBreakdown standalone;   // local CPU, results over the RF link
  PowerBreakdown hub_offload;  // ISA only, (compressed) raw data over Wi-R
  double ratio = 1.0;          // standalone / hub-offload total power
};

// Throws CapacityError when either architecture's rate does not fit its link.
ArchitectureComparison compare_architectures(const NodeSpec& node, const LinkTech& wir, const LinkTech& rf);

void write_comparison_csv(std::ostream& out, const ArchitectureComparison& c);

struct NodeClassification {
  std::string node_id;
  Lifetime life = Lifetime::perpetual();
  LifetimeClass lifetime_class = LifetimeClass::Perpetual;
};

std::vector<NodeClassification> classify_scenario(const SimResult& result);

}  // namespace iob
