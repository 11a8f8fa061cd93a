// Power and battery-life arithmetic for leaf nodes.
//
// Node power is the sum of sensing, on-node compute and link power:
//
//   P_sense   = P_static + e_sense * raw_rate
//   P_compute = e_compute * raw_rate   (ISA for hub-offload, CPU for standalone)
//   P_comm    = e_link * tx_rate + P_link_static
//
// Battery life is E_batt / (P_node - P_harvest), or non-depleting when the
// harvester covers the load. Everything is double-precision SI.

#pragma once

#include "iob/link_model.hpp"
#include "iob/quantities.hpp"

namespace iob {

struct NodeSpec;

struct SensePowerModel {
  PowerDraw static_power;
  EnergyPerBit energy_per_sensed_bit;
  friend bool operator==(const SensePowerModel&, const SensePowerModel&) = default;
};

struct ComputeModel {
  EnergyPerBit isa_energy_per_bit{0.0};
  EnergyPerBit local_compute_energy_per_bit{10e-12};
  double compression_factor = 1.0;  // output bits / input bits, in (0, 1]
  friend bool operator==(const ComputeModel&, const ComputeModel&) = default;
};

inline constexpr double kDefaultBatteryVoltage = 3.0;

struct BatterySpec {
  double capacity_mah = 1000.0;
  double nominal_voltage_v = kDefaultBatteryVoltage;

  // capacity_mah * 3.6 C/mAh * V
  constexpr double energy_joules() const { return capacity_mah * 3.6 * nominal_voltage_v; }
  friend bool operator==(const BatterySpec&, const BatterySpec&) = default;
};

struct HarvesterSpec {
  PowerDraw harvest_power;
  friend bool operator==(const HarvesterSpec&, const HarvesterSpec&) = default;
};

// Per-term power of one node on one link.
struct PowerBreakdown {
  PowerDraw sense;
  PowerDraw compute;
  PowerDraw comm;
  BitRate tx_rate;

  // Fixed summation order so totals are reproducible bit-for-bit.
  PowerDraw total() const { return (sense + compute) + comm; }
};

// Throws CapacityError if tx_rate > link.max_rate, std::invalid_argument if
// tx_rate < 0.
PowerDraw comm_power(const LinkTech& link, BitRate tx_rate);

PowerDraw sense_power(const SensePowerModel& model, BitRate raw_rate);

// Terms of node_power for the node's configured architecture.
PowerBreakdown node_power_breakdown(const NodeSpec& spec, const LinkTech& link);

PowerDraw node_power(const NodeSpec& spec, const LinkTech& link);

Lifetime battery_life(const BatterySpec& batt, PowerDraw p_node, const HarvesterSpec& harvest);

// Perpetual above one year (or non-depleting), then week / day bands with
// inclusive lower bounds.
LifetimeClass classify_lifetime(const Lifetime& life);

}  // namespace iob
