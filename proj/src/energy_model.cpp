#include "iob/energy_model.hpp"

#include <stdexcept>

#include "iob/scenario.hpp"

namespace iob {

std::string_view to_string(LifetimeClass c) {
  switch (c) {
    case LifetimeClass::Perpetual: return "Perpetual";
    case LifetimeClass::AllWeek: return "AllWeek";
    case LifetimeClass::AllDay: return "AllDay";
    case LifetimeClass::SubDay: return "SubDay";
  }
  return "?";
}

PowerDraw comm_power(const LinkTech& link, BitRate tx_rate) {
  if (!(tx_rate.bps >= 0.0)) {
    throw std::invalid_argument("negative transmit rate on link '" + link.name + "'");
  }
  if (tx_rate > link.max_rate) throw CapacityError(link.name, tx_rate, link.max_rate);
  return link.energy_per_bit * tx_rate + link.static_power;
}

PowerDraw sense_power(const SensePowerModel& model, BitRate raw_rate) {
  return model.static_power + model.energy_per_sensed_bit * raw_rate;
}

PowerBreakdown node_power_breakdown(const NodeSpec& spec, const LinkTech& link) {
  const EnergyPerBit compute_e = spec.architecture == Architecture::HubOffload
                                     ? spec.compute.isa_energy_per_bit
                                     : spec.compute.local_compute_energy_per_bit;
  const BitRate tx = spec.tx_rate();
  return PowerBreakdown{.sense = sense_power(spec.device_class.sense_model, spec.raw_rate),
                        .compute = compute_e * spec.raw_rate,
                        .comm = comm_power(link, tx),
                        .tx_rate = tx};
}

PowerDraw node_power(const NodeSpec& spec, const LinkTech& link) {
  return node_power_breakdown(spec, link).total();
}

Lifetime battery_life(const BatterySpec& batt, PowerDraw p_node, const HarvesterSpec& harvest) {
  const double net = p_node.watts - harvest.harvest_power.watts;
  if (net <= 0.0) return Lifetime::perpetual();
  return Lifetime::from_hours(batt.energy_joules() / net / kSecondsPerHour);
}

LifetimeClass classify_lifetime(const Lifetime& life) {
  if (life.is_perpetual() || life.hours() > kHoursPerYear) return LifetimeClass::Perpetual;
  if (life.hours() >= kHoursPerWeek) return LifetimeClass::AllWeek;
  if (life.hours() >= kHoursPerDay) return LifetimeClass::AllDay;
  return LifetimeClass::SubDay;
}

}  // namespace iob
