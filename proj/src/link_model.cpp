#include "iob/link_model.hpp"

#include <cmath>

#include "iob/units.hpp"

namespace iob {

std::vector<std::string> link_problems(const LinkTech& link) {
  std::vector<std::string> out;
  const auto& e = link.energy_per_bit.joules_per_bit;
  if (!(std::isfinite(e) && e > 0.0)) out.push_back("energy_per_bit must be positive and finite");
  const auto& ps = link.static_power.watts;
  if (!(std::isfinite(ps) && ps >= 0.0)) out.push_back("static_power must be non-negative");
  if (!(std::isfinite(link.max_rate.bps) && link.max_rate.bps > 0.0)) {
    out.push_back("max_rate must be positive");
  }
  if (!(std::isfinite(link.carrier_limit_hz) && link.carrier_limit_hz > 0.0)) {
    out.push_back("carrier_limit must be positive");
  }
  if (const auto* body = std::get_if<BodyContained>(&link.propagation)) {
    if (!(std::isfinite(body->bubble_m) && body->bubble_m >= 0.0)) {
      out.push_back("bubble must be non-negative");
    }
    if (link.carrier_limit_hz > kEqsCarrierLimitHz) {
      out.push_back("body-contained link carrier " + format_quantity(link.carrier_limit_hz, Dimension::Frequency) +
                    " exceeds the 30 MHz quasistatic limit");
    }
  } else {
    const auto& rad = std::get<Radiative>(link.propagation);
    if (!(std::isfinite(rad.radius_m) && rad.radius_m > 0.0)) {
      out.push_back("radius must be positive");
    }
  }
  return out;
}

LinkTech wir_link() {
  return LinkTech{.name = "wir",
                  .energy_per_bit = {100e-12},
                  .static_power = {0.0},
                  .max_rate = {4e6},
                  .propagation = BodyContained{0.1},
                  .carrier_limit_hz = kEqsCarrierLimitHz};
}

LinkTech ble_link() {
  return LinkTech{.name = "ble",
                  .energy_per_bit = {10e-9},
                  .static_power = {0.5e-3},
                  .max_rate = {2e6},
                  .propagation = Radiative{7.5},
                  .carrier_limit_hz = 2.4e9};
}

std::vector<LinkTech> default_links() { return {wir_link(), ble_link()}; }

double distance_from_body(const Placement& p) {
  if (const auto* off = std::get_if<OffBody>(&p)) return off->distance_m;
  return 0.0;
}

bool reachable(const LinkTech& link, const Placement& tx, const Placement& rx) {
  if (const auto* body = std::get_if<BodyContained>(&link.propagation)) {
    const bool tx_on = std::holds_alternative<OnBody>(tx);
    const bool rx_on = std::holds_alternative<OnBody>(rx);
    if (tx_on && rx_on) return true;
    if (tx_on) return std::get<OffBody>(rx).distance_m <= body->bubble_m;
    if (rx_on) return std::get<OffBody>(tx).distance_m <= body->bubble_m;
    return false;
  }
  const double d = std::fabs(distance_from_body(tx) - distance_from_body(rx));
  return d <= std::get<Radiative>(link.propagation).radius_m;
}

std::vector<Placement> eavesdrop_set(const LinkTech& link, const Placement& tx,
                                     std::span<const Placement> observers) {
  std::vector<Placement> out;
  for (const auto& obs : observers) {
    if (reachable(link, tx, obs)) out.push_back(obs);
  }
  return out;
}

CapacityError::CapacityError(std::string link, BitRate demanded, BitRate capacity)
    : std::runtime_error("link '" + link + "' overloaded: demand " +
                         format_quantity(demanded.bps, Dimension::BitRate) + " exceeds capacity " +
                         format_quantity(capacity.bps, Dimension::BitRate) + " by " +
                         format_quantity(demanded.bps - capacity.bps, Dimension::BitRate)),
      link_(std::move(link)),
      demanded_(demanded),
      capacity_(capacity) {}

BitRate SlotTable::total() const {
  BitRate sum;
  for (const auto& a : allocations) sum = sum + a.rate;
  return sum;
}

SlotTable allocate_tdma(const LinkTech& link, std::span<const RateDemand> demands) {
  BitRate sum;
  for (const auto& d : demands) {
    if (!(d.rate.bps >= 0.0)) {
      throw std::invalid_argument("negative rate demand from node '" + d.node_id + "'");
    }
    sum = sum + d.rate;
  }
  if (sum > link.max_rate) throw CapacityError(link.name, sum, link.max_rate);

  SlotTable table;
  table.allocations.reserve(demands.size());
  for (const auto& d : demands) {
    if (d.rate.bps > 0.0) table.allocations.push_back({d.node_id, d.rate});
  }
  return table;
}

}  // namespace iob
