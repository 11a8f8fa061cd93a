// Body-area link technologies: containment/reachability and admission on a
// single shared channel.

#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "iob/quantities.hpp"

namespace iob {

// Electro-quasistatic coupling: the signal stays within `bubble_m` of the body.
struct BodyContained {
  double bubble_m = 0.1;
  friend bool operator==(const BodyContained&, const BodyContained&) = default;
};

// Far-field radio: anything within `radius_m` hears the transmission.
struct Radiative {
  double radius_m = 7.5;
  friend bool operator==(const Radiative&, const Radiative&) = default;
};

using Propagation = std::variant<BodyContained, Radiative>;

inline constexpr double kEqsCarrierLimitHz = 30e6;

struct LinkTech {
  std::string name;
  EnergyPerBit energy_per_bit;
  PowerDraw static_power;
  BitRate max_rate;  // aggregate channel capacity
  Propagation propagation;
  double carrier_limit_hz = kEqsCarrierLimitHz;

  bool body_contained() const { return std::holds_alternative<BodyContained>(propagation); }

  friend bool operator==(const LinkTech&, const LinkTech&) = default;
};

// Invariant violations of `link`, empty when valid.
std::vector<std::string> link_problems(const LinkTech& link);

// Wi-R: 100 pJ/bit, no static term, 4 Mbps, contained to a 0.1 m bubble.
LinkTech wir_link();
// BLE-class radio: 10 nJ/bit, 0.5 mW static, 2 Mbps, radiates 7.5 m.
LinkTech ble_link();
std::vector<LinkTech> default_links();

struct OnBody {
  std::string site;
  friend bool operator==(const OnBody&, const OnBody&) = default;
};

struct OffBody {
  double distance_m = 1.0;  // from the body surface, > 0
  friend bool operator==(const OffBody&, const OffBody&) = default;
};

using Placement = std::variant<OnBody, OffBody>;

// Distance from the body surface; on-body endpoints sit at 0.
double distance_from_body(const Placement& p);

bool reachable(const LinkTech& link, const Placement& tx, const Placement& rx);

// The observers that can hear `tx`, in input order.
std::vector<Placement> eavesdrop_set(const LinkTech& link, const Placement& tx,
                                     std::span<const Placement> observers);

// Thrown when demanded bandwidth exceeds a link's capacity.
class CapacityError : public std::runtime_error {
 public:
  CapacityError(std::string link, BitRate demanded, BitRate capacity);

  const std::string& link() const { return link_; }
  BitRate demanded() const { return demanded_; }
  BitRate capacity() const { return capacity_; }
  BitRate deficit() const { return demanded_ - capacity_; }

 private:
  std::string link_;
  BitRate demanded_;
  BitRate capacity_;
};

struct RateDemand {
  std::string node_id;
  BitRate rate;
};

struct SlotAllocation {
  std::string node_id;
  BitRate rate;
  friend bool operator==(const SlotAllocation&, const SlotAllocation&) = default;
};

struct SlotTable {
  std::vector<SlotAllocation> allocations;

  BitRate total() const;
};

// TDMA with admission control: every demand is served in full or the whole
// request is rejected with CapacityError. Zero demands get no slot.
// Throws std::invalid_argument on a negative demand.
SlotTable allocate_tdma(const LinkTech& link, std::span<const RateDemand> demands);

}  // namespace iob
