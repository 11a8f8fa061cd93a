// Test-only generators and closed-form oracles. Nothing here calls into the
// code paths it is used to check.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "iob/scenario.hpp"

namespace iob::test {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin(double p = 0.5) { return uniform(0.0, 1.0) < p; }

  Placement placement(double max_distance = 20.0) {
    if (coin(0.3)) return OnBody{"site" + std::to_string(integer(0, 9))};
    return OffBody{uniform(1e-3, max_distance)};
  }

 private:
  std::mt19937_64 rng_;
};

// Closed-form life of a constant load: E / (P - H), in hours.
inline double closed_form_life_h(double energy_J, double power_W, double harvest_W = 0.0) {
  return energy_J / (power_W - harvest_W) / 3600.0;
}

inline double battery_joules(double mah, double volts) { return mah * 1e-3 * 3600.0 * volts; }

// Containment oracle on the 1-D distance-from-body line: a body-contained
// link needs one endpoint on the body and the other within the bubble.
inline bool contained_oracle(double d_tx, double d_rx, double bubble) {
  return std::min(d_tx, d_rx) == 0.0 && std::max(d_tx, d_rx) <= bubble;
}

inline bool radiative_oracle(double d_tx, double d_rx, double radius) { return std::fabs(d_tx - d_rx) <= radius; }

inline double dist(const Placement& p) {
  return std::holds_alternative<OffBody>(p) ? std::get<OffBody>(p).distance_m : 0.0;
}

// One-node scenario on the Wi-R preset, default cell.
inline Scenario single_node(const DeviceClass& cls, double duration_s, double epoch_s) {
  Scenario s;
  s.links = {wir_link()};
  NodeSpec n;
  n.id = "n0";
  n.device_class = cls;
  n.raw_rate = cls.typical_raw_rate;
  n.compute.compression_factor = cls.default_compression;
  n.link = "wir";
  s.nodes = {n};
  s.duration_s = duration_s;
  s.epoch_s = epoch_s;
  return s;
}

// Random structurally valid scenario whose peak demand fits every link.
inline Scenario random_scenario(Gen& g, bool allow_jitter = true) {
  Scenario s;
  s.seed = static_cast<std::uint64_t>(g.integer(0, 1 << 30));
  s.duration_s = g.uniform(60.0, 2000.0 * 3600.0);
  s.epoch_s = s.duration_s / g.uniform(20.0, 3000.0);
  s.jitter = allow_jitter && g.coin(0.3) ? g.uniform(0.0, 0.3) : 0.0;

  auto wir = wir_link();
  wir.energy_per_bit = {g.log_uniform(5e-12, 200e-12)};
  wir.propagation = BodyContained{g.uniform(0.0, 0.3)};
  auto ble = ble_link();
  ble.name = "radio";
  ble.static_power = {g.uniform(0.0, 1e-3)};
  ble.propagation = Radiative{g.uniform(1.0, 10.0)};
  s.links = {wir, ble};

  s.hub.id = "hub" + std::to_string(g.integer(0, 99));
  s.hub.base_power = {g.uniform(0.0, 0.3)};
  s.hub.battery = {g.uniform(100, 6000), g.uniform(3.0, 4.2)};

  const auto catalog = default_catalog();
  const int n = g.integer(1, 6);
  for (int i = 0; i < n; ++i) {
    NodeSpec node;
    node.id = "node-" + std::to_string(i);
    if (g.coin(0.7)) {
      node.device_class = catalog[static_cast<std::size_t>(g.integer(0, 4))];
    } else {
      node.device_class = DeviceClass{"custom-" + std::to_string(i),
                                      {{g.uniform(0, 5e-3)}, {g.log_uniform(1e-13, 1e-9)}},
                                      {g.uniform(100, 1e5)},
                                      g.uniform(0.05, 1.0),
                                      "generated, with \"quotes\", commas: and colons"};
    }
    node.link = g.coin() ? "wir" : "radio";
    const auto& link = node.link == "wir" ? s.links[0] : s.links[1];
    const double share = link.max_rate.bps / (n * (1.0 + s.jitter) * 1.5);
    node.raw_rate = {g.uniform(10.0, share)};
    node.architecture = g.coin() ? Architecture::HubOffload : Architecture::Standalone;
    node.compute.compression_factor = g.uniform(0.05, 1.0);
    node.compute.isa_energy_per_bit = {g.coin() ? 0.0 : g.log_uniform(1e-14, 1e-11)};
    node.compute.local_compute_energy_per_bit = {g.log_uniform(1e-13, 1e-10)};
    if (g.coin()) node.result_rate = BitRate{g.uniform(0.0, node.raw_rate.bps)};
    node.battery = {g.uniform(10, 2000), g.uniform(1.5, 4.2)};
    node.harvester = {{g.coin(0.4) ? g.uniform(0, 300e-6) : 0.0}};
    node.placement = g.coin() ? Placement{OnBody{"site-" + std::to_string(i)}}
                              : Placement{OffBody{g.uniform(0.01, 0.5)}};
    s.nodes.push_back(node);
  }
  return s;
}

}  // namespace iob::test
