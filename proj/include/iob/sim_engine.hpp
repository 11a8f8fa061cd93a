// Deterministic epoch-based simulation of a scenario.
//
// Each epoch, every live node accrues sensing, compute and link energy for
// its admitted rate, then harvested energy is credited (never above the
// initial charge). A node whose net drain empties the battery inside an
// epoch dies there; its death time is interpolated linearly within the
// epoch and its ledger is charged only for the part of the epoch it lived.

#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "iob/energy_model.hpp"
#include "iob/scenario.hpp"

namespace iob {

// Neumaier-compensated running sum. Ledgers accumulate up to ~1e9 epochs,
// where plain summation would drift well past the conservation tolerance.
class Accumulator {
 public:
  Accumulator() = default;
  explicit Accumulator(double v) : sum_(v) {}

  void add(double x) {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

  friend bool operator==(const Accumulator&, const Accumulator&) = default;

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Constant per-epoch demand of one node.
struct NodeLoad {
  PowerDraw sense;
  PowerDraw compute;
  PowerDraw comm;
  PowerDraw harvest;
  BitRate raw_rate;
  BitRate tx_rate;

  PowerDraw consumption() const { return (sense + compute) + comm; }
};

NodeLoad node_load(const NodeSpec& spec, const LinkTech& link);

struct NodeState {
  double initial_J = 0.0;
  Accumulator remaining_J;
  bool alive = true;
  std::optional<double> death_time_s;

  double bits_sensed = 0.0;
  double bits_txed = 0.0;
  double bits_computed = 0.0;

  Accumulator sensed_J;
  Accumulator compute_J;
  Accumulator comm_J;
  Accumulator harvested_J;  // harvest actually applied (after the capacity cap)

  static NodeState full(double initial_J) {
    NodeState s;
    s.initial_J = initial_J;
    s.remaining_J = Accumulator(initial_J);
    return s;
  }

  friend bool operator==(const NodeState&, const NodeState&) = default;
};

// One epoch [t_start_s, t_start_s + epoch_s). Dead nodes and zero-length
// epochs are returned unchanged.
NodeState step(const NodeState& state, const NodeLoad& load, double t_start_s, double epoch_s);

struct EnergyLedger {
  double sensed_J = 0.0;
  double compute_J = 0.0;
  double comm_J = 0.0;
  double harvested_J = 0.0;
  double consumed_J = 0.0;  // sensed + compute + comm
  double initial_J = 0.0;
  double final_J = 0.0;

  // |initial - final + harvested - consumed| / max(consumed, initial).
  double conservation_error() const;
};

EnergyLedger ledger_of(const NodeState& state);

struct NodeOutcome {
  std::string id;
  std::string device_class;
  Architecture architecture = Architecture::HubOffload;
  std::string link;
  EnergyLedger ledger;
  bool alive_at_end = true;
  std::optional<double> death_time_s;
  // Death time, or for survivors the projection elapsed + final / net drain.
  Lifetime lifetime = Lifetime::perpetual();
  double avg_power_W = 0.0;  // consumed / time alive
  double bits_sensed = 0.0;
  double bits_txed = 0.0;
  double bits_computed = 0.0;
};

struct LinkUsage {
  std::string link;
  double utilization = 0.0;  // time-averaged admitted rate / capacity, in [0, 1]
};

struct SimResult {
  std::vector<NodeOutcome> nodes;
  double duration_s = 0.0;
  double hub_energy_J = 0.0;
  double hub_avg_power_W = 0.0;
  Lifetime hub_lifetime = Lifetime::perpetual();
  std::vector<LinkUsage> channel_utilization;
  std::uint64_t epochs = 0;
  std::uint64_t event_count = 0;  // live node-epoch transitions

  const NodeOutcome* find(std::string_view id) const;
};

struct RunOptions {
  // Per-epoch, per-node trace CSV; null disables tracing.
  std::ostream* trace = nullptr;
};

class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Runs `s` to completion. Throws SimulationError if the scenario fails
// validation (channel admission included). Identical scenarios give
// bit-identical results.
SimResult run(const Scenario& s, const RunOptions& options = {});

// One row per node: id,class,architecture,link,avg_power_W,
// lifetime_h_or_PERPETUAL,consumed_J,harvested_J
void write_result_csv(std::ostream& out, const SimResult& r);

}  // namespace iob
