#include "iob/sim_engine.hpp"

#include <algorithm>
#include <ostream>
#include <random>

#include "iob/csv.hpp"
#include "iob/units.hpp"

namespace iob {
namespace {

void advance(NodeState& s, const NodeLoad& load, double t_start_s, double dt) {
  if (!s.alive || !(dt > 0.0)) return;

  const double consumed = load.consumption().watts * dt;
  const double harvest = load.harvest.watts * dt;
  const double energy = s.remaining_J.value();

  if (consumed > harvest && energy + harvest - consumed <= 0.0) {
    const double f = std::clamp(energy / (consumed - harvest), 0.0, 1.0);
    const double lived = f * dt;
    s.sensed_J.add(load.sense.watts * lived);
    s.compute_J.add(load.compute.watts * lived);
    s.comm_J.add(load.comm.watts * lived);
    s.harvested_J.add(load.harvest.watts * lived);
    s.bits_sensed += load.raw_rate.bps * lived;
    s.bits_computed += load.raw_rate.bps * lived;
    s.bits_txed += load.tx_rate.bps * lived;
    s.remaining_J = Accumulator(0.0);
    s.alive = false;
    s.death_time_s = t_start_s + lived;
    return;
  }

  s.sensed_J.add(load.sense.watts * dt);
  s.compute_J.add(load.compute.watts * dt);
  s.comm_J.add(load.comm.watts * dt);
  s.bits_sensed += load.raw_rate.bps * dt;
  s.bits_computed += load.raw_rate.bps * dt;
  s.bits_txed += load.tx_rate.bps * dt;

  if (harvest > 0.0 && energy - consumed + harvest > s.initial_J) {
    // Harvest tops the battery up to its initial charge; the excess is lost.
    s.harvested_J.add(s.initial_J - (energy - consumed));
    s.remaining_J = Accumulator(s.initial_J);
  } else {
    s.remaining_J.add(-consumed);
    if (harvest > 0.0) {
      s.remaining_J.add(harvest);
      s.harvested_J.add(harvest);
    }
  }
}

NodeLoad jittered(const NodeSpec& spec, const LinkTech& link, const NodeLoad& base, double factor) {
  NodeLoad l = base;
  l.raw_rate = factor * spec.raw_rate;
  l.tx_rate = factor * base.tx_rate;
  l.sense = sense_power(spec.device_class.sense_model, l.raw_rate);
  const EnergyPerBit compute_e = spec.architecture == Architecture::HubOffload
                                     ? spec.compute.isa_energy_per_bit
                                     : spec.compute.local_compute_energy_per_bit;
  l.compute = compute_e * l.raw_rate;
  l.comm = comm_power(link, l.tx_rate);
  return l;
}

// Portable [0, 1) from 53 random bits; std distributions differ across
// standard libraries.
double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

NodeLoad node_load(const NodeSpec& spec, const LinkTech& link) {
  const auto p = node_power_breakdown(spec, link);
  return NodeLoad{.sense = p.sense,
                  .compute = p.compute,
                  .comm = p.comm,
                  .harvest = spec.harvester.harvest_power,
                  .raw_rate = spec.raw_rate,
                  .tx_rate = p.tx_rate};
}

NodeState step(const NodeState& state, const NodeLoad& load, double t_start_s, double epoch_s) {
  NodeState next = state;
  advance(next, load, t_start_s, epoch_s);
  return next;
}

double EnergyLedger::conservation_error() const {
  const double scale = std::max({consumed_J, initial_J, 1e-300});
  return std::fabs(initial_J - final_J + harvested_J - consumed_J) / scale;
}

EnergyLedger ledger_of(const NodeState& s) {
  EnergyLedger l;
  l.sensed_J = s.sensed_J.value();
  l.compute_J = s.compute_J.value();
  l.comm_J = s.comm_J.value();
  l.harvested_J = s.harvested_J.value();
  l.consumed_J = l.sensed_J + l.compute_J + l.comm_J;
  l.initial_J = s.initial_J;
  l.final_J = s.remaining_J.value();
  return l;
}

const NodeOutcome* SimResult::find(std::string_view id) const {
  const auto it = std::find_if(nodes.begin(), nodes.end(), [&](const NodeOutcome& n) { return n.id == id; });
  return it == nodes.end() ? nullptr : &*it;
}

SimResult run(const Scenario& s, const RunOptions& options) {
  const auto diags = validate(s);
  for (const auto& d : diags) {
    if (d.severity == Severity::Error) throw SimulationError("scenario rejected: " + format_diagnostic(d));
  }

  const std::size_t n = s.nodes.size();
  std::vector<const LinkTech*> links(n);
  std::vector<NodeLoad> base(n);
  std::vector<NodeState> states(n);
  for (std::size_t i = 0; i < n; ++i) {
    links[i] = s.find_link(s.nodes[i].link);
    base[i] = node_load(s.nodes[i], *links[i]);
    states[i] = NodeState::full(s.nodes[i].battery.energy_joules());
  }

  std::mt19937_64 rng(s.seed);
  const bool jitter = s.jitter > 0.0;
  std::vector<NodeLoad> loads = base;
  std::vector<char> was_alive(n, 1);

  if (options.trace) *options.trace << "t_end_s,node,link,remaining_J,alive,consumed_J,tx_bps\n";

  SimResult result;
  result.duration_s = s.duration_s;

  for (std::uint64_t k = 0;; ++k) {
    const double t0 = static_cast<double>(k) * s.epoch_s;
    if (!(t0 < s.duration_s)) break;
    const double dt = std::min(s.epoch_s, s.duration_s - t0);

    if (jitter) {
      for (std::size_t i = 0; i < n; ++i) {
        if (!states[i].alive) continue;
        const double factor = 1.0 + s.jitter * (2.0 * unit_uniform(rng) - 1.0);
        loads[i] = jittered(s.nodes[i], *links[i], base[i], factor);
      }
      for (const auto& link : s.links) {
        std::vector<RateDemand> demands;
        for (std::size_t i = 0; i < n; ++i) {
          if (states[i].alive && links[i] == &link) demands.push_back({s.nodes[i].id, loads[i].tx_rate});
        }
        try {
          allocate_tdma(link, demands);
        } catch (const CapacityError& e) {
          throw SimulationError(std::string("admission failed at t=") + format_number(t0) + " s: " + e.what());
        }
      }
    }

    for (std::size_t i = 0; i < n; ++i) {
      if (options.trace) was_alive[i] = states[i].alive;
      if (!states[i].alive) continue;
      advance(states[i], loads[i], t0, dt);
      ++result.event_count;
    }
    ++result.epochs;

    if (options.trace) {
      for (std::size_t i = 0; i < n; ++i) {
        const auto l = ledger_of(states[i]);
        // Admitted rate this epoch; zero once the node was dead at its start.
        const double tx = was_alive[i] ? loads[i].tx_rate.bps : 0.0;
        *options.trace << format_number(t0 + dt) << ',' << csv_field(s.nodes[i].id) << ','
                       << csv_field(s.nodes[i].link) << ',' << format_number(l.final_J) << ','
                       << (states[i].alive ? 1 : 0) << ',' << format_number(l.consumed_J) << ','
                       << format_number(tx) << '\n';
      }
    }
  }

  double total_rx_bits = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& spec = s.nodes[i];
    const auto& st = states[i];
    NodeOutcome o;
    o.id = spec.id;
    o.device_class = spec.device_class.name;
    o.architecture = spec.architecture;
    o.link = spec.link;
    o.ledger = ledger_of(st);
    o.alive_at_end = st.alive;
    o.death_time_s = st.death_time_s;
    o.bits_sensed = st.bits_sensed;
    o.bits_txed = st.bits_txed;
    o.bits_computed = st.bits_computed;
    total_rx_bits += o.bits_txed;

    const double alive_s = st.death_time_s.value_or(s.duration_s);
    o.avg_power_W = alive_s > 0.0 ? o.ledger.consumed_J / alive_s : 0.0;
    if (st.death_time_s) {
      o.lifetime = Lifetime::from_hours(*st.death_time_s / kSecondsPerHour);
    } else {
      const double net = o.ledger.consumed_J - o.ledger.harvested_J;
      if (net <= 1e-9 * std::max(o.ledger.consumed_J, o.ledger.initial_J)) {
        o.lifetime = Lifetime::perpetual();
      } else {
        const double projected_s = s.duration_s + o.ledger.final_J / (net / s.duration_s);
        o.lifetime = Lifetime::from_hours(projected_s / kSecondsPerHour);
      }
    }
    result.nodes.push_back(std::move(o));
  }

  result.hub_energy_J =
      s.hub.base_power.watts * s.duration_s + s.hub.hub_compute_energy_per_bit.joules_per_bit * total_rx_bits;
  result.hub_avg_power_W = result.hub_energy_J / s.duration_s;
  result.hub_lifetime = battery_life(s.hub.battery, PowerDraw{result.hub_avg_power_W}, HarvesterSpec{});

  for (const auto& link : s.links) {
    double bits = 0.0;
    for (const auto& o : result.nodes) {
      if (o.link == link.name) bits += o.bits_txed;
    }
    const double u = bits / (link.max_rate.bps * s.duration_s);
    result.channel_utilization.push_back({link.name, std::clamp(u, 0.0, 1.0)});
  }
  return result;
}

void write_result_csv(std::ostream& out, const SimResult& r) {
  out << "id,class,architecture,link,avg_power_W,lifetime_h_or_PERPETUAL,consumed_J,harvested_J\n";
  for (const auto& o : r.nodes) {
    out << csv_field(o.id) << ',' << csv_field(o.device_class) << ',' << to_string(o.architecture) << ','
        << csv_field(o.link) << ',' << format_number(o.avg_power_W) << ','
        << (o.lifetime.is_perpetual() ? std::string("PERPETUAL") : format_number(o.lifetime.hours())) << ','
        << format_number(o.ledger.consumed_J) << ',' << format_number(o.ledger.harvested_J) << '\n';
  }
}

}  // namespace iob
