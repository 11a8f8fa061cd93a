#include <doctest.h>

#include <map>
#include <sstream>

#include "iob/sim_engine.hpp"
#include "support.hpp"

using namespace iob;

namespace {

constexpr double kHour = 3600.0;
constexpr double kOneBitOnWir = 100e-12;  // 1 bps at 100 pJ/bit

DeviceClass fixed_load(double watts) {
  DeviceClass c;
  c.name = "fixed";
  c.sense_model = {{watts}, {0.0}};
  c.typical_raw_rate = {1.0};
  c.default_compression = 1.0;
  c.catalog_note = "constant draw";
  return c;
}

Scenario fixed_node(double watts, double duration_s, double epoch_s) {
  return test::single_node(fixed_load(watts), duration_s, epoch_s);
}

std::string csv_of(const SimResult& r) {
  std::ostringstream out;
  write_result_csv(out, r);
  return out.str();
}

double life_or_inf(const Lifetime& l) { return l.is_perpetual() ? HUGE_VAL : l.hours(); }

}  // namespace

TEST_CASE("run: a 6 uW patch over 1000 h") {
  const auto cat = default_catalog();
  const auto s = test::single_node(*find_class(cat, "biopotential-patch"), 1000 * kHour, kHour);
  const auto r = run(s);
  REQUIRE(r.nodes.size() == 1);
  const auto& o = r.nodes[0];
  CHECK(o.alive_at_end);
  CHECK_FALSE(o.death_time_s.has_value());
  // 6e-6 W * 3.6e6 s
  CHECK(o.ledger.consumed_J == doctest::Approx(21.6).epsilon(1e-12));
  CHECK(o.ledger.final_J == doctest::Approx(10800.0 - 21.6).epsilon(1e-12));
  CHECK(o.avg_power_W == doctest::Approx(6e-6).epsilon(1e-12));
  CHECK(o.lifetime.hours() == doctest::Approx(500000.0).epsilon(1e-9));
  CHECK(r.epochs == 1000);
  CHECK(r.event_count == 1000);
}

TEST_CASE("run: harvest covering the load keeps the cell full") {
  const auto cat = default_catalog();
  auto s = test::single_node(*find_class(cat, "biopotential-patch"), 1000 * kHour, kHour);
  s.nodes[0].harvester = {{10e-6}};
  const auto o = run(s).nodes[0];
  CHECK(o.alive_at_end);
  CHECK(o.ledger.final_J == o.ledger.initial_J);
  CHECK(o.lifetime.is_perpetual());
  CHECK(o.ledger.harvested_J == doctest::Approx(o.ledger.consumed_J).epsilon(1e-9));
  CHECK(o.ledger.conservation_error() <= 1e-12);
}

TEST_CASE("run: 3 mW drains a 10.8 kJ cell at 1000 h") {
  const auto r = run(fixed_node(3e-3, 2000 * kHour, kHour));
  const auto& o = r.nodes[0];
  CHECK_FALSE(o.alive_at_end);
  REQUIRE(o.death_time_s.has_value());
  const double expect_h = test::closed_form_life_h(10800.0, 3e-3 + kOneBitOnWir);
  CHECK(*o.death_time_s / kHour == doctest::Approx(expect_h).epsilon(1e-12));
  CHECK(o.lifetime.hours() == doctest::Approx(1000.0).epsilon(1e-6));
  CHECK(o.ledger.final_J == 0.0);
  CHECK(o.ledger.consumed_J == doctest::Approx(10800.0).epsilon(1e-12));
  CHECK(r.event_count == 1000);
}

TEST_CASE("run: death inside an epoch is interpolated") {
  // 10800 J / 7 mW is about 1542857 s, not on an hour boundary.
  const auto o = run(fixed_node(7e-3, 1000 * kHour, kHour)).nodes[0];
  REQUIRE(o.death_time_s.has_value());
  CHECK(*o.death_time_s == doctest::Approx(10800.0 / (7e-3 + kOneBitOnWir)).epsilon(1e-12));
  CHECK(o.ledger.conservation_error() <= 1e-12);
}

TEST_CASE("step") {
  const NodeLoad load{.sense = {1e-3}};
  const auto full = NodeState::full(10.0);

  CHECK(step(full, load, 0.0, 0.0) == full);

  const auto next = step(full, load, 0.0, 1.0);
  CHECK(next.remaining_J.value() == doctest::Approx(10.0 - 1e-3).epsilon(1e-15));
  CHECK(next.sensed_J.value() == doctest::Approx(1e-3).epsilon(1e-15));
  CHECK(next.alive);

  auto dead = NodeState::full(1e-3);
  dead = step(dead, load, 0.0, 2.0);
  CHECK_FALSE(dead.alive);
  REQUIRE(dead.death_time_s.has_value());
  CHECK(*dead.death_time_s == doctest::Approx(1.0));
  CHECK(step(dead, load, 2.0, 5.0) == dead);
}

TEST_CASE("run rejects scenarios that fail admission") {
  auto s = fixed_node(1e-3, kHour, 60.0);
  s.nodes[0].raw_rate = {5e6};
  CHECK_THROWS_AS(run(s), SimulationError);
  s.nodes[0].raw_rate = {1e3};
  s.nodes[0].link = "missing";
  CHECK_THROWS_AS(run(s), SimulationError);
}

TEST_CASE("hub accounting and channel utilization") {
  const auto cat = default_catalog();
  auto s = test::single_node(*find_class(cat, "earbud-audio"), 100 * kHour, kHour);
  const auto r = run(s);
  const double bits = 256e3 * 100 * kHour;
  CHECK(r.nodes[0].bits_txed == doctest::Approx(bits).epsilon(1e-12));
  CHECK(r.hub_energy_J == doctest::Approx(0.15 * 100 * kHour + 1e-9 * bits).epsilon(1e-12));
  CHECK(r.hub_avg_power_W == doctest::Approx(0.15 + 1e-9 * 256e3).epsilon(1e-12));
  // 5000 mAh * 3.8 V = 68400 J
  CHECK(r.hub_lifetime.hours() == doctest::Approx(68400.0 / (0.15 + 256e-6) / kHour).epsilon(1e-12));
  REQUIRE(r.channel_utilization.size() == 1);
  CHECK(r.channel_utilization[0].link == "wir");
  CHECK(r.channel_utilization[0].utilization == doctest::Approx(256e3 / 4e6).epsilon(1e-12));
}

TEST_CASE("trace marks dead nodes with zero rate") {
  auto s = fixed_node(3e-3, 3 * kHour, kHour);
  s.nodes[0].battery = {1.0, 3.0};  // 10.8 J, dead after 3600 s
  s.nodes[0].raw_rate = {100.0};
  std::ostringstream trace;
  run(s, {.trace = &trace});
  std::istringstream in(trace.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "t_end_s,node,link,remaining_J,alive,consumed_J,tx_bps");
  std::vector<std::string> rows;
  while (std::getline(in, line)) rows.push_back(line);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].rfind("3600,n0,wir,", 0) == 0);
  CHECK(rows[0].substr(rows[0].size() - 4) == ",100");
  CHECK(rows[1].substr(rows[1].size() - 2) == ",0");
  CHECK(rows[2].substr(rows[2].size() - 2) == ",0");
}

TEST_CASE("property: ledger conservation") {
  test::Gen g(31);
  for (int i = 0; i < 150; ++i) {
    const auto s = test::random_scenario(g);
    const auto r = run(s);
    for (const auto& o : r.nodes) {
      const auto& l = o.ledger;
      CHECK(l.conservation_error() <= 1e-9);
      CHECK(l.final_J >= 0.0);
      CHECK(l.final_J <= l.initial_J * (1 + 1e-12));
      CHECK(l.consumed_J == l.sensed_J + l.compute_J + l.comm_J);
      CHECK(o.alive_at_end != o.death_time_s.has_value());
    }
    for (const auto& u : r.channel_utilization) {
      CHECK(u.utilization >= 0.0);
      CHECK(u.utilization <= 1.0);
    }
  }
}

TEST_CASE("property: simulated death agrees with the closed form within one epoch") {
  test::Gen g(32);
  int deaths = 0;
  for (int i = 0; i < 150; ++i) {
    const auto s = test::random_scenario(g, false);
    const auto r = run(s);
    for (std::size_t k = 0; k < s.nodes.size(); ++k) {
      const auto& spec = s.nodes[k];
      const auto& link = *s.find_link(spec.link);
      const auto& o = r.nodes[k];
      // Hand-rolled power: affine sensing, per-bit compute, affine link.
      const double raw = spec.raw_rate.bps;
      const double tx = spec.architecture == Architecture::HubOffload
                            ? raw * spec.compute.compression_factor
                            : (spec.result_rate ? spec.result_rate->bps : raw * 0.01);
      const double e_compute = spec.architecture == Architecture::HubOffload
                                   ? spec.compute.isa_energy_per_bit.joules_per_bit
                                   : spec.compute.local_compute_energy_per_bit.joules_per_bit;
      const double p = spec.device_class.sense_model.static_power.watts +
                       spec.device_class.sense_model.energy_per_sensed_bit.joules_per_bit * raw + e_compute * raw +
                       link.static_power.watts + link.energy_per_bit.joules_per_bit * tx;
      const double h = spec.harvester.harvest_power.watts;
      const double e = test::battery_joules(spec.battery.capacity_mah, spec.battery.nominal_voltage_v);
      CHECK(o.avg_power_W == doctest::Approx(p).epsilon(1e-9));
      if (p <= h) {
        CHECK(o.alive_at_end);
        CHECK(o.lifetime.is_perpetual());
        continue;
      }
      const double life_s = test::closed_form_life_h(e, p, h) * kHour;
      if (life_s < s.duration_s) {
        ++deaths;
        REQUIRE(o.death_time_s.has_value());
        CHECK(std::fabs(*o.death_time_s - life_s) <= s.epoch_s);
      } else if (life_s > s.duration_s + s.epoch_s) {
        CHECK(o.alive_at_end);
        REQUIRE_FALSE(o.lifetime.is_perpetual());
        CHECK(o.lifetime.hours() * kHour == doctest::Approx(life_s).epsilon(1e-6));
      }
    }
  }
  CHECK(deaths > 20);
}

TEST_CASE("property: identical scenarios give identical results") {
  test::Gen g(33);
  for (int i = 0; i < 40; ++i) {
    auto s = test::random_scenario(g);
    if (i % 2 == 0) s.jitter = 0.2 * g.uniform(0.1, 1.0);
    std::ostringstream t1, t2;
    const auto a = run(s, {.trace = &t1});
    const auto b = run(s, {.trace = &t2});
    CHECK(csv_of(a) == csv_of(b));
    CHECK(t1.str() == t2.str());
    CHECK(a.hub_energy_J == b.hub_energy_J);
  }
}

TEST_CASE("property: jitter changes with the seed") {
  const auto cat = default_catalog();
  auto s = test::single_node(*find_class(cat, "earbud-audio"), 10 * kHour, 60.0);
  s.jitter = 0.2;
  s.seed = 1;
  const auto a = run(s);
  s.seed = 2;
  const auto b = run(s);
  CHECK(a.nodes[0].ledger.consumed_J != b.nodes[0].ledger.consumed_J);
}

TEST_CASE("property: more data never lengthens life") {
  test::Gen g(34);
  for (int i = 0; i < 100; ++i) {
    auto s = test::random_scenario(g, false);
    const auto base = run(s);
    const std::size_t k = static_cast<std::size_t>(g.integer(0, static_cast<int>(s.nodes.size()) - 1));
    s.nodes[k].raw_rate = s.nodes[k].raw_rate * g.uniform(1.0, 1.5);
    if (has_errors(validate(s))) continue;
    const auto more = run(s);
    CHECK(life_or_inf(more.nodes[k].lifetime) <= life_or_inf(base.nodes[k].lifetime) * (1 + 1e-12));
    CHECK(more.nodes[k].avg_power_W >= base.nodes[k].avg_power_W * (1 - 1e-12));
  }
}

TEST_CASE("property: admitted rates never exceed link capacity") {
  test::Gen g(35);
  for (int i = 0; i < 60; ++i) {
    auto s = test::random_scenario(g);
    s.jitter = g.uniform(0.0, 0.3);
    if (has_errors(validate(s))) continue;
    std::ostringstream trace;
    run(s, {.trace = &trace});
    std::istringstream in(trace.str());
    std::string line;
    std::getline(in, line);
    std::map<std::pair<std::string, std::string>, double> load;
    while (std::getline(in, line)) {
      std::vector<std::string> f;
      std::stringstream ss(line);
      for (std::string x; std::getline(ss, x, ',');) f.push_back(x);
      REQUIRE(f.size() == 7);
      load[{f[0], f[2]}] += std::stod(f[6]);
    }
    for (const auto& [key, bps] : load) CHECK(bps <= s.find_link(key.second)->max_rate.bps);
  }
}
