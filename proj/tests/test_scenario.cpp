#include <doctest.h>

#include <algorithm>

#include "iob/scenario.hpp"
#include "support.hpp"

using namespace iob;

namespace {

constexpr const char* kMinimal = R"(
links: [wir]
nodes:
  - id: ecg
    class: biopotential-patch
)";

std::string error_path(const std::string& doc) {
  try {
    parse_scenario(doc);
  } catch (const ScenarioError& e) {
    return e.path();
  }
  return "<no error>";
}

std::string error_text(const std::string& doc) {
  try {
    parse_scenario(doc);
  } catch (const ScenarioError& e) {
    return e.what();
  }
  return "<no error>";
}

bool has_code(const std::vector<Diagnostic>& d, const std::string& code) {
  return std::any_of(d.begin(), d.end(), [&](const Diagnostic& x) { return x.code == code; });
}

}  // namespace

TEST_CASE("default_catalog") {
  const auto cat = default_catalog();
  CHECK(cat.size() >= 5);
  for (const char* name : {"biopotential-patch", "smart-ring/fitness", "earbud-audio", "voice-pendant", "camera-video"}) {
    CHECK_MESSAGE(find_class(cat, name) != nullptr, name);
  }
  CHECK(find_class(cat, "biopotential-patch")->typical_raw_rate.bps == 10e3);
  CHECK(find_class(cat, "camera-video")->default_compression < 1.0);
  for (const auto& c : cat) {
    CHECK(c.sense_model.static_power.watts >= 0.0);
    CHECK(c.sense_model.energy_per_sensed_bit.joules_per_bit >= 0.0);
    CHECK(c.typical_raw_rate.bps > 0.0);
    CHECK(c.default_compression > 0.0);
    CHECK(c.default_compression <= 1.0);
    CHECK_FALSE(c.catalog_note.empty());
  }
  CHECK(default_catalog() == cat);
}

TEST_CASE("minimal document fills defaults") {
  const auto s = parse_scenario(kMinimal);
  CHECK(s.epoch_s == 1.0);
  CHECK(s.schema_version == kSchemaVersion);
  REQUIRE(s.nodes.size() == 1);
  const auto& n = s.nodes[0];
  CHECK(n.link == "wir");
  CHECK(n.raw_rate.bps == 10e3);
  CHECK(n.architecture == Architecture::HubOffload);
  CHECK(n.battery == BatterySpec{1000.0, 3.0});
  CHECK(n.harvester.harvest_power.watts == 0.0);
  CHECK(s.links[0] == wir_link());
  CHECK(s.hub == HubSpec{});
  CHECK(validate(s).empty());

  CHECK(parse_scenario(kMinimal, ParseOptions{60.0}).epoch_s == 60.0);
}

TEST_CASE("unit suffixes at the config boundary") {
  const auto s = parse_scenario(R"(
links:
  - name: body
    energy_per_bit: 100 pJ/bit
    max_rate: 4 Mbps
    propagation: body
nodes:
  - id: a
    class: voice-pendant
    raw_rate: 32 kbps
    harvest: 150 uW
    battery: {capacity: 500 mAh, voltage: 3.7 V}
    placement: {off_body: 5 cm}
duration: 2 d
epoch: 1 min
)");
  CHECK(s.links[0].energy_per_bit.joules_per_bit == doctest::Approx(1e-10).epsilon(1e-15));
  CHECK(s.links[0].max_rate.bps == 4e6);
  CHECK(s.nodes[0].raw_rate.bps == 32e3);
  CHECK(s.nodes[0].harvester.harvest_power.watts == doctest::Approx(150e-6));
  CHECK(s.nodes[0].battery == BatterySpec{500.0, 3.7});
  CHECK(std::get<OffBody>(s.nodes[0].placement).distance_m == doctest::Approx(0.05));
  CHECK(s.duration_s == 172800.0);
  CHECK(s.epoch_s == 60.0);
}

TEST_CASE("parse errors name the offending path") {
  const std::string undefined_link = R"(
links: [wir]
nodes:
  - {id: a, class: biopotential-patch, link: wir2}
)";
  CHECK(error_path(undefined_link) == "nodes[0].link");
  CHECK(error_text(undefined_link).find("wir2") != std::string::npos);

  CHECK(error_path(R"(
links: [wir]
nodes:
  - {id: a, class: biopotential-patch}
  - {id: a, class: earbud-audio}
)") == "nodes[1].id");

  CHECK(error_path(R"(
links: [wir]
nodes:
  - {id: a, class: biopotential-patch, raw_rate: -5 kbps}
)") == "nodes[0].raw_rate");

  const std::string bad_suffix = R"(
links: [wir]
nodes:
  - {id: a, class: biopotential-patch, raw_rate: 5 kbs}
)";
  CHECK(error_path(bad_suffix) == "nodes[0].raw_rate");
  CHECK(error_text(bad_suffix).find("malformed unit suffix") != std::string::npos);

  CHECK(error_path(R"(
links: [wir]
nodes:
  - {id: a, class: no-such-class}
)") == "nodes[0].class");

  CHECK(error_path(R"(
links: [wir]
nodes:
  - {id: a, class: biopotential-patch, colour: red}
)") == "nodes[0].colour");

  CHECK(error_path(R"(
links:
  - {name: x, energy_per_bit: 1 pJ, max_rate: 1 Mbps, propagation: body, carrier_limit: 40 MHz}
nodes:
  - {id: a, class: biopotential-patch}
)") == "links[0]");

  CHECK(error_path(R"(
schema_version: 2
links: [wir]
nodes: [{id: a, class: biopotential-patch}]
)") == "schema_version");

  CHECK(error_path(R"(
links: [wir, ble]
nodes: [{id: a, class: biopotential-patch}]
)") == "nodes[0].link");

  CHECK(error_path(R"(
links: [wir]
nodes:
  - {id: a, class: biopotential-patch, architecture: standalone, result_rate: 20 kbps}
)") == "nodes[0].result_rate");

  CHECK(error_path("links: [wir]\nnodes: [ {id: a") == "<document>");
  CHECK(error_path("") == "<document>");
}

TEST_CASE("document classes override or extend the catalog") {
  const auto s = parse_scenario(R"(
classes:
  - {name: biopotential-patch, sense_static: 1 uW}
  - {name: glucose, typical_rate: 100 bps, sense_energy_per_bit: 1 nJ}
links: [wir]
nodes:
  - {id: a, class: biopotential-patch}
  - {id: b, class: glucose}
)");
  CHECK(s.nodes[0].device_class.sense_model.static_power.watts == doctest::Approx(1e-6));
  CHECK(s.nodes[0].device_class.sense_model.energy_per_sensed_bit.joules_per_bit == doctest::Approx(0.3e-9));
  CHECK(s.nodes[1].raw_rate.bps == 100.0);
}

TEST_CASE("validate") {
  SUBCASE("overloaded Wi-R channel") {
    const auto s = parse_scenario(R"(
links: [wir]
nodes:
  - {id: a, class: camera-video, raw_rate: 3 Mbps, compression: 1}
  - {id: b, class: camera-video, raw_rate: 2 Mbps, compression: 1}
)");
    const auto d = validate(s);
    REQUIRE(has_errors(d));
    REQUIRE(has_code(d, "link-overload"));
    const auto& diag = *std::find_if(d.begin(), d.end(), [](const Diagnostic& x) { return x.code == "link-overload"; });
    CHECK(diag.path == "links[0]");
    CHECK(diag.message.find("wir") != std::string::npos);
    CHECK(diag.message.find("by 1e+06 bps") != std::string::npos);
  }
  SUBCASE("well-formed single node") { CHECK(validate(parse_scenario(kMinimal)).empty()); }
  SUBCASE("harvest band warning") {
    auto s = parse_scenario(kMinimal);
    s.nodes[0].device_class.sense_model = {{500e-6}, {0.0}};
    s.nodes[0].harvester = {{200e-6}};
    const auto d = validate(s);
    CHECK_FALSE(has_errors(d));
    REQUIRE(d.size() == 1);
    CHECK(d[0].severity == Severity::Warning);
    CHECK(d[0].code == "harvest-band");
    CHECK(d[0].path == "nodes[0].harvest");
  }
  SUBCASE("jitter is admitted at peak demand") {
    auto s = parse_scenario(R"(
links: [wir]
nodes:
  - {id: a, class: camera-video, raw_rate: 3.8 Mbps, compression: 1}
)");
    CHECK(validate(s).empty());
    s.jitter = 0.1;
    CHECK(has_code(validate(s), "link-overload"));
  }
  SUBCASE("code-built scenarios get the same structural checks") {
    auto s = parse_scenario(kMinimal);
    s.nodes.push_back(s.nodes[0]);
    s.nodes[0].link = "nope";
    s.epoch_s = 0.0;
    const auto d = validate(s);
    CHECK(has_code(d, "duplicate-id"));
    CHECK(has_code(d, "unresolved-link"));
    CHECK(has_code(d, "invalid-quantity"));
    for (const auto& x : d) {
      CHECK_FALSE(x.code.empty());
      CHECK_FALSE(x.path.empty());
    }
  }
}

TEST_CASE("catalog instantiated on Wi-R with default cells validates") {
  Scenario s;
  s.links = {wir_link()};
  for (const auto& c : default_catalog()) {
    NodeSpec n;
    n.id = c.name;
    n.device_class = c;
    n.raw_rate = c.typical_raw_rate;
    n.compute.compression_factor = c.default_compression;
    n.link = "wir";
    s.nodes.push_back(n);
  }
  CHECK(validate(s).empty());
}

TEST_CASE("property: parse(serialize(s)) == s") {
  test::Gen g(21);
  for (int i = 0; i < 200; ++i) {
    const auto s = test::random_scenario(g);
    REQUIRE_FALSE(has_errors(validate(s)));
    const auto text = serialize_scenario(s);
    const auto back = parse_scenario(text);
    CHECK(back == s);
    CHECK(serialize_scenario(back) == text);
  }
}

TEST_CASE("shipped example scenarios parse and validate") {
  for (const char* name : {"catalog-wir.scn", "architectures.scn", "harvesting.scn", "year-10-nodes.scn"}) {
    const auto path = std::string(IOBSIM_SCENARIO_DIR) + "/" + name;
    const auto s = load_scenario(path);
    CHECK_MESSAGE(!has_errors(validate(s)), name);
  }
}
