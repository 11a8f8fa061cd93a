#include "iob/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "iob/units.hpp"

namespace iob {

std::vector<DeviceClass> default_catalog() {
  // Sensing models are affine calibration constants (static + per-bit),
  // tuned so that each class lands in its expected lifetime band on Wi-R
  // with a 1000 mAh / 3.0 V cell.
  return {
      {"biopotential-patch",
       {PowerDraw{2e-6}, EnergyPerBit{0.3e-9}},
       BitRate{10e3},
       1.0,
       "ECG/EMG/EEG patch; standalone devices of this kind last about a week today"},
      {"smart-ring/fitness",
       {PowerDraw{10e-6}, EnergyPerBit{0.3e-9}},
       BitRate{5e3},
       1.0,
       "smart ring or fitness tracker (PPG, IMU); typically all-week battery life today"},
      {"earbud-audio",
       {PowerDraw{4e-3}, EnergyPerBit{1e-9}},
       BitRate{256e3},
       1.0,
       "earbud with microphone and speaker drive; hours to all-day today"},
      {"voice-pendant",
       {PowerDraw{2e-3}, EnergyPerBit{1e-9}},
       BitRate{64e3},
       1.0,
       "voice-input AI pendant or pin; all-day battery life today"},
      {"camera-video",
       {PowerDraw{50e-3}, EnergyPerBit{0.5e-9}},
       BitRate{10e6},
       0.2,
       "first-person camera (glasses, chest pin) with MJPEG-style compression; hours today"},
  };
}

const DeviceClass* find_class(const std::vector<DeviceClass>& catalog, std::string_view name) {
  const auto it = std::find_if(catalog.begin(), catalog.end(),
                               [&](const DeviceClass& c) { return c.name == name; });
  return it == catalog.end() ? nullptr : &*it;
}

std::string_view to_string(Architecture a) {
  return a == Architecture::HubOffload ? "hub-offload" : "standalone";
}

const LinkTech* Scenario::find_link(std::string_view name) const {
  const auto it =
      std::find_if(links.begin(), links.end(), [&](const LinkTech& l) { return l.name == name; });
  return it == links.end() ? nullptr : &*it;
}

const NodeSpec* Scenario::find_node(std::string_view id) const {
  const auto it =
      std::find_if(nodes.begin(), nodes.end(), [&](const NodeSpec& n) { return n.id == id; });
  return it == nodes.end() ? nullptr : &*it;
}

ScenarioError::ScenarioError(std::string path, const std::string& message)
    : std::runtime_error(path + ": " + message), path_(std::move(path)) {}

namespace {

// ---------------------------------------------------------------------------
// Structural checks, shared by parse_scenario (throws the first error) and
// validate (reports all of them).

class DiagSink {
 public:
  void error(std::string code, std::string path, std::string msg) {
    out_.push_back({Severity::Error, std::move(code), std::move(path), std::move(msg)});
  }
  void warning(std::string code, std::string path, std::string msg) {
    out_.push_back({Severity::Warning, std::move(code), std::move(path), std::move(msg)});
  }
  std::vector<Diagnostic>& items() { return out_; }

 private:
  std::vector<Diagnostic> out_;
};

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }
bool finite_pos(double v) { return std::isfinite(v) && v > 0.0; }

void check_battery(const BatterySpec& b, const std::string& path, DiagSink& sink) {
  if (!finite_pos(b.capacity_mah)) sink.error("invalid-quantity", path + ".capacity", "battery capacity must be positive");
  if (!finite_pos(b.nominal_voltage_v)) sink.error("invalid-quantity", path + ".voltage", "battery voltage must be positive");
}

void check_class(const DeviceClass& c, const std::string& path, DiagSink& sink) {
  if (!finite_nonneg(c.sense_model.static_power.watts)) {
    sink.error("invalid-quantity", path + ".sense_static", "sensing static power must be non-negative");
  }
  if (!finite_nonneg(c.sense_model.energy_per_sensed_bit.joules_per_bit)) {
    sink.error("invalid-quantity", path + ".sense_energy_per_bit", "sensing energy per bit must be non-negative");
  }
  if (!finite_pos(c.typical_raw_rate.bps)) {
    sink.error("invalid-quantity", path + ".typical_rate", "typical rate must be positive");
  }
  if (!(c.default_compression > 0.0 && c.default_compression <= 1.0)) {
    sink.error("invalid-quantity", path + ".compression", "compression must be in (0, 1]");
  }
}

void check_structure(const Scenario& s, DiagSink& sink) {
  if (s.schema_version != kSchemaVersion) {
    sink.error("schema-version", "schema_version",
               "unsupported schema version " + std::to_string(s.schema_version));
  }
  if (!finite_pos(s.duration_s)) sink.error("invalid-quantity", "duration", "duration must be positive");
  if (!finite_pos(s.epoch_s)) sink.error("invalid-quantity", "epoch", "epoch must be positive");
  if (!(std::isfinite(s.jitter) && s.jitter >= 0.0 && s.jitter < 1.0)) {
    sink.error("invalid-quantity", "jitter", "jitter must be in [0, 1)");
  }

  std::set<std::string> link_names;
  for (std::size_t i = 0; i < s.links.size(); ++i) {
    const auto path = "links[" + std::to_string(i) + "]";
    const auto& link = s.links[i];
    if (link.name.empty()) sink.error("missing-name", path + ".name", "link name is empty");
    if (!link_names.insert(link.name).second) {
      sink.error("duplicate-id", path + ".name", "duplicate link name '" + link.name + "'");
    }
    for (auto& p : link_problems(link)) sink.error("invalid-link", path, "link '" + link.name + "': " + p);
  }

  check_battery(s.hub.battery, "hub.battery", sink);
  if (!finite_nonneg(s.hub.base_power.watts)) sink.error("invalid-quantity", "hub.base_power", "hub base power must be non-negative");
  if (!finite_nonneg(s.hub.hub_compute_energy_per_bit.joules_per_bit)) {
    sink.error("invalid-quantity", "hub.compute_energy_per_bit", "hub compute energy must be non-negative");
  }

  std::set<std::string> ids;
  for (std::size_t i = 0; i < s.nodes.size(); ++i) {
    const auto path = "nodes[" + std::to_string(i) + "]";
    const auto& n = s.nodes[i];
    if (n.id.empty()) sink.error("missing-name", path + ".id", "node id is empty");
    if (!ids.insert(n.id).second) sink.error("duplicate-id", path + ".id", "duplicate node id '" + n.id + "'");
    check_class(n.device_class, path + ".class", sink);
    if (!finite_pos(n.raw_rate.bps)) sink.error("invalid-quantity", path + ".raw_rate", "raw rate must be positive");
    const auto& c = n.compute;
    if (!(c.compression_factor > 0.0 && c.compression_factor <= 1.0)) {
      sink.error("invalid-quantity", path + ".compression", "compression must be in (0, 1]");
    }
    if (!finite_nonneg(c.isa_energy_per_bit.joules_per_bit)) {
      sink.error("invalid-quantity", path + ".isa_energy_per_bit", "ISA energy must be non-negative");
    }
    if (!finite_nonneg(c.local_compute_energy_per_bit.joules_per_bit)) {
      sink.error("invalid-quantity", path + ".local_compute_energy_per_bit", "local compute energy must be non-negative");
    }
    if (n.result_rate) {
      if (!finite_nonneg(n.result_rate->bps)) {
        sink.error("invalid-quantity", path + ".result_rate", "result rate must be non-negative");
      } else if (*n.result_rate > n.raw_rate) {
        sink.error("invalid-quantity", path + ".result_rate", "result rate exceeds raw rate");
      }
    }
    check_battery(n.battery, path + ".battery", sink);
    if (!finite_nonneg(n.harvester.harvest_power.watts)) {
      sink.error("invalid-quantity", path + ".harvest", "harvest power must be non-negative");
    }
    if (const auto* off = std::get_if<OffBody>(&n.placement); off && !finite_pos(off->distance_m)) {
      sink.error("invalid-quantity", path + ".placement", "off-body distance must be positive");
    }
    if (s.find_link(n.link) == nullptr) {
      sink.error("unresolved-link", path + ".link", "undefined link '" + n.link + "'");
    }
  }
}

// ---------------------------------------------------------------------------
// YAML reading helpers.

std::string key_path(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

void check_keys(const YAML::Node& map, const std::string& path,
                std::initializer_list<std::string_view> allowed) {
  if (!map.IsMap()) throw ScenarioError(path.empty() ? "<document>" : path, "expected a mapping");
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ScenarioError(key_path(path, key), "unknown key");
    }
  }
}

std::string read_string(const YAML::Node& v, const std::string& path) {
  if (!v.IsScalar()) throw ScenarioError(path, "expected a string");
  return v.Scalar();
}

double read_quantity(const YAML::Node& v, const std::string& path, Dimension dim) {
  if (!v.IsScalar()) throw ScenarioError(path, "expected a quantity");
  double value = 0.0;
  try {
    value = parse_quantity(v.Scalar(), dim);
  } catch (const UnitError& e) {
    throw ScenarioError(path, e.what());
  }
  if (value < 0.0) throw ScenarioError(path, "negative quantity '" + v.Scalar() + "'");
  return value;
}

// Reads map[key] into `out` when present.
void opt_quantity(const YAML::Node& map, const std::string& path, std::string_view key,
                  Dimension dim, double& out) {
  if (const auto v = map[std::string(key)]) out = read_quantity(v, key_path(path, key), dim);
}

double req_quantity(const YAML::Node& map, const std::string& path, std::string_view key,
                    Dimension dim) {
  const auto v = map[std::string(key)];
  if (!v) throw ScenarioError(key_path(path, key), "missing required field");
  return read_quantity(v, key_path(path, key), dim);
}

BatterySpec read_battery(const YAML::Node& v, const std::string& path, BatterySpec battery) {
  check_keys(v, path, {"capacity", "voltage"});
  opt_quantity(v, path, "capacity", Dimension::Charge, battery.capacity_mah);
  opt_quantity(v, path, "voltage", Dimension::Voltage, battery.nominal_voltage_v);
  return battery;
}

Placement read_placement(const YAML::Node& v, const std::string& path) {
  if (v.IsScalar()) return OnBody{v.Scalar()};
  check_keys(v, path, {"on_body", "off_body"});
  if (v["on_body"] && v["off_body"]) throw ScenarioError(path, "placement is either on_body or off_body");
  if (const auto on = v["on_body"]) return OnBody{read_string(on, key_path(path, "on_body"))};
  if (const auto off = v["off_body"]) {
    const double d = read_quantity(off, key_path(path, "off_body"), Dimension::Distance);
    if (!(d > 0.0)) throw ScenarioError(key_path(path, "off_body"), "off-body distance must be positive");
    return OffBody{d};
  }
  throw ScenarioError(path, "expected on_body or off_body");
}

void read_class(const YAML::Node& v, const std::string& path, std::vector<DeviceClass>& catalog) {
  check_keys(v, path, {"name", "sense_static", "sense_energy_per_bit", "typical_rate", "compression", "note"});
  if (!v["name"]) throw ScenarioError(key_path(path, "name"), "missing required field");
  const auto name = read_string(v["name"], key_path(path, "name"));

  DeviceClass* existing = nullptr;
  for (auto& c : catalog) {
    if (c.name == name) existing = &c;
  }
  DeviceClass c;
  if (existing) {
    c = *existing;
  } else {
    c.name = name;
  }
  opt_quantity(v, path, "sense_static", Dimension::Power, c.sense_model.static_power.watts);
  opt_quantity(v, path, "sense_energy_per_bit", Dimension::EnergyPerBit,
               c.sense_model.energy_per_sensed_bit.joules_per_bit);
  if (!existing && !v["typical_rate"]) throw ScenarioError(key_path(path, "typical_rate"), "missing required field");
  opt_quantity(v, path, "typical_rate", Dimension::BitRate, c.typical_raw_rate.bps);
  opt_quantity(v, path, "compression", Dimension::Dimensionless, c.default_compression);
  if (const auto note = v["note"]) c.catalog_note = read_string(note, key_path(path, "note"));

  DiagSink sink;
  check_class(c, path, sink);
  if (!sink.items().empty()) throw ScenarioError(sink.items().front().path, sink.items().front().message);

  if (existing) {
    *existing = std::move(c);
  } else {
    catalog.push_back(std::move(c));
  }
}

LinkTech read_link(const YAML::Node& v, const std::string& path) {
  const auto preset_named = [&](const std::string& name, const std::string& at) {
    for (auto& l : default_links()) {
      if (l.name == name) return l;
    }
    throw ScenarioError(at, "unknown link preset '" + name + "' (expected wir or ble)");
  };
  if (v.IsScalar()) return preset_named(v.Scalar(), path);

  check_keys(v, path, {"name", "preset", "energy_per_bit", "static_power", "max_rate", "propagation",
                       "bubble", "radius", "carrier_limit"});
  if (!v["name"]) throw ScenarioError(key_path(path, "name"), "missing required field");
  LinkTech link;
  if (const auto p = v["preset"]) {
    link = preset_named(read_string(p, key_path(path, "preset")), key_path(path, "preset"));
  } else {
    link.energy_per_bit.joules_per_bit = req_quantity(v, path, "energy_per_bit", Dimension::EnergyPerBit);
    link.max_rate.bps = req_quantity(v, path, "max_rate", Dimension::BitRate);
    if (!v["propagation"]) throw ScenarioError(key_path(path, "propagation"), "missing required field");
  }
  link.name = read_string(v["name"], key_path(path, "name"));
  opt_quantity(v, path, "energy_per_bit", Dimension::EnergyPerBit, link.energy_per_bit.joules_per_bit);
  opt_quantity(v, path, "static_power", Dimension::Power, link.static_power.watts);
  opt_quantity(v, path, "max_rate", Dimension::BitRate, link.max_rate.bps);

  if (const auto prop = v["propagation"]) {
    const auto kind = read_string(prop, key_path(path, "propagation"));
    if (kind == "body") {
      if (!link.body_contained()) link.propagation = BodyContained{};
    } else if (kind == "radiative") {
      if (link.body_contained()) link.propagation = Radiative{};
    } else {
      throw ScenarioError(key_path(path, "propagation"), "expected 'body' or 'radiative', got '" + kind + "'");
    }
    if (!v["preset"]) link.carrier_limit_hz = link.body_contained() ? kEqsCarrierLimitHz : 2.4e9;
  }
  if (auto* body = std::get_if<BodyContained>(&link.propagation)) {
    if (v["radius"]) throw ScenarioError(key_path(path, "radius"), "radius applies to radiative links only");
    opt_quantity(v, path, "bubble", Dimension::Distance, body->bubble_m);
  } else {
    if (v["bubble"]) throw ScenarioError(key_path(path, "bubble"), "bubble applies to body links only");
    opt_quantity(v, path, "radius", Dimension::Distance, std::get<Radiative>(link.propagation).radius_m);
  }
  opt_quantity(v, path, "carrier_limit", Dimension::Frequency, link.carrier_limit_hz);

  if (auto problems = link_problems(link); !problems.empty()) throw ScenarioError(path, problems.front());
  return link;
}

NodeSpec read_node(const YAML::Node& v, const std::string& path,
                   const std::vector<DeviceClass>& catalog, const std::vector<LinkTech>& links) {
  check_keys(v, path, {"id", "class", "raw_rate", "architecture", "compression", "isa_energy_per_bit",
                       "local_compute_energy_per_bit", "result_rate", "battery", "harvest", "placement",
                       "link"});
  NodeSpec n;
  if (!v["id"]) throw ScenarioError(key_path(path, "id"), "missing required field");
  n.id = read_string(v["id"], key_path(path, "id"));

  if (!v["class"]) throw ScenarioError(key_path(path, "class"), "missing required field");
  const auto class_name = read_string(v["class"], key_path(path, "class"));
  const auto* cls = find_class(catalog, class_name);
  if (!cls) throw ScenarioError(key_path(path, "class"), "undefined device class '" + class_name + "'");
  n.device_class = *cls;
  n.raw_rate = cls->typical_raw_rate;
  n.compute.compression_factor = cls->default_compression;

  opt_quantity(v, path, "raw_rate", Dimension::BitRate, n.raw_rate.bps);
  if (const auto a = v["architecture"]) {
    const auto arch = read_string(a, key_path(path, "architecture"));
    if (arch == "hub-offload") {
      n.architecture = Architecture::HubOffload;
    } else if (arch == "standalone") {
      n.architecture = Architecture::Standalone;
    } else {
      throw ScenarioError(key_path(path, "architecture"),
                          "expected 'hub-offload' or 'standalone', got '" + arch + "'");
    }
  }
  opt_quantity(v, path, "compression", Dimension::Dimensionless, n.compute.compression_factor);
  opt_quantity(v, path, "isa_energy_per_bit", Dimension::EnergyPerBit, n.compute.isa_energy_per_bit.joules_per_bit);
  opt_quantity(v, path, "local_compute_energy_per_bit", Dimension::EnergyPerBit,
               n.compute.local_compute_energy_per_bit.joules_per_bit);
  if (const auto r = v["result_rate"]) {
    n.result_rate = BitRate{read_quantity(r, key_path(path, "result_rate"), Dimension::BitRate)};
  }
  if (const auto b = v["battery"]) n.battery = read_battery(b, key_path(path, "battery"), n.battery);
  opt_quantity(v, path, "harvest", Dimension::Power, n.harvester.harvest_power.watts);
  if (const auto p = v["placement"]) n.placement = read_placement(p, key_path(path, "placement"));

  if (const auto l = v["link"]) {
    n.link = read_string(l, key_path(path, "link"));
  } else if (links.size() == 1) {
    n.link = links.front().name;
  } else {
    throw ScenarioError(key_path(path, "link"), "missing required field (scenario defines " +
                                                    std::to_string(links.size()) + " links)");
  }
  return n;
}

Scenario read_scenario(const YAML::Node& root, const ParseOptions& options) {
  if (!root || root.IsNull()) throw ScenarioError("<document>", "empty document");
  check_keys(root, "", {"schema_version", "seed", "duration", "epoch", "jitter", "classes", "links", "hub", "nodes"});

  Scenario s;
  s.epoch_s = options.default_epoch_s;
  if (const auto v = root["schema_version"]) {
    try {
      s.schema_version = v.as<int>();
    } catch (const YAML::Exception&) {
      throw ScenarioError("schema_version", "expected an integer");
    }
    if (s.schema_version != kSchemaVersion) {
      throw ScenarioError("schema_version", "unsupported schema version " + std::to_string(s.schema_version));
    }
  }
  if (const auto v = root["seed"]) {
    try {
      s.seed = v.as<std::uint64_t>();
    } catch (const YAML::Exception&) {
      throw ScenarioError("seed", "expected a non-negative integer");
    }
  }
  opt_quantity(root, "", "duration", Dimension::Time, s.duration_s);
  opt_quantity(root, "", "epoch", Dimension::Time, s.epoch_s);
  opt_quantity(root, "", "jitter", Dimension::Dimensionless, s.jitter);

  auto catalog = default_catalog();
  if (const auto classes = root["classes"]) {
    if (!classes.IsSequence()) throw ScenarioError("classes", "expected a list");
    for (std::size_t i = 0; i < classes.size(); ++i) {
      read_class(classes[i], "classes[" + std::to_string(i) + "]", catalog);
    }
  }

  const auto links = root["links"];
  if (!links || !links.IsSequence() || links.size() == 0) {
    throw ScenarioError("links", "expected a non-empty list of links");
  }
  for (std::size_t i = 0; i < links.size(); ++i) {
    s.links.push_back(read_link(links[i], "links[" + std::to_string(i) + "]"));
  }

  if (const auto hub = root["hub"]) {
    check_keys(hub, "hub", {"id", "battery", "base_power", "compute_energy_per_bit"});
    if (const auto id = hub["id"]) s.hub.id = read_string(id, "hub.id");
    if (const auto b = hub["battery"]) s.hub.battery = read_battery(b, "hub.battery", s.hub.battery);
    opt_quantity(hub, "hub", "base_power", Dimension::Power, s.hub.base_power.watts);
    opt_quantity(hub, "hub", "compute_energy_per_bit", Dimension::EnergyPerBit,
                 s.hub.hub_compute_energy_per_bit.joules_per_bit);
  }

  const auto nodes = root["nodes"];
  if (!nodes || !nodes.IsSequence() || nodes.size() == 0) {
    throw ScenarioError("nodes", "expected a non-empty list of nodes");
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    s.nodes.push_back(read_node(nodes[i], "nodes[" + std::to_string(i) + "]", catalog, s.links));
  }

  DiagSink sink;
  check_structure(s, sink);
  for (const auto& d : sink.items()) {
    if (d.severity == Severity::Error) throw ScenarioError(d.path, d.message);
  }
  return s;
}

}  // namespace

Scenario parse_scenario(std::string_view text, const ParseOptions& options) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ScenarioError("<document>", "malformed YAML at line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  try {
    return read_scenario(root, options);
  } catch (const YAML::Exception& e) {
    throw ScenarioError("<document>", e.what());
  }
}

Scenario load_scenario(const std::filesystem::path& file, const ParseOptions& options) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ScenarioError(file.string(), "cannot open scenario file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), options);
}

std::string serialize_scenario(const Scenario& s) {
  const auto q = [](double v, Dimension d) { return format_quantity(v, d); };

  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "schema_version" << YAML::Value << s.schema_version;
  out << YAML::Key << "seed" << YAML::Value << s.seed;
  out << YAML::Key << "duration" << YAML::Value << q(s.duration_s, Dimension::Time);
  out << YAML::Key << "epoch" << YAML::Value << q(s.epoch_s, Dimension::Time);
  out << YAML::Key << "jitter" << YAML::Value << format_number(s.jitter);

  std::vector<const DeviceClass*> classes;
  for (const auto& n : s.nodes) {
    const bool seen = std::any_of(classes.begin(), classes.end(),
                                  [&](const DeviceClass* c) { return c->name == n.device_class.name; });
    if (!seen) classes.push_back(&n.device_class);
  }
  out << YAML::Key << "classes" << YAML::Value << YAML::BeginSeq;
  for (const auto* c : classes) {
    out << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << c->name;
    out << YAML::Key << "sense_static" << YAML::Value << q(c->sense_model.static_power.watts, Dimension::Power);
    out << YAML::Key << "sense_energy_per_bit" << YAML::Value
        << q(c->sense_model.energy_per_sensed_bit.joules_per_bit, Dimension::EnergyPerBit);
    out << YAML::Key << "typical_rate" << YAML::Value << q(c->typical_raw_rate.bps, Dimension::BitRate);
    out << YAML::Key << "compression" << YAML::Value << format_number(c->default_compression);
    out << YAML::Key << "note" << YAML::Value << c->catalog_note;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  out << YAML::Key << "links" << YAML::Value << YAML::BeginSeq;
  for (const auto& l : s.links) {
    out << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << l.name;
    out << YAML::Key << "energy_per_bit" << YAML::Value << q(l.energy_per_bit.joules_per_bit, Dimension::EnergyPerBit);
    out << YAML::Key << "static_power" << YAML::Value << q(l.static_power.watts, Dimension::Power);
    out << YAML::Key << "max_rate" << YAML::Value << q(l.max_rate.bps, Dimension::BitRate);
    if (const auto* body = std::get_if<BodyContained>(&l.propagation)) {
      out << YAML::Key << "propagation" << YAML::Value << "body";
      out << YAML::Key << "bubble" << YAML::Value << q(body->bubble_m, Dimension::Distance);
    } else {
      out << YAML::Key << "propagation" << YAML::Value << "radiative";
      out << YAML::Key << "radius" << YAML::Value
          << q(std::get<Radiative>(l.propagation).radius_m, Dimension::Distance);
    }
    out << YAML::Key << "carrier_limit" << YAML::Value << q(l.carrier_limit_hz, Dimension::Frequency);
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  const auto battery = [&](const BatterySpec& b) {
    out << YAML::BeginMap;
    out << YAML::Key << "capacity" << YAML::Value << q(b.capacity_mah, Dimension::Charge);
    out << YAML::Key << "voltage" << YAML::Value << q(b.nominal_voltage_v, Dimension::Voltage);
    out << YAML::EndMap;
  };

  out << YAML::Key << "hub" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "id" << YAML::Value << s.hub.id;
  out << YAML::Key << "battery" << YAML::Value;
  battery(s.hub.battery);
  out << YAML::Key << "base_power" << YAML::Value << q(s.hub.base_power.watts, Dimension::Power);
  out << YAML::Key << "compute_energy_per_bit" << YAML::Value
      << q(s.hub.hub_compute_energy_per_bit.joules_per_bit, Dimension::EnergyPerBit);
  out << YAML::EndMap;

  out << YAML::Key << "nodes" << YAML::Value << YAML::BeginSeq;
  for (const auto& n : s.nodes) {
    out << YAML::BeginMap;
    out << YAML::Key << "id" << YAML::Value << n.id;
    out << YAML::Key << "class" << YAML::Value << n.device_class.name;
    out << YAML::Key << "raw_rate" << YAML::Value << q(n.raw_rate.bps, Dimension::BitRate);
    out << YAML::Key << "architecture" << YAML::Value << std::string(to_string(n.architecture));
    out << YAML::Key << "compression" << YAML::Value << format_number(n.compute.compression_factor);
    out << YAML::Key << "isa_energy_per_bit" << YAML::Value
        << q(n.compute.isa_energy_per_bit.joules_per_bit, Dimension::EnergyPerBit);
    out << YAML::Key << "local_compute_energy_per_bit" << YAML::Value
        << q(n.compute.local_compute_energy_per_bit.joules_per_bit, Dimension::EnergyPerBit);
    if (n.result_rate) out << YAML::Key << "result_rate" << YAML::Value << q(n.result_rate->bps, Dimension::BitRate);
    out << YAML::Key << "battery" << YAML::Value;
    battery(n.battery);
    out << YAML::Key << "harvest" << YAML::Value << q(n.harvester.harvest_power.watts, Dimension::Power);
    out << YAML::Key << "placement" << YAML::Value << YAML::BeginMap;
    if (const auto* on = std::get_if<OnBody>(&n.placement)) {
      out << YAML::Key << "on_body" << YAML::Value << on->site;
    } else {
      out << YAML::Key << "off_body" << YAML::Value
          << q(std::get<OffBody>(n.placement).distance_m, Dimension::Distance);
    }
    out << YAML::EndMap;
    out << YAML::Key << "link" << YAML::Value << n.link;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::EndMap;

  return std::string(out.c_str()) + "\n";
}

std::vector<Diagnostic> validate(const Scenario& s) {
  DiagSink sink;
  check_structure(s, sink);

  // Admission at peak demand: with jitter a node may burst to (1 + jitter) x rate.
  const double peak = 1.0 + (s.jitter > 0.0 ? s.jitter : 0.0);
  for (std::size_t li = 0; li < s.links.size(); ++li) {
    const auto& link = s.links[li];
    std::vector<RateDemand> demands;
    for (const auto& n : s.nodes) {
      if (n.link == link.name) demands.push_back({n.id, peak * n.tx_rate()});
    }
    try {
      allocate_tdma(link, demands);
    } catch (const CapacityError& e) {
      sink.error("link-overload", "links[" + std::to_string(li) + "]", e.what());
    } catch (const std::invalid_argument& e) {
      sink.error("invalid-quantity", "links[" + std::to_string(li) + "]", e.what());
    }
  }

  constexpr double kHarvestBandTop = 200e-6;
  for (std::size_t i = 0; i < s.nodes.size(); ++i) {
    const auto& n = s.nodes[i];
    const auto* link = s.find_link(n.link);
    if (!link || !(n.harvester.harvest_power.watts > 0.0)) continue;
    try {
      const auto p = node_power(n, *link);
      if (p.watts > kHarvestBandTop) {
        sink.warning("harvest-band", "nodes[" + std::to_string(i) + "].harvest",
                     "node '" + n.id + "' draws " + format_quantity(p.watts, Dimension::Power) +
                         ", above the 10-200 uW indoor harvesting band; harvester cannot sustain it");
      }
    } catch (const std::exception&) {
      // Capacity problems are already reported above.
    }
  }
  return std::move(sink.items());
}

bool has_errors(const std::vector<Diagnostic>& diags) {
  return std::any_of(diags.begin(), diags.end(), [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

std::string format_diagnostic(const Diagnostic& d) {
  return std::string(d.severity == Severity::Error ? "error" : "warning") + "[" + d.code + "] " + d.path + ": " +
         d.message;
}

}  // namespace iob
