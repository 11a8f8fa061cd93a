// Scenario data model, the wearable device-class catalog, and the YAML
// scenario file format (see docs/scenario-format.md).

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "iob/energy_model.hpp"
#include "iob/link_model.hpp"

namespace iob {

inline constexpr int kSchemaVersion = 1;

struct DeviceClass {
  std::string name;
  SensePowerModel sense_model;
  BitRate typical_raw_rate;
  double default_compression = 1.0;
  std::string catalog_note;
  friend bool operator==(const DeviceClass&, const DeviceClass&) = default;
};

// Sensing coefficients here are calibration defaults, not measurements.
std::vector<DeviceClass> default_catalog();
const DeviceClass* find_class(const std::vector<DeviceClass>& catalog, std::string_view name);

enum class Architecture { Standalone, HubOffload };

std::string_view to_string(Architecture a);

inline constexpr double kDefaultResultFraction = 0.01;

struct NodeSpec {
  std::string id;
  DeviceClass device_class;
  BitRate raw_rate;
  Architecture architecture = Architecture::HubOffload;
  ComputeModel compute;
  // Standalone only: rate of condensed results leaving the node.
  // Unset means kDefaultResultFraction * raw_rate.
  std::optional<BitRate> result_rate;
  BatterySpec battery;
  HarvesterSpec harvester;
  Placement placement = OnBody{"torso"};
  std::string link;

  BitRate effective_result_rate() const {
    return result_rate.value_or(kDefaultResultFraction * raw_rate);
  }
  // compression * raw_rate for hub-offload, the result rate for standalone.
  BitRate tx_rate() const {
    return architecture == Architecture::HubOffload ? compute.compression_factor * raw_rate
                                                    : effective_result_rate();
  }

  friend bool operator==(const NodeSpec&, const NodeSpec&) = default;
};

struct HubSpec {
  std::string id = "hub";
  BatterySpec battery{5000.0, 3.8};
  PowerDraw base_power{150e-3};
  EnergyPerBit hub_compute_energy_per_bit{1e-9};
  friend bool operator==(const HubSpec&, const HubSpec&) = default;
};

struct Scenario {
  int schema_version = kSchemaVersion;
  std::vector<NodeSpec> nodes;
  HubSpec hub;
  std::vector<LinkTech> links;
  double duration_s = kHoursPerYear * kSecondsPerHour;
  std::uint64_t seed = 0;
  double epoch_s = 1.0;
  // Per-epoch uniform rate jitter, as a fraction: rate * (1 +/- jitter). 0 = off.
  double jitter = 0.0;

  const LinkTech* find_link(std::string_view name) const;
  const NodeSpec* find_node(std::string_view id) const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

// Raised by parse_scenario; `path()` is the config path of the offending
// value, e.g. "nodes[1].link".
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::string path, const std::string& message);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct ParseOptions {
  double default_epoch_s = 1.0;
};

// Parses and structurally validates a scenario document. Channel admission
// is left to validate().
Scenario parse_scenario(std::string_view text, const ParseOptions& options = {});
Scenario load_scenario(const std::filesystem::path& file, const ParseOptions& options = {});

// Emits a self-contained document (all classes and links spelled out in SI
// units) that parses back to an identical Scenario.
std::string serialize_scenario(const Scenario& s);

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string code;  // machine-readable, e.g. "link-overload"
  std::string path;  // config path, e.g. "links[0]"
  std::string message;
};

// Every invariant plus per-link admission (at peak jittered demand).
// Harvest-band warnings are non-fatal.
std::vector<Diagnostic> validate(const Scenario& s);

bool has_errors(const std::vector<Diagnostic>& diags);

std::string format_diagnostic(const Diagnostic& d);

}  // namespace iob
