#include "iob/units.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <span>
#include <utility>

namespace iob {
namespace {

struct Suffix {
  std::string_view text;
  double scale;
};

constexpr std::array kRate{Suffix{"bps", 1.0}, Suffix{"kbps", 1e3}, Suffix{"Mbps", 1e6},
                           Suffix{"Gbps", 1e9}};
constexpr std::array kPower{Suffix{"nW", 1e-9}, Suffix{"uW", 1e-6}, Suffix{"µW", 1e-6},
                            Suffix{"mW", 1e-3}, Suffix{"W", 1.0}};
constexpr std::array kEnergyPerBit{
    Suffix{"fJ", 1e-15},     Suffix{"fJ/bit", 1e-15}, Suffix{"pJ", 1e-12},
    Suffix{"pJ/bit", 1e-12}, Suffix{"nJ", 1e-9},      Suffix{"nJ/bit", 1e-9},
    Suffix{"uJ", 1e-6},      Suffix{"uJ/bit", 1e-6},  Suffix{"J/bit", 1.0}};
constexpr std::array kCharge{Suffix{"mAh", 1.0}, Suffix{"Ah", 1e3}};
constexpr std::array kVoltage{Suffix{"mV", 1e-3}, Suffix{"V", 1.0}};
constexpr std::array kTime{Suffix{"ms", 1e-3}, Suffix{"s", 1.0}, Suffix{"min", 60.0},
                           Suffix{"h", 3600.0}, Suffix{"d", 86400.0}};
constexpr std::array kDistance{Suffix{"mm", 1e-3}, Suffix{"cm", 1e-2}, Suffix{"m", 1.0}};
constexpr std::array kFrequency{Suffix{"Hz", 1.0}, Suffix{"kHz", 1e3}, Suffix{"MHz", 1e6},
                                Suffix{"GHz", 1e9}};

std::span<const Suffix> suffixes(Dimension dim) {
  switch (dim) {
    case Dimension::BitRate: return kRate;
    case Dimension::Power: return kPower;
    case Dimension::EnergyPerBit: return kEnergyPerBit;
    case Dimension::Charge: return kCharge;
    case Dimension::Voltage: return kVoltage;
    case Dimension::Time: return kTime;
    case Dimension::Distance: return kDistance;
    case Dimension::Frequency: return kFrequency;
    case Dimension::Dimensionless: return {};
  }
  return {};
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::string expected_list(Dimension dim) {
  std::string out;
  for (const auto& sfx : suffixes(dim)) {
    if (!out.empty()) out += ", ";
    out += sfx.text;
  }
  return out.empty() ? std::string("no suffix") : out;
}

}  // namespace

std::string_view base_unit(Dimension dim) {
  switch (dim) {
    case Dimension::BitRate: return "bps";
    case Dimension::Power: return "W";
    case Dimension::EnergyPerBit: return "J/bit";
    case Dimension::Charge: return "mAh";
    case Dimension::Voltage: return "V";
    case Dimension::Time: return "s";
    case Dimension::Distance: return "m";
    case Dimension::Frequency: return "Hz";
    case Dimension::Dimensionless: return "";
  }
  return "";
}

double parse_quantity(std::string_view text, Dimension dim) {
  const std::string_view s = trim(text);
  if (s.empty()) throw UnitError("empty quantity");

  // from_chars rejects a leading '+', accept it here for convenience.
  const std::string_view num_text = s.front() == '+' ? s.substr(1) : s;
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(num_text.data(), num_text.data() + num_text.size(), value);
  if (ec != std::errc{} || ptr == num_text.data()) {
    throw UnitError("malformed number in '" + std::string(s) + "'");
  }
  if (!std::isfinite(value)) throw UnitError("non-finite quantity '" + std::string(s) + "'");

  const std::string_view suffix =
      trim(num_text.substr(static_cast<std::size_t>(ptr - num_text.data())));
  if (suffix.empty()) return value;

  for (const auto& sfx : suffixes(dim)) {
    if (sfx.text == suffix) return value * sfx.scale;
  }
  throw UnitError("malformed unit suffix '" + std::string(suffix) + "' in '" + std::string(s) +
                  "' (expected " + expected_list(dim) + ")");
}

std::string format_number(double value) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) return "nan";
  return std::string(buf.data(), ptr);
}

std::string format_quantity(double value, Dimension dim) {
  std::string out = format_number(value);
  const auto unit = base_unit(dim);
  if (!unit.empty()) {
    out += ' ';
    out += unit;
  }
  return out;
}

}  // namespace iob
