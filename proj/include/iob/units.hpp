// Unit-suffixed quantity parsing, shared by the scenario loader and the CLI.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace iob {

enum class Dimension {
  BitRate,       // bps
  Power,         // W
  EnergyPerBit,  // J/bit
  Charge,        // mAh (battery capacity is kept in mAh, not coulombs)
  Voltage,       // V
  Time,          // s
  Distance,      // m
  Frequency,     // Hz
  Dimensionless,
};

class UnitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parses "4 Mbps", "100pJ/bit", "2 uW", "1000 mAh", "3h"... into the base
// unit of `dim`. A bare number is taken to already be in the base unit.
// Throws UnitError on a malformed number or a suffix not valid for `dim`.
double parse_quantity(std::string_view text, Dimension dim);

// Inverse of parse_quantity: shortest round-trip number plus base unit.
std::string format_quantity(double value, Dimension dim);

// Shortest decimal representation that parses back to the same double.
std::string format_number(double value);

std::string_view base_unit(Dimension dim);

}  // namespace iob
