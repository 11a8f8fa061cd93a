// Strong SI quantity types shared by every iobsim module.
//
// All values are stored in base SI units (W, J/bit, bit/s). Unit suffixes
// are handled only at the configuration boundary, see units.hpp.

#pragma once

#include <compare>
#include <optional>
#include <string_view>

namespace iob {

struct BitRate {
  double bps = 0.0;

  friend constexpr auto operator<=>(const BitRate&, const BitRate&) = default;
  friend constexpr BitRate operator+(BitRate a, BitRate b) { return {a.bps + b.bps}; }
  friend constexpr BitRate operator-(BitRate a, BitRate b) { return {a.bps - b.bps}; }
  friend constexpr BitRate operator*(double k, BitRate r) { return {k * r.bps}; }
  friend constexpr BitRate operator*(BitRate r, double k) { return {k * r.bps}; }
};

struct PowerDraw {
  double watts = 0.0;

  friend constexpr auto operator<=>(const PowerDraw&, const PowerDraw&) = default;
  friend constexpr PowerDraw operator+(PowerDraw a, PowerDraw b) { return {a.watts + b.watts}; }
  friend constexpr PowerDraw operator-(PowerDraw a, PowerDraw b) { return {a.watts - b.watts}; }
};

struct EnergyPerBit {
  double joules_per_bit = 0.0;

  friend constexpr auto operator<=>(const EnergyPerBit&, const EnergyPerBit&) = default;
};

constexpr PowerDraw operator*(EnergyPerBit e, BitRate r) { return {e.joules_per_bit * r.bps}; }
constexpr PowerDraw operator*(BitRate r, EnergyPerBit e) { return e * r; }

inline constexpr double kSecondsPerHour = 3600.0;
inline constexpr double kHoursPerDay = 24.0;
inline constexpr double kHoursPerWeek = 168.0;
inline constexpr double kHoursPerYear = 8760.0;

// Battery life: either a finite number of hours or non-depleting.
class Lifetime {
 public:
  static constexpr Lifetime perpetual() { return Lifetime{}; }
  static constexpr Lifetime from_hours(double h) { return Lifetime{h}; }

  constexpr bool is_perpetual() const { return !hours_.has_value(); }
  // Precondition: !is_perpetual().
  constexpr double hours() const { return *hours_; }

  friend constexpr bool operator==(const Lifetime&, const Lifetime&) = default;

 private:
  constexpr Lifetime() = default;
  constexpr explicit Lifetime(double h) : hours_(h) {}
  std::optional<double> hours_;
};

enum class LifetimeClass { Perpetual, AllWeek, AllDay, SubDay };

std::string_view to_string(LifetimeClass c);

}  // namespace iob
