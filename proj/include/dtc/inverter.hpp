#pragma once

#include <array>
#include <cstdint>

#include "dtc/frames.hpp"

namespace dtc {

/// Leg states of a two-level inverter; 1 means the upper switch conducts.
struct SwitchingState {
  std::uint8_t sa = 0;
  std::uint8_t sb = 0;
  std::uint8_t sc = 0;

  bool operator==(const SwitchingState&) const = default;

  bool is_zero() const { return sa == sb && sb == sc; }
  int high_count() const { return sa + sb + sc; }
};

/// Number of legs that change state between two switching states.
inline int transitions(const SwitchingState& from, const SwitchingState& to) {
  return (from.sa != to.sa) + (from.sb != to.sb) + (from.sc != to.sc);
}

inline constexpr SwitchingState kV0{0, 0, 0};
inline constexpr SwitchingState kV7{1, 1, 1};

// Active vectors ordered by angle under the (c - b)/sqrt3 beta convention,
// V_k at 60 deg * (k - 1):
//
//   V1 (1,0,0)   0 deg      V4 (0,1,1) 180 deg
//   V2 (1,0,1)  60 deg      V5 (0,1,0) 240 deg
//   V3 (0,0,1) 120 deg      V6 (1,1,0) 300 deg
inline constexpr std::array<SwitchingState, 6> kActiveVectors{{
    {1, 0, 0},
    {1, 0, 1},
    {0, 0, 1},
    {0, 1, 1},
    {0, 1, 0},
    {1, 1, 0},
}};

/// Active vector V_k, k in 1..6 (taken modulo 6).
constexpr SwitchingState active_vector(int k) {
  const int idx = ((k - 1) % 6 + 6) % 6;
  return kActiveVectors[static_cast<std::size_t>(idx)];
}

/// Phase-to-neutral voltages for an isolated-neutral star load.
constexpr ThreePhase phase_voltages(const SwitchingState& s, double vdc) {
  const double k = vdc / 3.0;
  const int a = s.sa, b = s.sb, c = s.sc;
  return {k * (2 * a - b - c), k * (2 * b - a - c), k * (2 * c - a - b)};
}

constexpr AlphaBeta stator_voltage(const SwitchingState& s, double vdc) {
  return clarke(phase_voltages(s, vdc));
}

}  // namespace dtc
