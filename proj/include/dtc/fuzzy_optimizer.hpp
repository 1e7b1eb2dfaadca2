#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "dtc/errors.hpp"

namespace dtc::fuzzy {

/// Output linguistic terms for the flux-reference change.
enum class Term : int { NB = 0, NM, NS, ZE, PS, PM, PB };

inline constexpr std::array<std::string_view, 7> kTermNames{"NB", "NM", "NS", "0",
                                                           "PS", "PM", "PB"};

inline std::string_view to_string(Term t) {
  return kTermNames[static_cast<std::size_t>(t)];
}

inline std::optional<Term> parse_term(std::string_view s) {
  if (s == "ZE" || s == "Z") return Term::ZE;
  for (std::size_t i = 0; i < kTermNames.size(); ++i) {
    if (kTermNames[i] == s) return static_cast<Term>(i);
  }
  return std::nullopt;
}

/// Torque-error sets, in column order.
enum TorqueSet : std::size_t { kNB = 0, kNM, kNS, kPS, kPM, kPB };
/// Flux-level sets, in row order.
enum FluxSet : std::size_t { kSmall = 0, kMedium, kBig };

inline constexpr std::size_t kTorqueSets = 6;
inline constexpr std::size_t kFluxSets = 3;
inline constexpr std::size_t kOutputSets = 7;

using TorqueMemberships = std::array<double, kTorqueSets>;
using FluxMemberships = std::array<double, kFluxSets>;
using OutputStrengths = std::array<double, kOutputSets>;
using RuleTable = std::array<std::array<Term, kTorqueSets>, kFluxSets>;

// Rows: flux level S, M, B. Columns: torque error NB NM NS PS PM PB.
inline constexpr RuleTable kDefaultRules{{
    {Term::ZE, Term::PS, Term::PB, Term::ZE, Term::PS, Term::PB},
    {Term::NS, Term::ZE, Term::PM, Term::NS, Term::ZE, Term::PM},
    {Term::NB, Term::NM, Term::ZE, Term::NB, Term::NM, Term::ZE},
}};

/// Triangle peaks on a normalized [-1, 1] universe. Each triangle falls to
/// zero at its neighbours' peaks. Input partitions are shouldered at the
/// ends; the output partition is not (outer triangles are mirrored and
/// truncated by the universe).
template <std::size_t N>
using Centers = std::array<double, N>;

struct FuzzyConfig {
  double torque_error_scale = 49.7;  // N m, maps to normalized +/-1
  double flux_min = 0.3;             // Wb
  double flux_rated = 0.7;           // Wb
  double delta_max = 0.0005;         // Wb per update

  Centers<kTorqueSets> torque_centers{-1.0, -0.6, -0.2, 0.2, 0.6, 1.0};
  Centers<kFluxSets> flux_centers{-1.0, 0.0, 1.0};
  Centers<kOutputSets> output_centers{-1.0, -2.0 / 3.0, -1.0 / 3.0, 0.0,
                                      1.0 / 3.0, 2.0 / 3.0, 1.0};
  RuleTable rules = kDefaultRules;

  void validate() const {
    auto fail = [](const std::string& m) { throw ConfigError("fuzzy: " + m); };
    if (!(torque_error_scale > 0.0)) fail("torque_error_scale must be > 0");
    if (!(flux_min > 0.0) || !(flux_min < flux_rated)) {
      fail("need 0 < flux_min < flux_rated");
    }
    if (!(delta_max > 0.0)) fail("delta_max must be > 0");
    auto check = [&](const auto& c, const char* name) {
      for (std::size_t i = 0; i < c.size(); ++i) {
        if (!(c[i] >= -1.0 && c[i] <= 1.0)) {
          fail(std::string(name) + " centers must lie in [-1, 1]");
        }
        if (i > 0 && !(c[i] > c[i - 1])) {
          fail(std::string(name) + " centers must be strictly increasing");
        }
      }
    };
    check(torque_centers, "torque");
    check(flux_centers, "flux");
    check(output_centers, "output");
    // Shoulders cover the outer ends; the output universe must be spanned by
    // the outer peaks for the partition to be complete.
    if (output_centers.front() != -1.0 || output_centers.back() != 1.0) {
      fail("output centers must start at -1 and end at +1");
    }
  }
};

struct FuzzyState {
  double flux_ref = 0.7;  // Wb
};

namespace detail {

// Degree of set k of a triangular partition at normalized x.
template <std::size_t N>
double triangle(const Centers<N>& c, std::size_t k, double x, bool shouldered) {
  const double peak = c[k];
  if (x == peak) return 1.0;
  if (x < peak) {
    if (k == 0) {
      if (shouldered) return 1.0;
      const double width = c[1] - c[0];
      return std::max(0.0, (x - (peak - width)) / width);
    }
    const double lo = c[k - 1];
    if (x <= lo) return 0.0;
    return (x - lo) / (peak - lo);
  }
  if (k == N - 1) {
    if (shouldered) return 1.0;
    const double width = c[N - 1] - c[N - 2];
    return std::max(0.0, ((peak + width) - x) / width);
  }
  const double hi = c[k + 1];
  if (x >= hi) return 0.0;
  return (hi - x) / (hi - peak);
}

template <std::size_t N>
std::array<double, N> partition(const Centers<N>& c, double x, bool shouldered) {
  std::array<double, N> out{};
  for (std::size_t k = 0; k < N; ++k) out[k] = triangle(c, k, x, shouldered);
  return out;
}

}  // namespace detail

inline double normalize_torque_error(const FuzzyConfig& cfg, double e) {
  return std::clamp(e / cfg.torque_error_scale, -1.0, 1.0);
}

inline double normalize_flux_level(const FuzzyConfig& cfg, double flux_ref) {
  const double u = (flux_ref - cfg.flux_min) / (cfg.flux_rated - cfg.flux_min);
  return std::clamp(2.0 * u - 1.0, -1.0, 1.0);
}

inline TorqueMemberships fuzzify_torque_error(const FuzzyConfig& cfg, double e) {
  return detail::partition(cfg.torque_centers, normalize_torque_error(cfg, e), true);
}

inline FluxMemberships fuzzify_flux_level(const FuzzyConfig& cfg, double flux_ref) {
  return detail::partition(cfg.flux_centers, normalize_flux_level(cfg, flux_ref), true);
}

/// Min implication over all 18 rules, max aggregation per output term.
inline OutputStrengths infer(const FuzzyConfig& cfg, const TorqueMemberships& torque,
                             const FluxMemberships& flux) {
  OutputStrengths out{};
  for (std::size_t row = 0; row < kFluxSets; ++row) {
    for (std::size_t col = 0; col < kTorqueSets; ++col) {
      const double w = std::min(flux[row], torque[col]);
      auto& slot = out[static_cast<std::size_t>(cfg.rules[row][col])];
      slot = std::max(slot, w);
    }
  }
  return out;
}

inline constexpr int kCentroidSamples = 1001;

/// Centroid of the union of clipped output triangles, sampled on 1001
/// uniform points over [-delta_max, delta_max] with trapezoid weights.
/// Sample i sits at (2i - 1000)/1000, so mirrored samples are exact negatives
/// and mirrored pairs are summed together: a symmetric aggregate yields
/// exactly 0. Returns 0 when nothing fired.
inline double defuzzify(const FuzzyConfig& cfg, const OutputStrengths& strengths) {
  if (std::all_of(strengths.begin(), strengths.end(),
                  [](double s) { return s <= 0.0; })) {
    return 0.0;
  }
  constexpr int kLast = kCentroidSamples - 1;
  auto mu = [&](double x) {
    double m = 0.0;
    for (std::size_t k = 0; k < kOutputSets; ++k) {
      if (strengths[k] <= 0.0) continue;
      m = std::max(m, std::min(strengths[k],
                               detail::triangle(cfg.output_centers, k, x, false)));
    }
    return m;
  };
  auto point = [](int i) { return static_cast<double>(2 * i - kLast) / kLast; };

  double moment = 0.0;
  double area = 0.0;
  for (int i = 0; i < kLast / 2; ++i) {
    const int j = kLast - i;
    const double w = (i == 0) ? 0.5 : 1.0;
    const double xi = point(i), xj = point(j);
    const double mi = mu(xi), mj = mu(xj);
    moment += w * (mi * xi + mj * xj);
    area += w * (mi + mj);
  }
  {
    const int mid = kLast / 2;
    const double xm = point(mid);
    const double mm = mu(xm);
    moment += mm * xm;
    area += mm;
  }
  if (area <= 0.0) return 0.0;
  return cfg.delta_max * (moment / area);
}

/// One optimizer update: flux_ref += centroid, clamped to
/// [flux_min, flux_rated]. Reads only the torque error and its own state.
inline FuzzyState update_flux_ref(FuzzyState state, const FuzzyConfig& cfg,
                                  double torque_error, double /*dt*/) {
  const auto torque = fuzzify_torque_error(cfg, torque_error);
  const auto flux = fuzzify_flux_level(cfg, state.flux_ref);
  const double delta = defuzzify(cfg, infer(cfg, torque, flux));
  state.flux_ref = std::clamp(state.flux_ref + delta, cfg.flux_min, cfg.flux_rated);
  return state;
}

}  // namespace dtc::fuzzy
