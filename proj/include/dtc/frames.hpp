#pragma once

#include <cmath>

namespace dtc {

template <typename T>
struct ThreePhaseT {
  T a{};
  T b{};
  T c{};
};

/// Stationary two-axis vector plus zero-sequence component.
template <typename T>
struct AlphaBetaT {
  T alpha{};
  T beta{};
  T zero{};

  friend AlphaBetaT operator+(const AlphaBetaT& x, const AlphaBetaT& y) {
    return {x.alpha + y.alpha, x.beta + y.beta, x.zero + y.zero};
  }
  friend AlphaBetaT operator*(T k, const AlphaBetaT& x) {
    return {k * x.alpha, k * x.beta, k * x.zero};
  }
};

using ThreePhase = ThreePhaseT<double>;
using AlphaBeta = AlphaBetaT<double>;

namespace detail {
template <typename T>
inline constexpr T kSqrt3 = static_cast<T>(1.7320508075688772935274463415058723);
}  // namespace detail

// Amplitude-invariant Clarke transform:
//
//       2 | 1     -1/2     -1/2  |
//   T = - | 0   -sqrt3/2  sqrt3/2 |
//       3 | 1/2    1/2      1/2  |
//
// The beta row is (c - b) / sqrt3. Many texts use (b - c); everything
// downstream (vector numbering, sectors, switching table) is defined against
// this sign.
template <typename T>
constexpr AlphaBetaT<T> clarke(const ThreePhaseT<T>& x) {
  return {
      T(2) / T(3) * (x.a - T(0.5) * x.b - T(0.5) * x.c),
      (x.c - x.b) / detail::kSqrt3<T>,
      (x.a + x.b + x.c) / T(3),
  };
}

// Exact inverse of the matrix above:
//   a = alpha + zero
//   b = -alpha/2 - (sqrt3/2) beta + zero
//   c = -alpha/2 + (sqrt3/2) beta + zero
// With zero = 0 this is the Moore-Penrose inverse of the two-row
// (alpha, beta) block.
template <typename T>
constexpr ThreePhaseT<T> inverse_clarke(const AlphaBetaT<T>& x) {
  const T half_sqrt3_beta = T(0.5) * detail::kSqrt3<T> * x.beta;
  return {
      x.alpha + x.zero,
      -T(0.5) * x.alpha - half_sqrt3_beta + x.zero,
      -T(0.5) * x.alpha + half_sqrt3_beta + x.zero,
  };
}

}  // namespace dtc
