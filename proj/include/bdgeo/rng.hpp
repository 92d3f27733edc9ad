#pragma once

#include <cmath>
#include <cstdint>
#include <random>

/// Deterministic sampling primitives. All randomness in this library flows
/// through std::mt19937_64 (whose output sequence is fixed by the standard)
/// and the explicit transforms below, so a seed pins every sample exactly;
/// none of the distribution classes from <random> are used because their
/// output is implementation-defined.
namespace bdgeo::rng {

using Engine = std::mt19937_64;

/// Uniform double in [0, 1) with 53 random mantissa bits.
inline double uniform01(Engine& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// Uniform double in [lo, hi).
inline double uniform(Engine& gen, double lo, double hi) {
  return lo + (hi - lo) * uniform01(gen);
}

/// Standard normal via Box-Muller; consumes exactly two engine draws.
inline double normal(Engine& gen) {
  const double u1 = 1.0 - uniform01(gen);  // in (0, 1], keeps log finite
  const double u2 = uniform01(gen);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

/// Exp(1) variate; consumes one engine draw.
inline double exponential(Engine& gen) {
  return -std::log(1.0 - uniform01(gen));
}

}  // namespace bdgeo::rng
