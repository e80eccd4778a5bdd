#pragma once

#include <cstdint>
#include <random>

#include "symflow/types.hpp"

namespace symflow {

struct Residual2 {
  double r1 = 0;
  double r2 = 0;
  double max_abs() const;
};

/// Residuals of the modified shallow-water system
///   r1 = u_t + u u_x + g (1 + H/h) h_x,   r2 = h_t + u h_x + h u_x.
Residual2 mswe_residual(const JetPoint& jet, const FluidParams& params);

/// Residuals of the hodograph-linearized system for the pair (f, g):
///   rho1 = g_u - u f_u + h f_h,   rho2 = g_h - u f_h + g (1 + H/h) f_u.
Residual2 linearized_residual(const PairValue& pair, double u, double h,
                              const FluidParams& params);
Residual2 linearized_residual(const HodographPair& pair, double u, double h,
                              const FluidParams& params);

/// Compatibility condition of the linearized system with g eliminated:
///   2 f_h + h f_hh - g (1 + H/h) f_uu.
double single_f_residual(const FDerivatives& f, double u, double h,
                         const FluidParams& params);

/// The two discrete point symmetries: S1 flips (t, x), S2 flips (x, u).
enum class DiscreteSymmetry { S1, S2 };

SolutionField apply_discrete_symmetry(const SolutionField& field, DiscreteSymmetry which);

/// Ranges for manifold jet sampling. Defaults keep clear of t = 0.
struct SamplingBox {
  Interval t{0.5, 2.0};
  Interval x{-1.0, 1.0};
  Interval u{-1.0, 1.0};
  Interval h{0.5, 2.0};
  Interval u_x{-1.0, 1.0};
  Interval h_x{-1.0, 1.0};

  /// Throws ConfigError on inverted ranges or a non-positive h range.
  void validate() const;
};

/// Draws (t, x, u, h, u_x, h_x) uniformly and solves both equations for
/// (u_t, h_t), so the returned jet lies on the solution manifold.
JetPoint sample_manifold_jet(std::mt19937_64& rng, const FluidParams& params,
                             const SamplingBox& box = {});
JetPoint sample_manifold_jet(std::uint64_t seed, const FluidParams& params,
                             const SamplingBox& box = {});

}  // namespace symflow
