#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "symflow/types.hpp"
#include "symflow/vfield.hpp"

namespace symflow {

/// v = a D + b G + L(f, g) in the infinite-dimensional invariance algebra.
struct AlgebraElement {
  double a = 0;
  double b = 0;
  std::optional<HodographPair> pair;
};

/// The same element as a point vector field.
VectorFieldSpec element_field(const AlgebraElement& v);

// Pair arithmetic used by the adjoint actions. All except boost_derivative
// keep closed-form partials.
HodographPair scale_pair(const HodographPair& p, double factor);
HodographPair add_pairs(const HodographPair& p, double cp, const HodographPair& q, double cq);
/// (f(u - eps, h), g(u - eps, h) + eps f(u - eps, h))
HodographPair shift_pair(const HodographPair& p, double eps);
/// (f_u, g_u - f); partials by finite differences.
HodographPair boost_derivative(const HodographPair& p);

struct DilationGenerator {};
struct BoostGenerator {};
struct LinearizingGenerator {
  HodographPair pair;
};
using Generator = std::variant<DilationGenerator, BoostGenerator, LinearizingGenerator>;

/// Closed-form adjoint action Ad(exp(eps X)) v for X in {D, G, L(f,g)}:
///   Ad(e^{eps D}) L = e^eps L,         Ad(e^{eps L}) D = D - eps L,
///   Ad(e^{eps G}) L(f,g) = L(f', g'),  Ad(e^{eps L}) G = G + eps L(f_u, g_u - f),
/// with f' = f(u - eps, h), g' = g(u - eps, h) + eps f(u - eps, h).
AlgebraElement adjoint(const Generator& generator, double eps, const AlgebraElement& target);

/// Truncated Lie series sum_{n <= order} (-eps)^n / n! (ad_v)^n w with
/// ad_v w = [v, w]; this sign convention reproduces the closed forms above.
VectorFieldSpec lie_series(const VectorFieldSpec& v, const VectorFieldSpec& w, double eps,
                           int order);

/// Max deviation of each commutation relation over sampled points:
///   [D, G] = 0, [L, D] = L, [G, L(f,g)] = L(f_u, g_u - f), [L1, L2] = 0.
/// Relations involving L also include the linearized residual of the pair,
/// so a pair outside the algebra shows up as a deviation.
struct CommutatorReport {
  double dilation_boost = 0;
  double linearizing_dilation = 0;
  double boost_linearizing = 0;
  double linearizing_linearizing = 0;
  double max() const;
};

CommutatorReport commutator_table_check(const std::vector<HodographPair>& pairs,
                                        const FluidParams& params, int samples,
                                        std::uint64_t seed);

/// a1 D + a2 G + a3 dx + a4 dt in the four-dimensional subalgebra g1.
struct G1Element {
  std::array<double, 4> a{};
};

enum class G1Flow { Dilation, Boost, SpaceTranslation, TimeTranslation };

/// Ad(exp(eps X)) on g1 for the four basis flows (closed forms).
G1Element adjoint_g1(G1Flow flow, double eps, const G1Element& v);
/// Discrete symmetries acting on g1: S1 flips (t, x), S2 flips (x, u).
G1Element discrete_g1(DiscreteSymmetry which, const G1Element& v);

enum class ClassTag { DPlusAG, GOnly, LClass, GPlusDeltaDt, DtPlusDeltaDx, DxOnly };

/// Representative of an equivalence class of one-dimensional subalgebras.
struct CanonicalClass {
  ClassTag tag = ClassTag::DxOnly;
  double a = 0;   // DPlusAG
  int delta = 0;  // GPlusDeltaDt, DtPlusDeltaDx
  // LClass: the pair after unit scaling and u-shift, plus its samples on the
  // reference grid used for comparisons.
  std::optional<HodographPair> pair;
  std::vector<double> fingerprint;
  double shift = 0;
  double scale = 1;

  std::string to_string() const;
};

bool same_class(const CanonicalClass& x, const CanonicalClass& y, double tol = 1e-8);

/// Reduction to the optimal list of the full algebra:
///   <D + a G>, <G>, <L(f, g)> up to scaling and u-shift.
/// Throws PreconditionError for the zero element.
CanonicalClass normalize_g(const AlgebraElement& v);
AlgebraElement representative(const CanonicalClass& c);

/// Reduction of g1 elements to the stated list
///   <D + a G>, <G + delta dt>, <dt + delta dx>, <dx>,  delta in {0, 1}.
/// Throws PreconditionError for the zero element.
CanonicalClass normalize_g1(const G1Element& v);
G1Element representative_g1(const CanonicalClass& c);

struct OrbitSearchResult {
  bool equivalent = false;
  /// Parameters of Ad(e^{e4 dx}) Ad(e^{e3 dt}) Ad(e^{e2 G}) Ad(e^{e1 D}).
  std::array<double, 4> flows{};
  double scale = 1;
  /// 0 = none, 1 = S1, 2 = S2, 3 = S1 S2 applied first.
  int discrete = 0;
  double residual = 0;
};

/// Searches the adjoint orbit of span(v) for span(w) by Levenberg-Marquardt
/// over the four flow parameters and a scale factor, with random restarts.
/// Flow parameters are bounded by 10 in magnitude.
OrbitSearchResult orbit_equivalent_g1(const G1Element& v, const G1Element& w, int trials,
                                      std::uint64_t seed, bool allow_discrete = true);

/// Sampled check that normalize_g1 is constant on adjoint orbits. Words are
/// built from the four continuous flows only; S2 maps <D + a G> to <D - a G>.
struct OrbitInvarianceReport {
  int trials = 0;
  int violations = 0;
  int idempotence_failures = 0;
  int span_failures = 0;
  std::array<int, 4> trials_by_stratum{};
  std::array<int, 4> violations_by_stratum{};
};

/// stratified = false draws generic elements (every component nonzero);
/// stratified = true cycles through the four strata of the stated list.
OrbitInvarianceReport orbit_invariance_audit(int trials, std::uint64_t seed, bool stratified);

}  // namespace symflow
