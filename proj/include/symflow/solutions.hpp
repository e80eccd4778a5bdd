#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "symflow/types.hpp"

namespace symflow {

/// u = (x + c1)/t, h = c2/t; the solution invariant under Galilean boosts.
/// Throws ParameterError for c2 <= 0 and DomainError for a domain reaching t <= 0.
SolutionField galilean_solution(double c1, double c2,
                                Rect domain = Rect{{0.5, 2.0}, {-1.0, 1.0}});

/// (u, h) = (k1, k2) everywhere.
SolutionField constant_solution(double k1, double k2,
                                Rect domain = Rect{{0.5, 2.0}, {-1.0, 1.0}});

inline const Box kDefaultPairBox{{-1.0, 1.0}, {0.5, 2.0}};

/// Rational/logarithmic family of the linearized system:
///   f = c1 u/h + c2/h + c3 u + c4
///   g = c1 (u^2/h + G(H/h - ln h)) + c2 u/h + c3 (u^2/2 - G(H ln h + h)) + c5
/// Throws ParameterError when c1..c4 are all zero.
HodographPair simple_pair(const std::array<double, 5>& c, const FluidParams& params,
                          const Box& box = kDefaultPairBox);

/// Bessel order b = sqrt(1 - 4 G c) of the separable family.
/// Throws UnsupportedOrderError when G c > 1/4 and ParameterError for c <= 0.
double bessel_order(double c, const FluidParams& params);

/// Separable solution of the single-f equation
///   f = h^{-1/2} (c1 sin(k u) + c2 cos(k u)) (c3 J_b(z) + c4 Y_b(z)),
///   k = sqrt(c/H), z = 2 sqrt(G c h / H), b = sqrt(1 - 4 G c).
/// Requires H > 0. Derivatives use Bessel's equation for the second order.
FFunction bessel_f(double c, const std::array<double, 4>& coeffs, const FluidParams& params);

/// The half-order member in closed form (c1 = 1, c2 = c4 = 0, G c = 3/16):
///   f = h^{-3/4} sin(k u) sin(m sqrt(h)),  k = sqrt(c/H),  m = sqrt(4 G c / H).
FFunction half_order_f(const FluidParams& params);

/// The stated form of the half-order partner g
/// (gravity 1, c = 3/16, c1 = 1, c5 = 0). Kept for auditing only: it does not
/// solve the linearized system.
double stated_half_order_g(double u, double h, double H);

enum class EntryKind { ClosedField, HodographPairKind, SeparableF };

struct CatalogEntry {
  std::string id;
  EntryKind kind = EntryKind::ClosedField;
  std::string description;
  std::map<std::string, double> parameters;
  /// Subalgebra class the solution is invariant under, when it has one.
  std::string invariant_class;
  Box box = kDefaultPairBox;
  /// Set for entries reproduced as stated that fail their residual check.
  bool audit_failed = false;
  double audit_residual = 0;

  std::function<SolutionField()> make_field;
  std::function<HodographPair()> make_pair;
  FFunction f;
};

/// Fixed list of known solutions for the given constants. Bessel-family
/// entries need H > 0 and are omitted otherwise.
std::vector<CatalogEntry> catalog(const FluidParams& params = {});

/// Throws ConfigError naming the id when it is not in the catalog.
const CatalogEntry& find_entry(const std::vector<CatalogEntry>& entries, const std::string& id);

/// Kind-appropriate residual of an entry: MSWE residual for closed fields,
/// linearized residual for pairs, single-f residual for separable f.
double entry_residual(const CatalogEntry& entry, const FluidParams& params, int samples = 100,
                      std::uint64_t seed = 0);

}  // namespace symflow
