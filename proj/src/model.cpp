#include "symflow/model.hpp"

#include <algorithm>
#include <cmath>

#include "symflow/errors.hpp"

namespace symflow {

namespace {

void require_finite(std::initializer_list<double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) throw DomainError(std::string(what) + ": non-finite input");
  }
}

void require_positive_h(double h, const char* what) {
  if (!(h > 0)) throw DomainError(std::string(what) + ": requires h > 0");
}

Interval reflect(const Interval& i) { return {-i.hi, -i.lo}; }

}  // namespace

double Residual2::max_abs() const { return std::max(std::abs(r1), std::abs(r2)); }

Residual2 mswe_residual(const JetPoint& j, const FluidParams& params) {
  require_finite({j.t, j.x, j.u, j.h, j.u_t, j.u_x, j.h_t, j.h_x}, "mswe_residual");
  require_positive_h(j.h, "mswe_residual");
  params.validate();
  return {j.u_t + j.u * j.u_x + params.pressure_factor(j.h) * j.h_x,
          j.h_t + j.u * j.h_x + j.h * j.u_x};
}

Residual2 linearized_residual(const PairValue& p, double u, double h,
                              const FluidParams& params) {
  require_finite({u, h}, "linearized_residual");
  require_positive_h(h, "linearized_residual");
  return {p.g_u - u * p.f_u + h * p.f_h,
          p.g_h - u * p.f_h + params.pressure_factor(h) * p.f_u};
}

Residual2 linearized_residual(const HodographPair& pair, double u, double h,
                              const FluidParams& params) {
  require_positive_h(h, "linearized_residual");
  return linearized_residual(pair(u, h), u, h, params);
}

double single_f_residual(const FDerivatives& f, double u, double h,
                         const FluidParams& params) {
  require_finite({u, h}, "single_f_residual");
  require_positive_h(h, "single_f_residual");
  return 2.0 * f.f_h + h * f.f_hh - params.pressure_factor(h) * f.f_uu;
}

SolutionField apply_discrete_symmetry(const SolutionField& field, DiscreteSymmetry which) {
  const Rect& d = field.domain();
  if (which == DiscreteSymmetry::S1) {
    Rect out{reflect(d.t), reflect(d.x)};
    if (out.empty()) throw PreconditionError("reflected domain is empty");
    auto eval = [field](double t, double x) { return field(-t, -x); };
    SolutionField::JetEvaluator jet;
    if (field.has_analytic_jet()) {
      jet = [field](double t, double x) {
        FieldJet j = *field.analytic_jet(-t, -x);
        return FieldJet{j.u, j.h, -j.u_t, -j.u_x, -j.h_t, -j.h_x};
      };
    }
    return SolutionField(field.provenance() + "|S1", out, eval, jet);
  }
  Rect out{d.t, reflect(d.x)};
  if (out.empty()) throw PreconditionError("reflected domain is empty");
  auto eval = [field](double t, double x) {
    State s = field(t, -x);
    return State{-s.u, s.h};
  };
  SolutionField::JetEvaluator jet;
  if (field.has_analytic_jet()) {
    jet = [field](double t, double x) {
      FieldJet j = *field.analytic_jet(t, -x);
      return FieldJet{-j.u, j.h, -j.u_t, j.u_x, j.h_t, -j.h_x};
    };
  }
  return SolutionField(field.provenance() + "|S2", out, eval, jet);
}

void SamplingBox::validate() const {
  for (const Interval* i : {&t, &x, &u, &h, &u_x, &h_x}) {
    if (!std::isfinite(i->lo) || !std::isfinite(i->hi) || i->hi < i->lo) {
      throw ConfigError("sampling box has an invalid range");
    }
  }
  if (!(h.lo > 0)) throw ConfigError("sampling box h-range must be strictly positive");
}

JetPoint sample_manifold_jet(std::mt19937_64& rng, const FluidParams& params,
                             const SamplingBox& box) {
  box.validate();
  params.validate();
  auto draw = [&rng](const Interval& i) {
    return std::uniform_real_distribution<double>(i.lo, i.hi)(rng);
  };
  JetPoint j;
  j.t = draw(box.t);
  j.x = draw(box.x);
  j.u = draw(box.u);
  j.h = draw(box.h);
  j.u_x = draw(box.u_x);
  j.h_x = draw(box.h_x);
  j.u_t = -(j.u * j.u_x + params.pressure_factor(j.h) * j.h_x);
  j.h_t = -(j.u * j.h_x + j.h * j.u_x);
  return j;
}

JetPoint sample_manifold_jet(std::uint64_t seed, const FluidParams& params,
                             const SamplingBox& box) {
  std::mt19937_64 rng(seed);
  return sample_manifold_jet(rng, params, box);
}

}  // namespace symflow
