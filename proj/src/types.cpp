#include "symflow/types.hpp"

#include <cmath>
#include <utility>

#include "symflow/errors.hpp"

namespace symflow {

void FluidParams::validate() const {
  if (!std::isfinite(H) || !std::isfinite(gravity)) {
    throw DomainError("fluid parameters must be finite");
  }
  if (gravity <= 0) {
    throw DomainError("gravity must be positive");
  }
}

SolutionField::SolutionField(std::string provenance, Rect domain, Evaluator eval,
                             JetEvaluator jet)
    : provenance_(std::move(provenance)),
      domain_(domain),
      eval_(std::move(eval)),
      jet_(std::move(jet)) {}

State SolutionField::operator()(double t, double x) const {
  const State s = eval_(t, x);
  if (!std::isfinite(s.u) || !std::isfinite(s.h)) {
    throw EvaluationError("field '" + provenance_ + "' is not finite at t=" +
                          std::to_string(t) + ", x=" + std::to_string(x));
  }
  return s;
}

std::optional<FieldJet> SolutionField::analytic_jet(double t, double x) const {
  if (!jet_) return std::nullopt;
  return jet_(t, x);
}

HodographPair::HodographPair(std::string name, Evaluator eval, Box box,
                             bool analytic_partials,
                             std::map<std::string, double> parameters)
    : name_(std::move(name)),
      eval_(std::move(eval)),
      box_(box),
      analytic_partials_(analytic_partials),
      parameters_(std::move(parameters)) {}

PairValue HodographPair::operator()(double u, double h) const {
  if (!(h > 0) || !std::isfinite(u)) {
    throw DomainError("hodograph pair '" + name_ + "' evaluated outside h > 0");
  }
  const PairValue v = eval_(u, h);
  for (double c : {v.f, v.f_u, v.f_h, v.g, v.g_u, v.g_h}) {
    if (!std::isfinite(c)) {
      throw EvaluationError("hodograph pair '" + name_ + "' is not finite");
    }
  }
  return v;
}

}  // namespace symflow
