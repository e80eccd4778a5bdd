#include "symflow/solutions.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "symflow/errors.hpp"
#include "symflow/hodograph.hpp"
#include "symflow/model.hpp"
#include "symflow/special.hpp"

namespace symflow {

SolutionField galilean_solution(double c1, double c2, Rect domain) {
  if (!(c2 > 0)) throw ParameterError("galilean_solution: c2 must be positive");
  if (!(domain.t.lo > 0)) throw DomainError("galilean_solution: domain must lie in t > 0");
  auto eval = [c1, c2](double t, double x) { return State{(x + c1) / t, c2 / t}; };
  auto jet = [c1, c2](double t, double x) {
    return FieldJet{(x + c1) / t, c2 / t, -(x + c1) / (t * t), 1.0 / t, -c2 / (t * t), 0.0};
  };
  return SolutionField("galilean", domain, eval, jet);
}

SolutionField constant_solution(double k1, double k2, Rect domain) {
  if (!(k2 > 0)) throw ParameterError("constant_solution: height must be positive");
  return SolutionField(
      "constant", domain, [k1, k2](double, double) { return State{k1, k2}; },
      [k1, k2](double, double) { return FieldJet{k1, k2, 0, 0, 0, 0}; });
}

HodographPair simple_pair(const std::array<double, 5>& c, const FluidParams& params,
                          const Box& box) {
  params.validate();
  if (c[0] == 0 && c[1] == 0 && c[2] == 0 && c[3] == 0) {
    throw ParameterError("simple_pair: f vanishes identically");
  }
  if (!(box.h.lo > 0)) throw DomainError("simple_pair: box must lie in h > 0");
  const double H = params.H, G = params.gravity;
  auto eval = [c, H, G](double u, double h) {
    const double lnh = std::log(h), h2 = h * h;
    PairValue v;
    v.f = c[0] * u / h + c[1] / h + c[2] * u + c[3];
    v.f_u = c[0] / h + c[2];
    v.f_h = -c[0] * u / h2 - c[1] / h2;
    v.g = c[0] * (u * u / h + G * (H / h - lnh)) + c[1] * u / h +
          c[2] * (0.5 * u * u - G * (H * lnh + h)) + c[4];
    v.g_u = 2 * c[0] * u / h + c[1] / h + c[2] * u;
    v.g_h = c[0] * (-u * u / h2 - G * H / h2 - G / h) - c[1] * u / h2 - c[2] * G * (H / h + 1);
    return v;
  };
  return HodographPair("simple", eval, box, true,
                       {{"c1", c[0]}, {"c2", c[1]}, {"c3", c[2]}, {"c4", c[3]}, {"c5", c[4]},
                        {"H", H}, {"gravity", G}});
}

double bessel_order(double c, const FluidParams& params) {
  params.validate();
  if (!(c > 0)) throw ParameterError("bessel_order: c must be positive");
  const double arg = 1.0 - 4.0 * params.gravity * c;
  if (arg < 0) {
    throw UnsupportedOrderError("bessel_order: order sqrt(1 - 4c) is imaginary for this c");
  }
  return std::sqrt(arg);
}

FFunction bessel_f(double c, const std::array<double, 4>& k, const FluidParams& params) {
  const double b = bessel_order(c, params);
  if (!(params.H > 0)) throw ParameterError("bessel_f: requires H > 0");
  const double freq = std::sqrt(c / params.H);
  const double beta = 2.0 * std::sqrt(params.gravity * c / params.H);
  return [=](double u, double h) {
    if (!(h > 0)) throw DomainError("bessel_f: requires h > 0");
    const double s = k[0] * std::sin(freq * u) + k[1] * std::cos(freq * u);
    const double s_u = freq * (k[0] * std::cos(freq * u) - k[1] * std::sin(freq * u));

    const double z = beta * std::sqrt(h);
    const double Z = k[2] * special::bessel_j(b, z) + k[3] * special::bessel_y(b, z);
    const double Zp = k[2] * special::bessel_j_prime(b, z) + k[3] * special::bessel_y_prime(b, z);
    const double Zpp = special::bessel_second_derivative(b, z, Z, Zp);
    const double z_h = z / (2 * h), z_hh = -z / (4 * h * h);
    const double W = Z, W1 = Zp * z_h, W2 = Zpp * z_h * z_h + Zp * z_hh;

    const double r = 1.0 / std::sqrt(h);  // h^{-1/2}
    const double F = r * W;
    const double F1 = -0.5 * r / h * W + r * W1;
    const double F2 = 0.75 * r / (h * h) * W - r / h * W1 + r * W2;
    return FDerivatives{s * F, s_u * F, s * F1, -freq * freq * s * F, s * F2};
  };
}

FFunction half_order_f(const FluidParams& params) {
  params.validate();
  if (!(params.H > 0)) throw ParameterError("half_order_f: requires H > 0");
  const double c = 3.0 / (16.0 * params.gravity);
  const double k = std::sqrt(c / params.H);
  const double m = std::sqrt(4.0 * params.gravity * c / params.H);
  return [k, m](double u, double h) {
    if (!(h > 0)) throw DomainError("half_order_f: requires h > 0");
    const double sq = std::sqrt(h);
    const double P = std::pow(h, -0.75);
    const double P1 = -0.75 * P / h, P2 = 1.3125 * P / (h * h);
    const double Q = std::sin(m * sq), Qc = std::cos(m * sq);
    const double Q1 = Qc * m / (2 * sq);
    const double Q2 = -Q * m * m / (4 * h) - Qc * m / (4 * h * sq);
    const double s = std::sin(k * u), s_u = k * std::cos(k * u);
    return FDerivatives{s * P * Q, s_u * P * Q, s * (P1 * Q + P * Q1), -k * k * s * P * Q,
                        s * (P2 * Q + 2 * P1 * Q1 + P * Q2)};
  };
}

double stated_half_order_g(double u, double h, double H) {
  const double c = 3.0 / 16.0;
  const double a1 = std::sqrt(c * h / H);
  const double a4 = std::sqrt(4 * c * h / H);
  return H / std::pow(h, 1.25) *
         (std::sqrt(h / H) * std::sin(a1) *
              (std::cos(a4 * u) / std::sqrt(3.0) + u / std::sqrt(H) * std::sin(a4)) +
          h / H * std::cos(a1 * u) * std::cos(a4));
}

namespace {

const Box kHalfOrderBox{{0.25, 2.0}, {0.5, 2.0}};

HodographPair stated_half_order_pair(const FluidParams& params) {
  const FFunction f = half_order_f(params);
  const double H = params.H;
  // Partials of the stated g are taken numerically; only the values are stated.
  auto eval = [f, H](double u, double h) {
    const FDerivatives d = f(u, h);
    PairValue v;
    v.f = d.f;
    v.f_u = d.f_u;
    v.f_h = d.f_h;
    v.g = stated_half_order_g(u, h, H);
    const double su = 1e-5 * std::max(1.0, std::abs(u)), sh = 1e-5 * h;
    v.g_u = (stated_half_order_g(u + su, h, H) - stated_half_order_g(u - su, h, H)) / (2 * su);
    v.g_h = (stated_half_order_g(u, h + sh, H) - stated_half_order_g(u, h - sh, H)) / (2 * sh);
    return v;
  };
  return HodographPair("half_order_stated_g", eval, kHalfOrderBox, false,
                       {{"c", 3.0 / 16.0}, {"H", H}});
}

}  // namespace

std::vector<CatalogEntry> catalog(const FluidParams& params) {
  params.validate();
  std::vector<CatalogEntry> out;

  CatalogEntry gal;
  gal.id = "galilean";
  gal.kind = EntryKind::ClosedField;
  gal.description = "u = (x + c1)/t, h = c2/t";
  gal.parameters = {{"c1", 0.25}, {"c2", 1.0}};
  gal.invariant_class = "<G>";
  gal.make_field = [] { return galilean_solution(0.25, 1.0); };
  out.push_back(gal);

  CatalogEntry cst;
  cst.id = "constant";
  cst.kind = EntryKind::ClosedField;
  cst.description = "(u, h) = (k1, k2)";
  cst.parameters = {{"k1", 0.5}, {"k2", 1.5}};
  cst.make_field = [] { return constant_solution(0.5, 1.5); };
  out.push_back(cst);

  const std::array<std::pair<const char*, std::array<double, 5>>, 3> simple{{
      {"simple_c1", {1, 0, 0, 0, 0}},
      {"simple_c2", {0, 1, 0, 0, 0}},
      {"simple_c3", {0, 0, 1, 0, 0}},
  }};
  for (const auto& [id, c] : simple) {
    CatalogEntry e;
    e.id = id;
    e.kind = EntryKind::HodographPairKind;
    e.description = "f = c1 u/h + c2/h + c3 u + c4 with its partner g";
    e.parameters = {{"c1", c[0]}, {"c2", c[1]}, {"c3", c[2]}, {"c4", c[3]}, {"c5", c[4]}};
    e.box = kDefaultPairBox;
    e.make_pair = [c = c, params] { return simple_pair(c, params); };
    if (c[1] == 1) e.invariant_class = "<G> after inversion";
    out.push_back(e);
  }

  if (params.H > 0) {
    CatalogEntry half;
    half.id = "half_order";
    half.kind = EntryKind::HodographPairKind;
    half.description = "c = 3/16, c2 = c4 = 0 separable f with g rebuilt by quadrature";
    half.parameters = {{"c", 3.0 / (16.0 * params.gravity)}, {"u0", 1.0}, {"h0", 1.0}, {"g0", 0.0}};
    half.box = kHalfOrderBox;
    half.f = half_order_f(params);
    half.make_pair = [params] {
      return pair_from_f(half_order_f(params), 1.0, 1.0, 0.0, params, kHalfOrderBox);
    };
    out.push_back(half);

    if (params.gravity == 1.0) {
      CatalogEntry stated;
      stated.id = "half_order_stated_g";
      stated.kind = EntryKind::HodographPairKind;
      stated.description = "c = 3/16 pair with g as stated (audit entry)";
      stated.parameters = {{"c", 3.0 / 16.0}};
      stated.box = kHalfOrderBox;
      stated.f = half_order_f(params);
      stated.make_pair = [params] { return stated_half_order_pair(params); };
      stated.audit_residual = max_linearized_residual(stated_half_order_pair(params), params, 100, 7);
      stated.audit_failed = !(stated.audit_residual < 1e-7);
      out.push_back(stated);
    }

    const double c = 0.125;
    if (params.gravity * c <= 0.25) {
      CatalogEntry bes;
      bes.id = "bessel_c_1_8";
      bes.kind = EntryKind::SeparableF;
      bes.description = "separable f with c = 1/8 and mixed J/Y";
      bes.parameters = {{"c", c}, {"c1", 1.0}, {"c2", 0.5}, {"c3", 1.0}, {"c4", 0.5}};
      bes.f = bessel_f(c, {1.0, 0.5, 1.0, 0.5}, params);
      out.push_back(bes);
    }
  }
  return out;
}

const CatalogEntry& find_entry(const std::vector<CatalogEntry>& entries, const std::string& id) {
  for (const auto& e : entries) {
    if (e.id == id) return e;
  }
  throw ConfigError("unknown catalog id '" + id + "'");
}

double entry_residual(const CatalogEntry& entry, const FluidParams& params, int samples,
                      std::uint64_t seed) {
  switch (entry.kind) {
    case EntryKind::ClosedField: {
      VerifyOptions opt;
      opt.samples = samples;
      opt.seed = seed;
      return verify_field(entry.make_field(), params, opt).max_abs();
    }
    case EntryKind::HodographPairKind: {
      const HodographPair pair = entry.make_pair();
      double r = max_linearized_residual(pair, params, samples, seed, true);
      if (pair.analytic_partials()) {
        r = std::max(r, max_linearized_residual(pair, params, samples, seed, false));
      }
      return r;
    }
    case EntryKind::SeparableF: {
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> du(entry.box.u.lo, entry.box.u.hi);
      std::uniform_real_distribution<double> dh(entry.box.h.lo, entry.box.h.hi);
      double worst = 0;
      for (int k = 0; k < samples; ++k) {
        const double u = du(rng), h = dh(rng);
        worst = std::max(worst, std::abs(single_f_residual(entry.f(u, h), u, h, params)));
      }
      return worst;
    }
  }
  return 0;
}

}  // namespace symflow
