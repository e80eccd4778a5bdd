#include "symflow/campaign.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>

#include <json.hpp>

#include "symflow/algebra.hpp"
#include "symflow/errors.hpp"
#include "symflow/finite_diff.hpp"
#include "symflow/fvsolver.hpp"
#include "symflow/hodograph.hpp"
#include "symflow/model.hpp"
#include "symflow/reduce.hpp"
#include "symflow/solutions.hpp"
#include "symflow/special.hpp"
#include "symflow/vfield.hpp"

namespace symflow {

using nlohmann::json;

namespace {

const std::vector<std::pair<Command, std::string>> kCommands{
    {Command::VerifySymmetries, "verify-symmetries"},
    {Command::Classify, "classify"},
    {Command::Reduce, "reduce"},
    {Command::Invert, "invert"},
    {Command::Simulate, "simulate"},
    {Command::Audit, "audit"},
};

// --- configuration ---------------------------------------------------------

[[noreturn]] void config_error(const std::string& path, const std::string& what) {
  throw ConfigError("config: field '" + path + "' " + what);
}

void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) config_error(path.empty() ? "<root>" : path, "must be an object");
  for (const auto& item : obj.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* k) { return item.key() == k; });
    if (!known) config_error(path.empty() ? item.key() : path + "." + item.key(), "is not recognized");
  }
}

double get_number(const json& obj, const char* key, const std::string& path, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) config_error(path, "must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) config_error(path, "must be finite");
  return d;
}

double get_positive(const json& obj, const char* key, const std::string& path, double fallback) {
  const double d = get_number(obj, key, path, fallback);
  if (!(d > 0)) config_error(path, "must be positive");
  return d;
}

}  // namespace

std::string command_name(Command c) {
  for (const auto& [cmd, name] : kCommands) {
    if (cmd == c) return name;
  }
  return "unknown";
}

Command parse_command(const std::string& name) {
  for (const auto& [cmd, n] : kCommands) {
    if (n == name) return cmd;
  }
  throw ConfigError("unknown command '" + name + "'");
}

Campaign parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  check_keys(root, "", {"command", "H", "gravity", "seed", "tolerances", "catalog", "grid",
                        "reduce", "out"});
  Campaign c;
  if (!root.contains("command")) config_error("command", "is required");
  if (!root["command"].is_string()) config_error("command", "must be a string");
  try {
    c.command = parse_command(root["command"].get<std::string>());
  } catch (const ConfigError&) {
    config_error("command", "names an unknown command '" + root["command"].get<std::string>() + "'");
  }
  c.params.H = get_number(root, "H", "H", 1.0);
  if (c.params.H < 0) config_error("H", "must be non-negative");
  c.params.gravity = get_positive(root, "gravity", "gravity", 1.0);
  if (root.contains("seed")) {
    const json& s = root["seed"];
    if (!s.is_number_integer() || s.get<long long>() < 0) {
      config_error("seed", "must be a non-negative integer");
    }
    c.seed = s.get<std::uint64_t>();
  }
  if (root.contains("tolerances")) {
    const json& t = root["tolerances"];
    check_keys(t, "tolerances", {"defect", "residual", "newton"});
    c.tolerances.defect = get_positive(t, "defect", "tolerances.defect", c.tolerances.defect);
    c.tolerances.residual =
        get_positive(t, "residual", "tolerances.residual", c.tolerances.residual);
    c.tolerances.newton = get_positive(t, "newton", "tolerances.newton", c.tolerances.newton);
  }
  if (root.contains("grid")) {
    const json& g = root["grid"];
    check_keys(g, "grid", {"t0", "t1", "x0", "x1", "nx", "cfl"});
    c.grid.t0 = get_number(g, "t0", "grid.t0", c.grid.t0);
    c.grid.t1 = get_number(g, "t1", "grid.t1", c.grid.t1);
    c.grid.x0 = get_number(g, "x0", "grid.x0", c.grid.x0);
    c.grid.x1 = get_number(g, "x1", "grid.x1", c.grid.x1);
    c.grid.cfl = get_positive(g, "cfl", "grid.cfl", c.grid.cfl);
    if (g.contains("nx")) {
      if (!g["nx"].is_number_integer() || g["nx"].get<long long>() < 4) {
        config_error("grid.nx", "must be an integer >= 4");
      }
      c.grid.nx = g["nx"].get<int>();
    }
    if (!(c.grid.t1 > c.grid.t0)) config_error("grid.t1", "must exceed grid.t0");
    if (!(c.grid.x1 > c.grid.x0)) config_error("grid.x1", "must exceed grid.x0");
    if (c.grid.cfl > 0.9) config_error("grid.cfl", "must not exceed 0.9");
  }
  if (root.contains("reduce")) {
    const json& r = root["reduce"];
    check_keys(r, "reduce", {"a", "p0", "state0", "p_end"});
    c.reduce.a = get_number(r, "a", "reduce.a", c.reduce.a);
    c.reduce.p0 = get_number(r, "p0", "reduce.p0", c.reduce.p0);
    c.reduce.p_end = get_number(r, "p_end", "reduce.p_end", c.reduce.p_end);
    if (r.contains("state0")) {
      const json& s = r["state0"];
      if (!s.is_array() || s.size() != 2 || !s[0].is_number() || !s[1].is_number()) {
        config_error("reduce.state0", "must be an array [u, h] of two numbers");
      }
      c.reduce.state0 = {s[0].get<double>(), s[1].get<double>()};
      if (!(c.reduce.state0.h > 0)) config_error("reduce.state0", "must have positive h");
    }
  }
  if (root.contains("out")) {
    if (!root["out"].is_string()) config_error("out", "must be a string");
    c.out_dir = root["out"].get<std::string>();
  }
  if (root.contains("catalog")) {
    const json& ids = root["catalog"];
    if (!ids.is_array()) config_error("catalog", "must be an array of ids");
    const auto entries = catalog(c.params);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const std::string path = "catalog[" + std::to_string(i) + "]";
      if (!ids[i].is_string()) config_error(path, "must be a string");
      const std::string id = ids[i].get<std::string>();
      const bool known = std::any_of(entries.begin(), entries.end(),
                                     [&](const CatalogEntry& e) { return e.id == id; });
      if (!known) config_error(path, "names unknown catalog id '" + id + "'");
      c.catalog.push_back(id);
    }
  }
  return c;
}

Campaign load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Flag: return "flag";
    case CheckStatus::Fail: return "fail";
  }
  return "fail";
}

int Report::count(CheckStatus s) const {
  return static_cast<int>(std::count_if(checks.begin(), checks.end(),
                                        [s](const Check& c) { return c.status == s; }));
}

// --- checks ----------------------------------------------------------------

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

class Runner {
 public:
  Runner(const Campaign& c) : c_(c), entries_(catalog(c.params)), rng_(c.seed) {
    report_.command = c.command;
    report_.seed = c.seed;
    report_.params = c.params;
  }

  Report finish() { return std::move(report_); }

  void verify_symmetries();
  void classify();
  void reduce();
  void invert();
  void simulate();
  void audit();

 private:
  using Body = std::function<Check()>;

  // Runs one check; exceptions become failed records.
  void add(const std::string& name, const std::string& anchor, const Body& body) {
    Check out;
    try {
      out = body();
    } catch (const std::exception& e) {
      out.value = kNaN;
      out.status = CheckStatus::Fail;
      out.note = e.what();
    }
    out.name = name;
    out.anchor = anchor;
    report_.checks.push_back(std::move(out));
  }

  static Check below(double value, double tol, std::string note = {}) {
    return {"", "", value, tol, value < tol ? CheckStatus::Pass : CheckStatus::Fail,
            std::move(note)};
  }
  static Check flag(double value, double tol, std::string note) {
    return {"", "", value, tol, CheckStatus::Flag, std::move(note)};
  }

  std::uint64_t next_seed() { return rng_(); }

  bool selected(const CatalogEntry& e) const {
    return c_.catalog.empty() ||
           std::find(c_.catalog.begin(), c_.catalog.end(), e.id) != c_.catalog.end();
  }

  std::vector<const CatalogEntry*> pair_entries() const {
    std::vector<const CatalogEntry*> out;
    for (const auto& e : entries_) {
      if (e.make_pair && !e.audit_failed && selected(e)) out.push_back(&e);
    }
    return out;
  }

  double max_defect(const VectorFieldSpec& v, const FluidParams& params, int jets,
                    std::uint64_t seed, const SamplingBox& box = {}) const {
    std::mt19937_64 rng(seed);
    double worst = 0;
    for (int k = 0; k < jets; ++k) {
      const JetPoint j = sample_manifold_jet(rng, params, box);
      worst = std::max(worst, invariance_defect(v, j, params).max_abs());
    }
    return worst;
  }

  const Campaign& c_;
  std::vector<CatalogEntry> entries_;
  std::mt19937_64 rng_;
  Report report_;
};

SamplingBox box_for(const Box& b) {
  SamplingBox s;
  s.u = b.u;
  s.h = b.h;
  return s;
}

void Runner::verify_symmetries() {
  const FluidParams& P = c_.params;
  const double tol = c_.tolerances.defect;
  const int jets = 200;
  std::vector<VectorFieldSpec> gens{generators::dilation(), generators::galilean_boost(),
                                    generators::time_translation(),
                                    generators::space_translation()};
  if (P.H == 0) gens.push_back(generators::swe_height_scaling());
  for (const auto& g : gens) {
    const std::uint64_t seed = next_seed();
    add("symmetry_defect/" + g.name(), "invariance condition of the prolonged generator",
        [&, seed] { return below(max_defect(g, P, jets, seed), tol); });
  }
  for (const CatalogEntry* e : pair_entries()) {
    const std::uint64_t seed = next_seed();
    add("symmetry_defect/L(" + e->id + ")", "linearizing generator f dt + g dx", [&, e, seed] {
      const HodographPair pair = e->make_pair();
      return below(max_defect(generators::linearizing(pair), P, jets, seed, box_for(e->box)), tol,
                   pair.analytic_partials() ? "analytic partials" : "finite-difference partials");
    });
  }
  if (P.H == 0) {
    const std::uint64_t seed = next_seed();
    add("audit/projective_generator", "extra shallow-water generator C",
        [&, seed] {
          const double d = max_defect(generators::swe_projective(P.gravity), P, jets, seed);
          return flag(d, tol, "measured defect of C with g read as gravity");
        });
  }
  for (const CatalogEntry* e : pair_entries()) {
    const std::uint64_t seed = next_seed();
    add("determining/" + e->id, "determining equations for the general symmetry",
        [&, e, seed] {
          const HodographPair pair = e->make_pair();
          const VectorFieldSpec v = generators::general_solution(1.3, -0.7, pair);
          std::mt19937_64 rng(seed);
          auto draw = [&rng](const Interval& i) {
            return std::uniform_real_distribution<double>(i.lo, i.hi)(rng);
          };
          double worst = 0;
          for (int k = 0; k < 100; ++k) {
            const Point p{draw({0.5, 2.0}), draw({-1.0, 1.0}), draw(e->box.u), draw(e->box.h)};
            for (double d : determining_defect(v, p, P)) worst = std::max(worst, std::abs(d));
          }
          return below(worst, tol);
        });
  }
  for (const auto& e : entries_) {
    if (e.kind != EntryKind::ClosedField || !selected(e)) continue;
    for (DiscreteSymmetry s : {DiscreteSymmetry::S1, DiscreteSymmetry::S2}) {
      const std::string sname = s == DiscreteSymmetry::S1 ? "S1" : "S2";
      const std::uint64_t seed = next_seed();
      add("discrete/" + sname + "/" + e.id, "discrete point symmetries", [&, s, seed] {
        const SolutionField f = e.make_field();
        const SolutionField image = apply_discrete_symmetry(f, s);
        VerifyOptions vo;
        vo.seed = seed;
        vo.use_analytic = false;
        const ResidualReport r = verify_field(image, P, vo);
        // Involution: applying the map twice returns the original field.
        const SolutionField twice = apply_discrete_symmetry(image, s);
        std::mt19937_64 rng(seed);
        const Rect& d = f.domain();
        double diff = 0;
        for (int k = 0; k < 50; ++k) {
          const double t = std::uniform_real_distribution<double>(d.t.lo, d.t.hi)(rng);
          const double x = std::uniform_real_distribution<double>(d.x.lo, d.x.hi)(rng);
          const State a = f(t, x), b = twice(t, x);
          diff = std::max({diff, std::abs(a.u - b.u), std::abs(a.h - b.h)});
        }
        Check out = below(std::max(r.max_abs(), diff), c_.tolerances.residual,
                          "involution mismatch " + std::to_string(diff));
        if (r.evaluated == 0) out.status = CheckStatus::Fail;
        return out;
      });
    }
  }
}

void Runner::classify() {
  const FluidParams& P = c_.params;
  const double tol = c_.tolerances.defect;
  std::vector<HodographPair> pairs;
  for (const CatalogEntry* e : pair_entries()) pairs.push_back(e->make_pair());

  const std::uint64_t s1 = next_seed();
  add("commutators", "commutation relations of the invariance algebra", [&, s1] {
    const CommutatorReport r = commutator_table_check(pairs, P, 50, s1);
    std::ostringstream note;
    note << "[D,G] " << r.dilation_boost << "; [L,D] " << r.linearizing_dilation << "; [G,L] "
         << r.boost_linearizing << "; [L,L] " << r.linearizing_linearizing;
    return below(r.max(), tol, note.str());
  });

  const std::uint64_t s2 = next_seed();
  add("commutators/corrupted_pair", "membership of L(f,g) in the algebra", [&, s2] {
    const HodographPair bad(
        "corrupted", [](double, double h) { return PairValue{h, 0, 1, 0, 0, 0}; },
        kDefaultPairBox);
    const CommutatorReport r = commutator_table_check({bad}, P, 50, s2);
    Check out{"", "", r.linearizing_dilation, 1e-3,
              r.linearizing_dilation > 1e-3 ? CheckStatus::Pass : CheckStatus::Fail,
              "deviation must be reported for (f,g) = (h,0)"};
    return out;
  });

  const std::uint64_t s3 = next_seed();
  add("adjoint/lie_series", "adjoint actions through the Lie series", [&, s3] {
    const std::optional<HodographPair> pair = simple_pair({1, 0.5, 0, 0, 0}, P);
    const VectorFieldSpec D = generators::dilation(), G = generators::galilean_boost();
    const VectorFieldSpec L = generators::linearizing(*pair);
    std::mt19937_64 rng(s3);
    auto draw = [&rng](const Interval& i) {
      return std::uniform_real_distribution<double>(i.lo, i.hi)(rng);
    };
    double ratio = 0;
    for (double eps : {0.1, -0.07, 0.03}) {
      const double bound = 10 * std::pow(std::abs(eps), 4);
      struct Case {
        VectorFieldSpec gen;
        VectorFieldSpec target;
        AlgebraElement closed;
      };
      const AlgebraElement dilation_el{1, 0, std::nullopt}, boost_el{0, 1, std::nullopt};
      const AlgebraElement pair_el{0, 0, *pair};
      const std::vector<Case> cases{
          {D, L, adjoint(DilationGenerator{}, eps, pair_el)},
          {G, L, adjoint(BoostGenerator{}, eps, pair_el)},
          {L, D, adjoint(LinearizingGenerator{*pair}, eps, dilation_el)},
          {L, G, adjoint(LinearizingGenerator{*pair}, eps, boost_el)},
      };
      for (const auto& cs : cases) {
        const VectorFieldSpec series = lie_series(cs.gen, cs.target, eps, 3);
        const VectorFieldSpec closed = element_field(cs.closed);
        for (int k = 0; k < 10; ++k) {
          const Point p{draw({0.5, 2.0}), draw({-1.0, 1.0}), draw({-0.8, 0.8}), draw({0.6, 1.8})};
          const auto a = series.coefficients(p), b = closed.coefficients(p);
          for (int i = 0; i < 4; ++i) ratio = std::max(ratio, std::abs(a[i] - b[i]) / bound);
        }
      }
      // The four g1 flows against the vector-field series.
      const std::array<VectorFieldSpec, 4> basis{D, G, generators::space_translation(),
                                                 generators::time_translation()};
      const std::array<G1Flow, 4> flows{G1Flow::Dilation, G1Flow::Boost,
                                        G1Flow::SpaceTranslation, G1Flow::TimeTranslation};
      auto as_field = [&](const G1Element& v) {
        std::vector<std::pair<double, VectorFieldSpec>> terms;
        for (int i = 0; i < 4; ++i) terms.emplace_back(v.a[i], basis[i]);
        return linear_combination(terms);
      };
      for (int f = 0; f < 4; ++f) {
        const G1Element v{{draw({-1, 1}), draw({-1, 1}), draw({-1, 1}), draw({-1, 1})}};
        const VectorFieldSpec series = lie_series(basis[f], as_field(v), eps, 3);
        const VectorFieldSpec closed = as_field(adjoint_g1(flows[f], eps, v));
        const Point p{draw({0.5, 2.0}), draw({-1.0, 1.0}), 0.0, 1.0};
        const auto a = series.coefficients(p), b = closed.coefficients(p);
        for (int i = 0; i < 4; ++i) ratio = std::max(ratio, std::abs(a[i] - b[i]) / bound);
      }
    }
    return below(ratio, 1.0, "max |series - closed form| / (10 eps^4)");
  });

  const std::uint64_t s4 = next_seed();
  add("classify/orbit_invariance", "optimal list for the finite-dimensional subalgebra", [&, s4] {
    const OrbitInvarianceReport r = orbit_invariance_audit(1000, s4, false);
    std::ostringstream note;
    note << r.trials << " generic elements; idempotence failures " << r.idempotence_failures
         << "; span failures " << r.span_failures;
    const int bad = r.violations + r.idempotence_failures + r.span_failures;
    return below(bad, 0.5, note.str());
  });

  const std::uint64_t s5 = next_seed();
  add("classify/normalize_g", "optimal list for the full algebra", [&, s5] {
    // Pairs with g by quadrature cost far more per normalization.
    std::vector<HodographPair> pairs;
    for (const CatalogEntry* e : pair_entries()) {
      if (e->kind == EntryKind::HodographPairKind && e->id.rfind("simple", 0) == 0) {
        pairs.push_back(e->make_pair());
      }
    }
    std::mt19937_64 rng(s5);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    auto nonzero = [&] {
      double x;
      do x = coef(rng);
      while (std::abs(x) < 0.05);
      return x;
    };
    int failures = 0, trials = 0;
    for (int k = 0; k < 1000; ++k) {
      AlgebraElement v;
      const int kind = k % 3;
      v.a = kind == 0 ? nonzero() : 0.0;
      v.b = kind <= 1 ? nonzero() : 0.0;
      if (kind == 2) {
        // Pair-only elements are costly to normalize; sample a subset.
        if (pairs.empty() || k % 30 != 2) continue;
        v.pair = scale_pair(shift_pair(pairs[(k / 30) % pairs.size()], 0.3 * coef(rng)), nonzero());
      } else if (!pairs.empty()) {
        v.pair = pairs[k % pairs.size()];
      }
      ++trials;
      const CanonicalClass c = normalize_g(v);
      AlgebraElement scaled = v;
      const double lambda = nonzero();
      scaled.a *= lambda;
      scaled.b *= lambda;
      if (scaled.pair) scaled.pair = scale_pair(*scaled.pair, lambda);
      if (!same_class(c, normalize_g(representative(c)), 1e-8)) ++failures;
      if (!same_class(c, normalize_g(scaled), 1e-8)) ++failures;
    }
    return below(failures, 0.5, std::to_string(trials) + " elements; idempotence and span checks");
  });

  const std::uint64_t s6 = next_seed();
  add("audit/orbit_strata", "optimal list for the finite-dimensional subalgebra", [&, s6] {
    const OrbitInvarianceReport r = orbit_invariance_audit(1000, s6, true);
    std::ostringstream note;
    note << "violations by stratum <D+aG>,<G+delta dt>,<dt+delta dx>,<dx>: "
         << r.violations_by_stratum[0] << "," << r.violations_by_stratum[1] << ","
         << r.violations_by_stratum[2] << "," << r.violations_by_stratum[3];
    return flag(r.violations, 0, note.str());
  });

  const std::uint64_t s7 = next_seed();
  add("audit/delta_redundancy", "optimal list for the finite-dimensional subalgebra", [&, s7] {
    const OrbitSearchResult dt = orbit_equivalent_g1({{0, 0, 1, 1}}, {{0, 0, 0, 1}}, 20, s7);
    const OrbitSearchResult gt = orbit_equivalent_g1({{0, 1, 0, 1}}, {{0, 1, 0, 0}}, 20, s7);
    std::ostringstream note;
    note << "<dt + dx> ~ <dt>: " << (dt.equivalent ? "equivalent" : "not found");
    if (dt.equivalent) note << " (boost parameter " << dt.flows[1] << ")";
    note << "; <G + dt> ~ <G>: " << (gt.equivalent ? "equivalent" : "not found");
    return flag(dt.residual, 1e-8, note.str());
  });
}

void Runner::reduce() {
  const FluidParams& P = c_.params;
  const ReduceSpec& R = c_.reduce;
  const double tol = c_.tolerances.residual;
  std::optional<Trajectory> traj;
  add("reduce/integrate", "reduced system for <D + aG>", [&] {
    traj = integrate_case_i(R.a, P, R.p0, R.state0, R.p_end);
    double worst = 0;
    const auto& nodes = traj->nodes();
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
      const double p = 0.5 * (nodes[i].p + nodes[i + 1].p);
      const double step = std::min(1e-3, 0.2 * (nodes[i + 1].p - nodes[i].p));
      const ReducedState s = traj->eval(p);
      const double du = fd::derivative([&](double q) { return traj->eval(q).u; }, p, step);
      const double dh = fd::derivative([&](double q) { return traj->eval(q).h; }, p, step);
      const auto [r1, r2] = case_i_residual(R.a, P, s, du, dh);
      worst = std::max({worst, std::abs(r1), std::abs(r2)});
    }
    Check out = below(worst, 1e-8, "status " + traj->status_name() + ", " +
                                       std::to_string(nodes.size()) + " nodes");
    return out;
  });
  const std::uint64_t s4 = next_seed();
  add("reduce/case_ii", "Galilean invariant solution", [&, s4] {
    const Rect d{{1.0, 2.0}, {0.0, 1.0}};
    const SolutionField a = case_ii_field(0.25, 1.0, d), b = galilean_solution(0.25, 1.0, d);
    std::mt19937_64 rng(s4);
    double diff = 0, ode = 0;
    for (int k = 0; k < 100; ++k) {
      const double t = std::uniform_real_distribution<double>(1.0, 2.0)(rng);
      const double x = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      const State u = a(t, x), v = b(t, x);
      diff = std::max({diff, std::abs(u.u - v.u), std::abs(u.h - v.h)});
      const auto [r1, r2] = case_ii_residual({t, 0.25 / t, 1.0 / t}, -0.25 / (t * t), -1.0 / (t * t));
      ode = std::max({ode, std::abs(r1), std::abs(r2)});
    }
    return below(std::max(diff, ode), 1e-14);
  });
  add("reduce/case_iii_constants", "reduction by <L(f,g)>", [&] {
    double worst = 0;
    const std::vector<HodographPair> pairs{
        HodographPair("travel", [](double, double) { return PairValue{1, 0, 0, 0.7, 0, 0}; },
                      kDefaultPairBox),
        HodographPair("stationary", [](double, double) { return PairValue{1, 0, 0, 0, 0, 0}; },
                      kDefaultPairBox)};
    for (const auto& p : pairs) {
      for (double u : {-0.5, 0.0, 0.8}) {
        for (double h : {0.6, 1.0, 1.7}) {
          const auto [r1, r2] = case_iii_residual(p, {0.3, u, h}, 0.0, 0.0, P);
          worst = std::max({worst, std::abs(r1), std::abs(r2)});
        }
      }
    }
    return Check{"", "", worst, 0.0, worst == 0 ? CheckStatus::Pass : CheckStatus::Fail, ""};
  });
  if (!traj) return;
  const Rect domain{{c_.grid.t0, c_.grid.t1}, {c_.grid.x0, c_.grid.x1}};
  // Default lifting window follows the trajectory when no grid was configured.
  const Rect lift_domain = [&] {
    const Interval pr = traj->p_range();
    const double t0 = 1.0, t1 = 1.2;
    const double lo = pr.lo - R.a, hi = pr.hi - R.a;
    return Rect{{t0, t1}, {t0 * lo, t1 * hi}};
  }();
  (void)domain;
  const std::uint64_t s1 = next_seed();
  add("reduce/lift_case_i", "reduction ansatz u = u~(p) + a ln t", [&, s1] {
    const LiftedField lf = lift_case_i(*traj, lift_domain);
    VerifyOptions vo;
    vo.seed = s1;
    vo.use_analytic = false;
    const ResidualReport r = verify_field(lf.field, P, vo);
    Check out = below(r.max_abs(), tol, lf.clipped ? "domain clipped to the trajectory" : "");
    if (r.evaluated == 0) out.status = CheckStatus::Fail;
    return out;
  });
  const std::uint64_t s2 = next_seed();
  add("reduce/general_ia_reconcile", "general ansatz for <a1 D + a2 G + a3 dx + a4 dt>",
      [&, s2] {
        const LiftedField a = lift_case_i(*traj, lift_domain);
        const LiftedField b = lift_general_ia(1, R.a, 0, 0, *traj, LogSign::Corrected, lift_domain);
        std::mt19937_64 rng(s2);
        const Rect& d = a.field.domain();
        double diff = 0;
        for (int k = 0; k < 100; ++k) {
          const double t = std::uniform_real_distribution<double>(d.t.lo, d.t.hi)(rng);
          const double x = std::uniform_real_distribution<double>(d.x.lo, d.x.hi)(rng);
          const State u = a.field(t, x), v = b.field(t, x);
          diff = std::max({diff, std::abs(u.u - v.u), std::abs(u.h - v.h)});
        }
        return below(diff, 1e-9, "log term with + sign reproduces the case-(i) lift");
      });
  const std::uint64_t s3 = next_seed();
  add("audit/general_ia_sign", "general ansatz for <a1 D + a2 G + a3 dx + a4 dt>", [&, s3] {
    const LiftedField stated =
        lift_general_ia(1, R.a, 0, 0, *traj, LogSign::AsStated, lift_domain);
    const LiftedField corrected =
        lift_general_ia(1, R.a, 0, 0, *traj, LogSign::Corrected, lift_domain);
    VerifyOptions vo;
    vo.seed = s3;
    vo.use_analytic = false;
    const double rp = verify_field(stated.field, P, vo).max_abs();
    const double rc = verify_field(corrected.field, P, vo).max_abs();
    std::ostringstream note;
    note << "residual with stated sign " << rp << ", with + sign " << rc;
    return flag(rp, tol, note.str());
  });
  if (!c_.out_dir.empty()) {
    add("reduce/export", "reduced trajectory", [&] {
      std::filesystem::create_directories(c_.out_dir);
      const std::string path = (std::filesystem::path(c_.out_dir) / "trajectory.csv").string();
      std::ofstream out(path);
      if (!out) throw ConfigError("cannot write '" + path + "'");
      out << "p,u,h\n";
      out.precision(17);
      for (const auto& s : traj->nodes()) out << s.p << ',' << s.u << ',' << s.h << '\n';
      return below(0, 1, path);
    });
  }
}

void Runner::invert() {
  const FluidParams& P = c_.params;
  for (const CatalogEntry* e : pair_entries()) {
    const std::uint64_t seed = next_seed();
    add("invert/roundtrip/" + e->id, "hodograph transformation t = f, x = g", [&, e, seed] {
      const HodographPair pair = e->make_pair();
      std::mt19937_64 rng(seed);
      auto draw = [&rng](const Interval& i) {
        return std::uniform_real_distribution<double>(i.lo, i.hi)(rng);
      };
      double worst = 0;
      for (int k = 0; k < 100; ++k) {
        const double u = draw(e->box.u), h = draw(e->box.h);
        const PairValue q = pair(u, h);
        const State guess{u + 0.05 * e->box.u.width(), h - 0.05 * e->box.h.width()};
        const State s = invert_point(pair, q.f, q.g, guess, c_.tolerances.newton);
        worst = std::max({worst, std::abs(s.u - u), std::abs(s.h - h)});
      }
      return below(worst, 1e-9);
    });
  }
  const std::uint64_t s1 = next_seed();
  add("invert/simple_c2_galilean", "simple pair inverts to the Galilean solution", [&, s1] {
    const HodographPair pair = simple_pair({0, 1, 0, 0, 0}, P);
    const Rect d{{1.0, 2.0}, {0.0, 1.0}};
    FieldFromPairOptions opt;
    opt.tol = c_.tolerances.newton;
    const InvertedField inv = field_from_pair(pair, d, 11, 11, opt);
    const SolutionField exact = galilean_solution(0.0, 1.0, d);
    std::mt19937_64 rng(s1);
    double diff = 0;
    for (int k = 0; k < 100; ++k) {
      const double t = std::uniform_real_distribution<double>(1.0, 2.0)(rng);
      const double x = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      const State a = inv.field(t, x), b = exact(t, x);
      diff = std::max({diff, std::abs(a.u - b.u), std::abs(a.h - b.h)});
    }
    return below(diff, 1e-9);
  });
  if (P.H > 0) {
    const std::uint64_t s2 = next_seed();
    add("invert/half_order_field", "non-Lie solution by hodograph inversion", [&, s2] {
      const CatalogEntry& e = find_entry(entries_, "half_order");
      const InvertedField inv =
          field_from_pair(e.make_pair(), Rect{{0.30, 0.34}, {-0.1, 0.1}}, 21, 21);
      VerifyOptions vo;
      vo.seed = s2;
      vo.use_analytic = false;
      const ResidualReport r = verify_field(inv.field, P, vo);
      std::ostringstream note;
      note << "converged fraction " << inv.converged_fraction() << ", " << r.evaluated
           << " points evaluated";
      Check out = below(r.max_abs(), c_.tolerances.residual, note.str());
      if (r.evaluated == 0) out.status = CheckStatus::Fail;
      return out;
    });
    for (const auto& e : entries_) {
      if (!e.audit_failed) continue;
      add("audit/" + e.id, "linearized system for (f, g)", [&] {
        return flag(e.audit_residual, 1e-7, "stated formula measured against the linearized system");
      });
    }
    const std::uint64_t s3 = next_seed();
    add("separable/single_f", "single equation for f", [&, s3] {
      double worst = 0;
      std::string skipped;
      std::mt19937_64 rng(s3);
      for (double c : {0.125, 0.1875, 0.25}) {
        if (P.gravity * c > 0.25) {
          skipped += " c=" + std::to_string(c);
          continue;
        }
        const FFunction f = bessel_f(c, {1.0, 0.5, 1.0, 0.5}, P);
        for (int k = 0; k < 100; ++k) {
          const double u = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
          const double h = std::uniform_real_distribution<double>(0.5, 2.0)(rng);
          worst = std::max(worst, std::abs(single_f_residual(f(u, h), u, h, P)));
        }
      }
      Check out = below(worst, c_.tolerances.defect);
      if (!skipped.empty()) out.note = "order imaginary for" + skipped;
      return out;
    });
    add("separable/half_order_identity", "half-order member in elementary functions", [&] {
      const double c = 3.0 / (16.0 * P.gravity);
      const double m = 2.0 * std::sqrt(P.gravity * c / P.H);
      const double k = std::sqrt(2.0 / (M_PI * m));
      const FFunction bes = bessel_f(c, {1.0, 0.0, 1.0, 0.0}, P);
      const FFunction half = half_order_f(P);
      double worst = 0;
      for (double u : {-0.9, -0.2, 0.4, 1.0}) {
        for (double h : {0.5, 0.9, 1.4, 2.0}) {
          const FDerivatives a = bes(u, h), b = half(u, h);
          worst = std::max({worst, std::abs(a.f - k * b.f), std::abs(a.f_u - k * b.f_u),
                            std::abs(a.f_h - k * b.f_h)});
        }
      }
      return below(worst, 1e-8);
    });
  }
  add("separable/wronskian", "Bessel functions of the separable family", [&] {
    double worst = 0;
    for (double nu : {0.0, 0.5, 0.5 * std::sqrt(2.0), 1.0}) {
      for (double z : {0.3, 0.8, 1.5, 3.0, 6.0}) {
        const double w = special::bessel_j(nu, z) * special::bessel_y_prime(nu, z) -
                         special::bessel_j_prime(nu, z) * special::bessel_y(nu, z);
        worst = std::max(worst, std::abs(w - 2.0 / (M_PI * z)));
      }
    }
    return below(worst, 1e-10);
  });
}

void Runner::simulate() {
  const FluidParams& P = c_.params;
  const GridSpec& g = c_.grid;
  const std::vector<int> res{g.nx, 2 * g.nx, 4 * g.nx};
  auto order_check = [&](const ConvergenceResult& r) {
    std::ostringstream note;
    note << "order u " << r.order_u << ", order h " << r.order_h << "; L1 errors u";
    for (const auto& e : r.errors) note << ' ' << e.u;
    const double lo = std::min(r.order_u, r.order_h), hi = std::max(r.order_u, r.order_h);
    const bool ok = !r.degenerate && lo >= 0.8 && hi <= 1.3;
    return Check{"", "", lo, 0.8, ok ? CheckStatus::Pass : CheckStatus::Fail, note.str()};
  };
  add("simulate/galilean_order", "finite-volume cross-check against the Galilean solution", [&] {
    const Rect w{{g.t0, g.t1}, {g.x0, g.x1}};
    const SolutionField exact = galilean_solution(0.25, 1.0, w);
    const ConvergenceResult r = convergence_order(exact, P, w, res, g.cfl);
    if (!c_.out_dir.empty()) {
      std::filesystem::create_directories(c_.out_dir);
      std::ofstream out(std::filesystem::path(c_.out_dir) / "galilean_grid.csv");
      write_csv(symflow::simulate(exact, P, g.t0, g.t1, w.x, g.nx, g.cfl, Boundary::dirichlet(exact)), out);
    }
    return order_check(r);
  });
  if (P.H > 0) {
    add("simulate/half_order_order", "finite-volume cross-check against the non-Lie solution",
        [&] {
          const Rect w{{0.30, 0.34}, {-0.1, 0.1}};
          const InvertedField inv =
              field_from_pair(find_entry(entries_, "half_order").make_pair(), w, 21, 21);
          return order_check(convergence_order(inv.field, P, w, res, g.cfl));
        });
  }
  add("simulate/constant_degenerate", "finite-volume cross-check against a constant state", [&] {
    const Rect w{{g.t0, g.t1}, {g.x0, g.x1}};
    const ConvergenceResult r = convergence_order(constant_solution(0.5, 1.5, w), P, w, res, g.cfl);
    double worst = 0;
    for (const auto& e : r.errors) worst = std::max({worst, e.u, e.h});
    Check out = below(worst, 1e-12, r.notice);
    if (!r.degenerate) out.status = CheckStatus::Fail;
    return out;
  });
  add("simulate/mass_conservation", "conservation form of the height equation", [&] {
    const SolutionField init(
        "periodic", Rect{{0, 1}, {0, 1}},
        [](double, double x) {
          return State{0.2 * std::sin(2 * M_PI * x), 1.0 + 0.1 * std::cos(2 * M_PI * x)};
        });
    GridState gs = make_grid(init, 0.0, {0.0, 1.0}, g.nx);
    double worst = 0;
    for (int k = 0; k < 200; ++k) {
      const double m0 = total_mass(gs);
      gs = step(gs, P, g.cfl, Boundary::periodic());
      worst = std::max(worst, std::abs(total_mass(gs) - m0));
    }
    return below(worst, 1e-12, "max change per step over 200 periodic steps");
  });
}

void Runner::audit() {
  FluidParams swe = c_.params;
  swe.H = 0;
  const std::uint64_t s1 = next_seed();
  add("audit/projective_generator", "extra shallow-water generator C", [&, s1] {
    const double d = max_defect(generators::swe_projective(swe.gravity), swe, 200, s1);
    return flag(d, c_.tolerances.defect, "defect at H = 0 with g read as gravity");
  });
  FluidParams unit = c_.params;
  unit.gravity = 1.0;
  if (unit.H <= 0) unit.H = 1.0;
  add("audit/half_order_stated_g", "linearized system for (f, g)", [&] {
    const auto entries = catalog(unit);
    const CatalogEntry& e = find_entry(entries, "half_order_stated_g");
    return flag(e.audit_residual, 1e-7, "stated g measured at gravity 1, H = " + std::to_string(unit.H));
  });
  const std::uint64_t s2 = next_seed();
  add("audit/delta_redundancy", "optimal list for the finite-dimensional subalgebra", [&, s2] {
    const OrbitSearchResult r = orbit_equivalent_g1({{0, 0, 1, 1}}, {{0, 0, 0, 1}}, 20, s2);
    return flag(r.residual, 1e-8,
                r.equivalent ? "delta in <dt + delta dx> is removable by the boost"
                             : "no witness found for removing delta");
  });
  add("audit/bessel_order", "order of the separable Bessel family", [&] {
    FluidParams p = c_.params;
    if (p.H <= 0) p.H = 1.0;
    const double c = std::min(0.125, 0.2 / p.gravity);
    const double b = bessel_order(c, p);
    const double k = std::sqrt(c / p.H);
    // Same separable form with half the order, differentiated numerically.
    auto halved = [&](double u, double h) {
      const double z = 2.0 * std::sqrt(p.gravity * c * h / p.H);
      return std::sin(k * u) * special::bessel_j(0.5 * b, z) / std::sqrt(h);
    };
    const FFunction f = bessel_f(c, {1.0, 0.0, 1.0, 0.0}, p);
    double stated = 0, alternative = 0;
    for (double u : {-0.7, 0.1, 0.9}) {
      for (double h : {0.6, 1.2, 1.9}) {
        stated = std::max(stated, std::abs(single_f_residual(f(u, h), u, h, p)));
        FDerivatives d;
        d.f = halved(u, h);
        d.f_h = fd::derivative([&](double q) { return halved(u, q); }, h, 1e-3);
        d.f_hh = fd::derivative(
            [&](double q) { return fd::derivative([&](double r) { return halved(u, r); }, q, 1e-3); },
            h, 1e-3);
        d.f_u = fd::derivative([&](double q) { return halved(q, h); }, u, 1e-3);
        d.f_uu = -k * k * d.f;
        alternative = std::max(alternative, std::abs(single_f_residual(d, u, h, p)));
      }
    }
    std::ostringstream note;
    note << "order sqrt(1 - 4Gc) residual " << stated << "; half that order residual "
         << alternative;
    return flag(stated, 1e-7, note.str());
  });
  const std::uint64_t s3 = next_seed();
  add("audit/general_ia_sign", "general ansatz for <a1 D + a2 G + a3 dx + a4 dt>", [&, s3] {
    const FluidParams& P = c_.params;
    const ReduceSpec& R = c_.reduce;
    const Trajectory traj = integrate_case_i(R.a, P, R.p0, R.state0, R.p_end);
    const Interval pr = traj.p_range();
    const Rect d{{1.0, 1.2}, {pr.lo - R.a, 1.2 * (pr.hi - R.a)}};
    VerifyOptions vo;
    vo.seed = s3;
    vo.use_analytic = false;
    const double rp =
        verify_field(lift_general_ia(1, R.a, 0, 0, traj, LogSign::AsStated, d).field, P, vo).max_abs();
    const double rc =
        verify_field(lift_general_ia(1, R.a, 0, 0, traj, LogSign::Corrected, d).field, P, vo).max_abs();
    std::ostringstream note;
    note << "residual with stated sign " << rp << ", with + sign " << rc;
    return flag(rp, c_.tolerances.residual, note.str());
  });
}

json double_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

Report run(const Campaign& campaign) {
  campaign.params.validate();
  Runner r(campaign);
  switch (campaign.command) {
    case Command::VerifySymmetries: r.verify_symmetries(); break;
    case Command::Classify: r.classify(); break;
    case Command::Reduce: r.reduce(); break;
    case Command::Invert: r.invert(); break;
    case Command::Simulate: r.simulate(); break;
    case Command::Audit: r.audit(); break;
  }
  return r.finish();
}

std::string format_report(const Report& report, ReportFormat format) {
  if (format == ReportFormat::CsvSummary) {
    std::ostringstream out;
    out << "name,anchor,value,tol,status\n";
    out.precision(17);
    for (const Check& c : report.checks) {
      out << c.name << ",\"" << c.anchor << "\",";
      if (std::isfinite(c.value)) out << json(c.value).dump();
      out << ',' << json(c.tol).dump() << ',' << status_name(c.status) << '\n';
    }
    return out.str();
  }
  json checks = json::array();
  for (const Check& c : report.checks) {
    json item{{"name", c.name},
              {"anchor", c.anchor},
              {"value", double_or_null(c.value)},
              {"tol", double_or_null(c.tol)},
              {"status", status_name(c.status)}};
    if (!c.note.empty()) item["note"] = c.note;
    checks.push_back(std::move(item));
  }
  json doc{{"summary",
            {{"pass", report.count(CheckStatus::Pass)},
             {"flag", report.count(CheckStatus::Flag)},
             {"fail", report.count(CheckStatus::Fail)}}},
           {"checks", checks},
           {"repro",
            {{"seed", report.seed},
             {"command", command_name(report.command)},
             {"params", {{"H", report.params.H}, {"gravity", report.params.gravity}}},
             {"version", kVersion}}}};
  return doc.dump(2) + "\n";
}

std::string emit_report(const Report& report, ReportFormat format, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const std::string name = format == ReportFormat::Json ? "report.json" : "report.csv";
  const std::string path = (std::filesystem::path(dir) / name).string();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write report to '" + path + "'");
  out << format_report(report, format);
  if (!out) throw ConfigError("failed writing report to '" + path + "'");
  return path;
}

}  // namespace symflow
