#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <random>

#include "symflow/algebra.hpp"
#include "symflow/campaign.hpp"
#include "symflow/errors.hpp"
#include "symflow/fvsolver.hpp"
#include "symflow/hodograph.hpp"
#include "symflow/model.hpp"
#include "symflow/reduce.hpp"
#include "symflow/solutions.hpp"
#include "symflow/vfield.hpp"

namespace py = pybind11;
using namespace symflow;

namespace {

VectorFieldSpec generator_by_name(const std::string& name, const FluidParams& p) {
  if (name == "D") return generators::dilation();
  if (name == "G") return generators::galilean_boost();
  if (name == "dt") return generators::time_translation();
  if (name == "dx") return generators::space_translation();
  if (name == "D2") return generators::swe_height_scaling();
  if (name == "C") return generators::swe_projective(p.gravity);
  const auto entries = catalog(p);
  const CatalogEntry& e = find_entry(entries, name);
  if (!e.make_pair) throw ConfigError("catalog entry '" + name + "' has no hodograph pair");
  return generators::linearizing(e.make_pair());
}

const char* tag_name(ClassTag t) {
  switch (t) {
    case ClassTag::DPlusAG: return "D+aG";
    case ClassTag::GOnly: return "G";
    case ClassTag::LClass: return "L";
    case ClassTag::GPlusDeltaDt: return "G+delta*dt";
    case ClassTag::DtPlusDeltaDx: return "dt+delta*dx";
    case ClassTag::DxOnly: return "dx";
  }
  return "?";
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Symmetry, reduction and hodograph tools for the modified shallow-water system";
  m.attr("__version__") = kVersion;

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

  py::class_<FluidParams>(m, "FluidParams")
      .def(py::init([](double H, double gravity) { return FluidParams{H, gravity}; }),
           py::arg("H") = 1.0, py::arg("gravity") = 1.0)
      .def_readwrite("H", &FluidParams::H)
      .def_readwrite("gravity", &FluidParams::gravity)
      .def("__repr__", [](const FluidParams& p) {
        return "FluidParams(H=" + std::to_string(p.H) + ", gravity=" + std::to_string(p.gravity) + ")";
      });

  m.def(
      "catalog_ids",
      [](const FluidParams& p) {
        std::vector<std::string> ids;
        for (const auto& e : catalog(p)) ids.push_back(e.id);
        return ids;
      },
      py::arg("params") = FluidParams{});

  m.def(
      "entry_residual",
      [](const std::string& id, const FluidParams& p, int samples, std::uint64_t seed) {
        const auto entries = catalog(p);
        return entry_residual(find_entry(entries, id), p, samples, seed);
      },
      py::arg("id"), py::arg("params") = FluidParams{}, py::arg("samples") = 100,
      py::arg("seed") = 0);

  m.def(
      "max_invariance_defect",
      [](const std::string& generator, const FluidParams& p, int jets, std::uint64_t seed) {
        const VectorFieldSpec v = generator_by_name(generator, p);
        std::mt19937_64 rng(seed);
        double worst = 0;
        for (int k = 0; k < jets; ++k) {
          worst = std::max(worst, invariance_defect(v, sample_manifold_jet(rng, p), p).max_abs());
        }
        return worst;
      },
      py::arg("generator"), py::arg("params") = FluidParams{}, py::arg("jets") = 200,
      py::arg("seed") = 0,
      "Largest invariance defect of a generator ('D', 'G', 'dt', 'dx', 'D2', 'C' or a catalog "
      "pair id) over seeded on-manifold jets.");

  m.def(
      "invert",
      [](const std::string& id, double t, double x, std::pair<double, double> guess,
         const FluidParams& p) {
        const auto entries = catalog(p);
        const CatalogEntry& e = find_entry(entries, id);
        if (!e.make_pair) throw ConfigError("catalog entry '" + id + "' has no hodograph pair");
        const State s = invert_point(e.make_pair(), t, x, {guess.first, guess.second});
        return std::make_pair(s.u, s.h);
      },
      py::arg("id"), py::arg("t"), py::arg("x"), py::arg("guess"),
      py::arg("params") = FluidParams{}, "Solve f(u, h) = t, g(u, h) = x for a catalog pair.");

  m.def(
      "integrate_case_i",
      [](double a, const FluidParams& p, double p0, std::pair<double, double> state0, double p_end) {
        const Trajectory tr = integrate_case_i(a, p, p0, {state0.first, state0.second}, p_end);
        py::list nodes;
        for (const auto& s : tr.nodes()) nodes.append(py::make_tuple(s.p, s.u, s.h));
        py::dict out;
        out["status"] = tr.status_name();
        out["nodes"] = nodes;
        return out;
      },
      py::arg("a"), py::arg("params"), py::arg("p0"), py::arg("state0"), py::arg("p_end"));

  m.def(
      "normalize_g1",
      [](std::array<double, 4> a) {
        const CanonicalClass c = normalize_g1(G1Element{a});
        py::dict out;
        out["tag"] = tag_name(c.tag);
        out["a"] = c.a;
        out["delta"] = c.delta;
        return out;
      },
      py::arg("coefficients"),
      "Canonical class of a1 D + a2 G + a3 dx + a4 dt.");

  m.def(
      "orbit_equivalent_g1",
      [](std::array<double, 4> v, std::array<double, 4> w, int trials, std::uint64_t seed) {
        const OrbitSearchResult r = orbit_equivalent_g1({v}, {w}, trials, seed);
        py::dict out;
        out["equivalent"] = r.equivalent;
        out["flows"] = r.flows;
        out["scale"] = r.scale;
        out["discrete"] = r.discrete;
        out["residual"] = r.residual;
        return out;
      },
      py::arg("v"), py::arg("w"), py::arg("trials") = 20, py::arg("seed") = 0);

  m.def(
      "galilean_convergence_order",
      [](const std::vector<int>& resolutions, const FluidParams& p) {
        const Rect w{{1, 2}, {0, 1}};
        const ConvergenceResult r = convergence_order(galilean_solution(0.25, 1.0, w), p, w, resolutions);
        return std::make_pair(r.order_u, r.order_h);
      },
      py::arg("resolutions") = std::vector<int>{50, 100, 200}, py::arg("params") = FluidParams{});

  m.def(
      "run_campaign",
      [](const std::string& config_json, const std::string& format) {
        const Report r = run(parse_config(config_json));
        return format_report(r, format == "csv" ? ReportFormat::CsvSummary : ReportFormat::Json);
      },
      py::arg("config_json"), py::arg("format") = "json",
      "Run a campaign from a JSON configuration and return the serialized report.");
}
