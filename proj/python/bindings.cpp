#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pdrelax/convex_oracle.hpp"
#include "pdrelax/energy_core.hpp"
#include "pdrelax/errors.hpp"
#include "pdrelax/fem1d.hpp"
#include "pdrelax/fem2d.hpp"
#include "pdrelax/model3d.hpp"
#include "pdrelax/provenance.hpp"

namespace py = pybind11;
using namespace pdrelax;

namespace {

SymTensor tensor(const std::vector<double>& v, const char* what) {
  if (v.size() != 6) throw ConfigError(std::string(what) + " needs six components xx, yy, zz, yz, xz, xy");
  SymTensor t;
  for (int i = 0; i < 6; ++i) t[i] = v[i];
  return t;
}

Corner corner(const std::string& s) {
  if (s == "apex") return Corner::Apex;
  if (s == "min") return Corner::AtMin;
  if (s == "max") return Corner::AtMax;
  throw ConfigError("corner must be 'apex', 'min' or 'max'");
}

EnergyKind kind(const std::string& s) {
  if (s == "condensed") return EnergyKind::Condensed;
  if (s == "relaxed") return EnergyKind::Relaxed;
  throw ConfigError("energy must be 'condensed' or 'relaxed'");
}

Experiment1D bar(int n, double L, double u_ext, double v_ext, double b, double alpha, std::uint64_t seed,
                 const std::string& energy) {
  Experiment1D e;
  e.n = n;
  e.L = L;
  e.u_ext = u_ext;
  e.v_ext = v_ext;
  e.b = b;
  e.alpha = alpha;
  e.seed = seed;
  e.kind = kind(energy);
  e.validate();
  return e;
}

py::dict minimize_bar(int n, double L, double u_ext, double v_ext, double b, double alpha, std::uint64_t seed,
                      const std::string& energy) {
  Experiment1D e = bar(n, L, u_ext, v_ext, b, alpha, seed, energy);
  MeshSolution s;
  {
    py::gil_scoped_release nogil;
    s = minimize(e);
  }
  py::array_t<double> grads({static_cast<py::ssize_t>(s.grads.size()), py::ssize_t{2}});
  auto g = grads.mutable_unchecked<2>();
  std::vector<std::string> regions;
  for (size_t i = 0; i < s.grads.size(); ++i) {
    g(i, 0) = s.grads[i][0];
    g(i, 1) = s.grads[i][1];
    regions.push_back(to_string(s.regions[i].tag));
  }
  py::dict out;
  out["energy"] = s.energy;
  out["grads"] = grads;
  out["regions"] = regions;
  out["u"] = py::array_t<double>(s.nodes.u.size(), s.nodes.u.data());
  out["v"] = py::array_t<double>(s.nodes.v.size(), s.nodes.v.data());
  out["iterations"] = s.iterations;
  out["stationarity"] = s.stationarity;
  out["relaxed_target"] = e.L * relaxed_energy(e.envelope(), {e.y_ext()[0], e.y_ext()[1]});
  return out;
}

py::dict mesh_dict(const PlaneStrainMesh& m) {
  py::array_t<double> nodes({static_cast<py::ssize_t>(m.nodes.size()), py::ssize_t{2}});
  py::array_t<int> quads({static_cast<py::ssize_t>(m.quads.size()), py::ssize_t{4}});
  auto n = nodes.mutable_unchecked<2>();
  auto q = quads.mutable_unchecked<2>();
  for (size_t i = 0; i < m.nodes.size(); ++i) n(i, 0) = m.nodes[i][0], n(i, 1) = m.nodes[i][1];
  for (size_t i = 0; i < m.quads.size(); ++i)
    for (int k = 0; k < 4; ++k) q(i, k) = m.quads[i][k];
  py::dict out;
  out["nodes"] = nodes;
  out["quads"] = quads;
  out["fixed"] = m.fixed;
  out["loaded"] = m.loaded;
  return out;
}

py::dict solve_plate(int level, int steps, double u_final, const std::string& energy, double K, double mu,
                     double b, double hole_radius) {
  EnvelopeParams p(b, -0.058, 0.00107);
  auto rm = RelaxedMaterial::from_envelope(K, mu, p);
  PlateMaterial mat{rm, PlateEnergy::Relaxed, std::nullopt};
  if (kind(energy) == EnergyKind::Condensed) mat = PlateMaterial::condensed(rm, QuadraticYieldFit{}.function());
  LoadProgram lp;
  lp.n_steps = steps;
  lp.u_final = u_final;
  lp.validate();
  PlaneStrainMesh mesh = plate_with_hole(level, hole_radius);
  ProgramResult r;
  {
    py::gil_scoped_release nogil;
    r = solve_program(mesh, mat, lp);
  }
  const auto nm = static_cast<py::ssize_t>(lp.monitors.size());
  py::array_t<double> load(static_cast<py::ssize_t>(r.steps.size()));
  py::array_t<double> stress({static_cast<py::ssize_t>(r.steps.size()), nm, py::ssize_t{3}});
  auto l = load.mutable_unchecked<1>();
  auto s = stress.mutable_unchecked<3>();
  std::vector<std::vector<std::string>> regions;
  std::vector<int> newton;
  for (size_t k = 0; k < r.steps.size(); ++k) {
    const auto& st = r.steps[k];
    l(k) = st.load_factor;
    newton.push_back(st.newton_iterations);
    regions.emplace_back();
    for (py::ssize_t m = 0; m < nm; ++m) {
      s(k, m, 0) = st.monitors[m].sxx;
      s(k, m, 1) = st.monitors[m].syy;
      s(k, m, 2) = st.monitors[m].sxy;
      regions.back().push_back(to_string(st.monitors[m].region));
    }
  }
  py::dict out;
  out["load_factor"] = load;
  out["monitor_stress"] = stress;
  out["monitor_region"] = regions;
  out["newton_iterations"] = newton;
  out["elements"] = mesh.quads.size();
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "C++ core: energies, convex hull oracle, bar and plate solvers";
  m.attr("__version__") = version();

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NoConvergence>(m, "NoConvergence", base.ptr());
  py::register_exception<NondifferentiablePoint>(m, "NondifferentiablePoint", base.ptr());
  py::register_exception<UnsupportedState>(m, "UnsupportedState", base.ptr());

  py::class_<EnvelopeParams>(m, "EnvelopeParams")
      .def(py::init<double, double, double>(), py::arg("b"), py::arg("y_min"), py::arg("y_max"))
      .def_readonly("b", &EnvelopeParams::b)
      .def_readonly("y_min", &EnvelopeParams::y_min)
      .def_readonly("y_max", &EnvelopeParams::y_max)
      .def_property_readonly("y_mid", &EnvelopeParams::y_mid)
      .def_property_readonly("s_star", &EnvelopeParams::s_star)
      .def_property_readonly("y2_star", &EnvelopeParams::y2_star)
      .def_property_readonly("apex_height", &EnvelopeParams::apex_height);

  py::class_<DissipationFunction>(m, "DissipationFunction")
      .def_static("reference", &DissipationFunction::reference, py::arg("params"))
      .def_static("quadratic", &DissipationFunction::quadratic, py::arg("lo"), py::arg("hi"), py::arg("apex"),
                  py::arg("peak"))
      .def_static("triangle", &DissipationFunction::triangle, py::arg("lo"), py::arg("hi"), py::arg("peak"))
      .def_static("constant_cap", &DissipationFunction::constant_cap, py::arg("lo"), py::arg("hi"), py::arg("level"))
      .def("__call__", py::vectorize([](const DissipationFunction* f, double x) { return (*f)(x); }))
      .def_property_readonly("lo", &DissipationFunction::lo)
      .def_property_readonly("hi", &DissipationFunction::hi)
      .def_property_readonly("tag", &DissipationFunction::tag)
      .def("concave_on_support", &DissipationFunction::concave_on_support, py::arg("samples") = 4096,
           py::arg("tol") = 1e-10);

  m.def("condensed_energy",
        py::vectorize([](const EnvelopeParams* p, const DissipationFunction* r, double y1, double y2, double z_n) {
          return condensed_energy(*p, *r, {y1, y2, z_n});
        }),
        py::arg("params"), py::arg("r"), py::arg("y1"), py::arg("y2"), py::arg("z_n") = 0.0);
  m.def("relaxed_energy",
        py::vectorize([](const EnvelopeParams* p, double y1, double y2, double z_n) {
          return relaxed_energy(*p, {y1, y2, z_n});
        }),
        py::arg("params"), py::arg("y1"), py::arg("y2"), py::arg("z_n") = 0.0);
  m.def(
      "relaxed_gradient", [](const EnvelopeParams& p, double y1, double y2, double z_n) {
        Vec2 g = relaxed_gradient(p, {y1, y2, z_n});
        return py::make_tuple(g[0], g[1]);
      },
      py::arg("params"), py::arg("y1"), py::arg("y2"), py::arg("z_n") = 0.0);
  m.def(
      "classify", [](const EnvelopeParams& p, double y1, double y2) {
        Region r = classify(p, y1, y2);
        return py::make_tuple(to_string(r.tag), r.sign);
      },
      py::arg("params"), py::arg("y1"), py::arg("y2"));
  m.def("small_b_condition", &small_b_condition, py::arg("params"), py::arg("r"));
  m.def(
      "touching_point", [](const EnvelopeParams& p, const std::string& c, int sign) {
        Vec2 v = touching_point(p, corner(c), sign);
        return py::make_tuple(v[0], v[1]);
      },
      py::arg("params"), py::arg("corner"), py::arg("sign") = 1);

  m.def(
      "lower_convex_hull",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> values, std::array<double, 4> domain) {
        if (values.ndim() != 2) throw ConfigError("values must be a 2D array");
        const int n1 = static_cast<int>(values.shape(0)), n2 = static_cast<int>(values.shape(1));
        std::vector<double> v(values.data(), values.data() + values.size());
        GridFunction g({domain[0], domain[1], domain[2], domain[3]}, n1, n2, std::move(v));
        GridFunction h = [&] {
          py::gil_scoped_release nogil;
          return lower_convex_hull(g);
        }();
        py::array_t<double> out({n1, n2});
        std::copy(h.values().begin(), h.values().end(), out.mutable_data());
        return out;
      },
      py::arg("values"), py::arg("domain"),
      "Convex envelope of samples on a uniform grid; domain is (a1, b1, a2, b2), rows follow the first axis.");
  m.def("double_well_constant", &double_well_constant, py::arg("n") = 201);

  py::class_<RelaxedMaterial>(m, "RelaxedMaterial")
      .def(py::init<double, double, double, double, double>(), py::arg("K"), py::arg("mu"), py::arg("beta"),
           py::arg("tr_min"), py::arg("tr_max"))
      .def_static("from_envelope", &RelaxedMaterial::from_envelope, py::arg("K"), py::arg("mu"), py::arg("params"))
      .def_readonly("K", &RelaxedMaterial::K)
      .def_readonly("mu", &RelaxedMaterial::mu)
      .def_readonly("beta", &RelaxedMaterial::beta)
      .def_readonly("tr_min", &RelaxedMaterial::tr_min)
      .def_readonly("tr_max", &RelaxedMaterial::tr_max)
      .def("trace_scale", &RelaxedMaterial::trace_scale)
      .def("rho0", &RelaxedMaterial::rho0, py::arg("tr"));

  m.def(
      "relaxed_energy_3d",
      [](const RelaxedMaterial& rm, const std::vector<double>& eps, const std::vector<double>& eps_p) {
        RelaxedValue v = relaxed_energy_3d(rm, tensor(eps, "eps"), {tensor(eps_p, "eps_p"), 0.0});
        return py::make_tuple(v.energy, to_string(v.region.tag));
      },
      py::arg("material"), py::arg("eps"), py::arg("eps_p") = std::vector<double>(6, 0.0));
  m.def(
      "relaxed_stress_3d",
      [](const RelaxedMaterial& rm, const std::vector<double>& eps, const std::vector<double>& eps_p) {
        SymTensor s = relaxed_stress_3d(rm, tensor(eps, "eps"), {tensor(eps_p, "eps_p"), 0.0});
        return std::vector<double>(s.c.begin(), s.c.end());
      },
      py::arg("material"), py::arg("eps"), py::arg("eps_p") = std::vector<double>(6, 0.0));

  m.def("minimize_bar", &minimize_bar, py::arg("n") = 80, py::arg("L") = 1.0, py::arg("u_ext") = -0.0454,
        py::arg("v_ext") = 0.05, py::arg("b") = 0.095, py::arg("alpha") = 1.0, py::arg("seed") = 1,
        py::arg("energy") = "condensed");
  m.def(
      "regime_of",
      [](double v_ext, double u_ext, double b) {
        return to_string(regime_of(bar(80, 1.0, u_ext, v_ext, b, 1.0, 1, "relaxed")));
      },
      py::arg("v_ext"), py::arg("u_ext") = -0.0454, py::arg("b") = 0.095);

  m.def(
      "plate_with_hole", [](int level, double r) { return mesh_dict(plate_with_hole(level, r)); }, py::arg("level"),
      py::arg("hole_radius") = 0.2);
  m.def("solve_plate", &solve_plate, py::arg("level") = 0, py::arg("steps") = 100, py::arg("u_final") = -4e-4,
        py::arg("energy") = "relaxed", py::arg("K") = 3.9e9, py::arg("mu") = 2.8e9, py::arg("b") = 0.095,
        py::arg("hole_radius") = 0.2);
}
