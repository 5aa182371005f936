#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "fbs/advection.hpp"
#include "fbs/calculus.hpp"
#include "fbs/cli.hpp"
#include "fbs/corpus.hpp"
#include "fbs/errors.hpp"
#include "fbs/norms.hpp"
#include "fbs/projection.hpp"
#include "fbs/random_field.hpp"
#include "fbs/reports.hpp"
#include "fbs/semigroup.hpp"
#include "fbs/snapshot.hpp"
#include "fbs/solver.hpp"
#include "fbs/version.hpp"

namespace py = pybind11;
using namespace fbs;

namespace {

py::object json_to_py(const Json& j) {
  switch (j.type()) {
    case Json::value_t::object: {
      py::dict d;
      for (auto it = j.begin(); it != j.end(); ++it)
        d[py::str(it.key())] = json_to_py(it.value());
      return d;
    }
    case Json::value_t::array: {
      py::list l;
      for (const auto& e : j) l.append(json_to_py(e));
      return l;
    }
    case Json::value_t::string: return py::str(j.get<std::string>());
    case Json::value_t::boolean: return py::bool_(j.get<bool>());
    case Json::value_t::number_integer: return py::int_(j.get<std::int64_t>());
    case Json::value_t::number_unsigned: return py::int_(j.get<std::uint64_t>());
    case Json::value_t::number_float: return py::float_(j.get<double>());
    default: return py::none();
  }
}

py::array_t<Complex> coeffs_array(const ScalarField& f) {
  const auto& g = *f.grid;
  std::vector<py::ssize_t> shape(static_cast<std::size_t>(g.dim()),
                                 g.modes_per_dim());
  py::array_t<Complex> out(shape);
  std::copy(f.coeffs.begin(), f.coeffs.end(), out.mutable_data());
  return out;
}

void set_coeffs(ScalarField& f, py::array_t<Complex, py::array::c_style |
                                                         py::array::forcecast>
                                    arr) {
  if (static_cast<std::size_t>(arr.size()) != f.coeffs.size())
    throw PreconditionError("coefficient array size does not match the grid");
  std::copy(arr.data(), arr.data() + arr.size(), f.coeffs.begin());
}

SpectrumSpec spec_from_kwargs(double q_min, double q_max,
                              const std::string& profile, double center,
                              double width, const std::string& norm_kind,
                              double norm_index, double target_value) {
  NormSpec target = norm_kind == "hdot" ? NormSpec::hdot(norm_index)
                                        : NormSpec::lebesgue(norm_index);
  if (profile == "flat")
    return SpectrumSpec::flat(q_min, q_max, target, target_value);
  if (profile == "gaussian")
    return SpectrumSpec::gaussian(q_min, q_max, center, width, target,
                                  target_value);
  throw PreconditionError("profile must be 'flat' or 'gaussian'");
}

SolverConfig config_from_dict(const py::dict& d) {
  Json j;
  j["n"] = d["n"].cast<int>();
  j["alpha"] = d["alpha"].cast<double>();
  j["T"] = d["T"].cast<double>();
  j["N"] = d["N"].cast<int>();
  j["L"] = d["L"].cast<double>();
  j["M"] = d["M"].cast<int>();
  j["picard_tol"] = d["picard_tol"].cast<double>();
  j["picard_max_iters"] = d["picard_max_iters"].cast<int>();
  j["mode"] = d["mode"].cast<std::string>();
  return solver_config_from_json(j);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Pseudo-spectral solver and numerical audit harness for the "
      "fractional Boussinesq system";
  m.attr("__version__") = kVersion;

  py::register_exception<PreconditionError>(m, "PreconditionError",
                                            PyExc_ValueError);
  py::register_exception<BlowUpError>(m, "BlowUpError", PyExc_RuntimeError);

  py::class_<SpectralGrid, std::shared_ptr<SpectralGrid>>(m, "SpectralGrid")
      .def_property_readonly("n", &SpectralGrid::dim)
      .def_property_readonly("N", &SpectralGrid::modes_per_dim)
      .def_property_readonly("L", &SpectralGrid::box_length)
      .def_property_readonly("size", &SpectralGrid::size)
      .def_property_readonly("dealias_limit", &SpectralGrid::dealias_limit)
      .def("__repr__", [](const SpectralGrid& g) {
        return "SpectralGrid(n=" + std::to_string(g.dim()) +
               ", N=" + std::to_string(g.modes_per_dim()) +
               ", L=" + std::to_string(g.box_length()) + ")";
      });

  m.def(
      "make_grid",
      [](int n, int N, double L) {
        return std::const_pointer_cast<SpectralGrid>(make_grid(n, N, L));
      },
      py::arg("n"), py::arg("N"), py::arg("L"),
      "Periodic box discretization with N modes per dimension");

  py::class_<ScalarField>(m, "ScalarField")
      .def(py::init([](GridPtr grid, bool real_valued) {
             return ScalarField(std::move(grid), real_valued);
           }),
           py::arg("grid"), py::arg("real_valued") = true)
      .def_property_readonly(
          "grid",
          [](const ScalarField& f) {
            return std::const_pointer_cast<SpectralGrid>(f.grid);
          })
      .def_readwrite("real_valued", &ScalarField::real_valued)
      .def_property("coeffs", &coeffs_array, &set_coeffs,
                    "Fourier coefficients, shape (N,)*n, FFT mode ordering")
      .def("hermitian_defect", &ScalarField::hermitian_defect)
      .def("__add__", [](const ScalarField& a, const ScalarField& b) { return a + b; })
      .def("__sub__", [](const ScalarField& a, const ScalarField& b) { return a - b; })
      .def("__rmul__", [](const ScalarField& a, double c) { return c * a; });

  py::class_<VectorField>(m, "VectorField")
      .def(py::init([](GridPtr grid, bool real_valued) {
             return VectorField(std::move(grid), real_valued);
           }),
           py::arg("grid"), py::arg("real_valued") = true)
      .def_property_readonly(
          "grid",
          [](const VectorField& u) {
            return std::const_pointer_cast<SpectralGrid>(u.grid());
          })
      .def_readwrite("solenoidal", &VectorField::solenoidal)
      .def("component",
           [](VectorField& u, int d) -> ScalarField& {
             if (d < 0 || d >= u.dim())
               throw PreconditionError("component index out of range");
             return u.comp[static_cast<std::size_t>(d)];
           },
           py::return_value_policy::reference_internal)
      .def("divergence_ratio", &VectorField::divergence_ratio)
      .def("__add__", [](const VectorField& a, const VectorField& b) { return a + b; })
      .def("__sub__", [](const VectorField& a, const VectorField& b) { return a - b; })
      .def("__rmul__", [](const VectorField& a, double c) { return c * a; });

  m.def("random_field", &spec_from_kwargs, py::arg("q_min"), py::arg("q_max"),
        py::arg("profile"), py::arg("center"), py::arg("width"),
        py::arg("norm_kind"), py::arg("norm_index"), py::arg("target_value"));

  m.def(
      "random_field",
      [](GridPtr grid, double q_min, double q_max, const std::string& profile,
         double center, double width, const std::string& norm_kind,
         double norm_index, double target_value, std::uint64_t seed) {
        return random_field(std::move(grid),
                            spec_from_kwargs(q_min, q_max, profile, center,
                                             width, norm_kind, norm_index,
                                             target_value),
                            seed);
      },
      py::arg("grid"), py::arg("q_min"), py::arg("q_max"),
      py::arg("profile") = "gaussian", py::arg("center") = 2.0,
      py::arg("width") = 1.0, py::arg("norm_kind") = "hdot",
      py::arg("norm_index") = 0.0, py::arg("target_value") = 1.0,
      py::arg("seed") = 1);

  m.def(
      "random_solenoidal",
      [](GridPtr grid, double q_min, double q_max, const std::string& profile,
         double center, double width, const std::string& norm_kind,
         double norm_index, double target_value, std::uint64_t seed) {
        return random_solenoidal(std::move(grid),
                                 spec_from_kwargs(q_min, q_max, profile,
                                                  center, width, norm_kind,
                                                  norm_index, target_value),
                                 seed);
      },
      py::arg("grid"), py::arg("q_min"), py::arg("q_max"),
      py::arg("profile") = "gaussian", py::arg("center") = 2.0,
      py::arg("width") = 1.0, py::arg("norm_kind") = "hdot",
      py::arg("norm_index") = 0.0, py::arg("target_value") = 1.0,
      py::arg("seed") = 1);

  m.def("lambda_power",
        py::overload_cast<const ScalarField&, double>(&lambda_power),
        py::arg("f"), py::arg("s"));
  m.def("hdot_norm", py::overload_cast<const ScalarField&, double>(&hdot_norm),
        py::arg("f"), py::arg("s"));
  m.def("hdot_norm", py::overload_cast<const VectorField&, double>(&hdot_norm),
        py::arg("u"), py::arg("s"));
  m.def("lp_norm", &lp_norm, py::arg("f"), py::arg("p"));
  m.def("leray_project", &leray_project, py::arg("u"));
  m.def("gradient_part", &gradient_part, py::arg("u"));
  m.def("advect", &advect, py::arg("u"), py::arg("f"));
  m.def("advect_vec", &advect_vec, py::arg("u"), py::arg("v"));
  m.def("commutator", &commutator, py::arg("f"), py::arg("g"), py::arg("s"));
  m.def("check_interpolation", &check_interpolation, py::arg("f"),
        py::arg("s_lo"), py::arg("s_hi"), py::arg("s_mid"));
  m.def("embedding_exponent", &embedding_exponent, py::arg("n"), py::arg("s"));

  m.def("heat_flow",
        py::overload_cast<const ScalarField&, double, double>(&heat_flow),
        py::arg("f"), py::arg("t"), py::arg("alpha"));
  m.def("imaginary_power", &imaginary_power, py::arg("f"), py::arg("y"),
        py::arg("alpha"));
  m.def("smoothing_ratio", &smoothing_ratio, py::arg("f"), py::arg("t"),
        py::arg("alpha"), py::arg("gamma"), py::arg("s"));
  m.def("smoothing_bound", &smoothing_bound, py::arg("alpha"),
        py::arg("gamma"));
  m.def("char_integral", &char_integral, py::arg("a"), py::arg("alpha"),
        py::arg("s"));
  m.def(
      "free_solution_total",
      [](const ScalarField& a, double alpha, double s) {
        return free_solution_functional(a, alpha, s).total;
      },
      py::arg("a"), py::arg("alpha"), py::arg("s"));

  m.def("write_snapshot",
        py::overload_cast<const std::filesystem::path&, const ScalarField&>(
            &write_snapshot));
  m.def("write_snapshot",
        py::overload_cast<const std::filesystem::path&, const VectorField&>(
            &write_snapshot));
  m.def("read_scalar_snapshot", &read_scalar_snapshot, py::arg("path"));
  m.def("read_vector_snapshot", &read_vector_snapshot, py::arg("path"));

  m.def(
      "estimate_constants",
      [](const py::dict& cfg_dict, std::vector<std::uint64_t> seeds, int M) {
        SolverConfig cfg = config_from_dict(cfg_dict);
        ConstantsCorpusSpec corpus{std::move(seeds), M};
        MapConstants k = estimate_constants(cfg, corpus);
        return json_to_py(to_json(k));
      },
      py::arg("config"), py::arg("seeds"), py::arg("M") = 16);

  m.def(
      "picard_solve",
      [](const VectorField& u0, const ScalarField& theta0,
         const py::dict& cfg_dict, double k1, double k2, double k3) {
        SolverConfig cfg = config_from_dict(cfg_dict);
        auto [state, report] = picard_solve(u0, theta0, cfg, {k1, k2, k3});
        py::dict out;
        out["report"] = json_to_py(to_json(report));
        py::list u_nodes, theta_nodes, times;
        for (std::size_t mm = 0; mm < state.theta.states.size(); ++mm) {
          times.append(state.theta.time_at(static_cast<int>(mm)));
          u_nodes.append(hdot_norm(state.u.states[mm], cfg.s0()));
          theta_nodes.append(
              hdot_norm(state.theta.states[mm], cfg.theta_data_index()));
        }
        out["t"] = times;
        out["u_norm_series"] = u_nodes;
        out["theta_norm_series"] = theta_nodes;
        return out;
      },
      py::arg("u0"), py::arg("theta0"), py::arg("config"), py::arg("k1"),
      py::arg("k2"), py::arg("k3"));

  m.def("committed_seeds", &committed_seeds, py::arg("count") = 100);
}
