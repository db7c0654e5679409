// Python bindings for the core operations. Fields cross the boundary as
// numpy arrays: scalar fields as (nx, ny), space-time fields as
// (nt, nx, ny), link fields as (2, nx, ny), all row-major to match the
// site = ix * ny + iy layout.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "liouwalk/acceptance.hpp"
#include "liouwalk/diffusion.hpp"
#include "liouwalk/gaussian.hpp"
#include "liouwalk/lattice.hpp"
#include "liouwalk/liouville_mc.hpp"
#include "liouwalk/walkers.hpp"

namespace py = pybind11;
using namespace liouwalk;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<double> flat(const Array& arr, size_t expected, const char* what) {
  if (static_cast<size_t>(arr.size()) != expected)
    throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(expected) +
                                " values, got " + std::to_string(arr.size()));
  const double* data = arr.data();
  return std::vector<double>(data, data + arr.size());
}

ScalarField to_scalar(const LatticeSpec& spec, const Array& arr) {
  return ScalarField(spec, flat(arr, static_cast<size_t>(spec.sites()), "scalar field"));
}

SpaceTimeField to_spacetime(const LatticeSpec& spec, const Array& arr) {
  return SpaceTimeField(spec,
                        flat(arr, static_cast<size_t>(spec.spacetime_points()), "space-time field"));
}

VectorField to_vector(const LatticeSpec& spec, const Array& arr) {
  return VectorField(spec, flat(arr, static_cast<size_t>(2 * spec.sites()), "link field"));
}

py::array_t<double> from_values(const std::vector<double>& values,
                                const std::vector<py::ssize_t>& shape) {
  py::array_t<double> arr(shape);
  std::copy(values.begin(), values.end(), arr.mutable_data());
  return arr;
}

py::array_t<double> from_scalar(const ScalarField& f) {
  return from_values(f.values, {f.spec.nx, f.spec.ny});
}

py::array_t<double> from_spacetime(const SpaceTimeField& f) {
  return from_values(f.values, {f.spec.nt, f.spec.nx, f.spec.ny});
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Lattice toolkit for gauge-coupled diffusion, its path-integral sampler, "
            "the Gaussian source-pair sector, and exponential-interaction Monte Carlo.";

  py::class_<LatticeSpec>(m, "LatticeSpec")
      .def(py::init<int, int, double, int, double>(), py::arg("nx"), py::arg("ny"),
           py::arg("a") = 1.0, py::arg("nt") = 0, py::arg("dt") = 1.0)
      .def_readonly("nx", &LatticeSpec::nx)
      .def_readonly("ny", &LatticeSpec::ny)
      .def_readonly("a", &LatticeSpec::a)
      .def_readonly("nt", &LatticeSpec::nt)
      .def_readonly("dt", &LatticeSpec::dt)
      .def("sites", &LatticeSpec::sites)
      .def("site", &LatticeSpec::site, py::arg("ix"), py::arg("iy"))
      .def("coords", &LatticeSpec::coords, py::arg("site"))
      .def("neighbor", &LatticeSpec::neighbor, py::arg("site"), py::arg("dir"), py::arg("step"))
      .def("min_image_dist2", &LatticeSpec::min_image_dist2, py::arg("s"), py::arg("s0"))
      .def("__eq__", [](const LatticeSpec& a, const LatticeSpec& b) { return a == b; })
      .def("__repr__", [](const LatticeSpec& s) {
        return "LatticeSpec(nx=" + std::to_string(s.nx) + ", ny=" + std::to_string(s.ny) +
               ", a=" + std::to_string(s.a) + ", nt=" + std::to_string(s.nt) +
               ", dt=" + std::to_string(s.dt) + ")";
      });

  py::class_<Couplings>(m, "Couplings")
      .def(py::init([](double g, double b, double tt, double mu, double alpha) {
             Couplings c{g, b, tt, mu, alpha};
             c.validate();
             return c;
           }),
           py::arg("g") = 1.0, py::arg("b") = 0.0, py::arg("tt") = 1.0, py::arg("mu") = 1.0,
           py::arg("alpha") = 1.0)
      .def_readwrite("g", &Couplings::g)
      .def_readwrite("b", &Couplings::b)
      .def_readwrite("tt", &Couplings::tt)
      .def_readwrite("mu", &Couplings::mu)
      .def_readwrite("alpha", &Couplings::alpha);

  // lattice calculus
  m.def("gradient",
        [](const LatticeSpec& spec, const Array& f) {
          const VectorField g = gradient(to_scalar(spec, f));
          return from_values(g.values, {2, spec.nx, spec.ny});
        },
        py::arg("spec"), py::arg("f"));
  m.def("divergence",
        [](const LatticeSpec& spec, const Array& v) {
          return from_scalar(divergence(to_vector(spec, v)));
        },
        py::arg("spec"), py::arg("v"));
  m.def("laplacian",
        [](const LatticeSpec& spec, const Array& f) {
          return from_scalar(laplacian(to_scalar(spec, f)));
        },
        py::arg("spec"), py::arg("f"));
  m.def("curl",
        [](const LatticeSpec& spec, const Array& v) {
          return from_scalar(curl(to_vector(spec, v)));
        },
        py::arg("spec"), py::arg("v"));

  // diffusion sector
  m.def("free_kernel_value", &free_kernel_value, py::arg("t"), py::arg("dx"), py::arg("dy"),
        py::arg("g"));
  m.def("free_kernel_exact", &free_kernel_exact, py::arg("spec"), py::arg("t"), py::arg("x"),
        py::arg("x0"), py::arg("g"));
  m.def("free_kernel_periodic", &free_kernel_periodic, py::arg("spec"), py::arg("t"),
        py::arg("x"), py::arg("x0"), py::arg("g"));
  m.def("delta_source",
        [](const LatticeSpec& spec, int x0, int t_slice) {
          return from_spacetime(delta_source(spec, x0, t_slice));
        },
        py::arg("spec"), py::arg("x0"), py::arg("t_slice") = 0);
  m.def("evolve",
        [](const LatticeSpec& spec, const Array& source, const Array& a_field,
           const Couplings& c) {
          return from_spacetime(evolve(to_spacetime(spec, source), to_vector(spec, a_field), c));
        },
        py::arg("spec"), py::arg("source"), py::arg("a_field"), py::arg("couplings"));
  m.def("evolve_similarity",
        [](const LatticeSpec& spec, const Array& source, const Array& gamma, const Couplings& c) {
          return from_spacetime(
              evolve_similarity(to_spacetime(spec, source), to_scalar(spec, gamma), c));
        },
        py::arg("spec"), py::arg("source"), py::arg("gamma"), py::arg("couplings"));
  m.def("gauge_transform",
        [](const LatticeSpec& spec, const Array& psi, const Array& gamma, double b, int x0) {
          return from_spacetime(
              gauge_transform(to_spacetime(spec, psi), to_scalar(spec, gamma), b, x0));
        },
        py::arg("spec"), py::arg("psi"), py::arg("gamma"), py::arg("b"), py::arg("x0"));
  m.def("dressed_kernel",
        [](const LatticeSpec& spec, double t, int x, int x0, const Array& phi,
           const Couplings& c) { return dressed_kernel(spec, t, x, x0, to_scalar(spec, phi), c); },
        py::arg("spec"), py::arg("t"), py::arg("x"), py::arg("x0"), py::arg("phi"),
        py::arg("couplings"));
  m.def("canonical_z",
        [](const LatticeSpec& spec, const Array& slice) {
          return canonical_z(to_scalar(spec, slice));
        },
        py::arg("spec"), py::arg("psi_slice"));

  // walker sector
  py::class_<EnsembleEstimate>(m, "EnsembleEstimate")
      .def_readonly("n_walkers", &EnsembleEstimate::n_walkers)
      .def_readonly("batches", &EnsembleEstimate::batches)
      .def_readonly("seed", &EnsembleEstimate::seed)
      .def_property_readonly("mean",
                             [](const EnsembleEstimate& e) {
                               return from_values(e.mean, {e.spec.nx, e.spec.ny});
                             })
      .def_property_readonly("std_error",
                             [](const EnsembleEstimate& e) {
                               return from_values(e.std_error, {e.spec.nx, e.spec.ny});
                             })
      .def_property_readonly("counts", [](const EnsembleEstimate& e) {
        py::array_t<long> arr({static_cast<py::ssize_t>(e.spec.nx),
                               static_cast<py::ssize_t>(e.spec.ny)});
        std::copy(e.counts.begin(), e.counts.end(), arr.mutable_data());
        return arr;
      });
  m.def("estimate_kernel",
        [](const LatticeSpec& spec, int r0, double t, const Array& a_field, const Couplings& c,
           long n_walkers, uint64_t seed, int batches) {
          return estimate_kernel(spec, r0, t, to_vector(spec, a_field), c, n_walkers, seed,
                                 batches);
        },
        py::arg("spec"), py::arg("r0"), py::arg("t"), py::arg("a_field"), py::arg("couplings"),
        py::arg("n_walkers"), py::arg("seed"), py::arg("batches") = 20);
  m.def("grand_canonical_partial_sums", &grand_canonical_partial_sums, py::arg("z"),
        py::arg("mu"), py::arg("n_max"));

  // Gaussian source-pair sector
  m.def("sector_log_z",
        [](const LatticeSpec& spec, const Array& phi, const Array& j1, const Array& j2,
           const Couplings& c) {
          const SourcePair sources{to_spacetime(spec, j1), to_spacetime(spec, j2)};
          return sector_log_z(to_scalar(spec, phi), sources, c, spec);
        },
        py::arg("spec"), py::arg("phi"), py::arg("j1"), py::arg("j2"), py::arg("couplings"));
  m.def("sector_log_z_bilinear",
        [](const LatticeSpec& spec, const Array& phi, const Array& j1, const Array& j2,
           const Couplings& c) {
          const SourcePair sources{to_spacetime(spec, j1), to_spacetime(spec, j2)};
          return sector_log_z_bilinear(to_scalar(spec, phi), sources, c, spec);
        },
        py::arg("spec"), py::arg("phi"), py::arg("j1"), py::arg("j2"), py::arg("couplings"));
  m.def("special_sources",
        [](const LatticeSpec& spec, const Couplings& c, int x0) {
          const SourcePair s = special_sources(spec, c, x0);
          return py::make_tuple(from_spacetime(s.j1), from_spacetime(s.j2));
        },
        py::arg("spec"), py::arg("couplings"), py::arg("x0"));
  m.def("det_ratio",
        [](const LatticeSpec& spec, const Array& phi, const Couplings& c) {
          return det_ratio(to_scalar(spec, phi), c, spec);
        },
        py::arg("spec"), py::arg("phi"), py::arg("couplings"));

  py::class_<MultiplierIdentity>(m, "MultiplierIdentity")
      .def_readonly("lhs", &MultiplierIdentity::lhs)
      .def_readonly("rhs", &MultiplierIdentity::rhs)
      .def_readonly("imag_part", &MultiplierIdentity::imag_part)
      .def_readonly("residual", &MultiplierIdentity::residual);
  m.def("curl_constraint_identity", &curl_constraint_identity, py::arg("f_value"),
        py::arg("alpha"));

  // exponential-interaction Monte Carlo
  py::enum_<ActionKind>(m, "ActionKind")
      .value("Liouville", ActionKind::Liouville)
      .value("MappedFiniteT", ActionKind::MappedFiniteT)
      .value("FreeGaussian", ActionKind::FreeGaussian);

  py::class_<ActionSpec>(m, "ActionSpec")
      .def(py::init([](ActionKind kind, const LatticeSpec& lattice, const Couplings& c, int x0) {
             ActionSpec as{kind, lattice, c, x0};
             as.validate();
             return as;
           }),
           py::arg("kind"), py::arg("lattice"), py::arg("couplings"), py::arg("x0") = 0)
      .def_readonly("kind", &ActionSpec::kind)
      .def_readonly("lattice", &ActionSpec::lattice)
      .def_readonly("couplings", &ActionSpec::couplings)
      .def_readonly("x0", &ActionSpec::x0);

  m.def("action_value",
        [](const ActionSpec& as, const Array& phi) {
          return action_value(to_scalar(as.lattice, phi), as);
        },
        py::arg("action"), py::arg("phi"));
  m.def("interaction_value",
        [](const ActionSpec& as, const Array& phi) {
          return interaction_value(to_scalar(as.lattice, phi), as);
        },
        py::arg("action"), py::arg("phi"));
  m.def("interaction_bound", &interaction_bound, py::arg("action"), py::arg("t_horizon"));
  m.def("interaction_scale", &interaction_scale, py::arg("action"));

  py::class_<McConfig>(m, "McConfig")
      .def(py::init<>())
      .def_readwrite("sweeps", &McConfig::sweeps)
      .def_readwrite("thermalization", &McConfig::thermalization)
      .def_readwrite("stride", &McConfig::stride)
      .def_readwrite("proposal_width", &McConfig::proposal_width)
      .def_readwrite("tune", &McConfig::tune)
      .def_readwrite("seed", &McConfig::seed)
      .def_readwrite("batches", &McConfig::batches)
      .def_readwrite("pairs", &McConfig::pairs);

  py::class_<ObservableSummary>(m, "ObservableSummary")
      .def_readonly("mean", &ObservableSummary::mean)
      .def_readonly("std_error", &ObservableSummary::std_error)
      .def_readonly("tau_int", &ObservableSummary::tau_int)
      .def("__repr__", [](const ObservableSummary& s) {
        return "ObservableSummary(mean=" + std::to_string(s.mean) +
               ", std_error=" + std::to_string(s.std_error) +
               ", tau_int=" + std::to_string(s.tau_int) + ")";
      });

  py::class_<McRun>(m, "McRun")
      .def_readonly("acceptance", &McRun::acceptance)
      .def_readonly("width_final", &McRun::width_final)
      .def_readonly("samples", &McRun::samples)
      .def_readonly("chains", &McRun::chains)
      .def_readonly("summaries", &McRun::summaries);

  m.def("metropolis_run", &metropolis_run, py::arg("action"), py::arg("config"));
  m.def("accept_probability", &accept_probability, py::arg("delta_action"));
  m.def("free_pinned_covariance",
        [](const LatticeSpec& spec, int x0) {
          return from_values(free_pinned_covariance(spec, x0), {spec.sites(), spec.sites()});
        },
        py::arg("spec"), py::arg("x0"));

  // acceptance battery
  py::class_<CheckResult>(m, "CheckResult")
      .def_readonly("id", &CheckResult::id)
      .def_readonly("name", &CheckResult::name)
      .def_readonly("passed", &CheckResult::passed)
      .def_readonly("detail", &CheckResult::detail)
      .def_readonly("metrics", &CheckResult::metrics)
      .def("__repr__", [](const CheckResult& c) {
        return std::string(c.passed ? "[PASS] " : "[FAIL] ") + std::to_string(c.id) + " " + c.name;
      });
  m.def("run_acceptance", &run_acceptance, py::arg("only") = 0,
        "Run the acceptance battery; returns one CheckResult per criterion.");

  py::register_exception<size_guard_error>(m, "SizeGuardError", PyExc_RuntimeError);
}
