// Python bindings: lattice fields cross the boundary as (num_cells, 2 n_max + 1) numpy arrays.

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <string>
#include <vector>

#include "dke/basis.hpp"
#include "dke/collision.hpp"
#include "dke/config.hpp"
#include "dke/difference_ops.hpp"
#include "dke/evolution.hpp"
#include "dke/kinetic.hpp"
#include "dke/potential.hpp"
#include "dke/scenario.hpp"
#include "dke/spectral.hpp"

namespace py = pybind11;
using namespace dke;

namespace {

using RealArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

RealField to_field(const GridSpec& spec, const RealArray& a) {
    if (a.ndim() != 2 || a.shape(0) != spec.num_cells() || a.shape(1) != spec.num_momenta()) {
        throw py::value_error("expected an array of shape (" + std::to_string(spec.num_cells()) + ", " +
                              std::to_string(spec.num_momenta()) + ")");
    }
    return RealField(spec, std::vector<double>(a.data(), a.data() + a.size()));
}

RealArray to_array(const RealField& f) {
    RealArray out({f.rows(), f.cols()});
    std::copy(f.values().begin(), f.values().end(), out.mutable_data());
    return out;
}

py::array_t<Complex> to_array(const LatticeField& f) {
    py::array_t<Complex> out({f.rows(), f.cols()});
    std::copy(f.values().begin(), f.values().end(), out.mutable_data());
    return out;
}

std::vector<double> per_cell(const GridSpec& spec, const std::vector<double>& v, const char* what) {
    if (v.size() != static_cast<std::size_t>(spec.num_cells())) {
        throw py::value_error(std::string(what) + " needs one value per cell");
    }
    return v;
}

py::dict trajectory_dict(const std::vector<DistributionSnapshot>& traj) {
    const auto& spec = traj.front().n.spec();
    const auto count = static_cast<py::ssize_t>(traj.size());
    py::array_t<double> t(count), total(count), min_n(count), max_n(count), entropy(count);
    py::array_t<double> n({count, static_cast<py::ssize_t>(spec.num_cells()), static_cast<py::ssize_t>(spec.num_momenta())});
    double* dst = n.mutable_data();
    for (py::ssize_t i = 0; i < count; ++i) {
        const auto& s = traj[static_cast<std::size_t>(i)];
        t.mutable_at(i) = s.t;
        total.mutable_at(i) = s.diagnostics.total_number;
        min_n.mutable_at(i) = s.diagnostics.min_n;
        max_n.mutable_at(i) = s.diagnostics.max_n;
        entropy.mutable_at(i) = s.diagnostics.entropy;
        dst = std::copy(s.n.values().begin(), s.n.values().end(), dst);
    }
    py::dict out;
    out["t"] = t;
    out["n"] = n;
    out["total_number"] = total;
    out["min_n"] = min_n;
    out["max_n"] = max_n;
    out["entropy"] = entropy;
    return out;
}

}  // namespace

PYBIND11_MODULE(_dke, m) {
    m.doc() = "Phase-space lattice kinetics";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<InputError>(m, "InputError", PyExc_OSError);
    py::register_exception<StepBoundError>(m, "StepBoundError", PyExc_ValueError);
    py::register_exception<PositivityError>(m, "PositivityError", PyExc_RuntimeError);

    py::class_<GridSpec>(m, "GridSpec")
        .def(py::init<double, int, int>(), py::arg("d"), py::arg("num_cells"), py::arg("n_max"))
        .def_property_readonly("d", &GridSpec::cell_width)
        .def_property_readonly("num_cells", &GridSpec::num_cells)
        .def_property_readonly("n_max", &GridSpec::n_max)
        .def_property_readonly("num_momenta", &GridSpec::num_momenta)
        .def_property_readonly("num_states", &GridSpec::num_states)
        .def_property_readonly("length", &GridSpec::length)
        .def_property_readonly("momentum_step", &GridSpec::momentum_step)
        .def("positions",
             [](const GridSpec& s) {
                 std::vector<double> x;
                 for (int i = 0; i < s.num_cells(); ++i) x.push_back(s.position(i));
                 return py::array_t<double>(static_cast<py::ssize_t>(x.size()), x.data());
             })
        .def("momenta",
             [](const GridSpec& s) {
                 std::vector<double> k;
                 for (int n = -s.n_max(); n <= s.n_max(); ++n) k.push_back(s.momentum(n));
                 return py::array_t<double>(static_cast<py::ssize_t>(k.size()), k.data());
             })
        .def("flat", [](const GridSpec& s, int mi, int n) { return s.flat({mi, n}); }, py::arg("m"), py::arg("n"))
        .def("__eq__", [](const GridSpec& a, const GridSpec& b) { return a == b; })
        .def("__repr__", [](const GridSpec& s) {
            return "GridSpec(d=" + format_double(s.cell_width()) + ", num_cells=" + std::to_string(s.num_cells()) +
                   ", n_max=" + std::to_string(s.n_max()) + ")";
        });

    py::class_<ScenarioConfig>(m, "Scenario")
        .def_static("from_file", &load_config, py::arg("path"))
        .def_static("from_text", [](const std::string& text) { return parse_config(text); }, py::arg("text"))
        .def("to_text", &serialize_config)
        .def_property_readonly("grid", [](const ScenarioConfig& c) { return c.grid.spec(); })
        .def_property_readonly("dt", [](const ScenarioConfig& c) { return c.integrator.dt; })
        .def_property_readonly("t_end", [](const ScenarioConfig& c) { return c.integrator.t_end; })
        .def_property_readonly("num_steps", [](const ScenarioConfig& c) { return c.integrator.num_steps(); })
        .def_readwrite("output_dir", &ScenarioConfig::output_dir)
        .def("initial_state", [](const ScenarioConfig& c) { return to_array(build_initial(c, c.grid.spec())); })
        .def("__eq__", [](const ScenarioConfig& a, const ScenarioConfig& b) { return a == b; });

    m.def(
        "simulate",
        [](const ScenarioConfig& config, const std::filesystem::path& output_dir) {
            SimulationResult result;
            {
                py::gil_scoped_release release;
                result = simulate(config, output_dir);
            }
            py::dict out = trajectory_dict(result.trajectory);
            out["dt_used"] = result.dt_used;
            out["dt_bound"] = result.dt_bound;
            return out;
        },
        py::arg("scenario"), py::arg("output_dir"),
        "Runs a scenario, writes its CSV output and returns the snapshot trajectory.");

    m.def(
        "limit_study",
        [](const ScenarioConfig& config, int levels, const std::filesystem::path& output_dir) {
            py::list rows;
            for (const auto& r : limit_study(config, levels, output_dir)) {
                rows.append(py::dict(py::arg("level") = r.level, py::arg("d") = r.d, py::arg("n_max") = r.n_max,
                                     py::arg("defect") = r.defect));
            }
            return rows;
        },
        py::arg("scenario"), py::arg("levels"), py::arg("output_dir"));

    m.def(
        "verify_basis",
        [](int cells, int n_max, double prefactor_scale) {
            VerifyOptions options;
            options.prefactor_scale = prefactor_scale;
            py::list checks;
            for (const auto& c : verify_basis(GridSpec(1.0, cells, n_max), options).checks) {
                checks.append(py::make_tuple(c.name, c.defect, c.passed));
            }
            return checks;
        },
        py::arg("cells"), py::arg("n_max"), py::arg("prefactor_scale") = 1.0,
        "Returns (name, max_defect, passed) for each basis check.");

    m.def(
        "expand_plane_wave", [](const GridSpec& s, double k) { return to_array(expand_plane_wave(s, k)); },
        py::arg("spec"), py::arg("k"));

    m.def(
        "drift_apply",
        [](const GridSpec& s, const RealArray& n, const std::vector<double>& field) {
            const auto E = per_cell(s, field, "field");
            return to_array(drift_apply(to_field(s, n), std::span<const double>(E)));
        },
        py::arg("spec"), py::arg("n"), py::arg("field"));

    m.def(
        "stream_d", [](const GridSpec& s, const RealArray& n) { return to_array(stream_d(to_field(s, n))); },
        py::arg("spec"), py::arg("n"));

    m.def(
        "spectral_derivative_k",
        [](const GridSpec& s, const RealArray& n) { return to_array(spectral_derivative_k(to_field(s, n))); },
        py::arg("spec"), py::arg("n"));

    m.def(
        "dbe_rhs",
        [](const ScenarioConfig& c, const RealArray& n) {
            const auto spec = c.grid.spec();
            return to_array(dbe_rhs(to_field(spec, n), build_profile(c, spec), build_collision(c, spec)));
        },
        py::arg("scenario"), py::arg("n"), "Right-hand side of the difference equation for a scenario's terms.");

    m.def(
        "classical_rhs",
        [](const ScenarioConfig& c, const RealArray& n) {
            const auto spec = c.grid.spec();
            return to_array(classical_rhs(to_field(spec, n), build_profile(c, spec), build_collision(c, spec)));
        },
        py::arg("scenario"), py::arg("n"));

    m.def(
        "collision_rhs_screened",
        [](const GridSpec& s, const RealArray& n, double eps, double T, double eta) {
            return to_array(collision_rhs(to_field(s, n), build_screened_coulomb_rates(s, eps, T, eta)));
        },
        py::arg("spec"), py::arg("n"), py::arg("eps"), py::arg("T"), py::arg("eta"));

    m.def(
        "fermi_dirac_field", [](const GridSpec& s, double mu, double T) { return to_array(fermi_dirac_field(s, mu, T)); },
        py::arg("spec"), py::arg("mu"), py::arg("T"));

    m.def(
        "meanfield_rhs",
        [](const GridSpec& s, const PolarizationMatrix& P, const std::vector<double>& V, bool full_coupling) {
            const auto profile = PotentialProfile::from_potential(s, per_cell(s, V, "V"));
            return meanfield_rhs(s, P, profile, full_coupling ? KineticCoupling::full : KineticCoupling::diagonal);
        },
        py::arg("spec"), py::arg("P"), py::arg("V"), py::arg("full_coupling") = false);

    m.def("hermiticity_defect", &hermiticity_defect, py::arg("P"));
}
