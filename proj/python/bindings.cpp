#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "clms/errors.hpp"
#include "clms/experiments.hpp"
#include "clms/filter.hpp"

namespace py = pybind11;

namespace {

py::dict table_to_dict(const clms::Table& t) {
  py::dict out;
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    py::list col;
    for (const auto& row : t.rows) {
      if (row[c]) {
        col.append(*row[c]);
      } else {
        col.append(py::none());
      }
    }
    out[py::str(t.columns[c])] = col;
  }
  return out;
}

void register_errors(py::module_& m) {
  static py::exception<clms::Error> base(m, "Error");
  py::register_exception<clms::ShapeError>(m, "ShapeError", base.ptr());
  py::register_exception<clms::SymmetryError>(m, "SymmetryError", base.ptr());
  py::register_exception<clms::DefinitenessError>(m, "DefinitenessError", base.ptr());
  py::register_exception<clms::SingularError>(m, "SingularError", base.ptr());
  py::register_exception<clms::SpecError>(m, "SpecError", base.ptr());
  py::register_exception<clms::ArgumentError>(m, "ArgumentError", base.ptr());
  py::register_exception<clms::DataError>(m, "DataError", base.ptr());
  py::register_exception<clms::InstabilityError>(m, "InstabilityError", base.ptr());
  py::register_exception<clms::DomainError>(m, "DomainError", base.ptr());
  py::register_exception<clms::EnsembleError>(m, "EnsembleError", base.ptr());
  py::register_exception<clms::ConfigError>(m, "ConfigError", base.ptr());
}

}  // namespace

PYBIND11_MODULE(_clms, m) {
  m.doc() = "Constrained LMS filter, closed-form mean-square theory and Monte Carlo harness";
  register_errors(m);

  // linear algebra helpers
  m.def("kron", &clms::kron);
  m.def("vec_of", &clms::vec_of);
  m.def("spd_sqrt", &clms::spd_sqrt);
  m.def("sym_eig", [](const clms::Matrix& s) {
    auto r = clms::sym_eig(s);
    return py::make_tuple(r.values, r.vectors);
  });
  m.def("lin_solve", py::overload_cast<const clms::Matrix&, const clms::Vector&>(&clms::lin_solve));

  py::class_<clms::SystemSpec>(m, "SystemSpec")
      .def(py::init<>())
      .def_readwrite("L", &clms::SystemSpec::L)
      .def_readwrite("K", &clms::SystemSpec::K)
      .def_readwrite("h", &clms::SystemSpec::h)
      .def_readwrite("R", &clms::SystemSpec::R)
      .def_readwrite("eta", &clms::SystemSpec::eta)
      .def_readwrite("C", &clms::SystemSpec::C)
      .def_readwrite("f", &clms::SystemSpec::f);

  py::class_<clms::DerivedModel>(m, "DerivedModel")
      .def_readonly("P", &clms::DerivedModel::P)
      .def_readonly("q", &clms::DerivedModel::q)
      .def_readonly("g", &clms::DerivedModel::g)
      .def_readonly("e", &clms::DerivedModel::e)
      .def_readonly("Z", &clms::DerivedModel::Z)
      .def_readonly("lambdas", &clms::DerivedModel::lambdas)
      .def_readonly("R", &clms::DerivedModel::R)
      .def_readonly("eta", &clms::DerivedModel::eta)
      .def_property_readonly("min_mse", &clms::DerivedModel::min_mse);

  m.def("random_scenario", &clms::random_scenario, py::arg("seed"), py::arg("L"), py::arg("K"),
        py::arg("eta") = clms::kDefaultEta);
  m.def("derive_model", &clms::derive_model);
  m.def("validate_spec", [](const clms::SystemSpec& spec) {
    py::list out;
    for (const auto& v : clms::validate_spec(spec)) out.append(py::make_tuple(v.invariant, v.residual, v.detail));
    return out;
  });

  py::class_<clms::FilterState>(m, "FilterState")
      .def(py::init<>())
      .def_readwrite("w", &clms::FilterState::w)
      .def_readwrite("n", &clms::FilterState::n);
  py::class_<clms::Sample>(m, "Sample")
      .def(py::init([](clms::Vector x, double y, double v) { return clms::Sample{std::move(x), y, v}; }),
           py::arg("x"), py::arg("y"), py::arg("v") = 0.0)
      .def_readwrite("x", &clms::Sample::x)
      .def_readwrite("y", &clms::Sample::y)
      .def_readwrite("v", &clms::Sample::v);
  m.def("init_state", &clms::init_state);
  m.def("clms_step", &clms::clms_step, py::arg("state"), py::arg("sample"), py::arg("mu"), py::arg("model"));

  m.def("stability_max_step", &clms::stability_max_step);
  m.def("recursion_eigenvalues", &clms::recursion_eigenvalues);
  m.def("build_M", &clms::build_M);
  m.def("build_F", &clms::build_F);
  m.def("fourth_moment", &clms::fourth_moment);
  m.def("is_mean_square_stable", &clms::is_mean_square_stable);
  m.def("transient_msd_curve", &clms::transient_msd_curve, py::arg("model"), py::arg("d0"), py::arg("mu"),
        py::arg("n_iters"));
  m.def("steady_state_msd", &clms::steady_state_msd);
  m.def("misadjustment_direct", &clms::misadjustment_direct);
  m.def("misadjustment_eigen", &clms::misadjustment_eigen);
  m.def("misadjustment_bounds", [](const clms::DerivedModel& model, double mu) {
    const auto b = clms::misadjustment_bounds(model, mu);
    return py::make_tuple(b.lower, b.upper);
  });

  py::class_<clms::RunConfig>(m, "RunConfig")
      .def(py::init<>())
      .def_readwrite("runs", &clms::RunConfig::runs)
      .def_readwrite("iters", &clms::RunConfig::iters)
      .def_readwrite("ss_window", &clms::RunConfig::ss_window)
      .def_readwrite("seed", &clms::RunConfig::seed)
      .def_readwrite("threads", &clms::RunConfig::threads);
  py::class_<clms::EnsembleStats>(m, "EnsembleStats")
      .def_readonly("msd", &clms::EnsembleStats::msd)
      .def_readonly("msd_se", &clms::EnsembleStats::msd_se)
      .def_readonly("msd_ss", &clms::EnsembleStats::msd_ss)
      .def_readonly("mse_ss", &clms::EnsembleStats::mse_ss)
      .def_readonly("zeta_emp", &clms::EnsembleStats::zeta_emp)
      .def_readonly("completed", &clms::EnsembleStats::completed)
      .def_readonly("diverged", &clms::EnsembleStats::diverged)
      .def_readonly("max_constraint_violation", &clms::EnsembleStats::max_constraint_violation);
  m.def("ensemble_msd_curve", &clms::ensemble_msd_curve, py::arg("spec"), py::arg("model"), py::arg("mu"),
        py::arg("config"), py::call_guard<py::gil_scoped_release>());

  py::class_<clms::ExperimentConfig>(m, "ExperimentConfig")
      .def_readonly("seed", &clms::ExperimentConfig::seed)
      .def_readonly("L", &clms::ExperimentConfig::L)
      .def_readonly("K", &clms::ExperimentConfig::K)
      .def_readonly("runs", &clms::ExperimentConfig::runs)
      .def_readonly("ss_window", &clms::ExperimentConfig::ss_window)
      .def_readonly("iters", &clms::ExperimentConfig::iters)
      .def_readonly("eta", &clms::ExperimentConfig::eta);
  m.def("parse_config", [](const std::string& text, const std::map<std::string, std::string>& overrides) {
    clms::ConfigOverrides ov(overrides.begin(), overrides.end());
    return clms::parse_config(text, "<python>", ov);
  }, py::arg("text") = "", py::arg("overrides") = std::map<std::string, std::string>{});

  m.def("run_fig1", [](const clms::ExperimentConfig& cfg) {
    py::dict out;
    for (const auto& t : clms::run_fig1(cfg)) out[py::str(t.file_name)] = table_to_dict(t.table);
    return out;
  });
  m.def("run_fig2", [](const clms::ExperimentConfig& cfg) { return table_to_dict(clms::run_fig2(cfg).table); });
  m.def("run_fig3", [](const clms::ExperimentConfig& cfg) { return table_to_dict(clms::run_fig3(cfg).table); });
  m.def("validate_report", &clms::validate_report);
}
