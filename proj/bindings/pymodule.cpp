#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rgdc/discretize.hpp"
#include "rgdc/errors.hpp"
#include "rgdc/governor.hpp"
#include "rgdc/lp.hpp"
#include "rgdc/mas.hpp"
#include "rgdc/simkit.hpp"
#include "rgdc/system.hpp"

namespace py = pybind11;

using namespace rgdc;

PYBIND11_MODULE(rgdc, m) {
  m.doc() = "Constraint management for discrete-time LTI systems: maximal "
            "admissible sets and the reference governor with dynamic "
            "constraint.";

  py::register_exception<ConstructionError>(m, "ConstructionError");
  py::register_exception<SolverFailure>(m, "SolverFailure");
  py::register_exception<ConfigError>(m, "ConfigError");

  py::class_<mas::DiscreteLtiSystem>(m, "DiscreteLtiSystem")
      .def(py::init<numerics::Matrix, numerics::Matrix, numerics::Matrix,
                    numerics::Matrix, numerics::Matrix, double>(),
           py::arg("A"), py::arg("B"), py::arg("C_tr"), py::arg("C_st"),
           py::arg("D_st"), py::arg("Ts"))
      .def_readonly("A", &mas::DiscreteLtiSystem::A)
      .def_readonly("B", &mas::DiscreteLtiSystem::B)
      .def_readonly("C_tr", &mas::DiscreteLtiSystem::C_tr)
      .def_readonly("C_st", &mas::DiscreteLtiSystem::C_st)
      .def_readonly("D_st", &mas::DiscreteLtiSystem::D_st)
      .def_readonly("Ts", &mas::DiscreteLtiSystem::Ts)
      .def("order", &mas::DiscreteLtiSystem::order)
      .def("static_output_count", &mas::DiscreteLtiSystem::static_output_count)
      .def("spectral_radius", &mas::DiscreteLtiSystem::spectral_radius)
      .def("equilibrium_gain", &mas::DiscreteLtiSystem::equilibrium_gain)
      .def("equilibrium_state", &mas::DiscreteLtiSystem::equilibrium_state,
           py::arg("v"));

  m.def("make_pll", &mas::make_pll, py::arg("G_lp"), py::arg("G_VCO"),
        py::arg("Ts"));
  m.def("zoh_discretize", &numerics::zoh_discretize, py::arg("A"),
        py::arg("B"), py::arg("Ts"));

  py::enum_<mas::Orientation>(m, "Orientation")
      .value("less_equal", mas::Orientation::less_equal)
      .value("greater_equal", mas::Orientation::greater_equal);

  py::enum_<mas::OutputChannel>(m, "OutputChannel")
      .value("tracking", mas::OutputChannel::tracking)
      .value("static_outputs", mas::OutputChannel::static_outputs);

  py::class_<mas::ConstraintSet>(m, "ConstraintSet")
      .def(py::init([](numerics::Matrix S, numerics::Vector s) {
             return mas::ConstraintSet{std::move(S), std::move(s)};
           }),
           py::arg("S"), py::arg("s"))
      .def_readwrite("S", &mas::ConstraintSet::S)
      .def_readwrite("s", &mas::ConstraintSet::s);

  py::class_<mas::RowTag>(m, "RowTag")
      .def_readonly("t", &mas::RowTag::t)
      .def_readonly("source_row", &mas::RowTag::source_row);

  py::class_<mas::MasRepresentation>(m, "MasRepresentation")
      .def_readonly("H_x", &mas::MasRepresentation::H_x)
      .def_readonly("H_v", &mas::MasRepresentation::H_v)
      .def_readonly("h", &mas::MasRepresentation::h)
      .def_readonly("admissibility_index",
                    &mas::MasRepresentation::admissibility_index)
      .def_readonly("epsilon", &mas::MasRepresentation::epsilon)
      .def_readonly("steady_state_rows",
                    &mas::MasRepresentation::steady_state_rows)
      .def_readonly("orientation", &mas::MasRepresentation::orientation)
      .def("rows", &mas::MasRepresentation::rows)
      .def("order", &mas::MasRepresentation::order);

  py::class_<mas::DynamicMasPair>(m, "DynamicMasPair")
      .def_readonly("rep_minus", &mas::DynamicMasPair::rep_minus)
      .def_readonly("rep_plus", &mas::DynamicMasPair::rep_plus);

  py::class_<mas::UncertainSystem>(m, "UncertainSystem")
      .def(py::init<std::vector<mas::DiscreteLtiSystem>, std::size_t>(),
           py::arg("vertices"), py::arg("nominal_index"))
      .def_readonly("nominal_index", &mas::UncertainSystem::nominal_index)
      .def("nominal", &mas::UncertainSystem::nominal,
           py::return_value_policy::reference_internal);

  m.def("prediction_row", &mas::prediction_row, py::arg("sys"),
        py::arg("S_row"), py::arg("channel"), py::arg("t"));
  m.def("is_redundant", &mas::is_redundant, py::arg("partial"),
        py::arg("candidate_coeffs"), py::arg("candidate_rhs"));
  m.def("build_static_mas", &mas::build_static_mas, py::arg("sys"),
        py::arg("constraints"), py::arg("epsilon"));
  m.def("build_dynamic_mas_pair", &mas::build_dynamic_mas_pair, py::arg("sys"),
        py::arg("epsilon"));
  m.def("build_robust_mas_polytopic", &mas::build_robust_mas_polytopic,
        py::arg("usys"), py::arg("constraints"), py::arg("channel"),
        py::arg("epsilon"), py::arg("product_cap") = 5000L);
  m.def("build_robust_dynamic_mas_pair", &mas::build_robust_dynamic_mas_pair,
        py::arg("usys"), py::arg("epsilon"), py::arg("product_cap") = 5000L);
  m.def("shrink_for_disturbance", &mas::shrink_for_disturbance, py::arg("rep"),
        py::arg("row_margins"));

  // Selection holds a pointer into the pair; expose a value snapshot instead.
  m.def(
      "select_dynamic_mas",
      [](const mas::DynamicMasPair& pair, double r, double y_tr) {
        const auto sel = mas::select_dynamic_mas(pair, r, y_tr);
        return py::make_tuple(*sel.rep, sel.orientation, sel.rhs_scale,
                              sel.mas_case);
      },
      py::arg("pair"), py::arg("r"), py::arg("y_tr"),
      "Returns (representation, orientation, rhs_scale, case).");

  m.def("contains",
        py::overload_cast<const mas::MasRepresentation&, mas::Orientation,
                          double, const numerics::Vector&, double>(
            &mas::contains),
        py::arg("rep"), py::arg("orientation"), py::arg("rhs_scale"),
        py::arg("x"), py::arg("v"));
  m.def("contains",
        py::overload_cast<const mas::MasRepresentation&,
                          const numerics::Vector&, double>(&mas::contains),
        py::arg("rep"), py::arg("x"), py::arg("v"));

  py::class_<governor::GovernorState>(m, "GovernorState")
      .def(py::init([](mas::DynamicMasPair pair, double v0, double epsilon) {
             governor::GovernorState st;
             st.pair = std::move(pair);
             st.v_prev = v0;
             st.epsilon = epsilon;
             return st;
           }),
           py::arg("pair"), py::arg("v0") = 0.0, py::arg("epsilon") = 1e-3)
      .def_readwrite("v_prev", &governor::GovernorState::v_prev)
      .def_readwrite("static_mas", &governor::GovernorState::static_mas)
      .def_readwrite("epsilon", &governor::GovernorState::epsilon);

  py::class_<governor::GovernorDecision>(m, "GovernorDecision")
      .def_readonly("v", &governor::GovernorDecision::v)
      .def_readonly("kappa_tr", &governor::GovernorDecision::kappa_tr)
      .def_readonly("kappa_st", &governor::GovernorDecision::kappa_st)
      .def_readonly("kappa_star", &governor::GovernorDecision::kappa_star)
      .def_readonly("mas_case", &governor::GovernorDecision::mas_case)
      .def_readonly("feasible", &governor::GovernorDecision::feasible);

  m.def("kappa_row", &governor::kappa_row, py::arg("n"), py::arg("d"));
  m.def("rg_dc_kappa", &governor::rg_dc_kappa, py::arg("state"), py::arg("x"),
        py::arg("r"), py::arg("y_tr"));
  m.def("rg_static_kappa", &governor::rg_static_kappa, py::arg("state"),
        py::arg("x"), py::arg("r"));
  m.def("govern_step", &governor::govern_step, py::arg("state"), py::arg("x"),
        py::arg("r"), py::arg("y_tr"));

  py::class_<simkit::ReferenceSignal>(m, "ReferenceSignal")
      .def_static("constant", &simkit::ReferenceSignal::constant,
                  py::arg("level"))
      .def_static("step_sequence", &simkit::ReferenceSignal::step_sequence,
                  py::arg("steps"))
      .def_static("sinusoid", &simkit::ReferenceSignal::sinusoid,
                  py::arg("amplitude"), py::arg("frequency"))
      .def("eval", &simkit::ReferenceSignal::eval, py::arg("t"));

  py::class_<simkit::SimulationTrace>(m, "SimulationTrace")
      .def_readonly("Ts", &simkit::SimulationTrace::Ts)
      .def_readonly("p", &simkit::SimulationTrace::p)
      .def_readonly("t", &simkit::SimulationTrace::t)
      .def_readonly("r", &simkit::SimulationTrace::r)
      .def_readonly("v", &simkit::SimulationTrace::v)
      .def_readonly("y_tr", &simkit::SimulationTrace::y_tr)
      .def_readonly("y_st", &simkit::SimulationTrace::y_st)
      .def_readonly("kappa_tr", &simkit::SimulationTrace::kappa_tr)
      .def_readonly("kappa_st", &simkit::SimulationTrace::kappa_st)
      .def_readonly("kappa_star", &simkit::SimulationTrace::kappa_star)
      .def_readonly("mas_case", &simkit::SimulationTrace::mas_case)
      .def_readonly("feasible", &simkit::SimulationTrace::feasible)
      .def("size", &simkit::SimulationTrace::size);

  m.def("simulate", &simkit::simulate, py::arg("sys"), py::arg("state"),
        py::arg("ref"), py::arg("x0"), py::arg("steps"));
  m.def("simulate_linear", &simkit::simulate_linear, py::arg("sys"),
        py::arg("ref"), py::arg("x0"), py::arg("steps"));
  m.def(
      "overshoot_metric",
      [](const simkit::SimulationTrace& trace, double r_final) {
        bool flagged = false;
        const double value = simkit::overshoot_metric(trace, r_final, &flagged);
        return py::make_tuple(value, flagged);
      },
      py::arg("trace"), py::arg("r_final"),
      "Returns (overshoot, zero_reference_flag).");
  m.def("log_spaced", &simkit::log_spaced, py::arg("count"), py::arg("lo"),
        py::arg("hi"));

  py::enum_<numerics::LpSense>(m, "LpSense")
      .value("maximize", numerics::LpSense::maximize)
      .value("minimize", numerics::LpSense::minimize);
  py::enum_<numerics::LpConstraintSense>(m, "LpConstraintSense")
      .value("less_equal", numerics::LpConstraintSense::less_equal)
      .value("greater_equal", numerics::LpConstraintSense::greater_equal);
  py::enum_<numerics::LpStatus>(m, "LpStatus")
      .value("optimal", numerics::LpStatus::optimal)
      .value("infeasible", numerics::LpStatus::infeasible)
      .value("unbounded", numerics::LpStatus::unbounded);

  py::class_<numerics::LpResult>(m, "LpResult")
      .def_readonly("status", &numerics::LpResult::status)
      .def_readonly("optimizer", &numerics::LpResult::optimizer)
      .def_readonly("objective_value", &numerics::LpResult::objective_value);

  m.def(
      "solve_lp",
      [](const numerics::Vector& objective, const numerics::Matrix& M,
         const numerics::Vector& N, numerics::LpSense sense,
         numerics::LpConstraintSense constraint_sense) {
        numerics::LpProblem p;
        p.objective = objective;
        p.constraint_matrix = M;
        p.constraint_rhs = N;
        p.sense = sense;
        p.constraint_sense = constraint_sense;
        return numerics::solve_lp(p);
      },
      py::arg("objective"), py::arg("constraint_matrix"),
      py::arg("constraint_rhs"),
      py::arg("sense") = numerics::LpSense::maximize,
      py::arg("constraint_sense") = numerics::LpConstraintSense::less_equal);
}
