// Python bindings for the core operations: data loading, fitting, testing,
// tuning, power analysis and the Monte Carlo studies.

#include <pybind11/pybind11.h>
#include <pybind11/eigen.h>
#include <pybind11/stl.h>

#include "oneshot/inference.hpp"
#include "oneshot/io.hpp"
#include "oneshot/presets.hpp"
#include "oneshot/tuning.hpp"

namespace py = pybind11;
using namespace oneshot;

namespace {

LinearConstraint make_constraint(const Eigen::MatrixXd& l, const Eigen::VectorXd& c) {
    LinearConstraint lin;
    lin.matrix_l = l;
    lin.offset_c = c;
    lin.validate();
    return lin;
}

}  // namespace

PYBIND11_MODULE(_oneshot, m) {
    m.doc() = "Robust inference for one-shot devices under two competing exponential risks";

    py::register_exception<ParseError>(m, "ParseError");

    py::class_<TestCondition>(m, "TestCondition")
        .def(py::init<double, double, long>(), py::arg("inspection_time"), py::arg("stress"),
             py::arg("devices"))
        .def_readwrite("inspection_time", &TestCondition::inspection_time)
        .def_readwrite("stress", &TestCondition::stress)
        .def_readwrite("devices", &TestCondition::devices);

    py::class_<TestPlan>(m, "TestPlan")
        .def(py::init<>())
        .def(py::init([](std::vector<TestCondition> conds) {
                 TestPlan p;
                 p.conditions = std::move(conds);
                 return p;
             }),
             py::arg("conditions"))
        .def_readwrite("conditions", &TestPlan::conditions)
        .def("total_devices", &TestPlan::total_devices)
        .def("validate", &TestPlan::validate)
        .def("__len__", [](const TestPlan& p) { return p.size(); });

    py::class_<ThetaParams>(m, "ThetaParams")
        .def(py::init<double, double, double, double>(), py::arg("theta10"), py::arg("theta11"),
             py::arg("theta20"), py::arg("theta21"))
        .def_readwrite("theta10", &ThetaParams::theta10)
        .def_readwrite("theta11", &ThetaParams::theta11)
        .def_readwrite("theta20", &ThetaParams::theta20)
        .def_readwrite("theta21", &ThetaParams::theta21)
        .def("as_vector", &ThetaParams::as_vector)
        .def("validate", &ThetaParams::validate)
        .def("__repr__", [](const ThetaParams& t) {
            return "ThetaParams(" + std::to_string(t.theta10) + ", " + std::to_string(t.theta11) +
                   ", " + std::to_string(t.theta20) + ", " + std::to_string(t.theta21) + ")";
        });

    py::class_<CountsRow>(m, "CountsRow")
        .def(py::init<double, double, double>(), py::arg("n_survive"), py::arg("n_cause1"),
             py::arg("n_cause2"))
        .def_readwrite("n_survive", &CountsRow::n_survive)
        .def_readwrite("n_cause1", &CountsRow::n_cause1)
        .def_readwrite("n_cause2", &CountsRow::n_cause2)
        .def("total", &CountsRow::total);

    py::class_<CountsTable>(m, "CountsTable")
        .def(py::init<>())
        .def(py::init([](std::vector<CountsRow> rows) {
                 CountsTable t;
                 t.rows = std::move(rows);
                 return t;
             }),
             py::arg("rows"))
        .def_readwrite("rows", &CountsTable::rows)
        .def("validate_against", &CountsTable::validate_against);

    py::class_<CellProbs>(m, "CellProbs")
        .def_readonly("p_survive", &CellProbs::p_survive)
        .def_readonly("p_cause1", &CellProbs::p_cause1)
        .def_readonly("p_cause2", &CellProbs::p_cause2);

    py::class_<LifetimeSummary>(m, "LifetimeSummary")
        .def_readonly("e_overall", &LifetimeSummary::e_overall)
        .def_readonly("e_cause1", &LifetimeSummary::e_cause1)
        .def_readonly("e_cause2", &LifetimeSummary::e_cause2)
        .def_readonly("p_cause1", &LifetimeSummary::p_cause1)
        .def_readonly("p_cause2", &LifetimeSummary::p_cause2);

    py::class_<Dataset>(m, "Dataset")
        .def_readonly("condition_ids", &Dataset::condition_ids)
        .def_readonly("plan", &Dataset::plan)
        .def_readonly("counts", &Dataset::counts);

    py::class_<FitResult>(m, "FitResult")
        .def_readonly("theta_hat", &FitResult::theta_hat)
        .def_readonly("objective", &FitResult::objective)
        .def_readonly("gradient_norm", &FitResult::gradient_norm)
        .def_readonly("converged", &FitResult::converged)
        .def_readonly("boundary_hit", &FitResult::boundary_hit)
        .def_readonly("iterations", &FitResult::iterations)
        .def_readonly("covariance", &FitResult::covariance)
        .def_readonly("covariance_ok", &FitResult::covariance_ok)
        .def_property_readonly("beta", [](const FitResult& r) { return r.beta.value; });

    py::class_<WaldResult>(m, "WaldResult")
        .def_readonly("statistic", &WaldResult::statistic)
        .def_readonly("df", &WaldResult::df)
        .def_readonly("p_value", &WaldResult::p_value)
        .def_readonly("reject_at", &WaldResult::reject_at);

    py::class_<PowerResult>(m, "PowerResult")
        .def_readonly("approx_power", &PowerResult::approx_power)
        .def_readonly("ell_value", &PowerResult::ell_value)
        .def_readonly("sigma_w", &PowerResult::sigma_w);

    py::class_<SampleSizeResult>(m, "SampleSizeResult")
        .def_readonly("k_total", &SampleSizeResult::k_total)
        .def_readonly("per_condition", &SampleSizeResult::per_condition)
        .def_readonly("power_at_k", &SampleSizeResult::power_at_k);

    py::class_<TuningRecord>(m, "TuningRecord")
        .def_readonly("beta", &TuningRecord::beta)
        .def_readonly("theta_hat", &TuningRecord::theta_hat)
        .def_readonly("mse_hat", &TuningRecord::mse_hat)
        .def_readonly("bias_term", &TuningRecord::bias_term)
        .def_readonly("variance_term", &TuningRecord::variance_term)
        .def_readonly("converged", &TuningRecord::converged);

    py::class_<TuningResult>(m, "TuningResult")
        .def_readonly("records", &TuningResult::records)
        .def_readonly("best_beta", &TuningResult::best_beta)
        .def_readonly("best_theta", &TuningResult::best_theta)
        .def_readonly("pilot", &TuningResult::pilot);

    py::class_<ErrorSummary>(m, "ErrorSummary")
        .def_readonly("rmse", &ErrorSummary::rmse)
        .def_readonly("mae", &ErrorSummary::mae)
        .def_readonly("mbe", &ErrorSummary::mbe)
        .def_readonly("rmse_aggregate", &ErrorSummary::rmse_aggregate)
        .def_readonly("mae_aggregate", &ErrorSummary::mae_aggregate)
        .def_readonly("mbe_aggregate", &ErrorSummary::mbe_aggregate)
        .def_readonly("replications_used", &ErrorSummary::replications_used)
        .def_readonly("convergence_rate", &ErrorSummary::convergence_rate);

    py::class_<LevelPowerSummary>(m, "LevelPowerSummary")
        .def_readonly("rejection_rate", &LevelPowerSummary::rejection_rate)
        .def_readonly("alpha", &LevelPowerSummary::alpha)
        .def_readonly("replications_used", &LevelPowerSummary::replications_used)
        .def_readonly("convergence_rate", &LevelPowerSummary::convergence_rate);

    m.def("load_dataset", &load_dataset, py::arg("path"));
    m.def("load_plan", &load_plan, py::arg("path"));

    m.def(
        "cell_probs",
        [](const ThetaParams& theta, const TestCondition& cond) {
            return cell_probs(theta, cond);
        },
        py::arg("theta"), py::arg("condition"));
    m.def("quantities_of_interest", &quantities_of_interest, py::arg("theta"), py::arg("stress"));

    m.def(
        "objective",
        [](const TestPlan& plan, const CountsTable& counts, const ThetaParams& theta,
           double beta) { return objective(plan, counts, theta, Beta(beta)); },
        py::arg("plan"), py::arg("counts"), py::arg("theta"), py::arg("beta"));
    m.def(
        "estimated_error",
        [](const TestPlan& plan, const CountsTable& counts, const ThetaParams& theta) {
            return estimated_error(plan, counts, theta);
        },
        py::arg("plan"), py::arg("counts"), py::arg("theta"));

    m.def(
        "fit",
        [](const TestPlan& plan, const CountsTable& counts, double beta,
           std::optional<ThetaParams> start, int multi_start) {
            FitConfig cfg;
            cfg.beta = Beta(beta);
            cfg.start = start;
            cfg.multi_start = multi_start;
            return fit(plan, counts, cfg);
        },
        py::arg("plan"), py::arg("counts"), py::arg("beta") = 0.0,
        py::arg("start") = std::nullopt, py::arg("multi_start") = 5);

    m.def(
        "wald_test",
        [](const FitResult& fr, const TestPlan& plan, const Eigen::MatrixXd& l,
           const Eigen::VectorXd& c, double alpha) {
            return wald_test(fr, plan, make_constraint(l, c), alpha);
        },
        py::arg("fit"), py::arg("plan"), py::arg("constraint_matrix"),
        py::arg("constraint_offset"), py::arg("alpha") = 0.05);

    m.def(
        "power_approx",
        [](const ThetaParams& star, const TestPlan& plan, const Eigen::MatrixXd& l,
           const Eigen::VectorXd& c, double beta, double alpha, std::optional<double> k) {
            return power_approx(star, plan, make_constraint(l, c), Beta(beta), alpha, k);
        },
        py::arg("theta_star"), py::arg("plan"), py::arg("constraint_matrix"),
        py::arg("constraint_offset"), py::arg("beta") = 0.0, py::arg("alpha") = 0.05,
        py::arg("k_total") = std::nullopt);

    m.def(
        "required_sample_size",
        [](const ThetaParams& star, const TestPlan& plan, const Eigen::MatrixXd& l,
           const Eigen::VectorXd& c, double beta, double alpha, double target_power) {
            return required_sample_size(star, plan, make_constraint(l, c), Beta(beta), alpha,
                                        target_power);
        },
        py::arg("theta_star"), py::arg("plan"), py::arg("constraint_matrix"),
        py::arg("constraint_offset"), py::arg("beta") = 0.0, py::arg("alpha") = 0.05,
        py::arg("target_power") = 0.9);

    m.def(
        "tune",
        [](const TestPlan& plan, const CountsTable& counts, std::vector<double> grid,
           double pilot_beta, bool self_pilot) {
            TuningConfig cfg;
            cfg.grid = grid.empty() ? TuningConfig::default_grid() : std::move(grid);
            cfg.pilot_beta = pilot_beta;
            cfg.self_pilot = self_pilot;
            return tune(plan, counts, cfg);
        },
        py::arg("plan"), py::arg("counts"), py::arg("grid") = std::vector<double>{},
        py::arg("pilot_beta") = 0.4, py::arg("self_pilot") = false);

    m.def(
        "run_efficiency_study",
        [](const std::string& preset, long k_per_cell, int replications, std::uint64_t seed,
           bool contaminated, const std::vector<double>& betas) {
            const ScenarioSpec spec =
                presets::scenario(preset, k_per_cell, replications, seed, contaminated);
            return run_efficiency_study(spec, betas);
        },
        py::arg("preset"), py::arg("k_per_cell") = 100, py::arg("replications") = 500,
        py::arg("seed") = 1, py::arg("contaminated") = false,
        py::arg("betas") = std::vector<double>{0.0, 0.2, 0.4, 0.6, 0.8, 1.0});

    m.def(
        "run_level_power_study",
        [](const std::string& preset, long k_per_cell, int replications, std::uint64_t seed,
           bool contaminated, const std::vector<double>& betas, double alpha) {
            const ScenarioSpec spec =
                presets::scenario(preset, k_per_cell, replications, seed, contaminated);
            return run_level_power_study(spec, presets::wald_study_constraint(), betas, alpha);
        },
        py::arg("preset"), py::arg("k_per_cell") = 200, py::arg("replications") = 500,
        py::arg("seed") = 1, py::arg("contaminated") = false,
        py::arg("betas") = std::vector<double>{0.0, 0.2, 0.4}, py::arg("alpha") = 0.05);

    m.def("preset_names", &presets::names);
}
