#include "oneshot/presets.hpp"

#include <algorithm>

namespace oneshot {
namespace presets {

namespace {

const std::vector<double> kStressLevels = {35.0, 45.0, 55.0, 65.0};

struct ReliabilityPreset {
    ThetaParams theta;
    std::vector<double> inspection_times;
};

ReliabilityPreset reliability(const std::string& name) {
    if (name == "low-reliability") return {{0.008, 0.05, 0.0008, 0.08}, {5.0, 10.0, 20.0}};
    if (name == "moderate-reliability") return {{0.004, 0.05, 0.0004, 0.08}, {7.0, 15.0, 25.0}};
    if (name == "high-reliability") return {{0.001, 0.05, 0.0001, 0.08}, {10.0, 20.0, 30.0}};
    throw std::invalid_argument("unknown reliability preset: " + name);
}

}  // namespace

TestPlan balanced_plan(const std::vector<double>& inspection_times, long k_per_cell) {
    TestPlan plan;
    for (double it : inspection_times)
        for (double x : kStressLevels)
            plan.conditions.push_back(TestCondition{it, x, k_per_cell});
    return plan;
}

TestPlan unbalanced_alt_plan() {
    TestPlan plan;
    const double its[] = {10.0, 20.0, 30.0};
    const long counts[] = {50, 40, 20, 40, 20, 20, 30, 20, 20, 20, 10, 10};
    int idx = 0;
    for (double it : its)
        for (double x : kStressLevels)
            plan.conditions.push_back(TestCondition{it, x, counts[idx++]});
    return plan;
}

LinearConstraint wald_study_constraint() {
    LinearConstraint c;
    c.matrix_l = Eigen::MatrixXd::Zero(1, 4);
    c.matrix_l(0, 3) = 1.0;
    c.offset_c = Eigen::VectorXd::Constant(1, 0.08);
    return c;
}

ScenarioSpec scenario(const std::string& name, long k_per_cell, int replications,
                      std::uint64_t seed, bool contaminated) {
    ScenarioSpec spec;
    spec.replications = replications;
    spec.seed = seed;

    if (name == "low-reliability" || name == "moderate-reliability" ||
        name == "high-reliability") {
        const auto preset = reliability(name);
        spec.plan = balanced_plan(preset.inspection_times, k_per_cell);
        spec.true_theta = preset.theta;
    } else if (name == "unbalanced-alt") {
        spec.plan = unbalanced_alt_plan();
        spec.true_theta = {0.001, 0.05, 0.0001, 0.08};
    } else if (name == "wald-level") {
        const auto preset = reliability("moderate-reliability");
        spec.plan = balanced_plan(preset.inspection_times, k_per_cell);
        spec.true_theta = {0.004, 0.05, 0.0004, 0.08};
    } else if (name == "wald-power") {
        const auto preset = reliability("moderate-reliability");
        spec.plan = balanced_plan(preset.inspection_times, k_per_cell);
        spec.true_theta = {0.004, 0.05, 0.0004, 0.09};
    } else {
        throw std::invalid_argument("unknown preset: " + name);
    }

    if (contaminated) {
        Contamination cont;
        cont.cells = {0};
        cont.theta = spec.true_theta;
        cont.theta.theta21 = 0.15;
        spec.contamination = cont;
    }
    return spec;
}

std::vector<std::string> names() {
    return {"low-reliability", "moderate-reliability", "high-reliability",
            "unbalanced-alt",  "wald-level",           "wald-power"};
}

}  // namespace presets
}  // namespace oneshot
