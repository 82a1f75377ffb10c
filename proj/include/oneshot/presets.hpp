#pragma once

#include "oneshot/montecarlo.hpp"

namespace oneshot {
namespace presets {

/// Balanced 12-condition plan (4 stress levels x 3 inspection times) with
/// k_per_cell devices in every cell.
TestPlan balanced_plan(const std::vector<double>& inspection_times, long k_per_cell);

/// The fixed unbalanced accelerated-life-test plan (12 conditions, 300
/// devices total).
TestPlan unbalanced_alt_plan();

/// Named simulation scenario. Known names: low-reliability,
/// moderate-reliability, high-reliability, unbalanced-alt, wald-level,
/// wald-power.
ScenarioSpec scenario(const std::string& name, long k_per_cell, int replications,
                      std::uint64_t seed, bool contaminated);

/// The hypothesis tested in the Wald-type study: theta21 = 0.08.
LinearConstraint wald_study_constraint();

std::vector<std::string> names();

}  // namespace presets
}  // namespace oneshot
