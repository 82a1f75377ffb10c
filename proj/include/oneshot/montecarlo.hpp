#pragma once

#include "oneshot/inference.hpp"

#include <array>
#include <cstdint>
#include <random>
#include <set>
#include <string>

namespace oneshot {

/// Deterministic uniform stream; replication streams are independent
/// functions of (seed, replication index), so serial and parallel execution
/// agree exactly.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_index);
    double uniform();  // in [0, 1)

private:
    std::mt19937_64 gen_;
};

/// Cell-level contamination: the listed conditions draw their counts from a
/// perturbed parameter vector.
struct Contamination {
    std::set<std::size_t> cells;
    ThetaParams theta;
};

struct ScenarioSpec {
    TestPlan plan;
    ThetaParams true_theta;
    std::optional<Contamination> contamination;
    int replications = 500;
    std::uint64_t seed = 1;

    void validate() const;
};

struct ErrorSummary {
    std::array<double, 4> rmse{};
    std::array<double, 4> mae{};
    std::array<double, 4> mbe{};
    double rmse_aggregate = 0.0;  // sqrt(mean squared Euclidean norm)
    double mae_aggregate = 0.0;
    double mbe_aggregate = 0.0;
    int replications_used = 0;
    double convergence_rate = 0.0;
};

struct LevelPowerSummary {
    double rejection_rate = 0.0;
    double alpha = 0.05;
    int replications_used = 0;
    double convergence_rate = 0.0;
};

/// One multinomial draw of (survivals, cause-1, cause-2) for a condition.
CountsRow generate_counts(const TestCondition& cond, const CellProbs& probs, RngStream& rng);

/// Full dataset draw for one replication, honoring contamination.
CountsTable generate_table(const ScenarioSpec& spec, RngStream& rng);

using BetaList = std::vector<double>;

std::vector<std::pair<double, ErrorSummary>> run_efficiency_study(const ScenarioSpec& spec,
                                                                  const BetaList& betas);

std::vector<std::pair<double, LevelPowerSummary>> run_level_power_study(
    const ScenarioSpec& spec, const LinearConstraint& constraint, const BetaList& betas,
    double alpha);

/// One point of the unbalanced contamination sweeps.
struct SweepPoint {
    std::string parameter;
    double contaminated_value = 0.0;
    double beta = 0.0;
    ErrorSummary summary;
};

struct UnbalancedStudyConfig {
    int replications = 500;
    std::uint64_t seed = 1;
    int points_per_sweep = 5;
};

/// Accelerated-life-test sweep: contaminate one parameter of cell 1 at a
/// time over a grid from its pure value upward, on the fixed 12-condition
/// unbalanced plan.
std::vector<SweepPoint> run_unbalanced_study(const BetaList& betas,
                                             const UnbalancedStudyConfig& config);

}  // namespace oneshot
