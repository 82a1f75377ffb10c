#pragma once

#include "oneshot/estimation.hpp"

namespace oneshot {

struct TuningConfig {
    std::vector<double> grid;          // default: 100 equally spaced points on [0,1]
    double pilot_beta = 0.4;
    std::optional<ThetaParams> pilot_theta;  // explicit pilot, overrides pilot_beta
    bool self_pilot = false;           // theta_P = theta_hat_beta per grid point
    FitConfig fit_config;

    static std::vector<double> default_grid();
    void validate() const;
};

struct TuningRecord {
    double beta = 0.0;
    ThetaParams theta_hat;
    double mse_hat = 0.0;
    double bias_term = 0.0;
    double variance_term = 0.0;
    bool converged = false;
};

struct TuningResult {
    std::vector<TuningRecord> records;
    double best_beta = 0.0;
    ThetaParams best_theta;
    ThetaParams pilot;
};

/// Sweep the beta grid, fitting each point warm-started from the previous
/// one, and pick the beta minimizing estimated MSE against the pilot.
TuningResult tune(const TestPlan& plan, const CountsTable& counts, const TuningConfig& config);

}  // namespace oneshot
