#include "oneshot/tuning.hpp"

#include <cmath>

namespace oneshot {

std::vector<double> TuningConfig::default_grid() {
    std::vector<double> g(100);
    for (int i = 0; i < 100; ++i) g[i] = static_cast<double>(i) / 99.0;
    return g;
}

void TuningConfig::validate() const {
    if (grid.empty()) throw std::invalid_argument("tuning grid is empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] < 0.0) throw std::invalid_argument("tuning grid values must be >= 0");
        if (i > 0 && grid[i] <= grid[i - 1])
            throw std::invalid_argument("tuning grid must be strictly increasing");
    }
    if (!self_pilot && !pilot_theta && pilot_beta < 0.0)
        throw std::invalid_argument("pilot beta must be >= 0");
}

TuningResult tune(const TestPlan& plan, const CountsTable& counts, const TuningConfig& config) {
    config.validate();
    TuningResult out;

    if (!config.self_pilot) {
        if (config.pilot_theta) {
            out.pilot = *config.pilot_theta;
            out.pilot.validate();
        } else {
            FitConfig pilot_cfg = config.fit_config;
            pilot_cfg.beta = Beta(config.pilot_beta);
            const FitResult pilot_fit = fit(plan, counts, pilot_cfg);
            if (!pilot_fit.converged)
                throw std::runtime_error("pilot fit did not converge; tuning aborted");
            out.pilot = pilot_fit.theta_hat;
        }
    }

    std::optional<ThetaParams> warm;
    for (double b : config.grid) {
        FitConfig cfg = config.fit_config;
        cfg.beta = Beta(b);
        if (warm) {
            cfg.start = warm;
            cfg.multi_start = 1;
        }
        TuningRecord rec;
        rec.beta = b;
        try {
            FitResult fr = fit(plan, counts, cfg);
            if (!fr.converged && warm) {
                // retry cold with the full multi-start before giving up
                cfg = config.fit_config;
                cfg.beta = Beta(b);
                fr = fit(plan, counts, cfg);
            }
            rec.theta_hat = fr.theta_hat;
            rec.converged = fr.converged && fr.covariance_ok;
            if (rec.converged) {
                const ThetaParams pilot = config.self_pilot ? fr.theta_hat : out.pilot;
                rec.bias_term = (fr.theta_hat.as_vector() - pilot.as_vector()).squaredNorm();
                rec.variance_term = fr.covariance.trace();  // covariance is Sigma/K
                rec.mse_hat = rec.bias_term + rec.variance_term;
                warm = fr.theta_hat;
            }
        } catch (const std::exception&) {
            rec.converged = false;
        }
        out.records.push_back(rec);
    }

    bool found = false;
    double best_mse = 0.0;
    for (const auto& rec : out.records) {
        if (!rec.converged) continue;
        // strict improvement only: ties resolve toward the smaller beta
        if (!found || rec.mse_hat < best_mse) {
            found = true;
            best_mse = rec.mse_hat;
            out.best_beta = rec.beta;
            out.best_theta = rec.theta_hat;
        }
    }
    if (!found) throw std::runtime_error("no tuning grid point converged");
    return out;
}

}  // namespace oneshot
