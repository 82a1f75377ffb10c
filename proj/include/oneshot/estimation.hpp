#pragma once

#include "oneshot/divergence.hpp"

#include <optional>

namespace oneshot {

struct FitConfig {
    Beta beta;
    std::optional<ThetaParams> start;
    int max_iterations = 500;
    double gradient_tolerance = 1e-8;  // in eta = log(theta) space
    int multi_start = 5;
    std::uint64_t restart_seed = 0x005e'ed00;
};

/// One local optimum found during the multi-start search.
struct LocalOptimum {
    ThetaParams theta;
    double objective = 0.0;
    double gradient_norm = 0.0;
    bool converged = false;
};

struct FitResult {
    ThetaParams theta_hat;
    Beta beta;
    double objective = 0.0;
    double gradient_norm = 0.0;
    bool converged = false;
    bool boundary_hit = false;
    int iterations = 0;
    Mat4 covariance = Mat4::Zero();  // Sigma_beta(theta_hat) / K
    bool covariance_ok = false;
    std::vector<LocalOptimum> local_optima;
};

/// J_beta, K_beta and the per-condition xi vectors of the asymptotic
/// sandwich covariance.
struct SandwichParts {
    Mat4 j_matrix = Mat4::Zero();
    Mat4 k_matrix = Mat4::Zero();
    std::vector<Vec4> xi_vectors;
};

/// Minimize the weighted divergence over theta (in log space) and attach the
/// sandwich covariance.
FitResult fit(const TestPlan& plan, const CountsTable& counts, const FitConfig& config);

SandwichParts sandwich(const TestPlan& plan, const ThetaParams& theta, Beta beta);

/// Finite-sample covariance J^-1 K J^-1 / total_devices. Throws when J is
/// ill-conditioned (condition number above 1e12).
Mat4 covariance(const SandwichParts& parts, long total_devices);

/// Default starting point used when FitConfig.start is not given.
ThetaParams default_start(const TestPlan& plan, const CountsTable& counts);

}  // namespace oneshot
