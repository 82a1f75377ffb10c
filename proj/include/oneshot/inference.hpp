#pragma once

#include "oneshot/estimation.hpp"

#include <functional>
#include <map>

namespace oneshot {

/// Linear null hypothesis m(theta) = L * theta - c = 0_r.
struct LinearConstraint {
    Eigen::MatrixXd matrix_l;  // r x 4
    Eigen::VectorXd offset_c;  // r

    void validate() const;
    int rank() const { return static_cast<int>(matrix_l.rows()); }
};

/// Extension point for general constraints: m(theta) plus an optional
/// Jacobian d m / d theta^T (r x 4). Missing Jacobians fall back to central
/// finite differences with relative step 1e-6.
struct ConstraintFunction {
    std::function<Eigen::VectorXd(const Vec4&)> m;
    std::function<Eigen::MatrixXd(const Vec4&)> jacobian;  // may be empty

    Eigen::VectorXd value(const Vec4& theta) const;
    Eigen::MatrixXd jacobian_at(const Vec4& theta) const;
    static ConstraintFunction from_linear(const LinearConstraint& lin);
};

struct WaldResult {
    double statistic = 0.0;
    int df = 0;
    double p_value = 1.0;
    std::map<double, bool> reject_at;
};

struct PowerResult {
    double approx_power = 0.0;
    double ell_value = 0.0;
    double sigma_w = 0.0;
};

struct SampleSizeResult {
    long k_total = 0;
    std::vector<long> per_condition;
    PowerResult power_at_k;
};

WaldResult wald_test(const FitResult& fit, const TestPlan& plan,
                     const ConstraintFunction& constraint, double alpha);
WaldResult wald_test(const FitResult& fit, const TestPlan& plan,
                     const LinearConstraint& constraint, double alpha);

/// Asymptotic power of the Wald-type test at alternative theta_star; the
/// total device count comes from the plan unless overridden.
PowerResult power_approx(const ThetaParams& theta_star, const TestPlan& plan,
                         const ConstraintFunction& constraint, Beta beta, double alpha,
                         std::optional<double> k_override = std::nullopt);
PowerResult power_approx(const ThetaParams& theta_star, const TestPlan& plan,
                         const LinearConstraint& constraint, Beta beta, double alpha,
                         std::optional<double> k_override = std::nullopt);

/// Smallest total device count attaining the target power, allocated across
/// conditions by the plan's relative weights.
SampleSizeResult required_sample_size(const ThetaParams& theta_star, const TestPlan& plan_shape,
                                      const ConstraintFunction& constraint, Beta beta,
                                      double alpha, double target_power);
SampleSizeResult required_sample_size(const ThetaParams& theta_star, const TestPlan& plan_shape,
                                      const LinearConstraint& constraint, Beta beta, double alpha,
                                      double target_power);

}  // namespace oneshot
