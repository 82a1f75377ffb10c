#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

namespace oneshot {

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

/// One test condition: devices inspected once at `inspection_time` under
/// stress covariate `stress`.
struct TestCondition {
    double inspection_time = 0.0;
    double stress = 0.0;
    long devices = 0;
};

struct TestPlan {
    std::vector<TestCondition> conditions;

    std::size_t size() const { return conditions.size(); }
    long total_devices() const;
    void validate() const;
};

/// Rate-model parameters: lambda_r(x) = theta_r0 * exp(theta_r1 * x), r = 1,2.
struct ThetaParams {
    double theta10 = 0.0;
    double theta11 = 0.0;
    double theta20 = 0.0;
    double theta21 = 0.0;

    Vec4 as_vector() const { return Vec4(theta10, theta11, theta20, theta21); }
    static ThetaParams from_vector(const Vec4& v) { return {v[0], v[1], v[2], v[3]}; }
    void validate() const;
};

/// Cell probabilities (survive, fail by cause 1, fail by cause 2); sum to 1.
struct CellProbs {
    double p_survive = 0.0;
    double p_cause1 = 0.0;
    double p_cause2 = 0.0;

    double operator[](int r) const {
        return r == 0 ? p_survive : (r == 1 ? p_cause1 : p_cause2);
    }
};

/// Analytic derivatives of the three cell probabilities w.r.t. theta, plus
/// the direction vectors they are built from.
struct CellProbGradients {
    Vec4 d_survive;
    Vec4 d_cause1;
    Vec4 d_cause2;
    Vec4 l_vec;  // gradient of lambda1 + lambda2
    Vec4 r_vec;  // gradient of lambda1 / (lambda1 + lambda2)

    const Vec4& operator[](int r) const {
        return r == 0 ? d_survive : (r == 1 ? d_cause1 : d_cause2);
    }
};

struct FailureRates {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
};

/// Mean lifetimes and conditional cause shares at a given stress level.
struct LifetimeSummary {
    double e_overall = 0.0;
    double e_cause1 = 0.0;
    double e_cause2 = 0.0;
    double p_cause1 = 0.0;
    double p_cause2 = 0.0;
};

FailureRates failure_rates(const ThetaParams& theta, const TestCondition& cond);
CellProbs cell_probs(const ThetaParams& theta, const TestCondition& cond);
CellProbGradients cell_prob_gradients(const ThetaParams& theta, const TestCondition& cond);
LifetimeSummary quantities_of_interest(const ThetaParams& theta, double stress);

}  // namespace oneshot
