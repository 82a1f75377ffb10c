#include "oneshot/model.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace oneshot {

long TestPlan::total_devices() const {
    long total = 0;
    for (const auto& c : conditions) total += c.devices;
    return total;
}

void TestPlan::validate() const {
    if (conditions.empty()) throw std::invalid_argument("test plan has no conditions");
    for (std::size_t i = 0; i < conditions.size(); ++i) {
        const auto& c = conditions[i];
        if (!(c.inspection_time > 0.0))
            throw std::invalid_argument("condition " + std::to_string(i) +
                                        ": inspection time must be positive");
        if (c.devices < 1)
            throw std::invalid_argument("condition " + std::to_string(i) +
                                        ": device count must be at least 1");
    }
}

void ThetaParams::validate() const {
    if (!(theta10 > 0.0 && theta11 > 0.0 && theta20 > 0.0 && theta21 > 0.0))
        throw std::invalid_argument("all theta components must be strictly positive");
}

FailureRates failure_rates(const ThetaParams& theta, const TestCondition& cond) {
    const double e1 = std::exp(theta.theta11 * cond.stress);
    const double e2 = std::exp(theta.theta21 * cond.stress);
    const double l1 = theta.theta10 * e1;
    const double l2 = theta.theta20 * e2;
    if (!std::isfinite(l1))
        throw std::domain_error("failure rate overflow for cause 1 (exp(theta11*x))");
    if (!std::isfinite(l2))
        throw std::domain_error("failure rate overflow for cause 2 (exp(theta21*x))");
    return {l1, l2};
}

namespace {

// Total-rate sums below 1e-300 are clamped so the cause shares stay defined;
// (1 - pi0) vanishes in that limit anyway.
constexpr double kRateFloor = 1e-300;

}  // namespace

CellProbs cell_probs(const ThetaParams& theta, const TestCondition& cond) {
    const auto [l1, l2] = failure_rates(theta, cond);
    const double s = std::max(l1 + l2, kRateFloor);
    const double expo = s * cond.inspection_time;
    const double pi0 = expo > 700.0 ? 0.0 : std::exp(-expo);
    const double fail = 1.0 - pi0;
    return {pi0, l1 / s * fail, l2 / s * fail};
}

CellProbGradients cell_prob_gradients(const ThetaParams& theta, const TestCondition& cond) {
    const auto [l1, l2] = failure_rates(theta, cond);
    const double s = std::max(l1 + l2, kRateFloor);
    const double x = cond.stress;
    const double it = cond.inspection_time;
    const double expo = s * it;
    const double pi0 = expo > 700.0 ? 0.0 : std::exp(-expo);

    CellProbGradients g;
    g.l_vec = Vec4(l1 / theta.theta10, l1 * x, l2 / theta.theta20, l2 * x);
    g.r_vec = (l1 * l2 / (s * s)) * Vec4(1.0 / theta.theta10, x, -1.0 / theta.theta20, -x);
    g.d_survive = -it * pi0 * g.l_vec;
    g.d_cause1 = (l1 / s) * it * pi0 * g.l_vec + (1.0 - pi0) * g.r_vec;
    g.d_cause2 = (l2 / s) * it * pi0 * g.l_vec - (1.0 - pi0) * g.r_vec;
    return g;
}

LifetimeSummary quantities_of_interest(const ThetaParams& theta, double stress) {
    const auto [l1, l2] = failure_rates(theta, TestCondition{1.0, stress, 1});
    const double s = std::max(l1 + l2, kRateFloor);
    LifetimeSummary q;
    q.e_overall = 1.0 / s;
    q.e_cause1 = 1.0 / l1;
    q.e_cause2 = 1.0 / l2;
    q.p_cause1 = l1 / s;
    q.p_cause2 = l2 / s;
    return q;
}

}  // namespace oneshot
