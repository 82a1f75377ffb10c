#include "oneshot/divergence.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace oneshot {

namespace {

// Floor applied to probabilities inside logarithms and negative powers only.
constexpr double kProbFloor = 1e-12;

double phat(const CountsRow& row, int r) {
    return static_cast<double>(row[r]) / static_cast<double>(row.total());
}

}  // namespace

void CountsTable::validate_against(const TestPlan& plan) const {
    if (rows.size() != plan.conditions.size())
        throw std::invalid_argument("counts table and test plan have different lengths");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (row.n_survive < 0 || row.n_cause1 < 0 || row.n_cause2 < 0)
            throw std::invalid_argument("negative count in row " + std::to_string(i));
        const double devices = static_cast<double>(plan.conditions[i].devices);
        if (std::abs(row.total() - devices) > 1e-9 * std::max(1.0, devices))
            throw std::invalid_argument("counts in row " + std::to_string(i) +
                                        " do not sum to the condition's device count");
    }
}

double weighted_kl(const TestPlan& plan, const CountsTable& counts, const ThetaParams& theta) {
    counts.validate_against(plan);
    const double total = static_cast<double>(plan.total_devices());
    double value = 0.0;
    for (std::size_t i = 0; i < plan.size(); ++i) {
        const auto& cond = plan.conditions[i];
        const auto& row = counts.rows[i];
        const CellProbs pi = cell_probs(theta, cond);
        const double wi = static_cast<double>(cond.devices) / total;
        for (int r = 0; r < 3; ++r) {
            if (row[r] == 0) continue;  // 0*log(0) convention
            if (pi[r] == 0.0) return std::numeric_limits<double>::infinity();
            const double pr = phat(row, r);
            value += wi * pr * std::log(pr / std::max(pi[r], kProbFloor));
        }
    }
    return value;
}

double weighted_dpd(const TestPlan& plan, const CountsTable& counts, const ThetaParams& theta,
                    Beta beta) {
    if (!(beta.value > 0.0)) throw std::invalid_argument("weighted_dpd requires beta > 0");
    counts.validate_against(plan);
    const double b = beta.value;
    const double total = static_cast<double>(plan.total_devices());
    double value = 0.0;
    for (std::size_t i = 0; i < plan.size(); ++i) {
        const auto& cond = plan.conditions[i];
        const auto& row = counts.rows[i];
        const CellProbs pi = cell_probs(theta, cond);
        const double wi = static_cast<double>(cond.devices) / total;
        double power_sum = 0.0;
        double cross_sum = 0.0;
        for (int r = 0; r < 3; ++r) {
            power_sum += std::pow(pi[r], b + 1.0);
            cross_sum += phat(row, r) * std::pow(pi[r], b);
        }
        value += wi * (power_sum - (b + 1.0) / b * cross_sum);
    }
    return value;
}

double objective(const TestPlan& plan, const CountsTable& counts, const ThetaParams& theta,
                 Beta beta) {
    return beta.is_kl() ? weighted_kl(plan, counts, theta)
                        : weighted_dpd(plan, counts, theta, beta);
}

Vec4 dpd_gradient(const TestPlan& plan, const CountsTable& counts, const ThetaParams& theta,
                  Beta beta) {
    counts.validate_against(plan);
    const double b = beta.value;
    const double total = static_cast<double>(plan.total_devices());
    Vec4 grad = Vec4::Zero();
    for (std::size_t i = 0; i < plan.size(); ++i) {
        const auto& cond = plan.conditions[i];
        const auto& row = counts.rows[i];
        const CellProbs pi = cell_probs(theta, cond);
        const CellProbGradients dpi = cell_prob_gradients(theta, cond);
        const double wi = static_cast<double>(cond.devices) / total;
        for (int r = 0; r < 3; ++r) {
            const double pr = phat(row, r);
            if (beta.is_kl()) {
                if (row[r] == 0) continue;
                if (pi[r] == 0.0) return Vec4::Constant(std::numeric_limits<double>::infinity());
                grad -= wi * pr / std::max(pi[r], kProbFloor) * dpi[r];
            } else {
                const double weight = std::pow(std::max(pi[r], kProbFloor), b - 1.0);
                grad += wi * (b + 1.0) * weight * (pi[r] - pr) * dpi[r];
            }
        }
    }
    return grad;
}

Vec4 estimating_equation_residual(const TestPlan& plan, const CountsTable& counts,
                                  const ThetaParams& theta, Beta beta) {
    counts.validate_against(plan);
    const double b = beta.value;
    Vec4 residual = Vec4::Zero();
    for (std::size_t i = 0; i < plan.size(); ++i) {
        const auto& cond = plan.conditions[i];
        const auto& row = counts.rows[i];
        const auto [l1, l2] = failure_rates(theta, cond);
        const double s = std::max(l1 + l2, 1e-300);
        const CellProbs pi = cell_probs(theta, cond);
        const CellProbGradients g = cell_prob_gradients(theta, cond);
        const double ki = static_cast<double>(cond.devices);
        const double fail = 1.0 - pi.p_survive;
        const double p1 = phat(row, 1);
        const double p2 = phat(row, 2);
        const double dev1 = l1 / s * fail - p1;
        const double dev2 = l2 / s * fail - p2;

        const double gamma =
            (std::pow(l1, b) * dev1 + std::pow(l2, b) * dev2) / std::pow(s, b);
        const double gamma_star =
            (std::pow(l1, b - 1.0) * dev1 - std::pow(l2, b - 1.0) * dev2) /
            std::pow(s, b - 1.0);

        const double pi0 = pi.p_survive;
        const double p0 = phat(row, 0);
        const double pow_pi0 = std::pow(std::max(pi0, kProbFloor), b - 1.0);
        const double pow_fail_m1 = std::pow(std::max(fail, kProbFloor), b - 1.0);
        const double pow_fail = std::pow(std::max(fail, kProbFloor), b);

        residual += ki * (-pi0 * cond.inspection_time *
                              (pow_pi0 * (pi0 - p0) - pow_fail_m1 * gamma) * g.l_vec +
                          pow_fail * gamma_star * g.r_vec);
    }
    return residual;
}

double estimated_error(const TestPlan& plan, const CountsTable& counts,
                       const ThetaParams& theta) {
    counts.validate_against(plan);
    double sum = 0.0;
    for (std::size_t i = 0; i < plan.size(); ++i) {
        const auto& cond = plan.conditions[i];
        const auto& row = counts.rows[i];
        const CellProbs pi = cell_probs(theta, cond);
        const double ki = static_cast<double>(cond.devices);
        for (int r = 0; r < 3; ++r)
            sum += std::abs(static_cast<double>(row[r]) - ki * pi[r]) / ki;
    }
    return sum / (3.0 * static_cast<double>(plan.size()));
}

}  // namespace oneshot
