#pragma once

#include "oneshot/model.hpp"

namespace oneshot {

/// Observed counts per cell. File ingestion enforces integer counts; the
/// in-process type allows fractional (expected) counts for exact model-point
/// work.
struct CountsRow {
    double n_survive = 0.0;
    double n_cause1 = 0.0;
    double n_cause2 = 0.0;

    double total() const { return n_survive + n_cause1 + n_cause2; }
    double operator[](int r) const {
        return r == 0 ? n_survive : (r == 1 ? n_cause1 : n_cause2);
    }
};

struct CountsTable {
    std::vector<CountsRow> rows;

    std::size_t size() const { return rows.size(); }
    void validate_against(const TestPlan& plan) const;
};

/// DPD tuning parameter; value 0 selects the KL/MLE branch.
struct Beta {
    double value = 0.0;

    Beta() = default;
    explicit Beta(double v) : value(v) {
        if (v < 0.0) throw std::invalid_argument("beta must be nonnegative");
    }
    bool is_kl() const { return value == 0.0; }
};

/// Weighted Kullback-Leibler divergence between observed proportions and
/// model cell probabilities. Returns +infinity when some cell has positive
/// observed count but zero model probability.
double weighted_kl(const TestPlan& plan, const CountsTable& counts, const ThetaParams& theta);

/// Weighted DPD objective with the theta-free term dropped; requires beta > 0.
double weighted_dpd(const TestPlan& plan, const CountsTable& counts, const ThetaParams& theta,
                    Beta beta);

/// Objective value for any beta >= 0 (dispatches between the two above).
double objective(const TestPlan& plan, const CountsTable& counts, const ThetaParams& theta,
                 Beta beta);

/// Analytic gradient of the objective with respect to theta.
Vec4 dpd_gradient(const TestPlan& plan, const CountsTable& counts, const ThetaParams& theta,
                  Beta beta);

/// Estimating-equation left-hand side built from the per-condition deviation
/// scalars, with the cause-share direction vector carried on the second term.
/// Proportional to dpd_gradient by K/(beta+1); kept as an independent
/// diagnostic route.
Vec4 estimating_equation_residual(const TestPlan& plan, const CountsTable& counts,
                                  const ThetaParams& theta, Beta beta);

/// Mean absolute discrepancy between observed and fitted cell rates.
double estimated_error(const TestPlan& plan, const CountsTable& counts, const ThetaParams& theta);

}  // namespace oneshot
