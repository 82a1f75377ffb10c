#include "oneshot/inference.hpp"

#include "oneshot/special_functions.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace oneshot {

namespace {

constexpr double kConditionLimit = 1e12;

// Solve Q = M^T Sigma M robustly, rejecting ill-conditioned quadratic forms.
Eigen::MatrixXd inverse_checked(const Eigen::MatrixXd& q, const char* what) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q);
    if (es.info() != Eigen::Success)
        throw std::runtime_error(std::string(what) + ": eigendecomposition failed");
    const double emax = es.eigenvalues().cwiseAbs().maxCoeff();
    const double emin = es.eigenvalues().cwiseAbs().minCoeff();
    if (!(emin > 0.0) || emax / emin > kConditionLimit)
        throw std::runtime_error(std::string(what) + ": singular or ill-conditioned matrix");
    return q.inverse();
}

Mat4 sigma_beta(const TestPlan& plan, const ThetaParams& theta, Beta beta) {
    const SandwichParts parts = sandwich(plan, theta, beta);
    // K-free asymptotic covariance J^-1 K J^-1.
    return covariance(parts, 1);
}

}  // namespace

void LinearConstraint::validate() const {
    const auto r = matrix_l.rows();
    if (r < 1 || r > 4 || matrix_l.cols() != 4)
        throw std::invalid_argument("constraint matrix must be r x 4 with 1 <= r <= 4");
    if (offset_c.size() != r)
        throw std::invalid_argument("constraint offset length must match row count");
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(matrix_l);
    if (qr.rank() != r) throw std::invalid_argument("constraint matrix is rank deficient");
}

Eigen::VectorXd ConstraintFunction::value(const Vec4& theta) const { return m(theta); }

Eigen::MatrixXd ConstraintFunction::jacobian_at(const Vec4& theta) const {
    if (jacobian) return jacobian(theta);
    const Eigen::VectorXd m0 = m(theta);
    Eigen::MatrixXd jac(m0.size(), 4);
    for (int j = 0; j < 4; ++j) {
        const double h = 1e-6 * (1.0 + std::abs(theta[j]));
        Vec4 tp = theta, tm = theta;
        tp[j] += h;
        tm[j] -= h;
        jac.col(j) = (m(tp) - m(tm)) / (2.0 * h);
    }
    return jac;
}

ConstraintFunction ConstraintFunction::from_linear(const LinearConstraint& lin) {
    lin.validate();
    ConstraintFunction fn;
    const Eigen::MatrixXd l = lin.matrix_l;
    const Eigen::VectorXd c = lin.offset_c;
    fn.m = [l, c](const Vec4& theta) -> Eigen::VectorXd { return l * theta - c; };
    fn.jacobian = [l](const Vec4&) -> Eigen::MatrixXd { return l; };
    return fn;
}

WaldResult wald_test(const FitResult& fit, const TestPlan& plan,
                     const ConstraintFunction& constraint, double alpha) {
    if (!fit.converged) throw std::invalid_argument("wald_test requires a converged fit");
    if (!fit.covariance_ok) throw std::runtime_error("fit carries no usable covariance");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("alpha must be in (0,1)");
    const Vec4 theta = fit.theta_hat.as_vector();
    const Eigen::VectorXd m = constraint.value(theta);
    const Eigen::MatrixXd jac = constraint.jacobian_at(theta);  // r x 4
    const int r = static_cast<int>(m.size());
    if (r < 1 || r > 4) throw std::invalid_argument("constraint dimension must be in [1,4]");

    // fit.covariance is Sigma_beta / K, so the K factor cancels here.
    const Eigen::MatrixXd q = jac * fit.covariance * jac.transpose();
    const Eigen::MatrixXd qinv = inverse_checked(q, "wald_test");
    WaldResult out;
    out.statistic = (m.transpose() * qinv * m)(0, 0);
    out.df = r;
    out.p_value = chi2_sf(out.statistic, r);
    for (double level : {0.01, 0.05, 0.10}) out.reject_at[level] = out.p_value < level;
    out.reject_at[alpha] = out.statistic > chi2_quantile_upper(alpha, r);
    return out;
}

WaldResult wald_test(const FitResult& fit, const TestPlan& plan,
                     const LinearConstraint& constraint, double alpha) {
    return wald_test(fit, plan, ConstraintFunction::from_linear(constraint), alpha);
}

PowerResult power_approx(const ThetaParams& theta_star, const TestPlan& plan,
                         const ConstraintFunction& constraint, Beta beta, double alpha,
                         std::optional<double> k_override) {
    theta_star.validate();
    const double k_total =
        k_override ? *k_override : static_cast<double>(plan.total_devices());
    if (!(k_total > 0.0)) throw std::invalid_argument("total device count must be positive");

    const Vec4 theta = theta_star.as_vector();
    const Mat4 sigma = sigma_beta(plan, theta_star, beta);
    const Eigen::VectorXd m = constraint.value(theta);
    const Eigen::MatrixXd jac = constraint.jacobian_at(theta);
    const int r = static_cast<int>(m.size());

    const Eigen::MatrixXd q = jac * sigma * jac.transpose();
    const Eigen::MatrixXd qinv = inverse_checked(q, "power_approx");
    PowerResult out;
    out.ell_value = (m.transpose() * qinv * m)(0, 0);

    const Eigen::VectorXd dl = 2.0 * jac.transpose() * qinv * m;  // d ell / d theta
    const double sigma2 = dl.transpose() * sigma * dl;
    if (!(out.ell_value > 1e-14) || !(sigma2 > 1e-20))
        throw std::runtime_error("degenerate alternative: theta_star lies on the null manifold");
    out.sigma_w = std::sqrt(sigma2);

    const double crit = chi2_quantile_upper(alpha, r);
    const double z = (crit / std::sqrt(k_total) - std::sqrt(k_total) * out.ell_value) /
                     out.sigma_w;
    out.approx_power = 1.0 - normal_cdf(z);
    return out;
}

PowerResult power_approx(const ThetaParams& theta_star, const TestPlan& plan,
                         const LinearConstraint& constraint, Beta beta, double alpha,
                         std::optional<double> k_override) {
    return power_approx(theta_star, plan, ConstraintFunction::from_linear(constraint), beta,
                        alpha, k_override);
}

SampleSizeResult required_sample_size(const ThetaParams& theta_star, const TestPlan& plan_shape,
                                      const ConstraintFunction& constraint, Beta beta,
                                      double alpha, double target_power) {
    if (!(target_power > 0.0 && target_power < 1.0))
        throw std::invalid_argument("target power must be in (0,1)");
    // power_approx validates the alternative and produces ell and sigma_w,
    // both K-free.
    const PowerResult at_plan = power_approx(theta_star, plan_shape, constraint, beta, alpha,
                                             static_cast<double>(plan_shape.total_devices()));
    const Vec4 theta = theta_star.as_vector();
    const int r = static_cast<int>(constraint.value(theta).size());
    const double crit = chi2_quantile_upper(alpha, r);
    const double zq = normal_quantile(1.0 - target_power);
    const double a_hat = at_plan.sigma_w * at_plan.sigma_w * zq * zq;
    const double b_hat = 2.0 * at_plan.ell_value * crit;
    const double k_star =
        (a_hat + b_hat + std::sqrt(a_hat * (a_hat + 2.0 * b_hat))) /
        (2.0 * at_plan.ell_value * at_plan.ell_value);

    SampleSizeResult out;
    out.k_total = static_cast<long>(std::floor(k_star)) + 1;

    // Allocate per condition by relative weight, rounding to preserve the total
    // (largest remainder).
    const double plan_total = static_cast<double>(plan_shape.total_devices());
    std::vector<double> exact(plan_shape.size());
    std::vector<long> alloc(plan_shape.size());
    long assigned = 0;
    for (std::size_t i = 0; i < plan_shape.size(); ++i) {
        exact[i] = static_cast<double>(out.k_total) *
                   static_cast<double>(plan_shape.conditions[i].devices) / plan_total;
        alloc[i] = static_cast<long>(std::floor(exact[i]));
        assigned += alloc[i];
    }
    while (assigned < out.k_total) {
        std::size_t best = 0;
        double best_frac = -1.0;
        for (std::size_t i = 0; i < exact.size(); ++i) {
            const double frac = exact[i] - static_cast<double>(alloc[i]);
            if (frac > best_frac) {
                best_frac = frac;
                best = i;
            }
        }
        ++alloc[best];
        ++assigned;
    }
    out.per_condition = std::move(alloc);
    out.power_at_k = power_approx(theta_star, plan_shape, constraint, beta, alpha,
                                  static_cast<double>(out.k_total));
    return out;
}

SampleSizeResult required_sample_size(const ThetaParams& theta_star, const TestPlan& plan_shape,
                                      const LinearConstraint& constraint, Beta beta, double alpha,
                                      double target_power) {
    return required_sample_size(theta_star, plan_shape,
                                ConstraintFunction::from_linear(constraint), beta, alpha,
                                target_power);
}

}  // namespace oneshot
