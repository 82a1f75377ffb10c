#include "oneshot/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace oneshot {

namespace {

constexpr double kEtaLo = -30.0;
constexpr double kEtaHi = 10.0;

Vec4 clamp_eta(Vec4 eta) {
    for (int j = 0; j < 4; ++j) eta[j] = std::clamp(eta[j], kEtaLo, kEtaHi);
    return eta;
}

bool on_boundary(const Vec4& eta) {
    for (int j = 0; j < 4; ++j)
        if (eta[j] <= kEtaLo + 1e-9 || eta[j] >= kEtaHi - 1e-9) return true;
    return false;
}

ThetaParams theta_of(const Vec4& eta) {
    return ThetaParams{std::exp(eta[0]), std::exp(eta[1]), std::exp(eta[2]), std::exp(eta[3])};
}

struct EtaObjective {
    const TestPlan& plan;
    const CountsTable& counts;
    Beta beta;

    double value(const Vec4& eta) const {
        // rate overflow inside the box is treated as an infinite objective so
        // the line search backs away from it
        try {
            return objective(plan, counts, theta_of(clamp_eta(eta)), beta);
        } catch (const std::domain_error&) {
            return std::numeric_limits<double>::infinity();
        }
    }
    // Chain rule: d/d eta_j = theta_j * d/d theta_j.
    Vec4 gradient(const Vec4& eta) const {
        const Vec4 ec = clamp_eta(eta);
        const ThetaParams th = theta_of(ec);
        const Vec4 g = dpd_gradient(plan, counts, th, beta);
        return g.cwiseProduct(th.as_vector());
    }
};

struct LocalFit {
    Vec4 eta;
    double objective = std::numeric_limits<double>::infinity();
    double gradient_norm = std::numeric_limits<double>::infinity();
    bool converged = false;
    int iterations = 0;
};

// BFGS with Armijo backtracking in the clamped eta box. The inverse-Hessian
// approximation is reset whenever a step lands on the box boundary.
LocalFit minimize_local(const EtaObjective& f, Vec4 eta0, int max_iterations, double tol) {
    LocalFit out;
    Vec4 eta = clamp_eta(eta0);
    double fval = f.value(eta);
    if (!std::isfinite(fval)) {
        out.eta = eta;
        out.objective = fval;
        return out;
    }
    Vec4 grad = f.gradient(eta);
    Mat4 hinv = Mat4::Identity();
    int iter = 0;
    for (; iter < max_iterations; ++iter) {
        if (grad.norm() <= tol) break;
        Vec4 dir = -hinv * grad;
        if (dir.dot(grad) >= 0.0) {
            hinv = Mat4::Identity();
            dir = -grad;
        }
        double step = 1.0;
        const double slope = dir.dot(grad);
        Vec4 eta_new;
        double f_new = fval;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            eta_new = clamp_eta(eta + step * dir);
            f_new = f.value(eta_new);
            if (std::isfinite(f_new) && f_new <= fval + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;
        const Vec4 grad_new = f.gradient(eta_new);
        const Vec4 s = eta_new - eta;
        const Vec4 y = grad_new - grad;
        const double sy = s.dot(y);
        if (on_boundary(eta_new) || sy <= 1e-14) {
            hinv = Mat4::Identity();
        } else {
            const double rho = 1.0 / sy;
            const Mat4 left = Mat4::Identity() - rho * s * y.transpose();
            hinv = left * hinv * left.transpose() + rho * s * s.transpose();
        }
        eta = eta_new;
        fval = f_new;
        grad = grad_new;
        if (s.norm() < 1e-15) break;
    }

    // Newton polish on the analytic gradient (finite-difference Hessian of the
    // gradient); tightens stationarity well past the BFGS tolerance.
    for (int k = 0; k < 8 && !on_boundary(eta); ++k) {
        grad = f.gradient(eta);
        if (grad.norm() < 1e-13) break;
        Mat4 hess;
        const double h = 1e-7;
        for (int j = 0; j < 4; ++j) {
            Vec4 ep = eta, em = eta;
            ep[j] += h;
            em[j] -= h;
            hess.col(j) = (f.gradient(ep) - f.gradient(em)) / (2.0 * h);
        }
        hess = 0.5 * (hess + hess.transpose()).eval();
        Eigen::LDLT<Mat4> ldlt(hess);
        if (ldlt.info() != Eigen::Success) break;
        const Vec4 delta = ldlt.solve(grad);
        if (!delta.allFinite() || delta.norm() > 1.0) break;
        const Vec4 eta_try = clamp_eta(eta - delta);
        const double f_try = f.value(eta_try);
        if (!std::isfinite(f_try) || f_try > fval + 1e-10) break;
        eta = eta_try;
        fval = f_try;
    }

    grad = f.gradient(eta);
    out.eta = eta;
    out.objective = f.value(eta);
    out.gradient_norm = grad.norm();
    out.converged = out.gradient_norm <= tol;
    out.iterations = iter;
    return out;
}

bool lexicographically_smaller(const ThetaParams& a, const ThetaParams& b) {
    const Vec4 va = a.as_vector(), vb = b.as_vector();
    for (int j = 0; j < 4; ++j) {
        if (va[j] < vb[j]) return true;
        if (va[j] > vb[j]) return false;
    }
    return false;
}

// Candidate ordering per the fit contract: objective, then gradient norm,
// then lexicographic theta.
bool better_candidate(const LocalFit& a, const LocalFit& b) {
    if (!std::isfinite(b.objective)) return std::isfinite(a.objective);
    if (!std::isfinite(a.objective)) return false;
    if (a.objective < b.objective - 1e-12) return true;
    if (a.objective > b.objective + 1e-12) return false;
    if (a.gradient_norm < b.gradient_norm) return true;
    if (a.gradient_norm > b.gradient_norm) return false;
    return lexicographically_smaller(theta_of(a.eta), theta_of(b.eta));
}

}  // namespace

ThetaParams default_start(const TestPlan& plan, const CountsTable& counts) {
    // Regress -log(survival proportion) / IT on the stress via a log-linear
    // fit of the total rate, then split the baseline by observed cause shares.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (std::size_t i = 0; i < plan.size(); ++i) {
        const auto& cond = plan.conditions[i];
        const auto& row = counts.rows[i];
        const double ki = static_cast<double>(cond.devices);
        const double p0 = std::max(static_cast<double>(row.n_survive) / ki, 1.0 / (2.0 * ki));
        const double rate = -std::log(std::min(p0, 1.0 - 1.0 / (2.0 * ki))) / cond.inspection_time;
        if (!(rate > 0.0) || !std::isfinite(rate)) continue;
        const double y = std::log(rate);
        sx += cond.stress;
        sy += y;
        sxx += cond.stress * cond.stress;
        sxy += cond.stress * y;
        ++m;
    }
    ThetaParams fallback{0.001, 0.1, 0.001, 0.1};
    if (m < 2) return fallback;
    const double denom = m * sxx - sx * sx;
    if (std::abs(denom) < 1e-12) return fallback;
    double slope = (m * sxy - sx * sy) / denom;
    double intercept = (sy - slope * sx) / m;
    slope = std::clamp(slope, 1e-3, 20.0);
    const double base = std::exp(std::clamp(intercept, -25.0, 5.0));

    double fail1 = 0, fail2 = 0;
    for (const auto& row : counts.rows) {
        fail1 += row.n_cause1;
        fail2 += row.n_cause2;
    }
    double share1 = 0.5;
    if (fail1 + fail2 > 0) share1 = fail1 / (fail1 + fail2);
    share1 = std::clamp(share1, 0.05, 0.95);

    ThetaParams start{base * share1, slope, base * (1.0 - share1), slope};
    const Vec4 v = start.as_vector();
    if (!v.allFinite() || (v.array() <= 0.0).any()) return fallback;
    return start;
}

FitResult fit(const TestPlan& plan, const CountsTable& counts, const FitConfig& config) {
    plan.validate();
    counts.validate_against(plan);
    if (config.max_iterations < 1 || config.multi_start < 1 ||
        !(config.gradient_tolerance > 0.0))
        throw std::invalid_argument("invalid fit configuration");

    int informative_cells = 0;
    for (const auto& row : counts.rows)
        for (int r = 0; r < 3; ++r)
            if (row[r] > 0) ++informative_cells;
    if (informative_cells < 4)
        throw std::invalid_argument("model unidentified: fewer than 4 informative cells");

    const EtaObjective f{plan, counts, config.beta};
    const ThetaParams start = config.start ? *config.start : default_start(plan, counts);
    start.validate();
    const Vec4 eta0 = clamp_eta(start.as_vector().array().log().matrix());

    std::mt19937_64 rng(config.restart_seed);
    auto perturb = [&rng](const Vec4& eta) {
        Vec4 out = eta;
        for (int j = 0; j < 4; ++j) {
            // uniform in [-1, 1]
            const double u = static_cast<double>(rng() >> 11) * 0x1p-53;
            out[j] += 2.0 * u - 1.0;
        }
        return clamp_eta(out);
    };

    FitResult result;
    result.beta = config.beta;
    LocalFit best;
    bool any_finite = false;
    for (int k = 0; k < config.multi_start; ++k) {
        const Vec4 e0 = (k == 0) ? eta0 : perturb(eta0);
        LocalFit cand = minimize_local(f, e0, config.max_iterations, config.gradient_tolerance);
        if (std::isfinite(cand.objective)) any_finite = true;
        result.local_optima.push_back(LocalOptimum{theta_of(cand.eta), cand.objective,
                                                   cand.gradient_norm, cand.converged});
        if (k == 0 || better_candidate(cand, best)) best = cand;
    }
    if (!any_finite)
        throw std::runtime_error("objective infinite at every starting point");

    result.theta_hat = theta_of(best.eta);
    result.objective = best.objective;
    result.gradient_norm = best.gradient_norm;
    result.converged = best.converged;
    result.boundary_hit = on_boundary(best.eta);
    result.iterations = best.iterations;
    try {
        result.covariance = covariance(sandwich(plan, result.theta_hat, config.beta),
                                       plan.total_devices());
        result.covariance_ok = true;
    } catch (const std::exception&) {
        result.covariance = Mat4::Constant(std::numeric_limits<double>::quiet_NaN());
        result.covariance_ok = false;
    }
    return result;
}

SandwichParts sandwich(const TestPlan& plan, const ThetaParams& theta, Beta beta) {
    plan.validate();
    theta.validate();
    const double b = beta.value;
    const double total = static_cast<double>(plan.total_devices());
    SandwichParts parts;
    parts.xi_vectors.reserve(plan.size());
    for (std::size_t i = 0; i < plan.size(); ++i) {
        const auto& cond = plan.conditions[i];
        const CellProbs pi = cell_probs(theta, cond);
        const CellProbGradients dpi = cell_prob_gradients(theta, cond);
        const double wi = static_cast<double>(cond.devices) / total;
        Vec4 xi = Vec4::Zero();
        for (int r = 0; r < 3; ++r) {
            if (pi[r] == 0.0 && b < 1.0)
                throw std::runtime_error("singular cell probability in condition " +
                                         std::to_string(i) + ", cause " + std::to_string(r));
            const Mat4 outer = dpi[r] * dpi[r].transpose();
            parts.j_matrix += wi * outer * std::pow(pi[r], b - 1.0);
            parts.k_matrix += wi * outer * std::pow(pi[r], 2.0 * b - 1.0);
            xi += dpi[r] * std::pow(pi[r], b);
        }
        parts.k_matrix -= wi * xi * xi.transpose();
        parts.xi_vectors.push_back(xi);
    }
    parts.j_matrix = 0.5 * (parts.j_matrix + parts.j_matrix.transpose()).eval();
    parts.k_matrix = 0.5 * (parts.k_matrix + parts.k_matrix.transpose()).eval();
    return parts;
}

Mat4 covariance(const SandwichParts& parts, long total_devices) {
    if (total_devices < 1) throw std::invalid_argument("total device count must be positive");
    Eigen::SelfAdjointEigenSolver<Mat4> es(parts.j_matrix);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("eigendecomposition of J failed");
    const double emax = es.eigenvalues().cwiseAbs().maxCoeff();
    const double emin = es.eigenvalues().cwiseAbs().minCoeff();
    const double cond_number = emin > 0.0 ? emax / emin : std::numeric_limits<double>::infinity();
    if (!(cond_number <= 1e12))
        throw std::runtime_error("J matrix ill-conditioned (condition number " +
                                 std::to_string(cond_number) + ")");
    const Mat4 jinv = parts.j_matrix.inverse();
    Mat4 sigma = jinv * parts.k_matrix * jinv / static_cast<double>(total_devices);
    return 0.5 * (sigma + sigma.transpose()).eval();
}

}  // namespace oneshot
