// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Detail lines are indented beneath the owning criterion.

#include "oneshot/inference.hpp"
#include "oneshot/io.hpp"
#include "oneshot/presets.hpp"
#include "oneshot/tuning.hpp"

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <random>
#include <string>
#include <utility>
#include <vector>

using namespace oneshot;

namespace {

int g_failures = 0;
std::vector<std::string> g_details;

void detail(const char* fmt, ...) {
    char buf[512];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof(buf), fmt, args);
    va_end(args);
    g_details.emplace_back(buf);
}

void report(bool ok, const std::string& name) {
    std::printf("%s - %s\n", ok ? "PASS" : "FAIL", name.c_str());
    for (const auto& d : g_details) std::printf("       %s\n", d.c_str());
    g_details.clear();
    if (!ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Dataset bdc() { return load_dataset(std::string(ONESHOT_TEST_DATA_DIR) + "/bdc.csv"); }

FitResult fit_bdc(const Dataset& d, double beta) {
    FitConfig cfg;
    cfg.beta = Beta(beta);
    return fit(d.plan, d.counts, cfg);
}

bool within(double value, double target, double tol) {
    return std::abs(value - target) <= tol;
}

bool rel_within(double value, double target, double rel) {
    return std::abs(value - target) <= rel * std::abs(target);
}

// ---- criterion 1: BDC maximum likelihood point estimates -------------------

void criterion_mle_reproduction() {
    const Dataset d = bdc();
    const auto t0 = std::chrono::steady_clock::now();
    const FitResult r = fit_bdc(d, 0.0);
    const double elapsed = seconds_since(t0);
    const double err = estimated_error(d.plan, d.counts, r.theta_hat);

    struct Target {
        const char* name;
        double value;
        double printed;
        double tol;  // one unit in the last printed digit
    };
    const Target targets[] = {
        {"theta10", r.theta_hat.theta10, 0.00089, 0.00001},
        {"theta11", r.theta_hat.theta11, 1.3191, 0.0001},
        {"theta20", r.theta_hat.theta20, 0.00028, 0.00001},
        {"theta21", r.theta_hat.theta21, 2.493, 0.001},
    };
    bool ok = r.converged && elapsed <= 1.0;
    for (const auto& t : targets) {
        const bool hit = within(t.value, t.printed, t.tol);
        if (!hit)
            detail("%s = %.7g is outside %.5g +/- %.1g", t.name, t.value, t.printed, t.tol);
        ok = ok && hit;
    }
    const bool err_ok = within(err, 0.1051, 0.0005);
    if (!err_ok) detail("estimated error %.5f outside 0.1051 +/- 0.0005", err);
    ok = ok && err_ok;
    detail("objective %.10f, gradient norm %.2e, %.2f s", r.objective, r.gradient_norm, elapsed);
    report(ok, "BDC MLE reproduction at published precision");
}

// ---- criterion 2: the DPD estimate path against the published table --------

struct PathRow {
    double beta;
    double theta[4];
    double e1_w1, e1_w2, e_w1, e_w2, p1_w1, p1_w2;
};

void criterion_dpd_path() {
    const Dataset d = bdc();
    const PathRow rows[] = {
        {0.1, {0.00091, 1.3072, 0.00029, 2.465}, 297.876, 80.593, 146.984, 18.872, 0.4934, 0.2341},
        {0.2, {0.00094, 1.2844, 0.00031, 2.441}, 295.010, 81.658, 144.138, 18.869, 0.4885, 0.2310},
        {0.3, {0.00097, 1.2627, 0.00033, 2.408}, 291.902, 82.572, 140.528, 18.818, 0.4814, 0.2279},
        {0.5, {0.00104, 1.2150, 0.00036, 2.367}, 285.233, 84.626, 135.755, 18.859, 0.4759, 0.2228},
        {0.8, {0.00112, 1.1412, 0.00041, 2.313}, 284.037, 90.723, 130.889, 18.988, 0.4608, 0.2093},
        {1.0, {0.00263, 0.5514, 0.00030, 2.488}, 219.303, 126.339, 123.241, 19.715, 0.5619, 0.1560},
    };
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    for (const auto& row : rows) {
        const FitResult r = fit_bdc(d, row.beta);
        if (!r.converged) {
            detail("beta=%.1f did not converge", row.beta);
            ok = false;
            continue;
        }
        const Vec4 est = r.theta_hat.as_vector();
        bool components = true;
        for (int k = 0; k < 4; ++k) components = components && rel_within(est[k], row.theta[k], 0.02);
        const LifetimeSummary q1 = quantities_of_interest(r.theta_hat, 1.0);
        const LifetimeSummary q2 = quantities_of_interest(r.theta_hat, 2.0);
        const bool derived = rel_within(q1.e_cause1, row.e1_w1, 0.02) &&
                             rel_within(q2.e_cause1, row.e1_w2, 0.02) &&
                             rel_within(q1.e_overall, row.e_w1, 0.02) &&
                             rel_within(q2.e_overall, row.e_w2, 0.02) &&
                             rel_within(q1.p_cause1, row.p1_w1, 0.02) &&
                             rel_within(q2.p_cause1, row.p1_w2, 0.02);
        if (components && derived) continue;
        // documented branch structure: the published row may sit on a local
        // branch with a worse objective; the reported optimum must not lose
        const ThetaParams table{row.theta[0], row.theta[1], row.theta[2], row.theta[3]};
        const double table_obj = objective(d.plan, d.counts, table, Beta(row.beta));
        if (r.objective <= table_obj + 1e-12) {
            detail("beta=%.1f matched through the objective clause "
                   "(ours %.8f <= table %.8f)",
                   row.beta, r.objective, table_obj);
            continue;
        }
        detail("beta=%.1f missed the table and has the worse objective (%.8f > %.8f)", row.beta,
               r.objective, table_obj);
        ok = false;
    }
    const double elapsed = seconds_since(t0);
    if (elapsed > 10.0) {
        detail("runtime %.1f s exceeds 10 s", elapsed);
        ok = false;
    }
    report(ok, "BDC DPD path against the published per-beta table");
}

// ---- criterion 3: the estimated-error table ---------------------------------

void criterion_error_table() {
    const Dataset d = bdc();
    const std::pair<double, double> table[] = {
        {0.0, 0.1051}, {0.1, 0.1049}, {0.2, 0.1047}, {0.3, 0.1044}, {0.37, 0.1043},
        {0.4, 0.1051}, {0.6, 0.1052}, {0.7, 0.1050}, {0.8, 0.1040}, {0.9, 0.1048},
    };
    bool ok = true;
    for (const auto& [beta, expected] : table) {
        const FitResult r = fit_bdc(d, beta);
        const double err = estimated_error(d.plan, d.counts, r.theta_hat);
        if (!within(err, expected, 0.0005)) {
            detail("beta=%.2f: estimated error %.4f vs published %.4f (diff %+0.4f)", beta, err,
                   expected, err - expected);
            ok = false;
        }
    }
    report(ok, "estimated-error table within 0.0005 per listed beta");
}

// ---- criterion 4: tuning-parameter selection --------------------------------

void criterion_tuning() {
    const Dataset d = bdc();
    const auto t0 = std::chrono::steady_clock::now();
    TuningConfig cfg;
    cfg.grid = TuningConfig::default_grid();
    const TuningResult r = tune(d.plan, d.counts, cfg);
    const double elapsed = seconds_since(t0);
    bool ok = r.best_beta >= 0.27 && r.best_beta <= 0.47;
    if (!ok) detail("best_beta %.4f outside [0.27, 0.47]", r.best_beta);
    if (elapsed > 60.0) {
        detail("runtime %.1f s exceeds 60 s", elapsed);
        ok = false;
    }
    detail("best_beta %.4f in %.2f s", r.best_beta, elapsed);
    report(ok, "tuning on the 100-point grid lands in [0.27, 0.47]");
}

// ---- criterion 5: analytic gradients against finite differences -------------

void criterion_gradients() {
    std::mt19937_64 gen(424242);
    const auto uniform = [&gen](double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(gen() >> 11) * 0x1.0p-53);
    };
    bool ok = true;
    int cases = 0;
    double worst = 0.0;
    for (int rep = 0; rep < 30; ++rep) {
        const ThetaParams theta{std::exp(uniform(std::log(1e-4), std::log(5e-3))),
                                uniform(0.01, 0.08),
                                std::exp(uniform(std::log(1e-5), std::log(5e-4))),
                                uniform(0.01, 0.08)};
        TestPlan plan;
        for (int i = 0; i < 3; ++i)
            plan.conditions.push_back({uniform(5.0, 15.0), uniform(30.0, 50.0), 100});
        // expected counts from a second random parameter keep every cell busy
        const ThetaParams gener{std::exp(uniform(std::log(1e-4), std::log(5e-3))),
                                uniform(0.01, 0.08),
                                std::exp(uniform(std::log(1e-5), std::log(5e-4))),
                                uniform(0.01, 0.08)};
        CountsTable counts;
        for (const auto& cond : plan.conditions) {
            const CellProbs pi = cell_probs(gener, cond);
            const double k = static_cast<double>(cond.devices);
            counts.rows.push_back({k * pi.p_survive, k * pi.p_cause1, k * pi.p_cause2});
        }
        for (double b : {0.0, 0.25, 0.5, 1.0}) {
            // cell-probability gradients
            const Vec4 base = theta.as_vector();
            for (int i = 0; i < static_cast<int>(plan.size()); ++i) {
                const CellProbGradients g =
                    cell_prob_gradients(theta, plan.conditions[static_cast<std::size_t>(i)]);
                for (int cell = 0; cell < 3; ++cell) {
                    Vec4 fd;
                    for (int j = 0; j < 4; ++j) {
                        // fourth-order central stencil: the larger proportional
                        // step keeps roundoff well below the 1e-6 bar
                        const double h = 1e-4 * std::abs(base[j]);
                        const auto cond = plan.conditions[static_cast<std::size_t>(i)];
                        const auto at = [&](double step) {
                            Vec4 t = base;
                            t[j] += step;
                            return cell_probs(ThetaParams::from_vector(t), cond)[cell];
                        };
                        fd[j] = (-at(2.0 * h) + 8.0 * at(h) - 8.0 * at(-h) + at(-2.0 * h)) /
                                (12.0 * h);
                    }
                    const double rel = (g[cell] - fd).norm() / std::max(fd.norm(), 1e-10);
                    worst = std::max(worst, rel);
                    if (rel > 1e-6) ok = false;
                }
            }
            // objective gradient
            Vec4 fd;
            for (int j = 0; j < 4; ++j) {
                const double h = 1e-4 * std::abs(base[j]);
                const auto at = [&](double step) {
                    Vec4 t = base;
                    t[j] += step;
                    return objective(plan, counts, ThetaParams::from_vector(t), Beta(b));
                };
                fd[j] = (-at(2.0 * h) + 8.0 * at(h) - 8.0 * at(-h) + at(-2.0 * h)) / (12.0 * h);
            }
            const Vec4 g = dpd_gradient(plan, counts, theta, Beta(b));
            const double rel = (g - fd).norm() / std::max(fd.norm(), 1e-8);
            worst = std::max(worst, rel);
            if (rel > 1e-6) ok = false;
            ++cases;
        }
    }
    detail("%d randomized cases, worst relative error %.2e", cases, worst);
    report(ok && cases >= 100, "analytic gradients match finite differences");
}

// ---- criterion 6: asymptotic covariance sanity ------------------------------

void criterion_asymptotics() {
    const ScenarioSpec spec = presets::scenario("moderate-reliability", 1000, 500, 20240901, false);
    const auto t0 = std::chrono::steady_clock::now();
    const auto results = run_efficiency_study(spec, {0.0});
    const double elapsed = seconds_since(t0);
    const ErrorSummary& s = results[0].second;

    const SandwichParts parts = sandwich(spec.plan, spec.true_theta, Beta(0.0));
    const Mat4 cov = covariance(parts, spec.plan.total_devices());
    bool ok = s.replications_used >= 450;
    const char* names[4] = {"theta10", "theta11", "theta20", "theta21"};
    for (int j = 0; j < 4; ++j) {
        const double empirical = s.rmse[static_cast<std::size_t>(j)] *
                                     s.rmse[static_cast<std::size_t>(j)] -
                                 s.mbe[static_cast<std::size_t>(j)] *
                                     s.mbe[static_cast<std::size_t>(j)];
        const double theoretical = cov(j, j);
        const bool hit = rel_within(empirical, theoretical, 0.25);
        detail("%s: empirical var %.3e vs theoretical %.3e%s", names[j], empirical, theoretical,
               hit ? "" : "  <-- off");
        ok = ok && hit;
    }
    detail("convergence rate %.3f, %.1f s", s.convergence_rate, elapsed);
    report(ok, "asymptotic covariance matches simulation within 25%");
}

// ---- criterion 7: Wald calibration -------------------------------------------

void criterion_wald_calibration() {
    const std::vector<double> betas{0.0, 0.2, 0.4};
    const ScenarioSpec null_spec = presets::scenario("wald-level", 200, 500, 7071, false);
    const ScenarioSpec alt_spec = presets::scenario("wald-power", 200, 500, 7071, false);
    const LinearConstraint lin = presets::wald_study_constraint();
    const auto levels = run_level_power_study(null_spec, lin, betas, 0.05);
    const auto powers = run_level_power_study(alt_spec, lin, betas, 0.05);
    bool ok = true;
    for (std::size_t b = 0; b < betas.size(); ++b) {
        const double level = levels[b].second.rejection_rate;
        const double power = powers[b].second.rejection_rate;
        detail("beta=%.1f: level %.3f, power %.3f", betas[b], level, power);
        if (level < 0.03 || level > 0.09) {
            detail("beta=%.1f level %.3f outside [0.03, 0.09]", betas[b], level);
            ok = false;
        }
        if (!(power > level)) {
            detail("beta=%.1f power %.3f does not exceed level %.3f", betas[b], power, level);
            ok = false;
        }
    }
    report(ok, "Wald test level in [0.03, 0.09] and power above level");
}

// ---- criterion 8: robustness orderings ---------------------------------------

void criterion_robustness() {
    const std::uint64_t seed = 1;
    const ScenarioSpec pure = presets::scenario("moderate-reliability", 100, 500, seed, false);
    const ScenarioSpec dirty = presets::scenario("moderate-reliability", 100, 500, seed, true);
    const auto pure_res = run_efficiency_study(pure, {0.0, 1.0});
    const auto dirty_res = run_efficiency_study(dirty, {0.0, 0.4});
    const double pure_mle = pure_res[0].second.rmse_aggregate;
    const double pure_dpd1 = pure_res[1].second.rmse_aggregate;
    const double dirty_mle = dirty_res[0].second.rmse_aggregate;
    const double dirty_dpd04 = dirty_res[1].second.rmse_aggregate;
    detail("pure: RMSE(0)=%.4f RMSE(1)=%.4f; contaminated: RMSE(0)=%.4f RMSE(0.4)=%.4f",
           pure_mle, pure_dpd1, dirty_mle, dirty_dpd04);
    bool ok = pure_mle <= pure_dpd1;
    if (!ok) detail("pure-data ordering RMSE(0) <= RMSE(1) violated");
    if (!(dirty_mle > dirty_dpd04)) {
        detail("contaminated ordering RMSE(0) > RMSE(0.4) violated");
        ok = false;
    }
    report(ok, "robustness orderings under pure and contaminated data");
}

// ---- criterion 9: power / sample-size round trip -----------------------------

void criterion_power_roundtrip() {
    const TestPlan plan = presets::balanced_plan({7.0, 15.0, 25.0}, 100);
    const ThetaParams star{0.004, 0.05, 0.0004, 0.09};
    const LinearConstraint lin = presets::wald_study_constraint();
    bool ok = true;
    for (double target : {0.8, 0.9}) {
        const SampleSizeResult s = required_sample_size(star, plan, lin, Beta(0.0), 0.05, target);
        detail("target %.1f: K = %ld, power at K = %.4f", target, s.k_total,
               s.power_at_k.approx_power);
        if (s.power_at_k.approx_power < target - 0.01) {
            detail("round trip fell short of target %.2f", target);
            ok = false;
        }
    }
    report(ok, "power/sample-size round trip reaches the target");
}

// ---- criterion 10: determinism ------------------------------------------------

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof(double)) == 0; }

bool identical_summaries(const std::vector<std::pair<double, ErrorSummary>>& a,
                         const std::vector<std::pair<double, ErrorSummary>>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto& x = a[i].second;
        const auto& y = b[i].second;
        if (!same_bits(a[i].first, b[i].first)) return false;
        for (std::size_t j = 0; j < 4; ++j)
            if (!same_bits(x.rmse[j], y.rmse[j]) || !same_bits(x.mae[j], y.mae[j]) ||
                !same_bits(x.mbe[j], y.mbe[j]))
                return false;
        if (!same_bits(x.rmse_aggregate, y.rmse_aggregate) ||
            !same_bits(x.mae_aggregate, y.mae_aggregate) ||
            !same_bits(x.mbe_aggregate, y.mbe_aggregate) ||
            x.replications_used != y.replications_used)
            return false;
    }
    return true;
}

bool identical_summaries(const std::vector<std::pair<double, LevelPowerSummary>>& a,
                         const std::vector<std::pair<double, LevelPowerSummary>>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!same_bits(a[i].first, b[i].first)) return false;
        if (!same_bits(a[i].second.rejection_rate, b[i].second.rejection_rate) ||
            a[i].second.replications_used != b[i].second.replications_used)
            return false;
    }
    return true;
}

void criterion_determinism() {
    const ScenarioSpec spec = presets::scenario("low-reliability", 50, 30, 99, true);
    const auto run1 = run_efficiency_study(spec, {0.0, 0.5});
    const auto run2 = run_efficiency_study(spec, {0.0, 0.5});
    bool ok = identical_summaries(run1, run2);
    if (!ok) detail("efficiency study differed between identical invocations");

    const auto lp1 = run_level_power_study(presets::scenario("wald-level", 100, 20, 5, false),
                                           presets::wald_study_constraint(), {0.0}, 0.05);
    const auto lp2 = run_level_power_study(presets::scenario("wald-level", 100, 20, 5, false),
                                           presets::wald_study_constraint(), {0.0}, 0.05);
    if (!identical_summaries(lp1, lp2)) {
        detail("level/power study differed between identical invocations");
        ok = false;
    }

    const Dataset d = bdc();
    TuningConfig cfg;
    cfg.grid = {0.0, 0.25, 0.5, 0.75, 1.0};
    const TuningResult t1 = tune(d.plan, d.counts, cfg);
    const TuningResult t2 = tune(d.plan, d.counts, cfg);
    if (t1.best_beta != t2.best_beta ||
        (t1.best_theta.as_vector() - t2.best_theta.as_vector()).norm() != 0.0) {
        detail("tuning differed between identical invocations");
        ok = false;
    }
    report(ok, "fixed-seed runs are exactly reproducible");
}

}  // namespace

int main() {
    criterion_mle_reproduction();
    criterion_dpd_path();
    criterion_error_table();
    criterion_tuning();
    criterion_gradients();
    criterion_asymptotics();
    criterion_wald_calibration();
    criterion_robustness();
    criterion_power_roundtrip();
    criterion_determinism();
    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
