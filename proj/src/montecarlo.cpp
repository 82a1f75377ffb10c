#include "oneshot/montecarlo.hpp"

#include "oneshot/presets.hpp"

#include <cmath>

namespace oneshot {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_index)
    : gen_(splitmix64(splitmix64(seed) ^ (stream_index + 1))) {}

double RngStream::uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

void ScenarioSpec::validate() const {
    plan.validate();
    true_theta.validate();
    if (replications < 1) throw std::invalid_argument("replications must be >= 1");
    if (contamination) {
        contamination->theta.validate();
        for (std::size_t cell : contamination->cells)
            if (cell >= plan.size())
                throw std::invalid_argument("contaminated cell index out of range");
    }
}

CountsRow generate_counts(const TestCondition& cond, const CellProbs& probs, RngStream& rng) {
    CountsRow row;
    const double t1 = probs.p_survive;
    const double t2 = probs.p_survive + probs.p_cause1;
    for (long k = 0; k < cond.devices; ++k) {
        const double u = rng.uniform();
        if (u < t1)
            ++row.n_survive;
        else if (u < t2)
            ++row.n_cause1;
        else
            ++row.n_cause2;
    }
    return row;
}

CountsTable generate_table(const ScenarioSpec& spec, RngStream& rng) {
    CountsTable table;
    table.rows.reserve(spec.plan.size());
    for (std::size_t i = 0; i < spec.plan.size(); ++i) {
        const auto& cond = spec.plan.conditions[i];
        const bool dirty = spec.contamination && spec.contamination->cells.count(i) > 0;
        const ThetaParams& theta = dirty ? spec.contamination->theta : spec.true_theta;
        table.rows.push_back(generate_counts(cond, cell_probs(theta, cond), rng));
    }
    return table;
}

namespace {

struct ErrorAccumulator {
    std::array<double, 4> sq{}, abs{}, bias{};
    double sq_norm = 0.0, abs_norm = 0.0, bias_norm = 0.0;
    int used = 0;
    int attempted = 0;

    void add(const Vec4& err) {
        for (int j = 0; j < 4; ++j) {
            sq[j] += err[j] * err[j];
            abs[j] += std::abs(err[j]);
            bias[j] += err[j];
        }
        sq_norm += err.squaredNorm();
        abs_norm += err.cwiseAbs().mean();
        bias_norm += err.mean();
        ++used;
    }

    ErrorSummary summary() const {
        ErrorSummary s;
        if (used > 0) {
            const double n = static_cast<double>(used);
            for (int j = 0; j < 4; ++j) {
                s.rmse[j] = std::sqrt(sq[j] / n);
                s.mae[j] = abs[j] / n;
                s.mbe[j] = bias[j] / n;
            }
            s.rmse_aggregate = std::sqrt(sq_norm / n);
            s.mae_aggregate = abs_norm / n;
            s.mbe_aggregate = bias_norm / n;
        }
        s.replications_used = used;
        s.convergence_rate =
            attempted > 0 ? static_cast<double>(used) / static_cast<double>(attempted) : 0.0;
        return s;
    }
};

FitConfig study_fit_config(double beta) {
    FitConfig cfg;
    cfg.beta = Beta(beta);
    cfg.multi_start = 2;
    return cfg;
}

}  // namespace

std::vector<std::pair<double, ErrorSummary>> run_efficiency_study(const ScenarioSpec& spec,
                                                                  const BetaList& betas) {
    spec.validate();
    std::vector<ErrorAccumulator> acc(betas.size());
    const Vec4 truth = spec.true_theta.as_vector();
    for (int rep = 0; rep < spec.replications; ++rep) {
        RngStream rng(spec.seed, static_cast<std::uint64_t>(rep));
        const CountsTable table = generate_table(spec, rng);
        for (std::size_t b = 0; b < betas.size(); ++b) {
            ++acc[b].attempted;
            try {
                const FitResult fr = fit(spec.plan, table, study_fit_config(betas[b]));
                if (fr.converged) acc[b].add(fr.theta_hat.as_vector() - truth);
            } catch (const std::exception&) {
                // counted as a non-converged replication
            }
        }
    }
    std::vector<std::pair<double, ErrorSummary>> out;
    for (std::size_t b = 0; b < betas.size(); ++b) out.emplace_back(betas[b], acc[b].summary());
    return out;
}

std::vector<std::pair<double, LevelPowerSummary>> run_level_power_study(
    const ScenarioSpec& spec, const LinearConstraint& constraint, const BetaList& betas,
    double alpha) {
    spec.validate();
    constraint.validate();
    struct Counter {
        int rejections = 0, used = 0, attempted = 0;
    };
    std::vector<Counter> counters(betas.size());
    for (int rep = 0; rep < spec.replications; ++rep) {
        RngStream rng(spec.seed, static_cast<std::uint64_t>(rep));
        const CountsTable table = generate_table(spec, rng);
        for (std::size_t b = 0; b < betas.size(); ++b) {
            ++counters[b].attempted;
            try {
                const FitResult fr = fit(spec.plan, table, study_fit_config(betas[b]));
                if (!fr.converged || !fr.covariance_ok) continue;
                const WaldResult w = wald_test(fr, spec.plan, constraint, alpha);
                ++counters[b].used;
                if (w.reject_at.at(alpha)) ++counters[b].rejections;
            } catch (const std::exception&) {
            }
        }
    }
    std::vector<std::pair<double, LevelPowerSummary>> out;
    for (std::size_t b = 0; b < betas.size(); ++b) {
        LevelPowerSummary s;
        s.alpha = alpha;
        s.replications_used = counters[b].used;
        s.convergence_rate = counters[b].attempted > 0
                                 ? static_cast<double>(counters[b].used) /
                                       static_cast<double>(counters[b].attempted)
                                 : 0.0;
        s.rejection_rate = counters[b].used > 0
                               ? static_cast<double>(counters[b].rejections) /
                                     static_cast<double>(counters[b].used)
                               : 0.0;
        out.emplace_back(betas[b], s);
    }
    return out;
}

std::vector<SweepPoint> run_unbalanced_study(const BetaList& betas,
                                             const UnbalancedStudyConfig& config) {
    if (config.points_per_sweep < 2)
        throw std::invalid_argument("points_per_sweep must be >= 2");
    ScenarioSpec base;
    base.plan = presets::unbalanced_alt_plan();
    base.true_theta = {0.001, 0.05, 0.0001, 0.08};
    base.replications = config.replications;
    base.seed = config.seed;

    struct Sweep {
        const char* name;
        double ThetaParams::* field;
        double max_value;
    };
    const Sweep sweeps[] = {
        {"theta10", &ThetaParams::theta10, 0.005},
        {"theta11", &ThetaParams::theta11, 0.15},
        {"theta20", &ThetaParams::theta20, 0.0005},
        {"theta21", &ThetaParams::theta21, 0.18},
    };

    std::vector<SweepPoint> out;
    for (const auto& sweep : sweeps) {
        const double pure = base.true_theta.*(sweep.field);
        for (int p = 0; p < config.points_per_sweep; ++p) {
            const double value =
                pure + (sweep.max_value - pure) * static_cast<double>(p) /
                           static_cast<double>(config.points_per_sweep - 1);
            ScenarioSpec spec = base;
            Contamination cont;
            cont.cells = {0};
            cont.theta = base.true_theta;
            cont.theta.*(sweep.field) = value;
            spec.contamination = cont;
            const auto results = run_efficiency_study(spec, betas);
            for (const auto& [beta, summary] : results)
                out.push_back(SweepPoint{sweep.name, value, beta, summary});
        }
    }
    return out;
}

}  // namespace oneshot
