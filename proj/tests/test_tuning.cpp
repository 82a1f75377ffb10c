#include <doctest.h>

#include "oneshot/tuning.hpp"
#include "test_helpers.hpp"

#include <cmath>

using namespace oneshot;

TEST_CASE("default grid covers the unit interval with 100 points") {
    const auto g = TuningConfig::default_grid();
    REQUIRE(g.size() == 100);
    CHECK(g.front() == 0.0);
    CHECK(g.back() == 1.0);
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
}

TEST_CASE("grid validation rejects malformed grids") {
    TuningConfig cfg;
    CHECK_THROWS_AS(tune(TestPlan{}, CountsTable{}, cfg), std::invalid_argument);  // empty grid
    cfg.grid = {0.2, 0.2};
    const Dataset d = oneshot::testing::bdc();
    CHECK_THROWS_AS(tune(d.plan, d.counts, cfg), std::invalid_argument);
    cfg.grid = {-0.1, 0.5};
    CHECK_THROWS_AS(tune(d.plan, d.counts, cfg), std::invalid_argument);
}

TEST_CASE("tuning the BDC data on a coarse grid") {
    const Dataset d = oneshot::testing::bdc();
    TuningConfig cfg;
    cfg.grid = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    const TuningResult r = tune(d.plan, d.counts, cfg);
    REQUIRE(r.records.size() == cfg.grid.size());
    // estimated MSE is smallest near the pilot on this data
    CHECK(r.best_beta >= 0.2);
    CHECK(r.best_beta <= 0.5);
    for (const auto& rec : r.records) {
        if (!rec.converged) continue;
        CHECK(rec.mse_hat == doctest::Approx(rec.bias_term + rec.variance_term).epsilon(1e-12));
        CHECK(rec.bias_term >= 0.0);
        CHECK(rec.variance_term > 0.0);
        CHECK(rec.mse_hat >= r.records[4].mse_hat - 1e-12);  // beta=0.4 is the argmin here
    }
}

TEST_CASE("explicit pilot parameter zeroes the bias at a matching grid point") {
    const Dataset d = oneshot::testing::bdc();
    FitConfig fc;
    fc.beta = Beta(0.5);
    const FitResult anchor = fit(d.plan, d.counts, fc);
    TuningConfig cfg;
    cfg.grid = {0.0, 0.5, 1.0};
    cfg.pilot_theta = anchor.theta_hat;
    const TuningResult r = tune(d.plan, d.counts, cfg);
    CHECK(r.pilot.as_vector() == anchor.theta_hat.as_vector());
    CHECK(r.records[1].bias_term <= 1e-10);
}

TEST_CASE("self-pilot mode reduces the criterion to the variance term") {
    const Dataset d = oneshot::testing::bdc();
    TuningConfig cfg;
    cfg.grid = {0.0, 0.3, 0.6};
    cfg.self_pilot = true;
    const TuningResult r = tune(d.plan, d.counts, cfg);
    for (const auto& rec : r.records) {
        if (!rec.converged) continue;
        CHECK(rec.bias_term == 0.0);
        CHECK(rec.mse_hat == rec.variance_term);
    }
}

TEST_CASE("tuning is deterministic and grid-extension consistent") {
    const Dataset d = oneshot::testing::bdc();
    TuningConfig cfg;
    cfg.grid = {0.0, 0.25, 0.5};
    const TuningResult a = tune(d.plan, d.counts, cfg);
    const TuningResult b = tune(d.plan, d.counts, cfg);
    CHECK(a.best_beta == b.best_beta);
    CHECK(a.best_theta.as_vector() == b.best_theta.as_vector());
    for (std::size_t i = 0; i < a.records.size(); ++i)
        CHECK(a.records[i].mse_hat == b.records[i].mse_hat);
}

TEST_CASE("single-point grid returns that point") {
    const Dataset d = oneshot::testing::bdc();
    TuningConfig cfg;
    cfg.grid = {0.3};
    const TuningResult r = tune(d.plan, d.counts, cfg);
    CHECK(r.best_beta == 0.3);
    FitConfig fc;
    fc.beta = Beta(0.3);
    const FitResult direct = fit(d.plan, d.counts, fc);
    CHECK((r.best_theta.as_vector() - direct.theta_hat.as_vector()).norm() <= 1e-9);
}
