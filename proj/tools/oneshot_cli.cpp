// Batch front end: fit / test / tune / power / simulate subcommands over the
// CSV dataset format. Human-readable report on stdout, optional JSON document
// via --json, CSV series for the simulation studies.

#include <CLI11.hpp>
#include <json.hpp>

#include "oneshot/inference.hpp"
#include "oneshot/io.hpp"
#include "oneshot/presets.hpp"
#include "oneshot/tuning.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

using nlohmann::json;
using namespace oneshot;

namespace {

constexpr int kExitParse = 2;
constexpr int kExitValidation = 3;
constexpr int kExitNumerical = 4;

std::vector<double> parse_double_list(const std::string& text, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string field;
    while (std::getline(ss, field, ',')) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(field, &pos));
            if (pos != field.size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw std::invalid_argument(std::string(what) + ": bad numeric value '" + field + "'");
        }
    }
    if (out.empty()) throw std::invalid_argument(std::string(what) + ": empty list");
    return out;
}

Beta parse_beta(const std::string& text) {
    if (text == "mle" || text == "MLE") return Beta(0.0);
    try {
        return Beta(std::stod(text));
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("--beta expects a nonnegative number or 'mle'");
    }
}

ThetaParams parse_theta(const std::string& text, const char* what) {
    const auto v = parse_double_list(text, what);
    if (v.size() != 4)
        throw std::invalid_argument(std::string(what) + ": expected 4 comma-separated values");
    const ThetaParams theta{v[0], v[1], v[2], v[3]};
    theta.validate();
    return theta;
}

int param_index(const std::string& name) {
    static const std::map<std::string, int> idx = {
        {"theta10", 0}, {"theta11", 1}, {"theta20", 2}, {"theta21", 3}};
    const auto it = idx.find(name);
    if (it == idx.end())
        throw std::invalid_argument("unknown parameter name '" + name +
                                    "' (use theta10, theta11, theta20, theta21)");
    return it->second;
}

// "theta21=0.08" rows, one per --constraint occurrence.
LinearConstraint parse_constraints(const std::vector<std::string>& specs,
                                   const std::string& matrix_file) {
    std::vector<std::array<double, 5>> rows;
    for (const auto& spec : specs) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("constraint '" + spec + "' is not of the form name=value");
        const int j = param_index(spec.substr(0, eq));
        double value = 0.0;
        try {
            value = std::stod(spec.substr(eq + 1));
        } catch (const std::exception&) {
            throw std::invalid_argument("constraint '" + spec + "' has a bad numeric value");
        }
        std::array<double, 5> row{0, 0, 0, 0, value};
        row[static_cast<std::size_t>(j)] = 1.0;
        rows.push_back(row);
    }
    if (!matrix_file.empty()) {
        std::ifstream in(matrix_file);
        if (!in) throw ParseError(matrix_file + ": cannot open file");
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
            const auto v = parse_double_list(line, "constraint row");
            if (v.size() != 5)
                throw ParseError(matrix_file + ":" + std::to_string(lineno) +
                                 ": expected 5 comma-separated values (l1,l2,l3,l4,c)");
            rows.push_back({v[0], v[1], v[2], v[3], v[4]});
        }
    }
    if (rows.empty()) throw std::invalid_argument("no constraint given");
    LinearConstraint lin;
    lin.matrix_l = Eigen::MatrixXd::Zero(static_cast<long>(rows.size()), 4);
    lin.offset_c = Eigen::VectorXd::Zero(static_cast<long>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (int j = 0; j < 4; ++j) lin.matrix_l(static_cast<long>(i), j) = rows[i][j];
        lin.offset_c(static_cast<long>(i)) = rows[i][4];
    }
    lin.validate();
    return lin;
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

json theta_json(const ThetaParams& t) {
    return json{{"theta10", t.theta10}, {"theta11", t.theta11},
                {"theta20", t.theta20}, {"theta21", t.theta21}};
}

void write_json(const json& doc, const std::string& path) {
    if (path.empty()) return;
    if (path == "-") {
        std::cout << doc.dump(2) << "\n";
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot write JSON output");
    out << doc.dump(2) << "\n";
}

const char* kParamNames[4] = {"theta10", "theta11", "theta20", "theta21"};

json fit_to_json(const FitResult& r) {
    json j;
    j["beta"] = r.beta.value;
    j["theta_hat"] = theta_json(r.theta_hat);
    j["objective"] = r.objective;
    j["gradient_norm"] = r.gradient_norm;
    j["converged"] = r.converged;
    j["boundary_hit"] = r.boundary_hit;
    j["iterations"] = r.iterations;
    j["covariance_ok"] = r.covariance_ok;
    if (r.covariance_ok) {
        json se;
        for (int k = 0; k < 4; ++k) se[kParamNames[k]] = std::sqrt(r.covariance(k, k));
        j["std_errors"] = se;
    }
    return j;
}

int cmd_fit(const std::string& data_path, const std::string& beta_text,
            const std::string& stress_text, const std::string& json_path) {
    const Dataset ds = load_dataset(data_path);
    FitConfig cfg;
    cfg.beta = parse_beta(beta_text);
    const FitResult r = fit(ds.plan, ds.counts, cfg);
    const double err = estimated_error(ds.plan, ds.counts, r.theta_hat);

    std::vector<double> stresses;
    if (!stress_text.empty()) {
        stresses = parse_double_list(stress_text, "--stress-levels");
    } else {
        for (const auto& c : ds.plan.conditions)
            if (std::find(stresses.begin(), stresses.end(), c.stress) == stresses.end())
                stresses.push_back(c.stress);
        std::sort(stresses.begin(), stresses.end());
    }

    std::cout << "fit: beta=" << num(cfg.beta.value) << " data=" << data_path << "\n";
    const Vec4 est = r.theta_hat.as_vector();
    for (int k = 0; k < 4; ++k) {
        std::cout << "  " << kParamNames[k] << " = " << num(est[k]);
        if (r.covariance_ok) std::cout << "  (se " << num(std::sqrt(r.covariance(k, k))) << ")";
        std::cout << "\n";
    }
    std::cout << "  objective = " << num(r.objective) << "  gradient_norm = "
              << num(r.gradient_norm) << "\n";
    std::cout << "  converged = " << (r.converged ? "yes" : "NO") << "  iterations = "
              << r.iterations << "\n";
    std::cout << "  estimated_error = " << num(err) << "\n";

    json jq = json::array();
    for (double x : stresses) {
        const LifetimeSummary q = quantities_of_interest(r.theta_hat, x);
        std::cout << "  stress " << num(x) << ": E1 = " << num(q.e_cause1) << "  E2 = "
                  << num(q.e_cause2) << "  E = " << num(q.e_overall) << "  P1 = "
                  << num(q.p_cause1) << "\n";
        jq.push_back(json{{"stress", x},
                          {"e_cause1", q.e_cause1},
                          {"e_cause2", q.e_cause2},
                          {"e_overall", q.e_overall},
                          {"p_cause1", q.p_cause1},
                          {"p_cause2", q.p_cause2}});
    }

    json doc = fit_to_json(r);
    doc["command"] = "fit";
    doc["data"] = data_path;
    doc["estimated_error"] = err;
    doc["quantities_of_interest"] = jq;
    write_json(doc, json_path);
    return r.converged ? 0 : kExitNumerical;
}

int cmd_test(const std::string& data_path, const std::string& beta_text,
             const std::vector<std::string>& constraints, const std::string& matrix_file,
             double alpha, const std::string& json_path) {
    const Dataset ds = load_dataset(data_path);
    const LinearConstraint lin = parse_constraints(constraints, matrix_file);
    FitConfig cfg;
    cfg.beta = parse_beta(beta_text);
    const FitResult r = fit(ds.plan, ds.counts, cfg);
    const WaldResult w = wald_test(r, ds.plan, lin, alpha);

    std::cout << "wald test: beta=" << num(cfg.beta.value) << " alpha=" << num(alpha) << "\n";
    std::cout << "  statistic = " << num(w.statistic) << "  df = " << w.df << "\n";
    std::cout << "  p_value = " << num(w.p_value) << "\n";
    std::cout << "  decision at alpha: " << (w.reject_at.at(alpha) ? "reject H0" : "retain H0")
              << "\n";

    json doc = fit_to_json(r);
    doc["command"] = "test";
    doc["data"] = data_path;
    doc["alpha"] = alpha;
    doc["statistic"] = w.statistic;
    doc["df"] = w.df;
    doc["p_value"] = w.p_value;
    doc["reject"] = w.reject_at.at(alpha);
    write_json(doc, json_path);
    return 0;
}

int cmd_tune(const std::string& data_path, int grid_points, double grid_max,
             const std::string& pilot_text, const std::string& json_path) {
    const Dataset ds = load_dataset(data_path);
    TuningConfig cfg;
    if (grid_points < 1) throw std::invalid_argument("--grid-points must be >= 1");
    if (!(grid_max > 0.0)) throw std::invalid_argument("--grid-max must be positive");
    cfg.grid.resize(static_cast<std::size_t>(grid_points));
    for (int i = 0; i < grid_points; ++i)
        cfg.grid[static_cast<std::size_t>(i)] =
            grid_points == 1 ? grid_max
                             : grid_max * static_cast<double>(i) /
                                   static_cast<double>(grid_points - 1);
    if (pilot_text == "self") {
        cfg.self_pilot = true;
    } else {
        try {
            cfg.pilot_beta = std::stod(pilot_text);
        } catch (const std::exception&) {
            throw std::invalid_argument("--pilot expects a number or 'self'");
        }
    }
    const TuningResult r = tune(ds.plan, ds.counts, cfg);

    std::cout << "tune: " << grid_points << " grid points on [0," << num(grid_max) << "], pilot="
              << pilot_text << "\n";
    std::cout << "  beta     theta10    theta11    theta20    theta21    bias^2     variance   "
                 "mse\n";
    json records = json::array();
    for (const auto& rec : r.records) {
        char line[200];
        if (rec.converged) {
            std::snprintf(line, sizeof(line),
                          "  %-8.4g %-10.4g %-10.4g %-10.4g %-10.4g %-10.4g %-10.4g %-10.4g",
                          rec.beta, rec.theta_hat.theta10, rec.theta_hat.theta11,
                          rec.theta_hat.theta20, rec.theta_hat.theta21, rec.bias_term,
                          rec.variance_term, rec.mse_hat);
        } else {
            std::snprintf(line, sizeof(line), "  %-8.4g (did not converge)", rec.beta);
        }
        std::cout << line << "\n";
        json jr{{"beta", rec.beta}, {"converged", rec.converged}};
        if (rec.converged) {
            jr["theta_hat"] = theta_json(rec.theta_hat);
            jr["bias_term"] = rec.bias_term;
            jr["variance_term"] = rec.variance_term;
            jr["mse_hat"] = rec.mse_hat;
        }
        records.push_back(jr);
    }
    std::cout << "  best_beta = " << num(r.best_beta) << "\n";

    json doc;
    doc["command"] = "tune";
    doc["data"] = data_path;
    doc["best_beta"] = r.best_beta;
    doc["best_theta"] = theta_json(r.best_theta);
    doc["pilot_theta"] = theta_json(r.pilot);
    doc["records"] = records;
    write_json(doc, json_path);
    return 0;
}

int cmd_power(const std::string& theta_text, const std::string& plan_path,
              const std::vector<std::string>& constraints, const std::string& matrix_file,
              const std::string& beta_text, double alpha, double k_override, double target_power,
              const std::string& json_path) {
    const ThetaParams star = parse_theta(theta_text, "--theta-star");
    const TestPlan plan = load_plan(plan_path);
    const LinearConstraint lin = parse_constraints(constraints, matrix_file);
    const Beta beta = parse_beta(beta_text);

    json doc;
    doc["command"] = "power";
    doc["theta_star"] = theta_json(star);
    doc["beta"] = beta.value;
    doc["alpha"] = alpha;

    if (target_power > 0.0) {
        const SampleSizeResult s =
            required_sample_size(star, plan, lin, beta, alpha, target_power);
        std::cout << "sample size for power " << num(target_power) << " at alpha " << num(alpha)
                  << ":\n";
        std::cout << "  k_total = " << s.k_total << "\n  per_condition =";
        for (long a : s.per_condition) std::cout << " " << a;
        std::cout << "\n  power_at_k = " << num(s.power_at_k.approx_power) << "\n";
        doc["target_power"] = target_power;
        doc["k_total"] = s.k_total;
        doc["per_condition"] = s.per_condition;
        doc["power_at_k"] = s.power_at_k.approx_power;
        doc["ell"] = s.power_at_k.ell_value;
        doc["sigma_w"] = s.power_at_k.sigma_w;
    } else {
        std::optional<double> k;
        if (k_override > 0.0) k = k_override;
        const PowerResult p = power_approx(star, plan, lin, beta, alpha, k);
        const double k_used = k ? *k : static_cast<double>(plan.total_devices());
        std::cout << "approximate power at K = " << num(k_used) << ", alpha = " << num(alpha)
                  << ":\n";
        std::cout << "  power = " << num(p.approx_power) << "  ell = " << num(p.ell_value)
                  << "  sigma_w = " << num(p.sigma_w) << "\n";
        doc["k_total"] = k_used;
        doc["power"] = p.approx_power;
        doc["ell"] = p.ell_value;
        doc["sigma_w"] = p.sigma_w;
    }
    write_json(doc, json_path);
    return 0;
}

json plan_to_json(const TestPlan& plan) {
    json rows = json::array();
    for (const auto& c : plan.conditions)
        rows.push_back(json{{"inspection_time", c.inspection_time},
                            {"stress", c.stress},
                            {"devices", c.devices}});
    return rows;
}

ScenarioSpec scenario_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open scenario file");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(path + ": invalid JSON: " + e.what());
    }
    try {
        ScenarioSpec spec;
        for (const auto& row : j.at("plan"))
            spec.plan.conditions.push_back(TestCondition{row.at("inspection_time").get<double>(),
                                                         row.at("stress").get<double>(),
                                                         row.at("devices").get<long>()});
        const auto t = j.at("theta");
        spec.true_theta = ThetaParams{t.at(0).get<double>(), t.at(1).get<double>(),
                                      t.at(2).get<double>(), t.at(3).get<double>()};
        if (j.contains("contamination")) {
            Contamination cont;
            for (const auto& c : j["contamination"].at("cells"))
                cont.cells.insert(c.get<std::size_t>());
            const auto ct = j["contamination"].at("theta");
            cont.theta = ThetaParams{ct.at(0).get<double>(), ct.at(1).get<double>(),
                                     ct.at(2).get<double>(), ct.at(3).get<double>()};
            spec.contamination = cont;
        }
        if (j.contains("replications")) spec.replications = j["replications"].get<int>();
        if (j.contains("seed")) spec.seed = j["seed"].get<std::uint64_t>();
        return spec;
    } catch (const json::exception& e) {
        throw ParseError(path + ": bad scenario document: " + e.what());
    }
}

int cmd_simulate(const std::string& preset, const std::string& scenario_file,
                 const std::string& betas_text, int reps, std::uint64_t seed, long k_per_cell,
                 bool contaminated, double alpha, const std::string& out_dir) {
    const std::vector<double> betas = parse_double_list(betas_text, "--betas");
    for (double b : betas)
        if (b < 0.0) throw std::invalid_argument("--betas values must be >= 0");

    ScenarioSpec spec;
    if (!preset.empty()) {
        spec = presets::scenario(preset, k_per_cell, reps, seed, contaminated);
    } else if (!scenario_file.empty()) {
        spec = scenario_from_file(scenario_file);
        spec.replications = reps;
        spec.seed = seed;
    } else {
        throw std::invalid_argument("simulate needs --preset or --scenario");
    }
    spec.validate();

    std::filesystem::create_directories(out_dir);

    json config;
    config["command"] = "simulate";
    config["preset"] = preset.empty() ? json(nullptr) : json(preset);
    config["scenario_file"] = scenario_file.empty() ? json(nullptr) : json(scenario_file);
    config["plan"] = plan_to_json(spec.plan);
    config["total_devices"] = spec.plan.total_devices();
    config["true_theta"] = theta_json(spec.true_theta);
    if (spec.contamination) {
        config["contamination"] = {
            {"cells", std::vector<std::size_t>(spec.contamination->cells.begin(),
                                               spec.contamination->cells.end())},
            {"theta", theta_json(spec.contamination->theta)}};
    } else {
        config["contamination"] = nullptr;
    }
    config["replications"] = spec.replications;
    config["seed"] = spec.seed;
    config["betas"] = betas;

    const bool wald_study = preset == "wald-level" || preset == "wald-power";
    const std::string series_path =
        out_dir + (wald_study ? "/level_power.csv" : "/errors.csv");
    std::ofstream series(series_path);
    if (!series) throw std::runtime_error(series_path + ": cannot write output");

    if (wald_study) {
        config["alpha"] = alpha;
        config["constraint"] = "theta21=0.08";
        const auto results =
            run_level_power_study(spec, presets::wald_study_constraint(), betas, alpha);
        series << "beta,rejection_rate,alpha,replications_used,convergence_rate\n";
        std::cout << "beta  rejection_rate  used  convergence\n";
        for (const auto& [b, s] : results) {
            char line[160];
            std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%d,%.17g\n", b,
                          s.rejection_rate, s.alpha, s.replications_used, s.convergence_rate);
            series << line;
            std::cout << num(b) << "  " << num(s.rejection_rate) << "  " << s.replications_used
                      << "  " << num(s.convergence_rate) << "\n";
        }
    } else {
        const auto results = run_efficiency_study(spec, betas);
        series << "beta";
        for (const char* p : kParamNames) series << ",rmse_" << p;
        for (const char* p : kParamNames) series << ",mae_" << p;
        for (const char* p : kParamNames) series << ",mbe_" << p;
        series << ",rmse_aggregate,mae_aggregate,mbe_aggregate,replications_used,"
                  "convergence_rate\n";
        std::cout << "beta  rmse_aggregate  mae_aggregate  mbe_aggregate  convergence\n";
        for (const auto& [b, s] : results) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.17g", b);
            series << buf;
            const auto emit = [&series](double v) {
                char cell[48];
                std::snprintf(cell, sizeof(cell), ",%.17g", v);
                series << cell;
            };
            for (double v : s.rmse) emit(v);
            for (double v : s.mae) emit(v);
            for (double v : s.mbe) emit(v);
            emit(s.rmse_aggregate);
            emit(s.mae_aggregate);
            emit(s.mbe_aggregate);
            series << "," << s.replications_used;
            emit(s.convergence_rate);
            series << "\n";
            std::cout << num(b) << "  " << num(s.rmse_aggregate) << "  " << num(s.mae_aggregate)
                      << "  " << num(s.mbe_aggregate) << "  " << num(s.convergence_rate) << "\n";
        }
    }
    series.close();

    std::ofstream cfg_out(out_dir + "/config.json");
    if (!cfg_out) throw std::runtime_error(out_dir + "/config.json: cannot write output");
    cfg_out << config.dump(2) << "\n";
    std::cout << "wrote " << series_path << " and " << out_dir << "/config.json\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Robust estimation and testing for one-shot devices under competing risks"};
    app.require_subcommand(1);

    std::string data_path, beta_text = "mle", stress_text, json_path;
    std::vector<std::string> constraints;
    std::string matrix_file;
    double alpha = 0.05;

    auto* fit_cmd = app.add_subcommand("fit", "Fit the rate model to a dataset");
    fit_cmd->add_option("--data", data_path, "dataset CSV")->required();
    fit_cmd->add_option("--beta", beta_text, "tuning parameter (number or 'mle')");
    fit_cmd->add_option("--stress-levels", stress_text,
                        "comma-separated stress levels for the lifetime summaries");
    fit_cmd->add_option("--json", json_path, "write a JSON report to this path ('-' = stdout)");

    auto* test_cmd = app.add_subcommand("test", "Wald-type test of linear constraints");
    test_cmd->add_option("--data", data_path, "dataset CSV")->required();
    test_cmd->add_option("--beta", beta_text, "tuning parameter (number or 'mle')");
    test_cmd->add_option("--constraint", constraints, "constraint row, e.g. theta21=0.08");
    test_cmd->add_option("--constraint-file", matrix_file, "CSV rows l1,l2,l3,l4,c");
    test_cmd->add_option("--alpha", alpha, "significance level");
    test_cmd->add_option("--json", json_path, "write a JSON report to this path");

    int grid_points = 100;
    double grid_max = 1.0;
    std::string pilot_text = "0.4";
    auto* tune_cmd = app.add_subcommand("tune", "Select the tuning parameter on a beta grid");
    tune_cmd->add_option("--data", data_path, "dataset CSV")->required();
    tune_cmd->add_option("--grid-points", grid_points, "number of grid points");
    tune_cmd->add_option("--grid-max", grid_max, "upper end of the beta grid");
    tune_cmd->add_option("--pilot", pilot_text, "pilot beta or 'self'");
    tune_cmd->add_option("--json", json_path, "write a JSON report to this path");

    std::string theta_text, plan_path;
    double k_override = 0.0, target_power = 0.0;
    auto* power_cmd = app.add_subcommand("power", "Approximate power / required sample size");
    power_cmd->add_option("--theta-star", theta_text, "alternative: 4 comma-separated values")
        ->required();
    power_cmd->add_option("--plan", plan_path, "plan CSV (dataset or plan-only layout)")
        ->required();
    power_cmd->add_option("--constraint", constraints, "constraint row, e.g. theta21=0.08");
    power_cmd->add_option("--constraint-file", matrix_file, "CSV rows l1,l2,l3,l4,c");
    power_cmd->add_option("--beta", beta_text, "tuning parameter (number or 'mle')");
    power_cmd->add_option("--alpha", alpha, "significance level");
    auto* k_opt = power_cmd->add_option("--k", k_override, "total device count");
    auto* tp_opt =
        power_cmd->add_option("--target-power", target_power, "solve for the device count");
    k_opt->excludes(tp_opt);
    power_cmd->add_option("--json", json_path, "write a JSON report to this path");

    std::string preset, scenario_file, betas_text = "0,0.2,0.4,0.6,0.8,1", out_dir = "sim_out";
    int reps = 500;
    std::uint64_t seed = 1;
    long k_per_cell = 100;
    bool contaminated = false;
    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo studies");
    sim_cmd->add_option("--preset", preset,
                        "one of: low-reliability, moderate-reliability, high-reliability, "
                        "unbalanced-alt, wald-level, wald-power");
    sim_cmd->add_option("--scenario", scenario_file, "scenario JSON file");
    sim_cmd->add_option("--betas", betas_text, "comma-separated beta list");
    sim_cmd->add_option("--reps", reps, "replications per point");
    sim_cmd->add_option("--seed", seed, "random seed");
    sim_cmd->add_option("--k", k_per_cell, "devices per condition (presets only)");
    sim_cmd->add_flag("--contaminated", contaminated, "contaminate the first cell");
    sim_cmd->add_option("--alpha", alpha, "significance level (wald presets)");
    sim_cmd->add_option("--out", out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitParse;
    }

    try {
        if (app.got_subcommand(fit_cmd))
            return cmd_fit(data_path, beta_text, stress_text, json_path);
        if (app.got_subcommand(test_cmd))
            return cmd_test(data_path, beta_text, constraints, matrix_file, alpha, json_path);
        if (app.got_subcommand(tune_cmd))
            return cmd_tune(data_path, grid_points, grid_max, pilot_text, json_path);
        if (app.got_subcommand(power_cmd))
            return cmd_power(theta_text, plan_path, constraints, matrix_file, beta_text, alpha,
                             k_override, target_power, json_path);
        if (app.got_subcommand(sim_cmd))
            return cmd_simulate(preset, scenario_file, betas_text, reps, seed, k_per_cell,
                                contaminated, alpha, out_dir);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return 0;
}
