#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "relsys.h"

namespace {

constexpr double kZGate = 4.0;
constexpr double kExactTol = 1e-12;  // zero-stderr rows must match exactly

int exit_code_for(int status) {
    switch (status) {
        case RELSYS_OK:
            return 0;
        case RELSYS_ERR_VALIDATION:
            return 2;
        case RELSYS_ERR_NUMERICAL:
            return 3;
        case RELSYS_ERR_CAPACITY:
            return 4;
        default:
            return 1;
    }
}

int report_error(int status) {
    std::cerr << "error: " << relsys_last_error() << "\n";
    return exit_code_for(status);
}

int report_usage_error(const std::string& message) {
    std::cerr << "error: " << message << "\n";
    return 2;
}

/// Shortest decimal form that round-trips to the same double.
std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

struct ModelHandle {
    relsys_model* ptr = nullptr;
    ~ModelHandle() { relsys_model_free(ptr); }
    ModelHandle() = default;
    ModelHandle(const ModelHandle&) = delete;
    ModelHandle& operator=(const ModelHandle&) = delete;
};

struct StringHandle {
    char* ptr = nullptr;
    ~StringHandle() { relsys_string_free(ptr); }
};

int load_model(const std::string& path, ModelHandle& out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        return report_usage_error("config: cannot read file '" + path + "'");
    }
    std::ostringstream text;
    text << in.rdbuf();
    const std::string content = text.str();
    const int rc = relsys_model_from_json(content.c_str(), &out.ptr);
    if (rc != RELSYS_OK) return report_error(rc);
    return 0;
}

int write_output(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
        return 0;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) {
        return report_usage_error("out: cannot open file '" + out_path + "'");
    }
    f << content;
    if (!f) {
        return report_usage_error("out: failed writing file '" + out_path + "'");
    }
    return 0;
}

std::vector<double> make_grid(double t_max, int steps) {
    std::vector<double> grid;
    if (t_max == 0.0) {
        grid.push_back(0.0);
        return grid;
    }
    grid.reserve(static_cast<std::size_t>(steps) + 1);
    for (int i = 0; i <= steps; ++i) {
        grid.push_back(i == steps ? t_max : t_max * i / steps);
    }
    return grid;
}

relsys_quad_opts make_quad(double rel, double abs) { return relsys_quad_opts{rel, abs, 0}; }

int parse_mode_flag(const std::string& mode, int* out) {
    if (mode == "idempotent") {
        *out = RELSYS_MODE_IDEMPOTENT;
        return 0;
    }
    if (mode == "paper") {
        *out = RELSYS_MODE_PAPER;
        return 0;
    }
    return report_usage_error("mode: must be 'idempotent' or 'paper'");
}

struct CommonArgs {
    std::string config;
    std::string out;
    double quad_rel = 0.0;
    double quad_abs = 0.0;
};

struct CurveArgs {
    double t_max = 1.0;
    int steps = 100;
};

struct SimArgs {
    std::uint64_t reps = 10000;
    std::uint64_t seed = 0;
    std::string estimator = "crude";
    int threads = 1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("config", args.config, "System config JSON file")->required();
    cmd->add_option("--out", args.out, "Output file (default stdout)");
    cmd->add_option("--quad-rel-tol", args.quad_rel, "Quadrature relative tolerance");
    cmd->add_option("--quad-abs-tol", args.quad_abs, "Quadrature absolute tolerance");
}

int parse_estimator(const std::string& name, int* out) {
    if (name == "crude") {
        *out = RELSYS_ESTIMATOR_CRUDE;
        return 0;
    }
    if (name == "rb" || name == "rao_blackwell") {
        *out = RELSYS_ESTIMATOR_RAO_BLACKWELL;
        return 0;
    }
    return report_usage_error("estimator: must be 'crude' or 'rb'");
}

int cmd_analyze(const CommonArgs& common, const CurveArgs& curve, const std::string& mode) {
    if (!(curve.t_max > 0.0)) return report_usage_error("t-max: must be positive");
    if (curve.steps < 1) return report_usage_error("steps: must be at least 1");
    int mode_flag = 0;
    if (int rc = parse_mode_flag(mode, &mode_flag); rc != 0) return rc;

    ModelHandle model;
    if (int rc = load_model(common.config, model); rc != 0) return rc;

    const std::vector<double> grid = make_grid(curve.t_max, curve.steps);
    std::vector<double> values(grid.size());
    const relsys_quad_opts quad = make_quad(common.quad_rel, common.quad_abs);
    const int rc =
        relsys_survival_curve(model.ptr, grid.data(), grid.size(), mode_flag, &quad,
                              values.data());
    if (rc != RELSYS_OK) return report_error(rc);

    std::string csv = "t,survival\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        csv += format_double(grid[i]);
        csv += ',';
        csv += format_double(values[i]);
        csv += '\n';
    }
    return write_output(common.out, csv);
}

int cmd_simulate(const CommonArgs& common, const CurveArgs& curve, const SimArgs& sim) {
    if (!(curve.t_max > 0.0)) return report_usage_error("t-max: must be positive");
    if (curve.steps < 1) return report_usage_error("steps: must be at least 1");
    int estimator = 0;
    if (int rc = parse_estimator(sim.estimator, &estimator); rc != 0) return rc;

    ModelHandle model;
    if (int rc = load_model(common.config, model); rc != 0) return rc;

    const std::vector<double> grid = make_grid(curve.t_max, curve.steps);
    std::vector<double> values(grid.size());
    std::vector<double> errs(grid.size());
    const relsys_quad_opts quad = make_quad(common.quad_rel, common.quad_abs);
    const int rc = relsys_simulate_curve(model.ptr, grid.data(), grid.size(), sim.reps, sim.seed,
                                         estimator, sim.threads, &quad, values.data(),
                                         errs.data());
    if (rc != RELSYS_OK) return report_error(rc);

    std::string csv = "t,survival,stderr\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        csv += format_double(grid[i]);
        csv += ',';
        csv += format_double(values[i]);
        csv += ',';
        csv += format_double(errs[i]);
        csv += '\n';
    }
    return write_output(common.out, csv);
}

int cmd_expand(const CommonArgs& common, const std::string& mode) {
    int mode_flag = 0;
    if (int rc = parse_mode_flag(mode, &mode_flag); rc != 0) return rc;
    ModelHandle model;
    if (int rc = load_model(common.config, model); rc != 0) return rc;
    StringHandle text;
    const int rc = relsys_expansion_json(model.ptr, mode_flag, &text.ptr);
    if (rc != RELSYS_OK) return report_error(rc);
    std::string out(text.ptr);
    out += '\n';
    return write_output(common.out, out);
}

int cmd_compare(const CommonArgs& common, const CurveArgs& curve, const SimArgs& sim) {
    if (curve.t_max < 0.0) return report_usage_error("t-max: must be nonnegative");
    if (curve.t_max > 0.0 && curve.steps < 1) return report_usage_error("steps: must be at least 1");

    ModelHandle model;
    if (int rc = load_model(common.config, model); rc != 0) return rc;

    const std::vector<double> grid = make_grid(curve.t_max, curve.steps);
    const std::size_t n = grid.size();
    std::vector<double> closed_idem(n);
    std::vector<double> closed_paper(n);
    std::vector<double> simulated(n);
    std::vector<double> errs(n);
    const relsys_quad_opts quad = make_quad(common.quad_rel, common.quad_abs);

    int rc = relsys_survival_curve(model.ptr, grid.data(), n, RELSYS_MODE_IDEMPOTENT, &quad,
                                   closed_idem.data());
    if (rc != RELSYS_OK) return report_error(rc);
    rc = relsys_survival_curve(model.ptr, grid.data(), n, RELSYS_MODE_PAPER, &quad,
                               closed_paper.data());
    if (rc != RELSYS_OK) return report_error(rc);
    rc = relsys_simulate_curve(model.ptr, grid.data(), n, sim.reps, sim.seed,
                               RELSYS_ESTIMATOR_CRUDE, sim.threads, &quad, simulated.data(),
                               errs.data());
    if (rc != RELSYS_OK) return report_error(rc);

    bool all_pass = true;
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < n; ++i) {
        const double diff = closed_idem[i] - simulated[i];
        const double diff_paper = closed_paper[i] - simulated[i];
        double z = 0.0;
        double z_paper = 0.0;
        bool row_pass = false;
        if (errs[i] > 0.0) {
            z = diff / errs[i];
            z_paper = diff_paper / errs[i];
            row_pass = std::fabs(z) <= kZGate;
        } else {
            row_pass = std::fabs(diff) <= kExactTol;
            z = row_pass ? 0.0 : 1e300;
            z_paper = std::fabs(diff_paper) <= kExactTol ? 0.0 : 1e300;
        }
        all_pass = all_pass && row_pass;
        nlohmann::json row;
        row["t"] = grid[i];
        row["closed_idempotent"] = closed_idem[i];
        row["closed_paper"] = closed_paper[i];
        row["simulated"] = simulated[i];
        row["stderr"] = errs[i];
        row["z"] = z;
        row["z_paper"] = z_paper;
        row["pass"] = row_pass;
        rows.push_back(std::move(row));
    }

    nlohmann::json report;
    report["pass"] = all_pass;
    report["reps"] = sim.reps;
    report["seed"] = sim.seed;
    report["z_gate"] = kZGate;
    report["rows"] = std::move(rows);
    std::string text = report.dump(2);
    text += '\n';
    if (int wrc = write_output(common.out, text); wrc != 0) return wrc;
    return all_pass ? 0 : 5;
}

int cmd_correlation(const CommonArgs& common, const std::string& node_i,
                    const std::string& node_j, double t, const std::string& convention,
                    std::uint64_t reps, std::uint64_t seed) {
    int conv = RELSYS_CONVENTION_MEAN_FUNCTION;
    if (convention == "paper_intensity") {
        conv = RELSYS_CONVENTION_PAPER_INTENSITY;
    } else if (convention != "mean_function") {
        return report_usage_error("convention: must be 'mean_function' or 'paper_intensity'");
    }

    ModelHandle model;
    if (int rc = load_model(common.config, model); rc != 0) return rc;

    double closed = 0.0;
    int rc = relsys_correlation_closed(model.ptr, node_i.c_str(), node_j.c_str(), t, conv,
                                       &closed);
    if (rc != RELSYS_OK) return report_error(rc);
    double simulated = 0.0;
    double se = 0.0;
    rc = relsys_correlation_simulated(model.ptr, node_i.c_str(), node_j.c_str(), t, reps, seed,
                                      &simulated, &se);
    if (rc != RELSYS_OK) return report_error(rc);

    nlohmann::json report;
    report["closed_form"] = closed;
    report["simulated"] = simulated;
    report["se"] = se;
    std::string text = report.dump(2);
    text += '\n';
    return write_output(common.out, text);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reliability of node systems under correlated workload streams"};
    app.require_subcommand(1);

    CommonArgs analyze_common;
    CurveArgs analyze_curve;
    std::string analyze_mode = "idempotent";
    CLI::App* analyze = app.add_subcommand("analyze", "Closed-form survival curve as CSV");
    add_common(analyze, analyze_common);
    analyze->add_option("--t-max", analyze_curve.t_max, "Grid end time");
    analyze->add_option("--steps", analyze_curve.steps, "Number of grid steps");
    analyze->add_option("--mode", analyze_mode, "Expansion mode: idempotent|paper");

    CommonArgs sim_common;
    CurveArgs sim_curve;
    SimArgs sim_args;
    CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo survival curve as CSV");
    add_common(simulate, sim_common);
    simulate->add_option("--t-max", sim_curve.t_max, "Grid end time");
    simulate->add_option("--steps", sim_curve.steps, "Number of grid steps");
    simulate->add_option("--reps", sim_args.reps, "Replications");
    simulate->add_option("--seed", sim_args.seed, "RNG seed");
    simulate->add_option("--estimator", sim_args.estimator, "Estimator: crude|rb");
    simulate->add_option("--threads", sim_args.threads, "Worker threads");

    CommonArgs expand_common;
    std::string expand_mode = "idempotent";
    CLI::App* expand = app.add_subcommand("expand", "Structure-function expansion as JSON");
    add_common(expand, expand_common);
    expand->add_option("--mode", expand_mode, "Expansion mode: idempotent|paper");

    CommonArgs compare_common;
    CurveArgs compare_curve;
    SimArgs compare_args;
    compare_args.reps = 100000;
    CLI::App* compare = app.add_subcommand(
        "compare", "Closed form vs simulation report as JSON (exit 5 on mismatch)");
    add_common(compare, compare_common);
    compare->add_option("--t-max", compare_curve.t_max, "Grid end time (0 = single point)");
    compare->add_option("--steps", compare_curve.steps, "Number of grid steps");
    compare->add_option("--reps", compare_args.reps, "Replications");
    compare->add_option("--seed", compare_args.seed, "RNG seed");
    compare->add_option("--threads", compare_args.threads, "Worker threads");

    CommonArgs corr_common;
    std::string node_i;
    std::string node_j;
    double corr_t = 1.0;
    std::string convention = "mean_function";
    std::uint64_t corr_reps = 100000;
    std::uint64_t corr_seed = 0;
    CLI::App* correlation =
        app.add_subcommand("correlation", "Composite-stream correlation as JSON");
    add_common(correlation, corr_common);
    correlation->add_option("--node-i", node_i, "First node id")->required();
    correlation->add_option("--node-j", node_j, "Second node id")->required();
    correlation->add_option("--t", corr_t, "Evaluation time");
    correlation->add_option("--convention", convention,
                            "Closed form: mean_function|paper_intensity");
    correlation->add_option("--reps", corr_reps, "Replications");
    correlation->add_option("--seed", corr_seed, "RNG seed");

    CLI11_PARSE(app, argc, argv);

    if (analyze->parsed()) return cmd_analyze(analyze_common, analyze_curve, analyze_mode);
    if (simulate->parsed()) return cmd_simulate(sim_common, sim_curve, sim_args);
    if (expand->parsed()) return cmd_expand(expand_common, expand_mode);
    if (compare->parsed()) return cmd_compare(compare_common, compare_curve, compare_args);
    if (correlation->parsed()) {
        return cmd_correlation(corr_common, node_i, node_j, corr_t, convention, corr_reps,
                               corr_seed);
    }
    return 0;
}
