#include "relsys/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "relsys/errors.hpp"
#include "relsys/stats.hpp"

namespace relsys {

namespace {

void check_grid(const std::vector<double>& grid) {
    if (grid.empty()) {
        throw ValidationError("grid: must be nonempty");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i]) || grid[i] < 0.0) {
            throw DomainError("grid: times must be finite and nonnegative");
        }
        if (i > 0 && grid[i] <= grid[i - 1]) {
            throw ValidationError("grid: times must be strictly increasing");
        }
    }
}

const WorkloadRealization& private_workload(const NodeSpec& node, const SystemRealization& real) {
    auto it = real.privates.find(node.id);
    if (it == real.privates.end()) {
        throw ValidationError("realization: no private workload for node '" + node.id + "'");
    }
    return it->second;
}

/// Sum of stresses of jobs in service at time t (T_j <= t < T_j + W_j).
double active_stress(const WorkloadRealization& w, double t) {
    double s = 0.0;
    const auto& times = w.arrivals.times;
    for (std::size_t j = 0; j < times.size() && times[j] <= t; ++j) {
        if (t < times[j] + w.services[j]) s += w.stresses[j];
    }
    return s;
}

void append_job_bounds(const WorkloadRealization& w, double horizon, std::vector<double>& bounds) {
    const auto& times = w.arrivals.times;
    for (std::size_t j = 0; j < times.size(); ++j) {
        if (times[j] > 0.0 && times[j] < horizon) bounds.push_back(times[j]);
        const double end = times[j] + w.services[j];
        if (end > 0.0 && end < horizon) bounds.push_back(end);
    }
}

/// Boundaries between which the hazard rate is a single smooth piece:
/// job starts, job ends, baseline kinks.
std::vector<double> hazard_bounds(const NodeSpec& node, const SystemRealization& real) {
    std::vector<double> bounds{0.0, real.horizon};
    append_job_bounds(private_workload(node, real), real.horizon, bounds);
    append_job_bounds(real.correlator, real.horizon, bounds);
    for (double k : node.baseline.kink_times()) {
        if (k > 0.0 && k < real.horizon) bounds.push_back(k);
    }
    std::sort(bounds.begin(), bounds.end());
    bounds.erase(std::unique(bounds.begin(), bounds.end()), bounds.end());
    return bounds;
}

}  // namespace

SystemRealization sample_system_realization(const SystemModel& model, double horizon, Rng& rng) {
    if (!std::isfinite(horizon) || horizon < 0.0) {
        throw DomainError("horizon: must be finite and nonnegative");
    }
    SystemRealization real;
    real.horizon = horizon;
    real.correlator = sample_workload(model.correlator, model.stress, model.service, horizon, rng);
    for (const auto& node : model.nodes) {
        real.privates.emplace(
            node.id, sample_workload(node.private_intensity, model.stress, model.service, horizon,
                                     rng));
    }
    return real;
}

double integrated_hazard(const NodeSpec& node, const SystemRealization& sysreal, double t) {
    if (!std::isfinite(t) || t < 0.0) {
        throw DomainError("t: must be finite and nonnegative");
    }
    if (t > sysreal.horizon) {
        throw DomainError("t: beyond realization horizon");
    }
    return node.baseline.mean(t) + shock_exposure(private_workload(node, sysreal), t) +
           shock_exposure(sysreal.correlator, t);
}

Lifetime invert_cumulative_hazard(const NodeSpec& node, const SystemRealization& sysreal,
                                  double target) {
    if (!std::isfinite(target)) {
        throw DomainError("target: must be finite");
    }
    if (target <= 0.0) {
        return {0.0, false};
    }
    const double horizon = sysreal.horizon;
    const WorkloadRealization& priv = private_workload(node, sysreal);
    if (horizon == 0.0) {
        return {0.0, true};
    }

    const std::vector<double> bounds = hazard_bounds(node, sysreal);
    // Baseline rate is affine on each segment only for linear/sum baselines;
    // otherwise it is constant and the segment solve is a division.
    const bool affine_baseline = node.baseline.kind() == IntensityKind::Linear ||
                                 node.baseline.kind() == IntensityKind::Sum;
    double h_lo = 0.0;
    for (std::size_t k = 0; k + 1 < bounds.size(); ++k) {
        const double a = bounds[k];
        const double b = bounds[k + 1];
        const double mid = 0.5 * (a + b);
        const double c = active_stress(priv, mid) + active_stress(sysreal.correlator, mid);
        const double h_hi = h_lo + (node.baseline.mean(b) - node.baseline.mean(a)) + c * (b - a);
        if (h_hi >= target) {
            double t = b;
            if (!affine_baseline) {
                const double slope = node.baseline.rate(mid) + c;
                if (slope > 0.0) t = a + (target - h_lo) / slope;
            } else {
                double lo = a;
                double hi = b;
                for (int iter = 0; iter < 100 && lo < hi; ++iter) {
                    const double m = 0.5 * (lo + hi);
                    if (m <= lo || m >= hi) break;
                    const double hm =
                        h_lo + (node.baseline.mean(m) - node.baseline.mean(a)) + c * (m - a);
                    if (hm >= target) {
                        hi = m;
                    } else {
                        lo = m;
                    }
                }
                t = hi;
            }
            return {std::clamp(t, a, b), false};
        }
        h_lo = h_hi;
    }
    return {horizon, true};
}

Lifetime sample_node_lifetime(const NodeSpec& node, const SystemRealization& sysreal, Rng& rng) {
    return invert_cumulative_hazard(node, sysreal, rng.next_exponential());
}

namespace {

constexpr std::uint64_t kChunkReps = 4096;

struct CompiledTerm {
    double coeff = 0.0;
    std::vector<std::size_t> nodes;
};

/// Runs `work(chunk_index, rep_begin, rep_end)` over fixed-size replication
/// chunks, possibly on several threads. Chunk outputs must be stored by
/// chunk index so the later reduction is order-independent of scheduling.
template <typename Work>
void run_chunks(std::uint64_t reps, int threads, Work&& work) {
    const std::uint64_t n_chunks = (reps + kChunkReps - 1) / kChunkReps;
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&]() {
        try {
            for (std::uint64_t chunk = next.fetch_add(1); chunk < n_chunks;
                 chunk = next.fetch_add(1)) {
                const std::uint64_t begin = chunk * kChunkReps;
                const std::uint64_t end = std::min(reps, begin + kChunkReps);
                work(chunk, begin, end);
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    };
    const int n_threads =
        static_cast<int>(std::min<std::uint64_t>(static_cast<std::uint64_t>(threads), n_chunks));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);
}

SurvivalCurve estimate_crude(const SystemModel& model, const std::vector<double>& grid,
                             const EstimatorConfig& cfg) {
    const double horizon = grid.back();
    const std::size_t n_nodes = model.nodes.size();
    const std::size_t n_grid = grid.size();

    std::map<std::string, std::size_t> node_index;
    for (std::size_t i = 0; i < n_nodes; ++i) node_index.emplace(model.nodes[i].id, i);
    std::vector<std::vector<std::size_t>> paths;
    for (const auto& set : min_path_sets(model.topology)) {
        std::vector<std::size_t> p;
        for (const auto& id : set) p.push_back(node_index.at(id));
        paths.push_back(std::move(p));
    }

    const std::uint64_t n_chunks = (cfg.reps + kChunkReps - 1) / kChunkReps;
    std::vector<std::vector<std::int64_t>> chunk_counts(
        n_chunks, std::vector<std::int64_t>(n_grid, 0));

    run_chunks(cfg.reps, cfg.threads, [&](std::uint64_t chunk, std::uint64_t begin,
                                          std::uint64_t end) {
        std::vector<Lifetime> lifetimes(n_nodes);
        std::vector<char> alive(n_nodes);
        auto& counts = chunk_counts[chunk];
        for (std::uint64_t rep = begin; rep < end; ++rep) {
            Rng rng = Rng::stream(cfg.seed, rep);
            const SystemRealization real = sample_system_realization(model, horizon, rng);
            for (std::size_t i = 0; i < n_nodes; ++i) {
                lifetimes[i] = sample_node_lifetime(model.nodes[i], real, rng);
            }
            for (std::size_t g = 0; g < n_grid; ++g) {
                for (std::size_t i = 0; i < n_nodes; ++i) {
                    alive[i] = lifetimes[i].censored || lifetimes[i].time > grid[g];
                }
                bool up = false;
                for (const auto& path : paths) {
                    bool all = true;
                    for (std::size_t i : path) {
                        if (!alive[i]) {
                            all = false;
                            break;
                        }
                    }
                    if (all) {
                        up = true;
                        break;
                    }
                }
                if (up) ++counts[g];
            }
        }
    });

    SurvivalCurve curve;
    curve.grid = grid;
    curve.values.resize(n_grid);
    curve.stderrs.resize(n_grid);
    const double n = static_cast<double>(cfg.reps);
    for (std::size_t g = 0; g < n_grid; ++g) {
        std::int64_t total = 0;
        for (std::uint64_t chunk = 0; chunk < n_chunks; ++chunk) total += chunk_counts[chunk][g];
        const double p = static_cast<double>(total) / n;
        curve.values[g] = p;
        curve.stderrs[g] = std::sqrt(p * (1.0 - p) / n);
    }
    curve.provenance.kind = CurveProvenance::Kind::Simulated;
    curve.provenance.estimator = "crude";
    curve.provenance.reps = cfg.reps;
    curve.provenance.seed = cfg.seed;
    return curve;
}

SurvivalCurve estimate_rao_blackwell(const SystemModel& model, const std::vector<double>& grid,
                                     const EstimatorConfig& cfg) {
    const double horizon = grid.back();
    const std::size_t n_nodes = model.nodes.size();
    const std::size_t n_grid = grid.size();

    std::map<std::string, std::size_t> node_index;
    for (std::size_t i = 0; i < n_nodes; ++i) node_index.emplace(model.nodes[i].id, i);
    const MonomialExpansion expansion =
        expand(min_path_sets(model.topology), ExpansionMode::Idempotent);
    std::vector<CompiledTerm> terms;
    for (const auto& term : expansion.terms) {
        CompiledTerm ct;
        ct.coeff = static_cast<double>(term.coeff);
        for (const auto& [id, exp] : term.exponents) ct.nodes.push_back(node_index.at(id));
        terms.push_back(std::move(ct));
    }

    // Deterministic per-node closed-form factor a_l(t): survival given an
    // empty shared stream. Conditional survival is a_l(t) * exp(-S_c(t)).
    std::vector<std::vector<double>> factor(n_nodes, std::vector<double>(n_grid));
    for (std::size_t i = 0; i < n_nodes; ++i) {
        const NodeSpec& node = model.nodes[i];
        for (std::size_t g = 0; g < n_grid; ++g) {
            const double kernel = f_kernel(node.private_intensity, 1, model.stress, model.service,
                                           grid[g], cfg.quad);
            factor[i][g] = baseline_reliability(node, grid[g]) * std::exp(-kernel);
        }
    }

    const std::uint64_t n_chunks = (cfg.reps + kChunkReps - 1) / kChunkReps;
    std::vector<std::vector<double>> chunk_sums(n_chunks, std::vector<double>(n_grid, 0.0));
    std::vector<std::vector<double>> chunk_sumsqs(n_chunks, std::vector<double>(n_grid, 0.0));

    run_chunks(cfg.reps, cfg.threads, [&](std::uint64_t chunk, std::uint64_t begin,
                                          std::uint64_t end) {
        std::vector<double> xi(n_nodes);
        auto& sums = chunk_sums[chunk];
        auto& sumsqs = chunk_sumsqs[chunk];
        for (std::uint64_t rep = begin; rep < end; ++rep) {
            Rng rng = Rng::stream(cfg.seed, rep);
            const WorkloadRealization shared =
                sample_workload(model.correlator, model.stress, model.service, horizon, rng);
            for (std::size_t g = 0; g < n_grid; ++g) {
                const double damp = std::exp(-shock_exposure(shared, grid[g]));
                for (std::size_t i = 0; i < n_nodes; ++i) xi[i] = factor[i][g] * damp;
                double y = 0.0;
                for (const auto& term : terms) {
                    double prod = term.coeff;
                    for (std::size_t i : term.nodes) prod *= xi[i];
                    y += prod;
                }
                sums[g] += y;
                sumsqs[g] += y * y;
            }
        }
    });

    SurvivalCurve curve;
    curve.grid = grid;
    curve.values.resize(n_grid);
    curve.stderrs.resize(n_grid);
    const double n = static_cast<double>(cfg.reps);
    for (std::size_t g = 0; g < n_grid; ++g) {
        double sum = 0.0;
        double sumsq = 0.0;
        for (std::uint64_t chunk = 0; chunk < n_chunks; ++chunk) {
            sum += chunk_sums[chunk][g];
            sumsq += chunk_sumsqs[chunk][g];
        }
        const double mean = sum / n;
        curve.values[g] = std::clamp(mean, 0.0, 1.0);
        if (cfg.reps >= 2) {
            const double var = std::max(sumsq - n * mean * mean, 0.0) / (n - 1.0);
            curve.stderrs[g] = std::sqrt(var / n);
        } else {
            curve.stderrs[g] = 0.0;
        }
    }
    curve.provenance.kind = CurveProvenance::Kind::Simulated;
    curve.provenance.estimator = "rao_blackwell";
    curve.provenance.reps = cfg.reps;
    curve.provenance.seed = cfg.seed;
    return curve;
}

}  // namespace

SurvivalCurve estimate_system_survival(const SystemModel& model, const std::vector<double>& grid,
                                       const EstimatorConfig& cfg) {
    model.validate();
    check_grid(grid);
    if (cfg.reps < 1) {
        throw ValidationError("reps: must be at least 1");
    }
    if (cfg.threads < 1) {
        throw ValidationError("threads: must be at least 1");
    }
    return cfg.estimator == EstimatorKind::Crude ? estimate_crude(model, grid, cfg)
                                                 : estimate_rao_blackwell(model, grid, cfg);
}

CovarianceEstimate estimate_stream_covariance(const SystemModel& model, const std::string& i,
                                              const std::string& j, double t, std::uint64_t reps,
                                              std::uint64_t seed) {
    if (i == j) {
        throw ValidationError("nodes: covariance requires two distinct node ids");
    }
    if (!std::isfinite(t) || t <= 0.0) {
        throw DomainError("t: must be finite and positive");
    }
    if (reps < 2) {
        throw ValidationError("reps: must be at least 2");
    }
    const NodeSpec& node_i = model.node(i);
    const NodeSpec& node_j = model.node(j);

    std::vector<double> xs(reps);
    std::vector<double> ys(reps);
    for (std::uint64_t r = 0; r < reps; ++r) {
        Rng rng = Rng::stream(seed, r);
        const double nc =
            static_cast<double>(sample_arrivals(model.correlator, t, rng).times.size());
        const double ni =
            static_cast<double>(sample_arrivals(node_i.private_intensity, t, rng).times.size());
        const double nj =
            static_cast<double>(sample_arrivals(node_j.private_intensity, t, rng).times.size());
        xs[r] = ni + nc;
        ys[r] = nj + nc;
    }

    const double n = static_cast<double>(reps);
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (std::uint64_t r = 0; r < reps; ++r) {
        mean_x += xs[r];
        mean_y += ys[r];
    }
    mean_x /= n;
    mean_y /= n;

    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
    for (std::uint64_t r = 0; r < reps; ++r) {
        const double dx = xs[r] - mean_x;
        const double dy = ys[r] - mean_y;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    sxx /= (n - 1.0);
    syy /= (n - 1.0);
    sxy /= (n - 1.0);

    CovarianceEstimate out;
    out.covariance = sxy;

    // SE of the covariance from the spread of per-replication products.
    double var_d = 0.0;
    for (std::uint64_t r = 0; r < reps; ++r) {
        const double d = (xs[r] - mean_x) * (ys[r] - mean_y) - sxy;
        var_d += d * d;
    }
    var_d /= (n - 1.0);
    out.covariance_se = std::sqrt(var_d / n);

    if (sxx <= 0.0 || syy <= 0.0) {
        throw DomainError("correlation: composite counts have zero sample variance");
    }
    const double sx = std::sqrt(sxx);
    const double sy = std::sqrt(syy);
    const double corr = std::clamp(sxy / (sx * sy), -1.0, 1.0);
    out.correlation = corr;

    // Influence function of the sample correlation.
    double var_if = 0.0;
    for (std::uint64_t r = 0; r < reps; ++r) {
        const double zx = (xs[r] - mean_x) / sx;
        const double zy = (ys[r] - mean_y) / sy;
        const double inf = zx * zy - 0.5 * corr * (zx * zx + zy * zy);
        var_if += inf * inf;
    }
    var_if /= (n - 1.0);
    out.correlation_se = std::sqrt(var_if / n);
    return out;
}

GofReport verify_superposition(const IntensityFunction& a, const IntensityFunction& b, double t,
                               std::uint64_t reps, std::uint64_t seed) {
    if (!std::isfinite(t) || t < 0.0) {
        throw DomainError("t: must be finite and nonnegative");
    }
    if (reps < 1000) {
        throw ValidationError("reps: must be at least 1000");
    }
    std::vector<std::int64_t> hist;
    for (std::uint64_t r = 0; r < reps; ++r) {
        Rng rng = Rng::stream(seed, r);
        const std::size_t k =
            sample_arrivals(a, t, rng).times.size() + sample_arrivals(b, t, rng).times.size();
        if (k >= hist.size()) hist.resize(k + 1, 0);
        ++hist[k];
    }
    const double mean = a.mean(t) + b.mean(t);
    const ChiSquareFit fit = poisson_chi_square(hist, mean);
    GofReport report;
    report.statistic = fit.statistic;
    report.df = fit.df;
    report.p_value = fit.p_value;
    report.expected_mean = mean;
    report.reps = reps;
    return report;
}

}  // namespace relsys
