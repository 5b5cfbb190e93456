#include "relsys.h"

#include <cstring>
#include <string>
#include <vector>

#include "relsys/errors.hpp"
#include "relsys/model_json.hpp"
#include "relsys/simulate.hpp"
#include "relsys/system.hpp"

struct relsys_model {
    relsys::SystemModel model;
};

namespace {

thread_local std::string g_last_error;

int fail(const std::exception& e, int code) {
    g_last_error = e.what();
    return code;
}

int fail_validation(const char* message) {
    g_last_error = message;
    return RELSYS_ERR_VALIDATION;
}

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const relsys::NumericalError& e) {
        return fail(e, RELSYS_ERR_NUMERICAL);
    } catch (const relsys::CapacityError& e) {
        return fail(e, RELSYS_ERR_CAPACITY);
    } catch (const relsys::ValidationError& e) {
        return fail(e, RELSYS_ERR_VALIDATION);
    } catch (const std::exception& e) {
        return fail(e, RELSYS_ERR_INTERNAL);
    }
}

relsys::QuadratureSettings make_quad(const relsys_quad_opts* quad) {
    relsys::QuadratureSettings s;
    if (quad) {
        if (quad->rel_tol > 0.0) s.rel_tol = quad->rel_tol;
        if (quad->abs_tol > 0.0) s.abs_tol = quad->abs_tol;
        if (quad->max_depth > 0) s.max_depth = quad->max_depth;
    }
    return s;
}

int parse_mode(int mode, relsys::ExpansionMode* out) {
    if (mode == RELSYS_MODE_IDEMPOTENT) {
        *out = relsys::ExpansionMode::Idempotent;
        return RELSYS_OK;
    }
    if (mode == RELSYS_MODE_PAPER) {
        *out = relsys::ExpansionMode::Paper;
        return RELSYS_OK;
    }
    return fail_validation("mode: must be RELSYS_MODE_IDEMPOTENT or RELSYS_MODE_PAPER");
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

}  // namespace

extern "C" {

const char* relsys_last_error(void) { return g_last_error.c_str(); }

int relsys_model_from_json(const char* json_text, relsys_model** out_model) {
    if (json_text == nullptr || out_model == nullptr) {
        return fail_validation("relsys_model_from_json: null argument");
    }
    return guarded([&] {
        auto* handle = new relsys_model{relsys::model_from_json_text(json_text)};
        *out_model = handle;
        return RELSYS_OK;
    });
}

void relsys_model_free(relsys_model* model) { delete model; }

int relsys_model_to_json(const relsys_model* model, char** out_json) {
    if (model == nullptr || out_json == nullptr) {
        return fail_validation("relsys_model_to_json: null argument");
    }
    return guarded([&] {
        *out_json = dup_string(relsys::model_to_json(model->model).dump(2));
        return RELSYS_OK;
    });
}

int relsys_survival_curve(const relsys_model* model, const double* grid, size_t n, int mode,
                          const relsys_quad_opts* quad, double* values) {
    if (model == nullptr || grid == nullptr || values == nullptr || n == 0) {
        return fail_validation("relsys_survival_curve: null argument or empty grid");
    }
    relsys::ExpansionMode parsed_mode;
    if (int rc = parse_mode(mode, &parsed_mode); rc != RELSYS_OK) return rc;
    return guarded([&] {
        const std::vector<double> times(grid, grid + n);
        const relsys::SurvivalCurve curve =
            relsys::survival_curve(model->model, times, parsed_mode, make_quad(quad));
        std::memcpy(values, curve.values.data(), n * sizeof(double));
        return RELSYS_OK;
    });
}

int relsys_simulate_curve(const relsys_model* model, const double* grid, size_t n, uint64_t reps,
                          uint64_t seed, int estimator, int threads,
                          const relsys_quad_opts* quad, double* values, double* stderrs) {
    if (model == nullptr || grid == nullptr || values == nullptr || stderrs == nullptr || n == 0) {
        return fail_validation("relsys_simulate_curve: null argument or empty grid");
    }
    relsys::EstimatorConfig cfg;
    if (estimator == RELSYS_ESTIMATOR_CRUDE) {
        cfg.estimator = relsys::EstimatorKind::Crude;
    } else if (estimator == RELSYS_ESTIMATOR_RAO_BLACKWELL) {
        cfg.estimator = relsys::EstimatorKind::RaoBlackwell;
    } else {
        return fail_validation(
            "estimator: must be RELSYS_ESTIMATOR_CRUDE or RELSYS_ESTIMATOR_RAO_BLACKWELL");
    }
    cfg.reps = reps;
    cfg.seed = seed;
    cfg.threads = threads;
    cfg.quad = make_quad(quad);
    return guarded([&] {
        const std::vector<double> times(grid, grid + n);
        const relsys::SurvivalCurve curve =
            relsys::estimate_system_survival(model->model, times, cfg);
        std::memcpy(values, curve.values.data(), n * sizeof(double));
        std::memcpy(stderrs, curve.stderrs.data(), n * sizeof(double));
        return RELSYS_OK;
    });
}

int relsys_expansion_json(const relsys_model* model, int mode, char** out_json) {
    if (model == nullptr || out_json == nullptr) {
        return fail_validation("relsys_expansion_json: null argument");
    }
    relsys::ExpansionMode parsed_mode;
    if (int rc = parse_mode(mode, &parsed_mode); rc != RELSYS_OK) return rc;
    return guarded([&] {
        model->model.validate();
        const relsys::MonomialExpansion expansion =
            relsys::expand(relsys::min_path_sets(model->model.topology), parsed_mode);
        nlohmann::json terms = nlohmann::json::array();
        for (const auto& term : expansion.terms) {
            nlohmann::json one;
            one["coeff"] = term.coeff;
            one["exponents"] = term.exponents;
            terms.push_back(std::move(one));
        }
        *out_json = dup_string(terms.dump(2));
        return RELSYS_OK;
    });
}

int relsys_correlation_closed(const relsys_model* model, const char* node_i, const char* node_j,
                              double t, int convention, double* out_value) {
    if (model == nullptr || node_i == nullptr || node_j == nullptr || out_value == nullptr) {
        return fail_validation("relsys_correlation_closed: null argument");
    }
    relsys::CorrelationConvention conv;
    if (convention == RELSYS_CONVENTION_MEAN_FUNCTION) {
        conv = relsys::CorrelationConvention::MeanFunction;
    } else if (convention == RELSYS_CONVENTION_PAPER_INTENSITY) {
        conv = relsys::CorrelationConvention::PaperIntensity;
    } else {
        return fail_validation("convention: must be mean_function or paper_intensity");
    }
    return guarded([&] {
        *out_value = relsys::stream_correlation(model->model, node_i, node_j, t, conv);
        return RELSYS_OK;
    });
}

int relsys_correlation_simulated(const relsys_model* model, const char* node_i,
                                 const char* node_j, double t, uint64_t reps, uint64_t seed,
                                 double* out_value, double* out_se) {
    if (model == nullptr || node_i == nullptr || node_j == nullptr || out_value == nullptr ||
        out_se == nullptr) {
        return fail_validation("relsys_correlation_simulated: null argument");
    }
    return guarded([&] {
        const relsys::CovarianceEstimate est =
            relsys::estimate_stream_covariance(model->model, node_i, node_j, t, reps, seed);
        *out_value = est.correlation;
        *out_se = est.correlation_se;
        return RELSYS_OK;
    });
}

void relsys_string_free(char* s) { delete[] s; }

}  // extern "C"
