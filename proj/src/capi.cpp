#include "surrokit.h"

#include "diagnostics.hpp"
#include "doe.hpp"
#include "errors.hpp"
#include "learning_base.hpp"
#include "model_io.hpp"
#include "testbed.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <string>
#include <vector>

using namespace surrokit;

struct srk_space {
    doe::InputSpace s;
};
struct srk_design {
    doe::Design d;
};
struct srk_base {
    LearningBase b;
};
struct srk_model {
    model::FittedModel m;
};

namespace {

thread_local std::string g_last_error;

template <typename Fn>
srk_status guarded(Fn&& fn) {
    try {
        fn();
        return SRK_OK;
    } catch (const input_error& e) {
        g_last_error = e.what();
        return SRK_ERR_INPUT;
    } catch (const numeric_error& e) {
        g_last_error = e.what();
        return SRK_ERR_NUMERIC;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return SRK_ERR_NUMERIC;
    }
}

srk_status fail_input(const char* msg) {
    g_last_error = msg;
    return SRK_ERR_INPUT;
}

testbed::CodeManagerConfig to_core(const srk_testbed_config& c) {
    testbed::CodeManagerConfig out;
    out.preprocessor_version = c.preprocessor_version;
    out.postprocessor_version = c.postprocessor_version;
    out.mesh_nodes = c.mesh_nodes;
    out.instability_scale = c.instability_scale;
    out.failure_rate = c.failure_rate;
    out.failure_offset = c.failure_offset;
    out.seed = c.seed;
    return out;
}

} // namespace

extern "C" {

const char* srk_version(void) { return "1.0.0"; }

const char* srk_last_error(void) { return g_last_error.c_str(); }

/* -------------------------------- spaces ------------------------------- */

srk_status srk_space_default(srk_space** out) {
    if (!out) return fail_input("srk_space_default: null output");
    return guarded([&] { *out = new srk_space{doe::InputSpace::default_pin_study()}; });
}

srk_status srk_space_load_csv(const char* path, srk_space** out) {
    if (!path || !out) return fail_input("srk_space_load_csv: null argument");
    return guarded([&] { *out = new srk_space{doe::load_space_csv(path)}; });
}

srk_status srk_space_save_csv(const srk_space* space, const char* path) {
    if (!space || !path) return fail_input("srk_space_save_csv: null argument");
    return guarded([&] { doe::save_space_csv(space->s, path); });
}

int srk_space_dim(const srk_space* space) { return space ? space->s.dim() : 0; }

const char* srk_space_name(const srk_space* space, int i) {
    if (!space || i < 0 || i >= space->s.dim()) return nullptr;
    return space->s.names[i].c_str();
}

srk_status srk_space_bounds(const srk_space* space, int i, double* lo, double* hi) {
    if (!space || !lo || !hi) return fail_input("srk_space_bounds: null argument");
    if (i < 0 || i >= space->s.dim()) return fail_input("srk_space_bounds: index out of range");
    *lo = space->s.lo[i];
    *hi = space->s.hi[i];
    return SRK_OK;
}

void srk_space_free(srk_space* space) { delete space; }

/* -------------------------------- designs ------------------------------ */

srk_status srk_design_lhs_maximin(const srk_space* space, int n, uint64_t seed, int sweeps,
                                  srk_design** out) {
    if (!space || !out) return fail_input("srk_design_lhs_maximin: null argument");
    return guarded([&] { *out = new srk_design{doe::lhs_maximin(space->s, n, seed, sweeps)}; });
}

srk_status srk_design_segment(const srk_space* space, const double* a_norm,
                              const double* b_norm, int d, int count, srk_design** out) {
    if (!space || !a_norm || !b_norm || !out)
        return fail_input("srk_design_segment: null argument");
    if (d != space->s.dim()) return fail_input("srk_design_segment: dimension mismatch");
    return guarded([&] {
        Eigen::VectorXd a = Eigen::Map<const Eigen::VectorXd>(a_norm, d);
        Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(b_norm, d);
        *out = new srk_design{doe::segment_scan(space->s, a, b, count).first};
    });
}

srk_status srk_design_filter(const srk_design* design, srk_row_predicate keep, void* ctx,
                             srk_design** out) {
    if (!design || !keep || !out) return fail_input("srk_design_filter: null argument");
    return guarded([&] {
        const int d = design->d.dim();
        auto pred = [&](const Eigen::VectorXd& row) {
            return keep(row.data(), d, ctx) != 0;
        };
        *out = new srk_design{doe::feasibility_filter(design->d, pred)};
    });
}

srk_status srk_design_filter_geometry(const srk_design* design, srk_design** out) {
    if (!design || !out) return fail_input("srk_design_filter_geometry: null argument");
    return guarded([&] {
        *out = new srk_design{doe::feasibility_filter(design->d, doe::pin_geometry_feasible)};
    });
}

int srk_design_rows(const srk_design* design) { return design ? design->d.n() : 0; }
int srk_design_dim(const srk_design* design) { return design ? design->d.dim() : 0; }

srk_status srk_design_get_row(const srk_design* design, int i, double* row_physical) {
    if (!design || !row_physical) return fail_input("srk_design_get_row: null argument");
    if (i < 0 || i >= design->d.n()) return fail_input("srk_design_get_row: index out of range");
    for (int j = 0; j < design->d.dim(); ++j) row_physical[j] = design->d.rows(i, j);
    return SRK_OK;
}

srk_status srk_design_save_csv(const srk_design* design, const char* path) {
    if (!design || !path) return fail_input("srk_design_save_csv: null argument");
    return guarded([&] { doe::save_design_csv(design->d, path); });
}

srk_status srk_design_load_csv(const srk_space* space, const char* path, srk_design** out) {
    if (!space || !path || !out) return fail_input("srk_design_load_csv: null argument");
    return guarded([&] { *out = new srk_design{doe::load_design_csv(space->s, path)}; });
}

void srk_design_free(srk_design* design) { delete design; }

/* -------------------------------- testbed ------------------------------ */

void srk_testbed_config_default(srk_testbed_config* cfg) {
    if (!cfg) return;
    const testbed::CodeManagerConfig d;
    cfg->preprocessor_version = d.preprocessor_version;
    cfg->postprocessor_version = d.postprocessor_version;
    cfg->mesh_nodes = d.mesh_nodes;
    cfg->instability_scale = d.instability_scale;
    cfg->failure_rate = d.failure_rate;
    cfg->failure_offset = d.failure_offset;
    cfg->seed = d.seed;
}

srk_status srk_testbed_eval(const srk_space* space, const srk_testbed_config* cfg,
                            const double* x_physical, int d, double* y, int* failed) {
    if (!space || !cfg || !x_physical || !y) return fail_input("srk_testbed_eval: null argument");
    if (d != space->s.dim()) return fail_input("srk_testbed_eval: dimension mismatch");
    return guarded([&] {
        const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(x_physical, d);
        const auto rec = testbed::run(space->s, to_core(*cfg), x);
        *y = rec.y;
        if (failed) *failed = rec.failed() ? 1 : 0;
    });
}

srk_status srk_testbed_run(const srk_space* space, const srk_testbed_config* cfg,
                           const srk_design* design, srk_base** out) {
    if (!space || !cfg || !design || !out) return fail_input("srk_testbed_run: null argument");
    return guarded([&] {
        *out = new srk_base{testbed::run_design(space->s, to_core(*cfg), design->d)};
    });
}

/* --------------------------------- bases ------------------------------- */

srk_status srk_base_load_csv(const char* path, srk_base** out) {
    if (!path || !out) return fail_input("srk_base_load_csv: null argument");
    return guarded([&] { *out = new srk_base{load_base_csv(path)}; });
}

srk_status srk_base_save_csv(const srk_base* base, const char* path) {
    if (!base || !path) return fail_input("srk_base_save_csv: null argument");
    return guarded([&] { save_base_csv(base->b, path); });
}

int srk_base_size(const srk_base* base) { return base ? base->b.n() : 0; }
int srk_base_dim(const srk_base* base) { return base ? base->b.dim() : 0; }

srk_status srk_base_get(const srk_base* base, int i, double* x_physical, double* y) {
    if (!base) return fail_input("srk_base_get: null argument");
    if (i < 0 || i >= base->b.n()) return fail_input("srk_base_get: index out of range");
    if (x_physical)
        for (int j = 0; j < base->b.dim(); ++j) x_physical[j] = base->b.X(i, j);
    if (y) *y = base->b.y[i];
    return SRK_OK;
}

const char* srk_base_warnings(const srk_base* base, int i) {
    if (!base || i < 0 || i >= base->b.n()) return nullptr;
    static thread_local std::string empty;
    if (base->b.warnings.empty()) return empty.c_str();
    return base->b.warnings[i].c_str();
}

const char* srk_base_column_name(const srk_base* base, int i) {
    if (!base || i < 0 || i >= base->b.dim()) return nullptr;
    return base->b.names[i].c_str();
}

srk_status srk_base_set_space(srk_base* base, const srk_space* space) {
    if (!base || !space) return fail_input("srk_base_set_space: null argument");
    if (space->s.dim() != base->b.dim())
        return fail_input("srk_base_set_space: dimension mismatch");
    base->b.lo = space->s.lo;
    base->b.hi = space->s.hi;
    base->b.names = space->s.names;
    return SRK_OK;
}

void srk_base_free(srk_base* base) { delete base; }

/* -------------------------------- fitting ------------------------------ */

void srk_kriging_config_default(srk_kriging_config* cfg) {
    if (!cfg) return;
    const kriging::KrigingConfig d;
    cfg->seed = d.seed;
    cfg->subsample_size = d.subsample_size;
    cfg->restarts = d.restarts;
    cfg->max_evals = d.max_evals;
    cfg->ell_min = d.ell_min;
    cfg->ell_max = d.ell_max;
    cfg->alpha_max = d.alpha_max;
    cfg->profile_grid = d.profile_grid;
}

void srk_kernel_config_default(srk_kernel_config* cfg) {
    if (!cfg) return;
    const kernelreg::KernelConfig d;
    cfg->m = d.m;
    cfg->lambda = d.lambda;
    cfg->classical_gcv = d.classical_gcv ? 1 : 0;
    cfg->grid_size = d.grid_size;
    cfg->lambda_min = d.lambda_min;
    cfg->lambda_max = d.lambda_max;
}

void srk_mlp_config_default(srk_mlp_config* cfg) {
    if (!cfg) return;
    const neuralnet::MlpConfig d;
    cfg->seed = d.seed;
    cfg->restarts = d.restarts;
    cfg->epochs = d.epochs;
    cfg->batch_size = d.batch_size;
    cfg->learning_rate = d.learning_rate;
    cfg->momentum = d.momentum;
    cfg->holdout_fraction = d.holdout_fraction;
    cfg->widths = nullptr;
    cfg->n_widths = 0;
}

srk_status srk_fit_kriging(const srk_base* learn, const srk_kriging_config* cfg,
                           srk_model** out) {
    if (!learn || !cfg || !out) return fail_input("srk_fit_kriging: null argument");
    return guarded([&] {
        kriging::KrigingConfig c;
        c.seed = cfg->seed;
        c.subsample_size = cfg->subsample_size;
        c.restarts = cfg->restarts;
        c.max_evals = cfg->max_evals;
        c.ell_min = cfg->ell_min;
        c.ell_max = cfg->ell_max;
        c.alpha_max = cfg->alpha_max;
        c.profile_grid = cfg->profile_grid;
        *out = new srk_model{model::fit_kriging(learn->b, c)};
    });
}

srk_status srk_fit_kernel(const srk_base* learn, const srk_kernel_config* cfg,
                          srk_model** out) {
    if (!learn || !cfg || !out) return fail_input("srk_fit_kernel: null argument");
    return guarded([&] {
        kernelreg::KernelConfig c;
        c.m = cfg->m;
        c.lambda = cfg->lambda;
        c.classical_gcv = cfg->classical_gcv != 0;
        c.grid_size = cfg->grid_size;
        c.lambda_min = cfg->lambda_min;
        c.lambda_max = cfg->lambda_max;
        *out = new srk_model{model::fit_kernel(learn->b, c)};
    });
}

srk_status srk_fit_mlp(const srk_base* learn, const srk_mlp_config* cfg, srk_model** out) {
    if (!learn || !cfg || !out) return fail_input("srk_fit_mlp: null argument");
    return guarded([&] {
        neuralnet::MlpConfig c;
        c.seed = cfg->seed;
        c.restarts = cfg->restarts;
        c.epochs = cfg->epochs;
        c.batch_size = cfg->batch_size;
        c.learning_rate = cfg->learning_rate;
        c.momentum = cfg->momentum;
        c.holdout_fraction = cfg->holdout_fraction;
        std::vector<int> widths;
        if (cfg->widths && cfg->n_widths > 0)
            widths.assign(cfg->widths, cfg->widths + cfg->n_widths);
        else
            widths = {2, 4, 8};
        *out = new srk_model{model::fit_mlp(learn->b, widths, c)};
    });
}

/* --------------------------------- models ------------------------------ */

srk_status srk_model_save(const srk_model* model, const char* path) {
    if (!model || !path) return fail_input("srk_model_save: null argument");
    return guarded([&] { model::save_model(model->m, path); });
}

srk_status srk_model_load(const char* path, srk_model** out) {
    if (!path || !out) return fail_input("srk_model_load: null argument");
    return guarded([&] { *out = new srk_model{model::load_model(path)}; });
}

const char* srk_model_method(const srk_model* model) {
    return model ? model::method_name(model->m.method) : nullptr;
}

int srk_model_train_size(const srk_model* model) {
    return model ? model->m.train_size() : 0;
}

int srk_model_dim(const srk_model* model) { return model ? model->m.dim() : 0; }

srk_status srk_model_summary(const srk_model* model, char* buf, size_t buflen) {
    if (!model || !buf || buflen == 0) return fail_input("srk_model_summary: null argument");
    return guarded([&] {
        const std::string s = model->m.summary();
        const size_t k = std::min(buflen - 1, s.size());
        std::memcpy(buf, s.data(), k);
        buf[k] = '\0';
    });
}

srk_status srk_model_predict(const srk_model* model, const double* x_physical, int d,
                             double* mean, double* sd) {
    if (!model || !x_physical || !mean) return fail_input("srk_model_predict: null argument");
    if (d != model->m.dim()) return fail_input("srk_model_predict: dimension mismatch");
    return guarded([&] {
        const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(x_physical, d);
        const auto p = model->m.predict(x);
        *mean = p.mean;
        if (sd) *sd = p.sd;
    });
}

srk_status srk_model_loo(const srk_model* model, double* errors, double* sds) {
    if (!model || !errors) return fail_input("srk_model_loo: null argument");
    return guarded([&] {
        switch (model->m.method) {
            case model::Method::kriging: {
                const auto& m = std::get<kriging::KrigingModel>(model->m.impl);
                const auto [e, v] = m.loo_errors();
                for (Eigen::Index i = 0; i < e.size(); ++i) errors[i] = e[i];
                if (sds)
                    for (Eigen::Index i = 0; i < v.size(); ++i) sds[i] = std::sqrt(v[i]);
                break;
            }
            case model::Method::kernel: {
                if (sds)
                    throw input_error("srk_model_loo: kernel models have no per-point sds");
                const auto& m = std::get<kernelreg::KernelModel>(model->m.impl);
                const Eigen::VectorXd e = m.loo_errors();
                for (Eigen::Index i = 0; i < e.size(); ++i) errors[i] = e[i];
                break;
            }
            case model::Method::mlp:
                throw input_error("srk_model_loo: no virtual LOO for MLP models");
        }
    });
}

void srk_model_free(srk_model* model) { delete model; }

/* ------------------------------ diagnostics ---------------------------- */

srk_status srk_diagnose(const srk_model* model, const srk_base* test, srk_report* out) {
    if (!model || !test || !out) return fail_input("srk_diagnose: null argument");
    return guarded([&] {
        const auto rep = model::diagnose_model(model->m, test->b);
        out->rmse = rep.rmse;
        out->q2 = rep.q2;
        out->q90 = rep.q_quantiles.at(0.9);
        out->q95 = rep.q_quantiles.at(0.95);
        out->has_cir = rep.cir.has_value() ? 1 : 0;
        out->cir = rep.cir.value_or(0.0);
        out->sd_output = rep.sd_output;
        out->rmse_hat = rep.rmse_hat;
        out->q2_hat = rep.q2_hat;
    });
}

srk_status srk_outliers(const srk_model* model, int* indices, double* normalized_errors) {
    if (!model || !indices || !normalized_errors)
        return fail_input("srk_outliers: null argument");
    return guarded([&] {
        const Eigen::VectorXd errors = model->m.learning_errors();
        const auto ranking = model->m.method == model::Method::kriging
            ? diagnostics::normalized_errors(errors, model->m.learning_error_sds())
            : diagnostics::normalized_errors(errors, model->m.rmse_hat);
        for (std::size_t k = 0; k < ranking.indices.size(); ++k) {
            indices[k] = ranking.indices[k];
            normalized_errors[k] = ranking.normalized_errors[ranking.indices[k]];
        }
    });
}

srk_status srk_roc(const srk_model* model, const srk_base* test, double threshold,
                   int grid_size, double tau_min, double tau_max, double* taus,
                   double* fprs, double* tprs, int* n_points, double* auc) {
    if (!model || !test || !taus || !fprs || !tprs || !n_points || !auc)
        return fail_input("srk_roc: null argument");
    return guarded([&] {
        const LearningBase& tb = test->b;
        Eigen::VectorXd means(tb.n()), sds(tb.n());
        for (int i = 0; i < tb.n(); ++i) {
            const auto p = model->m.predict(tb.X.row(i));
            means[i] = p.mean;
            sds[i] = p.sd;
        }
        std::vector<double> grid;
        if (grid_size <= 0) {
            grid = diagnostics::default_tau_grid();
        } else {
            grid.push_back(-std::numeric_limits<double>::infinity());
            for (int i = 0; i < grid_size; ++i)
                grid.push_back(tau_min + (tau_max - tau_min) * static_cast<double>(i) /
                                             std::max(1, grid_size - 1));
            grid.push_back(std::numeric_limits<double>::infinity());
        }
        const auto curve = diagnostics::roc(means, sds, tb.y, grid, threshold);
        for (std::size_t k = 0; k < curve.taus.size(); ++k) {
            taus[k] = curve.taus[k];
            fprs[k] = curve.fpr[k];
            tprs[k] = curve.tpr[k];
        }
        *n_points = static_cast<int>(curve.taus.size());
        *auc = curve.auc;
    });
}

} /* extern "C" */
