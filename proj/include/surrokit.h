/*
 * surrokit - surrogate metamodeling toolkit
 *
 * C interface over the C++ core: opaque handles, integer status codes,
 * thread-local error messages. Every function returning srk_status gives
 * SRK_OK on success; on failure the handle outputs are left untouched and
 * srk_last_error() describes the problem.
 */
#ifndef SURROKIT_H
#define SURROKIT_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum srk_status {
    SRK_OK = 0,
    SRK_ERR_INPUT = 2,   /* bad arguments, malformed files, domain violations */
    SRK_ERR_NUMERIC = 3  /* factorization failures, divergence, degeneracy */
} srk_status;

const char* srk_version(void);

/* Message for the most recent failing call on this thread. */
const char* srk_last_error(void);

typedef struct srk_space srk_space;
typedef struct srk_design srk_design;
typedef struct srk_base srk_base;
typedef struct srk_model srk_model;

/* ------------------------------------------------------------------ */
/* Input spaces                                                        */

/* The built-in 11-parameter fuel-pin study domain. */
srk_status srk_space_default(srk_space** out);
srk_status srk_space_load_csv(const char* path, srk_space** out);
srk_status srk_space_save_csv(const srk_space* space, const char* path);
int srk_space_dim(const srk_space* space);
/* Returns NULL on bad index. */
const char* srk_space_name(const srk_space* space, int i);
srk_status srk_space_bounds(const srk_space* space, int i, double* lo, double* hi);
void srk_space_free(srk_space* space);

/* ------------------------------------------------------------------ */
/* Designs                                                             */

/* Latin hypercube improved by maximin swaps; deterministic per seed. */
srk_status srk_design_lhs_maximin(const srk_space* space, int n, uint64_t seed, int sweeps,
                                  srk_design** out);
/* Line segment between normalized endpoints a and b, count points. */
srk_status srk_design_segment(const srk_space* space, const double* a_norm,
                              const double* b_norm, int d, int count, srk_design** out);

typedef int (*srk_row_predicate)(const double* row_physical, int d, void* ctx);
srk_status srk_design_filter(const srk_design* design, srk_row_predicate keep, void* ctx,
                             srk_design** out);
/* Built-in pin-geometry feasibility rule (clad encloses hole, gap, walls). */
srk_status srk_design_filter_geometry(const srk_design* design, srk_design** out);

int srk_design_rows(const srk_design* design);
int srk_design_dim(const srk_design* design);
/* row_physical must hold srk_design_dim doubles. */
srk_status srk_design_get_row(const srk_design* design, int i, double* row_physical);
srk_status srk_design_save_csv(const srk_design* design, const char* path);
srk_status srk_design_load_csv(const srk_space* space, const char* path, srk_design** out);
void srk_design_free(srk_design* design);

/* ------------------------------------------------------------------ */
/* Testbed code manager                                                */

typedef struct srk_testbed_config {
    int preprocessor_version;   /* 1: unstable meshing, 2: aligned meshing */
    int postprocessor_version;  /* 1: W1 rows kept in bases, 2: dropped */
    int mesh_nodes;
    double instability_scale;   /* output units */
    double failure_rate;
    double failure_offset;      /* output units */
    uint64_t seed;
} srk_testbed_config;

void srk_testbed_config_default(srk_testbed_config* cfg);

/* One simulation. failed is set to 1 when the W1 warning fired. */
srk_status srk_testbed_eval(const srk_space* space, const srk_testbed_config* cfg,
                            const double* x_physical, int d, double* y, int* failed);

/* Whole design through the manager; postprocessor policy applied. */
srk_status srk_testbed_run(const srk_space* space, const srk_testbed_config* cfg,
                           const srk_design* design, srk_base** out);

/* ------------------------------------------------------------------ */
/* Bases                                                               */

srk_status srk_base_load_csv(const char* path, srk_base** out);
srk_status srk_base_save_csv(const srk_base* base, const char* path);
int srk_base_size(const srk_base* base);
int srk_base_dim(const srk_base* base);
srk_status srk_base_get(const srk_base* base, int i, double* x_physical, double* y);
/* Semicolon-joined warning codes for row i; empty string when clean. */
const char* srk_base_warnings(const srk_base* base, int i);
/* Input column label, NULL on bad index. */
const char* srk_base_column_name(const srk_base* base, int i);
/* Overrides normalization bounds with the given space (must match dim). */
srk_status srk_base_set_space(srk_base* base, const srk_space* space);
void srk_base_free(srk_base* base);

/* ------------------------------------------------------------------ */
/* Fitting                                                             */

typedef struct srk_kriging_config {
    uint64_t seed;
    int subsample_size;  /* step-1 likelihood subsample, capped at n */
    int restarts;
    int max_evals;       /* optimizer budget per restart */
    double ell_min;
    double ell_max;
    double alpha_max;
    int profile_grid;
} srk_kriging_config;

typedef struct srk_kernel_config {
    int m;               /* Sobolev smoothness order, 1..4 */
    double lambda;       /* < 0 selects by GCV */
    int classical_gcv;   /* 0: criterion as printed, 1: squared variant */
    int grid_size;
    double lambda_min;
    double lambda_max;
} srk_kernel_config;

typedef struct srk_mlp_config {
    uint64_t seed;
    int restarts;
    int epochs;
    int batch_size;
    double learning_rate;
    double momentum;
    double holdout_fraction;
    const int* widths;   /* candidate hidden widths; NULL for default {2,4,8} */
    int n_widths;
} srk_mlp_config;

void srk_kriging_config_default(srk_kriging_config* cfg);
void srk_kernel_config_default(srk_kernel_config* cfg);
void srk_mlp_config_default(srk_mlp_config* cfg);

srk_status srk_fit_kriging(const srk_base* learn, const srk_kriging_config* cfg,
                           srk_model** out);
srk_status srk_fit_kernel(const srk_base* learn, const srk_kernel_config* cfg,
                          srk_model** out);
srk_status srk_fit_mlp(const srk_base* learn, const srk_mlp_config* cfg, srk_model** out);

/* ------------------------------------------------------------------ */
/* Models                                                              */

srk_status srk_model_save(const srk_model* model, const char* path);
srk_status srk_model_load(const char* path, srk_model** out);
/* "kriging", "kernel" or "mlp". */
const char* srk_model_method(const srk_model* model);
int srk_model_train_size(const srk_model* model);
int srk_model_dim(const srk_model* model);
/* Human-readable fit summary (hyperparameters, selection traces). */
srk_status srk_model_summary(const srk_model* model, char* buf, size_t buflen);

/* Prediction at a physical-units point. sd is the predictive standard
 * deviation for kriging and the learning-base RMSE estimate otherwise. */
srk_status srk_model_predict(const srk_model* model, const double* x_physical, int d,
                             double* mean, double* sd);

/* Virtual leave-one-out over the model's learning base. errors receives
 * observed-minus-predicted residuals (train_size doubles). sds, kriging
 * only, receives the per-point LOO predictive standard deviations; pass
 * NULL otherwise. Not available for MLP models. */
srk_status srk_model_loo(const srk_model* model, double* errors, double* sds);

void srk_model_free(srk_model* model);

/* ------------------------------------------------------------------ */
/* Diagnostics                                                         */

typedef struct srk_report {
    double rmse;
    double q2;
    double q90;       /* 0.9 quantile of absolute test errors */
    double q95;
    double cir;       /* 90% interval coverage; kriging only */
    int has_cir;
    double sd_output; /* test base */
    double rmse_hat;  /* learning-base estimates */
    double q2_hat;
} srk_report;

srk_status srk_diagnose(const srk_model* model, const srk_base* test, srk_report* out);

/* Learning-base outlier ranking by |normalized error|, descending.
 * indices and normalized_errors must hold train_size entries;
 * normalized_errors follows the ranking order. */
srk_status srk_outliers(const srk_model* model, int* indices, double* normalized_errors);

/* ROC of the tunable safety classifier on a test base. Arrays must hold
 * grid_size + 2 entries (the grid plus two infinite sentinels); pass
 * grid_size <= 0 for the default 400-point grid on [-10,10]. */
srk_status srk_roc(const srk_model* model, const srk_base* test, double threshold,
                   int grid_size, double tau_min, double tau_max, double* taus,
                   double* fprs, double* tprs, int* n_points, double* auc);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SURROKIT_H */
