// Exercises the shared-library C interface end to end: handles, status
// codes, error messages, and numeric agreement across the boundary.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <surrokit.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {
std::string tmp_path(const std::string& name) {
    return (fs::temp_directory_path() / name).string();
}

struct Fixture {
    srk_space* space = nullptr;
    srk_design* design = nullptr;
    srk_base* base = nullptr;

    Fixture(int n, std::uint64_t seed, double failure_rate = 0.0) {
        REQUIRE(srk_space_default(&space) == SRK_OK);
        REQUIRE(srk_design_lhs_maximin(space, n, seed, 2, &design) == SRK_OK);
        srk_testbed_config cfg;
        srk_testbed_config_default(&cfg);
        cfg.failure_rate = failure_rate;
        cfg.seed = seed;
        REQUIRE(srk_testbed_run(space, &cfg, design, &base) == SRK_OK);
    }
    ~Fixture() {
        srk_base_free(base);
        srk_design_free(design);
        srk_space_free(space);
    }
};
} // namespace

TEST_CASE("version and default space") {
    CHECK(std::string(srk_version()) == "1.0.0");
    srk_space* s = nullptr;
    REQUIRE(srk_space_default(&s) == SRK_OK);
    CHECK(srk_space_dim(s) == 11);
    CHECK(std::string(srk_space_name(s, 6)) == "pin_height_mm");
    CHECK(srk_space_name(s, 99) == nullptr);
    double lo = 0, hi = 0;
    CHECK(srk_space_bounds(s, 7, &lo, &hi) == SRK_OK);
    CHECK(lo == 150.0);
    CHECK(hi == 440.0);
    srk_space_free(s);
}

TEST_CASE("null arguments produce input errors with messages") {
    CHECK(srk_space_default(nullptr) == SRK_ERR_INPUT);
    CHECK(std::strlen(srk_last_error()) > 0);
    srk_space* s = nullptr;
    CHECK(srk_space_load_csv("/no/such/file.csv", &s) == SRK_ERR_INPUT);
    CHECK(std::string(srk_last_error()).find("no/such/file") != std::string::npos);
    srk_model* m = nullptr;
    CHECK(srk_model_load("/no/such/model.json", &m) == SRK_ERR_INPUT);
}

TEST_CASE("design handles expose rows and survive CSV round trips") {
    Fixture f(30, 5);
    CHECK(srk_design_rows(f.design) == 30);
    CHECK(srk_design_dim(f.design) == 11);
    std::vector<double> row(11);
    REQUIRE(srk_design_get_row(f.design, 3, row.data()) == SRK_OK);
    CHECK(row[0] >= 360.0);
    CHECK(row[0] <= 440.0);
    CHECK(srk_design_get_row(f.design, 99, row.data()) == SRK_ERR_INPUT);

    const auto path = tmp_path("srk_capi_design.csv");
    REQUIRE(srk_design_save_csv(f.design, path.c_str()) == SRK_OK);
    srk_design* back = nullptr;
    REQUIRE(srk_design_load_csv(f.space, path.c_str(), &back) == SRK_OK);
    CHECK(srk_design_rows(back) == 30);
    std::vector<double> row2(11);
    REQUIRE(srk_design_get_row(back, 3, row2.data()) == SRK_OK);
    for (int j = 0; j < 11; ++j) CHECK(row[j] == row2[j]);
    srk_design_free(back);
    fs::remove(path);
}

TEST_CASE("design filtering through a C predicate") {
    Fixture f(40, 7);
    auto pred = [](const double* row, int, void*) -> int { return row[0] > 400.0; };
    srk_design* kept = nullptr;
    REQUIRE(srk_design_filter(f.design, pred, nullptr, &kept) == SRK_OK);
    for (int i = 0; i < srk_design_rows(kept); ++i) {
        std::vector<double> row(11);
        srk_design_get_row(kept, i, row.data());
        CHECK(row[0] > 400.0);
    }
    srk_design_free(kept);
}

TEST_CASE("testbed eval is deterministic across calls") {
    Fixture f(10, 11);
    srk_testbed_config cfg;
    srk_testbed_config_default(&cfg);
    std::vector<double> x(11);
    srk_design_get_row(f.design, 0, x.data());
    double y1 = 0, y2 = 0;
    int fail1 = -1;
    REQUIRE(srk_testbed_eval(f.space, &cfg, x.data(), 11, &y1, &fail1) == SRK_OK);
    REQUIRE(srk_testbed_eval(f.space, &cfg, x.data(), 11, &y2, nullptr) == SRK_OK);
    CHECK(y1 == y2);
    CHECK(fail1 == 0);
}

TEST_CASE("bases round trip through CSV") {
    Fixture f(25, 13);
    const auto path = tmp_path("srk_capi_base.csv");
    REQUIRE(srk_base_save_csv(f.base, path.c_str()) == SRK_OK);
    srk_base* back = nullptr;
    REQUIRE(srk_base_load_csv(path.c_str(), &back) == SRK_OK);
    CHECK(srk_base_size(back) == 25);
    CHECK(srk_base_dim(back) == 11);
    CHECK(std::string(srk_base_column_name(back, 6)) == "pin_height_mm");
    double xa[11], xb[11], ya = 0, yb = 0;
    REQUIRE(srk_base_get(f.base, 7, xa, &ya) == SRK_OK);
    REQUIRE(srk_base_get(back, 7, xb, &yb) == SRK_OK);
    CHECK(ya == yb); // bit-exact thanks to round-trip formatting
    for (int j = 0; j < 11; ++j) CHECK(xa[j] == xb[j]);
    srk_base_free(back);
    fs::remove(path);
}

TEST_CASE("kriging fit, predict, loo and diagnostics through the C API") {
    Fixture f(60, 17);
    srk_kriging_config cfg;
    srk_kriging_config_default(&cfg);
    CHECK(cfg.subsample_size == 1000);
    CHECK(cfg.ell_max == 100.0);
    cfg.subsample_size = 60;
    cfg.restarts = 2;
    cfg.max_evals = 200;
    srk_model* m = nullptr;
    REQUIRE(srk_fit_kriging(f.base, &cfg, &m) == SRK_OK);
    CHECK(std::string(srk_model_method(m)) == "kriging");
    CHECK(srk_model_train_size(m) == 60);
    CHECK(srk_model_dim(m) == 11);

    // Prediction at a training point interpolates its output.
    double x[11], y = 0, mean = 0, sd = -1;
    srk_base_get(f.base, 4, x, &y);
    REQUIRE(srk_model_predict(m, x, 11, &mean, &sd) == SRK_OK);
    CHECK(mean == doctest::Approx(y).epsilon(1e-6));
    CHECK(sd >= 0.0);
    CHECK(srk_model_predict(m, x, 5, &mean, &sd) == SRK_ERR_INPUT);

    std::vector<double> errors(60), sds(60);
    REQUIRE(srk_model_loo(m, errors.data(), sds.data()) == SRK_OK);
    for (int i = 0; i < 60; ++i) CHECK(sds[i] >= 0.0);

    srk_report rep{};
    REQUIRE(srk_diagnose(m, f.base, &rep) == SRK_OK);
    CHECK(rep.has_cir == 1);
    CHECK(rep.rmse < 1e-5 * rep.sd_output); // training points interpolate
    CHECK(rep.q2 == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(rep.rmse_hat > 0.0);

    const auto path = tmp_path("srk_capi_model.json");
    REQUIRE(srk_model_save(m, path.c_str()) == SRK_OK);
    srk_model* back = nullptr;
    REQUIRE(srk_model_load(path.c_str(), &back) == SRK_OK);
    double mean2 = 0, sd2 = 0;
    REQUIRE(srk_model_predict(back, x, 11, &mean2, &sd2) == SRK_OK);
    CHECK(mean2 == doctest::Approx(mean).epsilon(1e-10));
    srk_model_free(back);
    srk_model_free(m);
    fs::remove(path);
}

TEST_CASE("kernel and mlp fits expose their conventions") {
    Fixture f(50, 19);
    srk_kernel_config kc;
    srk_kernel_config_default(&kc);
    srk_model* km = nullptr;
    REQUIRE(srk_fit_kernel(f.base, &kc, &km) == SRK_OK);
    char buf[4096];
    REQUIRE(srk_model_summary(km, buf, sizeof(buf)) == SRK_OK);
    CHECK(std::string(buf).find("lambda:") != std::string::npos);

    std::vector<double> errors(50);
    REQUIRE(srk_model_loo(km, errors.data(), nullptr) == SRK_OK);
    CHECK(srk_model_loo(km, errors.data(), errors.data()) == SRK_ERR_INPUT);

    // Kernel predictive sd equals its rmse_hat.
    double x[11], mean = 0, sd = 0;
    srk_base_get(f.base, 0, x, nullptr);
    REQUIRE(srk_model_predict(km, x, 11, &mean, &sd) == SRK_OK);
    srk_report rep{};
    REQUIRE(srk_diagnose(km, f.base, &rep) == SRK_OK);
    CHECK(rep.has_cir == 0);
    CHECK(sd == doctest::Approx(rep.rmse_hat).epsilon(1e-12));

    srk_mlp_config mc;
    srk_mlp_config_default(&mc);
    mc.epochs = 120;
    mc.restarts = 2;
    const int widths[] = {2, 4};
    mc.widths = widths;
    mc.n_widths = 2;
    srk_model* mm = nullptr;
    REQUIRE(srk_fit_mlp(f.base, &mc, &mm) == SRK_OK);
    CHECK(srk_model_loo(mm, errors.data(), nullptr) == SRK_ERR_INPUT);
    CHECK(std::string(srk_last_error()).find("MLP") != std::string::npos);

    std::vector<int> idx(50);
    std::vector<double> z(50);
    REQUIRE(srk_outliers(mm, idx.data(), z.data()) == SRK_OK);
    for (int i = 1; i < 50; ++i) CHECK(std::abs(z[i]) <= std::abs(z[i - 1]));

    srk_model_free(km);
    srk_model_free(mm);
}

TEST_CASE("roc through the C API flags degenerate labels") {
    Fixture f(50, 23);
    srk_kernel_config kc;
    srk_kernel_config_default(&kc);
    srk_model* km = nullptr;
    REQUIRE(srk_fit_kernel(f.base, &kc, &km) == SRK_OK);

    std::vector<double> taus(402), fprs(402), tprs(402);
    int n_points = 0;
    double auc = 0.0;
    REQUIRE(srk_roc(km, f.base, 300.0, 0, 0, 0, taus.data(), fprs.data(), tprs.data(),
                    &n_points, &auc) == SRK_OK);
    CHECK(n_points == 402);
    CHECK(auc > 0.5);
    CHECK(auc <= 1.0);

    // A threshold below every output leaves a single class.
    CHECK(srk_roc(km, f.base, -1e9, 0, 0, 0, taus.data(), fprs.data(), tprs.data(),
                  &n_points, &auc) == SRK_ERR_INPUT);
    srk_model_free(km);
}
