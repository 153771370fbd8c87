#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "doe.hpp"
#include "errors.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <vector>

using namespace surrokit;

namespace {
double min_pairwise(const Eigen::MatrixXd& U) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < U.rows(); ++i)
        for (Eigen::Index j = i + 1; j < U.rows(); ++j)
            best = std::min(best, (U.row(i) - U.row(j)).norm());
    return best;
}

doe::InputSpace unit_space(int d) {
    doe::InputSpace s;
    s.lo = Eigen::VectorXd::Zero(d);
    s.hi = Eigen::VectorXd::Ones(d);
    for (int i = 0; i < d; ++i) s.names.push_back("u" + std::to_string(i + 1));
    return s;
}
} // namespace

TEST_CASE("default study space has the documented bounds") {
    const auto s = doe::InputSpace::default_pin_study();
    REQUIRE(s.dim() == 11);
    CHECK(s.lo[0] == 360.0);
    CHECK(s.hi[0] == 440.0);
    CHECK(s.lo[7] == 150.0);
    CHECK(s.hi[7] == 440.0);
    CHECK(s.lo[10] == 32.0);
    CHECK(s.hi[10] == 94.0);
    s.validate();
}

TEST_CASE("two points in one dimension land in distinct halves") {
    const auto d = doe::lhs_maximin(unit_space(1), 2, 4, 5);
    const double a = d.normalized(0, 0), b = d.normalized(1, 0);
    CHECK(std::min(a, b) < 0.5);
    CHECK(std::max(a, b) >= 0.5);
}

TEST_CASE("latin property: one point per stratum per dimension") {
    for (std::uint64_t seed : {1ull, 9ull, 33ull}) {
        const auto d = doe::lhs_maximin(unit_space(4), 23, seed, 3);
        for (int j = 0; j < 4; ++j) {
            std::vector<double> col(23);
            for (int i = 0; i < 23; ++i) col[i] = d.normalized(i, j);
            std::sort(col.begin(), col.end());
            for (int i = 0; i < 23; ++i) {
                CHECK(col[i] >= i / 23.0);
                CHECK(col[i] < (i + 1) / 23.0);
            }
        }
    }
}

TEST_CASE("marginal uniformity in Kolmogorov distance") {
    const int n = 50;
    const auto d = doe::lhs_maximin(unit_space(3), n, 17, 5);
    for (int j = 0; j < 3; ++j) {
        std::vector<double> col(n);
        for (int i = 0; i < n; ++i) col[i] = d.normalized(i, j);
        std::sort(col.begin(), col.end());
        double ks = 0.0;
        for (int i = 0; i < n; ++i) {
            ks = std::max(ks, std::abs((i + 1.0) / n - col[i]));
            ks = std::max(ks, std::abs(static_cast<double>(i) / n - col[i]));
        }
        CHECK(ks < 1.0 / n + 1e-12);
    }
}

TEST_CASE("maximin improvement never lowers the minimum distance") {
    const auto space = unit_space(3);
    for (std::uint64_t seed : {2ull, 12ull, 77ull}) {
        const auto before = doe::lhs_maximin(space, 30, seed, 0);
        const auto after = doe::lhs_maximin(space, 30, seed, 10);
        CHECK(min_pairwise(after.normalized) >= min_pairwise(before.normalized) - 1e-15);
    }
}

TEST_CASE("lhs_maximin rejects tiny designs") {
    CHECK_THROWS_AS(doe::lhs_maximin(unit_space(2), 1, 0, 1), input_error);
}

TEST_CASE("round-trip normalize/denormalize") {
    const auto s = doe::InputSpace::default_pin_study();
    const auto d = doe::lhs_maximin(s, 40, 5, 2);
    const Eigen::MatrixXd back = s.denormalize_rows(s.normalize_rows(d.rows));
    for (int i = 0; i < 40; ++i)
        for (int j = 0; j < 11; ++j)
            CHECK(back(i, j) == doctest::Approx(d.rows(i, j)).epsilon(1e-12));
}

TEST_CASE("feasibility filter keeps matching rows only") {
    const auto space = unit_space(2);
    const auto d = doe::lhs_maximin(space, 20, 3, 2);

    int removed = -1;
    const auto all = doe::feasibility_filter(d, [](const Eigen::VectorXd&) { return true; },
                                             &removed);
    CHECK(all.n() == 20);
    CHECK(removed == 0);

    const auto none = doe::feasibility_filter(d, [](const Eigen::VectorXd&) { return false; },
                                              &removed);
    CHECK(none.n() == 0);
    CHECK(removed == 20);

    const auto half =
        doe::feasibility_filter(d, [](const Eigen::VectorXd& r) { return r[0] > 0.5; });
    for (int i = 0; i < half.n(); ++i) CHECK(half.rows(i, 0) > 0.5);
}

TEST_CASE("pin geometry predicate removes exactly the violating rows") {
    // Widen the hole-diameter range so the clad constraint can fail.
    auto s = doe::InputSpace::default_pin_study();
    s.hi[2] = 9.0;
    const auto d = doe::lhs_maximin(s, 200, 21, 2);
    int removed = 0;
    const auto kept = doe::feasibility_filter(d, doe::pin_geometry_feasible, &removed);
    CHECK(removed > 0);
    for (int i = 0; i < kept.n(); ++i)
        CHECK(kept.rows(i, 3) > kept.rows(i, 2) + 2 * kept.rows(i, 4) + 2 * kept.rows(i, 5));
    int violating = 0;
    for (int i = 0; i < d.n(); ++i)
        if (!(d.rows(i, 3) > d.rows(i, 2) + 2 * d.rows(i, 4) + 2 * d.rows(i, 5))) ++violating;
    CHECK(removed == violating);
}

TEST_CASE("default ranges never trip the geometry predicate") {
    const auto s = doe::InputSpace::default_pin_study();
    const auto d = doe::lhs_maximin(s, 100, 8, 1);
    int removed = -1;
    doe::feasibility_filter(d, doe::pin_geometry_feasible, &removed);
    CHECK(removed == 0);
}

TEST_CASE("segment scans are evenly spaced") {
    const auto s = unit_space(3);
    Eigen::VectorXd a(3), b(3);
    a << 0.1, 0.2, 0.3;
    b << 0.9, 0.8, 0.7;

    const auto [two, t2] = doe::segment_scan(s, a, b, 2);
    CHECK(two.normalized.row(0).transpose() == a);
    CHECK(two.normalized.row(1).transpose() == b);

    const auto [three, t3] = doe::segment_scan(s, a, b, 3);
    CHECK((three.normalized.row(1).transpose() - 0.5 * (a + b)).norm() < 1e-15);

    const auto [scan, ts] = doe::segment_scan(s, a, b, 97);
    REQUIRE(scan.n() == 97);
    const double step = (b - a).norm() / 96.0;
    for (int k = 0; k + 1 < 97; ++k) {
        const double gap =
            (scan.normalized.row(k + 1) - scan.normalized.row(k)).norm();
        CHECK(gap == doctest::Approx(step).epsilon(1e-12));
    }
    CHECK(ts[0] == 0.0);
    CHECK(ts[96] == 1.0);

    CHECK_THROWS_AS(doe::segment_scan(s, a, a, 5), input_error);
    CHECK_THROWS_AS(doe::segment_scan(s, a, b, 1), input_error);
}

TEST_CASE("design CSV round trip") {
    namespace fs = std::filesystem;
    const auto s = doe::InputSpace::default_pin_study();
    const auto d = doe::lhs_maximin(s, 25, 99, 2);
    const auto path = (fs::temp_directory_path() / "surrokit_design_rt.csv").string();
    doe::save_design_csv(d, path);
    const auto back = doe::load_design_csv(s, path);
    REQUIRE(back.n() == 25);
    CHECK((back.rows - d.rows).cwiseAbs().maxCoeff() == 0.0);
    fs::remove(path);
}

TEST_CASE("space CSV round trip and validation errors") {
    namespace fs = std::filesystem;
    const auto s = doe::InputSpace::default_pin_study();
    const auto path = (fs::temp_directory_path() / "surrokit_space_rt.csv").string();
    doe::save_space_csv(s, path);
    const auto back = doe::load_space_csv(path);
    CHECK(back.names == s.names);
    CHECK((back.lo - s.lo).cwiseAbs().maxCoeff() == 0.0);
    fs::remove(path);

    doe::InputSpace bad = s;
    bad.lo[3] = bad.hi[3];
    CHECK_THROWS_WITH_AS(bad.validate(),
                         "input space: min >= max for 'clad_external_diameter_mm'",
                         input_error);
}
