#include "cfd/catalog.hpp"
#include "cfd/errors.hpp"
#include "cfd/measure.hpp"
#include "cfd/strings.hpp"
#include "cfd/tube.hpp"

#include "doctest.h"

#include <cmath>
#include <numbers>

using namespace cfd;

namespace {

const double pi = std::numbers::pi;
const double log3 = std::log(3.0);
const double D_cantor = std::log(2.0) / log3;

// Self-similarity of the Cantor function, independent of the digit loop.
double cantor_recursive(double x, int depth = 50) {
    if (depth == 0 || x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    if (x < 1.0 / 3.0) return 0.5 * cantor_recursive(3.0 * x, depth - 1);
    if (x <= 2.0 / 3.0) return 0.5;
    return 0.5 + 0.5 * cantor_recursive(3.0 * x - 2.0, depth - 1);
}

}  // namespace

TEST_CASE("rasterized prefractals") {
    raster_set g = rasterize({raster_kind::gasket, 1, 1024, 0.0});
    CHECK(g.occupied_area() == doctest::Approx(0.75 * std::sqrt(3.0) / 4.0).epsilon(0.01));
    raster_set c = rasterize({raster_kind::carpet, 2, 729, 0.0});
    CHECK(c.occupied_area() == doctest::Approx(64.0 / 81.0).epsilon(1e-9));
    CHECK_THROWS_AS(rasterize({raster_kind::gasket, 0, 1024, 0.0}), bad_parameter);
    CHECK_THROWS_AS(rasterize({raster_kind::gasket, 3, 128, 0.0}), bad_parameter);
    CHECK_THROWS_AS(rasterize({raster_kind::gasket, 3, 40000, 0.0}), resource_limit);
}

TEST_CASE("cantor function") {
    CHECK(cantor_function(0.0) == 0.0);
    CHECK(cantor_function(1.0) == 1.0);
    CHECK(cantor_function(1.0 / 3.0) == doctest::Approx(0.5));
    for (int k = 1; k < 81; ++k) {
        double x = k / 81.0;
        CHECK(cantor_function(x) == doctest::Approx(cantor_recursive(x)).epsilon(1e-12));
    }
    for (double x : {0.1, 0.25, 0.7071, 0.9, 0.123456})
        CHECK(cantor_function(x) == doctest::Approx(cantor_recursive(x)).epsilon(1e-12));
}

TEST_CASE("distance transform against brute force") {
    raster_set r = rasterize({raster_kind::gasket, 3, 256, 0.05});
    auto d2 = squared_distance(r);
    std::vector<std::pair<int, int>> occ;
    for (int j = 0; j < r.n; ++j)
        for (int i = 0; i < r.n; ++i)
            if (r.set[r.index(i, j)]) occ.emplace_back(i, j);
    for (int j = 0; j < r.n; j += 17)
        for (int i = 0; i < r.n; i += 13) {
            double best = 1e30;
            for (auto [a, b] : occ) best = std::min(best, double((a - i) * (a - i) + (b - j) * (b - j)));
            CHECK(d2[r.index(i, j)] == doctest::Approx(best));
        }
}

TEST_CASE("analytic tubes") {
    auto sq = tube_volume({raster_kind::square_boundary, 0, 1024, 0.0}, {0.05, 0.1, 0.2});
    CHECK(sq.volume[1] == doctest::Approx(0.36).epsilon(0.01));
    CHECK(sq.volume[0] == doctest::Approx(1.0 - 0.81).epsilon(0.01));
    auto disk = tube_volume({raster_kind::disk_rfd, 0, 1024, 0.0}, {0.05, 0.2, 0.4});
    for (std::size_t k = 0; k < disk.eps.size(); ++k) {
        double e = disk.eps[k];
        CHECK(disk.volume[k] == doctest::Approx(pi - pi * (1.0 - e) * (1.0 - e)).epsilon(0.01));
    }
    CHECK_THROWS_AS(tube_volume({raster_kind::disk_rfd, 0, 1024, 0.0}, {0.001}), epsilon_too_small);
}

TEST_CASE("resolution convergence") {
    std::vector<double> eps{0.03, 0.06, 0.1};
    for (raster_spec s : {raster_spec{raster_kind::gasket, 5, 1024, 0.12}, raster_spec{raster_kind::square_boundary, 0, 1024, 0.0},
                          raster_spec{raster_kind::disk_rfd, 0, 1024, 0.0}}) {
        auto t = tube_volume(s, eps);
        raster_spec f = s;
        f.cells = 2048;
        raster_set r2 = rasterize(f);
        auto v2 = raw_tube(r2, squared_distance(r2), eps);
        raster_set r1 = rasterize(s);
        auto v1 = raw_tube(r1, squared_distance(r1), eps);
        for (std::size_t k = 0; k < eps.size(); ++k) CHECK(std::abs(v2[k] - v1[k]) <= t.err[k]);
    }
}

TEST_CASE("gasket raster against the tube series") {
    auto series = series_for(catalog_get("gasket"), 100);
    std::vector<double> eps{0.05, 0.1};
    auto t = tube_volume({raster_kind::gasket, 9, 2048, 0.11}, eps);
    for (std::size_t k = 0; k < eps.size(); ++k) {
        double v = eval_series(series, eps[k]).value;
        CHECK(std::abs(t.volume[k] - v) / v < 0.02);
    }
}

TEST_CASE("dimension fits") {
    auto cs = fractal_string::cantor();
    auto tc = tube_from_function([&](double e) { return tube_exact(cs, e); }, log_grid(1e-7, 1e-2, 60), 1.0,
                                 "cantor");
    auto dc = dim_fit(tc, 1);
    CHECK(std::abs(dc.D - D_cantor) < 0.01);

    auto as = fractal_string::a_string(1.0);
    auto ta = tube_from_function([&](double e) { return tube_exact(as, e); }, log_grid(1e-8, 1e-3, 60),
                                 as.total_length(), "a_string");
    CHECK(std::abs(dim_fit(ta, 1).D - 0.5) < 0.01);

    auto tg = tube_volume({raster_kind::gasket, 0, 3072, 0.1}, log_grid(0.0025, 0.1, 30));
    CHECK(std::abs(dim_fit(tg, 2).D - std::log(3.0) / std::log(2.0)) < 0.03);

    CHECK_THROWS_AS(dim_fit(tube_from_function([&](double e) { return tube_exact(cs, e); }, log_grid(1e-3, 1e-2, 20),
                                               1.0, "cantor"),
                            1),
                    insufficient_range);
}

TEST_CASE("contents") {
    auto cs = fractal_string::cantor();
    auto V = [&](double e) { return tube_exact(cs, e); };
    auto b = contents(V, D_cantor, 1, 1e-9, 0.0, 3.0);
    CHECK(std::abs(b.lower - 2.4950) < 1e-3);
    CHECK(std::abs(b.upper - 2.5830) < 1e-3);
    const double D = D_cantor;
    CHECK(b.lower == doctest::Approx(std::pow(2.0, 1.0 - D) * std::pow(D, -D) * std::pow(1.0 - D, D - 1.0)).epsilon(1e-5));
    CHECK(b.upper == doctest::Approx(std::pow(2.0, 2.0 - D_cantor)).epsilon(1e-5));

    auto as = fractal_string::a_string(1.0);
    auto ba = contents([&](double e) { return tube_exact(as, e); }, 0.5, 1, 1e-10, 1e-8);
    CHECK(ba.lower == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(0.01));
    CHECK(ba.upper == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(0.01));

    auto series = series_for(catalog_get("cantor_graph"), 100);
    auto eg = log_grid(0.003, 0.1, 8);
    auto tg = tube_volume({raster_kind::cantor_graph_rfd, 0, 4096, 0.0}, eg);
    for (std::size_t k = 0; k < eg.size(); ++k) {
        double v = eval_series(series, eg[k]).value;
        CHECK(std::abs(tg.volume[k] - v) / v < 0.03);
    }
    auto bg = contents([&](double e) { return eval_series(series, e).value; }, 1.0, 2, 1e-14, 1e-12);
    CHECK(bg.lower == doctest::Approx(2.0).epsilon(0.05));
    CHECK(bg.upper == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("average contents") {
    auto cs = fractal_string::cantor();
    auto rc = average_content([&](double e) { return tube_exact(cs, e); }, D_cantor, 1, 1e-8);
    double expected = std::pow(2.0, 1.0 - D_cantor) / (D_cantor * (1.0 - D_cantor)) / (2.0 * log3);
    CHECK(std::abs(rc.value - expected) < 1e-3);

    auto as = fractal_string::a_string(1.0);
    auto ra = average_content([&](double e) { return tube_exact(as, e); }, 0.5, 1, 1e-8);
    CHECK(std::abs(ra.value - 2.0 * std::sqrt(2.0)) < 1e-2);

    auto one = average_content([](double t) { return std::pow(t, 0.7); }, 0.3, 1, 1e-8);
    CHECK(one.value == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(average_content([](double t) { return std::pow(t, 0.5) * (2.0 + std::log(t)); }, 0.5, 1, 1e-8),
                    not_converged);
}

TEST_CASE("oscillations") {
    auto cs = fractal_string::cantor();
    auto oc = oscillation_detect([&](double e) { return tube_exact(cs, e); }, D_cantor, 1, 1e-9, 1e-3);
    CHECK(oc.period == doctest::Approx(log3).epsilon(0.02));
    CHECK(oc.amplitude == doctest::Approx(0.088).epsilon(0.1));

    auto as = fractal_string::a_string(1.0);
    auto oa = oscillation_detect([&](double e) { return tube_exact(as, e); }, 0.5, 1, 1e-9, 1e-5);
    CHECK(oa.amplitude <= 0.01 * 2.0 * std::sqrt(2.0));

    auto lp = fractal_string::lapma(0.5, 14.134725, 0.01);
    std::vector<double> u, p;
    const int n = 4096;
    for (int k = 0; k < n; ++k) {
        double lx = std::log(1e4) + (std::log(1e8) - std::log(1e4)) * k / (n - 1);
        double x = std::exp(lx);
        u.push_back(lx);
        p.push_back(static_cast<double>(counting(lp, x)) / std::sqrt(x));
    }
    auto ol = oscillation_detect(u, p);
    CHECK(ol.semi_amplitude == doctest::Approx(0.02).epsilon(0.2));
    CHECK(ol.period == doctest::Approx(2.0 * pi / 14.134725).epsilon(0.02));
}

TEST_CASE("determinism across workers") {
    raster_spec s{raster_kind::carpet, 4, 512, 0.1};
    auto a = tube_volume(s, {0.02, 0.05}, 1);
    auto b = tube_volume(s, {0.02, 0.05}, 3);
    CHECK(a.volume == b.volume);
    CHECK(a.err == b.err);
}
