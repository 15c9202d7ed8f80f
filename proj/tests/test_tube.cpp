#include "cfd/catalog.hpp"
#include "cfd/errors.hpp"
#include "cfd/strings.hpp"
#include "cfd/tube.hpp"

#include "doctest.h"

#include <cmath>
#include <numbers>

using namespace cfd;

namespace {

const double pi = std::numbers::pi;

double ball_volume(int N) { return std::pow(pi, N / 2.0) / std::tgamma(N / 2.0 + 1.0); }

const tube_term* find_term(const tube_series& s, cplx w, int log_power) {
    for (const auto& t : s.terms)
        if (std::abs(t.omega - w) < 1e-7 && t.log_power == log_power) return &t;
    return nullptr;
}

}  // namespace

TEST_CASE("cantor string series against the exact tube") {
    auto cs = fractal_string::cantor();
    tube_series s = series_for(cs, 200);
    CHECK(s.pairs == 200);
    CHECK(s.validity == doctest::Approx(1.0 / 6.0));
    CHECK(s.terms.size() == 402);

    const double lo = std::log(1e-5);
    const double hi = std::log(1.0 / 6.0);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        double eps = std::exp(lo + (hi - lo) * i / 199.0);
        series_value v = eval_series(s, eps);
        double exact = tube_exact(cs, eps);
        worst = std::max(worst, std::abs(v.value - exact) / exact);
        CHECK(std::abs(v.imag) < 1e-12 * std::abs(v.value) + 1e-14);
        CHECK(std::abs(v.value - exact) <= v.tail_bound + 1e-12);
    }
    CHECK(worst <= 1e-4);
    CHECK_THROWS_AS(eval_series(s, 0.2), out_of_validity);

    const double D = std::log(2.0) / std::log(3.0);
    const tube_term* zero = find_term(s, 0.0, 0);
    REQUIRE(zero != nullptr);
    CHECK(std::abs(zero->coeff - cplx(-2.0)) < 1e-10);
    const tube_term* lead = find_term(s, D, 0);
    REQUIRE(lead != nullptr);
    CHECK(std::abs(lead->coeff - cplx(std::pow(2.0, 1.0 - D) / (D * (1.0 - D)) / (2.0 * std::log(3.0)))) < 1e-10);
}

TEST_CASE("catalog cantor string matches the string form") {
    tube_series a = series_for(catalog_get("cantor_string"), 50);
    tube_series b = series_for(fractal_string::cantor(), 50);
    for (double eps : {1e-4, 3e-3, 0.05, 1.0 / 6.0})
        CHECK(eval_series(a, eps).value == doctest::Approx(eval_series(b, eps).value).epsilon(1e-11));
}

TEST_CASE("closed tube formulas") {
    tube_series seg = series_for(catalog_get("unit_interval"));
    CHECK(seg.exact);
    for (double eps : {1e-3, 0.1, 0.4}) CHECK(eval_series(seg, eps).value == doctest::Approx(1.0 + 2.0 * eps).epsilon(1e-12));

    for (int N : {2, 3, 4}) {
        auto e = catalog_get("sphere", {N, 0.5});
        tube_series s = series_for(e);
        for (double eps : {1e-3, 0.1, 0.45}) {
            double exact = ball_volume(N) * (std::pow(1.0 + eps, N) - std::pow(1.0 - eps, N));
            CHECK(eval_series(s, eps).value == doctest::Approx(exact).epsilon(1e-11));
        }
    }
}

TEST_CASE("half square double pole terms") {
    tube_series s = series_for(catalog_get("half_square"), 20);
    const double L = std::log(2.0);
    const tube_term* t1 = find_term(s, 1.0, 1);
    const tube_term* t0 = find_term(s, 1.0, 0);
    REQUIRE(t1 != nullptr);
    REQUIRE(t0 != nullptr);
    CHECK(std::abs(t1->coeff - cplx(1.0 / (4.0 * L))) < 1e-9);
    CHECK(std::abs(t0->coeff - cplx(29.0 / 8.0)) < 1e-9);
}

TEST_CASE("gasket series terms") {
    auto e = catalog_get("gasket");
    tube_series s = series_for(e, 30);
    CHECK(s.terms.size() == 62);
    const tube_term* zero = find_term(s, 0.0, 0);
    REQUIRE(zero != nullptr);
    CHECK(std::abs(zero->coeff - cplx((3.0 * std::sqrt(3.0) + 2.0 * pi) / 2.0)) < 1e-9);
    CHECK(find_term(s, 1.0, 0) == nullptr);
    CHECK(find_term(s, 2.0, 0) == nullptr);
    for (const auto& r : e.residues) {
        if (r.erratum || std::abs(r.value) == 0.0 || r.point.real() < 1.0) continue;
        const tube_term* t = find_term(s, r.point, 0);
        REQUIRE(t != nullptr);
        CHECK(std::abs(t->coeff - r.value / (2.0 - r.point)) < 1e-9);
    }
    series_value v = eval_series(s, 0.05);
    CHECK(std::abs(v.imag) < 1e-12);
    CHECK(v.value > 0.0);
}

TEST_CASE("classification") {
    SUBCASE("gasket") {
        verdict v = classify(catalog_get("gasket"));
        CHECK(v.measurable == measurability_kind::no);
        CHECK(v.critical);
        CHECK(v.average_content);
    }
    SUBCASE("cantor graph") {
        verdict v = classify(catalog_get("cantor_graph"));
        CHECK(v.measurable == measurability_kind::yes);
        REQUIRE(v.content);
        CHECK(*v.content == doctest::Approx(2.0).epsilon(1e-10));
        CHECK(v.fractal);
        CHECK_FALSE(v.critical);
        REQUIRE(v.fractal_dims.size() == 1);
        CHECK(v.fractal_dims[0] == doctest::Approx(std::log(2.0) / std::log(3.0)));
    }
    SUBCASE("half square") {
        verdict v = classify(catalog_get("half_square"));
        CHECK(v.measurable == measurability_kind::degenerate);
        REQUIRE(v.gauge);
        CHECK(*v.gauge == 1);
        REQUIRE(v.content);
        CHECK(*v.content == doctest::Approx(1.0 / (4.0 * std::log(2.0))).epsilon(1e-9));
    }
    SUBCASE("sphere relative to its interior") {
        for (int N : {2, 3, 5}) {
            verdict v = classify(catalog_get("sphere_rfd", {N, 0.0}));
            CHECK(v.measurable == measurability_kind::yes);
            REQUIRE(v.content);
            CHECK(*v.content == doctest::Approx(N * ball_volume(N)).epsilon(1e-9));
            CHECK_FALSE(v.fractal);
        }
    }
    SUBCASE("a-string") {
        double a = 1.0;
        verdict v = classify(fractal_string::a_string(a));
        CHECK(v.measurable == measurability_kind::yes);
        REQUIRE(v.content);
        CHECK(*v.content == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
    }
    SUBCASE("cantor string") {
        verdict v = classify(fractal_string::cantor());
        const double D = std::log(2.0) / std::log(3.0);
        CHECK(v.measurable == measurability_kind::no);
        CHECK(v.critical);
        REQUIRE(v.content);
        CHECK(*v.content == doctest::Approx(std::pow(2.0, 1.0 - D) / (D * (1.0 - D)) / (2.0 * std::log(3.0))));
    }
    SUBCASE("short window") {
        auto e = catalog_get("gasket");
        window w{-1.0, 2.0, -e.period, e.period};
        CHECK_THROWS_AS(measurability(e.divisor_in(w), e.D, e.zeta, series_form::distance, 2, e.period),
                        insufficient_window);
    }
}

TEST_CASE("series json") {
    tube_series s = series_for(catalog_get("unit_interval"));
    auto j = to_json(s);
    CHECK(j["form"] == "tube");
    CHECK(j["terms"].size() == s.terms.size());
    auto v = to_json(classify(catalog_get("half_square")));
    CHECK(v["measurability"] == "degenerate");
}

TEST_CASE("catalog series are real") {
    for (const auto& name : catalog_names()) {
        catalog_entry e = catalog_get(name);
        tube_series s;
        try {
            s = series_for(e, 50);
        } catch (const error&) {
            continue;
        }
        if (!(s.validity > 0.0)) continue;
        CAPTURE(name);
        const double top = std::min(s.validity, 1.0);
        for (int i = 0; i < 100; ++i) {
            double eps = top * std::pow(10.0, -4.0 + 4.0 * i / 99.0);
            series_value v = eval_series(s, eps);
            CHECK(std::abs(v.imag) <= 1e-10 * (1.0 + std::abs(v.value)));
        }
    }
}

TEST_CASE("truncation convergence") {
    auto cs = fractal_string::cantor();
    double previous = INFINITY;
    for (int K : {25, 50, 100, 200}) {
        tube_series s = series_for(cs, K);
        double worst = 0.0;
        for (int i = 0; i < 120; ++i) {
            double eps = std::exp(std::log(1e-5) + (std::log(1.0 / 6.0) - std::log(1e-5)) * i / 119.0);
            worst = std::max(worst, std::abs(eval_series(s, eps).value - tube_exact(cs, eps)));
        }
        CHECK(worst <= previous + 1e-6);
        previous = worst;
    }
}

TEST_CASE("distance and tube forms agree") {
    auto e = catalog_get("gasket");
    divisor d = e.divisor_in(e.default_window());
    tube_series dist = series_from_divisor(*e.zeta, d, 2, series_form::distance);
    Expr tube_zeta = *e.zeta / (Expr(2.0) - Expr::s());
    divisor dt = d;
    dt.accumulate(2.0, -1);
    tube_series tube = series_from_divisor(tube_zeta, dt, 2, series_form::tube);
    int matched = 0;
    for (const auto& t : dist.terms) {
        const tube_term* u = find_term(tube, t.omega, t.log_power);
        REQUIRE(u != nullptr);
        CHECK(std::abs(u->coeff - t.coeff) < 1e-9 * (1.0 + std::abs(t.coeff)));
        ++matched;
    }
    CHECK(matched > 5);
}

TEST_CASE("lattice series are log-periodic") {
    for (const char* name : {"cantor_string", "gasket"}) {
        CAPTURE(name);
        auto e = catalog_get(name);
        tube_series s = series_for(e, 100);
        const double base = s.exponent_base();
        const double r = std::exp(-2.0 * pi / e.period);
        auto profile = [&](double eps) {
            series_value v = eval_series(s, eps);
            double lower = 0.0;
            for (const auto& t : s.terms)
                if (std::abs(t.omega.real() - e.D) > 1e-9)
                    lower += (t.coeff * std::pow(cplx(eps), cplx(base) - t.omega) *
                              std::pow(std::log(1.0 / eps), double(t.log_power)))
                                 .real();
            return std::pair{(v.value - lower) / std::pow(eps, base - e.D), v.tail_bound / std::pow(eps, base - e.D)};
        };
        for (double eps : {1e-3, 3.7e-3, 0.011}) {
            auto [a, ta] = profile(eps);
            auto [b, tb] = profile(eps * r);
            CHECK(std::abs(a - b) <= ta + tb + 1e-12);
        }
    }
}
