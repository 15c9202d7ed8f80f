#include "cfd/errors.hpp"
#include "cfd/expr.hpp"
#include "cfd/expr_json.hpp"

#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

using namespace cfd;

namespace {

Expr cantor_zeta() { return Expr(1.0) / (Expr::power(3, 1) - Expr(2.0)); }

}  // namespace

TEST_CASE("cantor zeta values and the pole at log_3 2") {
    Expr z = cantor_zeta();
    CHECK(std::abs(eval(z, 0.0) - cplx{-1.0, 0.0}) < 1e-15);
    CHECK(std::abs(eval(z, 1.0) - cplx{1.0, 0.0}) < 1e-15);
    CHECK_THROWS_AS(eval(z, std::log(2.0) / std::log(3.0)), pole_hit);
}

TEST_CASE("derivatives") {
    Expr den = Expr::power(3, 1) - Expr(2.0);
    double d = std::log(2.0) / std::log(3.0);
    CHECK(std::abs(eval(deriv(den), d) - 2.0 * std::log(3.0)) < 1e-14);
    CHECK(deriv(Expr(cplx{2.0, 1.0})).is_constant(0.0));
    Expr sq = Expr::s() * Expr::s();
    CHECK(std::abs(eval(deriv(sq), 2.0) - 4.0) < 1e-15);
}

TEST_CASE("deriv agrees with central differences") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 3.0);
    Expr e = (Expr::power(2.0) * Expr::s() + Expr(3.0)) / (Expr::s() * (Expr::s() - Expr(5.5)) + Expr::power(1, 3));
    Expr de = deriv(e);
    for (int i = 0; i < 20; ++i) {
        cplx s{u(rng), u(rng)};
        double h = 1e-6;
        cplx fd = (eval(e, s + h) - eval(e, s - h)) / (2.0 * h);
        cplx an = eval(de, s);
        CHECK(std::abs(fd - an) <= 1e-6 * (1.0 + std::abs(an)));
    }
}

TEST_CASE("residue_simple") {
    double d = std::log(2.0) / std::log(3.0);
    cplx r = residue_simple(Expr(1.0), Expr::power(3, 1) - Expr(2.0), d);
    CHECK(std::abs(r - 1.0 / (2.0 * std::log(3.0))) < 1e-14);
    CHECK_THROWS_AS(residue_simple(Expr(1.0), Expr::power(3, 1) - Expr(2.0), 0.5), not_a_zero);
    Expr dbl = (Expr::s() - Expr(1.0)) * (Expr::s() - Expr(1.0));
    CHECK_THROWS_AS(residue_simple(Expr(1.0), dbl, 1.0), higher_order);
}

TEST_CASE("pole order and Laurent coefficients") {
    cplx i{0.0, 1.0};
    Expr cube = Expr(1.0) / ((Expr::s() - Expr(i)) * (Expr::s() - Expr(i)) * (Expr::s() - Expr(i)));
    CHECK(pole_order(cube, {i, 0.25, 256}) == 3);
    CHECK(pole_order(cube, {i, 0.125, 256}) == 3);
    CHECK(pole_order(Expr::s() - Expr(2.0), {2.0, 0.25, 256}) == -1);
    auto c = laurent_coeffs(Expr(1.0) / Expr::s(), {0.0, 0.25, 256}, -1, 0);
    CHECK(std::abs(c[0] - 1.0) < 1e-12);
    CHECK(std::abs(c[1]) < 1e-12);
    double d = std::log(2.0) / std::log(3.0);
    auto r = laurent_coeffs(cantor_zeta(), {d, default_radius(d, {cplx{d, 2.0 * std::numbers::pi / std::log(3.0)}}), 256}, -1, -1);
    CHECK(std::abs(r[0] - 1.0 / (2.0 * std::log(3.0))) < 1e-12);
}

TEST_CASE("conjugate symmetry with real constants") {
    Expr e = (Expr::power(std::sqrt(3.0)) + Expr(2.0)) / (Expr::s() * (Expr::power(2, 1) - Expr(3.0)));
    REQUIRE(has_real_constants(e));
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int k = 0; k < 20; ++k) {
        cplx s{u(rng), u(rng)};
        cplx a = eval(e, std::conj(s));
        cplx b = std::conj(eval(e, s));
        CHECK(std::abs(a - b) <= 1e-14 * (1.0 + std::abs(a)));
    }
}

TEST_CASE("json round trip keeps rational bases exact") {
    Expr e = Expr(cplx{1.5, -2.0}) * Expr::power(1, 3) / (Expr::s() + Expr::power(std::sqrt(2.0)));
    auto j = to_json(e);
    Expr back = expr_from_json(j);
    CHECK(to_json(back) == j);
    CHECK(j.dump().find("\"1/3\"") != std::string::npos);
    for (double x : {0.3, 1.7, -0.4})
        CHECK(std::abs(eval(back, cplx{x, 0.9}) - eval(e, cplx{x, 0.9})) == 0.0);
    CHECK_THROWS_AS(expr_from_json(nlohmann::json{{"pow", 2}}), parse_error);
}

TEST_CASE("scaling transform multiplies by lambda^s") {
    Expr e = cantor_zeta();
    Expr sc = scaled(e, 7.0 / 5.0);
    cplx s{1.3, 0.4};
    CHECK(std::abs(eval(sc, s) - std::pow(1.4, s) * eval(e, s)) < 1e-14);
}
