#include "cfd/errors.hpp"
#include "cfd/moran.hpp"

#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

using namespace cfd;

TEST_CASE("real dimensions") {
    auto cantor = dirichlet_polynomial::from_ratios({1.0 / 3, 1.0 / 3});
    CHECK(std::abs(real_dimension(cantor) - std::log(2.0) / std::log(3.0)) < 1e-14);
    auto gasket = dirichlet_polynomial({{3.0, 0.5}});
    CHECK(std::abs(real_dimension(gasket) - std::log(3.0) / std::log(2.0)) < 1e-14);
    auto mixed = dirichlet_polynomial::from_ratios({0.5, 1.0 / 3});
    double s0 = real_dimension(mixed);
    CHECK(std::abs(s0 - 0.7878849) < 1e-7);
    CHECK(std::abs(real_dimension_bisection(mixed) - real_dimension_newton(mixed, 0.5)) < 1e-12);
    CHECK_THROWS_AS(real_dimension(dirichlet_polynomial({{1.0, 0.5}})), no_real_root);
}

TEST_CASE("cantor roots on one vertical line") {
    auto p = dirichlet_polynomial::from_ratios({1.0 / 3, 1.0 / 3});
    double per = 2.0 * std::numbers::pi / std::log(3.0);
    auto rs = find_roots(p, {0.0, 1.0, -20.0 * per, 20.0 * per});
    CHECK(rs.certified_count == 41);
    REQUIRE(rs.roots.size() == 41);
    double d = std::log(2.0) / std::log(3.0);
    for (std::size_t k = 0; k < rs.roots.size(); ++k) {
        cplx want{d, (static_cast<double>(k) - 20.0) * per};
        CHECK(std::abs(rs.roots[k].z - want) < 1e-10);
        CHECK(rs.roots[k].order == 1);
    }
}

TEST_CASE("gasket principal line and mixed polynomial") {
    auto g = dirichlet_polynomial({{3.0, 0.5}});
    auto rs = find_roots(g, {0.0, 2.0, -std::numbers::pi / std::log(2.0) + 0.01, std::numbers::pi / std::log(2.0) - 0.01});
    REQUIRE(rs.roots.size() == 1);
    CHECK(std::abs(rs.roots[0].z - std::log(3.0) / std::log(2.0)) < 1e-12);

    auto m = dirichlet_polynomial::from_ratios({0.5, 1.0 / 3});
    auto r2 = find_roots(m, {0.5, 1.0, -0.5, 0.5});
    REQUIRE(r2.roots.size() == 1);
    CHECK(std::abs(r2.roots[0].z - real_dimension(m)) < 1e-12);
}

TEST_CASE("nonlattice roots stay left of sigma0, come in conjugate pairs, and windows add") {
    auto m = dirichlet_polynomial::from_ratios({0.5, 1.0 / 3});
    double s0 = real_dimension(m);
    window w{-3.0, 1.5, -40.0, 40.0};
    auto rs = find_roots(m, w);
    CHECK(rs.certified_count == rs.total_order());
    for (const auto& r : rs.roots) {
        CHECK(r.z.real() <= s0 + 1e-12);
        CHECK(std::abs(m(r.z)) <= 1e-10);
        bool paired = false;
        for (const auto& q : rs.roots)
            if (std::abs(q.z - std::conj(r.z)) < 1e-9) paired = true;
        CHECK(paired);
    }
    window lower = w, upper = w;
    lower.im_hi = 3.1;
    upper.im_lo = 3.1;
    auto a = find_roots(m, lower);
    auto b = find_roots(m, upper);
    CHECK(a.certified_count + b.certified_count == rs.certified_count);
}

TEST_CASE("classification") {
    auto c = classify({1.0 / 3, 1.0 / 3});
    CHECK(c.lattice);
    CHECK(std::abs(c.r - 1.0 / 3) < 1e-15);
    CHECK(std::abs(c.period - 2.0 * std::numbers::pi / std::log(3.0)) < 1e-12);

    auto q = classify({0.25, 0.5});
    CHECK(q.lattice);
    CHECK(std::abs(q.r - 0.5) < 1e-15);
    REQUIRE(q.exponents.size() == 2);
    CHECK(q.exponents[0] == 2);
    CHECK(q.exponents[1] == 1);

    auto n = classify({0.5, 1.0 / 3});
    CHECK_FALSE(n.lattice);
    CHECK(n.generic);
    CHECK(n.rank == 2);

    auto dep = classify({0.5, 1.0 / 3, 1.0 / 6});
    CHECK_FALSE(dep.lattice);
    CHECK(dep.rank == 2);
    CHECK_FALSE(dep.generic);

    double x = std::log(2.0) * (1.0 + 3e-9);
    CHECK_THROWS_AS(classify({0.25, std::exp(-x)}), ambiguous);
}

TEST_CASE("periodic extension") {
    auto p = dirichlet_polynomial::from_ratios({1.0 / 3, 1.0 / 3});
    auto c = classify({1.0 / 3, 1.0 / 3});
    auto base = find_roots(p, {0.0, 1.0, -0.5 * c.period, 0.5 * c.period - 1e-3});
    REQUIRE(base.roots.size() == 1);
    auto ext = periodic_extend(base, c, -100, 100);
    CHECK(ext.roots.size() == 201);
    std::mt19937 rng(11);
    std::uniform_int_distribution<std::size_t> pick(0, ext.roots.size() - 1);
    for (int i = 0; i < 10; ++i) CHECK(std::abs(p(ext.roots[pick(rng)].z)) <= 1e-10);
    auto wrong = periodic_extend(base, c.period * 1.01, -100, 100);
    double worst = 0.0;
    for (const auto& r : wrong.roots) worst = std::max(worst, std::abs(p(r.z)));
    CHECK(worst > 1e-3);
    CHECK_THROWS_AS(periodic_extend(base, classify({0.5, 1.0 / 3}), 0, 1), not_lattice);
}
