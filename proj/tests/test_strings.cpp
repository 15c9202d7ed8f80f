#include "cfd/errors.hpp"
#include "cfd/moran.hpp"
#include "cfd/strings.hpp"

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

using namespace cfd;

namespace {

double brute_tube(const fractal_string& f, double eps, double min_length) {
    enumeration_policy p;
    p.min_length = min_length;
    double v = f.total_length();
    f.enumerate(
        [&](const length_entry& e) {
            v += static_cast<double>(e.mult) * (std::min(e.length, 2.0 * eps) - e.length);
            return true;
        },
        p);
    return v;
}

}  // namespace

TEST_CASE("cantor lengths and counting") {
    auto c = fractal_string::cantor();
    auto l = c.lengths({1e-3, 100});
    REQUIRE(l.size() == 6);
    for (std::size_t n = 0; n < l.size(); ++n) {
        CHECK(l[n].length == doctest::Approx(std::pow(3.0, -double(n + 1))).epsilon(1e-15));
        CHECK(l[n].mult == (std::uint64_t{1} << n));
    }
    CHECK(c.total_length() == 1.0);
    CHECK(counting(c, 3) == 1);
    CHECK(counting(c, 9) == 3);
    CHECK(counting(c, 2) == 0);
    CHECK(counting(c, 27) == 7);
}

TEST_CASE("a-string lengths") {
    auto a = fractal_string::a_string(1.0);
    auto l = a.lengths({0.0, 1000});
    REQUIRE(l.size() == 1000);
    for (std::size_t j = 1; j <= l.size(); ++j) CHECK(l[j - 1].length == doctest::Approx(1.0 / (j * (j + 1.0))).epsilon(1e-13));
    for (std::uint64_t j : {1u, 2u, 7u, 100u, 999u}) CHECK(counting(a, j * (j + 1.0)) == j);
    CHECK_THROWS_AS(fractal_string::a_string(-1.0), bad_parameter);
}

TEST_CASE("tube_exact closed values") {
    auto c = fractal_string::cantor();
    CHECK(tube_exact(c, 1.0 / 18) == doctest::Approx(7.0 / 9).epsilon(1e-14));
    CHECK(tube_exact(c, 1.0 / 6) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(tube_exact(c, 5.0) == 1.0);
    auto a = fractal_string::a_string(1.0);
    CHECK(tube_exact(a, 0.25) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("tube_exact agrees with direct summation") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(std::log(1e-4), std::log(0.6));
    std::vector<fractal_string> strings{fractal_string::cantor(), fractal_string::generalized_cantor(0.2),
                                        fractal_string::a_string(1.0), fractal_string::a_string(2.5),
                                        fractal_string::self_similar({0.5, 0.25}, {0.25}),
                                        fractal_string::self_similar({0.3, 0.3, 0.2}, {0.1, 0.05})};
    for (const auto& f : strings) {
        std::vector<double> eps(100);
        for (auto& e : eps) e = std::exp(u(rng));
        std::sort(eps.begin(), eps.end());
        double prev = 0.0;
        for (double e : eps) {
            double v = tube_exact(f, e);
            CHECK(v >= prev - 1e-15);
            prev = v;
            if (e >= f.first_length() / 2) CHECK(v == doctest::Approx(f.total_length()).epsilon(1e-14));
            if (f.kind() != string_kind::a_string) {
                double b = brute_tube(f, e, 1e-2 * e);
                CHECK(v == doctest::Approx(b).epsilon(1e-9));
            }
        }
        // concavity on a dyadic grid inside (0, l1/2]
        double h = f.first_length() / 2 / 64;
        for (int k = 2; k < 63; ++k) {
            double mid = tube_exact(f, k * h);
            double avg = 0.5 * (tube_exact(f, (k - 1) * h) + tube_exact(f, (k + 1) * h));
            CHECK(mid >= avg - 1e-13);
        }
    }
}

TEST_CASE("a-string tube against partial sums with an explicit tail") {
    auto a = fractal_string::a_string(1.0);
    for (double e : {1e-3, 3.7e-4, 0.01, 0.1}) {
        double v = 0.0;
        std::uint64_t j = 1;
        for (; j < 2000000; ++j) v += std::min(1.0 / (j * (j + 1.0)), 2.0 * e);
        v += 1.0 / double(j);
        CHECK(tube_exact(a, e) == doctest::Approx(v).epsilon(1e-10));
    }
}

TEST_CASE("geometric zeta closed forms") {
    auto c = fractal_string::cantor();
    auto z = geometric_zeta(c).closed;
    REQUIRE(z);
    CHECK(std::abs(eval(*z, 2.0) - 1.0 / 7.0) < 1e-15);
    cplx s{1.3, 4.0};
    CHECK(std::abs(eval(*z, s) - 1.0 / (std::pow(3.0, s) - 2.0)) < 1e-14);

    auto ss = fractal_string::self_similar({1.0 / 3, 1.0 / 3}, {1.0 / 3});
    auto zs = geometric_zeta(ss).closed;
    REQUIRE(zs);
    cplx expect = std::pow(1.0 / 3, s) / (1.0 - 2.0 * std::pow(3.0, -s));
    CHECK(std::abs(eval(*zs, s) - expect) < 1e-14);
    CHECK(std::abs(eval(*zs, s) - eval(*z, s)) < 1e-14);

    CHECK_FALSE(geometric_zeta(fractal_string::a_string(1.0)).closed);
}

TEST_CASE("zeta partial sums") {
    auto a = fractal_string::a_string(1.0);
    auto p = zeta_partial(a, 2.0);
    double target = std::numbers::pi * std::numbers::pi / 3.0 - 3.0;
    CHECK(std::abs(p.value.real() - target) < 1e-10);
    CHECK(p.tail_bound < 1e-10);
    CHECK(std::abs(p.value.real() - target) <= p.tail_bound + 1e-14);
    CHECK_THROWS_AS(zeta_partial(a, 0.4), divergent);

    auto c = fractal_string::cantor();
    cplx s{1.0, 2.0};
    auto pc = zeta_partial(c, s);
    CHECK(std::abs(pc.value - 1.0 / (std::pow(3.0, s) - 2.0)) <= pc.tail_bound);

    auto fin = fractal_string::explicit_list({{0.5, 1}, {0.25, 2}});
    CHECK(std::abs(zeta_partial(fin, cplx{-1.0, 0.5}).value -
                   (std::pow(0.5, cplx{-1.0, 0.5}) + 2.0 * std::pow(0.25, cplx{-1.0, 0.5}))) < 1e-14);
}

TEST_CASE("abscissa estimates") {
    auto c = abscissa_estimate(fractal_string::cantor());
    CHECK(c.hi - c.lo <= 1e-6);
    CHECK(std::abs(c.mid() - std::log(2.0) / std::log(3.0)) < 1e-6);
    auto a = abscissa_estimate(fractal_string::a_string(2.0));
    CHECK(std::abs(a.mid() - 1.0 / 3.0) < 1e-6);
    CHECK(abscissa_estimate(fractal_string::explicit_list({{0.1, 3}})).minus_infinity);
    auto ss = fractal_string::self_similar({0.5, 0.2, 0.1}, {0.2});
    double d = real_dimension(dirichlet_polynomial::from_ratios({0.5, 0.2, 0.1}));
    CHECK(std::abs(abscissa_estimate(ss).mid() - d) < 1e-6);
    CHECK(std::abs(ss.dimension() - d) < 1e-12);
}

TEST_CASE("self-similar enumeration matches explicit word expansion") {
    std::vector<double> r{0.4, 0.3, 0.2};
    std::vector<double> g{0.1, 0.04};
    auto f = fractal_string::self_similar(r, g);
    std::vector<double> all;
    std::function<void(double)> expand = [&](double v) {
        if (v < 1e-4) return;
        all.push_back(v);
        for (double x : r) expand(v * x);
    };
    for (double x : g) expand(x);
    std::sort(all.begin(), all.end(), std::greater<>());
    auto l = f.lengths({1e-4, 1000000});
    std::size_t k = 0;
    for (const auto& e : l) {
        for (std::uint64_t m = 0; m < e.mult; ++m, ++k) {
            REQUIRE(k < all.size());
            CHECK(all[k] == doctest::Approx(e.length).epsilon(1e-12));
        }
    }
    CHECK(k == all.size());
    for (std::size_t i = 1; i < l.size(); ++i) CHECK(l[i].length < l[i - 1].length);
}

TEST_CASE("lapma string") {
    auto f = fractal_string::lapma(0.5, 14.134725, 0.01);
    auto l = f.lengths({0.0, 10000});
    REQUIRE(l.size() == 10000);
    for (std::size_t j = 1; j <= l.size(); ++j) {
        CHECK(counting(f, 1.0 / l[j - 1].length) == j);
        CHECK(std::floor(lapma_volume(f.lapma_parameters(), 1.0 / l[j - 1].length * (1 + 1e-12))) == double(j));
    }
    for (std::size_t j = 1; j < l.size(); ++j) CHECK(l[j].length < l[j - 1].length);

    // total length: a million direct terms plus the leading integral tail
    double direct = 0.0;
    const auto& p = f.lapma_parameters();
    const int J = 1000000;
    for (int j = J; j >= 1; --j) direct += 1.0 / lapma_invert(p, j);
    double X = lapma_invert(p, J);
    cplx w{p.D, p.tau};
    direct += p.D / (1 - p.D) * std::pow(X, p.D - 1) + 2 * std::real(p.beta * w * std::pow(cplx{X, 0}, w - 1.0) / (1.0 - w));
    CHECK(std::abs(f.total_length() - direct) < 1e-10);

    // oscillation of x^-D N(x) between 1 - 2 beta and 1 + 2 beta
    double lo = 10, hi = 0;
    for (int n = 40; n < 80; ++n) {
        double x = std::exp(std::numbers::pi * n / p.tau);
        double r = double(counting(f, x)) / std::pow(x, p.D);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
        CHECK(r >= 1 - 2 * p.beta - 0.02);
        CHECK(r <= 1 + 2 * p.beta + 0.02);
    }
    CHECK(std::abs(hi - (1 + 2 * p.beta)) < 0.02);
    CHECK(std::abs(lo - (1 - 2 * p.beta)) < 0.02);

    for (double e : {1e-3, 1e-5, 1e-7}) {
        auto v = tube_exact_bounded(f, e);
        CHECK(v.bound < 1e-12 * v.value);
        double b = f.total_length();
        for (const auto& x : l) b += std::min(x.length, 2 * e) - x.length;
        CHECK(v.value == doctest::Approx(b).epsilon(1e-12));
    }
    CHECK_THROWS_AS(fractal_string::lapma(0.5, 14.134725, 0.5), bad_parameter);
}

TEST_CASE("string rfd zeta") {
    auto c = fractal_string::cantor();
    auto z = string_rfd_zeta(c);
    REQUIRE(z.closed);
    cplx s{0.9, 3.1};
    cplx expect = std::pow(2.0, 1.0 - s) / (s * (std::pow(3.0, s) - 2.0));
    CHECK(std::abs(z(s) - expect) < 1e-14);

    double ell = 0.7;
    auto one = string_rfd_zeta(fractal_string::explicit_list({{ell, 1}}));
    for (cplx t : {cplx{0.5, 0.0}, cplx{2.0, 1.0}, cplx{-0.5, 3.0}}) {
        // 2 * integral_0^{ell/2} u^(s-1) du by Gauss-Legendre after u = (ell/2) v^2
        cplx q = 0.0;
        const int n = 4000;
        for (int k = 0; k < n; ++k) {
            double v = (k + 0.5) / n;
            q += 2.0 * std::pow(ell / 2 * v * v, t - 1.0) * (ell / 2) * 2.0 * v / double(n);
        }
        if (t.real() > 0) CHECK(std::abs(one(t) - q) < 1e-5 * std::abs(q));
        CHECK(std::abs(one(t) - std::pow(2.0, 1.0 - t) * std::pow(ell, t) / t) < 1e-14);
    }

    cplx w{std::log(2.0) / std::log(3.0), 2 * std::numbers::pi / std::log(3.0)};
    cplx res_l = 1.0 / (std::log(3.0) * std::pow(3.0, w));
    cplx r = rfd_residue(w, res_l);
    // contour check of the rfd residue
    auto lc = laurent_coeffs(*z.closed, {w, 0.1, 512}, -1, -1);
    CHECK(std::abs(lc[0] - r) < 1e-10);
}

TEST_CASE("json specs and csv") {
    for (const char* txt : {R"({"kind":"cantor"})", R"({"kind":"a_string","a":1.5})",
                            R"({"kind":"generalized_cantor","a":0.25})",
                            R"({"kind":"self_similar","ratios":[0.5,0.25],"gaps":[0.25]})",
                            R"({"kind":"explicit","lengths":[[0.5,1],[0.25,2]]})"}) {
        auto f = fractal_string::from_json(nlohmann::json::parse(txt));
        auto g = fractal_string::from_json(f.to_json());
        CHECK(g.to_json() == f.to_json());
        CHECK(g.total_length() == f.total_length());
    }
    CHECK_THROWS_AS(fractal_string::from_json(nlohmann::json::parse(R"({"kind":"nope"})")), parse_error);
    CHECK_THROWS_AS(fractal_string::from_json(nlohmann::json::parse(R"({"kind":"a_string"})")), parse_error);

    const char* path = "test_strings_lengths.csv";
    {
        std::ofstream out(path);
        out << "length,multiplicity\n0.25,2\n0.5,1\n# comment\n0.125\n";
    }
    auto l = read_lengths_csv(path);
    REQUIRE(l.size() == 3);
    auto f = fractal_string::explicit_list(l);
    CHECK(f.total_length() == 1.125);
    CHECK(f.lengths().front().length == 0.5);
    std::remove(path);
}
