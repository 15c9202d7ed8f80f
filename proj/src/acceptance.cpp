#include "cfd/acceptance.hpp"

#include "cfd/catalog.hpp"
#include "cfd/divisor.hpp"
#include "cfd/errors.hpp"
#include "cfd/measure.hpp"
#include "cfd/moran.hpp"
#include "cfd/roots.hpp"
#include "cfd/spectral.hpp"
#include "cfd/spray.hpp"
#include "cfd/strings.hpp"
#include "cfd/tube.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

namespace cfd {

namespace {

constexpr double pi = std::numbers::pi;

struct outcome {
    bool passed = true;
    std::ostringstream detail;
    nlohmann::json data = nlohmann::json::object();

    void require(bool ok, const std::string& what) {
        if (!ok) {
            passed = false;
            detail << "failed: " << what << "; ";
        }
    }
};

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

double ball_volume(int N) { return std::pow(pi, N / 2.0) / std::tgamma(N / 2.0 + 1.0); }

std::vector<cplx> random_points(unsigned seed, int n = 10) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> re(-1.5, 3.5);
    std::uniform_real_distribution<double> im(-12.0, 12.0);
    std::vector<cplx> out;
    for (int i = 0; i < n; ++i) out.emplace_back(re(rng), im(rng));
    return out;
}

cplx quad(const std::function<cplx(double)>& f, double a, double b) {
    boost::math::quadrature::tanh_sinh<double> ts;
    double re = ts.integrate([&](double t) { return f(t).real(); }, a, b, 1e-14);
    double im = ts.integrate([&](double t) { return f(t).imag(); }, a, b, 1e-14);
    return {re, im};
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }

self_similar_spray carpet_spray() {
    self_similar_spray sp;
    sp.N = 2;
    sp.ratios.assign(8, 1.0 / 3.0);
    sp.generators.push_back({scaled(unit_square_generator(), 1.0 / 3.0), std::nullopt});
    return sp;
}

self_similar_spray gasket_spray() {
    self_similar_spray sp;
    sp.N = 2;
    sp.ratios.assign(3, 0.5);
    sp.generators.push_back({triangle_generator(0.5), std::nullopt});
    return sp;
}

void cantor_tube_formula(outcome& o, unsigned workers) {
    auto cs = fractal_string::cantor();
    tube_series s = series_for(cs, 200, workers);
    const double lo = std::log(1e-5), hi = std::log(1.0 / 6.0);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        double eps = std::exp(lo + (hi - lo) * i / 199.0);
        double exact = tube_exact(cs, eps);
        worst = std::max(worst, std::abs(eval_series(s, eps).value - exact) / exact);
    }
    o.data["max_rel_err"] = worst;
    o.detail << "max rel err " << fmt(worst) << "; ";
    o.require(worst <= 1e-4, "max relative error <= 1e-4");
}

void cantor_contents(outcome& o, unsigned) {
    auto cs = fractal_string::cantor();
    const double D = std::log(2.0) / std::log(3.0);
    auto b = contents([&](double e) { return tube_exact(cs, e); }, D, 1, 1e-9, 0.0, 3.0);
    o.data["lower"] = b.lower;
    o.data["upper"] = b.upper;
    o.detail << "M_* " << fmt(b.lower) << ", M^* " << fmt(b.upper) << "; ";
    o.require(std::abs(b.lower - 2.4950) <= 1e-3, "M_* within 1e-3 of 2.4950");
    o.require(std::abs(b.upper - 2.5830) <= 1e-3, "M^* within 1e-3 of 2.5830");
}

void moran_roots(outcome& o, unsigned workers) {
    auto p = dirichlet_polynomial::from_ratios({1.0 / 3.0, 1.0 / 3.0});
    const double per = 2.0 * pi / std::log(3.0);
    const double D = std::log(2.0) / std::log(3.0);
    auto rs = find_roots(p, {0.0, 1.0, -20.0 * per, 20.0 * per}, workers);
    o.data["roots"] = rs.roots.size();
    o.data["winding"] = rs.certified_count;
    o.detail << rs.roots.size() << " roots, winding " << rs.certified_count << "; ";
    o.require(rs.roots.size() == 41, "41 roots");
    o.require(rs.certified_count == 41, "winding count 41");
    double worst = 0.0;
    bool simple = true;
    for (const auto& r : rs.roots) {
        double k = std::round(r.z.imag() / per);
        worst = std::max(worst, std::abs(r.z - cplx(D, k * per)));
        simple = simple && r.order == 1;
    }
    o.data["max_dist"] = worst;
    o.require(simple, "all roots simple");
    o.require(worst <= 1e-10, "roots within 1e-10 of log_3 2 + i p k");
}

void nonlattice_dimension(outcome& o, unsigned) {
    auto p = dirichlet_polynomial::from_ratios({0.5, 1.0 / 3.0});
    double b = real_dimension_bisection(p);
    double n = real_dimension_newton(p, 0.5);
    // Plain bisection on 2^-s + 3^-s = 1.
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (std::pow(2.0, -mid) + std::pow(3.0, -mid) > 1.0 ? lo : hi) = mid;
    }
    double oracle = 0.5 * (lo + hi);
    o.data["bisection"] = b;
    o.data["newton"] = n;
    o.data["oracle"] = oracle;
    o.detail << "sigma0 " << fmt(b) << "; ";
    o.require(std::abs(b - n) <= 1e-12, "bisection and Newton agree to 1e-12");
    o.require(std::abs(b - oracle) <= 1e-10, "matches the brute-force oracle to 1e-10");
}

void residue_tables(outcome& o, unsigned) {
    int rows = 0;
    double worst = 0.0;
    const std::vector<std::pair<std::string, int>> entries{{"gasket", 0},       {"carpet", 0},       {"carpet3", 0},
                                                           {"cantor_graph", 0}, {"half_square", 0}, {"sphere_rfd", 2},
                                                           {"sphere_rfd", 3},   {"sphere_rfd", 5}};
    for (const auto& [name, N] : entries) {
        catalog_entry e = catalog_get(name, {N, 0.0});
        if (!e.num || !e.den) continue;
        for (const auto& r : e.residues) {
            cplx want = r.erratum ? *r.corrected : r.value;
            cplx got = residue_of(*e.zeta, r.point);
            double err = std::abs(want) > 0.0 ? std::abs(got - want) / std::abs(want) : std::abs(got);
            if (err > 1e-10) o.detail << name << " " << r.label << " off by " << fmt(err) << "; ";
            worst = std::max(worst, err);
            ++rows;
        }
    }
    o.data["rows"] = rows;
    o.data["max_rel_err"] = worst;
    o.detail << rows << " rows, max rel err " << fmt(worst) << "; ";
    o.require(rows > 0 && worst <= 1e-10, "every stored residue within 1e-10");
}

void double_pole(outcome& o, unsigned) {
    catalog_entry e = catalog_get("half_square");
    auto c = laurent_coeffs(*e.zeta, {1.0, 0.2, 256}, -2, -1);
    const double L = std::log(2.0);
    double e2 = std::abs(c[0] - 1.0 / (4.0 * L));
    double e1 = std::abs(c[1] - (29.0 * L - 2.0) / (8.0 * L));
    o.data["c_-2"] = c[0].real();
    o.data["c_-1"] = c[1].real();
    o.detail << "c_-2 " << fmt(c[0].real()) << ", c_-1 " << fmt(c[1].real()) << "; ";
    o.require(e2 <= 1e-9, "c_-2 = 1/(4 log 2) within 1e-9");
    o.require(e1 <= 1e-9, "c_-1 = (29 log 2 - 2)/(8 log 2) within 1e-9");
}

void spray_factorization(outcome& o, unsigned) {
    Expr carpet = spray_zeta(carpet_spray());
    Expr gasket = spray_zeta(gasket_spray());
    double worst = 0.0;
    for (cplx s : random_points(7)) {
        cplx c = 8.0 / (std::pow(cplx(2.0), s) * s * (s - 1.0) * (std::pow(cplx(3.0), s) - 8.0));
        cplx g = 6.0 * std::pow(cplx(std::sqrt(3.0)), 1.0 - s) * std::pow(cplx(2.0), -s) /
                 (s * (s - 1.0) * (std::pow(cplx(2.0), s) - 3.0));
        worst = std::max({worst, rel(eval(carpet, s), c), rel(eval(gasket, s), g)});
    }
    double fe = std::max(functional_equation_residual(carpet_spray(), random_points(8)),
                         functional_equation_residual(gasket_spray(), random_points(9)));
    o.data["pointwise"] = worst;
    o.data["functional_equation"] = fe;
    o.detail << "pointwise " << fmt(worst) << ", functional equation " << fmt(fe) << "; ";
    o.require(worst <= 1e-12, "spray zetas match the closed forms to 1e-12");
    o.require(fe <= 1e-12, "functional equation residual <= 1e-12");
}

void functional_equations(outcome& o, unsigned workers) {
    double worst = 0.0;
    for (cplx s : {cplx(2.5, 0.0), cplx(1.7, 3.0), cplx(3.0, -1.0)}) {
        const double l = 0.7;
        cplx interval = quad([&](double t) { return 2.0 * std::pow(cplx(t), s - 1.0); }, 0.0, l / 2.0);
        worst = std::max(worst, rel(interval, std::pow(cplx(2.0), 1.0 - s) * std::pow(cplx(l), s) / s));
        cplx disk = quad([&](double r) { return std::pow(cplx(1.0 - r), s - 2.0) * 2.0 * pi * r; }, 0.0, 1.0);
        worst = std::max(worst, rel(disk, eval(*catalog_get("sphere_rfd", {2, 0.0}).zeta, s)));
        cplx tube = quad([&](double t) { return 4.0 * t * std::pow(cplx(t), s - 2.0); }, 0.0, 0.5);
        worst = std::max(worst, rel(tube, eval(*catalog_get("sphere", {1, 0.5}).zeta, s)));
    }
    o.data["quadrature_residual"] = worst;
    o.detail << "quadrature " << fmt(worst) << "; ";
    o.require(worst <= 1e-10, "identities (i)-(iii) within 1e-10");

    const double delta = 0.3;
    const int cells = 2048;
    catalog_entry g = catalog_get("gasket", {0, delta});
    double h = (1.0 + 2.0 * delta) / (cells / 2);
    empirical_tube t = tube_volume({raster_kind::gasket, 0, cells, delta}, log_grid(3.05 * h, delta, 400), workers);
    const double D = g.D;
    double gasket_worst = 0.0;
    for (cplx s : {cplx(2.0, 0.0), cplx(1.8, 0.7)}) {
        cplx lhs = eval(*g.zeta, s);
        cplx rhs = std::pow(cplx(delta), s - 2.0) * t.volume.back() + (2.0 - s) * tube_zeta_measured(t, 2, D, s);
        gasket_worst = std::max(gasket_worst, std::abs(lhs - rhs) / std::abs(lhs));
    }
    o.data["gasket_residual"] = gasket_worst;
    o.detail << "gasket raster " << fmt(gasket_worst) << "; ";
    o.require(gasket_worst <= 1e-2, "gasket functional equation with raster V within 1e-2");
}

void gasket_raster(outcome& o, unsigned workers) {
    tube_series s = series_for(catalog_get("gasket"), 200, workers);
    std::vector<double> eps{0.02, 0.05, 0.1};
    empirical_tube t = tube_volume({raster_kind::gasket, 10, 4096, 0.1}, eps, workers);
    double worst = 0.0;
    for (std::size_t k = 0; k < eps.size(); ++k) {
        double v = eval_series(s, eps[k]).value;
        worst = std::max(worst, std::abs(t.volume[k] - v) / v);
        o.data["rows"].push_back({{"eps", eps[k]}, {"raster", t.volume[k]}, {"err", t.err[k]}, {"series", v}});
    }
    o.data["max_rel_err"] = worst;
    o.detail << "max rel err " << fmt(worst) << "; ";
    o.require(worst <= 0.02, "relative error <= 2%");
}

void minkowski_sums(outcome& o, unsigned workers) {
    const double p = 2.0 * pi / std::log(3.0);
    auto lattice = [&](double lo, double hi) { return window{lo, hi, -5.0 * p, 5.0 * p}; };
    divisor dc = catalog_get("cantor_string").divisor_in(lattice(-1.0, 1.0), workers).poles();
    divisor di = catalog_get("unit_interval").divisor_in({-1.0, 1.5, -1.0, 1.0}, workers).poles();
    auto grill = product_conjecture_check(dc, di, catalog_get("cantor_grill").divisor_in(lattice(-1.0, 2.0), workers));
    auto dust = product_conjecture_check(dc, dc, catalog_get("cantor_dust").divisor_in(lattice(-1.0, 2.0), workers));
    o.data["grill_entries"] = grill.observed.entries().size();
    o.data["dust_entries"] = dust.observed.entries().size();
    o.detail << "grill " << grill.observed.entries().size() << " points, dust " << dust.observed.entries().size()
             << " points; ";
    o.require(grill.equal, "D_C + D_[0,1] equals the Cantor grill divisor");
    o.require(dust.equal, "D_C + D_C equals the Cantor dust divisor");
}

void average_contents(outcome& o, unsigned) {
    const double D = std::log(2.0) / std::log(3.0);
    auto cs = fractal_string::cantor();
    auto rc = average_content([&](double e) { return tube_exact(cs, e); }, D, 1, 1e-8);
    double want = std::pow(2.0, 1.0 - D) / (D * (1.0 - D)) / (2.0 * std::log(3.0));
    auto as = fractal_string::a_string(1.0);
    auto ra = average_content([&](double e) { return tube_exact(as, e); }, 0.5, 1, 1e-8);
    o.data["cantor"] = rc.value;
    o.data["cantor_expected"] = want;
    o.data["a_string"] = ra.value;
    o.detail << "cantor " << fmt(rc.value) << " vs " << fmt(want) << ", a-string " << fmt(ra.value) << "; ";
    o.require(std::abs(rc.value - want) <= 1e-3, "Cantor average content within 1e-3");
    o.require(std::abs(ra.value - 2.0 * std::sqrt(2.0)) <= 1e-2, "a-string average content within 1e-2");
}

void spectral_second_term(outcome& o, unsigned workers) {
    auto rep = second_term_check(fractal_string::a_string(1.0), {1e6, 1e7, 1e8}, workers);
    double target = 0.5 * std::pow(2.0, -0.5) * (-riemann_zeta(0.5)) * 2.0 * std::sqrt(2.0);
    double worst = 0.0;
    for (const auto& r : rep.rows) {
        worst = std::max(worst, std::abs(r.ratio - target) / target);
        o.data["rows"].push_back({{"x", r.x}, {"ratio", r.ratio}});
    }
    o.data["target"] = target;
    o.data["max_rel_dev"] = worst;
    o.detail << "target " << fmt(target) << ", max rel dev " << fmt(worst) << "; ";
    o.require(worst <= 0.05, "ratios within 5% of c_1/2 * 2 sqrt 2");
}

void classification_suite(outcome& o, unsigned workers) {
    verdict g = classify(catalog_get("gasket"), workers);
    o.require(g.measurable == measurability_kind::no && g.fractal && g.critical,
              "gasket not measurable, critically fractal");

    verdict cg = classify(catalog_get("cantor_graph"), workers);
    o.require(cg.measurable == measurability_kind::yes && cg.content && std::abs(*cg.content - 2.0) < 1e-9,
              "Cantor graph measurable with content 2");
    o.require(cg.fractal && !cg.critical && cg.fractal_dims.size() == 1 &&
                  std::abs(cg.fractal_dims[0] - std::log(2.0) / std::log(3.0)) < 1e-9,
              "Cantor graph subcritically fractal at log_3 2");

    verdict hs = classify(catalog_get("half_square"), workers);
    o.require(hs.measurable == measurability_kind::degenerate && hs.gauge && *hs.gauge == 1 && hs.content &&
                  std::abs(*hs.content - 1.0 / (4.0 * std::log(2.0))) < 1e-9,
              "half square degenerate with h-content 1/(4 log 2)");

    for (int N : {2, 3, 5}) {
        verdict sp = classify(catalog_get("sphere_rfd", {N, 0.0}), workers);
        o.require(sp.measurable == measurability_kind::yes && sp.content &&
                      std::abs(*sp.content - N * ball_volume(N)) < 1e-9 * N * ball_volume(N) && !sp.fractal,
                  "sphere RFD N=" + std::to_string(N) + " measurable, content N Theta_N, not fractal");
    }
    verdict as = classify(fractal_string::a_string(1.0), workers);
    o.require(as.measurable == measurability_kind::yes, "a-string measurable");
    o.data["gasket"] = to_json(g);
    o.data["cantor_graph"] = to_json(cg);
    o.data["half_square"] = to_json(hs);
}

void property_suites(outcome& o, unsigned workers) {
    // Conjugate symmetry of divisors and series.
    for (const char* name : {"gasket", "carpet", "cantor_string", "half_square"}) {
        catalog_entry e = catalog_get(name);
        divisor d = e.divisor_in(e.default_window(), workers);
        o.require(d.conjugation_closed(), std::string(name) + " divisor closed under conjugation");
    }
    tube_series gs = series_for(catalog_get("gasket"), 50, workers);
    bool paired = true;
    for (const auto& t : gs.terms) {
        bool found = false;
        for (const auto& u : gs.terms)
            if (u.log_power == t.log_power && std::abs(u.omega - std::conj(t.omega)) < 1e-7 &&
                std::abs(u.coeff - std::conj(t.coeff)) <= 1e-9 * (1.0 + std::abs(t.coeff)))
                found = true;
        paired = paired && found;
    }
    o.require(paired, "gasket series terms come in conjugate pairs");

    // Reality of evaluated series.
    double worst_imag = 0.0;
    for (const auto& name : catalog_names()) {
        tube_series s;
        try {
            s = series_for(catalog_get(name), 50, workers);
        } catch (const error&) {
            continue;
        }
        if (!(s.validity > 0.0)) continue;
        const double top = std::min(s.validity, 1.0);
        for (int i = 0; i < 100; ++i) {
            series_value v = eval_series(s, top * std::pow(10.0, -4.0 + 4.0 * i / 99.0));
            worst_imag = std::max(worst_imag, std::abs(v.imag) / (1.0 + std::abs(v.value)));
        }
    }
    o.data["max_imag"] = worst_imag;
    o.require(worst_imag <= 1e-10, "evaluated series are real");

    // Monotonicity and ceiling of measured tubes.
    try {
        tube_volume({raster_kind::gasket, 0, 1024, 0.1}, log_grid(0.01, 0.1, 40), workers);
        tube_volume({raster_kind::carpet, 0, 729, 0.1}, log_grid(0.02, 0.1, 30), workers);
        auto cs = fractal_string::cantor();
        tube_from_function([&](double e) { return tube_exact(cs, e); }, log_grid(1e-8, 1.0, 200), 1.0, "cantor");
    } catch (const error& e) {
        o.require(false, std::string("tube monotone and below its ceiling: ") + e.what());
    }

    // Winding counts add across a split window.
    auto m = dirichlet_polynomial::from_ratios({0.5, 1.0 / 3.0});
    holo_fn f = [&](cplx s) { return m(s); };
    window whole{-3.0, 1.5, -40.0, 40.0}, lower{-3.0, 1.5, -40.0, 0.123}, upper{-3.0, 1.5, 0.123, 40.0};
    int a = boundary_winding(f, whole).count, b = boundary_winding(f, lower).count, c = boundary_winding(f, upper).count;
    o.data["winding"] = {a, b, c};
    o.require(a == b + c, "winding counts add");

    // Residues against contour integrals.
    catalog_entry g = catalog_get("gasket");
    divisor gp = g.divisor_in(g.default_window(), workers).poles();
    double worst_res = 0.0;
    for (const auto& e : gp.entries()) {
        if (e.order != -1) continue;
        std::vector<cplx> others;
        for (const auto& q : gp.entries())
            if (std::abs(q.point - e.point) > 1e-9) others.push_back(q.point);
        contour_spec spec{e.point, 0.5 * default_radius(e.point, others), 256};
        cplx by_contour = laurent_coeffs(*g.zeta, spec, -1, -1)[0];
        worst_res = std::max(worst_res, std::abs(by_contour - residue_of(*g.zeta, e.point)) /
                                            std::max(1.0, std::abs(by_contour)));
    }
    o.data["residue_vs_contour"] = worst_res;
    o.require(worst_res <= 1e-9, "residues agree with contour integrals");

    // Worker count never changes results.
    raster_spec rs{raster_kind::carpet, 4, 512, 0.1};
    auto t1 = tube_volume(rs, {0.02, 0.05}, 1);
    auto t3 = tube_volume(rs, {0.02, 0.05}, 3);
    o.require(t1.volume == t3.volume && t1.err == t3.err, "raster tubes identical across worker counts");
    divisor d1 = g.divisor_in(g.default_window(), 1), d3 = g.divisor_in(g.default_window(), 3);
    o.require(same_multiset(d1, d3, 1e-12), "divisors identical across worker counts");
    o.detail << "max imag " << fmt(worst_imag) << ", residue vs contour " << fmt(worst_res) << "; ";
}

struct criterion_def {
    std::string title;
    double budget_seconds;
    std::function<void(outcome&, unsigned)> run;
};

const std::map<int, criterion_def>& definitions() {
    static const std::map<int, criterion_def> defs{
        {1, {"Cantor string exact tube formula", 1.0, cantor_tube_formula}},
        {2, {"Cantor string Minkowski contents", 1.0, cantor_contents}},
        {3, {"Moran roots of 1 - 2 3^-s", 5.0, moran_roots}},
        {4, {"Nonlattice dimension", 0.0, nonlattice_dimension}},
        {5, {"Residue tables", 0.0, residue_tables}},
        {6, {"Half square double pole Laurent coefficients", 0.0, double_pole}},
        {7, {"Spray factorization reconstruction", 0.0, spray_factorization}},
        {8, {"Functional equations by quadrature", 0.0, functional_equations}},
        {9, {"Gasket tube formula against the raster", 60.0, gasket_raster}},
        {10, {"Divisor Minkowski sums", 0.0, minkowski_sums}},
        {11, {"Average Minkowski content", 0.0, average_contents}},
        {12, {"Spectral second term", 30.0, spectral_second_term}},
        {13, {"Classification suite", 0.0, classification_suite}},
        {14, {"Property suites", 0.0, property_suites}},
    };
    return defs;
}

}  // namespace

std::vector<int> criterion_ids() {
    std::vector<int> ids;
    for (const auto& [id, def] : definitions()) ids.push_back(id);
    return ids;
}

std::string criterion_title(int id) {
    auto it = definitions().find(id);
    if (it == definitions().end()) throw bad_parameter("no criterion " + std::to_string(id));
    return it->second.title;
}

criterion_result run_criterion(int id, unsigned workers) {
    auto it = definitions().find(id);
    if (it == definitions().end()) throw bad_parameter("no criterion " + std::to_string(id));
    const criterion_def& def = it->second;
    outcome o;
    auto start = std::chrono::steady_clock::now();
    try {
        def.run(o, workers);
    } catch (const std::exception& e) {
        o.require(false, std::string("exception: ") + e.what());
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (def.budget_seconds > 0.0) o.require(seconds < def.budget_seconds, "runtime under " + fmt(def.budget_seconds) + " s");

    criterion_result r;
    r.id = id;
    r.title = def.title;
    r.passed = o.passed;
    r.seconds = seconds;
    r.detail = o.detail.str();
    if (r.detail.size() >= 2 && r.detail.compare(r.detail.size() - 2, 2, "; ") == 0) r.detail.resize(r.detail.size() - 2);
    r.data = std::move(o.data);
    return r;
}

nlohmann::json to_json(const criterion_result& r) {
    return {{"id", r.id},       {"title", r.title}, {"passed", r.passed},
            {"seconds", r.seconds}, {"detail", r.detail}, {"data", r.data}};
}

}  // namespace cfd
