#include "cfd/tube.hpp"

#include "cfd/errors.hpp"
#include "cfd/expr_json.hpp"
#include "cfd/moran.hpp"
#include "cfd/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace cfd {

namespace {

constexpr double point_tol = 1e-7;

// h(s) with F = h zeta and the series term res(eps^(base - s) F(s), w).
Expr multiplier(series_form form, int N) {
    switch (form) {
    case series_form::distance: return Expr(1.0) / (Expr(static_cast<double>(N)) - Expr::s());
    case series_form::tube: return Expr(1.0);
    case series_form::string:
        return shifted_power(0.5, -1.0) / (Expr::s() * (Expr(1.0) - Expr::s()));
    }
    throw bad_parameter("unknown series form");
}

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

}  // namespace

std::string to_string(series_form f) {
    switch (f) {
    case series_form::distance: return "distance";
    case series_form::tube: return "tube";
    case series_form::string: return "string";
    }
    return "unknown";
}

series_form series_form_for(zeta_kind k) {
    switch (k) {
    case zeta_kind::distance:
    case zeta_kind::relative_distance: return series_form::distance;
    case zeta_kind::tube: return series_form::tube;
    case zeta_kind::geometric: return series_form::string;
    }
    throw bad_parameter("unknown zeta kind");
}

tube_series series_from_divisor(const Expr& zeta, const divisor& d, int N, series_form form) {
    tube_series out;
    out.N = N;
    out.form = form;
    out.exact = true;

    std::vector<cplx> poles;
    const divisor pd = d.poles();
    for (const auto& e : pd.entries()) {
        if (form == series_form::distance && std::abs(e.point - cplx(N, 0.0)) < point_tol) continue;
        poles.push_back(e.point);
    }
    if (form == series_form::string) {
        bool has_zero = std::any_of(poles.begin(), poles.end(), [](cplx p) { return std::abs(p) < point_tol; });
        if (!has_zero) poles.emplace_back(0.0, 0.0);
    }

    Expr F = multiplier(form, N) * zeta;
    std::vector<std::vector<tube_term>> per_pole(poles.size());
    std::sort(poles.begin(), poles.end(), [](cplx a, cplx b) {
        if (std::abs(a.real() - b.real()) > 1e-9) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    std::vector<cplx> marked;
    for (const auto& e : d.entries()) marked.push_back(e.point);
    const auto [F_num, F_den] = as_fraction(F);
    const Expr F_den_prime = deriv(F_den);

    parallel_for(poles.size(), 1, [&](std::size_t i) {
        // Zeros count as neighbors too; a zero inside the circle would cancel the pole.
        std::vector<cplx> others;
        for (cplx z : marked)
            if (std::abs(z - poles[i]) > point_tol && std::abs(z - poles[i]) < 1.0) others.push_back(z);
        if (form == series_form::distance) others.emplace_back(N, 0.0);
        if (form == series_form::string) {
            others.emplace_back(1.0, 0.0);
            if (std::abs(poles[i]) > point_tol) others.emplace_back(0.0, 0.0);
        }
        contour_spec spec{poles[i], default_radius(poles[i], others), 256};
        int expected = -d.order_at(poles[i]);
        if (form == series_form::string && std::abs(poles[i]) < point_tol) expected += 1;
        // Nonreal simple poles: residue num / den' directly.
        if (expected == 1 && std::abs(poles[i].imag()) > point_tol) {
            cplx dv = eval(F_den, poles[i]);
            cplx dp = eval(F_den_prime, poles[i]);
            if (std::abs(dv) <= 1e-9 * std::abs(dp)) {
                per_pole[i].push_back({poles[i], 0, eval(F_num, poles[i]) / dp});
                return;
            }
        }
        int m = pole_order(F, spec);
        // Zeros off the searched strip are unknown; shrink until the winding agrees.
        while (m != expected && spec.radius > 1e-9) {
            spec.radius *= 0.5;
            m = pole_order(F, spec);
        }
        if (m == expected && spec.radius < default_radius(poles[i], others)) spec.radius *= 0.5;
        if (m <= 0) return;
        auto c = laurent_coeffs(F, spec, -m, -1);
        for (int j = 0; j < m; ++j) {
            cplx coeff = c[static_cast<std::size_t>(m - 1 - j)] / factorial(j);
            per_pole[i].push_back({poles[i], j, coeff});
        }
    });
    for (auto& v : per_pole)
        for (auto& t : v) out.terms.push_back(t);
    return out;
}

tube_series lattice_series(const Expr& zeta, int N, series_form form, double period, int K, double re_lo,
                           double re_hi, unsigned workers) {
    if (!(period > 0.0)) throw bad_parameter("lattice series needs a positive period");
    if (K < 1) throw bad_parameter("K must be positive");
    window w{re_lo, re_hi, -1.5 * period, 1.5 * period};
    divisor found = divisor_of(zeta, w, workers);

    // Group the found poles by their class modulo i period.
    struct line {
        cplx base;
        std::map<long long, int> orders;
    };
    std::vector<line> lines;
    for (const auto& e : found.entries()) {
        long long k = std::llround(e.point.imag() / period);
        cplx base = e.point - cplx(0.0, static_cast<double>(k) * period);
        auto it = std::find_if(lines.begin(), lines.end(),
                               [&](const line& l) { return std::abs(l.base - base) < 1e-6 * (1.0 + std::abs(base)); });
        if (it == lines.end()) {
            lines.push_back({base, {}});
            it = lines.end() - 1;
        }
        it->orders[k] = e.order;
    }

    divisor extended(window{re_lo, re_hi, -(K + 0.5) * period, (K + 0.5) * period});
    std::vector<std::pair<double, bool>> line_re;
    for (const auto& l : lines) {
        if (l.orders.size() < 2) {
            for (const auto& [k, ord] : l.orders)
                extended.accumulate(l.base + cplx(0.0, static_cast<double>(k) * period), ord);
            continue;
        }
        // Outside the searched strip use the order found farthest from the real axis.
        long long far = 0;
        for (const auto& [k, ord] : l.orders)
            if (std::llabs(k) >= std::llabs(far)) far = k;
        int generic = l.orders.at(far);
        for (long long k = -K; k <= K; ++k) {
            int ord = generic;
            if (std::llabs(k) <= 1) {
                auto it = l.orders.find(k);
                ord = it == l.orders.end() ? 0 : it->second;
            }
            if (ord != 0) extended.accumulate(l.base + cplx(0.0, static_cast<double>(k) * period), ord);
        }
        if (generic < 0) line_re.emplace_back(l.base.real(), true);
    }

    tube_series out = series_from_divisor(zeta, extended, N, form);
    out.pairs = K;
    out.exact = line_re.empty();
    for (const auto& [re, periodic] : line_re) {
        line_envelope env{re, 0.0, K};
        for (const auto& t : out.terms) {
            if (std::abs(t.omega.real() - re) > 1e-6) continue;
            double k = std::abs(t.omega.imag()) / period;
            if (k < 0.5 * K - 0.5) continue;
            env.C = std::max(env.C, std::abs(t.coeff) * k * k);
        }
        out.envelopes.push_back(env);
    }
    return out;
}

tube_series series_for(const catalog_entry& e, int K, unsigned workers) {
    if (!e.zeta) throw unsupported_params(e.name + " has no closed-form zeta function");
    series_form form = series_form_for(e.kind);
    tube_series out;
    if (e.period > 0.0) {
        out = lattice_series(*e.zeta, e.N, form, e.period, K, -1.0, static_cast<double>(e.N), workers);
    } else {
        out = series_from_divisor(*e.zeta, e.divisor_in(window{-1.0, static_cast<double>(e.N), -5.0, 5.0}, workers),
                                  e.N, form);
    }
    out.validity = e.validity;
    out.validity_guessed = e.validity_guessed;
    return out;
}

tube_series series_for(const fractal_string& f, int K, unsigned workers) {
    auto g = geometric_zeta(f);
    if (!g.closed) throw unsupported_params("no closed-form geometric zeta function for " + f.name());
    tube_series out;
    const double D = f.dimension();
    if (f.kind() == string_kind::cantor || f.kind() == string_kind::generalized_cantor) {
        double a = f.kind() == string_kind::cantor ? 1.0 / 3.0 : f.param_a();
        out = lattice_series(*g.closed, 1, series_form::string, 2.0 * std::numbers::pi / std::log(1.0 / a), K, -1.0,
                             1.0, workers);
    } else {
        auto lc = classify(f.scaling_ratios());
        if (lc.lattice) {
            out = lattice_series(*g.closed, 1, series_form::string, lc.period, K, D - 3.0, 1.0, workers);
        } else {
            double h = 20.0 * static_cast<double>(K) / 200.0 + 20.0;
            out = series_from_divisor(*g.closed, divisor_of(*g.closed, window{D - 1.0, 1.0, -h, h}, workers), 1,
                                      series_form::string);
            out.exact = false;
        }
    }
    out.validity = 0.5 * f.first_length();
    return out;
}

series_value eval_series(const tube_series& s, double eps) {
    if (!(eps > 0.0)) throw bad_parameter("eps must be positive");
    if (s.validity > 0.0 && eps > s.validity * (1.0 + 1e-12))
        throw out_of_validity("eps = " + std::to_string(eps) + " exceeds the validity radius " +
                              std::to_string(s.validity));
    const double base = s.exponent_base();
    const double L = std::log(1.0 / eps);
    series_value v;
    int max_log = 0;
    for (const auto& t : s.terms) {
        cplx term = t.coeff * std::exp((base - t.omega) * std::log(eps)) * std::pow(L, t.log_power);
        v.value += term.real();
        v.imag += term.imag();
        max_log = std::max(max_log, t.log_power);
    }
    for (const auto& env : s.envelopes)
        v.tail_bound += 2.0 * env.C / env.K * std::pow(eps, base - env.re) * std::pow(1.0 + std::abs(L), max_log);
    return v;
}

nlohmann::json to_json(const tube_series& s) {
    nlohmann::json j;
    j["N"] = s.N;
    j["form"] = to_string(s.form);
    j["pairs"] = s.pairs;
    j["exact"] = s.exact;
    j["validity"] = s.validity;
    j["validity_guessed"] = s.validity_guessed;
    j["terms"] = nlohmann::json::array();
    for (const auto& t : s.terms)
        j["terms"].push_back({{"omega", complex_json(t.omega)}, {"log_power", t.log_power}, {"coeff", complex_json(t.coeff)}});
    j["envelopes"] = nlohmann::json::array();
    for (const auto& e : s.envelopes) j["envelopes"].push_back({{"re", e.re}, {"C", e.C}, {"K", e.K}});
    return j;
}

std::string to_string(measurability_kind k) {
    switch (k) {
    case measurability_kind::yes: return "measurable";
    case measurability_kind::no: return "not_measurable";
    case measurability_kind::degenerate: return "degenerate";
    }
    return "unknown";
}

double content_factor(series_form form, int N, double D) {
    switch (form) {
    case series_form::distance: return 1.0 / (N - D);
    case series_form::tube: return 1.0;
    case series_form::string: return std::pow(2.0, 1.0 - D) / (D * (1.0 - D));
    }
    throw bad_parameter("unknown series form");
}

verdict measurability(const divisor& d, double D, const std::optional<Expr>& zeta, series_form form, int N,
                      double period, std::optional<double> known_content) {
    const window& w = d.region();
    if (D < w.re_lo - point_tol || D > w.re_hi + point_tol)
        throw insufficient_window("the divisor window does not reach Re s = D");
    if (period > 0.0 && (w.im_hi < 3.0 * period - point_tol || w.im_lo > -3.0 * period + point_tol))
        throw insufficient_window("the divisor must cover three periods of the principal line");

    verdict v;
    v.D = D;
    int m = -d.order_at(cplx(D, 0.0), 1e-6);
    if (m <= 0) throw not_a_pole("D = " + std::to_string(D) + " is not a pole of the zeta function");

    bool nonreal = false;
    const divisor pd = d.poles();
    for (const auto& e : pd.entries())
        if (std::abs(e.point.real() - D) < 1e-6 && std::abs(e.point.imag()) > 1e-9) nonreal = true;

    std::optional<double> value = known_content;
    if (!value && zeta) {
        std::vector<cplx> others;
        for (const auto& e : d.entries())
            if (std::abs(e.point - cplx(D, 0.0)) > 1e-6) others.push_back(e.point);
        if (form == series_form::distance) others.emplace_back(N, 0.0);
        if (form == series_form::string) others.emplace_back(0.0, 0.0);
        contour_spec spec{cplx(D, 0.0), default_radius(cplx(D, 0.0), others), 256};
        cplx lead = laurent_coeffs(*zeta, spec, -m, -m)[0];
        value = lead.real() * content_factor(form, N, D) / factorial(m - 1);
    }

    if (m >= 2) {
        v.measurable = measurability_kind::degenerate;
        v.gauge = m - 1;
        v.content = value;
        v.notes = "pole of order " + std::to_string(m) + " at D; content taken with gauge log(1/eps)^" +
                  std::to_string(m - 1);
    } else if (nonreal) {
        v.measurable = measurability_kind::no;
        v.content = value;
        v.average_content = true;
        v.notes = "nonreal principal poles; content is the average content";
    } else {
        v.measurable = measurability_kind::yes;
        v.content = value;
    }
    fractality(d, D, v);
    return v;
}

void fractality(const divisor& d, double D, verdict& v) {
    v.fractal_dims.clear();
    const divisor pd = d.poles();
    for (const auto& e : pd.entries()) {
        if (std::abs(e.point.imag()) <= 1e-9) continue;
        double re = e.point.real();
        bool seen = std::any_of(v.fractal_dims.begin(), v.fractal_dims.end(),
                                [&](double x) { return std::abs(x - re) < 1e-6; });
        if (!seen) v.fractal_dims.push_back(re);
    }
    std::sort(v.fractal_dims.begin(), v.fractal_dims.end());
    v.fractal = !v.fractal_dims.empty();
    v.critical = std::any_of(v.fractal_dims.begin(), v.fractal_dims.end(),
                             [&](double x) { return std::abs(x - D) < 1e-6; });
}

verdict classify(const catalog_entry& e, unsigned workers) {
    window w = e.default_window();
    divisor d = e.divisor_in(w, workers);
    std::optional<double> known;
    if (!e.zeta && !e.num) known = e.content;
    verdict v = measurability(d, e.D, e.zeta, series_form_for(e.kind), e.N, e.period, known);
    if (e.conjectural) v.notes += v.notes.empty() ? "conjectural divisor" : "; conjectural divisor";
    return v;
}

verdict classify(const fractal_string& f, unsigned workers) {
    const double D = f.dimension();
    switch (f.kind()) {
    case string_kind::a_string: {
        // zeta_L(s) - a^s zeta((a+1)s) is holomorphic for Re s > 0, so the only
        // pole on the principal line is D with residue a^D / (a+1).
        double a = f.param_a();
        divisor d(window{0.5 * D, 1.0, -50.0, 50.0});
        d.accumulate(cplx(D, 0.0), -1);
        double res = std::pow(a, D) / (a + 1.0);
        verdict v = measurability(d, D, std::nullopt, series_form::string, 1, 0.0,
                                  res * content_factor(series_form::string, 1, D));
        v.notes = "principal part from a^s zeta((a+1)s)";
        return v;
    }
    case string_kind::lapma: {
        const auto& p = f.lapma_parameters();
        divisor d(window{0.5 * p.D, 1.0, -3.0 * p.tau, 3.0 * p.tau});
        d.accumulate(cplx(p.D, 0.0), -1);
        d.accumulate(cplx(p.D, p.tau), -1);
        d.accumulate(cplx(p.D, -p.tau), -1);
        verdict v = measurability(d, p.D, std::nullopt, series_form::string, 1);
        v.notes += "; principal part from the Mellin transform of the counting volume";
        return v;
    }
    case string_kind::explicit_list: throw unsupported_params("finite strings have no fractal dimension");
    default: break;
    }
    auto g = geometric_zeta(f);
    if (!g.closed) throw unsupported_params("no closed-form geometric zeta function for " + f.name());
    double period = 0.0;
    if (f.kind() == string_kind::cantor) period = 2.0 * std::numbers::pi / std::log(3.0);
    else if (f.kind() == string_kind::generalized_cantor) period = 2.0 * std::numbers::pi / std::log(1.0 / f.param_a());
    else {
        auto lc = classify(f.scaling_ratios());
        if (lc.lattice) period = lc.period;
    }
    double h = period > 0.0 ? 3.0 * period : 30.0;
    divisor d = divisor_of(*g.closed, window{D - 0.5, std::min(1.0, D + 0.5), -h, h}, workers);
    return measurability(d, D, g.closed, series_form::string, 1, period);
}

nlohmann::json to_json(const verdict& v) {
    nlohmann::json j;
    j["measurability"] = to_string(v.measurable);
    j["D"] = v.D;
    if (v.gauge) j["gauge_log_power"] = *v.gauge;
    if (v.content) j["content"] = *v.content;
    j["average_content"] = v.average_content;
    j["fractal"] = v.fractal;
    j["critical"] = v.critical;
    j["fractal_dims"] = v.fractal_dims;
    if (!v.notes.empty()) j["notes"] = v.notes;
    return j;
}

}  // namespace cfd
