#include "cfd/catalog.hpp"

#include "cfd/errors.hpp"
#include "cfd/expr_json.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

namespace cfd {

namespace {

constexpr double pi = std::numbers::pi;
const double sqrt3 = std::sqrt(3.0);
const double log2 = std::log(2.0);
const double log3 = std::log(3.0);

Expr S() { return Expr::s(); }
Expr C(double c) { return Expr(c); }
Expr lin(double shift) { return Expr::s() - Expr(shift); }

double binomial(int n, int k) {
    double b = 1.0;
    for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
    return b;
}

double unit_ball_volume(int N) { return std::pow(pi, 0.5 * N) / std::tgamma(0.5 * N + 1.0); }

// delta^(s - shift)
Expr delta_pow(double delta, double shift) { return shifted_power(delta, -shift); }

Expr product_of(std::vector<Expr> f) {
    if (f.size() == 1) return f.front();
    return Expr::product(std::move(f));
}

void add_lattice_rows(catalog_entry& e, double base, const std::function<cplx(cplx)>& value, const std::string& label,
                      int k_max = 3, bool skip_zero = false) {
    for (int k = -k_max; k <= k_max; ++k) {
        if (skip_zero && k == 0) continue;
        cplx sk{base, e.period * k};
        e.residues.push_back({sk, value(sk), label + " k=" + std::to_string(k), false, std::nullopt});
    }
}

void set_fraction(catalog_entry& e, Expr num, Expr den) {
    e.num = num;
    e.den = den;
    e.zeta = Expr::quotient(std::move(num), std::move(den));
}

double pick_delta(const catalog_params& p, double fallback, double lower, double upper, const std::string& name) {
    double d = p.delta > 0.0 ? p.delta : fallback;
    if (!(d > lower) || !(d < upper)) {
        throw bad_parameter(name + ": delta must lie in (" + std::to_string(lower) + ", " + std::to_string(upper) + ")");
    }
    return d;
}

int pick_N(const catalog_params& p, int fallback, int lo, const std::string& name) {
    int N = p.N > 0 ? p.N : fallback;
    if (N < lo) throw bad_parameter(name + ": N must be at least " + std::to_string(lo));
    return N;
}

catalog_entry gasket(const catalog_params& p) {
    catalog_entry e;
    e.name = "gasket";
    e.N = 2;
    e.D = std::log(3.0) / log2;
    e.period = 2.0 * pi / log2;
    e.kind = zeta_kind::distance;
    e.delta = pick_delta(p, 1.0, 1.0 / (4.0 * sqrt3), 1e6, e.name);
    Expr lat = Expr::power(2.0) - C(3.0);
    Expr first = C(6.0 * sqrt3) * power_of(1.0 / sqrt3) * power_of(0.5);
    Expr num = Expr::sum({first, C(2.0 * pi) * delta_pow(e.delta, 0) * lin(1) * lat,
                          C(3.0) * delta_pow(e.delta, 1) * S() * lat});
    set_fraction(e, num, product_of({S(), lin(1), lat}));
    e.zeta = first / product_of({S(), lin(1), lat}) + C(2.0 * pi) * delta_pow(e.delta, 0) / S() +
             C(3.0) * delta_pow(e.delta, 1) / lin(1);
    e.residues.push_back({0.0, 3.0 * sqrt3 + 2.0 * pi, "res at 0", false, std::nullopt});
    e.residues.push_back({1.0, 0.0, "res at 1", false, std::nullopt});
    add_lattice_rows(e, e.D, [](cplx s) {
        return 6.0 * std::pow(cplx(sqrt3), 1.0 - s) / (log2 * std::pow(cplx(4.0), s) * s * (s - 1.0));
    }, "res at s_k");
    e.validity = 1.0 / (2.0 * sqrt3);
    return e;
}

catalog_entry carpet(const catalog_params& p) {
    catalog_entry e;
    e.name = "carpet";
    e.N = 2;
    e.D = std::log(8.0) / log3;
    e.period = 2.0 * pi / log3;
    e.delta = pick_delta(p, 1.0, 1.0 / 6.0, 1e6, e.name);
    Expr lat = Expr::power(3.0) - C(8.0);
    Expr num = Expr::sum({C(8.0) * power_of(0.5), C(2.0 * pi) * delta_pow(e.delta, 0) * lin(1) * lat,
                          C(4.0) * delta_pow(e.delta, 1) * S() * lat});
    set_fraction(e, num, product_of({S(), lin(1), lat}));
    e.zeta = C(8.0) * power_of(0.5) / product_of({S(), lin(1), lat}) + C(2.0 * pi) * delta_pow(e.delta, 0) / S() +
             C(4.0) * delta_pow(e.delta, 1) / lin(1);
    e.residues.push_back({0.0, 2.0 * pi + 8.0 / 7.0, "res at 0", false, std::nullopt});
    e.residues.push_back({1.0, 16.0 / 5.0, "res at 1", false, std::nullopt});
    add_lattice_rows(e, e.D, [](cplx s) { return std::pow(cplx(2.0), -s) / (log3 * s * (s - 1.0)); }, "res at s_k");
    e.validity = 1.0 / 6.0;
    e.validity_guessed = true;
    return e;
}

catalog_entry carpet3(const catalog_params& p) {
    catalog_entry e;
    e.name = "carpet3";
    e.N = 3;
    e.D = std::log(26.0) / log3;
    e.period = 2.0 * pi / log3;
    e.delta = pick_delta(p, 1.0, 1.0 / 6.0, 1e6, e.name);
    Expr lat = Expr::power(3.0) - C(26.0);
    Expr num = Expr::sum({C(48.0) * power_of(0.5), C(4.0 * pi) * delta_pow(e.delta, 0) * lin(1) * lin(2) * lat,
                          C(6.0 * pi) * delta_pow(e.delta, 1) * S() * lin(2) * lat,
                          C(6.0) * delta_pow(e.delta, 2) * S() * lin(1) * lat});
    set_fraction(e, num, product_of({S(), lin(1), lin(2), lat}));
    e.zeta = Expr::sum({C(48.0) * power_of(0.5) / product_of({S(), lin(1), lin(2), lat}),
                        C(4.0 * pi) * delta_pow(e.delta, 0) / S(), C(6.0 * pi) * delta_pow(e.delta, 1) / lin(1),
                        C(6.0) * delta_pow(e.delta, 2) / lin(2)});
    e.residues.push_back({0.0, 4.0 * pi - 24.0 / 25.0, "res at 0", false, std::nullopt});
    e.residues.push_back({1.0, 6.0 * pi + 24.0 / 23.0, "res at 1", false, std::nullopt});
    e.residues.push_back({2.0, 96.0 / 17.0, "res at 2", false, std::nullopt});
    add_lattice_rows(e, e.D, [](cplx s) {
        return 24.0 / (13.0 * std::pow(cplx(2.0), s) * s * (s - 1.0) * (s - 2.0) * log3);
    }, "res at s_k");
    e.validity = 1.0 / 6.0;
    e.validity_guessed = true;
    return e;
}

catalog_entry n_gasket(const catalog_params& p) {
    catalog_entry e;
    e.N = pick_N(p, 2, 2, "n_gasket");
    e.name = "n_gasket";
    e.kind = zeta_kind::relative_distance;
    e.period = 2.0 * pi / log2;
    double sigma = std::log2(e.N + 1.0);
    e.D = std::max(e.N - 1.0, sigma);
    if (e.N == 2) {
        Expr lat = Expr::power(2.0) - C(3.0);
        set_fraction(e, C(6.0 * sqrt3) * power_of(1.0 / sqrt3) * power_of(0.5), product_of({S(), lin(1), lat}));
        e.residues.push_back({0.0, 3.0 * sqrt3, "res at 0 (derived)", false, std::nullopt});
        e.residues.push_back({1.0, -3.0, "res at 1 (derived)", false, std::nullopt});
        add_lattice_rows(e, sigma, [](cplx s) {
            return 6.0 * std::pow(cplx(sqrt3), 1.0 - s) / (log2 * std::pow(cplx(4.0), s) * s * (s - 1.0));
        }, "res at s_k (derived)");
        e.validity = 1.0 / (2.0 * sqrt3);
        e.notes = "g_2 taken as 6 sqrt(3)^(1-s) 4^(-s) so that the entry agrees with the gasket spray";
    } else if (e.N == 3) {
        Expr lat = Expr::power(2.0) - C(4.0);
        set_fraction(e, C(24.0 * sqrt3) * power_of(1.0 / std::sqrt(6.0)), product_of({S(), lin(1), lin(2), lat}));
        e.validity = 1.0 / (2.0 * std::sqrt(6.0));
        e.validity_guessed = true;
        e.notes = "D = 2 is a double pole";
    } else {
        for (int j = 0; j < e.N; ++j) e.families.push_back({static_cast<double>(j), false, 1});
        e.families.push_back({sigma, true, 1});
        e.notes = "g_N is not known for N >= 4; divisor only";
    }
    return e;
}

catalog_entry n_carpet(const catalog_params& p) {
    catalog_entry e;
    e.N = pick_N(p, 2, 2, "n_carpet");
    e.name = "n_carpet";
    e.kind = zeta_kind::relative_distance;
    e.period = 2.0 * pi / log3;
    e.D = std::log(std::pow(3.0, e.N) - 1.0) / log3;
    for (int j = 0; j < e.N; ++j) e.families.push_back({static_cast<double>(j), false, 1});
    e.families.push_back({e.D, true, 1});
    e.notes = "divisor only";
    return e;
}

catalog_entry half_square_parts(const catalog_params& p, bool relative) {
    catalog_entry e;
    e.name = relative ? "half_square_rfd" : "half_square";
    e.N = 2;
    e.D = 1.0;
    e.period = 2.0 * pi / log2;
    e.kind = relative ? zeta_kind::relative_distance : zeta_kind::distance;
    Expr lat = C(0.5) * Expr::power(2.0) - C(1.0);
    Expr first = C(0.5) * power_of(0.5);
    Expr den = product_of({S(), lin(1), lat});
    if (relative) {
        set_fraction(e, first, den);
        e.laurent.push_back({1.0, -2, 1.0 / (4.0 * log2), "c_-2 at 1 (derived)"});
        e.laurent.push_back({1.0, -1, -(3.0 * log2 + 2.0) / (8.0 * log2), "c_-1 at 1 (derived)"});
    } else {
        e.delta = pick_delta(p, 1.0, 0.25, 1e6, e.name);
        Expr num = Expr::sum({first, C(4.0) * delta_pow(e.delta, 1) * S() * lat,
                              C(2.0 * pi) * delta_pow(e.delta, 0) * lin(1) * lat});
        set_fraction(e, num, den);
        e.zeta = first / den + C(4.0) * delta_pow(e.delta, 1) / lin(1) + C(2.0 * pi) * delta_pow(e.delta, 0) / S();
        e.residues.push_back({0.0, 1.0 + 2.0 * pi, "res at 0", false, std::nullopt});
        for (int k = -3; k <= 3; ++k) {
            if (k == 0) continue;
            cplx sk{1.0, e.period * k};
            cplx printed = std::exp(cplx(0.0, -e.period * k) * std::log(4.0)) / (4.0 * sk * (sk - 1.0));
            cplx corrected = 1.0 / (4.0 * log2 * sk * (sk - 1.0));
            e.residues.push_back({sk, printed, "res at s_k k=" + std::to_string(k), true, corrected});
        }
        e.laurent.push_back({1.0, -2, 1.0 / (4.0 * log2), "c_-2 at 1"});
        e.laurent.push_back({1.0, -1, (29.0 * log2 - 2.0) / (8.0 * log2), "c_-1 at 1"});
    }
    e.validity = 0.5;
    e.notes = "D = 1 is a double pole; h-content with h(t) = log(1/t)";
    return e;
}

catalog_entry third_square(const catalog_params&) {
    catalog_entry e;
    e.name = "third_square";
    e.N = 2;
    e.D = 1.0;
    e.period = 2.0 * pi / log3;
    e.conjectural = true;
    e.families = {{0.0, false, 1}, {1.0, false, 1}, {std::log(2.0) / log3, true, 1}};
    e.residues.push_back({0.0, 12.0 + pi, "res at 0 (stored)", false, std::nullopt});
    e.residues.push_back({1.0, 16.0, "res at 1 (stored)", false, std::nullopt});
    e.content = 16.0;
    e.notes = "the entire factor Psi is not modeled; nonreal dimensions are an upper bound";
    return e;
}

catalog_entry sphere(const catalog_params& p) {
    catalog_entry e;
    e.N = pick_N(p, 2, 1, "sphere");
    e.name = "sphere";
    e.kind = zeta_kind::tube;
    e.D = e.N - 1.0;
    e.delta = pick_delta(p, 0.5, 0.0, 1.0, e.name);
    double theta = unit_ball_volume(e.N);
    std::vector<Expr> terms;
    for (int k = 1; k <= e.N; k += 2) {
        double c = 2.0 * theta * binomial(e.N, k);
        terms.push_back(C(c) * delta_pow(e.delta, e.N - k) / lin(e.N - k));
        e.residues.push_back({static_cast<double>(e.N - k), c, "res at " + std::to_string(e.N - k), false,
                              std::nullopt});
    }
    Expr z = terms.size() == 1 ? terms.front() : Expr::sum(std::move(terms));
    auto [num, den] = as_fraction(z);
    e.num = num;
    e.den = den;
    e.zeta = z;
    e.content = 2.0 * e.N * theta;
    e.validity = 1.0;
    return e;
}

catalog_entry sphere_rfd(const catalog_params& p) {
    catalog_entry e;
    e.N = pick_N(p, 2, 1, "sphere_rfd");
    e.name = "sphere_rfd";
    e.kind = zeta_kind::relative_distance;
    e.D = e.N - 1.0;
    double theta = unit_ball_volume(e.N);
    std::vector<Expr> terms;
    for (int j = 0; j < e.N; ++j) {
        double c = ((e.N - j - 1) % 2 == 0 ? 1.0 : -1.0) * e.N * theta * binomial(e.N - 1, j);
        terms.push_back(C(c) / lin(j));
        e.residues.push_back({static_cast<double>(j), c, "res at " + std::to_string(j), false, std::nullopt});
    }
    Expr z = terms.size() == 1 ? terms.front() : Expr::sum(std::move(terms));
    auto [num, den] = as_fraction(z);
    e.num = num;
    e.den = den;
    e.zeta = z;
    e.content = e.N * theta;
    e.validity = 1.0;
    return e;
}

catalog_entry cantor_graph(const catalog_params&) {
    catalog_entry e;
    e.name = "cantor_graph";
    e.N = 2;
    e.D = 1.0;
    e.period = 2.0 * pi / log3;
    e.kind = zeta_kind::relative_distance;
    set_fraction(e, C(2.0), product_of({S(), Expr::power(3.0) - C(2.0), lin(1)}));
    e.residues.push_back({0.0, 2.0, "res at 0", false, std::nullopt});
    e.residues.push_back({1.0, 2.0, "res at 1", false, std::nullopt});
    add_lattice_rows(e, std::log(2.0) / log3, [](cplx s) { return 1.0 / (log3 * (s - 1.0) * s); }, "res at s_k");
    e.content = 2.0;
    e.validity = 1.0;
    e.validity_guessed = true;
    return e;
}

catalog_entry cantor_string(const catalog_params&) {
    catalog_entry e;
    e.name = "cantor_string";
    e.N = 1;
    e.D = std::log(2.0) / log3;
    e.period = 2.0 * pi / log3;
    e.kind = zeta_kind::relative_distance;
    set_fraction(e, C(2.0) * power_of(0.5), product_of({S(), Expr::power(3.0) - C(2.0)}));
    e.residues.push_back({0.0, -2.0, "res at 0 (derived)", false, std::nullopt});
    add_lattice_rows(e, e.D, [](cplx s) { return std::pow(cplx(2.0), -s) / (log3 * s); }, "res at s_k (derived)");
    e.validity = 1.0 / 6.0;
    return e;
}

catalog_entry unit_interval(const catalog_params& p) {
    catalog_entry e;
    e.name = "unit_interval";
    e.N = 1;
    e.D = 1.0;
    e.kind = zeta_kind::tube;
    e.delta = pick_delta(p, 1.0, 0.0, 1e6, e.name);
    Expr z = delta_pow(e.delta, 1) / lin(1) + C(2.0) * delta_pow(e.delta, 0) / S();
    auto [num, den] = as_fraction(z);
    e.num = num;
    e.den = den;
    e.zeta = z;
    e.residues.push_back({0.0, 2.0, "res at 0 (derived)", false, std::nullopt});
    e.residues.push_back({1.0, 1.0, "res at 1 (derived)", false, std::nullopt});
    e.content = 1.0;
    e.validity = std::numeric_limits<double>::infinity();
    return e;
}

catalog_entry cantor_grill(const catalog_params&) {
    catalog_entry e;
    e.name = "cantor_grill";
    e.N = 2;
    double dc = std::log(2.0) / log3;
    e.D = 1.0 + dc;
    e.period = 2.0 * pi / log3;
    e.families = {{0.0, false, 1}, {1.0, false, 1}, {dc, true, 1}, {1.0 + dc, true, 1}};
    e.notes = "divisor only";
    return e;
}

catalog_entry cantor_dust(const catalog_params&) {
    catalog_entry e;
    e.name = "cantor_dust";
    e.N = 2;
    double dc = std::log(2.0) / log3;
    e.D = 2.0 * dc;
    e.period = 2.0 * pi / log3;
    e.kind = zeta_kind::relative_distance;
    e.conjectural = true;
    e.families = {{0.0, false, 1}, {dc, true, 1}, {2.0 * dc, true, 1}};
    e.notes = "the meromorphic factor K is not modeled; equality of the divisor is conjectural";
    return e;
}

using builder = catalog_entry (*)(const catalog_params&);

struct named_builder {
    const char* name;
    builder make;
};

catalog_entry half_square(const catalog_params& p) { return half_square_parts(p, false); }
catalog_entry half_square_rfd(const catalog_params& p) { return half_square_parts(p, true); }

const std::vector<named_builder>& builders() {
    static const std::vector<named_builder> b = {
        {"gasket", gasket},
        {"carpet", carpet},
        {"carpet3", carpet3},
        {"n_gasket", n_gasket},
        {"n_carpet", n_carpet},
        {"half_square", half_square},
        {"half_square_rfd", half_square_rfd},
        {"third_square", third_square},
        {"sphere", sphere},
        {"sphere_rfd", sphere_rfd},
        {"cantor_graph", cantor_graph},
        {"cantor_string", cantor_string},
        {"unit_interval", unit_interval},
        {"cantor_grill", cantor_grill},
        {"cantor_dust", cantor_dust},
    };
    return b;
}

}  // namespace

window catalog_entry::default_window() const {
    double h = period > 0.0 ? 5.0 * period : 50.0;
    return {-1.0, static_cast<double>(N), -h, h};
}

divisor catalog_entry::divisor_in(const window& w, unsigned workers) const {
    if (num && den) return divisor_of(Expr::quotient(*num, *den), w, workers);
    if (zeta) return divisor_of(*zeta, w, workers);
    if (families.empty()) throw unsupported_params(name + " has neither a closed form nor a divisor");
    divisor d(w);
    d.conjectural = conjectural;
    for (const auto& f : families) {
        if (f.periodic) {
            for (cplx z : vertical_line(f.base, period, w)) d.accumulate(z, -f.order);
        } else if (w.contains(f.base, 1e-7)) {
            d.accumulate(f.base, -f.order);
        }
    }
    return d;
}

std::vector<std::string> catalog_names() {
    std::vector<std::string> out;
    for (const auto& b : builders()) out.emplace_back(b.name);
    return out;
}

catalog_entry catalog_get(const std::string& name, const catalog_params& params) {
    for (const auto& b : builders())
        if (name == b.name) return b.make(params);
    throw bad_parameter("unknown catalog entry: " + name);
}

std::string to_string(zeta_kind k) {
    switch (k) {
    case zeta_kind::distance: return "distance";
    case zeta_kind::tube: return "tube";
    case zeta_kind::relative_distance: return "relative_distance";
    case zeta_kind::geometric: return "geometric";
    }
    return "unknown";
}

nlohmann::json to_json(const catalog_entry& e) {
    nlohmann::json j;
    j["name"] = e.name;
    j["N"] = e.N;
    j["D"] = e.D;
    j["period"] = e.period;
    j["kind"] = to_string(e.kind);
    if (e.delta > 0.0) j["delta"] = e.delta;
    if (e.zeta) {
        j["zeta"] = to_string(*e.zeta);
        j["zeta_expr"] = to_json(*e.zeta);
    }
    if (!e.families.empty()) j["divisor"] = to_json(e.divisor_in(e.default_window()));
    j["residues"] = nlohmann::json::array();
    for (const auto& r : e.residues) {
        nlohmann::json row = {{"point", complex_json(r.point)}, {"value", complex_json(r.value)}, {"label", r.label}};
        if (r.erratum) {
            row["erratum"] = true;
            if (r.corrected) row["corrected"] = complex_json(*r.corrected);
        }
        j["residues"].push_back(row);
    }
    j["laurent"] = nlohmann::json::array();
    for (const auto& l : e.laurent)
        j["laurent"].push_back({{"point", complex_json(l.point)}, {"power", l.power}, {"value", complex_json(l.value)},
                                {"label", l.label}});
    if (e.content) j["content"] = *e.content;
    j["validity"] = std::isfinite(e.validity) ? nlohmann::json(e.validity) : nlohmann::json("inf");
    j["validity_guessed"] = e.validity_guessed;
    j["conjectural"] = e.conjectural;
    if (!e.notes.empty()) j["notes"] = e.notes;
    return j;
}

}  // namespace cfd
