#include "cfd/spray.hpp"

#include "cfd/errors.hpp"
#include "cfd/expr_json.hpp"

#include <cmath>
#include <numbers>

namespace cfd {

namespace {

double binomial(int n, int k) {
    double b = 1.0;
    for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
    return b;
}

double unit_ball_volume(int N) {
    return std::pow(std::numbers::pi, 0.5 * N) / std::tgamma(0.5 * N + 1.0);
}

}  // namespace

double monophase_generator::tube_volume(double eps) const {
    double e = std::min(eps, g);
    double v = 0.0;
    for (std::size_t a = 0; a < kappa.size(); ++a) v += kappa[a] * std::pow(e, N - static_cast<int>(a));
    return v;
}

void monophase_generator::validate() const {
    if (N < 1) throw bad_parameter("generator dimension must be positive");
    if (!(g > 0.0)) throw bad_parameter("generator inradius must be positive");
    if (static_cast<int>(kappa.size()) != N) throw bad_parameter("generator needs kappa_0 .. kappa_{N-1}");
    double prev = 0.0;
    for (int i = 1; i <= 64; ++i) {
        double v = tube_volume(g * i / 64.0);
        if (v < prev - 1e-12 * (1.0 + std::abs(v))) throw bad_parameter("generator tube volume is not nondecreasing");
        prev = v;
    }
    if (!(volume() > 0.0)) throw bad_parameter("generator volume must be positive");
}

monophase_generator scaled(const monophase_generator& gen, double lambda) {
    if (!(lambda > 0.0)) throw bad_parameter("scale factor must be positive");
    monophase_generator out = gen;
    out.g = gen.g * lambda;
    for (std::size_t a = 0; a < out.kappa.size(); ++a) out.kappa[a] *= std::pow(lambda, static_cast<double>(a));
    return out;
}

monophase_generator unit_square_generator() { return {2, 0.5, {-4.0, 4.0}}; }

monophase_generator triangle_generator(double side) {
    return {2, side / (2.0 * std::sqrt(3.0)), {-3.0 * std::sqrt(3.0), 3.0 * side}};
}

monophase_generator interval_generator(double length) { return {1, 0.5 * length, {2.0}}; }

monophase_generator ball_generator(int N, double radius) {
    monophase_generator gen{N, radius, std::vector<double>(N)};
    double theta = unit_ball_volume(N);
    for (int a = 0; a < N; ++a) {
        int k = N - a;
        double sign = (k % 2 == 1) ? 1.0 : -1.0;
        gen.kappa[a] = sign * theta * binomial(N, k) * std::pow(radius, a);
    }
    return gen;
}

Expr generator_zeta(const monophase_generator& gen) {
    gen.validate();
    std::vector<Expr> terms;
    for (int a = 0; a < gen.N; ++a) {
        double c = (gen.N - a) * gen.kappa[a];
        if (c == 0.0) continue;
        terms.push_back(Expr(c) * shifted_power(gen.g, -a) / (Expr::s() - Expr(static_cast<double>(a))));
    }
    if (terms.empty()) return Expr(0.0);
    return Expr::sum(std::move(terms));
}

Expr spray_generator::zeta() const {
    if (monophase) return generator_zeta(*monophase);
    if (closed) return *closed;
    throw bad_parameter("spray generator has neither monophase data nor a closed form");
}

void self_similar_spray::validate() const {
    if (ratios.size() < 2) throw bad_parameter("a spray needs at least two scaling ratios");
    double vol = 0.0;
    for (double r : ratios) {
        if (!(r > 0.0 && r < 1.0)) throw bad_parameter("scaling ratios must lie in (0, 1)");
        vol += std::pow(r, N);
    }
    if (!(vol < 1.0)) throw bad_parameter("sum of r_j^N must be below 1 for finite total volume");
    if (generators.empty()) throw bad_parameter("a spray needs at least one generator");
    for (const auto& g : generators) {
        if (g.monophase && g.monophase->N != N) throw bad_parameter("generator dimension differs from the spray's");
    }
}

Expr self_similar_spray::generator_sum() const {
    std::vector<Expr> terms;
    for (const auto& g : generators) terms.push_back(g.zeta());
    if (terms.size() == 1) return terms.front();
    return Expr::sum(std::move(terms));
}

dirichlet_polynomial self_similar_spray::scaling() const { return dirichlet_polynomial::from_ratios(ratios); }

self_similar_spray spray_from_json(const nlohmann::json& j) {
    try {
        self_similar_spray sp;
        sp.ratios = j.at("ratios").get<std::vector<double>>();
        const auto& gens = j.at("generators");
        if (!gens.is_array()) throw parse_error("generators must be an array");
        for (const auto& g : gens) {
            spray_generator sg;
            if (g.contains("expr")) {
                sg.closed = expr_from_json(g.at("expr"));
            } else {
                monophase_generator m;
                m.N = g.at("N").get<int>();
                m.g = g.at("g").get<double>();
                m.kappa = g.at("kappa").get<std::vector<double>>();
                sg.monophase = m;
            }
            if (sg.monophase) sp.N = sg.monophase->N;
            sp.generators.push_back(std::move(sg));
        }
        if (j.contains("N")) sp.N = j.at("N").get<int>();
        sp.validate();
        return sp;
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("spray spec: ") + e.what());
    }
}

Expr spray_zeta(const self_similar_spray& spray) {
    spray.validate();
    return spray.generator_sum() / spray.scaling().as_expr();
}

double functional_equation_residual(const self_similar_spray& spray, const std::vector<cplx>& points) {
    Expr z = spray_zeta(spray);
    Expr gen = spray.generator_sum();
    double worst = 0.0;
    for (cplx s : points) {
        cplx zs = eval(z, s);
        cplx rhs = eval(gen, s);
        for (double r : spray.ratios) rhs += std::pow(cplx(r), s) * zs;
        worst = std::max(worst, std::abs(zs - rhs) / (1.0 + std::abs(zs)));
    }
    return worst;
}

}  // namespace cfd
