#include "cfd/expr.hpp"

#include "cfd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

namespace cfd {

struct Expr::node {
    kind k = kind::constant;
    cplx c{0.0, 0.0};
    positive_base b;
    std::vector<Expr> args;
};

Expr::Expr() : Expr(cplx{0.0, 0.0}) {}

Expr::Expr(cplx c) {
    auto n = std::make_shared<node>();
    n->k = kind::constant;
    n->c = c;
    n_ = std::move(n);
}

Expr::Expr(double c) : Expr(cplx{c, 0.0}) {}

Expr::Expr(std::shared_ptr<const node> n) : n_(std::move(n)) {}

Expr Expr::s() {
    auto n = std::make_shared<node>();
    n->k = kind::var;
    return Expr(std::shared_ptr<const node>(std::move(n)));
}

Expr Expr::power(const positive_base& b) {
    if (!(b.value > 0.0) || !std::isfinite(b.value))
        throw bad_parameter("power base must be a positive real");
    auto n = std::make_shared<node>();
    n->k = kind::expbase;
    n->b = b;
    return Expr(std::shared_ptr<const node>(std::move(n)));
}

Expr Expr::power(double base) {
    positive_base b;
    b.value = base;
    return power(b);
}

Expr Expr::power(long long num, long long den) {
    if (num <= 0 || den <= 0) throw bad_parameter("rational base must be positive");
    long long g = std::gcd(num, den);
    positive_base b;
    b.num = num / g;
    b.den = den / g;
    b.value = static_cast<double>(b.num) / static_cast<double>(b.den);
    return power(b);
}

Expr Expr::sum(std::vector<Expr> terms) {
    std::vector<Expr> kept;
    for (auto& t : terms)
        if (!t.is_constant(0.0)) kept.push_back(std::move(t));
    if (kept.empty()) return Expr(0.0);
    if (kept.size() == 1) return kept.front();
    auto n = std::make_shared<node>();
    n->k = kind::add;
    n->args = std::move(kept);
    return Expr(std::shared_ptr<const node>(std::move(n)));
}

Expr Expr::product(std::vector<Expr> factors) {
    std::vector<Expr> kept;
    for (auto& f : factors) {
        if (f.is_constant(0.0)) return Expr(0.0);
        if (!f.is_constant(1.0)) kept.push_back(std::move(f));
    }
    if (kept.empty()) return Expr(1.0);
    if (kept.size() == 1) return kept.front();
    auto n = std::make_shared<node>();
    n->k = kind::mul;
    n->args = std::move(kept);
    return Expr(std::shared_ptr<const node>(std::move(n)));
}

Expr Expr::quotient(Expr num, Expr den) {
    if (den.is_constant(0.0)) throw bad_parameter("division by the zero constant");
    if (num.is_constant(0.0)) return Expr(0.0);
    if (den.is_constant(1.0)) return num;
    auto n = std::make_shared<node>();
    n->k = kind::div;
    n->args = {std::move(num), std::move(den)};
    return Expr(std::shared_ptr<const node>(std::move(n)));
}

Expr::kind Expr::type() const { return n_->k; }
cplx Expr::value() const { return n_->c; }
const positive_base& Expr::base() const { return n_->b; }
const std::vector<Expr>& Expr::args() const { return n_->args; }

bool Expr::is_constant(cplx c) const { return n_->k == kind::constant && n_->c == c; }

Expr operator+(const Expr& a, const Expr& b) { return Expr::sum({a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::sum({a, -b}); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::product({a, b}); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::quotient(a, b); }

Expr operator-(const Expr& a) {
    if (a.type() == Expr::kind::constant) return Expr(-a.value());
    return Expr::product({Expr(-1.0), a});
}

Expr power_of(double base) {
    for (long long q = 1; q <= 1000; ++q) {
        double p = std::round(base * static_cast<double>(q));
        if (p >= 1.0 && p < 9e15 && std::abs(p / static_cast<double>(q) - base) <= 1e-15 * base)
            return Expr::power(static_cast<long long>(p), q);
    }
    return Expr::power(base);
}

Expr shifted_power(double base, double shift) {
    return Expr(std::pow(base, shift)) * Expr::power(base);
}

Expr shifted_power(long long num, long long den, double shift) {
    double b = static_cast<double>(num) / static_cast<double>(den);
    return Expr(std::pow(b, shift)) * Expr::power(num, den);
}

cplx eval(const Expr& e, cplx s) {
    switch (e.type()) {
    case Expr::kind::constant:
        return e.value();
    case Expr::kind::var:
        return s;
    case Expr::kind::add: {
        cplx acc{0.0, 0.0};
        for (const auto& a : e.args()) acc += eval(a, s);
        return acc;
    }
    case Expr::kind::mul: {
        cplx acc{1.0, 0.0};
        for (const auto& a : e.args()) acc *= eval(a, s);
        return acc;
    }
    case Expr::kind::div: {
        cplx n = eval(e.args()[0], s);
        cplx d = eval(e.args()[1], s);
        if (std::abs(d) < pole_guard * (1.0 + std::abs(n))) {
            std::ostringstream os;
            os << "denominator vanishes at s = " << s;
            throw pole_hit(os.str());
        }
        return n / d;
    }
    case Expr::kind::expbase:
        return std::exp(s * std::log(e.base().value));
    }
    return {};
}

Expr deriv(const Expr& e) {
    switch (e.type()) {
    case Expr::kind::constant:
        return Expr(0.0);
    case Expr::kind::var:
        return Expr(1.0);
    case Expr::kind::add: {
        std::vector<Expr> d;
        for (const auto& a : e.args()) d.push_back(deriv(a));
        return Expr::sum(std::move(d));
    }
    case Expr::kind::mul: {
        const auto& f = e.args();
        std::vector<Expr> terms;
        for (std::size_t i = 0; i < f.size(); ++i) {
            Expr di = deriv(f[i]);
            if (di.is_constant(0.0)) continue;
            std::vector<Expr> prod;
            for (std::size_t j = 0; j < f.size(); ++j) prod.push_back(i == j ? di : f[j]);
            terms.push_back(Expr::product(std::move(prod)));
        }
        return Expr::sum(std::move(terms));
    }
    case Expr::kind::div: {
        const Expr& n = e.args()[0];
        const Expr& d = e.args()[1];
        Expr dn = deriv(n);
        Expr dd = deriv(d);
        Expr top = dn * d - n * dd;
        return Expr::quotient(top, d * d);
    }
    case Expr::kind::expbase:
        return Expr(std::log(e.base().value)) * e;
    }
    return {};
}

namespace {

// Magnitude scale of an expression at s: the value it would have if every
// sum were evaluated with absolute values. Used to decide numerical zeros.
double magnitude(const Expr& e, cplx s) {
    switch (e.type()) {
    case Expr::kind::constant:
        return std::abs(e.value());
    case Expr::kind::var:
        return std::abs(s);
    case Expr::kind::add: {
        double acc = 0.0;
        for (const auto& a : e.args()) acc += magnitude(a, s);
        return acc;
    }
    case Expr::kind::mul: {
        double acc = 1.0;
        for (const auto& a : e.args()) acc *= magnitude(a, s);
        return acc;
    }
    case Expr::kind::div: {
        double d = std::abs(eval(e.args()[1], s));
        return magnitude(e.args()[0], s) / std::max(d, std::numeric_limits<double>::min());
    }
    case Expr::kind::expbase:
        return std::abs(std::exp(s * std::log(e.base().value)));
    }
    return 0.0;
}

}  // namespace

cplx residue_simple(const Expr& num, const Expr& den, cplx w) {
    cplx n = eval(num, w);
    cplx d = eval(den, w);
    double scale = magnitude(den, w);
    if (std::abs(d) > 1e-11 * (1.0 + scale) && std::abs(d) >= pole_guard * (1.0 + std::abs(n))) {
        std::ostringstream os;
        os << "denominator is " << d << " at " << w;
        throw not_a_zero(os.str());
    }
    Expr dd = deriv(den);
    cplx dp = eval(dd, w);
    double dscale = magnitude(dd, w);
    if (std::abs(dp) < 1e-9 * (1.0 + dscale)) {
        std::ostringstream os;
        os << "derivative of the denominator vanishes at " << w;
        throw higher_order(os.str());
    }
    return n / dp;
}

double default_radius(cplx center, const std::vector<cplx>& others) {
    double r = 0.25;
    for (const auto& o : others) {
        double d = std::abs(o - center);
        if (d > 0.0) r = std::min(r, 0.5 * d);
    }
    return r;
}

namespace {

constexpr int max_nodes = 1 << 17;

cplx node_point(const contour_spec& spec, int j, int n) {
    double t = 2.0 * std::numbers::pi * (static_cast<double>(j) + 0.5) / n;
    return spec.radius * cplx{std::cos(t), std::sin(t)};
}

double trapezoid_log_derivative(const Expr& e, const Expr& de, const contour_spec& spec, int n) {
    cplx acc{0.0, 0.0};
    for (int j = 0; j < n; ++j) {
        cplx u = node_point(spec, j, n);
        cplx z = spec.center + u;
        cplx f = eval(e, z);
        if (f == cplx{0.0, 0.0}) throw non_integer_winding("function vanishes on the contour");
        acc += eval(de, z) / f * u;
    }
    acc /= static_cast<double>(n);
    return -acc.real();
}

}  // namespace

double winding_value(const Expr& e, const contour_spec& spec) {
    Expr de = deriv(e);
    int n = std::max(8, spec.nodes);
    double prev = trapezoid_log_derivative(e, de, spec, n);
    while (n < max_nodes) {
        n *= 2;
        double cur = trapezoid_log_derivative(e, de, spec, n);
        if (std::abs(cur - prev) <= 1e-10) return cur;
        prev = cur;
    }
    return prev;
}

int pole_order(const Expr& e, const contour_spec& spec) {
    double w = winding_value(e, spec);
    double r = std::round(w);
    if (std::abs(w - r) > 0.25) {
        std::ostringstream os;
        os << "winding " << w << " around " << spec.center << " (radius " << spec.radius << ")";
        throw non_integer_winding(os.str());
    }
    return static_cast<int>(r);
}

std::vector<cplx> laurent_coeffs(const Expr& e, const contour_spec& spec, int k_min, int k_max) {
    if (k_max < k_min) return {};
    auto run = [&](int n, double& fmax) {
        std::vector<cplx> c(static_cast<std::size_t>(k_max - k_min + 1));
        fmax = 0.0;
        for (int j = 0; j < n; ++j) {
            cplx u = node_point(spec, j, n);
            cplx f = eval(e, spec.center + u);
            fmax = std::max(fmax, std::abs(f));
            cplx w = f * std::pow(u, -k_min);
            cplx inv = 1.0 / u;
            for (auto& ck : c) {
                ck += w;
                w *= inv;
            }
        }
        for (auto& ck : c) ck /= static_cast<double>(n);
        return c;
    };
    int n = std::max(8, spec.nodes);
    double fmax = 0.0;
    auto prev = run(n, fmax);
    while (n < max_nodes) {
        n *= 2;
        auto cur = run(n, fmax);
        bool ok = true;
        for (std::size_t i = 0; i < cur.size(); ++i) {
            int k = k_min + static_cast<int>(i);
            double scale = fmax * std::pow(spec.radius, -k);
            if (std::abs(cur[i] - prev[i]) > 1e-10 * scale) ok = false;
        }
        if (ok) return cur;
        prev = std::move(cur);
    }
    throw non_integer_winding("Laurent quadrature did not converge");
}

Expr scaled(const Expr& e, double lambda) { return Expr::power(lambda) * e; }

bool has_real_constants(const Expr& e) {
    if (e.type() == Expr::kind::constant) return e.value().imag() == 0.0;
    for (const auto& a : e.args())
        if (!has_real_constants(a)) return false;
    return true;
}

namespace {

void print(std::ostream& os, const Expr& e) {
    switch (e.type()) {
    case Expr::kind::constant: {
        cplx c = e.value();
        if (c.imag() == 0.0)
            os << c.real();
        else
            os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
        break;
    }
    case Expr::kind::var:
        os << "s";
        break;
    case Expr::kind::add:
    case Expr::kind::mul: {
        const char* sep = e.type() == Expr::kind::add ? " + " : "*";
        os << "(";
        for (std::size_t i = 0; i < e.args().size(); ++i) {
            if (i) os << sep;
            print(os, e.args()[i]);
        }
        os << ")";
        break;
    }
    case Expr::kind::div:
        os << "(";
        print(os, e.args()[0]);
        os << ")/(";
        print(os, e.args()[1]);
        os << ")";
        break;
    case Expr::kind::expbase: {
        const auto& b = e.base();
        if (b.rational())
            os << "(" << b.num << "/" << b.den << ")^s";
        else
            os << b.value << "^s";
        break;
    }
    }
}

}  // namespace

std::string to_string(const Expr& e) {
    std::ostringstream os;
    os.precision(17);
    print(os, e);
    return os.str();
}

}  // namespace cfd
