#include "cfd/moran.hpp"

#include "cfd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace cfd {

dirichlet_polynomial::dirichlet_polynomial(std::vector<moran_term> terms) : terms_(std::move(terms)) {
    if (terms_.empty()) throw bad_parameter("Dirichlet polynomial needs at least one term");
    for (const auto& t : terms_) {
        if (!(t.ratio > 0.0 && t.ratio < 1.0)) throw bad_parameter("ratios must lie in (0, 1)");
        if (!(t.coeff > 0.0)) throw bad_parameter("coefficients must be positive");
    }
}

dirichlet_polynomial dirichlet_polynomial::from_ratios(const std::vector<double>& ratios) {
    std::vector<moran_term> terms;
    for (double r : ratios) {
        auto it = std::find_if(terms.begin(), terms.end(),
                               [r](const moran_term& t) { return std::abs(t.ratio - r) <= 1e-15 * r; });
        if (it == terms.end())
            terms.push_back({1.0, r});
        else
            it->coeff += 1.0;
    }
    return dirichlet_polynomial(std::move(terms));
}

double dirichlet_polynomial::coeff_sum() const {
    double s = 0.0;
    for (const auto& t : terms_) s += t.coeff;
    return s;
}

double dirichlet_polynomial::min_log_inverse_ratio() const {
    double m = INFINITY;
    for (const auto& t : terms_) m = std::min(m, -std::log(t.ratio));
    return m;
}

cplx dirichlet_polynomial::operator()(cplx s) const {
    cplx acc{1.0, 0.0};
    for (const auto& t : terms_) acc -= t.coeff * std::exp(s * std::log(t.ratio));
    return acc;
}

cplx dirichlet_polynomial::derivative(cplx s) const {
    cplx acc{0.0, 0.0};
    for (const auto& t : terms_) {
        double lr = std::log(t.ratio);
        acc -= t.coeff * lr * std::exp(s * lr);
    }
    return acc;
}

double dirichlet_polynomial::scaling_sum(double sigma) const {
    double acc = 0.0;
    for (const auto& t : terms_) acc += t.coeff * std::pow(t.ratio, sigma);
    return acc;
}

Expr dirichlet_polynomial::as_expr() const {
    std::vector<Expr> parts{Expr(1.0)};
    for (const auto& t : terms_) parts.push_back(Expr(-t.coeff) * Expr::power(t.ratio));
    return Expr::sum(std::move(parts));
}

namespace {

void require_root(const dirichlet_polynomial& p) {
    if (p.coeff_sum() <= 1.0) throw no_real_root("sum of coefficients must exceed 1");
}

}  // namespace

double real_dimension_bisection(const dirichlet_polynomial& p) {
    require_root(p);
    double lo = 0.0;
    double hi = 1.0;
    while (p.scaling_sum(hi) > 1.0) hi *= 2.0;
    for (int it = 0; it < 300 && hi - lo > 1e-16 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (p.scaling_sum(mid) > 1.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double real_dimension_newton(const dirichlet_polynomial& p, double start) {
    require_root(p);
    double x = start;
    for (int it = 0; it < 100; ++it) {
        double f = 1.0 - p.scaling_sum(x);
        double df = p.derivative(x).real();
        double step = f / df;
        x -= step;
        if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(x))) break;
    }
    return x;
}

double real_dimension(const dirichlet_polynomial& p) {
    require_root(p);
    double lo = 0.0;
    double hi = 1.0;
    while (p.scaling_sum(hi) > 1.0) hi *= 2.0;
    while (hi - lo > 1e-6) {
        double mid = 0.5 * (lo + hi);
        if (p.scaling_sum(mid) > 1.0)
            lo = mid;
        else
            hi = mid;
    }
    double x = real_dimension_newton(p, 0.5 * (lo + hi));
    if (!(x >= lo - 1e-6 && x <= hi + 1e-6) || std::abs(1.0 - p.scaling_sum(x)) > 1e-14)
        x = real_dimension_bisection(p);
    return x;
}

root_set find_roots(const dirichlet_polynomial& p, const window& w, unsigned workers) {
    holo_fn f = [&p](cplx s) { return p(s); };
    holo_fn df = [&p](cplx s) { return p.derivative(s); };
    return find_zeros(f, df, w, workers);
}

window default_window(const dirichlet_polynomial& p) {
    double s0 = real_dimension(p);
    double lo = s0 - 1.0;
    const auto& t = p.terms();
    if (t.size() > 1) {
        auto m = std::min_element(t.begin(), t.end(),
                                  [](const moran_term& a, const moran_term& b) { return a.ratio < b.ratio; });
        // Left of the point where the smallest ratio dominates all others there are no roots.
        auto g = [&](double sigma) {
            double rest = 1.0;
            for (const auto& u : t)
                if (&u != &*m) rest += u.coeff * std::pow(u.ratio, sigma);
            return m->coeff * std::pow(m->ratio, sigma) - rest;
        };
        double x = s0;
        while (g(x) <= 0.0 && x > -1e3) x -= 1.0;
        lo = std::min(lo, x - 0.5);
    }
    double period = 2.0 * std::numbers::pi / p.min_log_inverse_ratio();
    return {lo, s0 + 0.5, -5.0 * period, 5.0 * period};
}

namespace {

constexpr double tau_rel = 1e-9;
constexpr long long q_max = 1000000;

struct rational_fit {
    long long p = 0;
    long long q = 1;
    double rel_err = INFINITY;
};

// First continued-fraction convergent of x within 10 tau_rel, or the best one
// with denominator at most q_max.
rational_fit best_convergent(double x) {
    rational_fit best;
    long long h0 = 1, h1 = 0, k0 = 0, k1 = 1;
    double y = x;
    for (int it = 0; it < 64; ++it) {
        double a = std::floor(y);
        if (a > 9e15) break;
        long long ai = static_cast<long long>(a);
        long long h = ai * h0 + h1;
        long long k = ai * k0 + k1;
        if (k > q_max) break;
        double err = std::abs(x - static_cast<double>(h) / static_cast<double>(k)) / std::abs(x);
        if (err < best.rel_err) best = {h, k, err};
        if (err <= 10.0 * tau_rel) break;
        h1 = h0;
        h0 = h;
        k1 = k0;
        k0 = k;
        double frac = y - a;
        if (frac <= 1e-300) break;
        y = 1.0 / frac;
    }
    return best;
}

// Searches small integer relations a0*x = sum a_i b_i with |a| <= bound.
bool in_rational_span(double x, const std::vector<double>& basis, int bound) {
    std::size_t m = basis.size();
    std::vector<int> a(m, -bound);
    for (;;) {
        double comb = 0.0;
        for (std::size_t i = 0; i < m; ++i) comb += a[i] * basis[i];
        for (int a0 = 1; a0 <= bound; ++a0) {
            if (std::abs(a0 * x - comb) <= tau_rel * a0 * std::abs(x)) return true;
        }
        std::size_t i = 0;
        while (i < m && a[i] == bound) a[i++] = -bound;
        if (i == m) break;
        ++a[i];
    }
    return false;
}

}  // namespace

lattice_classification classify(const std::vector<double>& ratios) {
    if (ratios.empty()) throw bad_parameter("no ratios");
    lattice_classification c;
    for (double r : ratios) {
        if (!(r > 0.0 && r < 1.0)) throw bad_parameter("ratios must lie in (0, 1)");
        bool seen = false;
        for (double d : c.distinct_ratios)
            if (std::abs(d - r) <= 1e-14 * r) seen = true;
        if (!seen) c.distinct_ratios.push_back(r);
    }
    std::size_t m = c.distinct_ratios.size();
    std::vector<double> logs(m);
    for (std::size_t j = 0; j < m; ++j) logs[j] = -std::log(c.distinct_ratios[j]);

    std::vector<rational_fit> fits(m);
    bool all_rational = true;
    for (std::size_t j = 1; j < m; ++j) {
        fits[j] = best_convergent(logs[j] / logs[0]);
        double e = fits[j].rel_err;
        // A convergent only counts as a relation when it beats the generic
        // 1/q^2 approximation quality by a wide margin; every irrational has
        // convergents within tau_rel once q reaches about 1/sqrt(tau_rel).
        double q = static_cast<double>(fits[j].q);
        if (e * q * q * std::abs(logs[j] / logs[0]) > 1e-3) e = INFINITY;
        fits[j].rel_err = e;
        if (e >= tau_rel && e <= 10.0 * tau_rel) {
            std::ostringstream os;
            os << "log-ratio " << logs[j] / logs[0] << " is within " << e << " of " << fits[j].p << "/" << fits[j].q;
            throw ambiguous(os.str());
        }
        if (e > tau_rel) all_rational = false;
    }
    if (all_rational) {
        long long l = 1;
        for (std::size_t j = 1; j < m; ++j) l = std::lcm(l, fits[j].q);
        std::vector<long long> k(m);
        k[0] = l;
        for (std::size_t j = 1; j < m; ++j) k[j] = fits[j].p * (l / fits[j].q);
        long long g = 0;
        for (auto v : k) g = std::gcd(g, v);
        for (auto& v : k) v /= g;
        double gen = logs[0] / static_cast<double>(k[0]);
        c.lattice = true;
        c.r = std::exp(-gen);
        c.period = 2.0 * std::numbers::pi / gen;
        c.exponents = k;
        c.rank = 1;
        c.generic = false;
        return c;
    }
    std::vector<double> basis{logs[0]};
    for (std::size_t j = 1; j < m; ++j) {
        bool dependent = basis.size() <= 3 && in_rational_span(logs[j], basis, basis.size() <= 2 ? 12 : 6);
        if (!dependent) basis.push_back(logs[j]);
    }
    c.rank = static_cast<int>(basis.size());
    c.generic = c.rank == static_cast<int>(m) && m >= 2;
    return c;
}

root_set periodic_extend(const root_set& base, double p, int k_lo, int k_hi) {
    root_set out = base;
    out.roots.clear();
    for (int k = k_lo; k <= k_hi; ++k) {
        for (const auto& r : base.roots) {
            cplx z = r.z + cplx{0.0, k * p};
            bool dup = false;
            for (const auto& q : out.roots)
                if (std::abs(q.z - z) <= 1e-9 * (1.0 + std::abs(z))) dup = true;
            if (!dup) out.roots.push_back({z, r.order});
        }
    }
    std::sort(out.roots.begin(), out.roots.end(), [](const root& a, const root& b) {
        if (a.z.imag() != b.z.imag()) return a.z.imag() < b.z.imag();
        return a.z.real() < b.z.real();
    });
    out.requested.im_lo = base.requested.im_lo + k_lo * p;
    out.requested.im_hi = base.requested.im_hi + k_hi * p;
    out.effective.im_lo = base.effective.im_lo + k_lo * p;
    out.effective.im_hi = base.effective.im_hi + k_hi * p;
    out.certified_count = out.total_order();
    return out;
}

root_set periodic_extend(const root_set& base, const lattice_classification& c, int k_lo, int k_hi) {
    if (!c.lattice) throw not_lattice("classification is nonlattice");
    return periodic_extend(base, c.period, k_lo, k_hi);
}

}  // namespace cfd
