#include "cfd/spectral.hpp"

#include "cfd/errors.hpp"
#include "cfd/parallel.hpp"
#include "cfd/tube.hpp"

#include <boost/math/special_functions/bernoulli.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cfd {

namespace {

cplx zeta_em(cplx s, int M, int K) {
    if (std::abs(s - 1.0) < 1e-15) throw pole_hit("zeta has a pole at s = 1");
    cplx sum = 0.0;
    for (int n = M - 1; n >= 1; --n) sum += std::pow(static_cast<double>(n), -s);
    const double m = M;
    const cplx mpow = std::pow(m, -s);
    sum += m * mpow / (s - 1.0) + 0.5 * mpow;
    // Rising factorial s (s+1) ... (s+2k-2) times M^(-s-2k+1) / (2k)!
    cplx term = s * mpow / m;
    double fact = 2.0;
    for (int k = 1; k <= K; ++k) {
        sum += boost::math::bernoulli_b2n<double>(k) / fact * term;
        term *= (s + double(2 * k - 1)) * (s + double(2 * k)) / (m * m);
        fact *= (2.0 * k + 1.0) * (2.0 * k + 2.0);
    }
    return sum;
}

std::uint64_t floor_product(double x, double l) {
    double q = x * l;
    double r = std::nearbyint(q);
    if (std::abs(q - r) <= 1e-13 * std::max(1.0, q)) return static_cast<std::uint64_t>(r);
    return static_cast<std::uint64_t>(std::floor(q));
}

}  // namespace

int zeta_evaluator::terms_for(cplx s) const {
    if (M < 2 || K < 1) throw bad_parameter("zeta evaluator needs M >= 2 and K >= 1");
    if (!adaptive) return M;
    return std::max(M, static_cast<int>(std::ceil(2.0 * std::abs(s))));
}

cplx zeta_evaluator::operator()(cplx s) const {
    if (s.real() <= -1.0) throw bad_parameter("zeta evaluator needs Re s > -1");
    return zeta_em(s, terms_for(s), K);
}

double zeta_evaluator::self_check(cplx s) const {
    int m = terms_for(s);
    return std::abs(zeta_em(s, m, K) - zeta_em(s, 2 * m, K + 2));
}

cplx riemann_zeta(cplx s) { return zeta_evaluator{}(s); }

double riemann_zeta(double s) { return riemann_zeta(cplx(s, 0.0)).real(); }

spectral_counter::spectral_counter(fractal_string str) : str_(std::move(str)) {}

spectral_counter::spectral_counter(const spectral_counter& other) : str_(other.str_) {
    std::lock_guard<std::mutex> lock(other.mutex_);
    lengths_ = other.lengths_;
    cached_to_ = other.cached_to_;
    complete_ = other.complete_;
}

std::uint64_t spectral_counter::count(double x) const {
    if (!(x > 0.0)) throw bad_parameter("frequency count needs x > 0");
    const double floor_length = (1.0 / x) * (1.0 - 1e-12);
    std::lock_guard<std::mutex> lock(mutex_);
    if (!complete_ && (cached_to_ == 0.0 || floor_length < cached_to_)) {
        double target = floor_length / 4.0;
        enumeration_policy policy;
        policy.min_length = target;
        policy.max_items = 200'000'000;
        lengths_.clear();
        std::size_t items = 0;
        str_.enumerate(
            [&](const length_entry& e) {
                lengths_.push_back(e);
                ++items;
                return true;
            },
            policy);
        if (items >= policy.max_items) throw resource_limit("too many lengths for x = " + std::to_string(x));
        cached_to_ = target;
        complete_ = str_.finite();
    }
    std::uint64_t n = 0;
    for (const auto& e : lengths_) {
        if (e.length < floor_length) break;
        n += e.mult * floor_product(x, e.length);
    }
    return n;
}

std::uint64_t frequency_count(const spectral_counter& counter, double x) { return counter.count(x); }

std::uint64_t frequency_count_dual(const fractal_string& str, double x) {
    if (!(x > 0.0)) throw bad_parameter("frequency count needs x > 0");
    std::uint64_t top = floor_product(x, str.first_length());
    if (top > 50'000'000) throw resource_limit("dual frequency count needs too many terms");
    std::uint64_t n = 0;
    for (std::uint64_t k = 1; k <= top; ++k) n += counting(str, x / static_cast<double>(k));
    return n;
}

double weyl_term(const fractal_string& str, double x) {
    if (!(x > 0.0)) throw bad_parameter("Weyl term needs x > 0");
    return str.total_length() * x;
}

double second_term_constant(double D) {
    if (!(D > 0.0 && D < 1.0)) throw bad_parameter("c_D needs D in (0, 1)");
    return (1.0 - D) * std::pow(2.0, -(1.0 - D)) * (-riemann_zeta(D));
}

second_term_report second_term_check(const fractal_string& str, const std::vector<double>& xs, unsigned workers) {
    if (xs.empty()) throw bad_parameter("empty x grid");
    second_term_report rep;
    rep.D = str.dimension();
    if (!(rep.D > 0.0 && rep.D < 1.0)) throw bad_parameter("second term check needs D in (0, 1)");
    rep.c_D = second_term_constant(rep.D);
    try {
        verdict v = classify(str, workers);
        if (v.measurable == measurability_kind::yes && v.content) rep.target = *rep.c_D * *v.content;
    } catch (const unsupported_params&) {
    }

    spectral_counter counter(str);
    // Fill the cache from the largest x.
    std::vector<double> sorted = xs;
    std::sort(sorted.begin(), sorted.end());
    counter.count(sorted.back());

    const double start = 1.0 / str.first_length();
    auto row_at = [&](double x) {
        second_term_row r;
        r.x = x;
        r.N_nu = counter.count(x);
        r.W = weyl_term(str, x);
        r.ratio = (r.W - static_cast<double>(r.N_nu)) / std::pow(x, rep.D);
        r.pre_asymptotic = x < start;
        return r;
    };
    rep.rows.resize(sorted.size());
    parallel_for(sorted.size(), workers, [&](std::size_t i) { rep.rows[i] = row_at(sorted[i]); });

    double lo = INFINITY, hi = -INFINITY;
    for (const auto& r : rep.rows)
        if (!r.pre_asymptotic) {
            lo = std::min(lo, r.ratio);
            hi = std::max(hi, r.ratio);
        }
    rep.amplitude = hi >= lo ? hi - lo : 0.0;

    const double xmax = sorted.back();
    if (xmax / 100.0 >= start) {
        double a = row_at(xmax).ratio, b = row_at(xmax / 10.0).ratio, c = row_at(xmax / 100.0).ratio;
        double mean = (a + b + c) / 3.0;
        double spread = std::max({a, b, c}) - std::min({a, b, c});
        rep.converged = spread <= 0.05 * std::abs(mean);
    }
    return rep;
}

double cantor_spectral_terms(double x, int K) {
    if (!(x > 1.0)) throw bad_parameter("cantor spectral terms need x > 1");
    if (K < 0) throw bad_parameter("K must be nonnegative");
    const double log3 = std::log(3.0);
    const double D = std::log(2.0) / log3;
    const double p = 2.0 * std::numbers::pi / log3;
    const double lx = std::log(x);
    double sum = 0.0;
    for (int k = -K; k <= K; ++k) {
        cplx w(D, k * p);
        sum += (riemann_zeta(w) * std::exp(w * lx) / w).real();
    }
    return x + sum / (2.0 * log3);
}

suppression_demo lapma_suppression(double D, double beta, double tau_zero, double tau_other, double x_lo, double x_hi,
                                   int samples, unsigned workers) {
    if (!(x_lo > 0.0 && x_hi > x_lo) || samples < 2) throw bad_parameter("bad x range for the suppression demo");
    suppression_demo out;
    out.tau_zero = tau_zero;
    out.tau_other = tau_other;
    out.zeta_at_zero = std::abs(riemann_zeta(cplx(D, tau_zero)));
    out.zeta_at_other = std::abs(riemann_zeta(cplx(D, tau_other)));
    std::vector<double> xs(samples);
    for (int i = 0; i < samples; ++i) xs[i] = x_lo * std::pow(x_hi / x_lo, double(i) / (samples - 1));
    out.amplitude_zero = second_term_check(fractal_string::lapma(D, tau_zero, beta), xs, workers).amplitude;
    out.amplitude_other = second_term_check(fractal_string::lapma(D, tau_other, beta), xs, workers).amplitude;
    return out;
}

}  // namespace cfd
