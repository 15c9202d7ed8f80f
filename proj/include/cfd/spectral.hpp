#pragma once

#include "cfd/expr.hpp"
#include "cfd/strings.hpp"

#include <cstdint>
#include <mutex>
#include <optional>
#include <vector>

namespace cfd {

// Euler-Maclaurin summation with M direct terms and Bernoulli corrections
// B_2 .. B_2K. With adaptive set, M grows to at least 2|s| so that points high
// on a vertical line keep full accuracy.
struct zeta_evaluator {
    int M = 50;
    int K = 6;
    bool adaptive = true;

    cplx operator()(cplx s) const;
    // |zeta_{M,K}(s) - zeta_{2M,K+2}(s)|
    double self_check(cplx s) const;
    int terms_for(cplx s) const;
};

// Riemann zeta for Re s > -1, s != 1.
cplx riemann_zeta(cplx s);
double riemann_zeta(double s);

// N_nu(x) = sum_j floor(x l_j), with the lengths >= 1/x cached.
class spectral_counter {
public:
    explicit spectral_counter(fractal_string str);
    spectral_counter(const spectral_counter& other);

    const fractal_string& source() const { return str_; }
    std::uint64_t count(double x) const;

private:
    fractal_string str_;
    mutable std::mutex mutex_;
    mutable std::vector<length_entry> lengths_;
    mutable double cached_to_ = 0.0;
    mutable bool complete_ = false;
};

std::uint64_t frequency_count(const spectral_counter& counter, double x);
// The same count as sum_{n >= 1} N_L(x / n).
std::uint64_t frequency_count_dual(const fractal_string& str, double x);

double weyl_term(const fractal_string& str, double x);

struct second_term_row {
    double x = 0.0;
    std::uint64_t N_nu = 0;
    double W = 0.0;
    double ratio = 0.0;
    bool pre_asymptotic = false;
};

struct second_term_report {
    double D = 0.0;
    std::vector<second_term_row> rows;
    // c_D times the Minkowski content, when the string is measurable.
    std::optional<double> target;
    std::optional<double> c_D;
    // Ratios at x_max, x_max/10 and x_max/100 agree within 5%.
    bool converged = false;
    // Spread of the ratio over the rows past 1/l_1.
    double amplitude = 0.0;
};

// c_D = (1 - D) 2^(-(1 - D)) (-zeta(D))
double second_term_constant(double D);

second_term_report second_term_check(const fractal_string& str, const std::vector<double>& xs, unsigned workers = 1);

// x + (1 / (2 log 3)) sum_{|k| <= K} zeta(w_k) x^(w_k) / w_k with w_k = D + i k p.
double cantor_spectral_terms(double x, int K);

// Lapma strings at a zeta zero and at a regular height: the spread of
// (W - N_nu) / x^D over [x_lo, x_hi].
struct suppression_demo {
    double tau_zero = 0.0;
    double tau_other = 0.0;
    double amplitude_zero = 0.0;
    double amplitude_other = 0.0;
    double zeta_at_zero = 0.0;
    double zeta_at_other = 0.0;
};

suppression_demo lapma_suppression(double D, double beta, double tau_zero, double tau_other, double x_lo, double x_hi,
                                   int samples = 400, unsigned workers = 1);

}  // namespace cfd
