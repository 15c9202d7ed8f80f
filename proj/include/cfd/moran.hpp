#pragma once

#include "cfd/expr.hpp"
#include "cfd/roots.hpp"

#include <string>
#include <vector>

namespace cfd {

struct moran_term {
    double coeff = 1.0;
    double ratio = 0.5;
};

// f(s) = 1 - sum coeff * ratio^s.
class dirichlet_polynomial {
public:
    dirichlet_polynomial() = default;
    explicit dirichlet_polynomial(std::vector<moran_term> terms);

    // Groups equal ratios: {1/3, 1/3} becomes 1 - 2 * (1/3)^s.
    static dirichlet_polynomial from_ratios(const std::vector<double>& ratios);

    const std::vector<moran_term>& terms() const { return terms_; }
    double coeff_sum() const;
    double min_log_inverse_ratio() const;

    cplx operator()(cplx s) const;
    cplx derivative(cplx s) const;
    double scaling_sum(double sigma) const;

    Expr as_expr() const;

private:
    std::vector<moran_term> terms_;
};

double real_dimension_bisection(const dirichlet_polynomial& p);
double real_dimension_newton(const dirichlet_polynomial& p, double start);
double real_dimension(const dirichlet_polynomial& p);

root_set find_roots(const dirichlet_polynomial& p, const window& w, unsigned workers = 1);

// Default window: Re in [min real part bound, sigma0 + 0.5], ten periods of the
// smallest log(1/r) tall.
window default_window(const dirichlet_polynomial& p);

struct lattice_classification {
    bool lattice = false;
    double r = 0.0;
    double period = 0.0;
    std::vector<long long> exponents;  // per distinct ratio, in input order of first appearance
    std::vector<double> distinct_ratios;
    bool generic = false;
    int rank = 0;
};

lattice_classification classify(const std::vector<double>& ratios);

// Translates every root by i k p for k in [k_lo, k_hi], dropping duplicates.
root_set periodic_extend(const root_set& base, double p, int k_lo, int k_hi);
root_set periodic_extend(const root_set& base, const lattice_classification& c, int k_lo, int k_hi);

}  // namespace cfd
