#pragma once

#include <complex>
#include <memory>
#include <string>
#include <vector>

namespace cfd {

using cplx = std::complex<double>;

// A positive real base b for the entire function b^s. Rational bases keep
// their numerator and denominator so they round-trip exactly through JSON.
struct positive_base {
    double value = 1.0;
    long long num = 0;
    long long den = 0;

    bool rational() const { return den > 0; }
};

class Expr {
public:
    enum class kind { constant, var, add, mul, div, expbase };

    Expr();
    Expr(cplx c);
    Expr(double c);

    static Expr s();
    static Expr power(double base);
    static Expr power(long long num, long long den);
    static Expr power(const positive_base& b);
    static Expr sum(std::vector<Expr> terms);
    static Expr product(std::vector<Expr> factors);
    static Expr quotient(Expr num, Expr den);

    kind type() const;
    cplx value() const;
    const positive_base& base() const;
    const std::vector<Expr>& args() const;

    bool is_constant(cplx c) const;

private:
    struct node;
    explicit Expr(std::shared_ptr<const node> n);
    std::shared_ptr<const node> n_;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);

// b^s, keeping b as an exact fraction when it is p/q with q <= 1000.
Expr power_of(double base);

// b^(s + shift) written as the constant b^shift times b^s.
Expr shifted_power(double base, double shift);
Expr shifted_power(long long num, long long den, double shift);

// Denominator magnitudes below pole_guard * (1 + |numerator|) raise pole_hit.
inline constexpr double pole_guard = 1e-12;

cplx eval(const Expr& e, cplx s);
Expr deriv(const Expr& e);

// Residue of num/den at a simple zero w of den: num(w) / den'(w).
cplx residue_simple(const Expr& num, const Expr& den, cplx w);

struct contour_spec {
    cplx center;
    double radius = 0.25;
    int nodes = 256;
};

// Half the distance from center to the nearest point in others, capped at 0.25.
double default_radius(cplx center, const std::vector<cplx>& others);

// -(1/2 pi i) times the contour integral of e'/e: positive at poles, negative at zeros.
int pole_order(const Expr& e, const contour_spec& spec);
double winding_value(const Expr& e, const contour_spec& spec);

// c_k = (1/2 pi i) * integral of e(s) (s - center)^(-k-1) ds for k in [k_min, k_max].
std::vector<cplx> laurent_coeffs(const Expr& e, const contour_spec& spec, int k_min, int k_max);

// lambda^s * e, the zeta function of the set scaled by lambda.
Expr scaled(const Expr& e, double lambda);

bool has_real_constants(const Expr& e);
std::string to_string(const Expr& e);

}  // namespace cfd
