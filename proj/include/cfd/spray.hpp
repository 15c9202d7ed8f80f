#pragma once

#include "cfd/expr.hpp"
#include "cfd/moran.hpp"

#include "json.hpp"

#include <optional>
#include <vector>

namespace cfd {

// Generator whose inner tube volume is V(eps) = sum kappa[a] eps^(N-a) for
// 0 < eps <= g, where g is the inradius.
struct monophase_generator {
    int N = 2;
    double g = 0.5;
    std::vector<double> kappa;

    double tube_volume(double eps) const;
    double volume() const { return tube_volume(g); }
    void validate() const;
};

monophase_generator scaled(const monophase_generator& gen, double lambda);

monophase_generator unit_square_generator();
monophase_generator triangle_generator(double side);
monophase_generator interval_generator(double length);
monophase_generator ball_generator(int N, double radius);

// sum_{a < N} (N - a) kappa[a] g^(s - a) / (s - a)
Expr generator_zeta(const monophase_generator& gen);

struct spray_generator {
    std::optional<monophase_generator> monophase;
    std::optional<Expr> closed;

    Expr zeta() const;
};

struct self_similar_spray {
    int N = 2;
    std::vector<double> ratios;
    std::vector<spray_generator> generators;

    void validate() const;
    Expr generator_sum() const;
    dirichlet_polynomial scaling() const;
};

self_similar_spray spray_from_json(const nlohmann::json& j);

// Generator zeta over 1 - sum r_j^s.
Expr spray_zeta(const self_similar_spray& spray);

// max |zeta(s) - zeta_gen(s) - sum r_j^s zeta(s)| / (1 + |zeta(s)|) over the sample points.
double functional_equation_residual(const self_similar_spray& spray, const std::vector<cplx>& points);

}  // namespace cfd
