#pragma once

#include "cfd/expr.hpp"

#include "json.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace cfd {

enum class string_kind { explicit_list, cantor, generalized_cantor, a_string, self_similar, lapma };

struct length_entry {
    double length = 0.0;
    std::uint64_t mult = 1;
};

struct enumeration_policy {
    double min_length = 1e-12;
    std::size_t max_items = 10'000'000;
};

struct lapma_params {
    double D = 0.5;
    double tau = 14.134725;
    double beta = 0.01;
};

class fractal_string {
public:
    static fractal_string explicit_list(std::vector<length_entry> lengths);
    static fractal_string cantor();
    static fractal_string generalized_cantor(double a);
    static fractal_string a_string(double a);
    static fractal_string self_similar(std::vector<double> ratios, std::vector<double> gaps);
    static fractal_string lapma(double D, double tau, double beta);

    static fractal_string from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

    string_kind kind() const { return kind_; }
    std::string name() const;
    double param_a() const { return a_; }
    const std::vector<double>& ratios() const { return ratios_; }
    const std::vector<double>& gaps() const { return gaps_; }
    const lapma_params& lapma_parameters() const { return lapma_; }

    bool finite() const { return kind_ == string_kind::explicit_list; }
    double total_length() const { return total_; }
    double first_length() const;

    // Exact Minkowski dimension from the provenance; -infinity for finite strings.
    double dimension() const;

    // Visits lengths in nonincreasing order while length >= policy.min_length
    // and fewer than policy.max_items entries have been produced. The visitor
    // returns false to stop early.
    void enumerate(const std::function<bool(const length_entry&)>& visit, const enumeration_policy& policy = {}) const;
    std::vector<length_entry> lengths(const enumeration_policy& policy = {}) const;

    // Self-similar and Cantor-type strings: the ratios with multiplicity whose
    // Moran equation governs convergence.
    std::vector<double> scaling_ratios() const;

    // Number of lengths >= threshold, counted with multiplicity.
    std::uint64_t count_at_least(double threshold) const;
    // Sum of all lengths < threshold, with an error bound.
    double tail_below(double threshold, double* bound = nullptr) const;

    struct lapma_table;

private:
    string_kind kind_ = string_kind::explicit_list;
    std::vector<length_entry> explicit_;
    double a_ = 0.0;
    std::vector<double> ratios_;
    std::vector<double> gaps_;
    lapma_params lapma_;
    double total_ = 0.0;
    double total_bound_ = 0.0;
    std::shared_ptr<const lapma_table> table_;

    double lapma_length(std::uint64_t j) const;
    double lapma_suffix(std::uint64_t n, double* bound) const;
};

// V(x) = x^D (1 + 2 beta cos(tau log x)).
double lapma_volume(const lapma_params& p, double x);
// Solves V(x) = j for x.
double lapma_invert(const lapma_params& p, double j);

std::vector<length_entry> read_lengths_csv(const std::string& path);

std::uint64_t counting(const fractal_string& str, double x);

struct bounded_value {
    double value = 0.0;
    double bound = 0.0;
};

// V(eps) = sum_j min(l_j, 2 eps).
double tube_exact(const fractal_string& str, double eps);
bounded_value tube_exact_bounded(const fractal_string& str, double eps);

struct geometric_zeta_form {
    std::optional<Expr> closed;
};

geometric_zeta_form geometric_zeta(const fractal_string& str);

struct partial_zeta {
    cplx value;
    double tail_bound = 0.0;
    std::size_t terms = 0;
};

partial_zeta zeta_partial(const fractal_string& str, cplx s, const enumeration_policy& policy = {});

// zeta_{dOmega,Omega}(s) = 2^(1-s) zeta_L(s) / s. Its poles are those of
// zeta_L together with 0.
struct rfd_zeta {
    std::optional<Expr> closed;
    fractal_string source;
    std::vector<cplx> extra_poles{cplx{0.0, 0.0}};

    cplx operator()(cplx s) const;
};

rfd_zeta string_rfd_zeta(const fractal_string& str);

// res(zeta_{dOmega,Omega}, w) = 2^(1-w) / w * res(zeta_L, w) for a simple pole w != 0.
cplx rfd_residue(cplx w, cplx res_string);

struct abscissa {
    double lo = 0.0;
    double hi = 0.0;
    bool minus_infinity = false;

    double mid() const { return 0.5 * (lo + hi); }
};

abscissa abscissa_estimate(const fractal_string& str);

}  // namespace cfd
