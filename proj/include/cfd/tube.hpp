#pragma once

#include "cfd/catalog.hpp"
#include "cfd/divisor.hpp"
#include "cfd/expr.hpp"
#include "cfd/strings.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cfd {

// distance: res(eps^(N-s) zeta(s) / (N-s), w)
// tube:     res(eps^(N-s) zeta(s), w)
// string:   res((2 eps)^(1-s) zeta(s) / (s (1-s)), w), with 0 always included
enum class series_form { distance, tube, string };

std::string to_string(series_form f);
series_form series_form_for(zeta_kind k);

// c * eps^(N - omega) * log(1/eps)^log_power
struct tube_term {
    cplx omega;
    int log_power = 0;
    cplx coeff;
};

// |c_k| <= C / k^2 along the line Re s = re, fitted from the kept terms.
struct line_envelope {
    double re = 0.0;
    double C = 0.0;
    int K = 0;
};

struct tube_series {
    int N = 1;
    series_form form = series_form::distance;
    std::vector<tube_term> terms;
    std::vector<line_envelope> envelopes;
    int pairs = 0;
    double validity = 0.0;
    bool validity_guessed = false;
    bool exact = false;

    double exponent_base() const { return form == series_form::string ? 1.0 : static_cast<double>(N); }
};

tube_series series_from_divisor(const Expr& zeta, const divisor& d, int N, series_form form);

// Poles found in |Im s| <= 1.5 period are extended along their vertical lines
// to K conjugate pairs per line.
tube_series lattice_series(const Expr& zeta, int N, series_form form, double period, int K, double re_lo,
                           double re_hi, unsigned workers = 1);

tube_series series_for(const catalog_entry& e, int K = 200, unsigned workers = 1);
tube_series series_for(const fractal_string& f, int K = 200, unsigned workers = 1);

struct series_value {
    double value = 0.0;
    double tail_bound = 0.0;
    double imag = 0.0;
};

series_value eval_series(const tube_series& s, double eps);

nlohmann::json to_json(const tube_series& s);

enum class measurability_kind { yes, no, degenerate };

struct verdict {
    measurability_kind measurable = measurability_kind::yes;
    std::optional<int> gauge;
    std::optional<double> content;
    bool average_content = false;
    std::vector<double> fractal_dims;
    bool fractal = false;
    bool critical = false;
    double D = 0.0;
    std::string notes;
};

std::string to_string(measurability_kind k);

// Content factor applied to the leading Laurent coefficient at D.
double content_factor(series_form form, int N, double D);

// With a period, the divisor must cover at least three periods of the
// principal line. known_content replaces the Laurent computation when zeta is
// unavailable.
verdict measurability(const divisor& d, double D, const std::optional<Expr>& zeta, series_form form, int N,
                      double period = 0.0, std::optional<double> known_content = std::nullopt);
void fractality(const divisor& d, double D, verdict& v);

verdict classify(const catalog_entry& e, unsigned workers = 1);
verdict classify(const fractal_string& f, unsigned workers = 1);

nlohmann::json to_json(const verdict& v);

}  // namespace cfd
