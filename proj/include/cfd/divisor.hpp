#pragma once

#include "cfd/expr.hpp"
#include "cfd/roots.hpp"

#include "json.hpp"

#include <utility>
#include <vector>

namespace cfd {

// order > 0 is a zero of that order, order < 0 a pole.
struct divisor_entry {
    cplx point;
    int order = 0;
};

class divisor {
public:
    divisor() = default;
    explicit divisor(window region) : region_(region) {}

    const window& region() const { return region_; }
    const std::vector<divisor_entry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }

    // Adds order at point, merging with an existing entry within tol.
    void accumulate(cplx point, int order, double tol = 1e-7);
    // Keeps the larger multiplicity when point is already present.
    void merge_max(cplx point, int order, double tol = 1e-7);

    int order_at(cplx point, double tol = 1e-7) const;
    divisor poles() const;
    divisor zeros() const;
    divisor restricted(const window& w, double margin = 1e-7) const;

    bool conjugation_closed(double tol = 1e-7) const;

    bool conjectural = false;

private:
    void canonicalize();

    window region_;
    std::vector<divisor_entry> entries_;
};

bool same_multiset(const divisor& a, const divisor& b, double tol = 1e-7);

// Points base + i k period with |Im| inside the window.
std::vector<cplx> vertical_line(double base, double period, const window& w, double margin = 1e-7);

// Rewrites e as num / den with both free of division.
std::pair<Expr, Expr> as_fraction(const Expr& e);

// Sum over the additive terms of e of residue_simple at w, skipping terms whose
// denominator does not vanish there.
cplx residue_of(const Expr& e, cplx w);

divisor divisor_of(const Expr& e, const window& w, unsigned workers = 1);

// Pointwise order sum, the divisor of a product.
divisor divisor_union(const divisor& a, const divisor& b);

// Set sum of the poles: omega1 + omega2 carries order -(m + n - 1) for poles
// of orders m and n; coinciding sums keep the largest multiplicity. An empty
// divisor acts as the neutral element.
divisor minkowski_sum(const divisor& a, const divisor& b);

struct product_check_report {
    divisor predicted;
    divisor observed;
    std::vector<divisor_entry> missing;
    std::vector<divisor_entry> extra;
    std::vector<divisor_entry> order_mismatch;
    bool contained = false;
    bool equal = false;
};

// Compares observed poles with minkowski_sum(d1, d2) inside observed.region().
product_check_report product_conjecture_check(const divisor& d1, const divisor& d2, const divisor& observed);

nlohmann::json to_json(const divisor& d);
nlohmann::json to_json(const product_check_report& r);

}  // namespace cfd
