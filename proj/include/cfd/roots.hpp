#pragma once

#include "cfd/expr.hpp"

#include <functional>
#include <vector>

namespace cfd {

struct window {
    double re_lo = 0.0;
    double re_hi = 0.0;
    double im_lo = 0.0;
    double im_hi = 0.0;

    bool contains(cplx z, double margin = 0.0) const {
        return z.real() >= re_lo - margin && z.real() <= re_hi + margin && z.imag() >= im_lo - margin &&
               z.imag() <= im_hi + margin;
    }
    double width() const { return re_hi - re_lo; }
    double height() const { return im_hi - im_lo; }
};

struct root {
    cplx z;
    int order = 1;
};

struct root_set {
    window requested;
    window effective;
    std::vector<root> roots;
    int certified_count = 0;
    int boundary_nodes = 0;

    int total_order() const {
        int n = 0;
        for (const auto& r : roots) n += r.order;
        return n;
    }
};

using holo_fn = std::function<cplx(cplx)>;

struct winding_result {
    int count = 0;
    int nodes = 0;
    bool ok = false;
};

// Argument-principle count of zeros inside the rectangle, from summed
// argument increments with nodes_per_edge samples per side, doubled until
// two successive counts agree.
winding_result boundary_winding(const holo_fn& f, const window& w, int nodes_per_edge = 1024);

// Zero count inside a circle of the given radius.
int local_winding(const holo_fn& f, cplx center, double radius);

// All zeros of the holomorphic function f in the closed window, with
// multiplicities. Throws count_mismatch if the located zeros do not account
// for the boundary winding number.
root_set find_zeros(const holo_fn& f, const holo_fn& df, const window& w, unsigned workers = 1);

// Expression adapters.
root_set find_zeros(const Expr& e, const window& w, unsigned workers = 1);

}  // namespace cfd
