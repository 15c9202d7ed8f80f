#include "cfd/roots.hpp"

#include "cfd/errors.hpp"
#include "cfd/parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

namespace cfd {

namespace {

constexpr int max_edge_nodes = 1 << 16;

struct arg_sum {
    double total = 0.0;
    double max_jump = 0.0;
    bool finite = true;
};

arg_sum sum_increments(const holo_fn& f, const window& w, int n) {
    const std::array<cplx, 5> corner = {cplx{w.re_lo, w.im_lo}, cplx{w.re_hi, w.im_lo}, cplx{w.re_hi, w.im_hi},
                                        cplx{w.re_lo, w.im_hi}, cplx{w.re_lo, w.im_lo}};
    arg_sum out;
    cplx first = f(corner[0]);
    cplx prev = first;
    if (!std::isfinite(prev.real()) || !std::isfinite(prev.imag()) || prev == cplx{}) {
        out.finite = false;
        return out;
    }
    for (int e = 0; e < 4; ++e) {
        cplx a = corner[e];
        cplx b = corner[e + 1];
        for (int j = 1; j <= n; ++j) {
            cplx z = (j == n) ? b : a + (b - a) * (static_cast<double>(j) / n);
            cplx v = (e == 3 && j == n) ? first : f(z);
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()) || v == cplx{}) {
                out.finite = false;
                return out;
            }
            double d = std::arg(v / prev);
            out.total += d;
            out.max_jump = std::max(out.max_jump, std::abs(d));
            prev = v;
        }
    }
    return out;
}

int rounded_turns(double total) { return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi))); }

}  // namespace

winding_result boundary_winding(const holo_fn& f, const window& w, int nodes_per_edge) {
    winding_result r;
    int n = std::max(8, nodes_per_edge);
    arg_sum prev = sum_increments(f, w, n);
    if (!prev.finite) return r;
    while (n < max_edge_nodes) {
        n *= 2;
        arg_sum cur = sum_increments(f, w, n);
        if (!cur.finite) return r;
        bool agree = rounded_turns(cur.total) == rounded_turns(prev.total);
        if (agree && cur.max_jump < 2.0) {
            r.count = rounded_turns(cur.total);
            r.nodes = n;
            r.ok = true;
            return r;
        }
        // A zero hugging the boundary keeps one increment near pi at every
        // resolution; three agreeing resolutions settle the count.
        if (agree && n * 2 <= max_edge_nodes) {
            arg_sum next = sum_increments(f, w, n * 2);
            if (next.finite && rounded_turns(next.total) == rounded_turns(cur.total)) {
                r.count = rounded_turns(cur.total);
                r.nodes = n * 2;
                r.ok = true;
                return r;
            }
        }
        prev = cur;
    }
    return r;
}

int local_winding(const holo_fn& f, cplx center, double radius) {
    auto run = [&](int n) {
        double total = 0.0;
        cplx first = f(center + radius);
        cplx prev = first;
        for (int j = 1; j <= n; ++j) {
            double t = 2.0 * std::numbers::pi * j / n;
            cplx v = (j == n) ? first : f(center + radius * cplx{std::cos(t), std::sin(t)});
            total += std::arg(v / prev);
            prev = v;
        }
        return rounded_turns(total);
    };
    int n = 64;
    int prev = run(n);
    while (n < max_edge_nodes) {
        n *= 2;
        int cur = run(n);
        if (cur == prev) return cur;
        prev = cur;
    }
    return prev;
}

namespace {

struct solver {
    const holo_fn& f;
    const holo_fn& df;

    int child_nodes(const window& w) const {
        double len = std::max(w.width(), w.height());
        return std::clamp(static_cast<int>(std::ceil(len * 64.0)), 32, 1024);
    }

    bool newton(cplx start, int multiplicity, cplx& out) const {
        cplx z = start;
        for (int it = 0; it < 100; ++it) {
            cplx fz = f(z);
            cplx dz = df(z);
            if (dz == cplx{}) return false;
            cplx step = static_cast<double>(multiplicity) * fz / dz;
            if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) return false;
            z -= step;
            if (std::abs(step) <= 1e-15 * (1.0 + std::abs(z))) break;
        }
        out = z;
        return std::abs(f(z)) <= 1e-10;
    }

    void solve(const window& w, int count, int depth, std::vector<root>& out) const {
        if (count <= 0) return;
        double size = std::max(w.width(), w.height());
        cplx center{0.5 * (w.re_lo + w.re_hi), 0.5 * (w.im_lo + w.im_hi)};
        double margin = 1e-9 * (1.0 + std::abs(center));
        if (count == 1 && size < 2.0) {
            cplx z;
            if (newton(center, 1, z) && w.contains(z, margin)) {
                out.push_back({z, 1});
                return;
            }
        }
        if (count >= 2 && size < 1e-5) {
            cplx z;
            if (newton(center, count, z) && w.contains(z, margin)) {
                double r = std::max(4.0 * size, 1e-7 * (1.0 + std::abs(z)));
                if (local_winding(f, z, r) == count) {
                    out.push_back({z, count});
                    return;
                }
            }
        }
        if (size < 1e-11 || depth > 200) return;
        static constexpr std::array<double, 7> fractions = {0.5, 0.4871, 0.5129, 0.4637, 0.5363, 0.4411, 0.5589};
        bool split_re = w.width() >= w.height();
        for (double t : fractions) {
            window a = w;
            window b = w;
            if (split_re) {
                double x = w.re_lo + t * w.width();
                a.re_hi = x;
                b.re_lo = x;
            } else {
                double y = w.im_lo + t * w.height();
                a.im_hi = y;
                b.im_lo = y;
            }
            winding_result ca = boundary_winding(f, a, child_nodes(a));
            winding_result cb = boundary_winding(f, b, child_nodes(b));
            if (!ca.ok || !cb.ok || ca.count < 0 || cb.count < 0 || ca.count + cb.count != count) continue;
            solve(a, ca.count, depth + 1, out);
            solve(b, cb.count, depth + 1, out);
            return;
        }
    }
};

bool root_less(const root& a, const root& b) {
    if (a.z.imag() != b.z.imag()) return a.z.imag() < b.z.imag();
    return a.z.real() < b.z.real();
}

}  // namespace

root_set find_zeros(const holo_fn& f, const holo_fn& df, const window& w, unsigned workers) {
    if (!(w.re_hi > w.re_lo) || !(w.im_hi > w.im_lo)) {
        root_set empty;
        empty.requested = w;
        empty.effective = w;
        return empty;
    }
    root_set rs;
    rs.requested = w;
    winding_result total;
    for (double eta : {1e-7, 3e-7, 1e-6}) {
        window e{w.re_lo - eta, w.re_hi + eta, w.im_lo - eta, w.im_hi + eta};
        total = boundary_winding(f, e, 1024);
        if (total.ok && total.count >= 0) {
            rs.effective = e;
            break;
        }
    }
    if (!total.ok || total.count < 0) {
        std::ostringstream os;
        os << "boundary winding ill-conditioned on [" << w.re_lo << "," << w.re_hi << "]x[" << w.im_lo << ","
           << w.im_hi << "]";
        throw count_mismatch(os.str());
    }
    rs.certified_count = total.count;
    rs.boundary_nodes = total.nodes;
    const window& e = rs.effective;

    // Horizontal tiles with offsets that avoid lattice-aligned cut lines.
    std::size_t tiles = std::clamp<std::size_t>(static_cast<std::size_t>(e.height() / 8.0), 1, 256);
    std::vector<window> tile(tiles);
    std::vector<winding_result> tile_count(tiles);
    bool tiled = tiles > 1;
    if (tiled) {
        double h = e.height() / static_cast<double>(tiles);
        for (std::size_t i = 0; i < tiles; ++i) {
            tile[i] = e;
            if (i > 0) tile[i].im_lo = e.im_lo + (static_cast<double>(i) + 0.0137) * h;
            if (i + 1 < tiles) tile[i].im_hi = e.im_lo + (static_cast<double>(i + 1) + 0.0137) * h;
        }
        parallel_for(tiles, workers, [&](std::size_t i) {
            tile_count[i] = boundary_winding(f, tile[i], 256);
        });
        int sum = 0;
        for (const auto& t : tile_count) {
            if (!t.ok || t.count < 0) tiled = false;
            sum += t.count;
        }
        if (sum != total.count) tiled = false;
    }
    if (!tiled) {
        tiles = 1;
        tile.assign(1, e);
        tile_count.assign(1, total);
    }
    std::vector<std::vector<root>> found(tiles);
    solver sv{f, df};
    parallel_for(tiles, workers, [&](std::size_t i) { sv.solve(tile[i], tile_count[i].count, 0, found[i]); });
    for (auto& v : found)
        for (auto& r : v) rs.roots.push_back(r);
    std::sort(rs.roots.begin(), rs.roots.end(), root_less);
    if (rs.total_order() != rs.certified_count) {
        std::ostringstream os;
        os << "located " << rs.total_order() << " zeros (with multiplicity) but the boundary winding is "
           << rs.certified_count;
        throw count_mismatch(os.str());
    }
    return rs;
}

root_set find_zeros(const Expr& e, const window& w, unsigned workers) {
    Expr de = deriv(e);
    holo_fn f = [e](cplx s) { return eval(e, s); };
    holo_fn df = [de](cplx s) { return eval(de, s); };
    return find_zeros(f, df, w, workers);
}

}  // namespace cfd
