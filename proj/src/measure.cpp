#include "cfd/measure.hpp"

#include "cfd/errors.hpp"
#include "cfd/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace cfd {

namespace {

const double sqrt3 = std::sqrt(3.0);
constexpr double far_away = 1e20;

bool in_gasket(double x, double y, int depth) {
    double v = y / (sqrt3 / 2.0);
    double u = x - v / 2.0;
    if (u < 0.0 || v < 0.0 || u + v > 1.0) return false;
    for (int k = 0; k < depth; ++k) {
        if (u >= 0.5) {
            u = 2.0 * u - 1.0;
            v = 2.0 * v;
        } else if (v >= 0.5) {
            u = 2.0 * u;
            v = 2.0 * v - 1.0;
        } else if (u + v <= 0.5) {
            u = 2.0 * u;
            v = 2.0 * v;
        } else {
            return false;
        }
    }
    return true;
}

bool in_carpet(double x, double y, int depth) {
    if (x < 0.0 || y < 0.0 || x > 1.0 || y > 1.0) return false;
    for (int k = 0; k < depth; ++k) {
        x *= 3.0;
        y *= 3.0;
        double dx = std::min(2.0, std::floor(x));
        double dy = std::min(2.0, std::floor(y));
        if (dx == 1.0 && dy == 1.0) return false;
        x -= dx;
        y -= dy;
    }
    return true;
}

void edt_1d(const double* f, int n, double* d, int* v, double* z) {
    auto meet = [&](int q, int p) { return ((f[q] + double(q) * q) - (f[p] + double(p) * p)) / (2.0 * q - 2.0 * p); };
    int k = 0;
    v[0] = 0;
    z[0] = -far_away;
    z[1] = far_away;
    for (int q = 1; q < n; ++q) {
        double s = meet(q, v[k]);
        while (s <= z[k]) {
            --k;
            s = meet(q, v[k]);
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = far_away;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        double t = q - v[k];
        d[q] = t * t + f[v[k]];
    }
}

struct layout {
    double x0, y0, L;
};

layout layout_for(const raster_spec& s) {
    switch (s.kind) {
    case raster_kind::gasket: {
        double L = 1.0 + 2.0 * s.margin;
        return {-s.margin, sqrt3 / 4.0 - L / 2.0, L};
    }
    case raster_kind::carpet: return {-s.margin, -s.margin, 1.0 + 2.0 * s.margin};
    case raster_kind::cantor_graph_rfd: return {0.0, 0.0, 1.0};
    case raster_kind::square_boundary: {
        // Cell centers fall on the lines x, y in {0, 1}.
        double h = 1.0 / (s.cells - 1);
        return {-h / 2.0, -h / 2.0, 1.0 + h};
    }
    case raster_kind::disk_rfd: {
        double h = 2.0 / (s.cells - 1);
        return {-1.0 - h / 2.0, -1.0 - h / 2.0, 2.0 + h};
    }
    }
    throw bad_parameter("unknown raster kind");
}

void fill_triangle(raster_set& r, double a, double l, double y0, bool above) {
    double apex = above ? y0 + l : y0 - l;
    double lo = std::min(y0, apex);
    double hi = std::max(y0, apex);
    int j0 = std::max(0, static_cast<int>(std::floor((lo - r.y0) / r.h - 0.5)));
    int j1 = std::min(r.n - 1, static_cast<int>(std::ceil((hi - r.y0) / r.h - 0.5)));
    for (int j = j0; j <= j1; ++j) {
        double y = r.y0 + (j + 0.5) * r.h;
        if (y <= lo || y >= hi) continue;
        double half = 0.5 * l * (1.0 - std::abs(y - y0) / l);
        double xl = a + 0.5 * l - half;
        double xr = a + 0.5 * l + half;
        int i0 = std::max(0, static_cast<int>(std::ceil((xl - r.x0) / r.h - 0.5)));
        int i1 = std::min(r.n - 1, static_cast<int>(std::floor((xr - r.x0) / r.h - 0.5)));
        for (int i = i0; i <= i1; ++i) r.omega[r.index(i, j)] = 1;
    }
}

void cantor_triangles(raster_set& r, int stage, int depth, double a, double width) {
    if (stage > depth) return;
    double l = width / 3.0;
    double gap = a + l;
    double y0 = cantor_function(gap + 0.5 * l);
    fill_triangle(r, gap, l, y0, true);
    fill_triangle(r, gap, l, y0, false);
    cantor_triangles(r, stage + 1, depth, a, l);
    cantor_triangles(r, stage + 1, depth, a + 2.0 * l, l);
}

}  // namespace

std::string to_string(raster_kind k) {
    switch (k) {
    case raster_kind::gasket: return "gasket";
    case raster_kind::carpet: return "carpet";
    case raster_kind::cantor_graph_rfd: return "cantor_graph_rfd";
    case raster_kind::square_boundary: return "square_boundary";
    case raster_kind::disk_rfd: return "disk_rfd";
    }
    return "unknown";
}

raster_kind raster_kind_from(const std::string& name) {
    for (auto k : {raster_kind::gasket, raster_kind::carpet, raster_kind::cantor_graph_rfd,
                   raster_kind::square_boundary, raster_kind::disk_rfd})
        if (to_string(k) == name) return k;
    throw bad_parameter("unknown raster set: " + name);
}

double cantor_function(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double c = 0.0;
    double w = 0.5;
    for (int k = 0; k < 60; ++k) {
        x *= 3.0;
        int d = std::min(2, static_cast<int>(std::floor(x)));
        x -= d;
        if (d == 1) return c + w;
        if (d == 2) c += w;
        w *= 0.5;
    }
    return c;
}

double raster_set::occupied_area() const {
    return static_cast<double>(std::count(set.begin(), set.end(), std::uint8_t{1})) * cell_area();
}

double raster_set::omega_area() const {
    return static_cast<double>(std::count(omega.begin(), omega.end(), std::uint8_t{1})) * cell_area();
}

int default_depth(raster_kind k, int cells) {
    switch (k) {
    case raster_kind::gasket: return std::max(1, static_cast<int>(std::floor(std::log2(cells / 4.0))));
    case raster_kind::carpet:
    case raster_kind::cantor_graph_rfd:
        return std::max(1, static_cast<int>(std::floor(std::log(cells / 3.0) / std::log(3.0))));
    case raster_kind::square_boundary:
    case raster_kind::disk_rfd: return 0;
    }
    return 1;
}

raster_set rasterize(const raster_spec& spec, unsigned workers) {
    if (spec.cells < 256) throw bad_parameter("resolution must be at least 256 cells");
    if (static_cast<double>(spec.cells) * spec.cells > double(1u << 30))
        throw resource_limit("more than 2^30 cells requested");
    bool fractal = spec.kind == raster_kind::gasket || spec.kind == raster_kind::carpet ||
                   spec.kind == raster_kind::cantor_graph_rfd;
    if (fractal && spec.depth < 1) throw bad_parameter("depth must be at least 1");
    if (spec.margin < 0.0) throw bad_parameter("margin must be nonnegative");

    raster_set r;
    r.kind = spec.kind;
    r.depth = spec.depth;
    r.n = spec.cells;
    layout lay = layout_for(spec);
    r.x0 = lay.x0;
    r.y0 = lay.y0;
    r.h = lay.L / spec.cells;
    const std::size_t total = static_cast<std::size_t>(r.n) * r.n;
    r.set.assign(total, 0);

    auto cx = [&](int i) { return r.x0 + (i + 0.5) * r.h; };
    auto cy = [&](int j) { return r.y0 + (j + 0.5) * r.h; };

    switch (spec.kind) {
    case raster_kind::gasket:
        parallel_for(static_cast<std::size_t>(r.n), workers, [&](std::size_t j) {
            for (int i = 0; i < r.n; ++i)
                r.set[r.index(i, static_cast<int>(j))] = in_gasket(cx(i), cy(static_cast<int>(j)), spec.depth);
        });
        break;
    case raster_kind::carpet:
        parallel_for(static_cast<std::size_t>(r.n), workers, [&](std::size_t j) {
            for (int i = 0; i < r.n; ++i)
                r.set[r.index(i, static_cast<int>(j))] = in_carpet(cx(i), cy(static_cast<int>(j)), spec.depth);
        });
        break;
    case raster_kind::square_boundary:
        r.omega.assign(total, 0);
        for (int j = 0; j < r.n; ++j)
            for (int i = 0; i < r.n; ++i) {
                bool edge = i == 0 || j == 0 || i == r.n - 1 || j == r.n - 1;
                r.set[r.index(i, j)] = edge;
                r.omega[r.index(i, j)] = !edge;
            }
        break;
    case raster_kind::disk_rfd:
        r.omega.assign(total, 0);
        for (int j = 0; j < r.n; ++j)
            for (int i = 0; i < r.n; ++i) {
                double x = cx(i);
                double y = cy(j);
                double nx = std::clamp(0.0, x - r.h / 2, x + r.h / 2);
                double ny = std::clamp(0.0, y - r.h / 2, y + r.h / 2);
                double near = std::hypot(nx, ny);
                double farx = std::max(std::abs(x - r.h / 2), std::abs(x + r.h / 2));
                double fary = std::max(std::abs(y - r.h / 2), std::abs(y + r.h / 2));
                double far = std::hypot(farx, fary);
                r.set[r.index(i, j)] = near <= 1.0 && 1.0 <= far;
                r.omega[r.index(i, j)] = std::hypot(x, y) < 1.0;
            }
        break;
    case raster_kind::cantor_graph_rfd: {
        r.omega.assign(total, 0);
        for (int i = 0; i < r.n; ++i) {
            double ya = cantor_function(r.x0 + i * r.h);
            double yb = cantor_function(r.x0 + (i + 1) * r.h);
            int j0 = std::clamp(static_cast<int>(std::floor((ya - r.y0) / r.h)), 0, r.n - 1);
            int j1 = std::clamp(static_cast<int>(std::floor((yb - r.y0) / r.h)), 0, r.n - 1);
            for (int j = j0; j <= j1; ++j) r.set[r.index(i, j)] = 1;
        }
        cantor_triangles(r, 1, spec.depth, 0.0, 1.0);
        break;
    }
    }
    return r;
}

std::vector<float> squared_distance(const raster_set& r, unsigned workers) {
    const int n = r.n;
    std::vector<float> out(static_cast<std::size_t>(n) * n);
    parallel_for(static_cast<std::size_t>(n), workers, [&](std::size_t col) {
        std::vector<double> f(n), d(n), z(n + 1);
        std::vector<int> v(n);
        int i = static_cast<int>(col);
        for (int j = 0; j < n; ++j) f[j] = r.set[r.index(i, j)] ? 0.0 : far_away;
        edt_1d(f.data(), n, d.data(), v.data(), z.data());
        for (int j = 0; j < n; ++j) out[r.index(i, j)] = static_cast<float>(std::min(d[j], far_away));
    });
    parallel_for(static_cast<std::size_t>(n), workers, [&](std::size_t row) {
        std::vector<double> f(n), d(n), z(n + 1);
        std::vector<int> v(n);
        int j = static_cast<int>(row);
        for (int i = 0; i < n; ++i) f[i] = out[r.index(i, j)];
        edt_1d(f.data(), n, d.data(), v.data(), z.data());
        for (int i = 0; i < n; ++i) out[r.index(i, j)] = static_cast<float>(std::min(d[i], far_away));
    });
    return out;
}

std::vector<double> raw_tube(const raster_set& r, const std::vector<float>& dist2, const std::vector<double>& eps) {
    double reach = 0.0;
    for (double e : eps) reach = std::max(reach, e / r.h + 1.0);
    // Squared center distances are integers, so a histogram over them is exact.
    std::vector<double> hist(static_cast<std::size_t>(reach * reach) + 2, 0.0);
    const bool rel = r.relative();
    for (std::size_t c = 0; c < dist2.size(); ++c) {
        if (rel && !r.omega[c]) continue;
        double d = dist2[c];
        if (d < static_cast<double>(hist.size() - 1)) hist[static_cast<std::size_t>(d + 0.5)] += 1.0;
    }
    std::vector<double> out;
    for (double e : eps) {
        double t = e / r.h + 1.0;
        double acc = 0.0;
        for (std::size_t b = 0; b < hist.size(); ++b) {
            if (hist[b] == 0.0) continue;
            double w = std::clamp(t - std::sqrt(static_cast<double>(b)), 0.0, 1.0);
            if (w == 0.0) break;
            acc += w * hist[b];
        }
        out.push_back(acc * r.cell_area());
    }
    return out;
}

empirical_tube tube_volume(const raster_spec& spec, const std::vector<double>& eps, unsigned workers) {
    if (eps.empty()) throw bad_parameter("empty eps list");
    raster_spec fine = spec;
    // The coarse grid must resolve the prefractal too.
    if (fine.depth == 0) fine.depth = default_depth(spec.kind, spec.cells / 2);
    raster_spec coarse = fine;
    coarse.cells = spec.cells / 2;

    raster_set rf = rasterize(fine, workers);
    raster_set rc = rasterize(coarse, workers);
    double eps_min = *std::min_element(eps.begin(), eps.end());
    if (eps_min < 3.0 * rc.h)
        throw epsilon_too_small("eps = " + std::to_string(eps_min) + " is below three cell widths (" +
                                std::to_string(3.0 * rc.h) + ")");
    if (!rf.relative()) {
        double eps_max = *std::max_element(eps.begin(), eps.end());
        if (eps_max > spec.margin + 1e-12)
            throw bad_parameter("eps = " + std::to_string(eps_max) + " exceeds the raster margin");
    }

    // Each eps is also sampled one fine cell to either side.
    std::vector<double> probe = eps;
    for (double e : eps) {
        probe.push_back(e - rf.h);
        probe.push_back(e + rf.h);
    }
    auto vp = raw_tube(rf, squared_distance(rf, workers), probe);
    std::vector<double> vf(vp.begin(), vp.begin() + eps.size());
    auto vc = raw_tube(rc, squared_distance(rc, workers), eps);

    empirical_tube t;
    t.eps = eps;
    t.source = to_string(spec.kind);
    t.cells_fine = fine.cells;
    t.cells_coarse = coarse.cells;
    t.depth = fine.depth;
    t.richardson_order = 1;
    t.ceiling = rf.relative() ? std::max(rf.omega_area(), rc.omega_area()) : rf.n * rf.h * rf.n * rf.h;
    for (std::size_t k = 0; k < eps.size(); ++k) {
        t.volume.push_back(2.0 * vf[k] - vc[k]);
        double slope_term = 0.25 * std::abs(vp[eps.size() + 2 * k + 1] - vp[eps.size() + 2 * k]);
        t.err.push_back(std::abs(vf[k] - vc[k]) + slope_term);
    }
    check_tube(t);
    return t;
}

empirical_tube tube_from_function(const std::function<double(double)>& V, const std::vector<double>& eps,
                                  double ceiling, std::string source) {
    empirical_tube t;
    t.eps = eps;
    t.source = std::move(source);
    t.ceiling = ceiling;
    for (double e : eps) {
        t.volume.push_back(V(e));
        t.err.push_back(0.0);
    }
    check_tube(t);
    return t;
}

int choose_depth(raster_spec spec, double eps_min, unsigned workers) {
    int d = default_depth(spec.kind, spec.cells / 2);
    if (d == 0) return 0;
    std::vector<double> e{eps_min};
    auto volume = [&](int depth, int cells) {
        raster_spec s = spec;
        s.depth = depth;
        s.cells = cells;
        raster_set r = rasterize(s, workers);
        return raw_tube(r, squared_distance(r, workers), e)[0];
    };
    for (int tries = 0; tries < 4; ++tries, ++d) {
        double vd = volume(d, spec.cells);
        double err = std::abs(vd - volume(d, spec.cells / 2));
        if (std::abs(vd - volume(d + 1, spec.cells)) <= err) return d;
    }
    throw not_converged("prefractal depth did not stabilise at eps = " + std::to_string(eps_min));
}

std::vector<double> log_grid(double lo, double hi, int n) {
    if (!(lo > 0.0) || !(hi > lo) || n < 2) throw bad_parameter("log grid needs 0 < lo < hi and n >= 2");
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) out[k] = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * k / (n - 1));
    out.front() = lo;
    out.back() = hi;
    return out;
}

cplx tube_zeta_measured(const empirical_tube& t, int N, double D, cplx s, double ratio) {
    if (t.eps.size() < 3) throw insufficient_range("tube zeta needs at least three samples");
    if (!(s.real() > D)) throw bad_parameter("tube zeta with a power-law tail needs Re s > D");
    if (!(ratio > 1.0)) throw bad_parameter("ratio must exceed 1");
    std::vector<std::pair<double, double>> pts;
    for (std::size_t k = 0; k < t.eps.size(); ++k) pts.emplace_back(t.eps[k], t.volume[k]);
    std::sort(pts.begin(), pts.end());
    const double e0 = pts.front().first;
    if (pts.back().first < ratio * e0) throw insufficient_range("samples do not cover one period");

    auto integrand = [&](double e, double v) { return v * std::pow(cplx(e), s - double(N)); };
    cplx body = 0.0;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        double du = std::log(pts[k + 1].first / pts[k].first);
        body += 0.5 * du * (integrand(pts[k].first, pts[k].second) + integrand(pts[k + 1].first, pts[k + 1].second));
    }

    // Trapezoid mean of the profile over the first period, in log eps.
    double acc = 0.0, span = 0.0;
    for (std::size_t k = 0; k + 1 < pts.size() && pts[k].first < ratio * e0 * (1.0 + 1e-12); ++k) {
        double du = std::log(pts[k + 1].first / pts[k].first);
        double a = pts[k].second / std::pow(pts[k].first, N - D);
        double b = pts[k + 1].second / std::pow(pts[k + 1].first, N - D);
        acc += 0.5 * du * (a + b);
        span += du;
    }
    double amp = acc / span;
    cplx tail = amp * std::pow(cplx(e0), s - D) / (s - D);
    return body + tail;
}

void check_tube(const empirical_tube& t) {
    std::vector<std::size_t> order(t.eps.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return t.eps[a] < t.eps[b]; });
    for (std::size_t k = 0; k + 1 < order.size(); ++k) {
        std::size_t a = order[k];
        std::size_t b = order[k + 1];
        double slack = t.err[a] + t.err[b] + 1e-12 * std::abs(t.volume[b]);
        if (t.volume[b] < t.volume[a] - slack)
            throw not_converged("tube volume decreases between eps = " + std::to_string(t.eps[a]) + " and " +
                                std::to_string(t.eps[b]));
    }
    if (t.ceiling > 0.0)
        for (std::size_t k = 0; k < t.eps.size(); ++k)
            if (t.volume[k] > t.ceiling * (1.0 + 1e-12) + t.err[k])
                throw not_converged("tube volume exceeds its ceiling at eps = " + std::to_string(t.eps[k]));
}

dim_estimate dim_fit(const empirical_tube& t, int N) {
    std::vector<double> x, y;
    for (std::size_t k = 0; k < t.eps.size(); ++k) {
        if (!(t.volume[k] > 0.0)) continue;
        x.push_back(std::log(t.eps[k]));
        y.push_back(std::log(t.volume[k]));
    }
    if (x.size() < 10) throw insufficient_range("dimension fit needs at least 10 usable points");
    auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    if ((*hi - *lo) / std::log(10.0) < 1.5) throw insufficient_range("dimension fit needs 1.5 decades of eps");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        mx += x[k];
        my += y[k];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sxx += (x[k] - mx) * (x[k] - mx);
        sxy += (x[k] - mx) * (y[k] - my);
    }
    double slope = sxy / sxx;
    double rss = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        double r = y[k] - my - slope * (x[k] - mx);
        rss += r * r;
    }
    double se = std::sqrt(rss / (n - 2.0) / sxx);
    return {N - slope, 2.0 * se, static_cast<int>(x.size())};
}

content_bounds contents(const empirical_tube& t, double D, int N) {
    if (t.eps.empty()) throw insufficient_range("empty tube");
    double eps_min = *std::min_element(t.eps.begin(), t.eps.end());
    double cut = eps_min * std::pow(10.0, 1.5);
    content_bounds b{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (std::size_t k = 0; k < t.eps.size(); ++k) {
        if (t.eps[k] > cut) continue;
        double q = t.volume[k] / std::pow(t.eps[k], N - D);
        b.lower = std::min(b.lower, q);
        b.upper = std::max(b.upper, q);
    }
    return b;
}

content_bounds contents(const std::function<double(double)>& V, double D, int N, double eps_lo, double eps_hi,
                        double ratio) {
    double a = std::log(eps_lo);
    double b = ratio > 1.0 ? a + std::log(ratio) : std::log(eps_hi);
    if (!(b > a)) throw bad_parameter("empty eps range");
    auto q = [&](double u) {
        double e = std::exp(u);
        return V(e) / std::pow(e, N - D);
    };
    const int samples = 4000;
    std::vector<double> val(samples + 1);
    for (int k = 0; k <= samples; ++k) val[k] = q(a + (b - a) * k / samples);

    auto refine = [&](int k, bool maximize) {
        double lo = a + (b - a) * std::max(0, k - 1) / samples;
        double hi = a + (b - a) * std::min(samples, k + 1) / samples;
        const double g = (std::sqrt(5.0) - 1.0) / 2.0;
        double x1 = hi - g * (hi - lo);
        double x2 = lo + g * (hi - lo);
        double f1 = q(x1);
        double f2 = q(x2);
        for (int it = 0; it < 60; ++it) {
            bool left = maximize ? f1 > f2 : f1 < f2;
            if (left) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - g * (hi - lo);
                f1 = q(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + g * (hi - lo);
                f2 = q(x2);
            }
        }
        double best = maximize ? std::max({f1, f2, val[k]}) : std::min({f1, f2, val[k]});
        return best;
    };
    int kmin = static_cast<int>(std::min_element(val.begin(), val.end()) - val.begin());
    int kmax = static_cast<int>(std::max_element(val.begin(), val.end()) - val.begin());
    return {refine(kmin, false), refine(kmax, true)};
}

average_result average_content(const std::function<double(double)>& V, double D, int N, double t_min, double tol,
                               double window_decades) {
    if (!(t_min > 0.0 && t_min < 1.0)) throw bad_parameter("t_min must lie in (0, 1)");
    const double X = std::log(1.0 / t_min);
    const double W = window_decades * std::log(10.0);
    const double decade = std::log(10.0);
    if (X < W + decade) throw insufficient_range("the average needs a window of log(1/t) plus one decade");
    auto g = [&](double x) { return V(std::exp(-x)) * std::exp((N - D) * x); };
    auto hann_mean = [&](double start) {
        const int m = 20000;
        double num = 0.0;
        double den = 0.0;
        for (int k = 0; k <= m; ++k) {
            double x = start + W * k / m;
            double s = std::sin(std::numbers::pi * k / m);
            double w = s * s * ((k == 0 || k == m) ? 0.5 : 1.0);
            num += w * g(x);
            den += w;
        }
        return num / den;
    };
    average_result r;
    r.value = hann_mean(X - W);
    r.previous = hann_mean(X - W - decade);
    if (std::abs(r.value - r.previous) > tol * std::max(1.0, std::abs(r.value)))
        throw not_converged("average content windows differ: " + std::to_string(r.previous) + " vs " +
                            std::to_string(r.value));
    return r;
}

oscillation oscillation_detect(const std::vector<double>& u, const std::vector<double>& profile) {
    const std::size_t n = profile.size();
    if (n < 16 || u.size() != n) throw bad_parameter("oscillation detection needs at least 16 samples");
    oscillation o;
    auto [mn, mx] = std::minmax_element(profile.begin(), profile.end());
    o.amplitude = *mx - *mn;
    o.semi_amplitude = 0.5 * o.amplitude;
    double mean = 0.0;
    for (double p : profile) mean += p;
    mean /= static_cast<double>(n);
    o.mean = mean;

    std::vector<double> c(n / 2);
    for (std::size_t lag = 0; lag < c.size(); ++lag) {
        double s = 0.0;
        for (std::size_t k = 0; k + lag < n; ++k) s += (profile[k] - mean) * (profile[k + lag] - mean);
        c[lag] = s / static_cast<double>(n - lag);
    }
    if (!(c[0] > 0.0)) return o;
    std::size_t lag = 1;
    while (lag < c.size() && c[lag] > 0.0) ++lag;
    std::size_t best = 0;
    for (std::size_t k = lag; k + 1 < c.size(); ++k) {
        if (c[k] > c[k - 1] && c[k] >= c[k + 1] && c[k] > 0.5 * c[0]) {
            best = k;
            break;
        }
    }
    if (best == 0) return o;
    double ym = c[best - 1], y0 = c[best], yp = c[best + 1];
    double denom = ym - 2.0 * y0 + yp;
    double shift = denom != 0.0 ? 0.5 * (ym - yp) / denom : 0.0;
    o.period = (static_cast<double>(best) + shift) * (u[1] - u[0]);
    return o;
}

oscillation oscillation_detect(const std::function<double(double)>& V, double D, int N, double eps_lo, double eps_hi,
                               int samples) {
    if (!(eps_lo > 0.0 && eps_hi > eps_lo)) throw bad_parameter("bad eps range");
    std::vector<double> u(static_cast<std::size_t>(samples)), p(static_cast<std::size_t>(samples));
    double a = std::log(1.0 / eps_hi);
    double b = std::log(1.0 / eps_lo);
    for (int k = 0; k < samples; ++k) {
        u[k] = a + (b - a) * k / (samples - 1);
        double e = std::exp(-u[k]);
        p[k] = V(e) / std::pow(e, N - D);
    }
    return oscillation_detect(u, p);
}

}  // namespace cfd
