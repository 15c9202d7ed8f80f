#include "cfd/divisor.hpp"

#include "cfd/errors.hpp"
#include "cfd/expr_json.hpp"
#include "cfd/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cfd {

namespace {

bool close(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol * (1.0 + std::abs(a)); }

bool is_one(const Expr& e) { return e.type() == Expr::kind::constant && e.is_constant(1.0); }

Expr times(const Expr& a, const Expr& b) {
    if (is_one(a)) return b;
    if (is_one(b)) return a;
    return a * b;
}

// (1 / 2 pi i) times the integral of z q'/q over the circle, divided by the net zero order.
cplx refine_center(const Expr& q, const Expr& dq, cplx c, double r, int net_zero_order) {
    const int n = 256;
    cplx acc{};
    for (int k = 0; k < n; ++k) {
        double t = 2.0 * std::numbers::pi * k / n;
        cplx u{std::cos(t), std::sin(t)};
        cplx z = c + r * u;
        acc += (z - c) * eval(dq, z) / eval(q, z) * (r * u);
    }
    acc /= static_cast<double>(n);
    return c + acc / static_cast<double>(net_zero_order);
}

}  // namespace

void divisor::canonicalize() {
    entries_.erase(std::remove_if(entries_.begin(), entries_.end(), [](const divisor_entry& d) { return d.order == 0; }),
                   entries_.end());
    std::sort(entries_.begin(), entries_.end(), [](const divisor_entry& a, const divisor_entry& b) {
        if (std::abs(a.point.real() - b.point.real()) > 1e-9) return a.point.real() < b.point.real();
        return a.point.imag() < b.point.imag();
    });
}

void divisor::accumulate(cplx point, int order, double tol) {
    for (auto& d : entries_) {
        if (close(d.point, point, tol)) {
            d.order += order;
            canonicalize();
            return;
        }
    }
    entries_.push_back({point, order});
    canonicalize();
}

void divisor::merge_max(cplx point, int order, double tol) {
    for (auto& d : entries_) {
        if (close(d.point, point, tol)) {
            if (std::abs(order) > std::abs(d.order)) d.order = order;
            return;
        }
    }
    entries_.push_back({point, order});
    canonicalize();
}

int divisor::order_at(cplx point, double tol) const {
    for (const auto& d : entries_)
        if (close(d.point, point, tol)) return d.order;
    return 0;
}

divisor divisor::poles() const {
    divisor out(region_);
    out.conjectural = conjectural;
    for (const auto& d : entries_)
        if (d.order < 0) out.entries_.push_back(d);
    return out;
}

divisor divisor::zeros() const {
    divisor out(region_);
    out.conjectural = conjectural;
    for (const auto& d : entries_)
        if (d.order > 0) out.entries_.push_back(d);
    return out;
}

divisor divisor::restricted(const window& w, double margin) const {
    divisor out(w);
    out.conjectural = conjectural;
    for (const auto& d : entries_)
        if (w.contains(d.point, margin)) out.entries_.push_back(d);
    return out;
}

bool divisor::conjugation_closed(double tol) const {
    for (const auto& d : entries_) {
        if (order_at(std::conj(d.point), tol) != d.order) return false;
    }
    return true;
}

bool same_multiset(const divisor& a, const divisor& b, double tol) {
    if (a.entries().size() != b.entries().size()) return false;
    for (const auto& d : a.entries())
        if (b.order_at(d.point, tol) != d.order) return false;
    return true;
}

std::vector<cplx> vertical_line(double base, double period, const window& w, double margin) {
    std::vector<cplx> out;
    if (base < w.re_lo - margin || base > w.re_hi + margin) return out;
    if (period <= 0.0) {
        if (w.im_lo - margin <= 0.0 && 0.0 <= w.im_hi + margin) out.emplace_back(base, 0.0);
        return out;
    }
    auto k_lo = static_cast<long long>(std::ceil((w.im_lo - margin) / period));
    auto k_hi = static_cast<long long>(std::floor((w.im_hi + margin) / period));
    for (long long k = k_lo; k <= k_hi; ++k) out.emplace_back(base, static_cast<double>(k) * period);
    return out;
}

std::pair<Expr, Expr> as_fraction(const Expr& e) {
    switch (e.type()) {
    case Expr::kind::constant:
    case Expr::kind::var:
    case Expr::kind::expbase:
        return {e, Expr(1.0)};
    case Expr::kind::div: {
        auto [a, b] = as_fraction(e.args()[0]);
        auto [c, d] = as_fraction(e.args()[1]);
        return {times(a, d), times(b, c)};
    }
    case Expr::kind::mul: {
        Expr num(1.0);
        Expr den(1.0);
        for (const auto& f : e.args()) {
            auto [a, b] = as_fraction(f);
            num = times(num, a);
            den = times(den, b);
        }
        return {num, den};
    }
    case Expr::kind::add: {
        std::vector<std::pair<Expr, Expr>> parts;
        for (const auto& t : e.args()) parts.push_back(as_fraction(t));
        Expr den(1.0);
        for (const auto& p : parts) den = times(den, p.second);
        std::vector<Expr> terms;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            Expr t = parts[i].first;
            for (std::size_t j = 0; j < parts.size(); ++j)
                if (j != i) t = times(t, parts[j].second);
            terms.push_back(t);
        }
        return {Expr::sum(std::move(terms)), den};
    }
    }
    throw bad_parameter("unknown expression node");
}

cplx residue_of(const Expr& e, cplx w) {
    std::vector<Expr> terms;
    std::vector<Expr> stack{e};
    while (!stack.empty()) {
        Expr t = stack.back();
        stack.pop_back();
        if (t.type() == Expr::kind::add) {
            for (const auto& a : t.args()) stack.push_back(a);
        } else {
            terms.push_back(t);
        }
    }
    cplx total{};
    for (const auto& t : terms) {
        auto [n, d] = as_fraction(t);
        if (d.type() == Expr::kind::constant) continue;
        cplx dv = eval(d, w);
        cplx dd = eval(deriv(d), w);
        if (std::abs(dv) > 1e-9 * (std::abs(dd) + 1e-300)) continue;
        total += residue_simple(n, d, w);
    }
    return total;
}

divisor divisor_of(const Expr& e, const window& w, unsigned workers) {
    auto [num, den] = as_fraction(e);
    const double pad = 0.3;
    window big{w.re_lo - pad, w.re_hi + pad, w.im_lo - pad, w.im_hi + pad};

    std::vector<cplx> points;
    auto collect = [&](const Expr& f) {
        if (f.type() == Expr::kind::constant) {
            if (f.value() == cplx{}) throw bad_parameter("divisor of the zero function");
            return;
        }
        root_set rs = find_zeros(f, big, workers);
        for (const auto& r : rs.roots) {
            bool dup = false;
            for (cplx p : points) dup = dup || close(p, r.z, 1e-6);
            if (!dup) points.push_back(r.z);
        }
    };
    collect(num);
    collect(den);

    Expr q = Expr::quotient(num, den);
    Expr dq = deriv(q);
    std::vector<int> order(points.size(), 0);
    std::vector<cplx> center(points);
    parallel_for(points.size(), workers, [&](std::size_t i) {
        if (!w.contains(points[i], 1e-7)) return;
        std::vector<cplx> others;
        for (std::size_t j = 0; j < points.size(); ++j)
            if (j != i) others.push_back(points[j]);
        double r = default_radius(points[i], others);
        order[i] = -pole_order(q, {points[i], r, 256});
        if (order[i] != 0) center[i] = refine_center(q, dq, points[i], r, order[i]);
    });

    divisor out(w);
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (order[i] == 0) continue;
        cplx c = center[i];
        if (std::abs(c.imag()) < 1e-12 * (1.0 + std::abs(c))) c = {c.real(), 0.0};
        out.accumulate(c, order[i]);
    }
    return out;
}

divisor divisor_union(const divisor& a, const divisor& b) {
    const window& wa = a.region();
    const window& wb = b.region();
    divisor out(window{std::min(wa.re_lo, wb.re_lo), std::max(wa.re_hi, wb.re_hi), std::min(wa.im_lo, wb.im_lo),
                       std::max(wa.im_hi, wb.im_hi)});
    out.conjectural = a.conjectural || b.conjectural;
    for (const auto& d : a.entries()) out.accumulate(d.point, d.order);
    for (const auto& d : b.entries()) out.accumulate(d.point, d.order);
    return out;
}

divisor minkowski_sum(const divisor& a, const divisor& b) {
    if (a.poles().empty()) return b.poles();
    if (b.poles().empty()) return a.poles();
    const window& wa = a.region();
    const window& wb = b.region();
    divisor out(window{wa.re_lo + wb.re_lo, wa.re_hi + wb.re_hi, wa.im_lo + wb.im_lo, wa.im_hi + wb.im_hi});
    out.conjectural = a.conjectural || b.conjectural;
    for (const auto& p : a.entries()) {
        if (p.order >= 0) continue;
        for (const auto& q : b.entries()) {
            if (q.order >= 0) continue;
            int m = -p.order;
            int n = -q.order;
            out.merge_max(p.point + q.point, -(m + n - 1));
        }
    }
    return out;
}

product_check_report product_conjecture_check(const divisor& d1, const divisor& d2, const divisor& observed) {
    product_check_report r;
    r.observed = observed.poles();
    r.predicted = minkowski_sum(d1, d2).restricted(observed.region());
    for (const auto& o : r.observed.entries()) {
        int p = r.predicted.order_at(o.point);
        if (p == 0) r.missing.push_back(o);
        else if (p != o.order) r.order_mismatch.push_back(o);
    }
    for (const auto& p : r.predicted.entries())
        if (r.observed.order_at(p.point) == 0) r.extra.push_back(p);
    r.contained = r.missing.empty();
    r.equal = r.contained && r.extra.empty() && r.order_mismatch.empty();
    return r;
}

nlohmann::json to_json(const divisor& d) {
    nlohmann::json j;
    const window& w = d.region();
    j["window"] = {{"re_lo", w.re_lo}, {"re_hi", w.re_hi}, {"im_lo", w.im_lo}, {"im_hi", w.im_hi}};
    j["conjectural"] = d.conjectural;
    j["entries"] = nlohmann::json::array();
    for (const auto& e : d.entries())
        j["entries"].push_back({{"re", e.point.real()}, {"im", e.point.imag()}, {"order", e.order}});
    return j;
}

nlohmann::json to_json(const product_check_report& r) {
    auto list = [](const std::vector<divisor_entry>& v) {
        nlohmann::json a = nlohmann::json::array();
        for (const auto& e : v) a.push_back({{"re", e.point.real()}, {"im", e.point.imag()}, {"order", e.order}});
        return a;
    };
    return {{"predicted", to_json(r.predicted)}, {"observed", to_json(r.observed)}, {"missing", list(r.missing)},
            {"extra", list(r.extra)}, {"order_mismatch", list(r.order_mismatch)}, {"contained", r.contained},
            {"equal", r.equal}};
}

}  // namespace cfd
