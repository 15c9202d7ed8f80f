#include "cfd/strings.hpp"

#include "cfd/errors.hpp"
#include "cfd/moran.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <queue>
#include <sstream>

namespace cfd {

namespace {

constexpr double tie_tol = 1e-12;
constexpr std::uint64_t lapma_table_size = 100000;

bool same_length(double a, double b) { return std::abs(a - b) <= tie_tol * std::max(a, b); }

// Neumaier compensated summation.
template <class T>
struct compensated {
    T sum{};
    T c{};
    void add(T x) {
        T t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            c += (sum - t) + x;
        else
            c += (x - t) + sum;
        sum = t;
    }
    T value() const { return sum + c; }
};

double a_string_length(double a, double j) { return std::pow(j, -a) * -std::expm1(-a * std::log1p(1.0 / j)); }

double lapma_derivative(const lapma_params& p, double x) {
    double t = p.tau * std::log(x);
    return std::pow(x, p.D - 1.0) * (p.D * (1.0 + 2.0 * p.beta * std::cos(t)) - 2.0 * p.beta * p.tau * std::sin(t));
}

void check_lapma(const lapma_params& p) {
    if (!(p.D > 0.0 && p.D < 1.0)) throw bad_parameter("lapma needs 0 < D < 1");
    if (!(p.tau > 0.0)) throw bad_parameter("lapma needs tau > 0");
    if (!(p.beta > 0.0 && p.beta < p.D / (2.0 * (p.D + p.tau))))
        throw bad_parameter("lapma needs 0 < beta < D/(2(D+tau))");
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    unsigned __int128 r = static_cast<unsigned __int128>(a) * b;
    if (r > std::numeric_limits<std::uint64_t>::max()) throw resource_limit("multiplicity overflow");
    return static_cast<std::uint64_t>(r);
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n - k) k = n - k;
    unsigned __int128 r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
        if (r > std::numeric_limits<std::uint64_t>::max()) throw resource_limit("multiplicity overflow");
    }
    return static_cast<std::uint64_t>(r);
}

struct grouped {
    std::vector<double> value;
    std::vector<std::uint64_t> mult;
};

grouped group_values(std::vector<double> v) {
    std::sort(v.begin(), v.end(), std::greater<>());
    grouped g;
    for (double x : v) {
        if (!g.value.empty() && same_length(g.value.back(), x))
            ++g.mult.back();
        else {
            g.value.push_back(x);
            g.mult.push_back(1);
        }
    }
    return g;
}

}  // namespace

struct fractal_string::lapma_table {
    std::vector<double> len;     // len[j-1] = l_j
    std::vector<double> suffix;  // suffix[n] = sum_{j > n} l_j
    double bound = 0.0;
};

double lapma_volume(const lapma_params& p, double x) {
    return std::pow(x, p.D) * (1.0 + 2.0 * p.beta * std::cos(p.tau * std::log(x)));
}

double lapma_invert(const lapma_params& p, double j) {
    double lo = std::pow(j / (1.0 + 2.0 * p.beta), 1.0 / p.D);
    double hi = std::pow(j / (1.0 - 2.0 * p.beta), 1.0 / p.D);
    double x = std::sqrt(lo * hi);
    for (int it = 0; it < 200; ++it) {
        double f = lapma_volume(p, x) - j;
        if (f == 0.0) return x;
        if (f < 0.0)
            lo = x;
        else
            hi = x;
        double step = f / lapma_derivative(p, x);
        double next = x - step;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - x) <= 1e-15 * x || hi - lo <= 1e-15 * x) return next;
        x = next;
    }
    return x;
}

fractal_string fractal_string::explicit_list(std::vector<length_entry> lengths) {
    std::map<double, std::uint64_t, std::greater<>> merged;
    for (const auto& e : lengths) {
        if (!(e.length > 0.0) || !std::isfinite(e.length)) throw bad_parameter("lengths must be positive");
        if (e.mult == 0) throw bad_parameter("multiplicities must be positive");
        merged[e.length] += e.mult;
    }
    if (merged.empty()) throw bad_parameter("empty length list");
    fractal_string f;
    f.kind_ = string_kind::explicit_list;
    compensated<double> total;
    for (const auto& [l, m] : merged) {
        if (!f.explicit_.empty() && same_length(f.explicit_.back().length, l))
            f.explicit_.back().mult += m;
        else
            f.explicit_.push_back({l, m});
        total.add(l * static_cast<double>(m));
    }
    f.total_ = total.value();
    return f;
}

fractal_string fractal_string::cantor() {
    fractal_string f;
    f.kind_ = string_kind::cantor;
    f.a_ = 1.0 / 3.0;
    f.total_ = 1.0;
    return f;
}

fractal_string fractal_string::generalized_cantor(double a) {
    if (!(a > 0.0 && a < 0.5)) throw bad_parameter("generalized_cantor needs 0 < a < 1/2");
    fractal_string f;
    f.kind_ = string_kind::generalized_cantor;
    f.a_ = a;
    f.total_ = 1.0;
    return f;
}

fractal_string fractal_string::a_string(double a) {
    if (!(a > 0.0) || !std::isfinite(a)) throw bad_parameter("a_string needs a > 0");
    fractal_string f;
    f.kind_ = string_kind::a_string;
    f.a_ = a;
    f.total_ = 1.0;
    return f;
}

fractal_string fractal_string::self_similar(std::vector<double> ratios, std::vector<double> gaps) {
    if (ratios.size() < 2) throw bad_parameter("self_similar needs at least two ratios");
    double rs = 0.0;
    for (double r : ratios) {
        if (!(r > 0.0 && r < 1.0)) throw bad_parameter("ratios must lie in (0,1)");
        rs += r;
    }
    if (!(rs < 1.0)) throw bad_parameter("ratios must sum to less than 1");
    if (gaps.empty()) throw bad_parameter("self_similar needs at least one gap");
    double gs = 0.0;
    for (double g : gaps) {
        if (!(g > 0.0) || !std::isfinite(g)) throw bad_parameter("gaps must be positive");
        gs += g;
    }
    fractal_string f;
    f.kind_ = string_kind::self_similar;
    f.ratios_ = std::move(ratios);
    f.gaps_ = std::move(gaps);
    f.total_ = gs / (1.0 - rs);
    return f;
}

fractal_string fractal_string::lapma(double D, double tau, double beta) {
    lapma_params p{D, tau, beta};
    check_lapma(p);
    fractal_string f;
    f.kind_ = string_kind::lapma;
    f.lapma_ = p;
    auto t = std::make_shared<lapma_table>();
    t->len.resize(lapma_table_size);
    for (std::uint64_t j = 1; j <= lapma_table_size; ++j) t->len[j - 1] = 1.0 / lapma_invert(p, static_cast<double>(j));
    t->suffix.assign(lapma_table_size + 1, 0.0);
    f.table_ = t;
    double bound = 0.0;
    double tail = f.lapma_suffix(lapma_table_size, &bound);
    compensated<double> acc;
    acc.add(tail);
    t->suffix[lapma_table_size] = tail;
    for (std::uint64_t n = lapma_table_size; n-- > 0;) {
        acc.add(t->len[n]);
        t->suffix[n] = acc.value();
    }
    t->bound = bound;
    f.total_ = t->suffix[0];
    f.total_bound_ = bound;
    return f;
}

double fractal_string::lapma_length(std::uint64_t j) const {
    if (table_ && j >= 1 && j <= table_->len.size()) return table_->len[j - 1];
    return 1.0 / lapma_invert(lapma_, static_cast<double>(j));
}

// Euler-Maclaurin for sum_{j > n} g(j) with g(t) = 1/x(t), V(x(t)) = t.
// The integral of g over [n, inf) is the integral of x^-1 dV over [X, inf).
double fractal_string::lapma_suffix(std::uint64_t n, double* bound) const {
    const auto& p = lapma_;
    if (table_ && n < table_->suffix.size() && table_->suffix[table_->len.size()] != 0.0) {
        if (bound) *bound = table_->bound;
        return table_->suffix[n];
    }
    if (n < 1000) throw resource_limit("lapma tail needs n >= 1000");
    double X = lapma_invert(p, static_cast<double>(n));
    cplx w{p.D, p.tau};
    double integral = p.D / (1.0 - p.D) * std::pow(X, p.D - 1.0) +
                      2.0 * std::real(p.beta * w * std::pow(cplx{X, 0.0}, w - 1.0) / (1.0 - w));
    double dV = lapma_derivative(p, X);
    double g1 = -1.0 / (X * X * dV);
    double scale = (1.0 + p.tau) / (p.D * static_cast<double>(n));
    if (bound) *bound = std::abs(g1) * scale * scale;
    return integral - 0.5 / X - g1 / 12.0;
}

fractal_string fractal_string::from_json(const nlohmann::json& j) {
    try {
        std::string k = j.at("kind").get<std::string>();
        if (k == "cantor") return cantor();
        if (k == "generalized_cantor") return generalized_cantor(j.at("a").get<double>());
        if (k == "a_string") return a_string(j.at("a").get<double>());
        if (k == "self_similar")
            return self_similar(j.at("ratios").get<std::vector<double>>(), j.at("gaps").get<std::vector<double>>());
        if (k == "lapma")
            return lapma(j.at("D").get<double>(), j.value("tau", 14.134725), j.value("beta", 0.01));
        if (k == "explicit") {
            if (j.contains("csv")) return explicit_list(read_lengths_csv(j.at("csv").get<std::string>()));
            std::vector<length_entry> v;
            for (const auto& e : j.at("lengths")) {
                if (e.is_array())
                    v.push_back({e.at(0).get<double>(), e.size() > 1 ? e.at(1).get<std::uint64_t>() : 1});
                else
                    v.push_back({e.get<double>(), 1});
            }
            return explicit_list(std::move(v));
        }
        throw parse_error("unknown string kind '" + k + "'");
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(e.what());
    }
}

nlohmann::json fractal_string::to_json() const {
    nlohmann::json j;
    j["kind"] = name();
    switch (kind_) {
    case string_kind::explicit_list: {
        auto arr = nlohmann::json::array();
        for (const auto& e : explicit_) arr.push_back({e.length, e.mult});
        j["lengths"] = arr;
        break;
    }
    case string_kind::cantor: break;
    case string_kind::generalized_cantor:
    case string_kind::a_string: j["a"] = a_; break;
    case string_kind::self_similar:
        j["ratios"] = ratios_;
        j["gaps"] = gaps_;
        break;
    case string_kind::lapma:
        j["D"] = lapma_.D;
        j["tau"] = lapma_.tau;
        j["beta"] = lapma_.beta;
        break;
    }
    return j;
}

std::string fractal_string::name() const {
    switch (kind_) {
    case string_kind::explicit_list: return "explicit";
    case string_kind::cantor: return "cantor";
    case string_kind::generalized_cantor: return "generalized_cantor";
    case string_kind::a_string: return "a_string";
    case string_kind::self_similar: return "self_similar";
    case string_kind::lapma: return "lapma";
    }
    return "?";
}

double fractal_string::first_length() const {
    switch (kind_) {
    case string_kind::explicit_list: return explicit_.front().length;
    case string_kind::cantor:
    case string_kind::generalized_cantor: return 1.0 - 2.0 * a_;
    case string_kind::a_string: return a_string_length(a_, 1.0);
    case string_kind::self_similar: return *std::max_element(gaps_.begin(), gaps_.end());
    case string_kind::lapma: return lapma_length(1);
    }
    return 0.0;
}

double fractal_string::dimension() const {
    switch (kind_) {
    case string_kind::explicit_list: return -std::numeric_limits<double>::infinity();
    case string_kind::cantor:
    case string_kind::generalized_cantor: return std::log(2.0) / std::log(1.0 / a_);
    case string_kind::a_string: return 1.0 / (a_ + 1.0);
    case string_kind::self_similar: return real_dimension(dirichlet_polynomial::from_ratios(ratios_));
    case string_kind::lapma: return lapma_.D;
    }
    return 0.0;
}

std::vector<double> fractal_string::scaling_ratios() const {
    switch (kind_) {
    case string_kind::cantor:
    case string_kind::generalized_cantor: return {a_, a_};
    case string_kind::self_similar: return ratios_;
    default: return {};
    }
}

void fractal_string::enumerate(const std::function<bool(const length_entry&)>& visit,
                               const enumeration_policy& policy) const {
    std::size_t emitted = 0;
    auto emit = [&](const length_entry& e) {
        if (e.length < policy.min_length || emitted >= policy.max_items) return false;
        ++emitted;
        return visit(e);
    };
    switch (kind_) {
    case string_kind::explicit_list:
        for (const auto& e : explicit_)
            if (!emit(e)) return;
        return;
    case string_kind::cantor:
    case string_kind::generalized_cantor: {
        double g = 1.0 - 2.0 * a_;
        for (int n = 1; n <= 63; ++n) {
            double l = g * std::pow(a_, n - 1);
            if (!emit({l, std::uint64_t{1} << (n - 1)})) return;
        }
        return;
    }
    case string_kind::a_string:
        for (std::uint64_t j = 1;; ++j)
            if (!emit({a_string_length(a_, static_cast<double>(j)), 1})) return;
    case string_kind::lapma:
        for (std::uint64_t j = 1;; ++j)
            if (!emit({lapma_length(j), 1})) return;
    case string_kind::self_similar: {
        auto rg = dirichlet_polynomial::from_ratios(ratios_).terms();
        auto gg = group_values(gaps_);
        const std::size_t J = rg.size();
        struct item {
            double value;
            std::size_t gap;
            std::vector<std::uint32_t> n;
            bool operator<(const item& o) const { return value < o.value; }
        };
        std::priority_queue<item> heap;
        for (std::size_t k = 0; k < gg.value.size(); ++k) heap.push({gg.value[k], k, std::vector<std::uint32_t>(J, 0)});
        auto mult_of = [&](const item& it) {
            std::uint64_t m = gg.mult[it.gap];
            std::uint64_t total = 0;
            for (std::size_t i = 0; i < J; ++i) {
                total += it.n[i];
                m = checked_mul(m, binomial(total, it.n[i]));
                auto c = static_cast<std::uint64_t>(std::llround(rg[i].coeff));
                for (std::uint32_t q = 0; q < it.n[i]; ++q) m = checked_mul(m, c);
            }
            return m;
        };
        length_entry pending{0.0, 0};
        while (!heap.empty()) {
            item it = heap.top();
            heap.pop();
            if (it.value < policy.min_length) break;
            std::uint64_t m = mult_of(it);
            if (pending.mult > 0 && same_length(pending.length, it.value)) {
                pending.mult += m;
            } else {
                if (pending.mult > 0 && !emit(pending)) return;
                pending = {it.value, m};
            }
            std::size_t last = 0;
            for (std::size_t i = 0; i < J; ++i)
                if (it.n[i] > 0) last = i;
            for (std::size_t i = last; i < J; ++i) {
                item next = it;
                ++next.n[i];
                next.value *= rg[i].ratio;
                if (next.value >= policy.min_length) heap.push(std::move(next));
            }
        }
        if (pending.mult > 0) emit(pending);
        return;
    }
    }
}

std::vector<length_entry> fractal_string::lengths(const enumeration_policy& policy) const {
    std::vector<length_entry> out;
    enumerate(
        [&](const length_entry& e) {
            out.push_back(e);
            return true;
        },
        policy);
    return out;
}

std::uint64_t fractal_string::count_at_least(double threshold) const {
    double thr = threshold * (1.0 - tie_tol);
    switch (kind_) {
    case string_kind::cantor:
    case string_kind::generalized_cantor: {
        double g = 1.0 - 2.0 * a_;
        std::uint64_t count = 0;
        for (int n = 1; g * std::pow(a_, n - 1) >= thr; ++n) {
            if (n > 63) throw resource_limit("threshold too small for 64-bit counts");
            count += std::uint64_t{1} << (n - 1);
        }
        return count;
    }
    case string_kind::a_string: {
        if (a_string_length(a_, 1.0) < thr) return 0;
        double hi_d = std::pow(a_ / thr, 1.0 / (a_ + 1.0)) + 2.0;
        if (hi_d > 9e18) throw resource_limit("threshold too small for 64-bit counts");
        std::uint64_t lo = 1, hi = static_cast<std::uint64_t>(hi_d);
        while (hi - lo > 1) {
            std::uint64_t mid = lo + (hi - lo) / 2;
            if (a_string_length(a_, static_cast<double>(mid)) >= thr)
                lo = mid;
            else
                hi = mid;
        }
        return lo;
    }
    case string_kind::lapma: {
        double x = 1.0 / threshold;
        double v = lapma_volume(lapma_, x);
        if (v > 9e18) throw resource_limit("threshold too small for 64-bit counts");
        auto n = static_cast<std::uint64_t>(std::floor(v));
        // Settle near-integer volumes against the enumerated lengths themselves.
        while (n >= 1 && lapma_length(n) < thr) --n;
        while (lapma_length(n + 1) >= thr) ++n;
        return n;
    }
    default: {
        std::uint64_t count = 0;
        enumeration_policy p;
        p.min_length = thr;
        p.max_items = std::numeric_limits<std::size_t>::max();
        enumerate(
            [&](const length_entry& e) {
                count += e.mult;
                return true;
            },
            p);
        return count;
    }
    }
}

double fractal_string::tail_below(double threshold, double* bound) const {
    if (bound) *bound = 0.0;
    double thr = threshold * (1.0 - tie_tol);
    switch (kind_) {
    case string_kind::cantor:
    case string_kind::generalized_cantor: {
        double g = 1.0 - 2.0 * a_;
        int n0 = 0;
        while (g * std::pow(a_, n0) >= thr) ++n0;
        return g * std::pow(2.0 * a_, n0) / (1.0 - 2.0 * a_);
    }
    case string_kind::a_string: {
        std::uint64_t n = count_at_least(threshold);
        return std::pow(static_cast<double>(n + 1), -a_);
    }
    case string_kind::lapma: {
        std::uint64_t n = count_at_least(threshold);
        return lapma_suffix(n, bound);
    }
    default: {
        compensated<double> head;
        enumeration_policy p;
        p.min_length = thr;
        p.max_items = std::numeric_limits<std::size_t>::max();
        enumerate(
            [&](const length_entry& e) {
                head.add(e.length * static_cast<double>(e.mult));
                return true;
            },
            p);
        if (bound) *bound = 1e-15 * total_;
        return std::max(0.0, total_ - head.value());
    }
    }
}

std::vector<length_entry> read_lengths_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open " + path);
    std::vector<length_entry> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        std::string a, b;
        if (!(ss >> a)) continue;
        ss >> b;
        try {
            std::size_t used = 0;
            double l = std::stod(a, &used);
            if (used != a.size()) throw std::invalid_argument(a);
            std::uint64_t m = b.empty() ? 1 : std::stoull(b);
            out.push_back({l, m});
        } catch (const std::exception&) {
            if (out.empty() && lineno == 1) continue;  // header row
            throw parse_error(path + ":" + std::to_string(lineno) + ": bad row");
        }
    }
    return out;
}

std::uint64_t counting(const fractal_string& str, double x) {
    if (!(x > 0.0)) throw bad_parameter("counting needs x > 0");
    return str.count_at_least(1.0 / x);
}

bounded_value tube_exact_bounded(const fractal_string& str, double eps) {
    if (!(eps > 0.0)) throw bad_parameter("tube_exact needs eps > 0");
    double t = 2.0 * eps;
    if (t >= str.first_length()) return {str.total_length(), 0.0};
    double bound = 0.0;
    double tail = str.tail_below(t, &bound);
    double head = t * static_cast<double>(str.count_at_least(t));
    return {head + tail, bound};
}

double tube_exact(const fractal_string& str, double eps) { return tube_exact_bounded(str, eps).value; }

geometric_zeta_form geometric_zeta(const fractal_string& str) {
    switch (str.kind()) {
    case string_kind::cantor: return {Expr(1.0) / (Expr::power(3, 1) - Expr(2.0))};
    case string_kind::generalized_cantor: {
        double a = str.param_a();
        return {power_of(1.0 - 2.0 * a) / (Expr(1.0) - Expr(2.0) * power_of(a))};
    }
    case string_kind::self_similar: {
        std::vector<Expr> num;
        auto gg = group_values(str.gaps());
        for (std::size_t k = 0; k < gg.value.size(); ++k)
            num.push_back(Expr(static_cast<double>(gg.mult[k])) * power_of(gg.value[k]));
        return {Expr::sum(num) / dirichlet_polynomial::from_ratios(str.ratios()).as_expr()};
    }
    default: return {};
    }
}

partial_zeta zeta_partial(const fractal_string& str, cplx s, const enumeration_policy& policy) {
    const double sigma = s.real();
    if (!str.finite() && !(sigma > str.dimension()))
        throw divergent("Re(s) must exceed the abscissa " + std::to_string(str.dimension()));
    partial_zeta out;
    compensated<cplx> acc;
    compensated<double> acc_sigma;
    std::uint64_t last_index = 0;
    str.enumerate(
        [&](const length_entry& e) {
            double m = static_cast<double>(e.mult);
            acc.add(m * std::exp(s * std::log(e.length)));
            acc_sigma.add(m * std::pow(e.length, sigma));
            last_index += e.mult;
            ++out.terms;
            return true;
        },
        policy);
    out.value = acc.value();
    auto closed = geometric_zeta(str).closed;
    switch (str.kind()) {
    case string_kind::explicit_list: {
        // Truncated explicit lists: bound the omitted lengths by the last one kept.
        double rest = 0.0;
        std::uint64_t seen = 0;
        str.enumerate([&](const length_entry& e) {
            seen += e.mult;
            if (seen > last_index) rest += static_cast<double>(e.mult) * std::pow(e.length, sigma);
            return true;
        });
        out.tail_bound = rest;
        break;
    }
    case string_kind::a_string: {
        double a = str.param_a();
        double q = (a + 1.0) * sigma;
        auto J = static_cast<double>(last_index + 1);
        out.tail_bound = std::pow(a, sigma) * (std::pow(J, -q) + std::pow(J, 1.0 - q) / (q - 1.0));
        break;
    }
    case string_kind::lapma: {
        const auto& p = str.lapma_parameters();
        double r = sigma / p.D;
        auto J = static_cast<double>(last_index + 1);
        out.tail_bound = std::pow(1.0 + 2.0 * p.beta, r) * (std::pow(J, -r) + std::pow(J, 1.0 - r) / (r - 1.0));
        break;
    }
    default: {
        double full = eval(*closed, cplx{sigma, 0.0}).real();
        out.tail_bound = std::max(0.0, full - acc_sigma.value()) + 1e-15 * std::abs(full);
        break;
    }
    }
    return out;
}

cplx rfd_zeta::operator()(cplx s) const {
    if (closed) return eval(*closed, s);
    if (std::abs(s) < pole_guard) throw pole_hit("s = 0");
    return std::exp((1.0 - s) * std::log(2.0)) / s * zeta_partial(source, s).value;
}

rfd_zeta string_rfd_zeta(const fractal_string& str) {
    rfd_zeta z;
    z.source = str;
    auto g = geometric_zeta(str).closed;
    if (g) {
        Expr two_s = Expr::power(2, 1);
        if (g->type() == Expr::kind::div)
            z.closed = Expr(2.0) * g->args()[0] / (two_s * Expr::s() * g->args()[1]);
        else
            z.closed = Expr(2.0) * *g / (two_s * Expr::s());
    }
    return z;
}

cplx rfd_residue(cplx w, cplx res_string) {
    if (std::abs(w) < pole_guard) throw bad_parameter("transfer formula needs w != 0");
    return std::exp((1.0 - w) * std::log(2.0)) / w * res_string;
}

abscissa abscissa_estimate(const fractal_string& str) {
    abscissa out;
    if (str.finite()) {
        out.minus_infinity = true;
        out.lo = out.hi = -std::numeric_limits<double>::infinity();
        return out;
    }
    // Convergence of sum l_j^sigma, decided from the structure of each family.
    std::function<bool(double)> converges;
    switch (str.kind()) {
    case string_kind::cantor:
    case string_kind::generalized_cantor: {
        double a = str.param_a();
        converges = [a](double s) { return 2.0 * std::pow(a, s) < 1.0; };
        break;
    }
    case string_kind::self_similar: {
        auto p = dirichlet_polynomial::from_ratios(str.ratios());
        converges = [p](double s) { return p.scaling_sum(s) < 1.0; };
        break;
    }
    case string_kind::a_string: {
        double a = str.param_a();
        // a (j+1)^(-a-1) <= l_j <= a j^(-a-1)
        converges = [a](double s) { return (a + 1.0) * s > 1.0; };
        break;
    }
    case string_kind::lapma: {
        double D = str.lapma_parameters().D;
        // ((1-2b)/j)^(1/D) <= l_j <= ((1+2b)/j)^(1/D)
        converges = [D](double s) { return s / D > 1.0; };
        break;
    }
    default: break;
    }
    double lo = 0.0, hi = 1.0;
    while (hi - lo > 1e-8) {
        double mid = 0.5 * (lo + hi);
        if (converges(mid))
            hi = mid;
        else
            lo = mid;
    }
    out.lo = lo;
    out.hi = hi;
    return out;
}

}  // namespace cfd
