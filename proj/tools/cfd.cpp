#include "cfd/acceptance.hpp"
#include "cfd/catalog.hpp"
#include "cfd/divisor.hpp"
#include "cfd/errors.hpp"
#include "cfd/expr_json.hpp"
#include "cfd/measure.hpp"
#include "cfd/parallel.hpp"
#include "cfd/spectral.hpp"
#include "cfd/spray.hpp"
#include "cfd/strings.hpp"
#include "cfd/tube.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace cfd;
using nlohmann::json;

namespace {

struct run_spec {
    std::string command;
    std::string target;
    int N = 0;
    double delta = 0.0;
    std::vector<double> window;
    double eps_lo = 1e-4;
    double eps_hi = 0.1;
    int eps_n = 50;
    std::vector<double> eps;
    int K = 200;
    std::string raster = "gasket";
    int cells = 2048;
    int depth = 0;
    double margin = 0.1;
    double s_re = 2.0;
    double s_im = 0.0;
    double x_lo = 1e3;
    double x_hi = 1e6;
    int x_n = 40;
    bool demo = false;
    std::string second;
    std::string observed;
    std::vector<int> criteria;
    std::string output;
    std::string out_dir = "report";
    std::string format = "csv";
    unsigned workers = 0;
    std::vector<std::string> argv;

    json to_json() const {
        return {{"command", command}, {"target", target},   {"N", N},           {"delta", delta},
                {"window", window},   {"eps_lo", eps_lo},   {"eps_hi", eps_hi}, {"eps_n", eps_n},
                {"eps", eps},         {"K", K},             {"raster", raster}, {"cells", cells},
                {"depth", depth},     {"margin", margin},   {"s", {s_re, s_im}}, {"x_lo", x_lo},
                {"x_hi", x_hi},       {"x_n", x_n},         {"demo", demo},     {"second", second},
                {"observed", observed}, {"criteria", criteria}, {"output", output}, {"out_dir", out_dir},
                {"format", format},   {"argv", argv}};
    }
};

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

class sink {
public:
    explicit sink(const std::string& path) {
        if (!path.empty() && path != "-") {
            file_.open(path);
            if (!file_) throw bad_parameter("cannot write " + path);
        }
    }
    std::ostream& out() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

struct target {
    std::string label;
    std::optional<catalog_entry> entry;
    std::optional<fractal_string> str;
    std::optional<self_similar_spray> spray;
};

std::vector<double> split_numbers(const std::string& s) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ':')) {
        try {
            v.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw bad_parameter("bad number '" + item + "' in target");
        }
    }
    return v;
}

// Catalog names, string:<kind>[:params], or a JSON file holding a string or spray spec.
target resolve(const std::string& name, const run_spec& rs) {
    target t;
    t.label = name;
    if (name.empty()) throw bad_parameter("a target is required");
    if (std::filesystem::exists(name)) {
        std::ifstream in(name);
        json j;
        try {
            j = json::parse(in);
        } catch (const json::exception& e) {
            throw parse_error(name + ": " + e.what());
        }
        if (j.contains("kind"))
            t.str = fractal_string::from_json(j);
        else if (j.contains("ratios") && j.contains("generators"))
            t.spray = spray_from_json(j);
        else
            throw parse_error(name + " is neither a string nor a spray spec");
        return t;
    }
    if (name.rfind("string:", 0) == 0) {
        std::string rest = name.substr(7);
        std::string kind = rest.substr(0, rest.find(':'));
        std::vector<double> p = rest.find(':') == std::string::npos ? std::vector<double>{}
                                                                    : split_numbers(rest.substr(rest.find(':') + 1));
        auto arg = [&](std::size_t i, double fallback) { return i < p.size() ? p[i] : fallback; };
        if (kind == "cantor")
            t.str = fractal_string::cantor();
        else if (kind == "a_string")
            t.str = fractal_string::a_string(arg(0, 1.0));
        else if (kind == "generalized_cantor")
            t.str = fractal_string::generalized_cantor(arg(0, 0.25));
        else if (kind == "lapma")
            t.str = fractal_string::lapma(arg(0, 0.5), arg(1, 14.134725), arg(2, 0.01));
        else
            throw bad_parameter("unknown string kind '" + kind + "'");
        return t;
    }
    t.entry = catalog_get(name, {rs.N, rs.delta});
    return t;
}

Expr zeta_of(const target& t) {
    if (t.entry) {
        if (!t.entry->zeta) throw unsupported_params(t.label + " has no closed-form zeta function");
        return *t.entry->zeta;
    }
    if (t.spray) return spray_zeta(*t.spray);
    auto g = geometric_zeta(*t.str);
    if (!g.closed) throw unsupported_params(t.label + " has no closed-form geometric zeta function");
    return *g.closed;
}

window window_for(const target& t, const run_spec& rs) {
    if (!rs.window.empty()) {
        if (rs.window.size() != 4) throw bad_parameter("--window takes re_lo re_hi im_lo im_hi");
        return {rs.window[0], rs.window[1], rs.window[2], rs.window[3]};
    }
    if (t.entry) return t.entry->default_window();
    if (t.spray) return {-1.0, static_cast<double>(t.spray->N) + 0.5, -20.0, 20.0};
    return {-1.0, 1.5, -20.0, 20.0};
}

divisor divisor_for(const target& t, const run_spec& rs) {
    window w = window_for(t, rs);
    if (t.entry) return t.entry->divisor_in(w, rs.workers);
    return divisor_of(zeta_of(t), w, rs.workers);
}

std::vector<double> eps_grid(const run_spec& rs) {
    if (!rs.eps.empty()) return rs.eps;
    return log_grid(rs.eps_lo, rs.eps_hi, rs.eps_n);
}

tube_series series_of(const target& t, const run_spec& rs) {
    if (t.entry) return series_for(*t.entry, rs.K, rs.workers);
    if (t.str) return series_for(*t.str, rs.K, rs.workers);
    throw unsupported_params("tube series need a catalog entry or a fractal string");
}

int cmd_catalog(const run_spec& rs) {
    sink s(rs.output);
    if (rs.target.empty()) {
        s.out() << "name,N,D,period,kind\n";
        for (const auto& name : catalog_names()) {
            catalog_entry e = catalog_get(name);
            s.out() << name << "," << e.N << "," << num(e.D) << "," << num(e.period) << "," << to_string(e.kind)
                    << "\n";
        }
        return 0;
    }
    s.out() << to_json(catalog_get(rs.target, {rs.N, rs.delta})).dump(2) << "\n";
    return 0;
}

int cmd_zeta(const run_spec& rs) {
    sink s(rs.output);
    cplx z(rs.s_re, rs.s_im);
    json j{{"s", {z.real(), z.imag()}}};
    if (rs.target.empty() || rs.target == "riemann") {
        zeta_evaluator ev;
        cplx v = ev(z);
        j["target"] = "riemann";
        j["value"] = {v.real(), v.imag()};
        j["self_check"] = ev.self_check(z);
    } else {
        target t = resolve(rs.target, rs);
        cplx v = eval(zeta_of(t), z);
        j["target"] = rs.target;
        j["value"] = {v.real(), v.imag()};
    }
    s.out() << j.dump(2) << "\n";
    return 0;
}

int cmd_dims(const run_spec& rs) {
    divisor d = divisor_for(resolve(rs.target, rs), rs);
    sink s(rs.output);
    s.out() << to_json(d).dump(2) << "\n";
    return 0;
}

int cmd_tube_predict(const run_spec& rs) {
    target t = resolve(rs.target, rs);
    tube_series series = series_of(t, rs);
    sink s(rs.output);
    if (rs.format == "json") {
        s.out() << to_json(series).dump(2) << "\n";
        return 0;
    }
    s.out() << "epsilon,V_formula,tail_bound\n";
    for (double e : eps_grid(rs)) {
        series_value v = eval_series(series, e);
        s.out() << num(e) << "," << num(v.value) << "," << num(v.tail_bound) << "\n";
    }
    return 0;
}

raster_spec raster_of(const run_spec& rs) {
    return {raster_kind_from(rs.raster), rs.depth, rs.cells, rs.margin};
}

int cmd_tube_measure(const run_spec& rs) {
    empirical_tube t = tube_volume(raster_of(rs), eps_grid(rs), rs.workers);
    sink s(rs.output);
    if (rs.format == "json") {
        json j{{"source", t.source},        {"cells_fine", t.cells_fine}, {"cells_coarse", t.cells_coarse},
               {"depth", t.depth},          {"eps", t.eps},               {"volume", t.volume},
               {"err", t.err},              {"ceiling", t.ceiling}};
        try {
            dim_estimate d = dim_fit(t, 2);
            j["dimension"] = {{"D", d.D}, {"band", d.band}, {"points", d.points}};
        } catch (const insufficient_range&) {
        }
        s.out() << j.dump(2) << "\n";
        return 0;
    }
    s.out() << "epsilon,V,err\n";
    for (std::size_t k = 0; k < t.eps.size(); ++k)
        s.out() << num(t.eps[k]) << "," << num(t.volume[k]) << "," << num(t.err[k]) << "\n";
    return 0;
}

int cmd_tube_compare(const run_spec& rs) {
    target t = resolve(rs.target, rs);
    tube_series series = series_of(t, rs);
    std::vector<double> eps = eps_grid(rs);
    std::vector<double> reference;
    std::string source;

    if (t.str) {
        for (double e : eps) reference.push_back(tube_exact(*t.str, e));
        source = "exact";
    } else {
        const catalog_entry& e = *t.entry;
        std::optional<raster_kind> kind;
        if (e.name == "cantor_string") {
            auto cs = fractal_string::cantor();
            for (double x : eps) reference.push_back(tube_exact(cs, x));
            source = "exact";
        } else if (e.name == "gasket") {
            kind = raster_kind::gasket;
        } else if (e.name == "carpet") {
            kind = raster_kind::carpet;
        } else if (e.name == "cantor_graph") {
            kind = raster_kind::cantor_graph_rfd;
        } else if (e.name == "sphere_rfd" && e.N == 2) {
            kind = raster_kind::disk_rfd;
        } else if (e.name == "sphere" || e.name == "unit_interval") {
            const double theta = std::pow(std::numbers::pi, e.N / 2.0) / std::tgamma(e.N / 2.0 + 1.0);
            for (double x : eps) reference.push_back(theta * (std::pow(1.0 + x, e.N) - std::pow(1.0 - x, e.N)));
            if (e.name == "unit_interval")
                for (std::size_t k = 0; k < eps.size(); ++k) reference[k] = 1.0 + 2.0 * eps[k];
            source = "exact";
        } else {
            throw unsupported_params("no reference tube for " + e.name);
        }
        if (kind) {
            raster_spec spec = raster_of(rs);
            spec.kind = *kind;
            double top = *std::max_element(eps.begin(), eps.end());
            spec.margin = std::max(spec.margin, top);
            empirical_tube m = tube_volume(spec, eps, rs.workers);
            reference = m.volume;
            source = "raster";
        }
    }

    sink s(rs.output);
    s.out() << "epsilon,V_formula,V_reference,rel_err\n";
    double worst = 0.0;
    for (std::size_t k = 0; k < eps.size(); ++k) {
        double v = eval_series(series, eps[k]).value;
        double r = std::abs(v - reference[k]) / std::abs(reference[k]);
        worst = std::max(worst, r);
        s.out() << num(eps[k]) << "," << num(v) << "," << num(reference[k]) << "," << num(r) << "\n";
    }
    std::cerr << "reference " << source << ", max relative error " << num(worst) << "\n";
    return 0;
}

int cmd_classify(const run_spec& rs) {
    target t = resolve(rs.target, rs);
    verdict v = t.entry ? classify(*t.entry, rs.workers) : classify(*t.str, rs.workers);
    sink s(rs.output);
    s.out() << to_json(v).dump(2) << "\n";
    return 0;
}

int cmd_spectral(const run_spec& rs) {
    sink s(rs.output);
    if (rs.demo) {
        suppression_demo d = lapma_suppression(0.5, 0.01, 14.134725141734693, 10.0, rs.x_lo, rs.x_hi, rs.x_n,
                                               rs.workers);
        json j{{"tau_zero", d.tau_zero},           {"tau_other", d.tau_other},
               {"amplitude_zero", d.amplitude_zero}, {"amplitude_other", d.amplitude_other},
               {"zeta_at_zero", d.zeta_at_zero},   {"zeta_at_other", d.zeta_at_other}};
        s.out() << j.dump(2) << "\n";
        return 0;
    }
    target t = resolve(rs.target, rs);
    if (!t.str) throw unsupported_params("spectral counting needs a fractal string target");
    std::vector<double> xs = log_grid(rs.x_lo, rs.x_hi, rs.x_n);
    second_term_report rep = second_term_check(*t.str, xs, rs.workers);
    s.out() << "x,N_nu,W,ratio\n";
    for (const auto& r : rep.rows)
        s.out() << num(r.x) << "," << r.N_nu << "," << num(r.W) << "," << num(r.ratio) << "\n";
    std::cerr << "D " << num(rep.D);
    if (rep.target) std::cerr << ", target " << num(*rep.target);
    std::cerr << ", converged " << (rep.converged ? "yes" : "no") << ", spread " << num(rep.amplitude) << "\n";
    return 0;
}

int cmd_divisor_sum(const run_spec& rs) {
    target a = resolve(rs.target, rs);
    target b = resolve(rs.second, rs);
    divisor da = divisor_for(a, rs).poles();
    divisor db = divisor_for(b, rs).poles();
    sink s(rs.output);
    if (rs.observed.empty()) {
        s.out() << to_json(minkowski_sum(da, db)).dump(2) << "\n";
        return 0;
    }
    target o = resolve(rs.observed, rs);
    divisor dobs = divisor_for(o, rs);
    s.out() << to_json(product_conjecture_check(da, db, dobs)).dump(2) << "\n";
    return 0;
}

int cmd_report(const run_spec& rs) {
    std::vector<int> ids = rs.criteria.empty() ? criterion_ids() : rs.criteria;
    std::filesystem::create_directories(rs.out_dir);
    json all = json::array();
    std::ofstream csv(std::filesystem::path(rs.out_dir) / "report.csv");
    csv << "id,title,passed,seconds,detail\n";
    int failed = 0;
    for (int id : ids) {
        criterion_result r = run_criterion(id, rs.workers);
        if (!r.passed) ++failed;
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.id << " " << r.title << " (" << r.detail << ")\n";
        std::string detail = r.detail;
        for (auto& c : detail)
            if (c == '"') c = '\'';
        csv << r.id << ",\"" << r.title << "\"," << (r.passed ? "true" : "false") << "," << num(r.seconds) << ",\""
            << detail << "\"\n";
        all.push_back(to_json(r));
    }
    json j{{"run_spec", rs.to_json()}, {"criteria", all}, {"failed", failed}};
    std::ofstream(std::filesystem::path(rs.out_dir) / "report.json") << j.dump(2) << "\n";
    if (failed > 0) {
        std::cout << "failed criteria:";
        for (const auto& r : all)
            if (!r["passed"].get<bool>()) std::cout << " " << r["id"].get<int>();
        std::cout << "\n";
    }
    return failed == 0 ? 0 : 1;
}

int dispatch(const run_spec& rs) {
    const std::string& c = rs.command;
    if (c == "catalog") return cmd_catalog(rs);
    if (c == "zeta") return cmd_zeta(rs);
    if (c == "dims") return cmd_dims(rs);
    if (c == "tube-predict") return cmd_tube_predict(rs);
    if (c == "tube-measure") return cmd_tube_measure(rs);
    if (c == "tube-compare") return cmd_tube_compare(rs);
    if (c == "classify") return cmd_classify(rs);
    if (c == "spectral") return cmd_spectral(rs);
    if (c == "divisor-sum") return cmd_divisor_sum(rs);
    if (c == "report") return cmd_report(rs);
    throw bad_parameter("unknown command " + c);
}

void add_common(CLI::App* sub, run_spec& rs) {
    sub->add_option("-o,--output", rs.output, "output file (default stdout)");
    sub->add_option("--N", rs.N, "dimension parameter for catalog entries");
    sub->add_option("--delta", rs.delta, "delta parameter for catalog entries");
}

void add_eps(CLI::App* sub, run_spec& rs) {
    sub->add_option("--eps-lo", rs.eps_lo, "smallest epsilon");
    sub->add_option("--eps-hi", rs.eps_hi, "largest epsilon");
    sub->add_option("--eps-n", rs.eps_n, "number of log-spaced epsilons");
    sub->add_option("--eps", rs.eps, "explicit epsilon values");
}

void add_raster(CLI::App* sub, run_spec& rs) {
    sub->add_option("--cells", rs.cells, "cells along each side of the fine grid");
    sub->add_option("--depth", rs.depth, "prefractal depth (0 picks one from the grid)");
    sub->add_option("--margin", rs.margin, "room around the set");
}

int parse_and_run(int argc, const char* const* argv) {
    CLI::App app{"Complex fractal dimensions: zetas, divisors, tube formulas and measurements"};
    app.require_subcommand(1);
    run_spec rs;
    std::string spec_in, spec_out;
    int workers = -1;
    app.add_option("--workers", workers, "worker threads (default CFD_WORKERS or 1)");
    app.add_option("--spec-out", spec_out, "write the run spec as JSON");
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (a.rfind("--spec-out", 0) == 0) {
            if (a == "--spec-out") ++i;
            continue;
        }
        rs.argv.push_back(a);
    }

    auto* catalog = app.add_subcommand("catalog", "list catalog entries or print one as JSON");
    catalog->add_option("target", rs.target, "catalog name");
    add_common(catalog, rs);

    auto* zeta = app.add_subcommand("zeta", "evaluate the Riemann zeta function or a target's zeta");
    zeta->add_option("target", rs.target, "catalog name, string:<kind>, JSON spec, or riemann");
    zeta->add_option("--re", rs.s_re, "real part of s");
    zeta->add_option("--im", rs.s_im, "imaginary part of s");
    add_common(zeta, rs);

    auto* dims = app.add_subcommand("dims", "divisor of a target's zeta function in a window");
    dims->add_option("target", rs.target)->required();
    dims->add_option("--window", rs.window, "re_lo re_hi im_lo im_hi")->expected(4);
    add_common(dims, rs);

    auto* predict = app.add_subcommand("tube-predict", "evaluate the fractal tube formula");
    predict->add_option("target", rs.target)->required();
    predict->add_option("-K", rs.K, "conjugate pairs per line");
    predict->add_option("--format", rs.format)->check(CLI::IsMember({"csv", "json"}));
    add_eps(predict, rs);
    add_common(predict, rs);

    auto* measure = app.add_subcommand("tube-measure", "raster tube volumes with Richardson error estimates");
    measure->add_option("raster", rs.raster, "gasket, carpet, cantor_graph_rfd, square_boundary, disk_rfd")
        ->required();
    measure->add_option("--format", rs.format)->check(CLI::IsMember({"csv", "json"}));
    add_eps(measure, rs);
    add_raster(measure, rs);
    add_common(measure, rs);

    auto* compare = app.add_subcommand("tube-compare", "tube formula against an exact or raster reference");
    compare->add_option("target", rs.target)->required();
    compare->add_option("-K", rs.K, "conjugate pairs per line");
    add_eps(compare, rs);
    add_raster(compare, rs);
    add_common(compare, rs);

    auto* cls = app.add_subcommand("classify", "Minkowski measurability and fractality verdict");
    cls->add_option("target", rs.target)->required();
    add_common(cls, rs);

    auto* spectral = app.add_subcommand("spectral", "frequency counting and the second-term ratio");
    spectral->add_option("target", rs.target, "fractal string target");
    spectral->add_option("--x-lo", rs.x_lo);
    spectral->add_option("--x-hi", rs.x_hi);
    spectral->add_option("--x-n", rs.x_n);
    spectral->add_flag("--demo", rs.demo, "lapma suppression demo at the first zeta zero");
    add_common(spectral, rs);

    auto* dsum = app.add_subcommand("divisor-sum", "Minkowski sum of two pole divisors");
    dsum->add_option("target", rs.target)->required();
    dsum->add_option("second", rs.second)->required();
    dsum->add_option("--observed", rs.observed, "target whose poles are compared with the sum");
    dsum->add_option("--window", rs.window, "re_lo re_hi im_lo im_hi")->expected(4);
    add_common(dsum, rs);

    auto* report = app.add_subcommand("report", "run the acceptance criteria and write a report bundle");
    report->add_option("--criteria", rs.criteria, "criterion ids (default all)");
    report->add_option("--out", rs.out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    rs.command = app.get_subcommands().front()->get_name();
    rs.workers = workers > 0 ? static_cast<unsigned>(workers) : default_workers();
    if (!spec_out.empty()) std::ofstream(spec_out) << rs.to_json().dump(2) << "\n";
    return dispatch(rs);
}

}  // namespace

int main(int argc, char** argv) {
    try {
        // cfd --spec run.json replays the arguments stored in a run spec.
        if (argc == 3 && std::string(argv[1]) == "--spec") {
            std::ifstream in(argv[2]);
            if (!in) throw bad_parameter(std::string("cannot read ") + argv[2]);
            json j = json::parse(in);
            std::vector<std::string> args{"cfd"};
            for (const auto& a : j.at("argv")) args.push_back(a.get<std::string>());
            std::vector<const char*> ptrs;
            for (const auto& a : args) ptrs.push_back(a.c_str());
            return parse_and_run(static_cast<int>(ptrs.size()), ptrs.data());
        }
        return parse_and_run(argc, argv);
    } catch (const bad_parameter& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const unsupported_params& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
