#include "cfd/expr_json.hpp"

#include "cfd/errors.hpp"

#include <cstdio>
#include <stdexcept>

namespace cfd {

std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

nlohmann::json complex_json(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

cplx complex_from_json(const nlohmann::json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2) throw parse_error("complex number must be [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

nlohmann::json to_json(const Expr& e) {
    using nlohmann::json;
    switch (e.type()) {
    case Expr::kind::constant:
        return json{{"const", complex_json(e.value())}};
    case Expr::kind::var:
        return json{{"var", nullptr}};
    case Expr::kind::add:
    case Expr::kind::mul:
    case Expr::kind::div: {
        json arr = json::array();
        for (const auto& a : e.args()) arr.push_back(to_json(a));
        const char* tag = e.type() == Expr::kind::add ? "add" : e.type() == Expr::kind::mul ? "mul" : "div";
        return json{{tag, arr}};
    }
    case Expr::kind::expbase: {
        const auto& b = e.base();
        std::string text = b.rational() ? std::to_string(b.num) + "/" + std::to_string(b.den)
                                        : format_real(b.value);
        return json{{"expbase", text}};
    }
    }
    return {};
}

namespace {

Expr parse_base(const std::string& text) {
    auto slash = text.find('/');
    try {
        if (slash != std::string::npos) {
            long long p = std::stoll(text.substr(0, slash));
            long long q = std::stoll(text.substr(slash + 1));
            return Expr::power(p, q);
        }
        return Expr::power(std::stod(text));
    } catch (const std::invalid_argument&) {
        throw parse_error("bad base '" + text + "'");
    } catch (const std::out_of_range&) {
        throw parse_error("bad base '" + text + "'");
    }
}

}  // namespace

Expr expr_from_json(const nlohmann::json& j) {
    if (!j.is_object() || j.size() != 1) throw parse_error("expression node must be a one-key object");
    const std::string tag = j.begin().key();
    const nlohmann::json& body = j.begin().value();
    if (tag == "const") return Expr(complex_from_json(body));
    if (tag == "var") return Expr::s();
    if (tag == "expbase") {
        if (body.is_string()) return parse_base(body.get<std::string>());
        if (body.is_number()) return Expr::power(body.get<double>());
        throw parse_error("expbase needs a string or number");
    }
    if (!body.is_array()) throw parse_error("'" + tag + "' needs an array of children");
    std::vector<Expr> kids;
    for (const auto& c : body) kids.push_back(expr_from_json(c));
    if (tag == "add") return Expr::sum(std::move(kids));
    if (tag == "mul") return Expr::product(std::move(kids));
    if (tag == "div") {
        if (kids.size() != 2) throw parse_error("div needs exactly two children");
        return Expr::quotient(kids[0], kids[1]);
    }
    throw parse_error("unknown node tag '" + tag + "'");
}

}  // namespace cfd
