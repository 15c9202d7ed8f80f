#pragma once

#include "cfd/divisor.hpp"
#include "cfd/expr.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cfd {

enum class zeta_kind { distance, tube, relative_distance, geometric };

struct residue_row {
    cplx point;
    cplx value;
    std::string label;
    // The printed value disagrees with the closed form; corrected holds the value it implies.
    bool erratum = false;
    std::optional<cplx> corrected;
};

struct laurent_row {
    cplx point;
    int power = -1;
    cplx value;
    std::string label;
};

struct catalog_params {
    int N = 0;
    double delta = 0.0;
};

struct catalog_entry {
    std::string name;
    int N = 2;
    double D = 0.0;
    double period = 0.0;
    zeta_kind kind = zeta_kind::distance;
    double delta = 0.0;

    std::optional<Expr> zeta;
    std::optional<Expr> num;
    std::optional<Expr> den;

    // Pole families for entries without a closed form: a real point, or the
    // vertical line base + i period Z when periodic.
    struct pole_family {
        double base = 0.0;
        bool periodic = false;
        int order = 1;
    };
    std::vector<pole_family> families;

    std::vector<residue_row> residues;
    std::vector<laurent_row> laurent;
    std::optional<double> content;

    double validity = 0.0;
    bool validity_guessed = false;
    bool conjectural = false;
    std::string notes;

    window default_window() const;
    divisor divisor_in(const window& w, unsigned workers = 1) const;
};

std::vector<std::string> catalog_names();
catalog_entry catalog_get(const std::string& name, const catalog_params& params = {});

std::string to_string(zeta_kind k);
nlohmann::json to_json(const catalog_entry& e);

}  // namespace cfd
