#pragma once

#include "json.hpp"

#include <string>
#include <vector>

namespace cfd {

struct criterion_result {
    int id = 0;
    std::string title;
    bool passed = false;
    double seconds = 0.0;
    std::string detail;
    nlohmann::json data;
};

std::vector<int> criterion_ids();
std::string criterion_title(int id);

// Runs one numbered acceptance criterion. Failures are reported, not thrown;
// an unknown id throws bad_parameter.
criterion_result run_criterion(int id, unsigned workers = 1);

nlohmann::json to_json(const criterion_result& r);

}  // namespace cfd
