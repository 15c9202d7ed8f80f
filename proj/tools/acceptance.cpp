#include "cfd/acceptance.hpp"
#include "cfd/parallel.hpp"

#include <cstdio>
#include <cstdlib>
#include <string>

int main(int argc, char** argv) {
    unsigned workers = cfd::default_workers();
    std::vector<int> ids;
    for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
    if (ids.empty()) ids = cfd::criterion_ids();

    int failed = 0;
    for (int id : ids) {
        cfd::criterion_result r = cfd::run_criterion(id, workers);
        if (!r.passed) ++failed;
        std::printf("%s %2d %s (%.2f s) %s\n", r.passed ? "PASS" : "FAIL", r.id, r.title.c_str(), r.seconds,
                    r.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(ids.size()) - failed, ids.size());
    return failed == 0 ? 0 : 1;
}
