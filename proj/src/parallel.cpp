#include "cfd/parallel.hpp"

#include <cstdlib>
#include <string>

namespace cfd {

unsigned default_workers() {
    const char* env = std::getenv("CFD_WORKERS");
    if (!env || !*env) return 1;
    try {
        long v = std::stol(env);
        if (v >= 1 && v <= 256) return static_cast<unsigned>(v);
    } catch (...) {
    }
    return 1;
}

}  // namespace cfd
