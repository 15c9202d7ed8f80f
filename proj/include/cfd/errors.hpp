#pragma once

#include <stdexcept>
#include <string>

namespace cfd {

class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define CFD_ERROR(name)                                                   \
    class name : public error {                                           \
    public:                                                               \
        explicit name(const std::string& what) : error(#name ": " + what) {} \
    };

CFD_ERROR(pole_hit)
CFD_ERROR(not_a_zero)
CFD_ERROR(higher_order)
CFD_ERROR(non_integer_winding)
CFD_ERROR(bad_parameter)
CFD_ERROR(divergent)
CFD_ERROR(no_real_root)
CFD_ERROR(count_mismatch)
CFD_ERROR(ambiguous)
CFD_ERROR(not_lattice)
CFD_ERROR(unsupported_params)
CFD_ERROR(not_a_pole)
CFD_ERROR(out_of_validity)
CFD_ERROR(insufficient_window)
CFD_ERROR(epsilon_too_small)
CFD_ERROR(insufficient_range)
CFD_ERROR(resource_limit)
CFD_ERROR(not_converged)
CFD_ERROR(parse_error)

#undef CFD_ERROR

}  // namespace cfd
