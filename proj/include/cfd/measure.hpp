#pragma once

#include "cfd/expr.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace cfd {

enum class raster_kind { gasket, carpet, cantor_graph_rfd, square_boundary, disk_rfd };

std::string to_string(raster_kind k);
raster_kind raster_kind_from(const std::string& name);

struct raster_spec {
    raster_kind kind = raster_kind::gasket;
    int depth = 0;
    // Cells along each side of the square grid.
    int cells = 1024;
    // Extra room around the bounding box; only matters for sets, not RFDs.
    double margin = 0.0;
};

struct raster_set {
    raster_kind kind = raster_kind::gasket;
    int depth = 0;
    int n = 0;
    double x0 = 0.0;
    double y0 = 0.0;
    double h = 0.0;
    std::vector<std::uint8_t> set;
    std::vector<std::uint8_t> omega;

    bool relative() const { return !omega.empty(); }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * static_cast<std::size_t>(n) + i; }
    double cell_area() const { return h * h; }
    double occupied_area() const;
    double omega_area() const;
};

raster_set rasterize(const raster_spec& spec, unsigned workers = 1);

// Squared distance, in cell units, from each cell center to the nearest
// occupied cell center.
std::vector<float> squared_distance(const raster_set& r, unsigned workers = 1);

// Volume of {d(x, A) <= eps} (intersected with omega for RFDs). A cell whose
// center lies d cells from the nearest occupied center counts with weight
// clamp(eps/h + 1 - d, 0, 1), i.e. threshold eps + h/2 smoothed over one cell.
std::vector<double> raw_tube(const raster_set& r, const std::vector<float>& dist2, const std::vector<double>& eps);

int default_depth(raster_kind k, int cells);
double cantor_function(double x);

struct empirical_tube {
    std::vector<double> eps;
    std::vector<double> volume;
    std::vector<double> err;
    std::string source;
    int cells_fine = 0;
    int cells_coarse = 0;
    int depth = 0;
    int richardson_order = 0;
    double ceiling = 0.0;
};

// Richardson extrapolation of order one across the grids cells/2 and cells.
// The error is |V_fine - V_coarse| plus half a fine cell times |V'(eps)|.
empirical_tube tube_volume(const raster_spec& spec, const std::vector<double>& eps, unsigned workers = 1);
empirical_tube tube_from_function(const std::function<double(double)>& V, const std::vector<double>& eps,
                                  double ceiling, std::string source);

// Increases the depth from default_depth(cells / 2) until depth d and d + 1 agree at
// eps_min within the raster error.
int choose_depth(raster_spec spec, double eps_min, unsigned workers = 1);

std::vector<double> log_grid(double lo, double hi, int n);

// Throws if V decreases beyond the attached errors or exceeds the ceiling.
void check_tube(const empirical_tube& t);

struct dim_estimate {
    double D = 0.0;
    double band = 0.0;
    int points = 0;
};

dim_estimate dim_fit(const empirical_tube& t, int N);

struct content_bounds {
    double lower = 0.0;
    double upper = 0.0;
};

// Extremes of V(eps) / eps^(N-D) over the smallest 1.5 decades of the samples.
content_bounds contents(const empirical_tube& t, double D, int N);
// Extremes over one multiplicative period [eps_lo, ratio * eps_lo], refined by
// golden section; without a ratio, over [eps_lo, eps_hi].
content_bounds contents(const std::function<double(double)>& V, double D, int N, double eps_lo, double eps_hi,
                        double ratio = 0.0);

// Tube zeta int_0^delta V(eps) eps^(s-N-1) d eps with delta the largest sample,
// by the trapezoid rule in log eps. Below the smallest sample V continues as
// a eps^(N-D), with a the mean of V / eps^(N-D) over [eps_0, ratio * eps_0].
// Needs Re s > D.
cplx tube_zeta_measured(const empirical_tube& t, int N, double D, cplx s, double ratio = 2.0);

struct average_result {
    double value = 0.0;
    double previous = 0.0;
};

// Logarithmic Cesaro average of V(t) / t^(N-D), taken as a Hann-weighted mean
// over the last window of log(1/t); the window one decade earlier must agree
// within tol.
average_result average_content(const std::function<double(double)>& V, double D, int N, double t_min,
                               double tol = 1e-2, double window_decades = 3.0);

struct oscillation {
    double amplitude = 0.0;
    double semi_amplitude = 0.0;
    // Multiplicative period in log(1/eps); zero when none was found.
    double period = 0.0;
    double mean = 0.0;
};

// Profile values on a uniform grid in u = log(1/eps) (or log x).
oscillation oscillation_detect(const std::vector<double>& u, const std::vector<double>& profile);
oscillation oscillation_detect(const std::function<double(double)>& V, double D, int N, double eps_lo, double eps_hi,
                               int samples = 4096);

}  // namespace cfd
