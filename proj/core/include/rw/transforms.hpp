#pragma once
#include <complex>
#include <vector>

#include "rw/errors.hpp"

namespace rw {

using cplx = std::complex<double>;

// Uniform grid on [0,L] with N interior nodes x_n = n dx, dx = L/(N+1).
// Induced frequency grid k_m = pi m / L, m = 1..N.
struct GridSpec {
    double L = 0;
    int N = 0;
    double dx() const { return L / (N + 1); }
    double x(int n) const { return n * dx(); }            // n = 1..N
    double k(int m) const { return 3.14159265358979323846 * m / L; }
    double dk() const { return 3.14159265358979323846 / L; }
    bool operator==(const GridSpec& o) const { return L == o.L && N == o.N; }
};

struct GridFunction {
    GridSpec grid;
    std::vector<cplx> v;  // values at x_1..x_N; zero at both boundaries
};

struct SpectrumFunction {
    GridSpec grid;
    std::vector<cplx> v;  // values at k_1..k_N
};

GridFunction make_grid_function(const GridSpec& g);
SpectrumFunction make_spectrum_function(const GridSpec& g);

// g(k_m) = sum_n sin(k_m x_n) f(x_n) dx  (DST-I quadrature of the half-line
// sine transform).
SpectrumFunction sine_forward(const GridFunction& f);

// f(x_n) = (2/pi) sum_m sin(k_m x_n) g(k_m) dk; exact inverse of sine_forward.
GridFunction sine_inverse(const SpectrumFunction& g);

// Zero the spectrum outside [k_lo, k_hi].
GridFunction band_project(const GridFunction& f, double k_lo, double k_hi);

// Energy norm on \dot H^1 x L^2 computed spectrally:
// ( (2/pi) sum_m [k_m^2 |v0^|^2 + |v1^|^2] dk )^{1/2}.
double energy_norm(const GridFunction& v0, const GridFunction& v1);

// Physical-space helpers.
double trapezoid(const std::vector<double>& vals, double dx); // zero boundaries
std::vector<double> centered_derivative(const std::vector<double>& w, double dx);

} // namespace rw
