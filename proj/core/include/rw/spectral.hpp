#pragma once
#include <functional>
#include <utility>
#include <vector>

#include "rw/potential.hpp"
#include "rw/transforms.hpp"

namespace rw {

// Phase model theta(k,x) = kx - sum_{j=1}^N c_j k^{1-2j} Q_j(x), Q_j with the
// lower limit of the supplied moment cache (the table builder uses 1, matching
// the propagator phase so the fitted arg A carries no constant offset).
// c_1 = 1/2; c_m = (1/2) sum_{i=1}^{m-1} c_i c_{m-i} for m >= 2, so that
// (k - sum_j c_j k^{1-2j} y^j)^2 = k^2 - y + O(y^{N+1}).
struct AsymptoticPhase {
    std::vector<double> c;  // c[0] = c_1, ...
    int order() const { return (int)c.size(); }
    static AsymptoticPhase of_order(int N);
    static AsymptoticPhase for_spec(const PotentialSpec& spec); // N = ceil(1/beta)+1
};

// theta(k,x) with the cache's lower limit.  Throws OrderTooLow if N*beta < 1.
double asymptotic_theta(const AsymptoticPhase& phase, const MomentCache& m0,
                        double k, double x);

struct WaveFunction {
    double k = 0;
    std::vector<double> x, u, ux;
};

// Integrate -u'' + q u = k^2 u, u(0)=0, u'(0)=1, sampling at the ascending
// points xs (adaptive RK; local tolerance tol).
WaveFunction solve_wavefunction(const PotentialSpec& spec, double k,
                                const std::vector<double>& xs, double tol = 1e-10);

struct JostEntry {
    double k = 0, absA = 0, argA = 0, residual = 0;
};

struct FitOptions {
    double far_factor = 0.01;  // window starts where q(x) <= far_factor * k^2
    double x_min = 50;
    double x_cap = 2e4;        // hard cap on the window start
    double tol = 1e-10;        // ODE tolerance
    int nsamples = 2048;       // fit samples across [x_lo, 2 x_lo]
    int threads = 1;
};

// Window fit of u against |A| sin(theta - argA) over [x_lo, x_hi]; the
// wavefunction wf must contain samples covering the window.
JostEntry fit_jost_entry(const AsymptoticPhase& phase, const MomentCache& m0,
                         const WaveFunction& wf, double x_lo, double x_hi);

// Solve + fit in one go with default window placement.
JostEntry extract_A(const PotentialSpec& spec, double k, const FitOptions& opt = {});

// Wave functions and fitted amplitudes for every DST mode k_m inside
// [k_lo, k_hi]; carries u(x_n, k) samples for the generalized transforms.
struct JostTable {
    PotentialSpec spec = PotentialSpec::zero();
    GridSpec grid;
    double k_lo = 0, k_hi = 0;
    std::vector<int> modes;                   // DST mode indices m
    std::vector<JostEntry> entries;           // one per mode, argA unwrapped
    std::vector<std::vector<double>> u;       // u[i][n-1] = u(x_n, k_i)
    double k(size_t i) const { return grid.k(modes[i]); }
    // spectral measure density: d rho = 2/(pi |A(k)|^2) dk
    double measure_density(size_t i) const;
};

JostTable build_jost_table(const PotentialSpec& spec, const GridSpec& grid,
                           double k_lo, double k_hi, const FitOptions& opt = {});

// (F f)(k) = int f(x) u(x,k) dx at the table's modes (zero elsewhere).
SpectrumFunction generalized_forward(const JostTable& table, const GridFunction& f);
// (F^{-1} g)(x) = sum_k u(x,k) g(k) * 2/(pi |A|^2) dk.
GridFunction generalized_inverse(const JostTable& table, const SpectrumFunction& g);

// Relative Plancherel defect |int |Ff|^2 drho - int |f|^2 dx| / int |f|^2 dx.
double plancherel_defect(const JostTable& table, const GridFunction& f);

// Exact propagator S_q(t) applied in generalized-Fourier space.
std::pair<GridFunction, GridFunction> propagate_spectral(
    const JostTable& table, const GridFunction& u0, const GridFunction& u1, double t);

// A-energy (norm squared): int |v0'|^2 + q |v0|^2 + |v1|^2 dx.
double a_energy(const PotentialSpec& spec, const GridFunction& v0, const GridFunction& v1);

} // namespace rw
