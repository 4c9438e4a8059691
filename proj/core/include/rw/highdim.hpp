#pragma once
#include <vector>

#include "rw/evolution.hpp"
#include "rw/potential.hpp"
#include "rw/transforms.hpp"

namespace rw {

// mu = (d-1+2 nu)(d-3+2 nu)/4 for the spherical-harmonic sector (d, nu).
double mu_coefficient(int d, int nu);

// Radial 3-d Fourier bridge: with u(x) = w(|x|)/(2 sqrt(pi) |x|),
// u^(xi) = (1/(sqrt(2) pi)) |xi|^{-1} (F0 w)(|xi|).
// lhs: direct spherical quadrature of the 3-d transform; rhs: via sine_forward.
struct BridgeReport {
    std::vector<double> xi, lhs, rhs;
    double max_discrepancy = 0;
};
BridgeReport radial3d_bridge(const GridFunction& w, const std::vector<double>& xi_list);

// v_tt + (xi^2 + q(t) - q'(t) Q1(t)/(2 xi^2 + 2 q^2(t))) v = 0 (b-case) or
// v_tt + (xi^2 + q(t)) v = 0 (a-case, beta > 1/2), integrated over [T0, T1].
// A, B extracted from the rotating limit combinations on two late windows.
struct OdeReport {
    double xi = 0;
    double A = 0, B = 0;           // final-window fit
    double A_prev = 0, B_prev = 0; // previous-window fit
    double rel_change = 0;         // stabilization measure
    std::vector<double> t, E0, E1; // remainder traces at sample times
    double slope_E0 = 0;           // log-log slope of window-RMS |E0|
};
OdeReport ode_asymptotics_check(const PotentialSpec& q_of_t, double xi, bool b_case,
                                double T0 = 10, double T1 = 1e4, double tol = 1e-11);

// Evolve the reduced half-line field with potential q + mu/r^2 (FD oracle) and
// measure the energy split across the shell [t - c2 Q1(t), t - c1 Q1(t)],
// with the (d-1)/(2r)|w|^2 boundary corrections of the radial reduction.
struct ShellSample {
    double t = 0;
    double inside = 0, shell = 0, outside = 0;  // fractions, sum to 1
    double sliding_sup = 0;                     // window length Q1/log Q1
    double edge_correction = 0;                 // net boundary term / E
};
struct ShellReport {
    std::vector<ShellSample> samples;
    bool q1_unbounded = true;  // beta <= 1 check; shell statement degenerates otherwise
};
ShellReport dispersion_shell_3d(const PotentialSpec& spec, int d, int nu,
                                const FieldState& data, const std::vector<double>& t_list,
                                double c1, double c2, double cfl = 0.9);

} // namespace rw
