#pragma once
#include <vector>

#include "rw/potential.hpp"
#include "rw/transforms.hpp"

namespace rw {

struct FieldState {
    GridSpec grid;
    std::vector<double> w, wt;  // interior nodes x_1..x_N; w(0)=w(L)=0
    double time = 0;
};

struct EnergyReport {
    double E_total = 0, E_minus = 0, E_plus = 0;
    double potential_part = 0;  // int q |w|^2
};

// Leapfrog (kick-drift-kick) evolution of w_tt - w_xx + q w = 0 with zero
// boundary at both ends.  Accumulates the boundary flux 1/2 int |w_x(0,t)|^2 dt
// and the Morawetz area integral from accumulate_from() onwards.
class FdEvolution {
public:
    FdEvolution(const PotentialSpec& spec, FieldState init, double cfl = 0.5);

    void step();
    void advance_to(double T);          // steps until time >= T - dt/2
    void set_accumulate_from(double t0) { accum_from_ = t0; }

    const FieldState& state() const { return s_; }
    double dt() const { return dt_; }
    double boundary_slope() const;       // w_x(0,t) ~ (4 w_1 - w_2)/(2 dx)
    double boundary_flux_accum() const { return bflux_; }
    double morawetz_accum() const { return maccum_; }

    const std::vector<double>& qv() const { return qv_; }
    const std::vector<double>& qpv() const { return qpv_; }

private:
    FieldState s_;
    std::vector<double> accel_;
    std::vector<double> qv_, qpv_;
    double dt_ = 0, dx_ = 0;
    double bflux_ = 0, maccum_ = 0, accum_from_ = 0;
    double prev_bq_ = 0, prev_mq_ = 0;  // previous integrands (trapezoid in t)
    double E0_ = 0;
    long steps_ = 0;
    void compute_accel();
    double morawetz_space_integral() const;
};

EnergyReport energy_decomposition(const PotentialSpec& spec, const FieldState& s);

// Both sides of the inward/outward flux identities on [0,X] x [t1,t2]
// (t-axis included in the boundary).  data is taken at time 0; t2 >= t1 >= 0.
struct FluxResiduals {
    double inward = 0, outward = 0;  // |LHS-RHS| / E
    double t1 = 0, t2 = 0;           // actual (step-aligned) times
    double E = 0;
};
FluxResiduals rectangle_flux_check(const PotentialSpec& spec, const FieldState& data,
                                   double X, double t1, double t2, double cfl = 0.5);

// Triangle law on {x+t <= s, t >= t0}:
// E_-([0,s-t0],t0) = 1/2 int_{t0}^s |w_x(0,t)|^2 dt + int_{t0}^s e'(s-t,t) dt + int int M.
struct TriangleReport {
    double lhs = 0, reflect = 0, leak = 0, conversion = 0;
    double residual = 0;  // |lhs - (reflect+leak+conversion)| / E
    double t0 = 0, s = 0, E = 0;
};
TriangleReport triangle_flux_check(const PotentialSpec& spec, const FieldState& data,
                                   double t0, double s, double cfl = 0.5);

// Run to T accumulating from t0; checks the Morawetz bound and the one-sided
// representation of E_-(t0).
struct MorawetzReport {
    double boundary_flux = 0, morawetz = 0;
    double E = 0, E_minus_t0 = 0, E_minus_T = 0;
    double defect = 0;           // |bflux + morawetz - E_minus_t0| / E
    bool bound_ok = false;       // bflux + morawetz <= 2E (+ tolerance)
    bool tail_small = false;     // E_-(T) < 0.05 E
};
MorawetzReport morawetz_scan(const PotentialSpec& spec, const FieldState& data,
                             double t0, double T, double cfl = 0.5);

// Energy of e = (|w_x|^2+|w_t|^2)/2 + q|w|^2/2 in a <= x <= b (interpolated ends).
double shell_energy(const PotentialSpec& spec, const FieldState& s, double a, double b);
// sup over r of the energy in [r, r+len].
double sliding_max(const PotentialSpec& spec, const FieldState& s, double len);

struct AsymptoticDiagnostics {
    double int_q_w2 = 0;        // int q |w|^2
    double int_w2_x2 = 0;       // int |w|^2 / x^2
    double sup_w2_x = 0;        // sup |w|^2 / x
    double energy_below_ct = 0; // int_0^{0.5 t} e dx
};
AsymptoticDiagnostics asymptotic_diagnostics(const PotentialSpec& spec, const FieldState& s);

} // namespace rw
