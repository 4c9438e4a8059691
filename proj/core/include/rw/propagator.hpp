#pragma once
#include <functional>
#include <utility>
#include <vector>

#include "rw/evolution.hpp"
#include "rw/spectral.hpp"

namespace rw {

// Which phase shift multiplies the reference propagator.
//   Full:   P = Q1/(2k) - q(t)Q1/(4k^3) + Q2/(8k^3)   (beta > 1/3)
//   Simple: P = Q1/(2k)                               (beta > 1/2)
//   None:   P = 0                                     (q integrable at infinity)
// Moments use lower limit 1.
enum class Variant { Full, Simple, None };

bool variant_admissible(Variant v, const PotentialSpec& spec);

double phase_shift(Variant v, const MomentCache& m1, double k, double t);

// U(t) = F0^{-1} (cos eta, k^{-1} sin eta; -k sin eta, cos eta) F0,
// eta = kt + P(k,t); inverse flips the sign of the sine entries.
std::pair<GridFunction, GridFunction> U_vec(Variant v, const MomentCache& m1, double t,
                                            const GridFunction& v0, const GridFunction& v1);
std::pair<GridFunction, GridFunction> U_vec_inverse(Variant v, const MomentCache& m1, double t,
                                                    const GridFunction& v0, const GridFunction& v1);

// Explicit limit operator:
// W = F0^{-1} (cos argA, k^{-1} sin argA; -k sin argA, cos argA) (F / |A|).
std::pair<GridFunction, GridFunction> W_vec(const JostTable& table,
                                            const GridFunction& u0, const GridFunction& u1);

// Residual limit phase sum_j c_j k^{1-2j} Q_j(inf) over the terms the
// variant's P(k,t) does not already account for (Full: j>=3, Simple: j>=2,
// None: j>=1); zero when the defining tail integrals diverge.
double limit_phase_correction(Variant v, const MomentCache& m1, double k);

// Reference the residual harness compares against: the limit-phase rotation
// applied after W.
std::pair<GridFunction, GridFunction> limit_operator(const JostTable& table, Variant v,
                                                     const MomentCache& m1,
                                                     const GridFunction& u0,
                                                     const GridFunction& u1);

struct ResidualScan {
    std::vector<double> t;
    std::vector<double> residual;  // ||U(t)^{-1} S_q(t) d - ref|| (energy norm)
    std::vector<double> cauchy;    // ||r_i - r_{i+1}|| between consecutive t
    double data_norm = 0;
};

ResidualScan waveop_residual(const JostTable& table, Variant v,
                             const GridFunction& u0, const GridFunction& u1,
                             const std::vector<double>& t_list);

// Cauchy scan of S_b(-t) S_a(t) d for potentials equal (to rel. 1e-2) beyond R.
// Both propagators are the FD oracle; differences measured in the b-energy norm.
struct IntertwineOptions {
    double R = 1.0;
    double cfl = 0.5;
    double far_rel_tol = 1e-2;
};
ResidualScan intertwine_residual(const PotentialSpec& spec_a, const PotentialSpec& spec_b,
                                 const FieldState& data, const std::vector<double>& t_list,
                                 const IntertwineOptions& opt = {});

// w~(x,t) = int_a^b f(k) e^{i(sign_x * kx + kt + P(k,t))} dk by direct
// trapezoid quadrature, spacing <= 2pi/(10 (x_max + t)).
std::vector<cplx> oscillatory_packet(const std::function<cplx(double)>& f,
                                     double a, double b,
                                     const MomentCache& m1, double t, int sign_x,
                                     const std::vector<double>& xs);

} // namespace rw
