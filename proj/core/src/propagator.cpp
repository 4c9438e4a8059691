#include "rw/propagator.hpp"

#include <algorithm>
#include <cmath>

namespace rw {

static constexpr double pi = 3.14159265358979323846;

bool variant_admissible(Variant v, const PotentialSpec& spec) {
    if (spec.is_zero()) return true;
    double b = spec.beta();
    switch (v) {
        case Variant::Full: return b > 1.0 / 3.0;
        case Variant::Simple: return b > 0.5;
        case Variant::None: return b > 1.0;  // q integrable on (1, inf)
    }
    return false;
}

double phase_shift(Variant v, const MomentCache& m1, double k, double t) {
    if (k <= 0) throw DomainError("phase_shift needs k > 0");
    if (t < 1) throw DomainError("phase_shift needs t >= 1");
    if (m1.lower() != 1) throw DomainError("phase shift moments use lower limit 1");
    if (v == Variant::None || m1.spec().is_zero()) return 0.0;
    double Q1 = m1.moment(1, t);
    if (v == Variant::Simple) return Q1 / (2 * k);
    double Q2 = m1.moment(2, t);
    double qt = m1.spec().q(t);
    return Q1 / (2 * k) - qt * Q1 / (4 * k * k * k) + Q2 / (8 * k * k * k);
}

namespace {
// apply F0^{-1} R(angle(k)) F0 to the pair, R = (cos, sin/k; -k sin, cos)
std::pair<GridFunction, GridFunction> rotate_pair(
    const GridFunction& v0, const GridFunction& v1,
    const std::function<double(double)>& angle) {
    if (!(v0.grid == v1.grid)) throw GridMismatch("pair on different grids");
    SpectrumFunction s0 = sine_forward(v0), s1 = sine_forward(v1);
    for (int m = 1; m <= v0.grid.N; ++m) {
        double k = v0.grid.k(m);
        double a = angle(k);
        double c = std::cos(a), s = std::sin(a);
        cplx z0 = s0.v[m - 1], z1 = s1.v[m - 1];
        s0.v[m - 1] = c * z0 + s / k * z1;
        s1.v[m - 1] = -k * s * z0 + c * z1;
    }
    return {sine_inverse(s0), sine_inverse(s1)};
}

std::function<double(double)> eta_of(Variant v, const MomentCache& m1, double t, int sign) {
    if (v == Variant::None || m1.spec().is_zero()) {
        return [t, sign](double k) { return sign * k * t; };
    }
    double Q1 = m1.moment(1, t);
    double Q2 = v == Variant::Full ? m1.moment(2, t) : 0.0;
    double qt = v == Variant::Full ? m1.spec().q(t) : 0.0;
    bool full = v == Variant::Full;
    return [=](double k) {
        double P = Q1 / (2 * k);
        if (full) P += -qt * Q1 / (4 * k * k * k) + Q2 / (8 * k * k * k);
        return sign * (k * t + P);
    };
}
} // namespace

std::pair<GridFunction, GridFunction> U_vec(Variant v, const MomentCache& m1, double t,
                                            const GridFunction& v0, const GridFunction& v1) {
    return rotate_pair(v0, v1, eta_of(v, m1, t, +1));
}

std::pair<GridFunction, GridFunction> U_vec_inverse(Variant v, const MomentCache& m1, double t,
                                                    const GridFunction& v0,
                                                    const GridFunction& v1) {
    return rotate_pair(v0, v1, eta_of(v, m1, t, -1));
}

std::pair<GridFunction, GridFunction> W_vec(const JostTable& table,
                                            const GridFunction& u0, const GridFunction& u1) {
    SpectrumFunction c0 = generalized_forward(table, u0);
    SpectrumFunction c1 = generalized_forward(table, u1);
    SpectrumFunction s0 = make_spectrum_function(table.grid);
    SpectrumFunction s1 = make_spectrum_function(table.grid);
    for (size_t i = 0; i < table.modes.size(); ++i) {
        int m = table.modes[i] - 1;
        double k = table.k(i);
        const JostEntry& e = table.entries[i];
        cplx z0 = c0.v[m] / e.absA, z1 = c1.v[m] / e.absA;
        double c = std::cos(e.argA), s = std::sin(e.argA);
        s0.v[m] = c * z0 + s / k * z1;
        s1.v[m] = -k * s * z0 + c * z1;
    }
    return {sine_inverse(s0), sine_inverse(s1)};
}

namespace {
// The limit phase is sum_j c_j k^{1-2j} Q_j(inf); the variant's P(k,t) already
// accounts for the first j0-1 terms (Full: j=1,2; Simple: j=1; None: none).
int first_uncovered(Variant v) {
    switch (v) {
        case Variant::Full: return 3;
        case Variant::Simple: return 2;
        case Variant::None: return 1;
    }
    return 3;
}
} // namespace

double limit_phase_correction(Variant v, const MomentCache& m1, double k) {
    if (m1.spec().is_zero()) return 0.0;
    AsymptoticPhase phase = AsymptoticPhase::for_spec(m1.spec());
    double d = 0;
    try {
        for (int j = first_uncovered(v); j <= phase.order(); ++j)
            d += phase.c[j - 1] * std::pow(k, 1 - 2 * j) * m1.tail(j);
    } catch (const DivergentTail&) {
        return 0.0;  // inadmissible variant: no finite limit phase
    }
    return d;
}

std::pair<GridFunction, GridFunction> limit_operator(const JostTable& table, Variant v,
                                                     const MomentCache& m1,
                                                     const GridFunction& u0,
                                                     const GridFunction& u1) {
    auto w = W_vec(table, u0, u1);
    if (m1.spec().is_zero()) return w;
    return rotate_pair(w.first, w.second, [&m1, v](double k) {
        return limit_phase_correction(v, m1, k);
    });
}

ResidualScan waveop_residual(const JostTable& table, Variant v,
                             const GridFunction& u0, const GridFunction& u1,
                             const std::vector<double>& t_list) {
    MomentCache m1(table.spec, 1.0);
    auto ref = limit_operator(table, v, m1, u0, u1);
    ResidualScan scan;
    scan.data_norm = energy_norm(u0, u1);
    std::pair<GridFunction, GridFunction> prev;
    bool have_prev = false;
    for (double t : t_list) {
        auto sq = propagate_spectral(table, u0, u1, t);
        auto r = U_vec_inverse(v, m1, t, sq.first, sq.second);
        GridFunction d0 = r.first, d1 = r.second;
        for (int n = 0; n < d0.grid.N; ++n) {
            d0.v[n] -= ref.first.v[n];
            d1.v[n] -= ref.second.v[n];
        }
        scan.t.push_back(t);
        scan.residual.push_back(energy_norm(d0, d1));
        if (have_prev) {
            GridFunction c0 = r.first, c1 = r.second;
            for (int n = 0; n < c0.grid.N; ++n) {
                c0.v[n] -= prev.first.v[n];
                c1.v[n] -= prev.second.v[n];
            }
            scan.cauchy.push_back(energy_norm(c0, c1));
        }
        prev = r;
        have_prev = true;
    }
    return scan;
}

namespace {
GridFunction to_gf(const GridSpec& g, const std::vector<double>& v) {
    GridFunction f = make_grid_function(g);
    for (size_t n = 0; n < v.size(); ++n) f.v[n] = v[n];
    return f;
}
} // namespace

ResidualScan intertwine_residual(const PotentialSpec& spec_a, const PotentialSpec& spec_b,
                                 const FieldState& data, const std::vector<double>& t_list,
                                 const IntertwineOptions& opt) {
    for (double x = opt.R; x <= data.grid.L; x += std::max(0.37, x * 0.1)) {
        double qa = spec_a.q(x), qb = spec_b.q(x);
        if (std::abs(qa - qb) > opt.far_rel_tol * std::max(qa, qb) + 1e-14)
            throw PotentialsDifferFar("potentials differ at x=" + std::to_string(x));
    }
    std::vector<double> ts = t_list;
    std::sort(ts.begin(), ts.end());
    FdEvolution fwd(spec_a, data, opt.cfl);
    ResidualScan scan;
    std::vector<std::pair<GridFunction, GridFunction>> back;
    for (double t : ts) {
        fwd.advance_to(t);
        // backward evolution under spec_b: time reversal = flip w_t, evolve, flip
        FieldState rev{data.grid, fwd.state().w, fwd.state().wt, 0.0};
        for (double& v : rev.wt) v = -v;
        FdEvolution bwd(spec_b, std::move(rev), opt.cfl);
        bwd.advance_to(fwd.state().time);
        GridFunction g0 = to_gf(data.grid, bwd.state().w);
        std::vector<double> wt = bwd.state().wt;
        for (double& v : wt) v = -v;
        back.emplace_back(g0, to_gf(data.grid, wt));
        scan.t.push_back(t);
    }
    {
        GridFunction d0 = to_gf(data.grid, data.w), d1 = to_gf(data.grid, data.wt);
        scan.data_norm = std::sqrt(a_energy(spec_b, d0, d1));
        // residual records how far the conjugated flow has moved the data
        for (const auto& [b0, b1] : back) {
            GridFunction c0 = b0, c1 = b1;
            for (int n = 0; n < c0.grid.N; ++n) {
                c0.v[n] -= d0.v[n];
                c1.v[n] -= d1.v[n];
            }
            scan.residual.push_back(std::sqrt(a_energy(spec_b, c0, c1)));
        }
    }
    for (size_t i = 0; i + 1 < back.size(); ++i) {
        GridFunction c0 = back[i].first, c1 = back[i].second;
        for (int n = 0; n < c0.grid.N; ++n) {
            c0.v[n] -= back[i + 1].first.v[n];
            c1.v[n] -= back[i + 1].second.v[n];
        }
        scan.cauchy.push_back(std::sqrt(a_energy(spec_b, c0, c1)));
    }
    return scan;
}

std::vector<cplx> oscillatory_packet(const std::function<cplx(double)>& f,
                                     double a, double b,
                                     const MomentCache& m1, double t, int sign_x,
                                     const std::vector<double>& xs) {
    if (!(0 < a && a < b)) throw DomainError("band must satisfy 0 < a < b");
    if (sign_x != 1 && sign_x != -1) throw DomainError("sign_x must be +-1");
    double x_max = xs.empty() ? 0.0 : *std::max_element(xs.begin(), xs.end());
    double need = 2 * pi / (10 * (x_max + t));
    long M = (long)std::ceil((b - a) / need) + 1;
    M = std::max(M, 801L);
    if (M > 4000000L) throw UnderResolved("packet quadrature would need too many nodes");
    double dk = (b - a) / (M - 1);

    bool zero_pot = m1.spec().is_zero();
    double Q1 = 0, Q2 = 0, qt = 0;
    if (!zero_pot) {
        Q1 = m1.moment(1, t);
        Q2 = m1.moment(2, t);
        qt = m1.spec().q(t);
    }
    std::vector<cplx> amp(M);
    std::vector<double> karr(M);
    for (long j = 0; j < M; ++j) {
        double k = a + j * dk;
        karr[j] = k;
        double P = zero_pot ? 0.0
                            : Q1 / (2 * k) - qt * Q1 / (4 * k * k * k) + Q2 / (8 * k * k * k);
        double wgt = (j == 0 || j == M - 1) ? 0.5 : 1.0;
        amp[j] = f(k) * std::polar(wgt * dk, k * t + P);
    }
    std::vector<cplx> out(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) {
        double y = sign_x * xs[i];
        // e^{iky} recurrence along the uniform k-grid
        cplx rot = std::polar(1.0, dk * y);
        cplx ph = std::polar(1.0, karr[0] * y);
        cplx acc(0, 0);
        for (long j = 0; j < M; ++j) {
            acc += amp[j] * ph;
            ph *= rot;
        }
        out[i] = acc;
    }
    return out;
}

} // namespace rw
