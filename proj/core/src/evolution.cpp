#include "rw/evolution.hpp"

#include <algorithm>
#include <cmath>

namespace rw {

namespace {
// trapezoid of a nodal sample array from 0 to xend (zero boundary at x=0),
// linear interpolation for the last partial cell
double integrate_to(const std::vector<double>& f, double dx, double xend) {
    int N = (int)f.size();
    if (xend <= 0) return 0;
    double L_int = std::min(xend, (N + 1) * dx);
    int full = std::min(N, (int)std::floor(L_int / dx));
    double acc = 0;
    double prev = 0.0;  // value at x=0
    for (int n = 1; n <= full; ++n) {
        acc += 0.5 * (prev + f[n - 1]) * dx;
        prev = f[n - 1];
    }
    double rest = L_int - full * dx;
    if (rest > 0) {
        double nxt = full + 1 <= N ? f[full] : 0.0;
        double fe = prev + (nxt - prev) * (rest / dx);
        acc += 0.5 * (prev + fe) * rest;
    }
    return acc;
}

double interp(const std::vector<double>& f, double dx, double x) {
    int N = (int)f.size();
    if (x <= 0 || x >= (N + 1) * dx) return 0;
    int n = (int)std::floor(x / dx);
    double s = x / dx - n;
    double a = n >= 1 && n <= N ? f[n - 1] : 0.0;
    double b = n + 1 >= 1 && n + 1 <= N ? f[n] : 0.0;
    return a + (b - a) * s;
}
} // namespace

FdEvolution::FdEvolution(const PotentialSpec& spec, FieldState init, double cfl)
    : s_(std::move(init)) {
    if (!(cfl > 0) || cfl > 0.9) throw CFLViolation("cfl must be in (0, 0.9]");
    dx_ = s_.grid.dx();
    dt_ = cfl * dx_;
    int N = s_.grid.N;
    if ((int)s_.w.size() != N || (int)s_.wt.size() != N)
        throw GridMismatch("state arrays do not match grid");
    qv_.resize(N);
    qpv_.resize(N);
    for (int n = 1; n <= N; ++n) {
        qv_[n - 1] = spec.is_zero() ? 0.0 : spec.q(s_.grid.x(n));
        qpv_[n - 1] = spec.is_zero() ? 0.0 : spec.qprime(s_.grid.x(n));
    }
    double qmax = qv_.empty() ? 0.0 : *std::max_element(qv_.begin(), qv_.end());
    if (qmax * dt_ * dt_ >= 0.1)
        throw CFLViolation("q(dx) dt^2 too large; refine dx or reduce cfl");
    compute_accel();
    E0_ = energy_decomposition(spec, s_).E_total + 1e-12;
    prev_bq_ = 0.5 * boundary_slope() * boundary_slope();
    prev_mq_ = morawetz_space_integral();
}

void FdEvolution::compute_accel() {
    int N = s_.grid.N;
    accel_.resize(N);
    const double idx2 = 1.0 / (dx_ * dx_);
    const auto& w = s_.w;
    for (int n = 0; n < N; ++n) {
        double left = n > 0 ? w[n - 1] : 0.0;
        double right = n + 1 < N ? w[n + 1] : 0.0;
        accel_[n] = (left - 2 * w[n] + right) * idx2 - qv_[n] * w[n];
    }
}

double FdEvolution::boundary_slope() const {
    double w1 = s_.grid.N >= 1 ? s_.w[0] : 0.0;
    double w2 = s_.grid.N >= 2 ? s_.w[1] : 0.0;
    return (4 * w1 - w2) / (2 * dx_);
}

double FdEvolution::morawetz_space_integral() const {
    int N = s_.grid.N;
    double acc = 0;
    for (int n = 0; n < N; ++n) acc += -0.5 * qpv_[n] * s_.w[n] * s_.w[n];
    return acc * dx_;
}

void FdEvolution::step() {
    int N = s_.grid.N;
    const double half = 0.5 * dt_;
    for (int n = 0; n < N; ++n) s_.wt[n] += half * accel_[n];
    for (int n = 0; n < N; ++n) s_.w[n] += dt_ * s_.wt[n];
    compute_accel();
    for (int n = 0; n < N; ++n) s_.wt[n] += half * accel_[n];
    double t_new = s_.time + dt_;
    // trapezoid-in-time accumulators
    if (t_new > accum_from_ + 1e-12) {
        double bq = 0.5 * boundary_slope() * boundary_slope();
        double mq = morawetz_space_integral();
        bflux_ += 0.5 * (prev_bq_ + bq) * dt_;
        maccum_ += 0.5 * (prev_mq_ + mq) * dt_;
        prev_bq_ = bq;
        prev_mq_ = mq;
    } else {
        prev_bq_ = 0.5 * boundary_slope() * boundary_slope();
        prev_mq_ = morawetz_space_integral();
    }
    s_.time = t_new;
    if (++steps_ % 2000 == 0) {
        double e = 0;
        for (int n = 0; n < N; ++n)
            e += 0.5 * s_.wt[n] * s_.wt[n] + 0.5 * qv_[n] * s_.w[n] * s_.w[n];
        e *= dx_;
        if (e > 10 * E0_) throw Blowup("energy grew > 10x");
    }
}

void FdEvolution::advance_to(double T) {
    while (s_.time < T - 0.5 * dt_) step();
}

EnergyReport energy_decomposition(const PotentialSpec& spec, const FieldState& s) {
    int N = s.grid.N;
    double dx = s.grid.dx();
    std::vector<double> wx = centered_derivative(s.w, dx);
    EnergyReport r;
    for (int n = 0; n < N; ++n) {
        double q = spec.is_zero() ? 0.0 : spec.q(s.grid.x(n + 1));
        double qw2 = q * s.w[n] * s.w[n];
        double em = 0.5 * (wx[n] + s.wt[n]) * (wx[n] + s.wt[n]) + 0.5 * qw2;
        double ep = 0.5 * (wx[n] - s.wt[n]) * (wx[n] - s.wt[n]) + 0.5 * qw2;
        r.E_minus += em;
        r.E_plus += ep;
        r.potential_part += qw2;
    }
    r.E_minus *= dx;
    r.E_plus *= dx;
    r.potential_part *= dx;
    r.E_total = r.E_minus + r.E_plus;
    return r;
}

namespace {
// everything the flux identities need at one time level
struct FluxProbe {
    std::vector<double> wx;
    const FdEvolution* ev;
    const FieldState* s;
    double dx;
    void refresh(const FdEvolution& e) {
        ev = &e;
        s = &e.state();
        dx = s->grid.dx();
        wx = centered_derivative(s->w, dx);
    }
    // G_-(x) = (|w_x+w_t|^2 - e')/2, G_+(x) = (|w_x-w_t|^2 - e')/2 at a node
    double G(int n, int sgn) const {
        double a = wx[n] + sgn * s->wt[n];
        double ep = ev->qv()[n] * s->w[n] * s->w[n];
        return 0.5 * (a * a - ep);
    }
    double e_minus_integral(double X) const {
        std::vector<double> em(s->w.size());
        for (size_t n = 0; n < em.size(); ++n) {
            double a = wx[n] + s->wt[n];
            em[n] = 0.5 * a * a + 0.5 * ev->qv()[n] * s->w[n] * s->w[n];
        }
        return integrate_to(em, dx, X);
    }
    double e_plus_integral(double X) const {
        std::vector<double> ep(s->w.size());
        for (size_t n = 0; n < ep.size(); ++n) {
            double a = wx[n] - s->wt[n];
            ep[n] = 0.5 * a * a + 0.5 * ev->qv()[n] * s->w[n] * s->w[n];
        }
        return integrate_to(ep, dx, X);
    }
    double morawetz_to(double X) const {
        std::vector<double> m(s->w.size());
        for (size_t n = 0; n < m.size(); ++n)
            m[n] = -0.5 * ev->qpv()[n] * s->w[n] * s->w[n];
        return integrate_to(m, dx, X);
    }
};
} // namespace

FluxResiduals rectangle_flux_check(const PotentialSpec& spec, const FieldState& data,
                                   double X, double t1, double t2, double cfl) {
    if (!(0 <= t1 && t1 < t2)) throw RegionOutsideHistory("need 0 <= t1 < t2");
    if (data.time != 0) throw RegionOutsideHistory("data must be at time 0");
    if (X >= data.grid.L) throw RegionOutsideHistory("X beyond the grid");
    FdEvolution ev(spec, data, cfl);
    double dt = ev.dt();
    long k1 = std::lround(t1 / dt), k2 = std::lround(t2 / dt);
    if (k2 <= k1) k2 = k1 + 1;
    double T1 = k1 * dt, T2 = k2 * dt;
    int nodeX = (int)std::lround(X / data.grid.dx());
    nodeX = std::min(std::max(nodeX, 1), data.grid.N);
    double Xs = nodeX * data.grid.dx();  // snap to a node

    FluxProbe p;
    for (long k = 0; k < k1; ++k) ev.step();
    p.refresh(ev);
    double Em_t1 = p.e_minus_integral(Xs), Ep_t1 = p.e_plus_integral(Xs);
    // time integrals (trapezoid over steps)
    double gm_prev = p.G(nodeX - 1, +1), gp_prev = p.G(nodeX - 1, -1);
    double b_prev = 0.5 * ev.boundary_slope() * ev.boundary_slope();
    double m_prev = p.morawetz_to(Xs);
    double int_gm = 0, int_gp = 0, int_b = 0, int_m = 0;
    for (long k = k1; k < k2; ++k) {
        ev.step();
        p.refresh(ev);
        double gm = p.G(nodeX - 1, +1), gp = p.G(nodeX - 1, -1);
        double b = 0.5 * ev.boundary_slope() * ev.boundary_slope();
        double m = p.morawetz_to(Xs);
        int_gm += 0.5 * (gm_prev + gm) * dt;
        int_gp += 0.5 * (gp_prev + gp) * dt;
        int_b += 0.5 * (b_prev + b) * dt;
        int_m += 0.5 * (m_prev + m) * dt;
        gm_prev = gm; gp_prev = gp; b_prev = b; m_prev = m;
    }
    double Em_t2 = p.e_minus_integral(Xs), Ep_t2 = p.e_plus_integral(Xs);

    EnergyReport er = energy_decomposition(spec, data);
    double E = er.E_total > 0 ? er.E_total : 1.0;
    FluxResiduals r;
    r.t1 = T1; r.t2 = T2; r.E = er.E_total;
    // inward:  [E_-(t2)-E_-(t1)] - int G_-(X,t) dt + 1/2 int |w_x(0,t)|^2 dt = -int int M
    r.inward = std::abs((Em_t2 - Em_t1) - int_gm + int_b + int_m) / E;
    // outward: [E_+(t2)-E_+(t1)] + int G_+(X,t) dt - 1/2 int |w_x(0,t)|^2 dt = +int int M
    r.outward = std::abs((Ep_t2 - Ep_t1) + int_gp - int_b - int_m) / E;
    return r;
}

TriangleReport triangle_flux_check(const PotentialSpec& spec, const FieldState& data,
                                   double t0, double s, double cfl) {
    if (!(0 <= t0 && t0 < s)) throw RegionOutsideHistory("need 0 <= t0 < s");
    if (data.time != 0) throw RegionOutsideHistory("data must be at time 0");
    if (s - t0 >= data.grid.L) throw RegionOutsideHistory("triangle base beyond the grid");
    FdEvolution ev(spec, data, cfl);
    double dt = ev.dt();
    long k0 = std::lround(t0 / dt), ks = std::lround(s / dt);
    if (ks <= k0) ks = k0 + 1;
    double T0 = k0 * dt, S = ks * dt;
    double dx = data.grid.dx();

    FluxProbe p;
    for (long k = 0; k < k0; ++k) ev.step();
    p.refresh(ev);
    TriangleReport r;
    r.t0 = T0; r.s = S;
    r.lhs = p.e_minus_integral(S - T0);

    auto leak_at = [&](double t) {
        double x = S - t;
        double w = interp(ev.state().w, dx, x);
        return (spec.is_zero() ? 0.0 : spec.q(std::max(x, 0.5 * dx))) * w * w;
    };
    double b_prev = 0.5 * ev.boundary_slope() * ev.boundary_slope();
    double l_prev = leak_at(T0);
    double m_prev = p.morawetz_to(S - T0);
    for (long k = k0; k < ks; ++k) {
        ev.step();
        p.refresh(ev);
        double t = ev.state().time;
        double b = 0.5 * ev.boundary_slope() * ev.boundary_slope();
        double l = leak_at(t);
        double m = p.morawetz_to(S - t);
        r.reflect += 0.5 * (b_prev + b) * dt;
        r.leak += 0.5 * (l_prev + l) * dt;
        r.conversion += 0.5 * (m_prev + m) * dt;
        b_prev = b; l_prev = l; m_prev = m;
    }
    EnergyReport er = energy_decomposition(spec, data);
    r.E = er.E_total;
    double E = r.E > 0 ? r.E : 1.0;
    r.residual = std::abs(r.lhs - (r.reflect + r.leak + r.conversion)) / E;
    return r;
}

MorawetzReport morawetz_scan(const PotentialSpec& spec, const FieldState& data,
                             double t0, double T, double cfl) {
    if (data.time != 0) throw RegionOutsideHistory("data must be at time 0");
    FdEvolution ev(spec, data, cfl);
    ev.set_accumulate_from(t0);
    double E_minus_t0;
    if (t0 > 0) {
        ev.advance_to(t0);
        E_minus_t0 = energy_decomposition(spec, ev.state()).E_minus;
    } else {
        E_minus_t0 = energy_decomposition(spec, data).E_minus;
    }
    ev.advance_to(T);
    MorawetzReport r;
    EnergyReport e0 = energy_decomposition(spec, data);
    EnergyReport eT = energy_decomposition(spec, ev.state());
    r.E = e0.E_total;
    r.E_minus_t0 = E_minus_t0;
    r.E_minus_T = eT.E_minus;
    r.boundary_flux = ev.boundary_flux_accum();
    r.morawetz = ev.morawetz_accum();
    r.bound_ok = r.boundary_flux + r.morawetz <= 2 * r.E * (1 + 1e-6) + 1e-12;
    r.tail_small = r.E_minus_T < 0.05 * r.E;
    r.defect = r.E > 0 ? std::abs(r.boundary_flux + r.morawetz - E_minus_t0) / r.E : 0.0;
    return r;
}

double shell_energy(const PotentialSpec& spec, const FieldState& s, double a, double b) {
    if (!(0 <= a && a < b)) throw DomainError("shell needs 0 <= a < b");
    int N = s.grid.N;
    double dx = s.grid.dx();
    std::vector<double> wx = centered_derivative(s.w, dx);
    std::vector<double> e(N);
    for (int n = 0; n < N; ++n) {
        double q = spec.is_zero() ? 0.0 : spec.q(s.grid.x(n + 1));
        e[n] = 0.5 * (wx[n] * wx[n] + s.wt[n] * s.wt[n]) + 0.5 * q * s.w[n] * s.w[n];
    }
    return integrate_to(e, dx, b) - integrate_to(e, dx, a);
}

double sliding_max(const PotentialSpec& spec, const FieldState& s, double len) {
    int N = s.grid.N;
    double dx = s.grid.dx();
    std::vector<double> wx = centered_derivative(s.w, dx);
    std::vector<double> pre(N + 1, 0.0);
    double prev = 0;
    for (int n = 1; n <= N; ++n) {
        double q = spec.is_zero() ? 0.0 : spec.q(s.grid.x(n));
        double e = 0.5 * (wx[n - 1] * wx[n - 1] + s.wt[n - 1] * s.wt[n - 1]) +
                   0.5 * q * s.w[n - 1] * s.w[n - 1];
        pre[n] = pre[n - 1] + 0.5 * (prev + e) * dx;
        prev = e;
    }
    int win = std::max(1, (int)std::lround(len / dx));
    double best = 0;
    for (int n = 0; n + win <= N; ++n) best = std::max(best, pre[n + win] - pre[n]);
    return best;
}

AsymptoticDiagnostics asymptotic_diagnostics(const PotentialSpec& spec, const FieldState& s) {
    AsymptoticDiagnostics d;
    int N = s.grid.N;
    double dx = s.grid.dx();
    std::vector<double> qw2(N), w2x2(N);
    for (int n = 0; n < N; ++n) {
        double x = s.grid.x(n + 1);
        double q = spec.is_zero() ? 0.0 : spec.q(x);
        qw2[n] = q * s.w[n] * s.w[n];
        w2x2[n] = s.w[n] * s.w[n] / (x * x);
        d.sup_w2_x = std::max(d.sup_w2_x, s.w[n] * s.w[n] / x);
    }
    d.int_q_w2 = trapezoid(qw2, dx);
    d.int_w2_x2 = trapezoid(w2x2, dx);
    d.energy_below_ct = s.time > 0 ? shell_energy(spec, s, 0, 0.5 * s.time) : 0.0;
    return d;
}

} // namespace rw
