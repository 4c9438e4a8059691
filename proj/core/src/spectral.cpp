#include "rw/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_odeiv2.h>

namespace rw {

static constexpr double pi = 3.14159265358979323846;

AsymptoticPhase AsymptoticPhase::of_order(int N) {
    if (N < 1) throw DomainError("phase order must be >= 1");
    if (N > MomentCache::max_j) throw DomainError("phase order too large for moment cache");
    AsymptoticPhase p;
    p.c.resize(N);
    p.c[0] = 0.5;
    for (int m = 2; m <= N; ++m) {
        double s = 0;
        for (int i = 1; i < m; ++i) s += p.c[i - 1] * p.c[m - i - 1];
        p.c[m - 1] = 0.5 * s;
    }
    return p;
}

AsymptoticPhase AsymptoticPhase::for_spec(const PotentialSpec& spec) {
    if (spec.is_zero()) return of_order(1);
    int N = (int)std::ceil(1.0 / spec.beta()) + 1;
    return of_order(std::min(N, (int)MomentCache::max_j));
}

double asymptotic_theta(const AsymptoticPhase& phase, const MomentCache& m0,
                        double k, double x) {
    if (k <= 0 || x < 0) throw DomainError("asymptotic_theta needs k>0, x>=0");
    double beta = m0.spec().beta();
    if (!m0.spec().is_zero() && phase.order() * beta < 1)
        throw OrderTooLow("N*beta < 1");
    double th = k * x;
    for (int j = 1; j <= phase.order(); ++j)
        th -= phase.c[j - 1] * std::pow(k, 1 - 2 * j) * m0.moment(j, x);
    return th;
}

// ---------------- wave functions ----------------

namespace {
struct OdeParams {
    const PotentialSpec* spec;
    double k2;
};
int wave_rhs(double x, const double y[], double dy[], void* p) {
    auto* pp = static_cast<OdeParams*>(p);
    double q = x > 0 ? pp->spec->q(x) : (pp->spec->declared_class() == PotentialClass::TypeI
                                             ? pp->spec->q(0.0) : pp->spec->q(1e-12));
    dy[0] = y[1];
    dy[1] = (q - pp->k2) * y[0];
    return GSL_SUCCESS;
}
} // namespace

WaveFunction solve_wavefunction(const PotentialSpec& spec, double k,
                                const std::vector<double>& xs, double tol) {
    if (k <= 0) throw DomainError("solve_wavefunction needs k > 0");
    WaveFunction wf;
    wf.k = k;
    wf.x = xs;
    wf.u.resize(xs.size());
    wf.ux.resize(xs.size());
    OdeParams p{&spec, k * k};
    gsl_odeiv2_system sys{&wave_rhs, nullptr, 2, &p};
    gsl_odeiv2_driver* drv = gsl_odeiv2_driver_alloc_y_new(
        &sys, gsl_odeiv2_step_rkf45, std::min(0.05, 0.05 / k), tol, tol);
    double x = 0, y[2] = {0.0, 1.0};
    for (size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] < x) throw DomainError("sample points must ascend");
        if (xs[i] > x) {
            int rc = gsl_odeiv2_driver_apply(drv, &x, xs[i], y);
            if (rc != GSL_SUCCESS) {
                gsl_odeiv2_driver_free(drv);
                throw StiffnessFailure("integrator failed near x=" + std::to_string(x));
            }
        }
        wf.u[i] = y[0];
        wf.ux[i] = y[1];
    }
    gsl_odeiv2_driver_free(drv);
    return wf;
}

// ---------------- amplitude extraction ----------------

JostEntry fit_jost_entry(const AsymptoticPhase& phase, const MomentCache& m0,
                         const WaveFunction& wf, double x_lo, double x_hi) {
    double k = wf.k;
    size_t i0 = std::lower_bound(wf.x.begin(), wf.x.end(), x_lo - 1e-9) - wf.x.begin();
    size_t i1 = std::upper_bound(wf.x.begin(), wf.x.end(), x_hi + 1e-9) - wf.x.begin();
    if (i1 - i0 < 16) throw FitDegenerate("too few samples in fit window");
    if (k * (x_hi - x_lo) < 8 * pi) throw FitDegenerate("window spans < 4 phase periods");

    std::vector<double> xs(wf.x.begin() + i0, wf.x.begin() + i1);
    std::vector<double> theta(xs.size());
    {
        double beta = m0.spec().beta();
        if (!m0.spec().is_zero() && phase.order() * beta < 1) throw OrderTooLow("N*beta < 1");
        for (double& th : theta) th = 0;
        for (int j = 1; j <= phase.order(); ++j) {
            double cj = phase.c[j - 1] * std::pow(k, 1 - 2 * j);
            std::vector<double> Q = m0.cumulative(j, xs);
            for (size_t i = 0; i < xs.size(); ++i) theta[i] -= cj * Q[i];
        }
        for (size_t i = 0; i < xs.size(); ++i) theta[i] += k * xs[i];
    }

    // u ~ alpha sin(theta) + beta cos(theta); ux/k ~ alpha cos(theta) - beta sin(theta).
    // The combined normal matrix is exactly M * I.
    size_t M = xs.size();
    double sa = 0, sb = 0;
    for (size_t i = 0; i < M; ++i) {
        double s = std::sin(theta[i]), c = std::cos(theta[i]);
        double u = wf.u[i0 + i], v = wf.ux[i0 + i] / k;
        sa += u * s + v * c;
        sb += u * c - v * s;
    }
    double alpha = sa / M, beta_c = sb / M;
    double absA = std::hypot(alpha, beta_c);
    double argA = std::atan2(-beta_c, alpha);
    double sse = 0;
    for (size_t i = 0; i < M; ++i) {
        double s = std::sin(theta[i]), c = std::cos(theta[i]);
        double ru = wf.u[i0 + i] - (alpha * s + beta_c * c);
        double rv = wf.ux[i0 + i] / k - (alpha * c - beta_c * s);
        sse += ru * ru + rv * rv;
    }
    double residual = std::sqrt(sse / (2 * M));
    if (!(absA > 0) || residual > 0.1 * absA)
        throw FitDegenerate("fit residual too large at k=" + std::to_string(k));

    // cross-check: u^2 + (u_x/k)^2 ~ |A|^2 pointwise, immune to sample aliasing
    double msq = 0;
    for (size_t i = 0; i < M; ++i) {
        double v = wf.ux[i0 + i] / k;
        msq += wf.u[i0 + i] * wf.u[i0 + i] + v * v;
    }
    double amp_msq = std::sqrt(msq / M);
    if (std::abs(amp_msq - absA) > 2 * residual + 0.02 * absA)
        throw FitDegenerate("mean-square amplitude disagrees with fit at k=" +
                            std::to_string(k));

    return JostEntry{k, absA, argA, residual};
}

namespace {
double window_start(const PotentialSpec& spec, double k, const FitOptions& opt) {
    if (spec.is_zero()) return opt.x_min;
    double target = opt.far_factor * k * k;
    if (spec.q(opt.x_min) <= target) return opt.x_min;
    if (spec.q(opt.x_cap) > target) return opt.x_cap;
    double lo = opt.x_min, hi = opt.x_cap;
    for (int i = 0; i < 80; ++i) {
        double mid = 0.5 * (lo + hi);
        (spec.q(mid) > target ? lo : hi) = mid;
    }
    return hi;
}

std::vector<double> window_samples(double k, double x_lo, double x_hi, int n) {
    // at least 4 phase periods
    if (k * (x_hi - x_lo) < 8 * pi) x_hi = x_lo + 8 * pi / k + 1;
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) xs[i] = x_lo + (x_hi - x_lo) * i / (n - 1);
    return xs;
}
} // namespace

JostEntry extract_A(const PotentialSpec& spec, double k, const FitOptions& opt) {
    double x_lo = window_start(spec, k, opt);
    double x_hi = 2 * x_lo;
    std::vector<double> xs = window_samples(k, x_lo, x_hi, opt.nsamples);
    WaveFunction wf = solve_wavefunction(spec, k, xs, opt.tol);
    AsymptoticPhase phase = AsymptoticPhase::for_spec(spec);
    MomentCache m0(spec, 1.0);
    return fit_jost_entry(phase, m0, wf, xs.front(), xs.back());
}

// ---------------- table construction ----------------

double JostTable::measure_density(size_t i) const {
    double a = entries[i].absA;
    return 2.0 / (pi * a * a);
}

JostTable build_jost_table(const PotentialSpec& spec, const GridSpec& grid,
                           double k_lo, double k_hi, const FitOptions& opt) {
    if (!(0 < k_lo && k_lo < k_hi)) throw DomainError("bad band");
    JostTable tab;
    tab.spec = spec;
    tab.grid = grid;
    tab.k_lo = k_lo;
    tab.k_hi = k_hi;
    int m_lo = (int)std::ceil(k_lo / grid.dk() - 1e-9);
    int m_hi = (int)std::floor(k_hi / grid.dk() + 1e-9);
    m_lo = std::max(m_lo, 1);
    m_hi = std::min(m_hi, grid.N);
    if (m_hi < m_lo) throw DomainError("band contains no grid frequencies");
    for (int m = m_lo; m <= m_hi; ++m) tab.modes.push_back(m);
    size_t nk = tab.modes.size();
    tab.entries.resize(nk);
    tab.u.assign(nk, {});

    AsymptoticPhase phase = AsymptoticPhase::for_spec(spec);
    // lower limit 1 matches the propagator phase convention, so the fitted
    // arg A carries no constant offset against it
    MomentCache m0(spec, 1.0);
    // warm the moment cache before the parallel section
    for (int j = 1; j <= phase.order(); ++j) m0.moment(j, 2 * opt.x_cap);

    auto work = [&](size_t i_begin, size_t i_end) {
        for (size_t i = i_begin; i < i_end; ++i) {
            double k = grid.k(tab.modes[i]);
            double x_lo = window_start(spec, k, opt);
            double x_hi = 2 * x_lo;
            std::vector<double> win = window_samples(k, x_lo, x_hi, opt.nsamples);
            std::vector<double> xs;
            xs.reserve(grid.N + win.size());
            for (int n = 1; n <= grid.N; ++n) xs.push_back(grid.x(n));
            size_t ngrid = xs.size();
            for (double w : win)
                if (w > xs.back() + 1e-12) xs.push_back(w);
            WaveFunction wf = solve_wavefunction(spec, k, xs, opt.tol);
            tab.u[i].assign(wf.u.begin(), wf.u.begin() + ngrid);
            tab.entries[i] = fit_jost_entry(phase, m0, wf, win.front(), win.back());
        }
    };
    int nthreads = std::max(1, opt.threads);
    if (nthreads == 1 || nk < 8) {
        work(0, nk);
    } else {
        std::vector<std::thread> pool;
        size_t chunk = (nk + nthreads - 1) / nthreads;
        for (int t = 0; t < nthreads; ++t) {
            size_t b = t * chunk, e = std::min(nk, b + chunk);
            if (b < e) pool.emplace_back(work, b, e);
        }
        for (auto& th : pool) th.join();
    }

    // unwrap arg A along the band
    for (size_t i = 1; i < nk; ++i) {
        double d = tab.entries[i].argA - tab.entries[i - 1].argA;
        d -= 2 * pi * std::round(d / (2 * pi));
        tab.entries[i].argA = tab.entries[i - 1].argA + d;
    }
    return tab;
}

// ---------------- generalized transforms ----------------

SpectrumFunction generalized_forward(const JostTable& table, const GridFunction& f) {
    if (!(f.grid == table.grid)) throw GridMismatch("table grid != data grid");
    SpectrumFunction g = make_spectrum_function(f.grid);
    double dx = f.grid.dx();
    for (size_t i = 0; i < table.modes.size(); ++i) {
        const auto& u = table.u[i];
        cplx acc(0, 0);
        for (int n = 0; n < f.grid.N; ++n) acc += u[n] * f.v[n];
        g.v[table.modes[i] - 1] = acc * dx;
    }
    return g;
}

GridFunction generalized_inverse(const JostTable& table, const SpectrumFunction& g) {
    if (!(g.grid == table.grid)) throw GridMismatch("table grid != spectrum grid");
    GridFunction f = make_grid_function(g.grid);
    double dk = g.grid.dk();
    for (size_t i = 0; i < table.modes.size(); ++i) {
        cplx w = g.v[table.modes[i] - 1] * (table.measure_density(i) * dk);
        if (w == cplx(0, 0)) continue;
        const auto& u = table.u[i];
        for (int n = 0; n < g.grid.N; ++n) f.v[n] += u[n] * w;
    }
    return f;
}

double plancherel_defect(const JostTable& table, const GridFunction& f) {
    SpectrumFunction g = generalized_forward(table, f);
    double spec_side = 0;
    for (size_t i = 0; i < table.modes.size(); ++i)
        spec_side += std::norm(g.v[table.modes[i] - 1]) * table.measure_density(i);
    spec_side *= f.grid.dk();
    double phys_side = 0;
    for (const cplx& z : f.v) phys_side += std::norm(z);
    phys_side *= f.grid.dx();
    if (phys_side == 0) return 0;
    return std::abs(spec_side - phys_side) / phys_side;
}

std::pair<GridFunction, GridFunction> propagate_spectral(
    const JostTable& table, const GridFunction& u0, const GridFunction& u1, double t) {
    SpectrumFunction c = generalized_forward(table, u0);
    SpectrumFunction d = generalized_forward(table, u1);
    SpectrumFunction n0 = make_spectrum_function(table.grid);
    SpectrumFunction n1 = make_spectrum_function(table.grid);
    for (size_t i = 0; i < table.modes.size(); ++i) {
        int m = table.modes[i] - 1;
        double k = table.k(i);
        double ck = std::cos(k * t), sk = std::sin(k * t);
        n0.v[m] = ck * c.v[m] + sk / k * d.v[m];
        n1.v[m] = -k * sk * c.v[m] + ck * d.v[m];
    }
    return {generalized_inverse(table, n0), generalized_inverse(table, n1)};
}

double a_energy(const PotentialSpec& spec, const GridFunction& v0, const GridFunction& v1) {
    if (!(v0.grid == v1.grid)) throw GridMismatch("pair on different grids");
    int N = v0.grid.N;
    double dx = v0.grid.dx();
    double acc = 0;
    for (int n = 0; n < N; ++n) {
        cplx left = n > 0 ? v0.v[n - 1] : cplx(0, 0);
        cplx right = n + 1 < N ? v0.v[n + 1] : cplx(0, 0);
        cplx d = (right - left) / (2 * dx);
        double x = v0.grid.x(n + 1);
        double q = spec.is_zero() ? 0.0 : spec.q(x);
        acc += std::norm(d) + q * std::norm(v0.v[n]) + std::norm(v1.v[n]);
    }
    return acc * dx;
}

} // namespace rw
