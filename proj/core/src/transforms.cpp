#include "rw/transforms.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include <fftw3.h>

namespace rw {

namespace {

// One DST-I plan (FFTW RODFT00) per size, executed under a lock on the plan's
// own buffer.  RODFT00 of length N computes Y_k = 2 sum_j X_j sin(pi jk/(N+1)).
class DstPlan {
public:
    explicit DstPlan(int N) : N_(N) {
        buf_ = fftw_alloc_real(N);
        plan_ = fftw_plan_r2r_1d(N, buf_, buf_, FFTW_RODFT00, FFTW_ESTIMATE);
    }
    ~DstPlan() {
        fftw_destroy_plan(plan_);
        fftw_free(buf_);
    }
    void run(const double* in, double* out) {
        std::lock_guard<std::mutex> lk(mu_);
        for (int i = 0; i < N_; ++i) buf_[i] = in[i];
        fftw_execute(plan_);
        for (int i = 0; i < N_; ++i) out[i] = buf_[i];
    }

private:
    int N_;
    double* buf_;
    fftw_plan plan_;
    std::mutex mu_;
};

DstPlan& plan_for(int N) {
    static std::mutex map_mu;
    static std::map<int, DstPlan*> plans;
    std::lock_guard<std::mutex> lk(map_mu);
    auto it = plans.find(N);
    if (it == plans.end()) it = plans.emplace(N, new DstPlan(N)).first;
    return *it->second;
}

void check_grid(const GridSpec& a, const GridSpec& b) {
    if (!(a == b)) throw GridMismatch("operands on different grids");
}

// DST-I both real parts; scale applied afterwards
void dst_complex(const std::vector<cplx>& in, std::vector<cplx>& out, double scale) {
    int N = (int)in.size();
    std::vector<double> re(N), im(N);
    bool any_im = false;
    for (int i = 0; i < N; ++i) {
        re[i] = in[i].real();
        im[i] = in[i].imag();
        any_im = any_im || im[i] != 0.0;
    }
    DstPlan& p = plan_for(N);
    std::vector<double> reo(N), imo(N, 0.0);
    p.run(re.data(), reo.data());
    if (any_im) p.run(im.data(), imo.data());
    out.resize(N);
    for (int i = 0; i < N; ++i) out[i] = cplx(reo[i] * scale, imo[i] * scale);
}

} // namespace

GridFunction make_grid_function(const GridSpec& g) {
    return GridFunction{g, std::vector<cplx>(g.N, cplx(0, 0))};
}
SpectrumFunction make_spectrum_function(const GridSpec& g) {
    return SpectrumFunction{g, std::vector<cplx>(g.N, cplx(0, 0))};
}

SpectrumFunction sine_forward(const GridFunction& f) {
    SpectrumFunction g{f.grid, {}};
    // sum_n sin(k_m x_n) f_n dx = (dx/2) * RODFT00
    dst_complex(f.v, g.v, 0.5 * f.grid.dx());
    return g;
}

GridFunction sine_inverse(const SpectrumFunction& g) {
    GridFunction f{g.grid, {}};
    // (2/pi) sum_m sin(k_m x_n) g_m dk = (1/L) * RODFT00
    dst_complex(g.v, f.v, 1.0 / g.grid.L);
    return f;
}

GridFunction band_project(const GridFunction& f, double k_lo, double k_hi) {
    if (!(k_lo < k_hi) || k_lo < 0) throw DomainError("band_project needs 0 <= k_lo < k_hi");
    SpectrumFunction g = sine_forward(f);
    for (int m = 1; m <= f.grid.N; ++m) {
        double k = f.grid.k(m);
        if (k < k_lo || k > k_hi) g.v[m - 1] = 0;
    }
    return sine_inverse(g);
}

double energy_norm(const GridFunction& v0, const GridFunction& v1) {
    check_grid(v0.grid, v1.grid);
    SpectrumFunction s0 = sine_forward(v0), s1 = sine_forward(v1);
    double acc = 0;
    for (int m = 1; m <= v0.grid.N; ++m) {
        double k = v0.grid.k(m);
        acc += k * k * std::norm(s0.v[m - 1]) + std::norm(s1.v[m - 1]);
    }
    return std::sqrt(acc * 2.0 / 3.14159265358979323846 * v0.grid.dk());
}

double trapezoid(const std::vector<double>& vals, double dx) {
    double s = 0;
    for (double v : vals) s += v;
    return s * dx;  // zero boundary values at both ends
}

std::vector<double> centered_derivative(const std::vector<double>& w, double dx) {
    int N = (int)w.size();
    std::vector<double> d(N);
    for (int i = 0; i < N; ++i) {
        double left = i > 0 ? w[i - 1] : 0.0;
        double right = i + 1 < N ? w[i + 1] : 0.0;
        d[i] = (right - left) / (2 * dx);
    }
    return d;
}

} // namespace rw
