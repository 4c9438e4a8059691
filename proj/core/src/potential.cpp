#include "rw/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

namespace rw {

namespace {
struct GslInit {
    GslInit() { gsl_set_error_handler_off(); }
} gsl_init_once;
}

struct PotentialSpec::Node {
    PotentialKind kind = PotentialKind::Zero;
    double beta = 0, x0 = 0, delta = 0, mu = 0;
    double q1 = 0, qp1 = 0;  // TruncatedLinearization: base values at x=1
    std::shared_ptr<const PotentialSpec> payload;  // inner / base
    // Tabulated: monotone cubic (Fritsch-Carlson) data
    std::vector<double> tx, tq, tm;  // knots, values, slopes
};

PotentialSpec PotentialSpec::zero() {
    auto n = std::make_shared<Node>();
    n->kind = PotentialKind::Zero;
    n->beta = std::numeric_limits<double>::infinity();
    return PotentialSpec(n);
}

PotentialSpec PotentialSpec::inverse_power(double beta) {
    if (beta <= 0) throw DomainError("inverse_power needs beta > 0");
    auto n = std::make_shared<Node>();
    n->kind = PotentialKind::InversePower;
    n->beta = beta;
    return PotentialSpec(n);
}

PotentialSpec PotentialSpec::shifted_inverse_power(double beta, double x0) {
    if (beta <= 0 || x0 <= 0) throw DomainError("shifted_inverse_power needs beta, x0 > 0");
    auto n = std::make_shared<Node>();
    n->kind = PotentialKind::ShiftedInversePower;
    n->beta = beta;
    n->x0 = x0;
    return PotentialSpec(n);
}

PotentialSpec PotentialSpec::smoothed_inverse_power(double beta, double delta) {
    if (beta <= 0 || delta <= 0) throw DomainError("smoothed_inverse_power needs beta, delta > 0");
    auto n = std::make_shared<Node>();
    n->kind = PotentialKind::SmoothedInversePower;
    n->beta = beta;
    n->delta = delta;
    return PotentialSpec(n);
}

PotentialSpec PotentialSpec::inverse_square_plus(double mu, PotentialSpec inner) {
    if (mu < 0.75) throw DomainError("inverse_square_plus needs mu >= 3/4");
    auto n = std::make_shared<Node>();
    n->kind = PotentialKind::InverseSquarePlus;
    n->mu = mu;
    n->beta = inner.beta();
    n->payload = std::make_shared<PotentialSpec>(std::move(inner));
    return PotentialSpec(n);
}

PotentialSpec PotentialSpec::truncated_linearization(PotentialSpec base) {
    if (base.kind() == PotentialKind::InverseSquarePlus)
        base = base.inner();  // strip the mu x^{-2} part first
    if (base.declared_class() == PotentialClass::TypeI) return base;
    auto n = std::make_shared<Node>();
    n->kind = PotentialKind::TruncatedLinearization;
    n->beta = base.beta();
    n->q1 = base.q(1.0);
    n->qp1 = base.qprime(1.0);
    n->payload = std::make_shared<PotentialSpec>(std::move(base));
    return PotentialSpec(n);
}

PotentialSpec PotentialSpec::tabulated(std::vector<double> x, std::vector<double> q) {
    if (x.size() != q.size() || x.size() < 4)
        throw DomainError("tabulated needs >= 4 matched samples");
    for (size_t i = 1; i < x.size(); ++i)
        if (x[i] <= x[i - 1]) throw DomainError("tabulated x not increasing");
    auto n = std::make_shared<Node>();
    n->kind = PotentialKind::Tabulated;
    size_t m = x.size();
    // Fritsch-Carlson shape-preserving slopes
    std::vector<double> d(m - 1), s(m);
    for (size_t i = 0; i + 1 < m; ++i) d[i] = (q[i + 1] - q[i]) / (x[i + 1] - x[i]);
    s[0] = d[0];
    s[m - 1] = d[m - 2];
    for (size_t i = 1; i + 1 < m; ++i) {
        if (d[i - 1] * d[i] <= 0) s[i] = 0;
        else {
            double h0 = x[i] - x[i - 1], h1 = x[i + 1] - x[i];
            s[i] = 3 * (h0 + h1) / ((2 * h1 + h0) / d[i - 1] + (h1 + 2 * h0) / d[i]);
        }
    }
    // crude decay-rate estimate from the tail
    size_t a = m / 2;
    n->beta = -std::log(q[m - 1] / q[a]) / std::log(x[m - 1] / x[a]);
    n->tx = std::move(x);
    n->tq = std::move(q);
    n->tm = std::move(s);
    return PotentialSpec(n);
}

double PotentialSpec::q(double x) const {
    const Node& n = *node_;
    switch (n.kind) {
        case PotentialKind::Zero: return 0.0;
        case PotentialKind::InversePower:
            if (x <= 0) throw DomainError("inverse_power at x <= 0");
            return std::pow(x, -n.beta);
        case PotentialKind::ShiftedInversePower: {
            if (x < 0) throw DomainError("negative x");
            return std::pow(n.x0 + x, -n.beta);
        }
        case PotentialKind::SmoothedInversePower:
            return std::pow(x * x + n.delta * n.delta, -0.5 * n.beta);
        case PotentialKind::InverseSquarePlus:
            if (x <= 0) throw DomainError("inverse_square_plus at x <= 0");
            return n.mu / (x * x) + n.payload->q(x);
        case PotentialKind::TruncatedLinearization:
            if (x < 0) throw DomainError("negative x");
            return x >= 1 ? n.payload->q(x) : n.q1 + (x - 1) * n.qp1;
        case PotentialKind::Tabulated: {
            const auto& tx = n.tx;
            if (x <= tx.front()) return n.tq.front();
            if (x >= tx.back()) // power-law extrapolation from the last knot
                return n.tq.back() * std::pow(x / tx.back(), -n.beta);
            size_t i = std::upper_bound(tx.begin(), tx.end(), x) - tx.begin() - 1;
            double h = tx[i + 1] - tx[i], s = (x - tx[i]) / h;
            double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
            double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
            return h00 * n.tq[i] + h * h10 * n.tm[i] + h01 * n.tq[i + 1] + h * h11 * n.tm[i + 1];
        }
    }
    return 0;
}

double PotentialSpec::qprime(double x) const {
    const Node& n = *node_;
    switch (n.kind) {
        case PotentialKind::Zero: return 0.0;
        case PotentialKind::InversePower:
            if (x <= 0) throw DomainError("inverse_power at x <= 0");
            return -n.beta * std::pow(x, -n.beta - 1);
        case PotentialKind::ShiftedInversePower:
            if (x < 0) throw DomainError("negative x");
            return -n.beta * std::pow(n.x0 + x, -n.beta - 1);
        case PotentialKind::SmoothedInversePower:
            return -n.beta * x * std::pow(x * x + n.delta * n.delta, -0.5 * n.beta - 1);
        case PotentialKind::InverseSquarePlus:
            if (x <= 0) throw DomainError("inverse_square_plus at x <= 0");
            return -2 * n.mu / (x * x * x) + n.payload->qprime(x);
        case PotentialKind::TruncatedLinearization:
            if (x < 0) throw DomainError("negative x");
            return x >= 1 ? n.payload->qprime(x) : n.qp1;
        case PotentialKind::Tabulated: {
            const auto& tx = n.tx;
            if (x <= tx.front()) return n.tm.front();
            if (x >= tx.back())
                return -n.beta / x * q(x);
            size_t i = std::upper_bound(tx.begin(), tx.end(), x) - tx.begin() - 1;
            double h = tx[i + 1] - tx[i], s = (x - tx[i]) / h;
            double d00 = 6 * s * (s - 1) / h, d10 = (1 - s) * (1 - 3 * s);
            double d01 = -d00, d11 = s * (3 * s - 2);
            return d00 * n.tq[i] + d10 * n.tm[i] + d01 * n.tq[i + 1] + d11 * n.tm[i + 1];
        }
    }
    return 0;
}

PotentialKind PotentialSpec::kind() const { return node_->kind; }
double PotentialSpec::beta() const { return node_->beta; }
double PotentialSpec::mu() const { return node_->mu; }
bool PotentialSpec::is_zero() const { return node_->kind == PotentialKind::Zero; }

double PotentialSpec::kappa() const {
    switch (node_->kind) {
        case PotentialKind::InversePower: return node_->beta;
        case PotentialKind::InverseSquarePlus: return node_->payload->kappa();
        default: return 0;
    }
}

PotentialClass PotentialSpec::declared_class() const {
    switch (node_->kind) {
        case PotentialKind::InversePower: return PotentialClass::TypeII;
        case PotentialKind::InverseSquarePlus: return PotentialClass::TypeIII;
        default: return PotentialClass::TypeI;
    }
}

const PotentialSpec& PotentialSpec::inner() const {
    if (!node_->payload) throw DomainError("spec has no inner potential");
    return *node_->payload;
}

std::string PotentialSpec::describe() const {
    char buf[160];
    switch (node_->kind) {
        case PotentialKind::Zero: return "zero";
        case PotentialKind::InversePower:
            snprintf(buf, sizeof buf, "x^-%g", node_->beta); return buf;
        case PotentialKind::ShiftedInversePower:
            snprintf(buf, sizeof buf, "(%g+x)^-%g", node_->x0, node_->beta); return buf;
        case PotentialKind::SmoothedInversePower:
            snprintf(buf, sizeof buf, "(x^2+%g^2)^-%g", node_->delta, node_->beta / 2); return buf;
        case PotentialKind::InverseSquarePlus:
            snprintf(buf, sizeof buf, "%g*x^-2 + ", node_->mu);
            return std::string(buf) + node_->payload->describe();
        case PotentialKind::TruncatedLinearization:
            return "trunc[" + node_->payload->describe() + "]";
        case PotentialKind::Tabulated:
            snprintf(buf, sizeof buf, "tabulated(%zu pts)", node_->tx.size()); return buf;
    }
    return "?";
}

PotentialClass classify(const PotentialSpec& spec) {
    if (spec.is_zero()) return PotentialClass::TypeI;
    // positivity / monotonicity on a log-spaced grid
    double prev = std::numeric_limits<double>::infinity();
    for (double x = 1e-3; x <= 1e6; x *= 1.25) {
        double qx = spec.q(x), qp = spec.qprime(x);
        if (!(qx > 0) || !(qp < 0))
            throw NotRepulsive("q>0, q'<0 violated near x=" + std::to_string(x));
        if (!(qx < prev)) throw NotRepulsive("q not decreasing near x=" + std::to_string(x));
        prev = qx;
    }
    // log-log decay fit over [1e2, 1e4]
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (double x = 1e2; x <= 1e4; x *= 1.1) {
        double lx = std::log(x), ly = std::log(spec.q(x));
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
        ++m;
    }
    double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    double beta_eff = spec.declared_class() == PotentialClass::TypeIII ? 2.0 : spec.beta();
    // TypeIII decays like x^-2 until the inner part takes over; accept either rate
    bool ok = std::abs(-slope - spec.beta()) < 0.1 ||
              (spec.declared_class() == PotentialClass::TypeIII &&
               -slope >= spec.beta() - 0.1 && -slope <= beta_eff + 0.1);
    if (!ok)
        throw DecayMismatch("fitted decay " + std::to_string(-slope) +
                            " vs declared " + std::to_string(spec.beta()));
    return spec.declared_class();
}

PotentialSpec truncate_to_type1(const PotentialSpec& spec) {
    return PotentialSpec::truncated_linearization(spec);
}

// ---------------- MomentCache ----------------

namespace {
struct QjParams {
    const PotentialSpec* spec;
    int j;
};
double qj_integrand(double x, void* p) {
    auto* pp = static_cast<QjParams*>(p);
    return std::pow(pp->spec->q(x), pp->j);
}
} // namespace

MomentCache::MomentCache(PotentialSpec spec, double lower_limit)
    : spec_(std::move(spec)), lower_(lower_limit) {
    if (lower_ != 0 && lower_ != 1) throw DomainError("moment lower limit must be 0 or 1");
    knots_.push_back(lower_);
    for (int j = 0; j < max_j; ++j) cum_[j].push_back(0.0);
}

double MomentCache::integrate(int j, double a, double b) const {
    if (spec_.is_zero() || b <= a) return 0.0;
    QjParams p{&spec_, j};
    gsl_function F{&qj_integrand, &p};
    gsl_integration_workspace* ws = gsl_integration_workspace_alloc(4096);
    double val = 0, err = 0;
    int rc;
    if (a == 0 && spec_.declared_class() != PotentialClass::TypeI) {
        // integrable endpoint singularity
        rc = gsl_integration_qags(&F, a, b, 0, 1e-12, 4096, ws, &val, &err);
    } else {
        rc = gsl_integration_qag(&F, a, b, 0, 1e-12, 4096, GSL_INTEG_GAUSS31, ws, &val, &err);
    }
    gsl_integration_workspace_free(ws);
    if (rc != 0 && rc != GSL_EROUND)
        throw Error("quadrature failure on [" + std::to_string(a) + "," + std::to_string(b) + "]");
    return val;
}

void MomentCache::extend_knots(double t) const {
    while (knots_.back() < t) {
        double last = knots_.back();
        double next = last <= lower_ ? lower_ + 0.25 : lower_ + (last - lower_) * 2 + 0.25;
        for (int j = 0; j < max_j; ++j)
            cum_[j].push_back(cum_[j].back() + integrate(j + 1, last, next));
        knots_.push_back(next);
    }
}

double MomentCache::moment(int j, double t) const {
    if (j < 1 || j > max_j) throw DomainError("moment order out of range");
    if (t < lower_ - 1e-12) throw DomainError("moment evaluated below lower limit");
    if (t <= lower_ || spec_.is_zero()) return 0.0;
    std::lock_guard<std::mutex> lk(mu_);
    extend_knots(t);
    size_t i = std::upper_bound(knots_.begin(), knots_.end(), t) - knots_.begin() - 1;
    return cum_[j - 1][i] + integrate(j, knots_[i], t);
}

double MomentCache::tail(int j) const {
    if (spec_.is_zero()) return 0.0;
    if (j * spec_.beta() <= 1)
        throw DivergentTail("int q^" + std::to_string(j) + " diverges (beta too small)");
    QjParams p{&spec_, j};
    gsl_function F{&qj_integrand, &p};
    gsl_integration_workspace* ws = gsl_integration_workspace_alloc(4096);
    double val = 0, err = 0;
    int rc = gsl_integration_qagiu(&F, lower_ == 0 ? 1e-12 : lower_, 0, 1e-12, 4096, ws, &val, &err);
    gsl_integration_workspace_free(ws);
    if (rc != 0 && rc != GSL_EROUND) throw Error("tail quadrature failure");
    if (lower_ == 0) val += integrate(j, 0, 1e-12);
    return val;
}

double MomentCache::moment_tail3() const { return tail(3); }

std::vector<double> MomentCache::cumulative(int j, const std::vector<double>& xs) const {
    std::vector<double> out(xs.size());
    if (xs.empty()) return out;
    double acc = moment(j, xs[0]);
    out[0] = acc;
    // 5-point Gauss-Legendre on each gap (integrand smooth away from 0)
    static const double gl_x[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                   0.5384693101056831, 0.9061798459386640};
    static const double gl_w[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                   0.4786286704993665, 0.2369268850561891};
    for (size_t i = 1; i < xs.size(); ++i) {
        double a = xs[i - 1], b = xs[i];
        if (b < a) throw DomainError("cumulative needs ascending points");
        double mid = 0.5 * (a + b), half = 0.5 * (b - a), s = 0;
        for (int g = 0; g < 5; ++g)
            s += gl_w[g] * std::pow(spec_.q(mid + half * gl_x[g]), j);
        acc += s * half;
        out[i] = acc;
    }
    return out;
}

} // namespace rw
