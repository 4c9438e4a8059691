#include <doctest.h>

#include <cmath>

#include "rw/evolution.hpp"
#include "rw/spectral.hpp"

using namespace rw;

TEST_SUITE("spectral") {

TEST_CASE("phase coefficient recurrence") {
    AsymptoticPhase p = AsymptoticPhase::of_order(5);
    REQUIRE(p.order() == 5);
    CHECK(p.c[0] == doctest::Approx(0.5));
    CHECK(p.c[1] == doctest::Approx(0.125));
    CHECK(p.c[2] == doctest::Approx(0.0625));
    CHECK(p.c[3] == doctest::Approx(5.0 / 128));
    CHECK(p.c[4] == doctest::Approx(7.0 / 256));
    for (double c : p.c) CHECK(c > 0);
    // square of the truncated expansion: k^2 - y up to O(y^{N+1})
    double k = 2.0, y = 0.3;
    double s = k;
    for (int j = 1; j <= p.order(); ++j) s -= p.c[j - 1] * std::pow(k, 1 - 2 * j) * std::pow(y, j);
    CHECK(s * s == doctest::Approx(k * k - y).epsilon(1e-6));
}

TEST_CASE("default phase order covers the decay rate") {
    CHECK(AsymptoticPhase::for_spec(PotentialSpec::inverse_power(0.6)).order() >= 2);
    CHECK(AsymptoticPhase::for_spec(PotentialSpec::inverse_power(0.35)).order() >= 3);
}

TEST_CASE("phase evaluation against the analytic moments") {
    PotentialSpec q = PotentialSpec::inverse_power(0.6);
    MomentCache m(q, 1.0);
    AsymptoticPhase p = AsymptoticPhase::of_order(2);
    double k = 1.3, x = 40.0;
    double Q1 = (std::pow(x, 0.4) - 1.0) / 0.4;
    double Q2 = (1.0 - std::pow(x, -0.2)) / 0.2;
    double expect = k * x - 0.5 * Q1 / k - 0.125 * Q2 / (k * k * k);
    CHECK(asymptotic_theta(p, m, k, x) == doctest::Approx(expect).epsilon(1e-8));
    CHECK_THROWS_AS(asymptotic_theta(AsymptoticPhase::of_order(1), m, k, x), OrderTooLow);
}

TEST_CASE("free wavefunction is sin(kx)/k") {
    std::vector<double> xs;
    for (double x = 0.5; x <= 60; x += 0.5) xs.push_back(x);
    WaveFunction wf = solve_wavefunction(PotentialSpec::zero(), 2.0, xs);
    for (size_t i = 0; i < xs.size(); ++i) {
        CHECK(wf.u[i] == doctest::Approx(std::sin(2 * xs[i]) / 2).epsilon(1e-7));
        CHECK(wf.ux[i] == doctest::Approx(std::cos(2 * xs[i])).epsilon(1e-7));
    }
}

TEST_CASE("free amplitude extraction gives |A| = 1/k, arg A = 0") {
    JostEntry e = extract_A(PotentialSpec::zero(), 2.0);
    CHECK(e.absA == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(std::abs(e.argA) < 1e-8);
    CHECK(e.residual < 1e-8);
}

TEST_CASE("fitted amplitude is stable under window placement") {
    PotentialSpec q = PotentialSpec::shifted_inverse_power(0.6, 1.0);
    MomentCache m(q, 1.0);
    AsymptoticPhase p = AsymptoticPhase::for_spec(q);
    std::vector<double> xs;
    for (double x = 1; x <= 800; x += 0.25) xs.push_back(x);
    WaveFunction wf = solve_wavefunction(q, 1.0, xs);
    JostEntry a = fit_jost_entry(p, m, wf, 200, 400);
    JostEntry b = fit_jost_entry(p, m, wf, 400, 800);
    CHECK(a.absA == doctest::Approx(b.absA).epsilon(1e-4));
    CHECK(a.argA == doctest::Approx(b.argA).epsilon(2e-3));
    CHECK(a.residual < 1e-2 * a.absA);
}

TEST_CASE("table over the free potential reduces to the sine transform") {
    GridSpec g{80.0, 1023};
    JostTable table = build_jost_table(PotentialSpec::zero(), g, 0.9, 2.1);
    REQUIRE(!table.modes.empty());
    for (size_t i = 0; i < table.modes.size(); ++i) {
        CHECK(table.entries[i].absA == doctest::Approx(1.0 / table.k(i)).epsilon(1e-7));
        // measure density 2/(pi |A|^2) = 2 k^2 / pi
        CHECK(table.measure_density(i) ==
              doctest::Approx(2 * table.k(i) * table.k(i) / M_PI).epsilon(1e-6));
    }
    GridFunction f = make_grid_function(g);
    for (int n = 1; n <= g.N; ++n) {
        double x = g.x(n);
        f.v[n - 1] = std::exp(-(x - 30) * (x - 30) / 16.0) * std::cos(1.5 * x);
    }
    SpectrumFunction gen = generalized_forward(table, f);
    SpectrumFunction sf = sine_forward(f);
    for (size_t i = 0; i < table.modes.size(); ++i) {
        int m = table.modes[i];
        // u(x,k) = sin(kx)/k, so F f = (sine transform)/k
        CHECK(std::abs(gen.v[m - 1] - sf.v[m - 1] / table.k(i)) < 1e-6);
    }
}

TEST_CASE("generalized roundtrip and Plancherel on a band-limited packet") {
    PotentialSpec q = PotentialSpec::shifted_inverse_power(0.6, 1.0);
    GridSpec g{120.0, 1535};
    JostTable table = build_jost_table(q, g, 0.9, 2.1);
    GridFunction f = make_grid_function(g);
    for (int n = 1; n <= g.N; ++n) {
        double x = g.x(n);
        f.v[n - 1] = std::exp(-(x - 40) * (x - 40) / 50.0) * std::cos(1.5 * x);
    }
    f = band_project(f, 1.05, 1.95);
    GridFunction back = generalized_inverse(table, generalized_forward(table, f));
    double num = 0, den = 0;
    for (int n = 0; n < g.N; ++n) {
        num += std::norm(back.v[n] - f.v[n]);
        den += std::norm(f.v[n]);
    }
    CHECK(std::sqrt(num / den) < 1e-2);
    CHECK(plancherel_defect(table, f) < 1e-2);
}

TEST_CASE("spectral propagator: identity at t = 0 and FD agreement") {
    PotentialSpec q = PotentialSpec::shifted_inverse_power(0.6, 1.0);
    GridSpec g{160.0, 2047};
    JostTable table = build_jost_table(q, g, 0.9, 2.1);
    GridFunction u0 = make_grid_function(g), u1 = make_grid_function(g);
    for (int n = 1; n <= g.N; ++n) {
        double x = g.x(n);
        u0.v[n - 1] = std::exp(-(x - 50) * (x - 50) / 50.0) * std::cos(1.5 * x);
    }
    u0 = band_project(u0, 1.05, 1.95);
    auto [w0, w1] = propagate_spectral(table, u0, u1, 0.0);
    // t = 0 reduces to the completeness roundtrip of the truncated expansion
    double err = 0;
    for (int n = 0; n < g.N; ++n) err = std::max(err, std::abs(w0.v[n] - u0.v[n]));
    CHECK(err < 1e-2);

    double T = 20.0;
    auto [s0, s1] = propagate_spectral(table, u0, u1, T);
    FieldState init{g, std::vector<double>(g.N), std::vector<double>(g.N), 0.0};
    for (int n = 0; n < g.N; ++n) init.w[n] = u0.v[n].real();
    FdEvolution fd(q, init, 0.25);
    fd.advance_to(T);
    double num = 0, den = 0;
    for (int n = 0; n < g.N; ++n) {
        num += std::norm(s0.v[n] - fd.state().w[n]);
        den += std::norm(u0.v[n]);
    }
    CHECK(std::sqrt(num / den) < 2e-2);
}

TEST_CASE("free propagator rotates a single mode") {
    GridSpec g{80.0, 1023};
    JostTable table = build_jost_table(PotentialSpec::zero(), g, 0.9, 2.1);
    int m0 = 0;
    for (size_t i = 0; i < table.modes.size(); ++i)
        if (std::abs(table.k(i) - 1.5) < std::abs(table.k(m0) - 1.5)) m0 = (int)i;
    double k = table.k(m0);
    GridFunction u0 = make_grid_function(g), u1 = make_grid_function(g);
    for (int n = 1; n <= g.N; ++n) u0.v[n - 1] = std::sin(k * g.x(n));
    double t = 7.0;
    auto [w0, w1] = propagate_spectral(table, u0, u1, t);
    double err0 = 0, err1 = 0;
    for (int n = 1; n <= g.N; ++n) {
        err0 = std::max(err0, std::abs(w0.v[n - 1] - std::cos(k * t) * std::sin(k * g.x(n))));
        err1 = std::max(err1, std::abs(w1.v[n - 1] + k * std::sin(k * t) * std::sin(k * g.x(n))));
    }
    CHECK(err0 < 1e-6);
    CHECK(err1 < 1e-6);
}

TEST_CASE("a-energy of the free field equals the squared energy norm") {
    GridSpec g{40.0, 511};
    GridFunction v0 = make_grid_function(g), v1 = make_grid_function(g);
    for (int n = 1; n <= g.N; ++n) {
        double x = g.x(n);
        v0.v[n - 1] = std::exp(-(x - 20) * (x - 20) / 8.0);
        v1.v[n - 1] = 0.3 * std::exp(-(x - 18) * (x - 18) / 10.0);
    }
    double e = energy_norm(v0, v1);
    // physical-space derivative vs spectral norm: O(dx^2) discretization gap
    CHECK(a_energy(PotentialSpec::zero(), v0, v1) == doctest::Approx(e * e).epsilon(1e-2));
    // a positive potential only adds energy
    CHECK(a_energy(PotentialSpec::shifted_inverse_power(0.6, 1.0), v0, v1) > e * e);
}

} // TEST_SUITE
