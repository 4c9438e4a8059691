#pragma once
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "rw/errors.hpp"

namespace rw {

enum class PotentialKind {
    Zero,
    InversePower,          // q(x) = x^{-beta}
    ShiftedInversePower,   // q(x) = (x0+x)^{-beta}
    SmoothedInversePower,  // q(x) = (x^2+delta^2)^{-beta/2}
    InverseSquarePlus,     // q(x) = mu x^{-2} + inner(x)
    TruncatedLinearization,// q(x) = base(x) for x>=1, linearized at x=1 below
    Tabulated
};

enum class PotentialClass { TypeI, TypeII, TypeIII };

// A repulsive potential: q > 0, q' < 0, q -> 0 at infinity.
// Immutable after construction; cheap to copy (shared payload).
class PotentialSpec {
public:
    static PotentialSpec zero();
    static PotentialSpec inverse_power(double beta);
    static PotentialSpec shifted_inverse_power(double beta, double x0);
    static PotentialSpec smoothed_inverse_power(double beta, double delta);
    static PotentialSpec inverse_square_plus(double mu, PotentialSpec inner);
    static PotentialSpec truncated_linearization(PotentialSpec base);
    static PotentialSpec tabulated(std::vector<double> x, std::vector<double> q);

    double q(double x) const;
    double qprime(double x) const;

    PotentialKind kind() const;
    PotentialClass declared_class() const;
    double beta() const;   // decay rate; huge for Zero
    double kappa() const;  // growth exponent at 0 (TypeII/III inner), else 0
    double mu() const;     // inverse-square strength, 0 unless InverseSquarePlus
    bool is_zero() const;
    const PotentialSpec& inner() const;  // InverseSquarePlus / TruncatedLinearization payload
    std::string describe() const;

private:
    struct Node;
    std::shared_ptr<const Node> node_;
    explicit PotentialSpec(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
};

// Sampling-based sanity check; returns the declared class or throws
// NotRepulsive / DecayMismatch.
PotentialClass classify(const PotentialSpec& spec);

// q*(x) = q(x) for x>=1, q(1)+(x-1)q'(1) on [0,1]; the mu x^{-2} part of a
// TypeIII potential is stripped first.  TypeI input is returned unchanged.
PotentialSpec truncate_to_type1(const PotentialSpec& spec);

// Cumulative moments Q_j(t) = int_lower^t q^j, adaptive quadrature with
// memoized knots.  Thread safe.
class MomentCache {
public:
    MomentCache(PotentialSpec spec, double lower_limit);

    double moment(int j, double t) const;   // j in 1..max_j
    double moment_tail3() const;            // int_lower^inf q^3, needs 3*beta>1
    double tail(int j) const;               // int_lower^inf q^j (DivergentTail if j*beta<=1)

    // Q_j at each point of an ascending list; much cheaper than repeated moment().
    std::vector<double> cumulative(int j, const std::vector<double>& xs) const;

    const PotentialSpec& spec() const { return spec_; }
    double lower() const { return lower_; }
    static constexpr int max_j = 8;

private:
    PotentialSpec spec_;
    double lower_;
    mutable std::mutex mu_;
    mutable std::vector<double> knots_;
    mutable std::vector<double> cum_[max_j]; // cum_[j-1][i] = Q_j(knots_[i])
    void extend_knots(double t) const;       // callers hold mu_
    double integrate(int j, double a, double b) const;
};

} // namespace rw
