// Pure-state time evolution: exact eigendecomposition and Chebyshev expansion.
#pragma once

#include <memory>
#include <vector>

#include "censpin/operators.hpp"

namespace censpin {

// Largest dimension the dense eigendecomposition path accepts (N <= 11 on the
// full product basis); O(dim^3) stays in the seconds range below this.
constexpr Eigen::Index kDenseEigenMaxDim = 4096;

struct Propagation {
    enum class Method { Eigen, Chebyshev };

    Method method = Method::Eigen;
    double t = 0.0;
    double tol = 1e-12;  // Chebyshev only; must lie in (0, 1e-6]

    static Propagation eigen(double t);
    static Propagation chebyshev(double t, double tol = 1e-12);

    void validate() const;
};

// Rigorous spectral enclosure [e_min, e_max] with a 1% width safety margin.
struct SpectralBounds {
    double e_min = 0.0;
    double e_max = 0.0;

    double width() const { return e_max - e_min; }
    double center() const { return 0.5 * (e_max + e_min); }
};

// Gershgorin discs for sparse storage, exact extremal eigenvalues for dense,
// both widened by the safety margin.
SpectralBounds spectral_bounds(const HermitianOperator& h);

// Truncation order used for phase volume tau = |t| * width/2: the first order
// whose Bessel coefficient drops below tol/10, plus 10 extra.
int chebyshev_order(double tau_abs, double tol);

// Exact propagator from a cached dense eigendecomposition.
class EigenPropagator {
public:
    explicit EigenPropagator(const HermitianOperator& h);

    StateVector apply(const StateVector& psi, double t) const;
    const Eigen::VectorXd& eigenvalues() const { return evals_; }
    const DenseMatrix& eigenvectors() const { return evecs_; }

private:
    HilbertSpace space_;
    Eigen::VectorXd evals_;
    DenseMatrix evecs_;
};

// Chebyshev-polynomial propagator on the spectrum-rescaled operator, with
// Bessel-function coefficients c_k = (2 - delta_k0) (-i)^k J_k(tau).
// Truncation: first k with |J_k(tau)| < tol/10, plus 10 extra orders.
class ChebyshevPropagator {
public:
    ChebyshevPropagator(const HermitianOperator& h, double tol);

    StateVector apply(const StateVector& psi, double t) const;
    const SpectralBounds& bounds() const { return bounds_; }
    int last_order() const { return last_order_; }

private:
    Vector scaled_apply(const Vector& v) const;

    const HermitianOperator h_;
    SpectralBounds bounds_;
    double tol_;
    mutable int last_order_ = 0;
};

// psi(t) = exp(-iHt) psi0. The eigen method requires dim <= kDenseEigenMaxDim.
StateVector evolve(const HermitianOperator& h, const StateVector& psi0, const Propagation& prop);

// Expectation values of `observables` along the evolution of psi0, one row per
// time (times must be ascending). The eigendecomposition (or the scaled
// Chebyshev operator) is built once and reused across the grid.
struct TrajectoryTable {
    std::vector<double> times;
    Eigen::MatrixXd values;  // rows = times, cols = observables
};

TrajectoryTable trajectory(const HermitianOperator& h, const StateVector& psi0,
                           const std::vector<HermitianOperator>& observables,
                           const std::vector<double>& times,
                           Propagation::Method method = Propagation::Method::Eigen,
                           double tol = 1e-12);

// Picks eigen below the dense threshold and Chebyshev above it.
Propagation::Method default_method(const HilbertSpace& space);

}  // namespace censpin
