#include "censpin/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include <Eigen/Eigenvalues>

namespace censpin {

Propagation Propagation::eigen(double t) {
    Propagation p;
    p.method = Method::Eigen;
    p.t = t;
    p.validate();
    return p;
}

Propagation Propagation::chebyshev(double t, double tol) {
    Propagation p;
    p.method = Method::Chebyshev;
    p.t = t;
    p.tol = tol;
    p.validate();
    return p;
}

void Propagation::validate() const {
    if (!std::isfinite(t)) {
        throw DomainError("propagation time must be finite");
    }
    if (method == Method::Chebyshev && (!(tol > 0.0) || tol > 1e-6)) {
        throw DomainError("chebyshev tolerance must lie in (0, 1e-6]");
    }
}

SpectralBounds spectral_bounds(const HermitianOperator& h) {
    if (!h.is_hermitian()) {
        throw DomainError("spectral bounds need a Hermitian operator");
    }
    double lo = 0.0;
    double hi = 0.0;
    if (h.is_dense()) {
        Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(h.dense(), Eigen::EigenvaluesOnly);
        lo = solver.eigenvalues().minCoeff();
        hi = solver.eigenvalues().maxCoeff();
    } else {
        // Gershgorin discs: every eigenvalue lies within radius sum_{j!=i}|a_ij|
        // of some diagonal entry.
        const SparseMatrix& m = h.sparse();
        Eigen::VectorXd diag = Eigen::VectorXd::Zero(m.rows());
        Eigen::VectorXd radius = Eigen::VectorXd::Zero(m.rows());
        for (int k = 0; k < m.outerSize(); ++k) {
            for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
                if (it.row() == it.col()) {
                    diag(it.row()) = it.value().real();
                } else {
                    radius(it.row()) += std::abs(it.value());
                }
            }
        }
        lo = (diag - radius).minCoeff();
        hi = (diag + radius).maxCoeff();
    }
    // 1% safety margin on the total width; a tiny floor keeps the Chebyshev
    // rescaling well-defined for (near-)scalar operators.
    double pad = 0.005 * (hi - lo);
    if (pad <= 0.0) pad = 1e-8;
    return SpectralBounds{lo - pad, hi + pad};
}

EigenPropagator::EigenPropagator(const HermitianOperator& h) : space_(h.space()) {
    if (!h.is_hermitian()) {
        throw DomainError("propagation needs a Hermitian operator");
    }
    if (h.dim() > kDenseEigenMaxDim) {
        throw CapacityError("dense eigendecomposition is capped at dimension " +
                            std::to_string(kDenseEigenMaxDim) + ", got " +
                            std::to_string(h.dim()));
    }
    Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(h.to_dense());
    if (solver.info() != Eigen::Success) {
        throw ConvergenceError("eigendecomposition failed to converge");
    }
    evals_ = solver.eigenvalues();
    evecs_ = solver.eigenvectors();
}

StateVector EigenPropagator::apply(const StateVector& psi, double t) const {
    if (!(psi.space() == space_)) {
        throw DomainError("state and propagator live on different bases");
    }
    const Vector coeffs = evecs_.adjoint() * psi.amplitudes();
    const Vector phases =
        (Complex(0.0, -t) * evals_.cast<Complex>().array()).exp().matrix();
    return StateVector(space_, evecs_ * phases.cwiseProduct(coeffs));
}

ChebyshevPropagator::ChebyshevPropagator(const HermitianOperator& h, double tol)
    : h_(h), bounds_(spectral_bounds(h)), tol_(tol) {
    if (!(tol > 0.0) || tol > 1e-6) {
        throw DomainError("chebyshev tolerance must lie in (0, 1e-6]");
    }
}

Vector ChebyshevPropagator::scaled_apply(const Vector& v) const {
    const double half_width = 0.5 * bounds_.width();
    return (h_.apply(v) - bounds_.center() * v) / half_width;
}

int chebyshev_order(double tau_abs, double tol) {
    if (!(tau_abs >= 0.0) || !std::isfinite(tau_abs)) {
        throw DomainError("chebyshev phase volume must be finite and nonnegative");
    }
    // The scan starts at k >= tau, past the last zero of J_k(tau), where the
    // coefficients decay superexponentially and monotonically; starting lower
    // would mistake an oscillation zero for convergence.
    const int cap = static_cast<int>(tau_abs + 60.0 * std::cbrt(tau_abs + 1.0) + 200.0);
    for (int k = static_cast<int>(std::ceil(tau_abs)); k <= cap; ++k) {
        if (std::abs(std::cyl_bessel_j(k, tau_abs)) < 0.1 * tol) {
            return k + 10;
        }
    }
    throw ConvergenceError("chebyshev series failed to reach tolerance " +
                           std::to_string(tol) + " by order " + std::to_string(cap));
}

StateVector ChebyshevPropagator::apply(const StateVector& psi, double t) const {
    if (!(psi.space() == h_.space())) {
        throw DomainError("state and propagator live on different bases");
    }
    if (t == 0.0) {
        last_order_ = 0;
        return psi;
    }

    // exp(-iHt) = exp(-i c t) * sum_k c_k T_k(Htilde), with Htilde the operator
    // rescaled to spectrum [-1, 1], tau = t * width/2 and Bessel coefficients
    // c_k = (2 - delta_k0) (-i)^k J_k(tau).
    const double tau = t * 0.5 * bounds_.width();
    const double tau_abs = std::abs(tau);

    const int order = chebyshev_order(tau_abs, tol_);
    if (2.0 * std::abs(std::cyl_bessel_j(order, tau_abs)) >= tol_) {
        throw ConvergenceError("chebyshev coefficient tail is not below tolerance at the "
                               "chosen truncation order");
    }
    last_order_ = order;

    // J_k(-x) = (-1)^k J_k(x) extends the coefficients to negative times.
    const auto coeff = [&](int k) -> Complex {
        double j = std::cyl_bessel_j(k, tau_abs);
        if (tau < 0.0 && (k % 2 == 1)) j = -j;
        static const Complex powers[4] = {{1.0, 0.0}, {0.0, -1.0}, {-1.0, 0.0}, {0.0, 1.0}};
        return (k == 0 ? 1.0 : 2.0) * powers[k % 4] * j;
    };

    Vector phi_prev = psi.amplitudes();
    Vector phi_curr = scaled_apply(phi_prev);
    Vector acc = coeff(0) * phi_prev + coeff(1) * phi_curr;
    for (int k = 2; k <= order; ++k) {
        Vector phi_next = 2.0 * scaled_apply(phi_curr) - phi_prev;
        acc += coeff(k) * phi_next;
        phi_prev = std::move(phi_curr);
        phi_curr = std::move(phi_next);
    }

    acc *= std::exp(Complex(0.0, -bounds_.center() * t));
    return StateVector(h_.space(), std::move(acc));
}

StateVector evolve(const HermitianOperator& h, const StateVector& psi0,
                   const Propagation& prop) {
    prop.validate();
    if (!(h.space() == psi0.space())) {
        throw DomainError("state and Hamiltonian live on different bases");
    }
    if (prop.method == Propagation::Method::Eigen) {
        return EigenPropagator(h).apply(psi0, prop.t);
    }
    return ChebyshevPropagator(h, prop.tol).apply(psi0, prop.t);
}

TrajectoryTable trajectory(const HermitianOperator& h, const StateVector& psi0,
                           const std::vector<HermitianOperator>& observables,
                           const std::vector<double>& times,
                           Propagation::Method method, double tol) {
    if (times.empty()) {
        throw DomainError("trajectory needs at least one time");
    }
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] >= times[i - 1])) {
            throw DomainError("trajectory times must be ascending");
        }
    }
    for (const auto& obs : observables) {
        if (!(obs.space() == h.space())) {
            throw DomainError("observable and Hamiltonian live on different bases");
        }
    }

    TrajectoryTable table;
    table.times = times;
    table.values.resize(static_cast<Eigen::Index>(times.size()),
                        static_cast<Eigen::Index>(observables.size()));

    const auto record = [&](Eigen::Index row, const StateVector& psi) {
        for (std::size_t c = 0; c < observables.size(); ++c) {
            table.values(row, static_cast<Eigen::Index>(c)) = expectation(observables[c], psi);
        }
    };

    if (method == Propagation::Method::Eigen) {
        // Exact path: every time is reached directly from t=0, no error stacking.
        EigenPropagator prop(h);
        for (std::size_t r = 0; r < times.size(); ++r) {
            record(static_cast<Eigen::Index>(r), prop.apply(psi0, times[r]));
        }
        return table;
    }

    // Chebyshev path: re-expand per step from the cached rescaled operator.
    ChebyshevPropagator prop(h, tol);
    StateVector psi = psi0;
    double reached = 0.0;
    for (std::size_t r = 0; r < times.size(); ++r) {
        psi = prop.apply(psi, times[r] - reached);
        reached = times[r];
        record(static_cast<Eigen::Index>(r), psi);
    }
    return table;
}

Propagation::Method default_method(const HilbertSpace& space) {
    return use_sparse_storage(space) ? Propagation::Method::Chebyshev
                                     : Propagation::Method::Eigen;
}

}  // namespace censpin
