#include "censpin/metrology.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <utility>

#include <Eigen/Eigenvalues>

namespace censpin {

namespace {

constexpr double kFdRelTol = 1e-4;

// QFI estimates may dip below zero by numeric noise; anything worse than the
// clip window means a broken pipeline, not noise.
double clip_qfi(double f) {
    if (f >= 0.0) return f;
    if (f >= -1e-9) return 0.0;
    throw ConsistencyError("QFI value " + std::to_string(f) +
                           " is negative beyond the numeric-noise window");
}

// Pure-state QFI from a central-difference state derivative:
// F = 4(<dpsi|dpsi> - |<psi|dpsi>|^2).
double qfi_from_state_difference(const Vector& psi, const Vector& plus, const Vector& minus,
                                 double step) {
    const Vector dpsi = (plus - minus) / (2.0 * step);
    const double norm2 = dpsi.squaredNorm();
    const Complex overlap = psi.dot(dpsi);
    return 4.0 * (norm2 - std::norm(overlap));
}

// Richardson combination of the full-step and half-step estimates, refusing
// when they disagree beyond the relative tolerance.
double richardson_or_refuse(double coarse, double fine, double step, const char* what) {
    const double rel = std::abs(coarse - fine) / std::max(1.0, std::abs(fine));
    if (rel > kFdRelTol) {
        throw FdStepError(std::string(what) + " finite-difference estimates disagree by " +
                              std::to_string(rel) + " relative; retry with a smaller step",
                          step / 4.0);
    }
    return (4.0 * fine - coarse) / 3.0;
}

// Evolves the probe under the five field values (h, h +- step, h +- step/2)
// that the central-difference pipelines consume, from t=0 to a fixed t.
struct FieldStates {
    StateVector center;
    StateVector plus;
    StateVector minus;
    StateVector half_plus;
    StateVector half_minus;
};

std::array<double, 5> field_grid(double h, double step) {
    return {h, h + step, h - step, h + 0.5 * step, h - 0.5 * step};
}

FieldStates evolve_field_grid(const ModelSpec& spec, const HilbertSpace& space,
                              const StateVector& psi0, double t, double h, double step,
                              double chebyshev_tol) {
    const auto method = default_method(space);
    const auto grid = field_grid(h, step);
    std::array<std::optional<StateVector>, 5> out;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const HermitianOperator ham = build_hamiltonian(spec.with_field(grid[i]), space);
        const Propagation prop = method == Propagation::Method::Eigen
                                     ? Propagation::eigen(t)
                                     : Propagation::chebyshev(t, chebyshev_tol);
        out[i] = evolve(ham, psi0, prop);
    }
    return FieldStates{std::move(*out[0]), std::move(*out[1]), std::move(*out[2]),
                       std::move(*out[3]), std::move(*out[4])};
}

void check_fd_inputs(double t, double h, double step) {
    if (!(step > 0.0) || !std::isfinite(step)) {
        throw DomainError("finite-difference step must be positive and finite");
    }
    if (!std::isfinite(t) || !std::isfinite(h)) {
        throw DomainError("time and field must be finite");
    }
}

}  // namespace

double precession_omega(double a, double h) {
    return std::sqrt(0.25 * a * a + h * h);
}

double sensing_time(double a, double h, SensingKind kind) {
    const double omega = precession_omega(a, h);
    if (!(omega > 0.0)) {
        throw DomainError("sensing time is undefined at zero precession frequency");
    }
    const double base = std::numbers::pi / omega;
    return kind == SensingKind::LocalEpf ? base : 2.0 * base;
}

GeneratorCoeffs generator_coeffs_analytic(double a, double h, double t) {
    const double omega = precession_omega(a, h);
    if (!(omega > 0.0)) {
        throw DomainError("generator coefficients are undefined at zero precession frequency");
    }
    const double omega3 = omega * omega * omega;
    const double lag = (std::sin(omega * t) - omega * t) / omega3;

    GeneratorCoeffs c;
    c.omega = omega;
    c.t = t;
    c.alpha = -t - 0.25 * a * a * lag;
    c.beta = -a * h * lag;
    c.gamma = a * (std::cos(omega * t) - 1.0) / (omega * omega);
    return c;
}

HermitianOperator generator_exact(const HermitianOperator& h, const HermitianOperator& h1,
                                  double t) {
    if (!(h.space() == h1.space())) {
        throw DomainError("Hamiltonian and derivative operator live on different bases");
    }
    if (!h.is_hermitian() || !h1.is_hermitian()) {
        throw DomainError("generator construction needs Hermitian inputs");
    }
    if (h.dim() > kDenseEigenMaxDim) {
        throw CapacityError("exact generator needs the dense eigenbasis, capped at dimension " +
                            std::to_string(kDenseEigenMaxDim));
    }

    Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(h.to_dense());
    if (solver.info() != Eigen::Success) {
        throw ConvergenceError("eigendecomposition failed to converge");
    }
    const Eigen::VectorXd& evals = solver.eigenvalues();
    const DenseMatrix& vecs = solver.eigenvectors();

    const double scale =
        std::max(std::abs(evals.minCoeff()), std::abs(evals.maxCoeff()));
    const double degenerate_below = 1e-12 * std::max(scale, 1.0);

    // In the eigenbasis, integrating e^{iHs} H1 e^{-iHs} is elementwise:
    // (m,n) picks up (e^{i(Em-En)t} - 1)/(i(Em-En)), or t on the diagonal gaps.
    DenseMatrix core = vecs.adjoint() * h1.to_dense() * vecs;
    for (Eigen::Index m = 0; m < core.rows(); ++m) {
        for (Eigen::Index n = 0; n < core.cols(); ++n) {
            const double gap = evals(m) - evals(n);
            if (std::abs(gap) < degenerate_below) {
                core(m, n) *= t;
            } else {
                core(m, n) *= (std::exp(Complex(0.0, gap * t)) - 1.0) / Complex(0.0, gap);
            }
        }
    }

    DenseMatrix g = vecs * core * vecs.adjoint();
    const double residue = (g - DenseMatrix(g.adjoint())).cwiseAbs().maxCoeff();
    const double allowed =
        1e-12 * std::max(1.0, std::abs(t)) * std::max(1.0, h1.frobenius_norm());
    if (residue > allowed) {
        throw ConsistencyError("generator lost Hermiticity, residue " + std::to_string(residue));
    }
    // Symmetrizing removes the rounding skew exactly, so the constructor's
    // strict Hermiticity check always passes.
    DenseMatrix sym = 0.5 * (g + DenseMatrix(g.adjoint()));
    return HermitianOperator(h.space(), std::move(sym), true);
}

double qfi_from_generator(const HermitianOperator& g, const StateVector& probe) {
    if (!(g.space() == probe.space())) {
        throw DomainError("generator and probe live on different bases");
    }
    if (!g.is_hermitian()) {
        throw DomainError("QFI needs a Hermitian generator");
    }
    const Vector gpsi = g.apply(probe.amplitudes());
    const Complex mean = probe.amplitudes().dot(gpsi);
    const double second = gpsi.squaredNorm();
    return clip_qfi(4.0 * (second - std::norm(mean)));
}

double default_fd_step(double h) { return 1e-4 * std::max(1.0, std::abs(h)); }

QfiPoint qfi_pure_fd(const ModelSpec& spec, SpaceKind basis, ProbeKind probe, double t,
                     double h, double step) {
    check_fd_inputs(t, h, step);
    const HilbertSpace space = HilbertSpace::make(basis, spec.n_ring);
    const StateVector psi0 = probe_state(space, probe);
    const FieldStates states = evolve_field_grid(spec, space, psi0, t, h, step, 1e-13);

    const double coarse = qfi_from_state_difference(states.center.amplitudes(),
                                                    states.plus.amplitudes(),
                                                    states.minus.amplitudes(), step);
    const double fine = qfi_from_state_difference(states.center.amplitudes(),
                                                  states.half_plus.amplitudes(),
                                                  states.half_minus.amplitudes(), 0.5 * step);

    QfiPoint point;
    point.model = spec.with_field(h);
    point.t = t;
    point.h = h;
    point.method = QfiMethod::FdState;
    point.probe = probe;
    point.value = clip_qfi(richardson_or_refuse(coarse, fine, step, "QFI"));
    return point;
}

std::vector<double> qfi_trajectory_fd(const ModelSpec& spec, SpaceKind basis, ProbeKind probe,
                                      const std::vector<double>& times, double h, double step,
                                      double chebyshev_tol, int threads) {
    check_fd_inputs(times.empty() ? 0.0 : times.back(), h, step);
    if (times.empty()) {
        throw DomainError("QFI trajectory needs at least one time");
    }
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] >= times[i - 1])) {
            throw DomainError("QFI trajectory times must be ascending");
        }
    }
    if (!(times.front() >= 0.0)) {
        throw DomainError("QFI trajectory times must be nonnegative");
    }

    const HilbertSpace space = HilbertSpace::make(basis, spec.n_ring);
    const StateVector psi0 = probe_state(space, probe);
    const auto method = default_method(space);
    const auto grid = field_grid(h, step);

    // Each field value advances its own state along the grid; the five streams
    // are independent, so they can run on parallel workers without affecting
    // the (deterministic) result.
    std::array<std::vector<Vector>, 5> snapshots;
    const auto run_stream = [&](std::size_t which) {
        const HermitianOperator ham = build_hamiltonian(spec.with_field(grid[which]), space);
        auto& out = snapshots[which];
        out.reserve(times.size());
        if (method == Propagation::Method::Eigen) {
            EigenPropagator prop(ham);
            for (double t : times) out.push_back(prop.apply(psi0, t).amplitudes());
        } else {
            ChebyshevPropagator prop(ham, chebyshev_tol);
            StateVector psi = psi0;
            double reached = 0.0;
            for (double t : times) {
                psi = prop.apply(psi, t - reached);
                reached = t;
                out.push_back(psi.amplitudes());
            }
        }
    };

    const int workers = std::clamp(threads, 1, 5);
    if (workers == 1) {
        for (std::size_t i = 0; i < 5; ++i) run_stream(i);
    } else {
        std::vector<std::thread> pool;
        std::atomic<std::size_t> next{0};
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < 5; i = next.fetch_add(1)) {
                    run_stream(i);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    std::vector<double> values(times.size());
    for (std::size_t r = 0; r < times.size(); ++r) {
        const double coarse = qfi_from_state_difference(snapshots[0][r], snapshots[1][r],
                                                        snapshots[2][r], step);
        const double fine = qfi_from_state_difference(snapshots[0][r], snapshots[3][r],
                                                      snapshots[4][r], 0.5 * step);
        try {
            values[r] = clip_qfi(richardson_or_refuse(coarse, fine, step, "QFI"));
        } catch (const FdStepError&) {
            values[r] = std::numeric_limits<double>::quiet_NaN();
        }
    }
    return values;
}

double local_qubit_qfi(const BlochVector& v, const Eigen::Vector3d& dv) {
    const double len = v.norm();
    if (len > 1.0 + 1e-10) {
        throw DomainError("Bloch vector length " + std::to_string(len) +
                          " violates reduced-state positivity");
    }
    const Eigen::Vector3d vec = v.as_eigen();
    const double purity_gap = 1.0 - len * len;
    if (purity_gap < 1e-12) {
        return dv.squaredNorm();
    }
    const double radial = vec.dot(dv);
    return dv.squaredNorm() + radial * radial / purity_gap;
}

BlochVector bloch_at(const ModelSpec& spec, SpaceKind basis, ProbeKind probe, double t,
                     double h) {
    const HilbertSpace space = HilbertSpace::make(basis, spec.n_ring);
    const StateVector psi0 = probe_state(space, probe);
    const HermitianOperator ham = build_hamiltonian(spec.with_field(h), space);
    const Propagation prop = default_method(space) == Propagation::Method::Eigen
                                 ? Propagation::eigen(t)
                                 : Propagation::chebyshev(t, 1e-13);
    return reduce_to_central_bloch(evolve(ham, psi0, prop));
}

QfiPoint local_qfi_fd(const ModelSpec& spec, SpaceKind basis, ProbeKind probe, double t,
                      double h, double step) {
    check_fd_inputs(t, h, step);
    const HilbertSpace space = HilbertSpace::make(basis, spec.n_ring);
    const StateVector psi0 = probe_state(space, probe);
    const FieldStates states = evolve_field_grid(spec, space, psi0, t, h, step, 1e-13);

    const BlochVector v = reduce_to_central_bloch(states.center);
    const auto derivative = [&](const StateVector& plus, const StateVector& minus,
                                double eps) -> Eigen::Vector3d {
        const BlochVector p = reduce_to_central_bloch(plus);
        const BlochVector m = reduce_to_central_bloch(minus);
        return (p.as_eigen() - m.as_eigen()) / (2.0 * eps);
    };

    const double coarse = local_qubit_qfi(v, derivative(states.plus, states.minus, step));
    const double fine =
        local_qubit_qfi(v, derivative(states.half_plus, states.half_minus, 0.5 * step));

    QfiPoint point;
    point.model = spec.with_field(h);
    point.t = t;
    point.h = h;
    point.method = QfiMethod::LocalBloch;
    point.probe = probe;
    point.value = clip_qfi(richardson_or_refuse(coarse, fine, step, "local QFI"));
    return point;
}

QfiPoint epf_sigma_x_fd(const ModelSpec& spec, SpaceKind basis, ProbeKind probe, double t,
                        double h, double step) {
    check_fd_inputs(t, h, step);
    const HilbertSpace space = HilbertSpace::make(basis, spec.n_ring);
    const StateVector psi0 = probe_state(space, probe);
    const FieldStates states = evolve_field_grid(spec, space, psi0, t, h, step, 1e-13);

    const HermitianOperator sx = space.kind() == SpaceKind::FullProduct
                                     ? single_site_op(space, 0, Axis::X)
                                     : collective_op(space, Axis::X, WhichSpins::Central);
    const HermitianOperator sx_squared = [&] {
        const HermitianOperator prod = sx * sx;
        return prod.is_dense() ? HermitianOperator(space, prod.dense(), true)
                               : HermitianOperator(space, prod.sparse(), true);
    }();

    const double mean = expectation(sx, states.center);
    const double second = expectation(sx_squared, states.center);

    const double slope_coarse =
        (expectation(sx, states.plus) - expectation(sx, states.minus)) / (2.0 * step);
    const double slope_fine =
        (expectation(sx, states.half_plus) - expectation(sx, states.half_minus)) / step;
    const double slope = richardson_or_refuse(slope_coarse, slope_fine, step, "readout slope");

    QfiPoint point;
    point.model = spec.with_field(h);
    point.t = t;
    point.h = h;
    point.method = QfiMethod::Epf;
    point.probe = probe;
    point.value = error_propagation(mean, second, slope);
    return point;
}

double qfi_analytic_t0(double a, double h, int n_ring) {
    if (n_ring < 1) {
        throw DomainError("QFI closed form needs a positive ring size");
    }
    const GeneratorCoeffs c =
        generator_coeffs_analytic(a, h, sensing_time(a, h, SensingKind::GlobalQfi));
    const double spin = 0.5 * n_ring;
    return 2.0 * c.alpha * c.alpha * spin + c.beta * c.beta * spin * spin;
}

double qfi_analytic_t(double a, double h, int n_ring, double t) {
    if (n_ring < 1) {
        throw DomainError("QFI closed form needs a positive ring size");
    }
    const GeneratorCoeffs c = generator_coeffs_analytic(a, h, t);
    const double spin = 0.5 * n_ring;
    // Variance of alpha I_y + beta S_z I_z + gamma S_z I_x in the stretched
    // probe: the I_y and I_x pieces contribute I/2 each (scaled by the central
    // factors), the I_z piece I^2, and every cross term vanishes.
    return 2.0 * c.alpha * c.alpha * spin + c.beta * c.beta * spin * spin +
           0.5 * c.gamma * c.gamma * spin;
}

double local_qfi_analytic(double a, double h, int n_ring) {
    if (n_ring < 1) {
        throw DomainError("QFI closed form needs a positive ring size");
    }
    if (a == 0.0 && h == 0.0) {
        throw DomainError("local QFI closed form is undefined with no energy scale");
    }
    const double denom = a * a + 4.0 * h * h;
    return 16.0 * a * a * static_cast<double>(n_ring) * n_ring / (denom * denom);
}

CentralSpinExpectation sx_expectation_analytic(double a, double h, int n_ring) {
    if (a == 0.0) {
        throw DomainError("central-spin closed form needs a nonzero coupling");
    }
    if (n_ring < 1) {
        throw DomainError("central-spin closed form needs a positive ring size");
    }
    const double theta = std::atan(2.0 * h / a);
    return CentralSpinExpectation{0.5 * std::cos(2.0 * n_ring * theta),
                                  0.5 * std::sin(2.0 * n_ring * theta)};
}

double sx_trajectory_analytic(double a, double h, int n_ring, double t) {
    if (n_ring < 1) {
        throw DomainError("central-spin closed form needs a positive ring size");
    }
    const double omega = precession_omega(a, h);
    if (omega == 0.0) return 0.5;  // no dynamics at all
    // Central-spin coherence for the stretched probe: each ring spin evolves
    // conditionally on the central state, contributing one factor
    // z = cos^2 + sin^2 (h^2 - A^2/4)/Omega^2 + i cos sin A/Omega.
    const double c = std::cos(0.5 * omega * t);
    const double s = std::sin(0.5 * omega * t);
    const Complex z(c * c + s * s * (h * h - 0.25 * a * a) / (omega * omega),
                    c * s * a / omega);
    return 0.5 * std::pow(z, n_ring).real();
}

double error_propagation(double mean, double second_moment, double slope) {
    double variance = second_moment - mean * mean;
    if (variance < 0.0) {
        if (variance < -1e-12) {
            throw DomainError("second moment below squared mean; moments are inconsistent");
        }
        variance = 0.0;
    }
    if (slope == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return std::sqrt(variance) / std::abs(slope);
}

OptimalProbe fmax_and_optimal_probe(const GeneratorCoeffs& coeffs, int n_ring) {
    if (coeffs.alpha == 0.0 && coeffs.beta == 0.0 && coeffs.gamma == 0.0) {
        throw DomainError("optimal probe is undefined for an all-zero generator");
    }
    if (n_ring < 1) {
        throw DomainError("optimal probe needs a positive ring size");
    }

    const double spin = 0.5 * n_ring;
    const double quad = 4.0 * coeffs.alpha * coeffs.alpha + coeffs.beta * coeffs.beta +
                        coeffs.gamma * coeffs.gamma;
    const double f_max = quad * spin * spin;

    // On the central-up branch the generator is n.I with
    // n = (gamma/2, alpha, beta/2); rotating the stretched states onto that
    // axis with the spherical angles of n gives the extremal eigenstates.
    const double theta = std::atan2(std::hypot(2.0 * coeffs.alpha, coeffs.gamma), coeffs.beta);
    const double phi = std::atan2(2.0 * coeffs.alpha, coeffs.gamma);

    const HilbertSpace space = HilbertSpace::collective_sector(n_ring);
    const Eigen::Index block = n_ring + 1;

    DenseMatrix iy = DenseMatrix::Zero(block, block);
    for (Eigen::Index k = 0; k <= n_ring; ++k) {
        const double mz = spin - static_cast<double>(k);
        if (k > 0) {
            iy(k - 1, k) = Complex(0.0, -0.5) * std::sqrt(spin * (spin + 1.0) - mz * (mz + 1.0));
        }
        if (k < n_ring) {
            iy(k + 1, k) = Complex(0.0, 0.5) * std::sqrt(spin * (spin + 1.0) - mz * (mz - 1.0));
        }
    }

    Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(iy);
    if (solver.info() != Eigen::Success) {
        throw ConvergenceError("rotation eigendecomposition failed to converge");
    }
    const Vector rot_phases =
        (Complex(0.0, -theta) * solver.eigenvalues().cast<Complex>().array()).exp().matrix();

    Vector ring = Vector::Zero(block);
    ring(0) = 1.0 / std::sqrt(2.0);       // |I, +I>
    ring(block - 1) = 1.0 / std::sqrt(2.0);  // |I, -I>
    ring = solver.eigenvectors() * rot_phases.cwiseProduct(solver.eigenvectors().adjoint() * ring);
    for (Eigen::Index k = 0; k <= n_ring; ++k) {
        const double mz = spin - static_cast<double>(k);
        ring(k) *= std::exp(Complex(0.0, -phi * mz));
    }

    Vector amps = Vector::Zero(space.dim());
    for (Eigen::Index k = 0; k <= n_ring; ++k) {
        amps(space.collective_index(0, k)) = ring(k);
    }
    return OptimalProbe{f_max, theta, phi, StateVector(space, std::move(amps))};
}

}  // namespace censpin
