// Quantum Fisher information machinery: exact generators, closed forms,
// finite-difference pipelines, optimal probes and error propagation.
#pragma once

#include <utility>
#include <vector>

#include "censpin/dynamics.hpp"
#include "censpin/models.hpp"

namespace censpin {

// Precession frequency Omega = sqrt(A^2/4 + h^2).
double precession_omega(double a, double h);

enum class SensingKind { LocalEpf, GlobalQfi };

// Preset sensing times: pi/Omega for the central-spin error-propagation
// scheme, 2*pi/Omega for the global-QFI scheme.
double sensing_time(double a, double h, SensingKind kind);

// Coefficients of the transformed local generator
//   G = alpha I_y + beta S_z I_z + gamma S_z I_x
// for the collective no-Zeeman model:
//   alpha = -t - (A^2/4)(sin Ot - Ot)/O^3
//   beta  = -A h (sin Ot - Ot)/O^3
//   gamma = A (cos Ot - 1)/O^2
// At t = 2*pi/Omega: gamma = 0, alpha = -2*pi*h^2/O^3, beta = 2*pi*A*h/O^3.
struct GeneratorCoeffs {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double omega = 0.0;
    double t = 0.0;
};

GeneratorCoeffs generator_coeffs_analytic(double a, double h, double t);

// G = integral_0^t exp(iHs) H1 exp(-iHs) ds, evaluated in the eigenbasis of H:
// element (m,n) is <m|H1|n> (e^{i(Em-En)t} - 1)/(i(Em-En)), with the
// degenerate limit t<m|H1|n> when |Em-En| < 1e-12 ||H||.
HermitianOperator generator_exact(const HermitianOperator& h, const HermitianOperator& h1, double t);

// F = 4 (<G^2> - <G>^2) in the probe state.
double qfi_from_generator(const HermitianOperator& g, const StateVector& probe);

enum class QfiMethod { FdState, GeneratorExact, Analytic, LocalBloch, Epf };

struct QfiPoint {
    ModelSpec model;
    double t = 0.0;
    double h = 0.0;
    double value = 0.0;  // clipped to 0 below -1e-9 numeric noise
    QfiMethod method = QfiMethod::FdState;
    ProbeKind probe = ProbeKind::RingZStretched;
};

// Scaled finite-difference step used by the state and Bloch pipelines.
double default_fd_step(double h);

// Global QFI from central differences of the evolved state over h +- step,
// with one halved-step Richardson pass; raises FdStepError when the two
// estimates disagree by more than 1e-4 relative.
QfiPoint qfi_pure_fd(const ModelSpec& spec, SpaceKind basis, ProbeKind probe,
                     double t, double h, double step);

// Same finite-difference recipe along a whole time grid, advancing the five
// field trajectories step by step so the propagator cache is reused. The five
// trajectories are independent streams and may run on up to `threads` workers;
// grid points whose estimates refuse to converge surface as NaN instead of
// aborting the grid.
std::vector<double> qfi_trajectory_fd(const ModelSpec& spec, SpaceKind basis, ProbeKind probe,
                                      const std::vector<double>& times, double h, double step,
                                      double chebyshev_tol = 1e-13, int threads = 1);

// One-qubit QFI from the Bloch vector and its field derivative:
// |dV|^2 + (V.dV)^2/(1-|V|^2), or just |dV|^2 on the pure branch
// (1 - |V|^2 < 1e-12).
double local_qubit_qfi(const BlochVector& v, const Eigen::Vector3d& dv);

// Bloch vector of the evolved central qubit at fixed t.
BlochVector bloch_at(const ModelSpec& spec, SpaceKind basis, ProbeKind probe, double t, double h);

// Local (central-qubit) QFI via the Bloch-vector finite-difference pipeline.
QfiPoint local_qfi_fd(const ModelSpec& spec, SpaceKind basis, ProbeKind probe,
                      double t, double h, double step);

// Error-propagation bound for the central sigma_x readout,
// sqrt(Var sigma_x) / |d<sigma_x>/dh|, with simulated moments and the same
// central-difference slope recipe as the QFI pipelines. The point's value is
// the bound itself (an uncertainty, not a QFI).
QfiPoint epf_sigma_x_fd(const ModelSpec& spec, SpaceKind basis, ProbeKind probe,
                        double t, double h, double step);

// Closed form F = 2 alpha0^2 I + beta0^2 I^2 at t = 2*pi/Omega, I = N/2.
double qfi_analytic_t0(double a, double h, int n_ring);

// Closed form at arbitrary t for the stretched-ring probe:
// F(t) = 2 alpha^2 I + beta^2 I^2 + gamma^2 I / 2.
double qfi_analytic_t(double a, double h, int n_ring, double t);

// Closed-form local QFI 16 A^2 N^2 / (A^2 + 4h^2)^2 for the J=0 scheme.
double local_qfi_analytic(double a, double h, int n_ring);

// Central-spin expectation at t0 = pi/Omega for the x-polarized probe:
// <sigma_x> = cos(2N theta)/2, <sigma_y> = sin(2N theta)/2, theta = arctan(2h/A).
struct CentralSpinExpectation {
    double sx = 0.0;
    double sy = 0.0;
};

CentralSpinExpectation sx_expectation_analytic(double a, double h, int n_ring);

// <sigma_0^x(t)> closed form for the no-Zeeman model with the stretched-ring
// probe, from the per-site conditional-evolution product.
double sx_trajectory_analytic(double a, double h, int n_ring, double t);

// sqrt(second_moment - mean^2)/|slope|; returns +infinity when slope = 0.
double error_propagation(double mean, double second_moment, double slope);

// Maximal QFI (E_max - E_min)^2 = (4 alpha^2 + beta^2 + gamma^2) I^2 and the
// probe (|E_max> + |E_min>)/sqrt(2) built by rotating the stretched Dicke
// states with quadrant-correct angles theta = atan2(sqrt(4a^2+g^2), b),
// phi = atan2(2a, g).
struct OptimalProbe {
    double f_max = 0.0;
    double theta = 0.0;
    double phi = 0.0;
    StateVector state;
};

OptimalProbe fmax_and_optimal_probe(const GeneratorCoeffs& coeffs, int n_ring);

}  // namespace censpin
