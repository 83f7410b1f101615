// Central-spin Hamiltonian variants, their field derivatives and coupling profiles.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "censpin/operators.hpp"

namespace censpin {

enum class ModelVariant {
    IsingRingCentral,   // -J sum sx_i sx_{i+1} - h I_y + A S_z I_z  (periodic ring)
    CollectiveNoZeeman,  // -h I_y + A S_z I_z
    ZZXX,                // -h (S_y + I_y) + A S_z I_z
    XXZCollective,       // -h (S_a + I_a) + (Delta/2)(S+ I- + S- I+) + A S_z I_z
    InhomogeneousZZ,     // -h I_y + sum_k A_k sz_0 sz_k
};

// Field axis for the XXZ variant; z exists only for the no-enhancement
// demonstration, every other variant fixes -h along y.
enum class FieldAxis { Y, Z };

struct ModelSpec {
    ModelVariant variant = ModelVariant::CollectiveNoZeeman;
    int n_ring = 1;
    double ising_j = 0.0;
    double field_h = 0.0;
    double coupling_a = 0.0;
    double anisotropy_delta = 0.0;
    FieldAxis field_axis = FieldAxis::Y;
    std::vector<double> couplings;  // InhomogeneousZZ only, length N

    static ModelSpec ising_ring_central(int n_ring, double j, double h, double a);
    static ModelSpec collective_no_zeeman(int n_ring, double h, double a);
    static ModelSpec zzxx(int n_ring, double h, double a);
    static ModelSpec xxz_collective(int n_ring, double h, double a, double delta,
                                    FieldAxis axis = FieldAxis::Y);
    static ModelSpec inhomogeneous_zz(int n_ring, double h, std::vector<double> couplings);

    // Same model with the estimated field replaced (used by finite differences).
    ModelSpec with_field(double h) const;

    // Variants expressible with collective ring operators only.
    bool collective_compatible() const;

    // Hyperfine scale entering Omega: A for homogeneous variants, mean(A_k)
    // for the inhomogeneous one.
    double effective_coupling() const;

    std::string variant_name() const;

    void validate() const;
};

// Deterministic coupling-strength profiles for the inhomogeneous model.
// gaussian_envelope mimics an electron-density envelope over the site index;
// width is a fraction of N. uniform_window draws A_k uniformly from
// mean*[1-spread, 1+spread]; spread must stay below 1 to keep couplings
// positive. All profiles are rescaled so the arithmetic mean is exact.
struct CouplingProfile {
    enum class Kind { Constant, UniformWindow, GaussianEnvelope };

    Kind kind = Kind::Constant;
    double spread = 0.0;  // UniformWindow
    double width = 0.5;   // GaussianEnvelope, fraction of N
    std::uint64_t seed = 0;
};

std::vector<double> sample_couplings(const CouplingProfile& profile, int n, double mean);

// Assemble the Hamiltonian of `spec` on `space`. Collective bases are allowed
// only for variants built purely from collective operators; IsingRingCentral
// and InhomogeneousZZ require the full product basis.
HermitianOperator build_hamiltonian(const ModelSpec& spec, const HilbertSpace& space);

// H1 = dH/dh, independent of h: -I_y for ring-only Zeeman variants,
// -(S_a + I_a) when the central Zeeman term is present.
HermitianOperator field_derivative(const ModelSpec& spec, const HilbertSpace& space);

}  // namespace censpin
