#include "censpin/models.hpp"

#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <utility>

namespace censpin {

namespace {

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) {
        throw DomainError(std::string(name) + " must be finite");
    }
}

// A Hermitian combination assembled from non-Hermitian pieces (ladder products)
// needs its flag restored; the constructor re-checks the residue.
HermitianOperator rewrap_hermitian(const HermitianOperator& op) {
    if (op.is_dense()) {
        return HermitianOperator(op.space(), op.dense(), true);
    }
    return HermitianOperator(op.space(), op.sparse(), true);
}

}  // namespace

ModelSpec ModelSpec::ising_ring_central(int n_ring, double j, double h, double a) {
    ModelSpec spec;
    spec.variant = ModelVariant::IsingRingCentral;
    spec.n_ring = n_ring;
    spec.ising_j = j;
    spec.field_h = h;
    spec.coupling_a = a;
    spec.validate();
    return spec;
}

ModelSpec ModelSpec::collective_no_zeeman(int n_ring, double h, double a) {
    ModelSpec spec;
    spec.variant = ModelVariant::CollectiveNoZeeman;
    spec.n_ring = n_ring;
    spec.field_h = h;
    spec.coupling_a = a;
    spec.validate();
    return spec;
}

ModelSpec ModelSpec::zzxx(int n_ring, double h, double a) {
    ModelSpec spec;
    spec.variant = ModelVariant::ZZXX;
    spec.n_ring = n_ring;
    spec.field_h = h;
    spec.coupling_a = a;
    spec.validate();
    return spec;
}

ModelSpec ModelSpec::xxz_collective(int n_ring, double h, double a, double delta,
                                    FieldAxis axis) {
    ModelSpec spec;
    spec.variant = ModelVariant::XXZCollective;
    spec.n_ring = n_ring;
    spec.field_h = h;
    spec.coupling_a = a;
    spec.anisotropy_delta = delta;
    spec.field_axis = axis;
    spec.validate();
    return spec;
}

ModelSpec ModelSpec::inhomogeneous_zz(int n_ring, double h, std::vector<double> couplings) {
    ModelSpec spec;
    spec.variant = ModelVariant::InhomogeneousZZ;
    spec.n_ring = n_ring;
    spec.field_h = h;
    spec.couplings = std::move(couplings);
    spec.validate();
    return spec;
}

ModelSpec ModelSpec::with_field(double h) const {
    ModelSpec spec = *this;
    spec.field_h = h;
    spec.validate();
    return spec;
}

bool ModelSpec::collective_compatible() const {
    switch (variant) {
        case ModelVariant::CollectiveNoZeeman:
        case ModelVariant::ZZXX:
        case ModelVariant::XXZCollective:
            return true;
        case ModelVariant::IsingRingCentral:
        case ModelVariant::InhomogeneousZZ:
            return false;
    }
    throw DomainError("unknown model variant");
}

double ModelSpec::effective_coupling() const {
    if (variant == ModelVariant::InhomogeneousZZ) {
        if (couplings.empty()) return 0.0;
        return std::accumulate(couplings.begin(), couplings.end(), 0.0) /
               static_cast<double>(couplings.size());
    }
    return coupling_a;
}

std::string ModelSpec::variant_name() const {
    switch (variant) {
        case ModelVariant::IsingRingCentral: return "ising_ring_central";
        case ModelVariant::CollectiveNoZeeman: return "collective_no_zeeman";
        case ModelVariant::ZZXX: return "zzxx";
        case ModelVariant::XXZCollective: return "xxz_collective";
        case ModelVariant::InhomogeneousZZ: return "inhomogeneous_zz";
    }
    throw DomainError("unknown model variant");
}

void ModelSpec::validate() const {
    if (n_ring < 1) {
        throw DomainError("model needs a positive ring size, got " + std::to_string(n_ring));
    }
    require_finite(field_h, "field h");
    require_finite(coupling_a, "coupling A");
    require_finite(ising_j, "Ising J");
    require_finite(anisotropy_delta, "anisotropy Delta");
    if (variant == ModelVariant::IsingRingCentral && ising_j != 0.0 && n_ring < 2) {
        throw DomainError("a ring bond needs at least two ring spins; N=1 with J != 0 "
                          "would self-bond");
    }
    if (variant == ModelVariant::InhomogeneousZZ) {
        if (static_cast<int>(couplings.size()) != n_ring) {
            throw DomainError("coupling list length " + std::to_string(couplings.size()) +
                              " does not match ring size " + std::to_string(n_ring));
        }
        for (double a_k : couplings) require_finite(a_k, "coupling A_k");
    } else if (!couplings.empty()) {
        throw DomainError("per-site couplings are only meaningful for the inhomogeneous model");
    }
    if (field_axis == FieldAxis::Z && variant != ModelVariant::XXZCollective) {
        throw DomainError("the z field axis exists only for the XXZ variant");
    }
}

std::vector<double> sample_couplings(const CouplingProfile& profile, int n, double mean) {
    if (n < 1) {
        throw DomainError("coupling profile needs a positive ring size");
    }
    if (!(mean > 0.0)) {
        throw DomainError("coupling profile mean must be positive");
    }

    std::vector<double> values(n, 1.0);
    switch (profile.kind) {
        case CouplingProfile::Kind::Constant:
            break;
        case CouplingProfile::Kind::UniformWindow: {
            if (profile.spread < 0.0 || profile.spread >= 1.0) {
                throw DomainError("uniform window spread must lie in [0, 1) to keep "
                                  "couplings positive");
            }
            // Raw engine output is mapped to [-1, 1) by hand; std distributions
            // are implementation-defined and would break byte-stable goldens.
            std::mt19937_64 rng(profile.seed);
            for (double& v : values) {
                const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
                v = 1.0 + profile.spread * (2.0 * u - 1.0);
            }
            break;
        }
        case CouplingProfile::Kind::GaussianEnvelope: {
            if (!(profile.width > 0.0)) {
                throw DomainError("gaussian envelope width must be positive");
            }
            // Site-index envelope mimicking an electron density centered on the
            // ring: A_k ~ exp(-(k - center)^2 / (2 sigma^2)), sigma = width * N.
            const double center = 0.5 * (n + 1);
            const double sigma = profile.width * n;
            for (int k = 1; k <= n; ++k) {
                values[k - 1] = std::exp(-0.5 * std::pow((k - center) / sigma, 2));
            }
            break;
        }
    }

    const double sum = std::accumulate(values.begin(), values.end(), 0.0);
    const double scale = mean * n / sum;
    for (double& v : values) v *= scale;
    for (double v : values) {
        if (!(v > 0.0)) {
            throw DomainError("coupling profile produced a non-positive coupling");
        }
    }
    return values;
}

HermitianOperator build_hamiltonian(const ModelSpec& spec, const HilbertSpace& space) {
    spec.validate();
    if (space.n_ring() != spec.n_ring) {
        throw DomainError("basis ring size " + std::to_string(space.n_ring()) +
                          " does not match model ring size " + std::to_string(spec.n_ring));
    }
    if (space.kind() == SpaceKind::CollectiveSector && !spec.collective_compatible()) {
        throw UnsupportedBasisError(spec.variant_name() +
                                    " is not expressible with collective ring operators");
    }

    const double h = spec.field_h;
    const double a = spec.coupling_a;

    switch (spec.variant) {
        case ModelVariant::IsingRingCentral: {
            const int n = spec.n_ring;
            HermitianOperator ham = -h * collective_op(space, Axis::Y, WhichSpins::Ring);
            HermitianOperator coupling =
                collective_op(space, Axis::Z, WhichSpins::Central) *
                collective_op(space, Axis::Z, WhichSpins::Ring);
            ham += a * rewrap_hermitian(coupling);
            if (spec.ising_j != 0.0) {
                for (int site = 1; site <= n; ++site) {
                    const int next = site == n ? 1 : site + 1;
                    HermitianOperator bond = single_site_op(space, site, Axis::X) *
                                             single_site_op(space, next, Axis::X);
                    ham += -spec.ising_j * rewrap_hermitian(bond);
                }
            }
            return rewrap_hermitian(ham);
        }
        case ModelVariant::CollectiveNoZeeman: {
            HermitianOperator ham = -h * collective_op(space, Axis::Y, WhichSpins::Ring);
            ham += a * rewrap_hermitian(collective_op(space, Axis::Z, WhichSpins::Central) *
                                        collective_op(space, Axis::Z, WhichSpins::Ring));
            return rewrap_hermitian(ham);
        }
        case ModelVariant::ZZXX: {
            HermitianOperator ham = -h * (collective_op(space, Axis::Y, WhichSpins::Central) +
                                          collective_op(space, Axis::Y, WhichSpins::Ring));
            ham += a * rewrap_hermitian(collective_op(space, Axis::Z, WhichSpins::Central) *
                                        collective_op(space, Axis::Z, WhichSpins::Ring));
            return rewrap_hermitian(ham);
        }
        case ModelVariant::XXZCollective: {
            const Axis field_axis = spec.field_axis == FieldAxis::Y ? Axis::Y : Axis::Z;
            HermitianOperator ham =
                -h * (collective_op(space, field_axis, WhichSpins::Central) +
                      collective_op(space, field_axis, WhichSpins::Ring));
            ham += a * rewrap_hermitian(collective_op(space, Axis::Z, WhichSpins::Central) *
                                        collective_op(space, Axis::Z, WhichSpins::Ring));
            if (spec.anisotropy_delta != 0.0) {
                // (Delta/2)(S+ I- + S- I+), the transverse hyperfine part.
                HermitianOperator flip_flop =
                    collective_op(space, Axis::Plus, WhichSpins::Central) *
                        collective_op(space, Axis::Minus, WhichSpins::Ring) +
                    collective_op(space, Axis::Minus, WhichSpins::Central) *
                        collective_op(space, Axis::Plus, WhichSpins::Ring);
                ham += (0.5 * spec.anisotropy_delta) * rewrap_hermitian(flip_flop);
            }
            return rewrap_hermitian(ham);
        }
        case ModelVariant::InhomogeneousZZ: {
            HermitianOperator ham = -h * collective_op(space, Axis::Y, WhichSpins::Ring);
            const HermitianOperator central_z = single_site_op(space, 0, Axis::Z);
            for (int site = 1; site <= spec.n_ring; ++site) {
                HermitianOperator term = central_z * single_site_op(space, site, Axis::Z);
                ham += spec.couplings[site - 1] * rewrap_hermitian(term);
            }
            return rewrap_hermitian(ham);
        }
    }
    throw DomainError("unknown model variant");
}

HermitianOperator field_derivative(const ModelSpec& spec, const HilbertSpace& space) {
    spec.validate();
    if (space.n_ring() != spec.n_ring) {
        throw DomainError("basis ring size does not match model ring size");
    }
    if (space.kind() == SpaceKind::CollectiveSector && !spec.collective_compatible()) {
        throw UnsupportedBasisError(spec.variant_name() +
                                    " is not expressible with collective ring operators");
    }

    switch (spec.variant) {
        case ModelVariant::IsingRingCentral:
        case ModelVariant::CollectiveNoZeeman:
        case ModelVariant::InhomogeneousZZ:
            return -1.0 * collective_op(space, Axis::Y, WhichSpins::Ring);
        case ModelVariant::ZZXX:
            return -1.0 * (collective_op(space, Axis::Y, WhichSpins::Central) +
                           collective_op(space, Axis::Y, WhichSpins::Ring));
        case ModelVariant::XXZCollective: {
            const Axis field_axis = spec.field_axis == FieldAxis::Y ? Axis::Y : Axis::Z;
            return -1.0 * (collective_op(space, field_axis, WhichSpins::Central) +
                           collective_op(space, field_axis, WhichSpins::Ring));
        }
    }
    throw DomainError("unknown model variant");
}

}  // namespace censpin
