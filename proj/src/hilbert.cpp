#include "censpin/hilbert.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace censpin {

namespace {

void check_ring_size(int n_ring, int cap, const char* kind_name) {
    if (n_ring < 1) {
        throw DomainError("ring size must be positive, got " + std::to_string(n_ring));
    }
    if (n_ring > cap) {
        throw CapacityError(std::string(kind_name) + " basis is capped at N = " +
                            std::to_string(cap) + ", got N = " + std::to_string(n_ring));
    }
}

}  // namespace

HilbertSpace HilbertSpace::full_product(int n_ring) {
    check_ring_size(n_ring, kMaxFullProductRing, "full product");
    return HilbertSpace(SpaceKind::FullProduct, n_ring,
                        static_cast<Eigen::Index>(1) << (n_ring + 1));
}

HilbertSpace HilbertSpace::collective_sector(int n_ring) {
    check_ring_size(n_ring, kMaxCollectiveRing, "collective sector");
    return HilbertSpace(SpaceKind::CollectiveSector, n_ring,
                        static_cast<Eigen::Index>(2) * (n_ring + 1));
}

HilbertSpace HilbertSpace::make(SpaceKind kind, int n_ring) {
    return kind == SpaceKind::FullProduct ? full_product(n_ring) : collective_sector(n_ring);
}

int HilbertSpace::site_bit(int site) const {
    if (kind_ != SpaceKind::FullProduct) {
        throw UnsupportedBasisError("site bits exist only on the full product basis");
    }
    if (site < 0 || site > n_ring_) {
        throw DomainError("site " + std::to_string(site) + " out of range [0, " +
                          std::to_string(n_ring_) + "]");
    }
    return n_ring_ - site;
}

StateVector::StateVector(HilbertSpace space, Vector amplitudes)
    : space_(space), amps_(std::move(amplitudes)) {
    if (amps_.size() != space_.dim()) {
        throw DomainError("amplitude count " + std::to_string(amps_.size()) +
                          " does not match basis dimension " + std::to_string(space_.dim()));
    }
    const double norm = amps_.norm();
    if (std::abs(norm - 1.0) > 1e-10) {
        throw DomainError("state vector norm " + std::to_string(norm) +
                          " strays too far from 1 to be a rounding artifact");
    }
    amps_ /= norm;
}

Complex StateVector::overlap(const StateVector& other) const {
    if (!(space_ == other.space_)) {
        throw DomainError("overlap between states on different bases");
    }
    return amps_.dot(other.amps_);
}

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

BlochVector BlochVector::checked(double x, double y, double z) {
    BlochVector v{x, y, z};
    if (v.norm() > 1.0 + 1e-10) {
        throw DomainError("Bloch vector length " + std::to_string(v.norm()) +
                          " violates reduced-state positivity");
    }
    return v;
}

StateVector probe_state(const HilbertSpace& space, ProbeKind kind,
                        std::optional<Vector> custom) {
    if (kind == ProbeKind::Custom) {
        if (!custom) {
            throw DomainError("custom probe requires explicit amplitudes");
        }
        return StateVector(space, std::move(*custom));
    }
    if (custom) {
        throw DomainError("explicit amplitudes are only accepted with the custom probe kind");
    }

    const int n = space.n_ring();
    Vector amps = Vector::Zero(space.dim());
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

    if (space.kind() == SpaceKind::FullProduct) {
        if (kind == ProbeKind::RingXPolarized) {
            // Tensor power of (1,1)/sqrt(2) on every site, central included:
            // uniform positive amplitudes.
            amps.setConstant(Complex(1.0 / std::sqrt(static_cast<double>(space.dim())), 0.0));
        } else {
            // Central (|up> + |down>)/sqrt(2), ring all up (all ring bits clear).
            const Eigen::Index central_down = static_cast<Eigen::Index>(1) << space.site_bit(0);
            amps(0) = inv_sqrt2;
            amps(central_down) = inv_sqrt2;
        }
        return StateVector(space, std::move(amps));
    }

    if (kind == ProbeKind::RingZStretched) {
        amps(space.collective_index(0, 0)) = inv_sqrt2;
        amps(space.collective_index(1, 0)) = inv_sqrt2;
    } else {
        // |+x>^N expanded over Dicke states: the component with k spins down
        // carries amplitude sqrt(C(N,k)) / 2^(N/2); log-gamma keeps the
        // binomials finite at large N.
        const double log2 = std::log(2.0);
        for (Eigen::Index k = 0; k <= n; ++k) {
            const double log_amp = 0.5 * (std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                                          std::lgamma(n - k + 1.0)) -
                                   0.5 * n * log2;
            const double ring_amp = std::exp(log_amp);
            amps(space.collective_index(0, k)) = inv_sqrt2 * ring_amp;
            amps(space.collective_index(1, k)) = inv_sqrt2 * ring_amp;
        }
    }
    return StateVector(space, std::move(amps));
}

BlochVector reduce_to_central_bloch(const StateVector& psi) {
    // Both bases enumerate the central spin as the leading index, so the first
    // half of the amplitudes is the central-up block and the second half the
    // central-down block.
    const Eigen::Index half = psi.dim() / 2;
    const auto up = psi.amplitudes().head(half);
    const auto down = psi.amplitudes().tail(half);

    const double p_up = up.squaredNorm();
    const double p_down = down.squaredNorm();
    const Complex rho_ud = down.dot(up);  // sum_r up_r * conj(down_r)

    return BlochVector::checked(2.0 * rho_ud.real(), -2.0 * rho_ud.imag(), p_up - p_down);
}

}  // namespace censpin
