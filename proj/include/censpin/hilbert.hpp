// State-space descriptors, state vectors and the reduced central-qubit Bloch vector.
#pragma once

#include <complex>
#include <cstdint>
#include <optional>

#include <Eigen/Dense>

#include "censpin/errors.hpp"

namespace censpin {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;

enum class SpaceKind { FullProduct, CollectiveSector };

// Basis descriptor for one central spin-1/2 coupled to N ring/nuclear spin-1/2s.
//
// FullProduct: the full 2^(N+1) product basis. Bit layout of a basis index,
// frozen because golden files depend on it: the central spin (site 0) is the
// most significant bit, ring site 1 the next, ..., ring site N the least
// significant bit. A cleared bit means spin up (+1/2 along z), a set bit spin
// down.
//
// CollectiveSector: central qubit tensor the maximal Dicke sector of the ring,
// dimension 2*(N+1). Basis index = c*(N+1) + k with c = 0 for central up,
// c = 1 for central down, and k = 0..N labelling M_z = I - k, I = N/2. So the
// sector runs central-major, M_z descending from the stretched state.
class HilbertSpace {
public:
    static constexpr int kMaxFullProductRing = 18;
    static constexpr int kMaxCollectiveRing = 512;

    static HilbertSpace full_product(int n_ring);
    static HilbertSpace collective_sector(int n_ring);
    static HilbertSpace make(SpaceKind kind, int n_ring);

    SpaceKind kind() const { return kind_; }
    int n_ring() const { return n_ring_; }
    Eigen::Index dim() const { return dim_; }

    // Total ring spin of the maximal sector, I = N/2.
    double total_ring_spin() const { return 0.5 * n_ring_; }

    // FullProduct: bit position of a site inside a basis index (site 0 = central).
    int site_bit(int site) const;

    // CollectiveSector: M_z value of ladder slot k, and the index for (central, k).
    double mz_of(Eigen::Index k) const { return total_ring_spin() - static_cast<double>(k); }
    Eigen::Index collective_index(int central_down, Eigen::Index k) const {
        return static_cast<Eigen::Index>(central_down) * (n_ring_ + 1) + k;
    }

    friend bool operator==(const HilbertSpace& a, const HilbertSpace& b) {
        return a.kind_ == b.kind_ && a.n_ring_ == b.n_ring_;
    }

private:
    HilbertSpace(SpaceKind kind, int n_ring, Eigen::Index dim)
        : kind_(kind), n_ring_(n_ring), dim_(dim) {}

    SpaceKind kind_;
    int n_ring_;
    Eigen::Index dim_;
};

// Normalized pure state over a HilbertSpace basis. Construction rejects
// amplitudes whose norm strays more than 1e-10 from unity and then rescales,
// so downstream code can rely on ||psi|| = 1 to machine precision.
class StateVector {
public:
    StateVector(HilbertSpace space, Vector amplitudes);

    const HilbertSpace& space() const { return space_; }
    const Vector& amplitudes() const { return amps_; }
    Eigen::Index dim() const { return amps_.size(); }

    Complex overlap(const StateVector& other) const;

private:
    HilbertSpace space_;
    Vector amps_;
};

// Bloch vector of the reduced central qubit, components V_a = 2<sigma_0^a>.
struct BlochVector {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double norm() const;
    Eigen::Vector3d as_eigen() const { return {x, y, z}; }

    // Rejects |V| beyond 1 + 1e-10 (reduced-state positivity).
    static BlochVector checked(double x, double y, double z);
};

enum class ProbeKind { RingXPolarized, RingZStretched, Custom };

// Product probe states. RingXPolarized: central (|up>+|down>)/sqrt(2), every
// ring spin |+x>. RingZStretched: same central state, ring in the stretched
// |I, M_z=I> state (all up). Custom requires explicit amplitudes.
StateVector probe_state(const HilbertSpace& space, ProbeKind kind,
                        std::optional<Vector> custom = std::nullopt);

// Trace out the ring spins and return the central-qubit Bloch vector.
BlochVector reduce_to_central_bloch(const StateVector& psi);

}  // namespace censpin
