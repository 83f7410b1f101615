// Spin-1/2 operator assembly on product and collective bases.
//
// Every single-site operator follows the spin-1/2 convention
// sigma_z = diag(1,-1)/2, so eigenvalues are +-1/2 throughout; Pauli-normalized
// operators are never exposed.
#pragma once

#include <variant>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "censpin/hilbert.hpp"

namespace censpin {

using DenseMatrix = Eigen::MatrixXcd;
using SparseMatrix = Eigen::SparseMatrix<Complex>;

enum class Axis { X, Y, Z, Plus, Minus };
enum class WhichSpins { Ring, Central };

// Dense or sparse operator tied to a HilbertSpace. Ladder operators reuse this
// type with the hermitian flag cleared; everything else asserts Hermiticity at
// build time (max entrywise |O - O^dag| < 1e-14).
class HermitianOperator {
public:
    HermitianOperator(HilbertSpace space, DenseMatrix m, bool hermitian = true);
    HermitianOperator(HilbertSpace space, SparseMatrix m, bool hermitian = true);

    const HilbertSpace& space() const { return space_; }
    Eigen::Index dim() const { return space_.dim(); }
    bool is_hermitian() const { return hermitian_; }
    bool is_dense() const { return std::holds_alternative<DenseMatrix>(storage_); }

    const DenseMatrix& dense() const;    // throws unless dense storage
    const SparseMatrix& sparse() const;  // throws unless sparse storage
    DenseMatrix to_dense() const;        // materializes sparse storage

    Vector apply(const Vector& v) const;

    double hermiticity_residue() const;  // max entrywise |O - O^dag|
    double frobenius_norm() const;
    Complex frobenius_inner(const HermitianOperator& other) const;  // <this, other> = tr(this^dag other)
    Complex trace() const;
    HermitianOperator adjoint() const;

    HermitianOperator& operator+=(const HermitianOperator& rhs);
    HermitianOperator& operator-=(const HermitianOperator& rhs);
    HermitianOperator& operator*=(double s);

    friend HermitianOperator operator+(HermitianOperator a, const HermitianOperator& b) { return a += b; }
    friend HermitianOperator operator-(HermitianOperator a, const HermitianOperator& b) { return a -= b; }
    friend HermitianOperator operator*(double s, HermitianOperator a) { return a *= s; }
    friend HermitianOperator operator*(const HermitianOperator& a, const HermitianOperator& b);

private:
    void check_hermitian() const;

    HilbertSpace space_;
    std::variant<DenseMatrix, SparseMatrix> storage_;
    bool hermitian_;
};

// FullProduct spaces store operators sparsely from this ring size upwards;
// below it dense storage feeds the exact-diagonalization paths directly.
constexpr int kSparseStorageMinRing = 10;

bool use_sparse_storage(const HilbertSpace& space);

// Spin-1/2 operator on one site (site 0 = central spin, 1..N = ring spins),
// identity elsewhere. FullProduct only; axes x, y, z.
HermitianOperator single_site_op(const HilbertSpace& space, int site, Axis axis);

// Collective operators: who=Ring gives I_alpha = sum_i sigma_i^alpha (built
// from the Dicke ladder in CollectiveSector), who=Central the central-spin
// operator. Axes +,- return ladder operators flagged non-Hermitian.
HermitianOperator collective_op(const HilbertSpace& space, Axis axis, WhichSpins who);

// Identity on the space, stored to match the space's storage policy.
HermitianOperator identity_op(const HilbertSpace& space);

// <psi|O|psi>. Imaginary residue above 1e-9 raises ConsistencyError; below
// that it is discarded.
double expectation(const HermitianOperator& op, const StateVector& psi);

}  // namespace censpin
