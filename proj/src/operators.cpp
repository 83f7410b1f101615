#include "censpin/operators.hpp"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace censpin {

namespace {

using Triplet = Eigen::Triplet<Complex>;

constexpr double kHermitianTol = 1e-14;

// Largest dimension we allow an implicit sparse-to-dense materialization for;
// beyond this a densified operator would not fit the dense solver paths anyway.
constexpr Eigen::Index kDensifyMaxDim = 8192;

SparseMatrix from_triplets(Eigen::Index dim, const std::vector<Triplet>& trips) {
    SparseMatrix m(dim, dim);
    m.setFromTriplets(trips.begin(), trips.end());
    m.makeCompressed();
    return m;
}

}  // namespace

HermitianOperator::HermitianOperator(HilbertSpace space, DenseMatrix m, bool hermitian)
    : space_(space), storage_(std::move(m)), hermitian_(hermitian) {
    const auto& mat = std::get<DenseMatrix>(storage_);
    if (mat.rows() != space_.dim() || mat.cols() != space_.dim()) {
        throw DomainError("operator shape does not match basis dimension " +
                          std::to_string(space_.dim()));
    }
    if (hermitian_) check_hermitian();
}

HermitianOperator::HermitianOperator(HilbertSpace space, SparseMatrix m, bool hermitian)
    : space_(space), storage_(std::move(m)), hermitian_(hermitian) {
    auto& mat = std::get<SparseMatrix>(storage_);
    if (mat.rows() != space_.dim() || mat.cols() != space_.dim()) {
        throw DomainError("operator shape does not match basis dimension " +
                          std::to_string(space_.dim()));
    }
    mat.makeCompressed();
    if (hermitian_) check_hermitian();
}

void HermitianOperator::check_hermitian() const {
    if (hermiticity_residue() > kHermitianTol) {
        throw ConsistencyError("operator fails the Hermiticity check, residue " +
                               std::to_string(hermiticity_residue()));
    }
}

const DenseMatrix& HermitianOperator::dense() const {
    if (!is_dense()) throw ConsistencyError("operator is stored sparse, not dense");
    return std::get<DenseMatrix>(storage_);
}

const SparseMatrix& HermitianOperator::sparse() const {
    if (is_dense()) throw ConsistencyError("operator is stored dense, not sparse");
    return std::get<SparseMatrix>(storage_);
}

DenseMatrix HermitianOperator::to_dense() const {
    if (is_dense()) return dense();
    if (dim() > kDensifyMaxDim) {
        throw CapacityError("refusing to densify a sparse operator of dimension " +
                            std::to_string(dim()));
    }
    return DenseMatrix(sparse());
}

Vector HermitianOperator::apply(const Vector& v) const {
    if (v.size() != dim()) {
        throw DomainError("vector length does not match operator dimension");
    }
    if (is_dense()) return dense() * v;
    return sparse() * v;
}

double HermitianOperator::hermiticity_residue() const {
    if (is_dense()) {
        const DenseMatrix adj = dense().adjoint();
        return (dense() - adj).cwiseAbs().maxCoeff();
    }
    const SparseMatrix adj = sparse().adjoint();
    SparseMatrix diff = sparse() - adj;
    double residue = 0.0;
    for (int k = 0; k < diff.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(diff, k); it; ++it) {
            residue = std::max(residue, std::abs(it.value()));
        }
    }
    return residue;
}

double HermitianOperator::frobenius_norm() const {
    if (is_dense()) return dense().norm();
    return sparse().norm();
}

Complex HermitianOperator::frobenius_inner(const HermitianOperator& other) const {
    if (!(space_ == other.space_)) {
        throw DomainError("Frobenius inner product across different bases");
    }
    // tr(A^dag B) = sum_ij conj(A_ij) B_ij; only positions where the sparse
    // factor is nonzero can contribute, so iterating its entries is exact.
    if (is_dense() && other.is_dense()) {
        return dense().conjugate().cwiseProduct(other.dense()).sum();
    }
    Complex acc(0.0, 0.0);
    if (!is_dense()) {
        const SparseMatrix& a = sparse();
        for (int k = 0; k < a.outerSize(); ++k) {
            for (SparseMatrix::InnerIterator it(a, k); it; ++it) {
                const Complex b = other.is_dense() ? other.dense()(it.row(), it.col())
                                                   : other.sparse().coeff(it.row(), it.col());
                acc += std::conj(it.value()) * b;
            }
        }
        return acc;
    }
    const SparseMatrix& b = other.sparse();
    for (int k = 0; k < b.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(b, k); it; ++it) {
            acc += std::conj(dense()(it.row(), it.col())) * it.value();
        }
    }
    return acc;
}

Complex HermitianOperator::trace() const {
    if (is_dense()) return dense().trace();
    Complex acc(0.0, 0.0);
    const SparseMatrix& m = sparse();
    for (int k = 0; k < m.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
            if (it.row() == it.col()) acc += it.value();
        }
    }
    return acc;
}

HermitianOperator HermitianOperator::adjoint() const {
    if (is_dense()) {
        return HermitianOperator(space_, DenseMatrix(dense().adjoint()), hermitian_);
    }
    return HermitianOperator(space_, SparseMatrix(sparse().adjoint()), hermitian_);
}

HermitianOperator& HermitianOperator::operator+=(const HermitianOperator& rhs) {
    if (!(space_ == rhs.space_)) {
        throw DomainError("operator sum across different bases");
    }
    hermitian_ = hermitian_ && rhs.hermitian_;
    if (is_dense() && rhs.is_dense()) {
        std::get<DenseMatrix>(storage_) += rhs.dense();
    } else if (!is_dense() && !rhs.is_dense()) {
        SparseMatrix sum = sparse() + rhs.sparse();
        sum.makeCompressed();
        storage_ = std::move(sum);
    } else {
        if (dim() > kDensifyMaxDim) {
            throw ConsistencyError("mixed dense/sparse operator sum at a dimension "
                                   "too large to densify");
        }
        storage_ = DenseMatrix(to_dense() + rhs.to_dense());
    }
    return *this;
}

HermitianOperator& HermitianOperator::operator-=(const HermitianOperator& rhs) {
    HermitianOperator negated = rhs;
    negated *= -1.0;
    return *this += negated;
}

HermitianOperator& HermitianOperator::operator*=(double s) {
    if (is_dense()) {
        std::get<DenseMatrix>(storage_) *= s;
    } else {
        std::get<SparseMatrix>(storage_) *= s;
    }
    return *this;
}

HermitianOperator operator*(const HermitianOperator& a, const HermitianOperator& b) {
    if (!(a.space() == b.space())) {
        throw DomainError("operator product across different bases");
    }
    // A product of Hermitian factors is not Hermitian unless they commute, so
    // the result is always flagged as a plain (ladder-like) operator.
    if (a.is_dense() && b.is_dense()) {
        return HermitianOperator(a.space(), DenseMatrix(a.dense() * b.dense()), false);
    }
    if (!a.is_dense() && !b.is_dense()) {
        SparseMatrix prod = a.sparse() * b.sparse();
        prod.makeCompressed();
        return HermitianOperator(a.space(), std::move(prod), false);
    }
    if (!a.is_dense()) {
        return HermitianOperator(a.space(), DenseMatrix(a.sparse() * b.dense()), false);
    }
    return HermitianOperator(a.space(), DenseMatrix(a.dense() * b.sparse()), false);
}

bool use_sparse_storage(const HilbertSpace& space) {
    return space.kind() == SpaceKind::FullProduct && space.n_ring() >= kSparseStorageMinRing;
}

namespace {

// Assembles an operator from its nonzero entries, honoring the storage policy.
HermitianOperator assemble(const HilbertSpace& space, const std::vector<Triplet>& trips,
                           bool hermitian) {
    if (use_sparse_storage(space)) {
        return HermitianOperator(space, from_triplets(space.dim(), trips), hermitian);
    }
    DenseMatrix m = DenseMatrix::Zero(space.dim(), space.dim());
    for (const auto& t : trips) m(t.row(), t.col()) += t.value();
    return HermitianOperator(space, std::move(m), hermitian);
}

// Appends the entries of a spin-1/2 operator on one product-basis site.
void append_site_entries(const HilbertSpace& space, int site, Axis axis,
                         std::vector<Triplet>* trips) {
    const Eigen::Index mask = static_cast<Eigen::Index>(1) << space.site_bit(site);
    const Complex half(0.5, 0.0);
    const Complex i_half(0.0, 0.5);

    for (Eigen::Index idx = 0; idx < space.dim(); ++idx) {
        const bool down = (idx & mask) != 0;
        switch (axis) {
            case Axis::Z:
                trips->emplace_back(idx, idx, down ? -half : half);
                break;
            case Axis::X:
                trips->emplace_back(idx ^ mask, idx, half);
                break;
            case Axis::Y:
                // <down|s_y|up> = i/2, <up|s_y|down> = -i/2.
                trips->emplace_back(idx ^ mask, idx, down ? -i_half : i_half);
                break;
            case Axis::Plus:
                if (down) trips->emplace_back(idx & ~mask, idx, Complex(1.0, 0.0));
                break;
            case Axis::Minus:
                if (!down) trips->emplace_back(idx | mask, idx, Complex(1.0, 0.0));
                break;
        }
    }
}

HermitianOperator collective_op_full_product(const HilbertSpace& space, Axis axis,
                                             WhichSpins who) {
    std::vector<Triplet> trips;
    const bool ladder = axis == Axis::Plus || axis == Axis::Minus;
    if (who == WhichSpins::Central) {
        append_site_entries(space, 0, axis, &trips);
    } else {
        for (int site = 1; site <= space.n_ring(); ++site) {
            append_site_entries(space, site, axis, &trips);
        }
    }
    return assemble(space, trips, !ladder);
}

HermitianOperator collective_op_dicke(const HilbertSpace& space, Axis axis, WhichSpins who) {
    const int n = space.n_ring();
    const double spin = space.total_ring_spin();
    const bool ladder = axis == Axis::Plus || axis == Axis::Minus;
    DenseMatrix m = DenseMatrix::Zero(space.dim(), space.dim());

    if (who == WhichSpins::Central) {
        for (Eigen::Index k = 0; k <= n; ++k) {
            const Eigen::Index up = space.collective_index(0, k);
            const Eigen::Index dn = space.collective_index(1, k);
            switch (axis) {
                case Axis::Z:
                    m(up, up) = 0.5;
                    m(dn, dn) = -0.5;
                    break;
                case Axis::X:
                    m(up, dn) = 0.5;
                    m(dn, up) = 0.5;
                    break;
                case Axis::Y:
                    m(up, dn) = Complex(0.0, -0.5);
                    m(dn, up) = Complex(0.0, 0.5);
                    break;
                case Axis::Plus:
                    m(up, dn) = 1.0;
                    break;
                case Axis::Minus:
                    m(dn, up) = 1.0;
                    break;
            }
        }
        return HermitianOperator(space, std::move(m), !ladder);
    }

    // Ring operators act identically on both central blocks. Slot k carries
    // M_z = I - k; the ladder matrix elements are sqrt(I(I+1) - M(M+-1)).
    for (int c = 0; c < 2; ++c) {
        for (Eigen::Index k = 0; k <= n; ++k) {
            const Eigen::Index col = space.collective_index(c, k);
            const double mz = space.mz_of(k);
            const double raise = k > 0 ? std::sqrt(spin * (spin + 1.0) - mz * (mz + 1.0)) : 0.0;
            const double lower = k < n ? std::sqrt(spin * (spin + 1.0) - mz * (mz - 1.0)) : 0.0;
            switch (axis) {
                case Axis::Z:
                    m(col, col) = mz;
                    break;
                case Axis::Plus:
                    if (k > 0) m(space.collective_index(c, k - 1), col) = raise;
                    break;
                case Axis::Minus:
                    if (k < n) m(space.collective_index(c, k + 1), col) = lower;
                    break;
                case Axis::X:
                    if (k > 0) m(space.collective_index(c, k - 1), col) = 0.5 * raise;
                    if (k < n) m(space.collective_index(c, k + 1), col) = 0.5 * lower;
                    break;
                case Axis::Y:
                    // I_y = (I_+ - I_-)/(2i).
                    if (k > 0) m(space.collective_index(c, k - 1), col) = Complex(0.0, -0.5) * raise;
                    if (k < n) m(space.collective_index(c, k + 1), col) = Complex(0.0, 0.5) * lower;
                    break;
            }
        }
    }
    return HermitianOperator(space, std::move(m), !ladder);
}

}  // namespace

HermitianOperator single_site_op(const HilbertSpace& space, int site, Axis axis) {
    if (space.kind() != SpaceKind::FullProduct) {
        throw UnsupportedBasisError("single-site operators exist only on the full product basis");
    }
    if (axis == Axis::Plus || axis == Axis::Minus) {
        throw DomainError("single-site ladder operators are not exposed; use x, y or z");
    }
    std::vector<Triplet> trips;
    append_site_entries(space, site, axis, &trips);
    return assemble(space, trips, true);
}

HermitianOperator collective_op(const HilbertSpace& space, Axis axis, WhichSpins who) {
    if (space.kind() == SpaceKind::FullProduct) {
        return collective_op_full_product(space, axis, who);
    }
    return collective_op_dicke(space, axis, who);
}

HermitianOperator identity_op(const HilbertSpace& space) {
    if (use_sparse_storage(space)) {
        SparseMatrix m(space.dim(), space.dim());
        m.setIdentity();
        return HermitianOperator(space, std::move(m), true);
    }
    return HermitianOperator(space, DenseMatrix(DenseMatrix::Identity(space.dim(), space.dim())),
                             true);
}

double expectation(const HermitianOperator& op, const StateVector& psi) {
    if (!(op.space() == psi.space())) {
        throw DomainError("expectation value across different bases");
    }
    if (!op.is_hermitian()) {
        throw DomainError("expectation value of a non-Hermitian (ladder) operator");
    }
    const Complex value = psi.amplitudes().dot(op.apply(psi.amplitudes()));
    if (std::abs(value.imag()) > 1e-9) {
        throw ConsistencyError("expectation value has imaginary residue " +
                               std::to_string(value.imag()));
    }
    return value.real();
}

}  // namespace censpin
