#pragma once

#include <vector>

#include "stsd/types.hpp"

namespace stsd {

/// Column-count x column-count complex matrices in row-major order.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(int rows, int cols, cplx fill = cplx{})
        : rows_(rows), cols_(cols), v_(static_cast<size_t>(rows) * cols, fill) {
        if (rows < 1 || cols < 1)
            throw std::invalid_argument("ComplexMatrix: dimensions must be >= 1");
    }

    static ComplexMatrix identity(int n) {
        ComplexMatrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    cplx& operator()(int r, int c) { return v_[static_cast<size_t>(r) * cols_ + c]; }
    const cplx& operator()(int r, int c) const { return v_[static_cast<size_t>(r) * cols_ + c]; }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<cplx> v_;
};

using ComplexVector = std::vector<cplx>;

struct QrResult {
    ComplexMatrix q;  // rows x cols, orthonormal columns
    ComplexMatrix r;  // cols x cols, upper triangular, positive real diagonal
};

struct SortedQrResult {
    ComplexMatrix q;
    ComplexMatrix r;
    std::vector<int> perm;  // perm[k] = original column chosen at step k
};

/// QR factorization by modified Gram-Schmidt with a re-orthogonalization
/// pass. Requires rows >= cols and numerically independent columns; throws
/// RankDeficiencyError when a residual column norm falls below 1e-12.
QrResult qr_decompose(const ComplexMatrix& h);

/// Column-sorted QR: at every step the remaining column with the smallest
/// residual norm is orthogonalized next (ties go to the lowest original
/// index). Satisfies H * P = Q * R with P the column permutation.
SortedQrResult sorted_qr(const ComplexMatrix& h);

/// ytilde = Q^H y.
ComplexVector matched_filter(const ComplexMatrix& q, const ComplexVector& y);

cplx mat_vec_entry(const ComplexMatrix& h, const ComplexVector& s, int row);
ComplexVector mat_vec(const ComplexMatrix& h, const ComplexVector& s);

}  // namespace stsd
