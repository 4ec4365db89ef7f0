#include "stsd/numerics.hpp"

#include <cmath>
#include <numeric>

namespace stsd {

namespace {

constexpr double kRankTol = 1e-12;

cplx col_dot(const ComplexMatrix& q, int qcol, const std::vector<cplx>& v) {
    cplx acc = 0.0;
    for (int r = 0; r < q.rows(); ++r) acc += std::conj(q(r, qcol)) * v[r];
    return acc;
}

double col_norm(const std::vector<cplx>& v) {
    double acc = 0.0;
    for (const cplx& x : v) acc += std::norm(x);
    return std::sqrt(acc);
}

}  // namespace

QrResult qr_decompose(const ComplexMatrix& h) {
    const int rows = h.rows(), cols = h.cols();
    if (rows < cols) throw DimensionError("qr_decompose: rows must be >= cols");

    QrResult out{ComplexMatrix(rows, cols), ComplexMatrix(cols, cols)};

    std::vector<cplx> v(rows);
    for (int k = 0; k < cols; ++k) {
        for (int r = 0; r < rows; ++r) v[r] = h(r, k);

        for (int i = 0; i < k; ++i) {
            cplx rik = col_dot(out.q, i, v);
            for (int r = 0; r < rows; ++r) v[r] -= rik * out.q(r, i);
            out.r(i, k) = rik;
        }
        // second orthogonalization pass picks up what the first one lost
        for (int i = 0; i < k; ++i) {
            cplx c = col_dot(out.q, i, v);
            for (int r = 0; r < rows; ++r) v[r] -= c * out.q(r, i);
            out.r(i, k) += c;
        }

        const double nrm = col_norm(v);
        if (nrm < kRankTol) throw RankDeficiencyError(k, nrm);
        out.r(k, k) = nrm;
        for (int r = 0; r < rows; ++r) out.q(r, k) = v[r] / nrm;
    }
    return out;
}

SortedQrResult sorted_qr(const ComplexMatrix& h) {
    const int rows = h.rows(), cols = h.cols();
    if (rows < cols) throw DimensionError("sorted_qr: rows must be >= cols");

    // working copies of all columns, orthogonalized incrementally
    std::vector<std::vector<cplx>> work(cols, std::vector<cplx>(rows));
    for (int c = 0; c < cols; ++c)
        for (int r = 0; r < rows; ++r) work[c][r] = h(r, c);

    // coeff[m][i]: accumulated projection of original column m onto q_i
    std::vector<std::vector<cplx>> coeff(cols, std::vector<cplx>(cols, cplx{}));

    SortedQrResult out{ComplexMatrix(rows, cols), ComplexMatrix(cols, cols), {}};
    out.perm.assign(cols, 0);
    std::vector<int> remaining(cols);
    std::iota(remaining.begin(), remaining.end(), 0);

    for (int k = 0; k < cols; ++k) {
        // pick the remaining column with the smallest residual norm,
        // lowest original index on ties
        int best = 0;
        double best_norm = col_norm(work[remaining[0]]);
        for (size_t m = 1; m < remaining.size(); ++m) {
            double n = col_norm(work[remaining[m]]);
            if (n < best_norm) {
                best_norm = n;
                best = static_cast<int>(m);
            }
        }
        const int col = remaining[best];
        remaining.erase(remaining.begin() + best);
        out.perm[k] = col;

        std::vector<cplx>& v = work[col];
        // re-orthogonalization pass against already fixed directions
        for (int i = 0; i < k; ++i) {
            cplx c = col_dot(out.q, i, v);
            for (int r = 0; r < rows; ++r) v[r] -= c * out.q(r, i);
            coeff[col][i] += c;
        }
        const double nrm = col_norm(v);
        if (nrm < kRankTol) throw RankDeficiencyError(col, nrm);
        for (int i = 0; i < k; ++i) out.r(i, k) = coeff[col][i];
        out.r(k, k) = nrm;
        for (int r = 0; r < rows; ++r) out.q(r, k) = v[r] / nrm;

        // orthogonalize the still-unpicked columns against the new direction
        for (int m : remaining) {
            cplx c = col_dot(out.q, k, work[m]);
            for (int r = 0; r < rows; ++r) work[m][r] -= c * out.q(r, k);
            coeff[m][k] += c;
        }
    }
    return out;
}

ComplexVector matched_filter(const ComplexMatrix& q, const ComplexVector& y) {
    if (static_cast<int>(y.size()) != q.rows())
        throw DimensionError("matched_filter: Q rows must equal y length");
    ComplexVector out(q.cols());
    for (int c = 0; c < q.cols(); ++c) {
        cplx acc = 0.0;
        for (int r = 0; r < q.rows(); ++r) acc += std::conj(q(r, c)) * y[r];
        out[c] = acc;
    }
    return out;
}

cplx mat_vec_entry(const ComplexMatrix& h, const ComplexVector& s, int row) {
    cplx acc = 0.0;
    for (int c = 0; c < h.cols(); ++c) acc += h(row, c) * s[c];
    return acc;
}

ComplexVector mat_vec(const ComplexMatrix& h, const ComplexVector& s) {
    if (static_cast<int>(s.size()) != h.cols())
        throw DimensionError("mat_vec: dimension mismatch");
    ComplexVector out(h.rows());
    for (int r = 0; r < h.rows(); ++r) out[r] = mat_vec_entry(h, s, r);
    return out;
}

}  // namespace stsd
