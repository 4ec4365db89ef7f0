#pragma once

#include <cmath>

#include "stsd/channel.hpp"
#include "stsd/numerics.hpp"

namespace testutil {

using stsd::cplx;
using stsd::ComplexMatrix;
using stsd::ComplexVector;

inline ComplexMatrix random_matrix(stsd::Rng& rng, int rows, int cols) {
    ComplexMatrix m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) m(r, c) = rng.cgauss(1.0);
    return m;
}

inline ComplexVector random_vector(stsd::Rng& rng, int n) {
    ComplexVector v(n);
    for (cplx& x : v) x = rng.cgauss(1.0);
    return v;
}

inline ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows(), b.cols());
    for (int r = 0; r < a.rows(); ++r)
        for (int c = 0; c < b.cols(); ++c) {
            cplx acc = 0.0;
            for (int k = 0; k < a.cols(); ++k) acc += a(r, k) * b(k, c);
            out(r, c) = acc;
        }
    return out;
}

inline double frob_norm(const ComplexMatrix& m) {
    double acc = 0.0;
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c) acc += std::norm(m(r, c));
    return std::sqrt(acc);
}

inline double frob_dist(const ComplexMatrix& a, const ComplexMatrix& b) {
    double acc = 0.0;
    for (int r = 0; r < a.rows(); ++r)
        for (int c = 0; c < a.cols(); ++c) acc += std::norm(a(r, c) - b(r, c));
    return std::sqrt(acc);
}

inline double vec_norm(const ComplexVector& v) {
    double acc = 0.0;
    for (const cplx& x : v) acc += std::norm(x);
    return std::sqrt(acc);
}

}  // namespace testutil
