#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace stsd {

using cplx = std::complex<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Dense row-major table, used for per-(layer, bit) LLR and label grids.
template <typename T>
class Table {
public:
    Table() = default;
    Table(int rows, int cols, T fill = T{})
        : rows_(rows), cols_(cols), v_(static_cast<size_t>(rows) * cols, fill) {
        if (rows < 1 || cols < 1)
            throw std::invalid_argument("Table: dimensions must be >= 1");
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    T& operator()(int r, int c) { return v_[static_cast<size_t>(r) * cols_ + c]; }
    const T& operator()(int r, int c) const { return v_[static_cast<size_t>(r) * cols_ + c]; }

    const std::vector<T>& data() const { return v_; }
    std::vector<T>& data() { return v_; }

    bool same_shape(const Table& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

    friend bool operator==(const Table& a, const Table& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.v_ == b.v_;
    }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<T> v_;
};

using LlrMatrix = Table<double>;  // per-(layer, bit) LLRs, natural-log units
using BitMatrix = Table<int8_t>;  // per-(layer, bit) labels over {+1,-1}

struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Raised when a matrix column cannot be orthogonalized (residual norm under
/// threshold). Carries the offending column index.
struct RankDeficiencyError : std::runtime_error {
    RankDeficiencyError(int col, double residual)
        : std::runtime_error("rank deficiency at column " + std::to_string(col) +
                             " (residual norm " + std::to_string(residual) + ")"),
          column(col) {}
    int column;
};

}  // namespace stsd
