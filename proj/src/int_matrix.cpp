#include "morseq/int_matrix.hpp"

#include <sstream>

#include "morseq/errors.hpp"

namespace morseq {

IntMatrix int_matrix(Index rows, Index cols, const std::vector<long>& entries) {
    if (static_cast<Index>(entries.size()) != rows * cols)
        throw DimensionMismatch("int_matrix: entry count does not match shape");
    IntMatrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) m(i, j) = entries[static_cast<size_t>(i * cols + j)];
    return m;
}

Int determinant(const IntMatrix& m) {
    if (m.rows() != m.cols()) throw DimensionMismatch("determinant: matrix not square");
    const Index n = m.rows();
    if (n == 0) return 1;
    IntMatrix a = m;
    Int prev = 1;
    int sign = 1;
    for (Index k = 0; k < n - 1; ++k) {
        if (a(k, k) == 0) {
            Index pivot = -1;
            for (Index i = k + 1; i < n; ++i)
                if (a(i, k) != 0) {
                    pivot = i;
                    break;
                }
            if (pivot < 0) return 0;
            a.row(k).swap(a.row(pivot));
            sign = -sign;
        }
        for (Index i = k + 1; i < n; ++i) {
            for (Index j = k + 1; j < n; ++j) {
                Int num = a(i, j) * a(k, k) - a(i, k) * a(k, j);
                // Bareiss: division by the previous pivot is exact.
                mpz_divexact(a(i, j).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
            }
            a(i, k) = 0;
        }
        prev = a(k, k);
    }
    Int det = a(n - 1, n - 1);
    return sign > 0 ? det : Int(-det);
}

Index rank_via_elimination(IntMatrix a) {
    const Index rows = a.rows(), cols = a.cols();
    Index rank = 0;
    Int prev = 1;
    Index row = 0;
    for (Index col = 0; col < cols && row < rows; ++col) {
        Index pivot = -1;
        for (Index i = row; i < rows; ++i)
            if (a(i, col) != 0) {
                pivot = i;
                break;
            }
        if (pivot < 0) continue;
        if (pivot != row) a.row(row).swap(a.row(pivot));
        for (Index i = row + 1; i < rows; ++i) {
            for (Index j = col + 1; j < cols; ++j) {
                Int num = a(i, j) * a(row, col) - a(i, col) * a(row, j);
                mpz_divexact(a(i, j).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
            }
            a(i, col) = 0;
        }
        prev = a(row, col);
        ++row;
        ++rank;
    }
    return rank;
}

std::string to_string(const IntMatrix& m) {
    std::ostringstream out;
    out << "[";
    for (Index i = 0; i < m.rows(); ++i) {
        if (i) out << "; ";
        for (Index j = 0; j < m.cols(); ++j) {
            if (j) out << " ";
            out << m(i, j).get_str();
        }
    }
    out << "]";
    return out.str();
}

}  // namespace morseq
