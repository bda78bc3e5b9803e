#pragma once

#include <gmpxx.h>

#include <Eigen/Core>
#include <string>
#include <vector>

namespace Eigen {

template <>
struct NumTraits<mpz_class> : GenericNumTraits<mpz_class> {
    typedef mpz_class Real;
    typedef mpz_class NonInteger;
    typedef mpz_class Nested;
    static inline Real epsilon() { return 0; }
    static inline Real dummy_precision() { return 0; }
    static inline int digits10() { return 0; }
    enum {
        IsInteger = 1,
        IsSigned = 1,
        IsComplex = 0,
        RequireInitialization = 1,
        ReadCost = 6,
        AddCost = 30,
        MulCost = 50
    };
};

}  // namespace Eigen

namespace morseq {

/// Exact integers; all chain-level arithmetic runs over these.
using Int = mpz_class;
using Index = Eigen::Index;

/// Dense integer matrix, row-major semantics irrelevant at this level.
using IntMatrix = Eigen::Matrix<Int, Eigen::Dynamic, Eigen::Dynamic>;
using IntVector = Eigen::Matrix<Int, Eigen::Dynamic, 1>;

inline Int int_abs(const Int& a) { return a >= 0 ? a : Int(-a); }

inline int int_sign(const Int& a) { return sgn(a); }

inline Int int_gcd(const Int& a, const Int& b) {
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline IntMatrix int_matrix_zero(Index rows, Index cols) {
    return IntMatrix::Zero(rows, cols);
}

inline IntMatrix int_matrix_identity(Index n) { return IntMatrix::Identity(n, n); }

inline bool is_zero_matrix(const IntMatrix& m) {
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j)
            if (m(i, j) != 0) return false;
    return true;
}

/// Build from a row-major initializer, mostly for tests and builtins.
IntMatrix int_matrix(Index rows, Index cols, const std::vector<long>& entries);

/// Fraction-free (Bareiss) determinant; exact for any size we care about.
Int determinant(const IntMatrix& m);

/// Rank over the rationals via fraction-free elimination.
Index rank_via_elimination(IntMatrix m);

std::string to_string(const IntMatrix& m);

}  // namespace morseq
