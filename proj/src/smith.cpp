#include "morseq/smith.hpp"

#include <sstream>

#include "morseq/errors.hpp"

namespace morseq {

namespace {

struct Pivot {
    Index row = -1;
    Index col = -1;
    bool found = false;
};

// Smallest nonzero absolute value in the block starting at (t, t),
// ties broken by lowest (row, col).
Pivot find_pivot(const IntMatrix& s, Index t) {
    Pivot best;
    Int best_abs = 0;
    for (Index i = t; i < s.rows(); ++i) {
        for (Index j = t; j < s.cols(); ++j) {
            if (s(i, j) == 0) continue;
            Int a = int_abs(s(i, j));
            if (!best.found || a < best_abs) {
                best = {i, j, true};
                best_abs = a;
            }
        }
    }
    return best;
}

}  // namespace

SmithDecomposition::SmithDecomposition(IntMatrix u, IntMatrix s, IntMatrix v,
                                       const IntMatrix& original)
    : U(std::move(u)), S(std::move(s)), V(std::move(v)) {
    if (U.rows() != U.cols() || U.rows() != original.rows())
        throw DimensionMismatch("SmithDecomposition: U has wrong shape");
    if (V.rows() != V.cols() || V.rows() != original.cols())
        throw DimensionMismatch("SmithDecomposition: V has wrong shape");
    if (S.rows() != original.rows() || S.cols() != original.cols())
        throw DimensionMismatch("SmithDecomposition: S has wrong shape");

    IntMatrix product = U * original * V;
    if (product != S) throw Error("SmithDecomposition: U*M*V != S");

    if (int_abs(determinant(U)) != 1 || int_abs(determinant(V)) != 1)
        throw Error("SmithDecomposition: transformation matrix not unimodular");

    const Index n = std::min(S.rows(), S.cols());
    for (Index i = 0; i < S.rows(); ++i)
        for (Index j = 0; j < S.cols(); ++j)
            if (i != j && S(i, j) != 0) throw Error("SmithDecomposition: S not diagonal");

    bool seen_zero = false;
    for (Index i = 0; i < n; ++i) {
        const Int& d = S(i, i);
        if (d == 0) {
            seen_zero = true;
            continue;
        }
        if (seen_zero) throw Error("SmithDecomposition: zero before nonzero on diagonal");
        if (d < 0) throw Error("SmithDecomposition: negative invariant factor");
        if (i > 0 && S(i - 1, i - 1) != 0 && d % S(i - 1, i - 1) != 0)
            throw Error("SmithDecomposition: divisibility chain broken");
        invariant_factors.push_back(d);
    }
    rank = static_cast<Index>(invariant_factors.size());
}

SmithDecomposition smith_normal_form(const IntMatrix& m) {
    const Index rows = m.rows(), cols = m.cols();
    IntMatrix s = m;
    IntMatrix u = int_matrix_identity(rows);
    IntMatrix v = int_matrix_identity(cols);

    const Index n = std::min(rows, cols);
    for (Index t = 0; t < n; ++t) {
        for (;;) {
            Pivot p = find_pivot(s, t);
            if (!p.found) break;  // block is zero, done entirely
            if (p.row != t) {
                s.row(t).swap(s.row(p.row));
                u.row(t).swap(u.row(p.row));
            }
            if (p.col != t) {
                s.col(t).swap(s.col(p.col));
                v.col(t).swap(v.col(p.col));
            }
            if (s(t, t) < 0) {
                s.row(t) = -s.row(t);
                u.row(t) = -u.row(t);
            }

            // Clear column t below and row t to the right. Truncated
            // quotients shrink every remainder below |pivot|, so the
            // smallest-pivot loop terminates.
            bool dirty = false;
            for (Index i = t + 1; i < rows; ++i) {
                if (s(i, t) == 0) continue;
                Int q = s(i, t) / s(t, t);
                if (q != 0) {
                    s.row(i) -= q * s.row(t);
                    u.row(i) -= q * u.row(t);
                }
                if (s(i, t) != 0) dirty = true;
            }
            for (Index j = t + 1; j < cols; ++j) {
                if (s(t, j) == 0) continue;
                Int q = s(t, j) / s(t, t);
                if (q != 0) {
                    s.col(j) -= q * s.col(t);
                    v.col(j) -= q * v.col(t);
                }
                if (s(t, j) != 0) dirty = true;
            }
            if (dirty) continue;

            // Pivot must divide the rest of the block, or the factors
            // cannot form a chain; fold an offending row in and redo.
            bool divides = true;
            for (Index i = t + 1; i < rows && divides; ++i)
                for (Index j = t + 1; j < cols && divides; ++j)
                    if (s(i, j) % s(t, t) != 0) {
                        s.row(t) += s.row(i);
                        u.row(t) += u.row(i);
                        divides = false;
                    }
            if (divides) break;
        }
        if (s(t, t) == 0) break;
    }

    return SmithDecomposition(std::move(u), std::move(s), std::move(v), m);
}

Index smith_rank(const IntMatrix& m) { return smith_normal_form(m).rank; }

std::string HomologyGroup::to_string() const {
    std::ostringstream out;
    bool first = true;
    if (betti > 0) {
        out << "Z";
        if (betti > 1) out << "^" << betti;
        first = false;
    }
    for (const Int& t : torsion) {
        if (!first) out << " + ";
        out << "Z/" << t.get_str();
        first = false;
    }
    if (first) out << "0";
    return out.str();
}

HomologyGroup homology_of_pair(const IntMatrix& d_out, const IntMatrix& d_in) {
    if (d_out.cols() != d_in.rows())
        throw DimensionMismatch("homology_of_pair: d_out has " + std::to_string(d_out.cols()) +
                                " columns but d_in has " + std::to_string(d_in.rows()) + " rows");
    IntMatrix composite = d_out * d_in;
    if (!is_zero_matrix(composite))
        throw CompositionNonzero("homology_of_pair: d_out * d_in != 0");

    SmithDecomposition snf_in = smith_normal_form(d_in);
    Index rank_out = smith_rank(d_out);

    HomologyGroup h;
    h.betti = d_in.rows() - rank_out - snf_in.rank;
    for (const Int& d : snf_in.invariant_factors)
        if (d > 1) h.torsion.push_back(d);
    return h;
}

}  // namespace morseq
