#pragma once

#include <string>
#include <vector>

#include "morseq/int_matrix.hpp"

namespace morseq {

/// U * M * V = S with U, V unimodular and S = diag(d_1, ..., d_r, 0, ...),
/// d_i > 0 and d_i | d_{i+1}. The constructor re-checks all of that.
struct SmithDecomposition {
    IntMatrix U;
    IntMatrix S;
    IntMatrix V;
    Index rank = 0;
    std::vector<Int> invariant_factors;  // the d_i, trivial 1-entries included

    SmithDecomposition(IntMatrix u, IntMatrix s, IntMatrix v, const IntMatrix& original);
};

SmithDecomposition smith_normal_form(const IntMatrix& m);

/// Rank without the unimodular factors, for callers that only need it.
Index smith_rank(const IntMatrix& m);

/// Finitely generated abelian group Z^betti + sum Z/t_i, t_i >= 2, t_i | t_{i+1}.
struct HomologyGroup {
    Index betti = 0;
    std::vector<Int> torsion;

    bool operator==(const HomologyGroup& other) const {
        return betti == other.betti && torsion == other.torsion;
    }
    bool trivial() const { return betti == 0 && torsion.empty(); }
    std::string to_string() const;
};

/// Homology of the composable pair  .. --d_in--> Z^n --d_out--> ..
/// d_out has n columns, d_in has n rows, and d_out * d_in must vanish.
HomologyGroup homology_of_pair(const IntMatrix& d_out, const IntMatrix& d_in);

}  // namespace morseq
