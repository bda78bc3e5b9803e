#pragma once

#include <map>
#include <string>
#include <vector>

#include "morseq/int_matrix.hpp"
#include "morseq/smith.hpp"

namespace morseq {

/// Finitely supported graded free Z-module with a degree -1 differential.
/// Generator labels are opaque; their order within a degree fixes the basis.
struct GradedComplex {
    int min_degree = 0;
    int max_degree = -1;  // empty when max < min

    // basis[k - min_degree], differentials[k - min_degree]: degree k -> k-1.
    std::vector<std::vector<std::string>> basis;
    std::vector<IntMatrix> differentials;

    bool empty() const { return max_degree < min_degree; }
    bool in_range(int k) const { return k >= min_degree && k <= max_degree; }
    Index dim(int k) const {
        return in_range(k) ? static_cast<Index>(basis[static_cast<size_t>(k - min_degree)].size())
                           : 0;
    }
    const std::vector<std::string>& labels(int k) const;
    /// d_k: C_k -> C_{k-1}; zero-shaped outside the stored range.
    IntMatrix differential(int k) const;
    Index generator_index(int k, const std::string& label) const;  // -1 if absent

    /// Checks dimensions line up; throws DimensionMismatch otherwise.
    void check_shapes() const;
};

GradedComplex make_complex(int min_degree, std::vector<std::vector<std::string>> basis,
                           std::vector<IntMatrix> differentials);

struct BoundaryViolation {
    int degree = 0;  // the source degree k of d_{k-1} d_k
    Index row = 0;
    Index col = 0;
    Int value;
};

struct BoundarySquaredReport {
    bool ok = true;
    std::map<int, Int> max_abs_by_degree;  // max |(d d)_{i j}| per source degree
    std::vector<BoundaryViolation> violations;
};

BoundarySquaredReport verify_boundary_squared(const GradedComplex& c);

/// Per-degree homology; requires d^2 = 0 (NotAComplex otherwise).
std::map<int, HomologyGroup> homology(const GradedComplex& c);

struct ChainMap {
    GradedComplex source;
    GradedComplex target;
    std::map<int, IntMatrix> components;  // missing degrees act as zero

    IntMatrix component(int k) const;
};

struct ChainMapReport {
    bool ok = true;
    std::vector<BoundaryViolation> violations;  // entries of f d - d f
};

ChainMapReport verify_chain_map(const ChainMap& f);

/// cone(f)_k = source_{k-1} (+) target_k with differential [[-d, 0], [f, d]].
GradedComplex mapping_cone(const ChainMap& f);

/// True iff the cone of f is acyclic in every degree.
bool is_quasi_isomorphism(const ChainMap& f);

/// Restriction to a generator subset closed under the differential.
GradedComplex subcomplex(const GradedComplex& c,
                         const std::map<int, std::vector<std::string>>& subset);

/// Quotient by such a subset, on the complementary generators.
GradedComplex quotient_complex(const GradedComplex& c,
                               const std::map<int, std::vector<std::string>>& subset);

struct Involution {
    GradedComplex complex;
    std::map<int, IntMatrix> components;

    IntMatrix component(int k) const;
};

struct InvolutionReport {
    bool ok = true;
    std::vector<std::string> issues;
};

InvolutionReport verify_involution(const Involution& a);

GradedComplex direct_sum(const GradedComplex& a, const GradedComplex& b);
GradedComplex shift(const GradedComplex& c, int by);

}  // namespace morseq
