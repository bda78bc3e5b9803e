#include "morseq/graded_complex.hpp"

#include <algorithm>
#include <set>

#include "morseq/errors.hpp"

namespace morseq {

namespace {
const std::vector<std::string> kNoLabels;
}

const std::vector<std::string>& GradedComplex::labels(int k) const {
    if (!in_range(k)) return kNoLabels;
    return basis[static_cast<size_t>(k - min_degree)];
}

IntMatrix GradedComplex::differential(int k) const {
    if (!in_range(k)) return int_matrix_zero(dim(k - 1), dim(k));
    return differentials[static_cast<size_t>(k - min_degree)];
}

Index GradedComplex::generator_index(int k, const std::string& label) const {
    const auto& names = labels(k);
    auto it = std::find(names.begin(), names.end(), label);
    if (it == names.end()) return -1;
    return static_cast<Index>(it - names.begin());
}

void GradedComplex::check_shapes() const {
    if (empty()) return;
    if (basis.size() != differentials.size() ||
        basis.size() != static_cast<size_t>(max_degree - min_degree + 1))
        throw DimensionMismatch("GradedComplex: degree range does not match stored data");
    for (int k = min_degree; k <= max_degree; ++k) {
        const IntMatrix& d = differentials[static_cast<size_t>(k - min_degree)];
        if (d.cols() != dim(k) || d.rows() != dim(k - 1))
            throw DimensionMismatch("GradedComplex: differential at degree " + std::to_string(k) +
                                    " has shape " + std::to_string(d.rows()) + "x" +
                                    std::to_string(d.cols()));
    }
}

GradedComplex make_complex(int min_degree, std::vector<std::vector<std::string>> basis,
                           std::vector<IntMatrix> differentials) {
    GradedComplex c;
    c.min_degree = min_degree;
    c.max_degree = min_degree + static_cast<int>(basis.size()) - 1;
    c.basis = std::move(basis);
    c.differentials = std::move(differentials);
    c.check_shapes();
    return c;
}

BoundarySquaredReport verify_boundary_squared(const GradedComplex& c) {
    c.check_shapes();
    BoundarySquaredReport report;
    for (int k = c.min_degree + 1; k <= c.max_degree; ++k) {
        IntMatrix square = c.differential(k - 1) * c.differential(k);
        Int max_abs = 0;
        for (Index i = 0; i < square.rows(); ++i)
            for (Index j = 0; j < square.cols(); ++j)
                if (square(i, j) != 0) {
                    report.ok = false;
                    report.violations.push_back({k, i, j, square(i, j)});
                    max_abs = std::max(max_abs, int_abs(square(i, j)));
                }
        report.max_abs_by_degree[k] = max_abs;
    }
    return report;
}

std::map<int, HomologyGroup> homology(const GradedComplex& c) {
    if (!verify_boundary_squared(c).ok)
        throw NotAComplex("homology: differential does not square to zero");
    std::map<int, HomologyGroup> h;
    for (int k = c.min_degree; k <= c.max_degree; ++k)
        h[k] = homology_of_pair(c.differential(k), c.differential(k + 1));
    return h;
}

IntMatrix ChainMap::component(int k) const {
    auto it = components.find(k);
    if (it != components.end()) return it->second;
    return int_matrix_zero(target.dim(k), source.dim(k));
}

ChainMapReport verify_chain_map(const ChainMap& f) {
    f.source.check_shapes();
    f.target.check_shapes();
    for (const auto& [k, comp] : f.components)
        if (comp.rows() != f.target.dim(k) || comp.cols() != f.source.dim(k))
            throw DimensionMismatch("ChainMap: component at degree " + std::to_string(k) +
                                    " has wrong shape");
    ChainMapReport report;
    int lo = std::min(f.source.min_degree, f.target.min_degree);
    int hi = std::max(f.source.max_degree, f.target.max_degree);
    for (int k = lo; k <= hi + 1; ++k) {
        IntMatrix commutator =
            f.component(k - 1) * f.source.differential(k) - f.target.differential(k) * f.component(k);
        for (Index i = 0; i < commutator.rows(); ++i)
            for (Index j = 0; j < commutator.cols(); ++j)
                if (commutator(i, j) != 0) {
                    report.ok = false;
                    report.violations.push_back({k, i, j, commutator(i, j)});
                }
    }
    return report;
}

GradedComplex mapping_cone(const ChainMap& f) {
    if (!verify_chain_map(f).ok) throw NotAChainMap("mapping_cone: f is not a chain map");
    const GradedComplex& a = f.source;
    const GradedComplex& b = f.target;
    int lo = std::min(a.min_degree + 1, b.min_degree);
    int hi = std::max(a.max_degree + 1, b.max_degree);
    if (hi < lo) return GradedComplex{};

    std::vector<std::vector<std::string>> basis;
    std::vector<IntMatrix> diffs;
    for (int k = lo; k <= hi; ++k) {
        std::vector<std::string> names;
        for (const auto& s : a.labels(k - 1)) names.push_back("src:" + s);
        for (const auto& t : b.labels(k)) names.push_back("tgt:" + t);
        basis.push_back(std::move(names));
    }
    for (int k = lo; k <= hi; ++k) {
        Index rows = a.dim(k - 2) + b.dim(k - 1);
        Index cols = a.dim(k - 1) + b.dim(k);
        IntMatrix d = int_matrix_zero(rows, cols);
        d.block(0, 0, a.dim(k - 2), a.dim(k - 1)) = -a.differential(k - 1);
        d.block(a.dim(k - 2), 0, b.dim(k - 1), a.dim(k - 1)) = f.component(k - 1);
        d.block(a.dim(k - 2), a.dim(k - 1), b.dim(k - 1), b.dim(k)) = b.differential(k);
        diffs.push_back(std::move(d));
    }
    return make_complex(lo, std::move(basis), std::move(diffs));
}

bool is_quasi_isomorphism(const ChainMap& f) {
    GradedComplex cone = mapping_cone(f);
    for (const auto& [degree, group] : homology(cone))
        if (!group.trivial()) return false;
    return true;
}

namespace {

// Indices of the chosen labels in degree k, in basis order.
std::vector<Index> subset_indices(const GradedComplex& c, int k,
                                  const std::map<int, std::vector<std::string>>& subset) {
    std::vector<Index> out;
    auto it = subset.find(k);
    if (it == subset.end()) return out;
    std::set<Index> seen;
    for (const auto& label : it->second) {
        Index idx = c.generator_index(k, label);
        if (idx < 0)
            throw UnknownGenerator("subset: no generator '" + label + "' in degree " +
                                   std::to_string(k));
        seen.insert(idx);
    }
    out.assign(seen.begin(), seen.end());
    return out;
}

std::vector<Index> complement_indices(Index n, const std::vector<Index>& chosen) {
    std::vector<Index> out;
    size_t at = 0;
    for (Index i = 0; i < n; ++i) {
        if (at < chosen.size() && chosen[at] == i) {
            ++at;
            continue;
        }
        out.push_back(i);
    }
    return out;
}

IntMatrix pick(const IntMatrix& m, const std::vector<Index>& rows,
               const std::vector<Index>& cols) {
    IntMatrix out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < cols.size(); ++j)
            out(static_cast<Index>(i), static_cast<Index>(j)) = m(rows[i], cols[j]);
    return out;
}

}  // namespace

GradedComplex subcomplex(const GradedComplex& c,
                         const std::map<int, std::vector<std::string>>& subset) {
    c.check_shapes();
    if (c.empty()) return c;
    std::vector<std::vector<Index>> chosen;
    for (int k = c.min_degree; k <= c.max_degree; ++k)
        chosen.push_back(subset_indices(c, k, subset));

    // Closure: image of a chosen generator must be supported on chosen rows.
    for (int k = c.min_degree + 1; k <= c.max_degree; ++k) {
        const IntMatrix& d = c.differential(k);
        const auto& cols = chosen[static_cast<size_t>(k - c.min_degree)];
        const auto& keep_rows = chosen[static_cast<size_t>(k - 1 - c.min_degree)];
        std::set<Index> keep(keep_rows.begin(), keep_rows.end());
        for (Index col : cols)
            for (Index i = 0; i < d.rows(); ++i)
                if (d(i, col) != 0 && !keep.count(i))
                    throw NotClosedUnderDifferential(
                        "subcomplex: d(" + c.labels(k)[static_cast<size_t>(col)] + ") leaves the subset at " +
                        c.labels(k - 1)[static_cast<size_t>(i)]);
    }

    std::vector<std::vector<std::string>> basis;
    std::vector<IntMatrix> diffs;
    for (int k = c.min_degree; k <= c.max_degree; ++k) {
        const auto& idx = chosen[static_cast<size_t>(k - c.min_degree)];
        std::vector<std::string> names;
        for (Index i : idx) names.push_back(c.labels(k)[static_cast<size_t>(i)]);
        basis.push_back(std::move(names));
        const auto& rows = (k == c.min_degree) ? std::vector<Index>{}
                                               : chosen[static_cast<size_t>(k - 1 - c.min_degree)];
        diffs.push_back(pick(c.differential(k), rows, idx));
    }
    return make_complex(c.min_degree, std::move(basis), std::move(diffs));
}

GradedComplex quotient_complex(const GradedComplex& c,
                               const std::map<int, std::vector<std::string>>& subset) {
    subcomplex(c, subset);  // validates closure
    std::vector<std::vector<std::string>> basis;
    std::vector<IntMatrix> diffs;
    std::vector<std::vector<Index>> kept;
    for (int k = c.min_degree; k <= c.max_degree; ++k) {
        auto chosen = subset_indices(c, k, subset);
        kept.push_back(complement_indices(c.dim(k), chosen));
    }
    for (int k = c.min_degree; k <= c.max_degree; ++k) {
        const auto& idx = kept[static_cast<size_t>(k - c.min_degree)];
        std::vector<std::string> names;
        for (Index i : idx) names.push_back(c.labels(k)[static_cast<size_t>(i)]);
        basis.push_back(std::move(names));
        const auto& rows = (k == c.min_degree) ? std::vector<Index>{}
                                               : kept[static_cast<size_t>(k - 1 - c.min_degree)];
        diffs.push_back(pick(c.differential(k), rows, idx));
    }
    return make_complex(c.min_degree, std::move(basis), std::move(diffs));
}

IntMatrix Involution::component(int k) const {
    auto it = components.find(k);
    if (it != components.end()) return it->second;
    return int_matrix_identity(complex.dim(k));
}

InvolutionReport verify_involution(const Involution& a) {
    a.complex.check_shapes();
    InvolutionReport report;
    for (int k = a.complex.min_degree; k <= a.complex.max_degree; ++k) {
        IntMatrix comp = a.component(k);
        if (comp.rows() != a.complex.dim(k) || comp.cols() != a.complex.dim(k))
            throw DimensionMismatch("Involution: component at degree " + std::to_string(k) +
                                    " has wrong shape");
        if (comp * comp != int_matrix_identity(a.complex.dim(k))) {
            report.ok = false;
            report.issues.push_back("A^2 != id in degree " + std::to_string(k));
        }
        IntMatrix commutator = a.component(k - 1) * a.complex.differential(k) -
                               a.complex.differential(k) * comp;
        if (!is_zero_matrix(commutator)) {
            report.ok = false;
            report.issues.push_back("A d != d A at degree " + std::to_string(k));
        }
    }
    return report;
}

GradedComplex direct_sum(const GradedComplex& a, const GradedComplex& b) {
    if (a.empty()) return b;
    if (b.empty()) return a;
    int lo = std::min(a.min_degree, b.min_degree);
    int hi = std::max(a.max_degree, b.max_degree);
    std::vector<std::vector<std::string>> basis;
    std::vector<IntMatrix> diffs;
    for (int k = lo; k <= hi; ++k) {
        std::vector<std::string> names;
        for (const auto& s : a.labels(k)) names.push_back("l:" + s);
        for (const auto& s : b.labels(k)) names.push_back("r:" + s);
        basis.push_back(std::move(names));
        IntMatrix d = int_matrix_zero(a.dim(k - 1) + b.dim(k - 1), a.dim(k) + b.dim(k));
        d.block(0, 0, a.dim(k - 1), a.dim(k)) = a.differential(k);
        d.block(a.dim(k - 1), a.dim(k), b.dim(k - 1), b.dim(k)) = b.differential(k);
        diffs.push_back(std::move(d));
    }
    return make_complex(lo, std::move(basis), std::move(diffs));
}

GradedComplex shift(const GradedComplex& c, int by) {
    GradedComplex out = c;
    out.min_degree += by;
    out.max_degree += by;
    return out;
}

}  // namespace morseq
