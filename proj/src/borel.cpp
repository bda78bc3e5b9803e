#include "morseq/borel.hpp"

#include <algorithm>

#include "morseq/errors.hpp"
#include "morseq/smith.hpp"

namespace morseq {

namespace {

// Saturated kernel lattice of an integer matrix: the V-columns past the rank.
IntMatrix kernel_basis(const IntMatrix& m) {
    SmithDecomposition snf = smith_normal_form(m);
    Index dim = m.cols() - snf.rank;
    IntMatrix basis(m.cols(), dim);
    for (Index j = 0; j < dim; ++j) basis.col(j) = snf.V.col(snf.rank + j);
    return basis;
}

// Integer solvability of M z = x.
bool in_image(const SmithDecomposition& snf, const IntVector& x) {
    IntVector y = snf.U * x;
    Index n = std::min(snf.S.rows(), snf.S.cols());
    for (Index i = 0; i < y.size(); ++i) {
        if (i < n && snf.S(i, i) != 0) {
            if (y(i) % snf.S(i, i) != 0) return false;
        } else if (y(i) != 0) {
            return false;
        }
    }
    return true;
}

bool lattice_equal(const IntMatrix& kernel_of, const IntMatrix& image_of) {
    // image contained in kernel
    if (!is_zero_matrix(IntMatrix(kernel_of * image_of))) return false;
    // kernel contained in image
    SmithDecomposition snf = smith_normal_form(image_of);
    IntMatrix kernel = kernel_basis(kernel_of);
    for (Index j = 0; j < kernel.cols(); ++j)
        if (!in_image(snf, IntVector(kernel.col(j)))) return false;
    return true;
}

}  // namespace

ResolutionCheckReport resolution_check() {
    ResolutionCheckReport report;
    // Regular representation on the basis {1, phi}.
    IntMatrix t = int_matrix(2, 2, {0, 1, 1, 0});
    IntMatrix one_minus = int_matrix_identity(2) - t;  // [[1,-1],[-1,1]]
    IntMatrix one_plus = int_matrix_identity(2) + t;   // [[1,1],[1,1]]
    IntMatrix augmentation = int_matrix(1, 2, {1, 1});

    auto check = [&](const std::string& name, const IntMatrix& kernel_of,
                     const IntMatrix& image_of) {
        bool ok = lattice_equal(kernel_of, image_of);
        report.ok = report.ok && ok;
        report.checks.push_back(name + (ok ? ": exact" : ": NOT exact"));
    };
    check("ker(1 - phi) = im(1 + phi)", one_minus, one_plus);
    check("ker(1 + phi) = im(1 - phi)", one_plus, one_minus);
    check("ker(aug) = im(1 - phi)", augmentation, one_minus);
    return report;
}

GradedComplex borel_total_complex(const GradedComplex& base, const Involution& action,
                                  int i_max) {
    if (i_max < 0) throw Error("borel_total_complex: negative column limit");
    if (!verify_involution(action).ok)
        throw NotAnInvolution("borel_total_complex: action fails verification");
    const GradedComplex& c = base;
    c.check_shapes();
    if (c.empty()) return c;

    int lo = c.min_degree;
    int hi = c.max_degree + i_max;

    // Generators of total degree k: blocks (i, j = k - i) for 0 <= i <= i_max,
    // ordered by ascending column index i.
    struct BlockRef {
        int column;
        int base_degree;
        Index offset;  // first row of this block inside the total degree
    };
    std::map<int, std::vector<BlockRef>> blocks;
    std::vector<std::vector<std::string>> basis;
    for (int k = lo; k <= hi; ++k) {
        std::vector<std::string> names;
        for (int i = 0; i <= i_max; ++i) {
            int j = k - i;
            if (!c.in_range(j) || c.dim(j) == 0) continue;
            blocks[k].push_back({i, j, static_cast<Index>(names.size())});
            for (const auto& label : c.labels(j))
                names.push_back("P" + std::to_string(i) + "|" + label);
        }
        basis.push_back(std::move(names));
    }

    auto block_at = [&](int k, int i) -> const BlockRef* {
        auto it = blocks.find(k);
        if (it == blocks.end()) return nullptr;
        for (const auto& b : it->second)
            if (b.column == i) return &b;
        return nullptr;
    };

    std::vector<IntMatrix> diffs;
    for (int k = lo; k <= hi; ++k) {
        Index rows = static_cast<Index>(k > lo ? basis[static_cast<size_t>(k - 1 - lo)].size() : 0);
        IntMatrix d = int_matrix_zero(rows, static_cast<Index>(basis[static_cast<size_t>(k - lo)].size()));
        if (k == lo) {
            diffs.push_back(std::move(d));
            continue;
        }
        for (const auto& b : blocks[k]) {
            // Horizontal: column i -> i - 1 via 1 -+ A.
            if (b.column >= 1) {
                if (const BlockRef* target = block_at(k - 1, b.column - 1)) {
                    IntMatrix h = int_matrix_identity(c.dim(b.base_degree));
                    if (b.column % 2 == 1)
                        h -= action.component(b.base_degree);
                    else
                        h += action.component(b.base_degree);
                    d.block(target->offset, b.offset, h.rows(), h.cols()) = h;
                }
            }
            // Vertical: (-1)^i d inside column i.
            if (const BlockRef* target = block_at(k - 1, b.column)) {
                IntMatrix v = c.differential(b.base_degree);
                if (b.column % 2 == 1) v = -v;
                d.block(target->offset, b.offset, v.rows(), v.cols()) = v;
            }
        }
        diffs.push_back(std::move(d));
    }
    return make_complex(lo, std::move(basis), std::move(diffs));
}

std::map<int, HomologyGroup> borel_homology(const GradedComplex& base, const Involution& action,
                                            int k_max, std::optional<int> i_max) {
    if (k_max < 0) throw Error("borel_homology: negative degree bound");
    int columns = i_max.value_or(k_max + 1);
    GradedComplex total = borel_total_complex(base, action, columns);
    std::map<int, HomologyGroup> h;
    for (int k = std::max(0, total.min_degree); k <= k_max; ++k)
        h[k] = homology_of_pair(total.differential(k), total.differential(k + 1));
    return h;
}

}  // namespace morseq
