#include "morseq/complex_builders.hpp"

#include <algorithm>

#include "morseq/errors.hpp"
#include "morseq/gluing.hpp"

namespace morseq {

namespace {

// One summand of a variant: which points generate it, how they are graded,
// and how their labels read.
enum class ClassTag { interior, stable, unstable_shifted, unstable_at_index, side_plus, side_minus };

struct ClassSpec {
    ClassTag tag;
    std::vector<std::string> labels;
    std::vector<int> gradings;
    std::vector<std::string> point_ids;  // underlying points, aligned with labels
};

ClassSpec make_class(const MorseInstance& inst, ClassTag tag) {
    ClassSpec spec{tag, {}, {}, {}};
    for (const auto& p : inst.points) {
        bool take = false;
        int grading = p.index;
        std::string label = p.id;
        switch (tag) {
            case ClassTag::interior: take = p.locus == Locus::interior; break;
            case ClassTag::stable: take = p.stable(); break;
            case ClassTag::unstable_shifted:
                take = p.unstable();
                grading = p.index - 1;
                break;
            case ClassTag::unstable_at_index: take = p.unstable(); break;
            case ClassTag::side_plus:
                take = p.unstable();
                label += "+";
                break;
            case ClassTag::side_minus:
                take = p.unstable();
                label += "-";
                break;
        }
        if (!take) continue;
        spec.labels.push_back(label);
        spec.gradings.push_back(grading);
        spec.point_ids.push_back(p.id);
    }
    return spec;
}

IntMatrix block_matrix(const MorseInstance& inst, BlockSel sel) { return block(inst, sel).matrix; }

// Identity between two classes over the same point set (the projections Pi).
IntMatrix identity_between(const ClassSpec& target, const ClassSpec& source) {
    if (target.point_ids != source.point_ids)
        throw DimensionMismatch("identity_between: classes over different point sets");
    return int_matrix_identity(static_cast<Index>(source.point_ids.size()));
}

struct Assembly {
    std::vector<ClassSpec> classes;
    IntMatrix full;  // all generators x all generators, class blocks side by side

    std::vector<std::string> all_labels() const {
        std::vector<std::string> out;
        for (const auto& c : classes) out.insert(out.end(), c.labels.begin(), c.labels.end());
        return out;
    }
    std::vector<int> all_gradings() const {
        std::vector<int> out;
        for (const auto& c : classes) out.insert(out.end(), c.gradings.begin(), c.gradings.end());
        return out;
    }
    Index offset(size_t class_index) const {
        Index off = 0;
        for (size_t i = 0; i < class_index; ++i)
            off += static_cast<Index>(classes[i].labels.size());
        return off;
    }
    void place(size_t target_class, size_t source_class, const IntMatrix& m) {
        full.block(offset(target_class), offset(source_class), m.rows(), m.cols()) += m;
    }
};

Assembly make_assembly(std::vector<ClassSpec> classes) {
    Assembly a;
    a.classes = std::move(classes);
    Index n = 0;
    for (const auto& c : a.classes) n += static_cast<Index>(c.labels.size());
    a.full = int_matrix_zero(n, n);
    return a;
}

// Slice a full generator-by-generator matrix into per-degree differentials.
GradedComplex slice_by_grading(const std::vector<std::string>& labels,
                               const std::vector<int>& gradings, const IntMatrix& full) {
    if (labels.empty()) return GradedComplex{};
    int lo = *std::min_element(gradings.begin(), gradings.end());
    int hi = *std::max_element(gradings.begin(), gradings.end());
    for (Index i = 0; i < full.rows(); ++i)
        for (Index j = 0; j < full.cols(); ++j)
            if (full(i, j) != 0 && gradings[static_cast<size_t>(j)] - gradings[static_cast<size_t>(i)] != 1)
                throw GradingMismatch("differential entry " + labels[static_cast<size_t>(i)] +
                                      " <- " + labels[static_cast<size_t>(j)] +
                                      " connects a grading gap != 1");
    std::vector<std::vector<Index>> by_degree(static_cast<size_t>(hi - lo + 1));
    for (size_t i = 0; i < labels.size(); ++i)
        by_degree[static_cast<size_t>(gradings[i] - lo)].push_back(static_cast<Index>(i));
    std::vector<std::vector<std::string>> basis;
    std::vector<IntMatrix> diffs;
    for (int k = lo; k <= hi; ++k) {
        const auto& cols = by_degree[static_cast<size_t>(k - lo)];
        std::vector<std::string> names;
        for (Index i : cols) names.push_back(labels[static_cast<size_t>(i)]);
        basis.push_back(std::move(names));
        const std::vector<Index> rows =
            (k == lo) ? std::vector<Index>{} : by_degree[static_cast<size_t>(k - 1 - lo)];
        IntMatrix d(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
        for (size_t r = 0; r < rows.size(); ++r)
            for (size_t c = 0; c < cols.size(); ++c)
                d(static_cast<Index>(r), static_cast<Index>(c)) = full(rows[r], cols[c]);
        diffs.push_back(std::move(d));
    }
    return make_complex(lo, std::move(basis), std::move(diffs));
}

void require_valid(const MorseInstance& inst) {
    if (!validate(inst).empty()) throw InvalidInstance("build: instance fails validation");
}

Assembly assemble_bar(const MorseInstance& inst) {
    auto a = make_assembly({make_class(inst, ClassTag::stable),
                            make_class(inst, ClassTag::unstable_shifted)});
    a.place(0, 0, block_matrix(inst, BlockSel::bar_s_s));
    a.place(0, 1, block_matrix(inst, BlockSel::bar_s_u));
    a.place(1, 0, block_matrix(inst, BlockSel::bar_u_s));
    a.place(1, 1, block_matrix(inst, BlockSel::bar_u_u));
    return a;
}

Assembly assemble_check_km(const MorseInstance& inst) {
    auto a = make_assembly({make_class(inst, ClassTag::interior),
                            make_class(inst, ClassTag::stable)});
    IntMatrix bar_us = block_matrix(inst, BlockSel::bar_u_s);
    a.place(0, 0, block_matrix(inst, BlockSel::d_o_o));
    a.place(0, 1, IntMatrix(-block_matrix(inst, BlockSel::d_o_u) * bar_us));
    a.place(1, 0, block_matrix(inst, BlockSel::d_s_o));
    a.place(1, 1, block_matrix(inst, BlockSel::bar_s_s));
    a.place(1, 1, IntMatrix(-block_matrix(inst, BlockSel::d_s_u) * bar_us));
    return a;
}

Assembly assemble_hat_km(const MorseInstance& inst) {
    auto a = make_assembly({make_class(inst, ClassTag::interior),
                            make_class(inst, ClassTag::unstable_at_index)});
    IntMatrix bar_us = block_matrix(inst, BlockSel::bar_u_s);
    a.place(0, 0, block_matrix(inst, BlockSel::d_o_o));
    a.place(0, 1, block_matrix(inst, BlockSel::d_o_u));
    a.place(1, 0, IntMatrix(-bar_us * block_matrix(inst, BlockSel::d_s_o)));
    a.place(1, 1, IntMatrix(-block_matrix(inst, BlockSel::bar_u_u)));
    a.place(1, 1, IntMatrix(-bar_us * block_matrix(inst, BlockSel::d_s_u)));
    return a;
}

Assembly assemble_check_stab(const MorseInstance& inst) {
    auto a = make_assembly({make_class(inst, ClassTag::interior),
                            make_class(inst, ClassTag::stable),
                            make_class(inst, ClassTag::unstable_shifted),
                            make_class(inst, ClassTag::side_minus)});
    IntMatrix bar_us = block_matrix(inst, BlockSel::bar_u_s);
    IntMatrix bar_uu = block_matrix(inst, BlockSel::bar_u_u);
    IntMatrix d_s_u = block_matrix(inst, BlockSel::d_s_u);
    a.place(0, 0, block_matrix(inst, BlockSel::d_o_o));
    a.place(0, 3, block_matrix(inst, BlockSel::d_o_u));
    a.place(1, 0, block_matrix(inst, BlockSel::d_s_o));
    a.place(1, 1, block_matrix(inst, BlockSel::bar_s_s));
    a.place(1, 2, block_matrix(inst, BlockSel::bar_s_u));
    a.place(1, 3, d_s_u);
    a.place(2, 1, bar_us);
    a.place(2, 2, bar_uu);
    a.place(2, 3, identity_between(a.classes[2], a.classes[3]));  // Pi_-
    a.place(3, 0, IntMatrix(-bar_us * block_matrix(inst, BlockSel::d_s_o)));
    a.place(3, 3, IntMatrix(-bar_uu - bar_us * d_s_u));
    return a;
}

Assembly assemble_bold(const MorseInstance& inst) {
    auto a = make_assembly({make_class(inst, ClassTag::interior),
                            make_class(inst, ClassTag::stable),
                            make_class(inst, ClassTag::unstable_shifted),
                            make_class(inst, ClassTag::side_plus),
                            make_class(inst, ClassTag::side_minus)});
    IntMatrix P_us = block_matrix(inst, BlockSel::P_u_s);
    IntMatrix R_us = block_matrix(inst, BlockSel::R_u_s);
    IntMatrix P_uu = block_matrix(inst, BlockSel::P_u_u);
    IntMatrix R_uu = block_matrix(inst, BlockSel::R_u_u);

    a.place(0, 0, block_matrix(inst, BlockSel::d_o_o));
    a.place(0, 3, block_matrix(inst, BlockSel::d_o_up));
    a.place(0, 4, block_matrix(inst, BlockSel::d_o_um));

    a.place(1, 0, block_matrix(inst, BlockSel::d_s_o));
    a.place(1, 1, block_matrix(inst, BlockSel::bar_s_s));
    a.place(1, 2, block_matrix(inst, BlockSel::bar_s_u));
    a.place(1, 3, block_matrix(inst, BlockSel::d_s_up));
    a.place(1, 4, block_matrix(inst, BlockSel::d_s_um));

    a.place(2, 1, block_matrix(inst, BlockSel::bar_u_s));
    a.place(2, 2, block_matrix(inst, BlockSel::bar_u_u));
    a.place(2, 3, IntMatrix(-identity_between(a.classes[2], a.classes[3])));  // -Pi_+
    a.place(2, 4, identity_between(a.classes[2], a.classes[4]));              // +Pi_-

    a.place(3, 0, IntMatrix(P_us * block_matrix(inst, BlockSel::d_sp_o) +
                            R_us * block_matrix(inst, BlockSel::d_sm_o)));
    a.place(3, 3, IntMatrix(-P_uu + P_us * block_matrix(inst, BlockSel::d_sp_up) +
                            R_us * block_matrix(inst, BlockSel::d_sm_up)));
    a.place(3, 4, IntMatrix(R_uu + P_us * block_matrix(inst, BlockSel::d_sp_um) +
                            R_us * block_matrix(inst, BlockSel::d_sm_um)));

    a.place(4, 0, IntMatrix(-P_us * block_matrix(inst, BlockSel::d_sm_o) -
                            R_us * block_matrix(inst, BlockSel::d_sp_o)));
    a.place(4, 3, IntMatrix(R_uu - P_us * block_matrix(inst, BlockSel::d_sm_up) -
                            R_us * block_matrix(inst, BlockSel::d_sp_up)));
    a.place(4, 4, IntMatrix(-P_uu - P_us * block_matrix(inst, BlockSel::d_sm_um) -
                            R_us * block_matrix(inst, BlockSel::d_sp_um)));
    return a;
}

GradedComplex finish(const Assembly& a) {
    return slice_by_grading(a.all_labels(), a.all_gradings(), a.full);
}

}  // namespace

std::string to_string(ComplexVariant v) {
    switch (v) {
        case ComplexVariant::bar: return "bar";
        case ComplexVariant::check_km: return "check-km";
        case ComplexVariant::hat_km: return "hat-km";
        case ComplexVariant::check_stab: return "check-stab";
        case ComplexVariant::hat_stab: return "hat-stab";
        case ComplexVariant::bold: return "bold";
        case ComplexVariant::generalized: return "generalized";
    }
    return "?";
}

ComplexVariant variant_from_string(const std::string& s) {
    for (ComplexVariant v :
         {ComplexVariant::bar, ComplexVariant::check_km, ComplexVariant::hat_km,
          ComplexVariant::check_stab, ComplexVariant::hat_stab, ComplexVariant::bold,
          ComplexVariant::generalized})
        if (to_string(v) == s) return v;
    throw UnknownName("no complex variant named '" + s + "'");
}

GradedComplex build(const MorseInstance& inst, ComplexVariant variant) {
    require_valid(inst);
    switch (variant) {
        case ComplexVariant::bar: return finish(assemble_bar(inst));
        case ComplexVariant::check_km: return finish(assemble_check_km(inst));
        case ComplexVariant::hat_km: return finish(assemble_hat_km(inst));
        case ComplexVariant::check_stab: return finish(assemble_check_stab(inst));
        case ComplexVariant::hat_stab:
            return quotient_complex(build(inst, ComplexVariant::check_stab),
                                    bar_subcomplex_labels(inst));
        case ComplexVariant::bold:
            if (inst.kind != InstanceKind::closed_equivariant &&
                inst.kind != InstanceKind::boundary_double)
                throw InvalidInstance("bold complex needs a reflection instance");
            return finish(assemble_bold(inst));
        case ComplexVariant::generalized:
            if (inst.kind != InstanceKind::generalized)
                throw InvalidInstance("generalized complex needs a generalized instance");
            return differential_from_gluing(inst);
    }
    throw UnknownName("build: bad variant");
}

std::map<int, std::vector<std::string>> bar_subcomplex_labels(const MorseInstance& inst) {
    std::map<int, std::vector<std::string>> labels;
    for (const auto& p : inst.points) {
        if (p.stable()) labels[p.index].push_back(p.id);
        if (p.unstable()) labels[p.index - 1].push_back(p.id);
    }
    return labels;
}

ChainMap psi(const MorseInstance& inst) {
    require_valid(inst);
    ChainMap f;
    f.source = build(inst, ComplexVariant::check_stab);
    f.target = build(inst, ComplexVariant::check_km);

    auto interior = make_class(inst, ClassTag::interior);
    auto stable = make_class(inst, ClassTag::stable);
    auto shifted = make_class(inst, ClassTag::unstable_shifted);
    auto minus = make_class(inst, ClassTag::side_minus);

    // psi = [[id, 0, -d_o^u, 0], [0, id, -d_s^u, 0]] over the class blocks.
    Index src_cols = static_cast<Index>(interior.labels.size() + stable.labels.size() +
                                        shifted.labels.size() + minus.labels.size());
    Index tgt_rows = static_cast<Index>(interior.labels.size() + stable.labels.size());
    IntMatrix full = int_matrix_zero(tgt_rows, src_cols);
    Index o = static_cast<Index>(interior.labels.size());
    Index s = static_cast<Index>(stable.labels.size());
    Index u = static_cast<Index>(shifted.labels.size());
    full.block(0, 0, o, o) = int_matrix_identity(o);
    full.block(o, o, s, s) = int_matrix_identity(s);
    full.block(0, o + s, o, u) = -block_matrix(inst, BlockSel::d_o_u);
    full.block(o, o + s, s, u) = -block_matrix(inst, BlockSel::d_s_u);

    std::vector<int> src_gradings;
    for (const auto& c : {interior, stable, shifted, minus})
        src_gradings.insert(src_gradings.end(), c.gradings.begin(), c.gradings.end());
    std::vector<int> tgt_gradings;
    for (const auto& c : {interior, stable})
        tgt_gradings.insert(tgt_gradings.end(), c.gradings.begin(), c.gradings.end());

    for (int k = f.source.min_degree; k <= f.source.max_degree; ++k) {
        IntMatrix comp = int_matrix_zero(f.target.dim(k), f.source.dim(k));
        Index col = 0;
        for (Index j = 0; j < full.cols(); ++j) {
            if (src_gradings[static_cast<size_t>(j)] != k) continue;
            Index row = 0;
            for (Index i = 0; i < full.rows(); ++i) {
                if (tgt_gradings[static_cast<size_t>(i)] != k) continue;
                comp(row, col) = full(i, j);
                ++row;
            }
            ++col;
        }
        f.components[k] = std::move(comp);
    }
    return f;
}

ChainMap hat_quotient_map(const MorseInstance& inst) {
    require_valid(inst);
    ChainMap f;
    f.source = build(inst, ComplexVariant::check_stab);
    f.target = build(inst, ComplexVariant::hat_km);
    // C^o by the identity, C^s + C^u[-1] to zero, C^u_- by Pi_-.
    for (int k = f.source.min_degree; k <= f.source.max_degree; ++k) {
        IntMatrix comp = int_matrix_zero(f.target.dim(k), f.source.dim(k));
        const auto& src = f.source.labels(k);
        for (Index j = 0; j < static_cast<Index>(src.size()); ++j) {
            const std::string& label = src[static_cast<size_t>(j)];
            std::string image;
            if (const CriticalPoint* p = inst.find_point(label)) {
                if (p->locus == Locus::interior) image = label;
            } else if (label.size() > 1 && label.back() == '-') {
                image = label.substr(0, label.size() - 1);
            }
            if (image.empty()) continue;
            Index i = f.target.generator_index(k, image);
            if (i >= 0) comp(i, j) = 1;
        }
        f.components[k] = std::move(comp);
    }
    return f;
}

Involution g_action(const MorseInstance& inst) {
    if (inst.kind != InstanceKind::closed_equivariant)
        throw InvalidInstance("g_action: the twisted action lives on closed-equivariant instances");
    require_valid(inst);
    Involution a;
    a.complex = build(inst, ComplexVariant::bold);
    for (int k = a.complex.min_degree; k <= a.complex.max_degree; ++k) {
        const auto& names = a.complex.labels(k);
        IntMatrix comp = int_matrix_zero(a.complex.dim(k), a.complex.dim(k));
        for (Index j = 0; j < static_cast<Index>(names.size()); ++j) {
            const std::string& label = names[static_cast<size_t>(j)];
            if (const CriticalPoint* p = inst.find_point(label)) {
                if (p->unstable()) {
                    // C^u[-1]: phi[p] = [p].
                    comp(j, j) = 1;
                } else {
                    // C^o and C^s: phi[p] = sigma(phi, p) [phi p].
                    Index i = a.complex.generator_index(k, p->phi);
                    comp(i, j) = p->sigma;
                }
                continue;
            }
            // Side generators: phi[p_+-] = sigma(phi, p) [p_-+].
            std::string base = label.substr(0, label.size() - 1);
            char side = label.back();
            const CriticalPoint& p = inst.point(base);
            std::string flipped = base + (side == '+' ? "-" : "+");
            Index i = a.complex.generator_index(k, flipped);
            comp(i, j) = p.sigma;
        }
        a.components[k] = std::move(comp);
    }
    return a;
}

}  // namespace morseq
