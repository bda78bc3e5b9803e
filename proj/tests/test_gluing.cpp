#include <algorithm>
#include <set>

#include "doctest.h"
#include "morseq/complex_builders.hpp"
#include "morseq/errors.hpp"
#include "morseq/gluing.hpp"

using namespace morseq;

namespace {

std::set<std::vector<std::string>> piece_sets(const std::vector<BrokenTrajectory>& chains) {
    std::set<std::vector<std::string>> out;
    for (const auto& bt : chains) out.insert(bt.pieces);
    return out;
}

std::set<std::vector<std::string>> gluable_piece_sets(const MorseInstance& inst,
                                                      const std::string& start,
                                                      const std::string& end, int drop) {
    std::set<std::vector<std::string>> out;
    for (const auto& [bt, sign] : gluable_chains(inst, start, end, drop)) out.insert(bt.pieces);
    return out;
}

Int diff_entry(const GradedComplex& c, int k, const std::string& target,
               const std::string& source) {
    Index j = c.generator_index(k, source);
    Index i = c.generator_index(k - 1, target);
    REQUIRE(j >= 0);
    REQUIRE(i >= 0);
    return c.differential(k)(i, j);
}

}  // namespace

TEST_CASE("torus: the two broken trajectories from a+ toward c+") {
    MorseInstance torus = builtin_instance("torus");
    auto chains = enumerate_broken(torus, "a+", "c+", 1);
    CHECK(piece_sets(chains) ==
          std::set<std::vector<std::string>>{{"u+", "v"}, {"u+", "w"}});
    // Both are gluable toward c+ (both arcs preserve orientation) and cancel.
    Int total = 0;
    for (const auto& bt : chains) {
        GluingVerdict v = verdict(torus, bt);
        CHECK(v.gluable);
        total += *v.sign;
    }
    CHECK(total == 0);
    CHECK(boundary_count(torus, "a+", "c+") == 0);
    // The grading filter: these chains drop exactly one.
    CHECK(enumerate_broken(torus, "a+", "c+", 2).empty());
}

TEST_CASE("torus: drop-two chains from a+ to d") {
    MorseInstance torus = builtin_instance("torus");
    auto chains = enumerate_broken(torus, "a+", "d", 2);
    CHECK(piece_sets(chains) == std::set<std::vector<std::string>>{
                                    {"u+", "v", "t+"}, {"u+", "v", "t-"},
                                    {"u+", "w", "t+"}, {"u+", "w", "t-"}});
    CHECK(enumerate_broken(torus, "a+", "d", 3).empty());
    CHECK(gluable_piece_sets(torus, "a+", "d", 2) ==
          std::set<std::vector<std::string>>{{"u+", "v", "t+"}, {"u+", "w", "t+"}});
    CHECK(boundary_count(torus, "a+", "d") == 0);
}

TEST_CASE("toward an undecorated reading the trailing obstructed piece blocks gluing") {
    MorseInstance torus = builtin_instance("torus");
    // a+ -> plain c has grading gap 2; the chains (u+, v), (u+, w) end with an
    // obstructed piece entered transversally, so neither one glues.
    for (const auto& bt : enumerate_broken(torus, "a+", "c", 2)) {
        GluingVerdict v = verdict(torus, bt);
        CHECK_FALSE(v.gluable);
        CHECK_FALSE(v.sign.has_value());
    }
    CHECK(boundary_count(torus, "a+", "c") == 0);
}

TEST_CASE("klein: broken trajectories feed c+ and c- with sign +1 each") {
    MorseInstance klein = builtin_instance("klein");
    auto toward_plus = gluable_chains(klein, "a+", "c+", 1);
    REQUIRE(toward_plus.size() == 1);
    CHECK(toward_plus[0].first.pieces == std::vector<std::string>{"u+", "v"});
    CHECK(toward_plus[0].second == 1);

    auto toward_minus = gluable_chains(klein, "a+", "c-", 1);
    REQUIRE(toward_minus.size() == 1);
    CHECK(toward_minus[0].first.pieces == std::vector<std::string>{"u+", "w"});
    CHECK(toward_minus[0].second == 1);

    CHECK(boundary_count(klein, "a+", "d") == 0);
    CHECK(boundary_count(klein, "a-", "d") == 0);
    CHECK(boundary_count(klein, "a+", "c") == 0);
}

TEST_CASE("two drop-one pieces glue with the product sign") {
    // Interior orbit over the equator: (ambient, bar arc) chains.
    MorseInstance inst;
    inst.name = "sphere";
    inst.kind = InstanceKind::closed_equivariant;
    CriticalPoint n{"n", 2, Locus::interior, std::nullopt, "n'", 1, std::nullopt};
    CriticalPoint n2{"n'", 2, Locus::interior, std::nullopt, "n", 1, std::nullopt};
    CriticalPoint b{"b", 1, Locus::fixed, Stability::stable, "b", 1, std::nullopt};
    CriticalPoint d{"d", 0, Locus::fixed, Stability::stable, "d", 1, std::nullopt};
    inst.points = {n, n2, b, d};
    TrajectoryRecord g{"g", "n", "b", Carrier::ambient, 1, std::nullopt, 1, std::nullopt,
                       std::nullopt};
    TrajectoryRecord g2{"g'", "n'", "b", Carrier::ambient, 1, std::nullopt, -1, std::nullopt,
                        std::nullopt};
    TrajectoryRecord e{"e", "b", "d", Carrier::fixed, 1, std::nullopt, std::nullopt,
                       std::nullopt, std::nullopt};
    TrajectoryRecord e2{"e'", "b", "d", Carrier::fixed, -1, std::nullopt, std::nullopt,
                        std::nullopt, std::nullopt};
    inst.trajectories = {g, g2, e, e2};
    REQUIRE(validate(inst).empty());

    auto chains = gluable_chains(inst, "n", "d", 2);
    REQUIRE(chains.size() == 2);
    for (const auto& [bt, sign] : chains) {
        Int expected = 1;
        for (const auto& id : bt.pieces) expected *= inst.find_trajectory(id)->sign;
        CHECK(sign == expected);  // (-1)^2 * o(u1) * o(u2), no obstructed factors
    }
    CHECK(boundary_count(inst, "n", "d") == 0);
}

TEST_CASE("genus-2: the four gluable chains from a to f") {
    MorseInstance g2 = builtin_instance("genus2");
    auto all = enumerate_broken(g2, "a", "f", 2);
    CHECK(all.size() == 32);  // every composable side assignment
    CHECK(gluable_piece_sets(g2, "a", "f", 2) ==
          std::set<std::vector<std::string>>{{"u", "v", "w", "x", "y"},
                                             {"u", "v'", "w", "x'", "y"},
                                             {"u'", "v", "w'", "x", "y'"},
                                             {"u'", "v'", "w'", "x'", "y'"}});
    CHECK(boundary_count(g2, "a", "f") == 0);
}

TEST_CASE("genus-2: the full gluing differential") {
    MorseInstance g2 = builtin_instance("genus2");
    GradedComplex c = differential_from_gluing(g2);
    CHECK(verify_boundary_squared(c).ok);

    // d a = 0, d b = 0.
    CHECK(is_zero_matrix(IntMatrix(c.differential(2))));
    Index b_col = c.generator_index(1, "b");
    CHECK(is_zero_matrix(IntMatrix(c.differential(1).col(b_col))));

    CHECK(diff_entry(c, 1, "c", "c+") == -1);
    CHECK(diff_entry(c, 1, "d", "c+") == 1);
    CHECK(diff_entry(c, 1, "c", "c-") == 1);
    CHECK(diff_entry(c, 1, "d", "c-") == -1);
    CHECK(diff_entry(c, 1, "d", "d+") == -1);  // d_l
    CHECK(diff_entry(c, 1, "e", "d+") == 1);
    CHECK(diff_entry(c, 1, "d", "d-") == 1);   // d_r
    CHECK(diff_entry(c, 1, "e", "d-") == -1);
    CHECK(diff_entry(c, 1, "e", "e+") == -1);
    CHECK(diff_entry(c, 1, "f", "e+") == 1);
    CHECK(diff_entry(c, 1, "e", "e-") == 1);
    CHECK(diff_entry(c, 1, "f", "e-") == -1);
    // No chain reaches past the next joint without gluing.
    CHECK(diff_entry(c, 1, "e", "c+") == 0);
    CHECK(diff_entry(c, 1, "f", "d+") == 0);

    auto h = homology(c);
    CHECK(h[0] == HomologyGroup{1, {}});
    CHECK(h[1] == HomologyGroup{4, {}});
    CHECK(h[2] == HomologyGroup{1, {}});
}

TEST_CASE("the gluing differential reproduces the bold differential") {
    for (const auto& name : {"torus", "klein", "interval"}) {
        MorseInstance inst = builtin_instance(name);
        GradedComplex bold = build(inst, ComplexVariant::bold);
        GradedComplex glued = differential_from_gluing(inst);
        REQUIRE(bold.min_degree == glued.min_degree);
        REQUIRE(bold.max_degree == glued.max_degree);
        for (int k = bold.min_degree; k <= bold.max_degree; ++k) {
            CHECK(bold.labels(k) == glued.labels(k));
            CHECK(bold.differential(k) == glued.differential(k));
        }
    }
}

TEST_CASE("matrix squares agree with chain counts on every gap-2 pair") {
    for (const auto& name : {"torus", "klein", "genus2"}) {
        MorseInstance inst = builtin_instance(name);
        GradedComplex d = differential_from_gluing(inst);
        GeneratorTable table = generator_table(inst);
        int checked = 0;
        for (size_t si = 0; si < table.generators.size(); ++si) {
            for (size_t ei = 0; ei < table.generators.size(); ++ei) {
                if (table.gradings[si] - table.gradings[ei] != 2) continue;
                const Generator& s = table.generators[si];
                const Generator& e = table.generators[ei];
                int k = table.gradings[si];
                IntMatrix square = d.differential(k - 1) * d.differential(k);
                Index col = d.generator_index(k, s.label());
                Index row = d.generator_index(k - 2, e.label());
                Int matrix_entry = square(row, col);
                Int chain_count = boundary_count(inst, s.label(), e.label());
                CHECK(matrix_entry == 0);
                CHECK(chain_count == 0);
                ++checked;
            }
        }
        CHECK(checked > 0);
    }
}

TEST_CASE("unfiltered chain sums reproduce raw block composites") {
    MorseInstance klein = builtin_instance("klein");
    // P_u^s d_s+^{u+} at (c <- a): one structural chain (u+, v), product +1.
    CountBlock p_us = block(klein, BlockSel::P_u_s);
    CountBlock d_sp_up = block(klein, BlockSel::d_sp_up);
    IntMatrix composite = p_us.matrix * d_sp_up.matrix;
    Index row = -1, col = -1;
    for (size_t i = 0; i < p_us.target_generators.size(); ++i)
        if (p_us.target_generators[i] == "c") row = static_cast<Index>(i);
    for (size_t j = 0; j < d_sp_up.source_generators.size(); ++j)
        if (d_sp_up.source_generators[j] == "a") col = static_cast<Index>(j);
    REQUIRE(row >= 0);
    REQUIRE(col >= 0);

    Int total = 0;
    for (const auto& bt : enumerate_broken(klein, "a+", "c", 2)) {
        const TrajectoryRecord* first = klein.find_trajectory(bt.pieces[0]);
        const TrajectoryRecord* second = klein.find_trajectory(bt.pieces[1]);
        if (first->arrive != 1) continue;                        // arriving on the + side
        if (!second->xi || *second->xi != XiClass::P) continue;  // P-class arc
        total += Int(first->sign) * Int(second->sign);
    }
    CHECK(composite(row, col) == total);
    CHECK(total == 1);
}

TEST_CASE("side flip at one point preserves gluable counts into swapped generators") {
    for (const auto& name : {"torus", "klein"}) {
        MorseInstance inst = builtin_instance(name);
        MorseInstance flipped = inst;
        for (auto& t : flipped.trajectories) {
            if (t.from == "c" && t.depart) t.depart = -*t.depart;
            if (t.to == "c" && t.arrive) t.arrive = -*t.arrive;
            if (t.carrier == Carrier::fixed && t.xi && (t.from == "c" || t.to == "c"))
                t.xi = (*t.xi == XiClass::P) ? XiClass::R : XiClass::P;
        }
        REQUIRE(validate(flipped).empty());
        auto swap_label = [](std::string label) {
            if (label == "c+") return std::string("c-");
            if (label == "c-") return std::string("c+");
            return label;
        };
        GeneratorTable table = generator_table(inst);
        for (size_t si = 0; si < table.generators.size(); ++si) {
            for (size_t ei = 0; ei < table.generators.size(); ++ei) {
                int gap = table.gradings[si] - table.gradings[ei];
                if (gap < 1 || gap > 2) continue;
                const std::string s = table.generators[si].label();
                const std::string e = table.generators[ei].label();
                if (s == e) continue;
                size_t base = gluable_chains(inst, s, e, gap).size();
                size_t moved =
                    gluable_chains(flipped, swap_label(s), swap_label(e), gap).size();
                CHECK(base == moved);
            }
        }
    }
}

TEST_CASE("malformed chains are rejected") {
    MorseInstance torus = builtin_instance("torus");
    BrokenTrajectory bt;
    bt.pieces = {"u+"};
    bt.start = "a+";
    bt.end = "b";
    CHECK_THROWS_AS(verdict(torus, bt), MalformedChain);

    bt.pieces = {"u+", "t+"};  // b and c do not compose
    bt.end = "d";
    CHECK_THROWS_AS(verdict(torus, bt), MalformedChain);

    bt.pieces = {"u+", "v"};
    bt.end = "d";  // endpoints disagree with the stated generator
    CHECK_THROWS_AS(verdict(torus, bt), MalformedChain);

    // A drop-0 piece whose neighbor carries no side data on the needed axis.
    MorseInstance g2 = builtin_instance("genus2");
    for (auto& t : g2.trajectories)
        if (t.id == "u") t.arrive.reset();
    BrokenTrajectory mixed;
    mixed.pieces = {"u", "v"};
    mixed.start = "a";
    mixed.end = "c+";
    CHECK_THROWS_AS(verdict(g2, mixed), MalformedChain);
}

TEST_CASE("enumerate rejects unknown generators") {
    MorseInstance torus = builtin_instance("torus");
    CHECK_THROWS_AS(enumerate_broken(torus, "z", "d", 1), UnknownGenerator);
    CHECK_THROWS_AS(enumerate_broken(torus, "a+", "a+", 0), UnknownGenerator);
}
