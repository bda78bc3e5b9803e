#include <map>
#include <random>

#include "doctest.h"
#include "morseq/borel.hpp"
#include "morseq/complex_builders.hpp"
#include "morseq/errors.hpp"

using namespace morseq;

namespace {

// One Z in degree zero with the trivial action.
std::pair<GradedComplex, Involution> point_with_trivial_action() {
    GradedComplex c = make_complex(0, {{"pt"}}, {int_matrix_zero(0, 1)});
    Involution a;
    a.complex = c;
    a.components[0] = int_matrix_identity(1);
    return {c, a};
}

}  // namespace

TEST_CASE("the two-periodic resolution is exact") {
    ResolutionCheckReport report = resolution_check();
    for (const auto& line : report.checks) MESSAGE(line);
    CHECK(report.ok);
    CHECK(report.checks.size() == 3);
}

TEST_CASE("Borel homology of the point is the group homology of Z/2") {
    auto [c, a] = point_with_trivial_action();
    auto h = borel_homology(c, a, 5);
    CHECK(h[0] == HomologyGroup{1, {}});
    CHECK(h[1] == HomologyGroup{0, {2}});
    CHECK(h[2] == HomologyGroup{0, {}});
    CHECK(h[3] == HomologyGroup{0, {2}});
    CHECK(h[4] == HomologyGroup{0, {}});
    CHECK(h[5] == HomologyGroup{0, {2}});
}

TEST_CASE("Borel total complex squares to zero") {
    for (const auto& name : {"torus", "klein"}) {
        MorseInstance inst = builtin_instance(name);
        GradedComplex total =
            borel_total_complex(build(inst, ComplexVariant::bold), g_action(inst), 6);
        CHECK(verify_boundary_squared(total).ok);
    }
}

TEST_CASE("Borel homology of the torus") {
    MorseInstance torus = builtin_instance("torus");
    auto h = borel_homology(build(torus, ComplexVariant::bold), g_action(torus), 5);
    CHECK(h[0] == HomologyGroup{1, {}});
    CHECK(h[1] == HomologyGroup{1, {2, 2}});
    for (int k = 2; k <= 5; ++k) CHECK(h[k] == HomologyGroup{0, {2, 2}});
}

TEST_CASE("Borel homology of the Klein bottle") {
    MorseInstance klein = builtin_instance("klein");
    auto h = borel_homology(build(klein, ComplexVariant::bold), g_action(klein), 5);
    CHECK(h[0] == HomologyGroup{1, {}});
    CHECK(h[1] == HomologyGroup{1, {2, 2}});
    for (int k = 2; k <= 5; ++k) CHECK(h[k] == HomologyGroup{0, {2, 2}});
}

TEST_CASE("truncation stability: extra columns leave low degrees unchanged") {
    MorseInstance torus = builtin_instance("torus");
    GradedComplex bold = build(torus, ComplexVariant::bold);
    Involution action = g_action(torus);
    auto base = borel_homology(bold, action, 3);
    auto wider = borel_homology(bold, action, 3, 7);
    for (int k = 0; k <= 3; ++k) CHECK(base[k] == wider[k]);

    auto [c, a] = point_with_trivial_action();
    auto p_base = borel_homology(c, a, 4);
    auto p_wider = borel_homology(c, a, 4, 9);
    for (int k = 0; k <= 4; ++k) CHECK(p_base[k] == p_wider[k]);
}

namespace {

// Elementary pieces with known equivariant homology, glued by direct sum:
//   fixed point (+1):  Z at j, then Z/2 in odd offsets;
//   sign point   (-1):  Z/2 at every even offset including 0;
//   free orbit (swap):  a single Z at j.
struct ElementaryAction {
    int kind;  // 0: +1 point, 1: -1 point, 2: swapped pair
    int degree;
};

std::pair<GradedComplex, Involution> build_sum(const std::vector<ElementaryAction>& pieces) {
    GradedComplex c;
    Involution a;
    bool first = true;
    for (const auto& piece : pieces) {
        GradedComplex next;
        Involution next_action;
        if (piece.kind == 2) {
            next = shift(make_complex(0, {{"s1", "s2"}}, {int_matrix_zero(0, 2)}), piece.degree);
            next_action.components[piece.degree] = int_matrix(2, 2, {0, 1, 1, 0});
        } else {
            next = shift(make_complex(0, {{"p"}}, {int_matrix_zero(0, 1)}), piece.degree);
            next_action.components[piece.degree] =
                int_matrix(1, 1, {piece.kind == 0 ? 1 : -1});
        }
        if (first) {
            c = next;
            a.components = next_action.components;
            first = false;
            continue;
        }
        // Direct sum of complexes and block-diagonal sum of the actions.
        GradedComplex sum = direct_sum(c, next);
        std::map<int, IntMatrix> comps;
        for (int k = sum.min_degree; k <= sum.max_degree; ++k) {
            IntMatrix block = int_matrix_zero(sum.dim(k), sum.dim(k));
            IntMatrix left = a.components.count(k) ? a.components[k] : int_matrix_identity(c.dim(k));
            IntMatrix right = next_action.components.count(k)
                                  ? next_action.components[k]
                                  : int_matrix_identity(next.dim(k));
            block.block(0, 0, left.rows(), left.cols()) = left;
            block.block(left.rows(), left.cols(), right.rows(), right.cols()) = right;
            comps[k] = block;
        }
        c = sum;
        a.components = comps;
    }
    a.complex = c;
    return {c, a};
}

void expected_groups(const std::vector<ElementaryAction>& pieces, int k_max,
                     std::map<int, std::pair<Index, int>>& table) {
    // table: degree -> (betti, number of Z/2 summands)
    for (int k = 0; k <= k_max; ++k) table[k] = {0, 0};
    for (const auto& piece : pieces) {
        for (int k = piece.degree; k <= k_max; ++k) {
            int offset = k - piece.degree;
            if (piece.kind == 0) {
                if (offset == 0) table[k].first += 1;
                else if (offset % 2 == 1) table[k].second += 1;
            } else if (piece.kind == 1) {
                if (offset % 2 == 0) table[k].second += 1;
            } else {
                if (offset == 0) table[k].first += 1;
            }
        }
    }
}

}  // namespace

TEST_CASE("Borel homology is additive over elementary summands") {
    std::mt19937 rng(90125);
    std::uniform_int_distribution<int> kind(0, 2);
    std::uniform_int_distribution<int> degree(0, 3);
    std::uniform_int_distribution<int> count(1, 5);
    for (int trial = 0; trial < 25; ++trial) {
        std::vector<ElementaryAction> pieces;
        int n = count(rng);
        for (int i = 0; i < n; ++i) pieces.push_back({kind(rng), degree(rng)});
        auto [c, a] = build_sum(pieces);
        REQUIRE(verify_involution(a).ok);

        const int k_max = 5;
        auto got = borel_homology(c, a, k_max);
        std::map<int, std::pair<Index, int>> want;
        expected_groups(pieces, k_max, want);
        for (int k = 0; k <= k_max; ++k) {
            CHECK(got[k].betti == want[k].first);
            CHECK(static_cast<int>(got[k].torsion.size()) == want[k].second);
            for (const Int& t : got[k].torsion) CHECK(t == 2);
        }

        auto wider = borel_homology(c, a, k_max, k_max + 3);
        for (int k = 0; k <= k_max; ++k) CHECK(got[k] == wider[k]);
    }
}

TEST_CASE("borel rejects a non-involution") {
    GradedComplex c = make_complex(0, {{"pt"}}, {int_matrix_zero(0, 1)});
    Involution a;
    a.complex = c;
    a.components[0] = int_matrix(1, 1, {2});
    CHECK_THROWS_AS(borel_total_complex(c, a, 2), NotAnInvolution);
}
