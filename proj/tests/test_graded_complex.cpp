#include <random>
#include <set>

#include "doctest.h"
#include "morseq/errors.hpp"
#include "morseq/graded_complex.hpp"

using namespace morseq;

namespace {

// 0 -> Z --n--> Z -> 0 in degrees 1, 0.
GradedComplex cyclic_presentation(long n) {
    return make_complex(0, {{"x"}, {"y"}},
                        {int_matrix_zero(0, 1), int_matrix(1, 1, {n})});
}

GradedComplex single_generator(int degree) {
    GradedComplex c = make_complex(0, {{"pt"}}, {int_matrix_zero(0, 1)});
    return shift(c, degree);
}

ChainMap identity_map(const GradedComplex& c) {
    ChainMap f;
    f.source = c;
    f.target = c;
    for (int k = c.min_degree; k <= c.max_degree; ++k)
        f.components[k] = int_matrix_identity(c.dim(k));
    return f;
}

}  // namespace

TEST_CASE("verify_boundary_squared flags the nonzero composite") {
    // d = [1], [1] in a three-step tower: d^2 = [1] != 0.
    GradedComplex c = make_complex(
        0, {{"a"}, {"b"}, {"c"}},
        {int_matrix_zero(0, 1), int_matrix(1, 1, {1}), int_matrix(1, 1, {1})});
    auto report = verify_boundary_squared(c);
    CHECK_FALSE(report.ok);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].degree == 2);
    CHECK(report.violations[0].value == 1);
    CHECK_THROWS_AS(homology(c), NotAComplex);
}

TEST_CASE("homology of small complexes") {
    auto h = homology(cyclic_presentation(2));
    CHECK(h[0] == HomologyGroup{0, {2}});
    CHECK(h[1] == HomologyGroup{0, {}});

    auto point = homology(single_generator(0));
    CHECK(point[0] == HomologyGroup{1, {}});
}

TEST_CASE("mapping cone of the identity is acyclic") {
    GradedComplex c = cyclic_presentation(3);
    CHECK(is_quasi_isomorphism(identity_map(c)));
    for (const auto& [k, group] : homology(mapping_cone(identity_map(c))))
        CHECK(group.trivial());
}

TEST_CASE("mapping cone of the zero map is the suspension") {
    ChainMap zero;
    zero.source = single_generator(0);
    zero.target = GradedComplex{};
    GradedComplex cone = mapping_cone(zero);
    auto h = homology(cone);
    CHECK(h[1] == HomologyGroup{1, {}});
    CHECK_FALSE(is_quasi_isomorphism(zero));
}

TEST_CASE("corrupting a chain map breaks verification") {
    GradedComplex c = cyclic_presentation(2);
    ChainMap f = identity_map(c);
    CHECK(verify_chain_map(f).ok);
    f.components[1](0, 0) = -1;  // no longer commutes with d
    auto report = verify_chain_map(f);
    CHECK_FALSE(report.ok);
    REQUIRE_FALSE(report.violations.empty());
    CHECK(report.violations[0].degree == 1);
    CHECK_THROWS_AS(mapping_cone(f), NotAChainMap);
}

TEST_CASE("subcomplex and quotient") {
    // Z<u> + Z<v> in degree 1 mapping to Z<p> + Z<q>: d(u) = p, d(v) = q.
    GradedComplex c = make_complex(
        0, {{"p", "q"}, {"u", "v"}},
        {int_matrix_zero(0, 2), int_matrix(2, 2, {1, 0, 0, 1})});
    std::map<int, std::vector<std::string>> closed{{1, {"u"}}, {0, {"p"}}};
    GradedComplex sub = subcomplex(c, closed);
    CHECK(sub.dim(1) == 1);
    CHECK(sub.differential(1)(0, 0) == 1);

    GradedComplex quot = quotient_complex(c, closed);
    CHECK(quot.labels(1) == std::vector<std::string>{"v"});
    CHECK(quot.differential(1)(0, 0) == 1);

    std::map<int, std::vector<std::string>> not_closed{{1, {"u"}}};
    CHECK_THROWS_AS(subcomplex(c, not_closed), NotClosedUnderDifferential);

    // Empty subset: the quotient is the complex itself.
    GradedComplex same = quotient_complex(c, {});
    CHECK(same.labels(1) == c.labels(1));
    CHECK(same.differential(1) == c.differential(1));
}

TEST_CASE("involution verification") {
    GradedComplex c = cyclic_presentation(2);
    Involution a;
    a.complex = c;
    a.components[0] = int_matrix(1, 1, {1});
    a.components[1] = int_matrix(1, 1, {1});
    CHECK(verify_involution(a).ok);

    a.components[1] = int_matrix(1, 1, {-1});  // squares fine, fails to commute
    auto report = verify_involution(a);
    CHECK_FALSE(report.ok);

    a.components[1] = int_matrix(1, 1, {2});
    CHECK_FALSE(verify_involution(a).ok);
}

namespace {

// Multiset of prime powers: the basis-free form of a finite abelian group.
std::multiset<long> primary_decomposition(const std::vector<Int>& torsion) {
    std::multiset<long> out;
    for (const Int& t : torsion) {
        long n = t.get_si();
        for (long p = 2; p * p <= n; ++p) {
            long power = 1;
            while (n % p == 0) {
                power *= p;
                n /= p;
            }
            if (power > 1) out.insert(power);
        }
        if (n > 1) out.insert(n);
    }
    return out;
}

}  // namespace

TEST_CASE("homology of a direct sum is the degreewise sum") {
    std::mt19937 rng(5150);
    std::uniform_int_distribution<long> entry(-6, 6);
    std::uniform_int_distribution<int> deg(-1, 2);
    for (int trial = 0; trial < 30; ++trial) {
        GradedComplex a = shift(cyclic_presentation(entry(rng)), deg(rng));
        GradedComplex b = shift(cyclic_presentation(entry(rng)), deg(rng));
        GradedComplex sum = direct_sum(a, b);
        auto ha = homology(a), hb = homology(b), hs = homology(sum);
        for (int k = sum.min_degree; k <= sum.max_degree; ++k) {
            Index betti = 0;
            std::vector<Int> torsion;
            for (const auto* h : {&ha, &hb}) {
                auto it = h->find(k);
                if (it == h->end()) continue;
                betti += it->second.betti;
                torsion.insert(torsion.end(), it->second.torsion.begin(),
                               it->second.torsion.end());
            }
            CHECK(hs[k].betti == betti);
            CHECK(primary_decomposition(hs[k].torsion) == primary_decomposition(torsion));
        }
    }
}

TEST_CASE("shifting a complex shifts its homology") {
    GradedComplex c = cyclic_presentation(4);
    auto base = homology(c);
    auto shifted = homology(shift(c, 1));
    for (const auto& [k, group] : base) CHECK(shifted[k + 1] == group);
}
