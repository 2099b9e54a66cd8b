#include <doctest.h>

#include <set>

#include "kreeb/caps.hpp"
#include "kreeb/errors.hpp"
#include "kreeb/groups.hpp"

using namespace kreeb;

namespace {

const Caps caps;

Element wz2(long long a0, long long a1, long long k) {
    return Element::wreath({Element::integer(a0), Element::integer(a1)}, k);
}

FiniteExpr z(long long m) { return FiniteExpr::cyclic(m); }

Element zk(long long m, long long k) {
    std::vector<Element> map(m, Element::unit());
    return Element::wreath(std::move(map), k);
}

}  // namespace

TEST_CASE("worked wreath-over-Z multiplication") {
    // (a, 1)(b, 1) = (c, 2) with c(s) = a(s + 1 mod 2) b(s)
    SourceExpr g = SourceExpr::wreath(SourceExpr::z(), 2);
    Element a = wz2(1, 0, 1);
    Element b = wz2(2, 5, 1);
    Element c = mul(g, a, b);
    CHECK(c == wz2(2, 6, 2));
}

TEST_CASE("identity and residue arithmetic") {
    SourceExpr g = SourceExpr::wreath(SourceExpr::z(), 2);
    Element a = wz2(4, -7, 3);
    CHECK(mul(g, identity(g), a) == a);
    CHECK(mul(g, a, identity(g)) == a);
    CHECK(mul(z(3), zk(3, 1), zk(3, 2)) == zk(3, 0));
}

TEST_CASE("inverse formulas") {
    SourceExpr g = SourceExpr::wreath(SourceExpr::z(), 2);
    // inverse of (a(0)=1, a(1)=0; k=1) is (b(0)=0, b(1)=-1; k=-1)
    Element a = wz2(1, 0, 1);
    CHECK(inverse(g, a) == wz2(0, -1, -1));
    CHECK(mul(g, a, inverse(g, a)) == identity(g));
    CHECK(mul(g, inverse(g, a), a) == identity(g));
    CHECK(inverse(SourceExpr::z(), Element::integer(7)) == Element::integer(-7));
    CHECK(inverse(z(3), zk(3, 2)) == zk(3, 1));
}

TEST_CASE("shape mismatch is rejected") {
    SourceExpr g = SourceExpr::wreath(SourceExpr::z(), 2);
    CHECK_THROWS_AS(mul(g, Element::integer(1), wz2(0, 0, 0)), ShapeMismatch);
    CHECK_THROWS_AS(mul(z(3), zk(4, 0), zk(3, 0)), ShapeMismatch);
    CHECK_THROWS_AS(mul(z(3), zk(3, 3), zk(3, 0)), ShapeMismatch);  // unreduced
}

TEST_CASE("order formula against enumeration") {
    CHECK(order(z(2)) == 2);
    CHECK(order(FiniteExpr::wreath(z(2), 2)) == 8);
    CHECK(order(FiniteExpr::product({z(2), z(3)})) == 6);
    for (const FiniteExpr& g :
         {FiniteExpr::trivial(), z(2), z(5), FiniteExpr::product({z(2), z(3)}),
          FiniteExpr::wreath(z(2), 2), FiniteExpr::wreath(z(3), 2),
          FiniteExpr::wreath(FiniteExpr::wreath(z(2), 2), 2),
          FiniteExpr::product({z(2), FiniteExpr::wreath(z(2), 3)})}) {
        std::vector<Element> all = enumerate(g, caps);
        CHECK(order(g) == Int(static_cast<unsigned long>(all.size())));
        std::set<Element> dedup(all.begin(), all.end());
        CHECK(dedup.size() == all.size());
    }
}

TEST_CASE("enumeration is closed under multiplication") {
    FiniteExpr g = FiniteExpr::wreath(z(2), 2);
    std::vector<Element> all = enumerate(g, caps);
    CHECK(all.size() == 8);
    std::set<Element> universe(all.begin(), all.end());
    for (const auto& a : all)
        for (const auto& b : all) CHECK(universe.count(mul(g, a, b)) == 1);
}

TEST_CASE("enumeration respects the cap") {
    Caps small;
    small.max_order = 7;
    CHECK_THROWS_AS(enumerate(FiniteExpr::wreath(z(2), 2), small), CapExceeded);
}

TEST_CASE("group axioms on a small catalog") {
    for (const FiniteExpr& g :
         {z(4), FiniteExpr::product({z(2), z(2)}), FiniteExpr::wreath(z(2), 2)}) {
        std::vector<Element> all = enumerate(g, caps);
        const Element e = identity(g);
        for (const auto& a : all) {
            CHECK(mul(g, a, e) == a);
            CHECK(mul(g, e, a) == a);
            CHECK(mul(g, a, inverse(g, a)) == e);
            for (const auto& b : all)
                for (const auto& c : all)
                    CHECK(mul(g, mul(g, a, b), c) == mul(g, a, mul(g, b, c)));
        }
    }
}

TEST_CASE("generating sets generate") {
    for (const FiniteExpr& g :
         {FiniteExpr::trivial(), z(6), FiniteExpr::product({z(2), z(3)}),
          FiniteExpr::wreath(z(2), 2),
          FiniteExpr::wreath(FiniteExpr::wreath(z(2), 2), 2)}) {
        std::vector<Element> gens = generating_set(g);
        std::set<Element> closure{identity(g)};
        bool grew = true;
        while (grew) {
            grew = false;
            std::vector<Element> snapshot(closure.begin(), closure.end());
            for (const auto& a : snapshot)
                for (const auto& s : gens)
                    if (closure.insert(mul(g, a, s)).second) grew = true;
        }
        CHECK(Int(static_cast<unsigned long>(closure.size())) == order(g));
    }
}

TEST_CASE("structural hom evaluation") {
    // Z -> Triv kills everything
    StructuralHom kill = StructuralHom::kill_z();
    CHECK(kill.eval(Element::integer(5)) == Element::unit());

    // S wr_2 Z -> G wr Z_2 reduces k mod 2
    StructuralHom wr = StructuralHom::wreath(StructuralHom::kill_z(), 2);
    Element x = wz2(4, 9, 3);
    Element image = wr.eval(x);
    CHECK(image == zk(2, 1));

    // products map componentwise, killed factors dropped from the target
    StructuralHom prod = StructuralHom::product({wr, StructuralHom::kill_z()});
    CHECK(prod.source() == SourceExpr::product(
                               {SourceExpr::wreath(SourceExpr::z(), 2), SourceExpr::z()}));
    CHECK(prod.target() == FiniteExpr::cyclic(2));
    Element tuple = Element::tuple({x, Element::integer(-4)});
    CHECK(prod.eval(tuple) == zk(2, 1));
}

TEST_CASE("hom product normalization drops trivial pairs") {
    StructuralHom h = StructuralHom::product(
        {StructuralHom::trivial(), StructuralHom::trivial(), StructuralHom::kill_z()});
    CHECK(h.kind() == StructuralHom::Kind::KillZ);
    CHECK(h.source() == SourceExpr::z());
    CHECK(h.target() == FiniteExpr::trivial());
}

TEST_CASE("lift is a section of eval") {
    StructuralHom wr = StructuralHom::wreath(StructuralHom::kill_z(), 2);
    StructuralHom prod = StructuralHom::product(
        {wr, StructuralHom::kill_z(), StructuralHom::wreath(StructuralHom::trivial(), 3)});
    for (const auto& t : enumerate(prod.target(), caps)) {
        Element lifted = prod.lift(t);
        CHECK(conforms(prod.source(), lifted));
        CHECK(prod.eval(lifted) == t);
    }
}

TEST_CASE("lambda is a homomorphism on sampled elements") {
    StructuralHom wr = StructuralHom::wreath(StructuralHom::kill_z(), 2);
    SourceExpr src = wr.source();
    FiniteExpr tgt = wr.target();
    std::vector<Element> samples;
    for (long long a0 = -1; a0 <= 1; ++a0)
        for (long long a1 = -1; a1 <= 1; ++a1)
            for (long long k = -2; k <= 2; ++k) samples.push_back(wz2(a0, a1, k));
    for (const auto& a : samples)
        for (const auto& b : samples)
            CHECK(wr.eval(mul(src, a, b)) == mul(tgt, wr.eval(a), wr.eval(b)));
}

TEST_CASE("abelianization by enumeration") {
    CHECK(abelianization(FiniteExpr::trivial(), caps).empty());
    CHECK(abelianization(FiniteExpr::product({z(2), z(2)}), caps) ==
          std::vector<long long>{2, 2});
    CHECK(abelianization(FiniteExpr::product({z(2), z(3)}), caps) ==
          std::vector<long long>{6});
    CHECK(abelianization(z(8), caps) == std::vector<long long>{8});
    // Z_2 wr Z_2 has commutator subgroup of order 2 generated by ((1,1),0):
    // the quotient is Z_2 x Z_2
    CHECK(abelianization(FiniteExpr::wreath(z(2), 2), caps) ==
          std::vector<long long>{2, 2});
    // Z_3 wr Z_2: commutator subgroup {(a,-a)} of order 3, quotient Z_6
    CHECK(abelianization(FiniteExpr::wreath(z(3), 2), caps) ==
          std::vector<long long>{6});
}

TEST_CASE("order histogram of Z_2 wr Z_2 matches the dihedral pattern") {
    std::map<long long, long long> hist =
        order_histogram(FiniteExpr::wreath(z(2), 2), caps);
    std::map<long long, long long> expected{{1, 1}, {2, 5}, {4, 2}};
    CHECK(hist == expected);
}

TEST_CASE("expression serialization grammar") {
    CHECK(show(SourceExpr::trivial()) == "Triv");
    CHECK(show(SourceExpr::z()) == "Z");
    CHECK(show(SourceExpr::product({SourceExpr::z(),
                                    SourceExpr::wreath(SourceExpr::trivial(), 2)})) ==
          "Prod(Z, Wr(Triv, 2))");
    CHECK(show(FiniteExpr::wreath(FiniteExpr::cyclic(2), 3)) ==
          "WrC(WrC(Triv, 2), 3)");
    CHECK(friendly_name(z(2)) == "Z_2");
    CHECK(friendly_name(FiniteExpr::wreath(z(2), 2)) == "(Z_2) wr Z_2");
    CHECK(friendly_name(FiniteExpr::product({z(2), z(3)})) == "Z_2 x Z_3");
}

TEST_CASE("product normalization flattens and prunes") {
    SourceExpr nested = SourceExpr::product(
        {SourceExpr::trivial(),
         SourceExpr::product({SourceExpr::z(), SourceExpr::z()}),
         SourceExpr::trivial()});
    CHECK(show(nested) == "Prod(Z, Z)");
    CHECK(SourceExpr::product({SourceExpr::z()}) == SourceExpr::z());
    CHECK(SourceExpr::product({}) == SourceExpr::trivial());
    CHECK(FiniteExpr::product({FiniteExpr::trivial()}) == FiniteExpr::trivial());
}
