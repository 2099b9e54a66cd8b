#include <doctest.h>

#include <set>

#include "kreeb/errors.hpp"
#include "kreeb/oracle.hpp"
#include "kreeb/torus.hpp"

using namespace kreeb;

namespace {

const Caps caps;

TorusPoint pt(std::vector<std::string> coords) {
    std::vector<Rat> xs;
    for (const auto& c : coords) xs.push_back(parse_rational(c));
    return TorusPoint::reduced(std::move(xs));
}

Element zk(long long m, long long k) {
    std::vector<Element> map(m, Element::unit());
    return Element::wreath(std::move(map), k);
}

// One lift generator per element and the full pair-relation matrix, without
// the orbit collapse or the generator reduction. Independent route for H1.
Homology h1_full_presentation(const CrystalGroup& crystal, const Caps& c) {
    const FiniteExpr& group = crystal.deck_group();
    const std::size_t p = crystal.lattice_rank();
    std::vector<Element> elems = enumerate(group, c);
    std::map<Element, std::size_t> index;
    for (std::size_t i = 0; i < elems.size(); ++i) index[elems[i]] = i;
    const std::size_t cols = p + elems.size();
    std::vector<std::vector<Int>> rows;
    {
        std::vector<Int> row(cols);
        row[p + index.at(identity(group))] = 1;
        rows.push_back(row);
    }
    for (const auto& g : elems) {
        AffineTorusMap mg = crystal.action().evaluate(g);
        for (std::size_t i = 0; i < p; ++i) {
            std::vector<Int> row(cols);
            row[i] += 1;
            row[static_cast<std::size_t>(mg.perm[i])] -= 1;
            rows.push_back(row);
        }
        for (const auto& h : elems) {
            std::vector<Int> row(cols);
            row[p + index.at(g)] += 1;
            row[p + index.at(h)] += 1;
            row[p + index.at(mul(group, g, h))] -= 1;
            std::vector<Int> carry = crystal.cocycle(g, h);
            for (std::size_t i = 0; i < p; ++i) row[i] -= carry[i];
            rows.push_back(row);
        }
    }
    IntMat rel(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t i = 0; i < cols; ++i) rel.at(r, i) = rows[r][i];
    SnfResult snf = smith_normal_form(rel);
    Homology h;
    std::size_t rank = 0;
    for (const auto& d : snf.diag) {
        if (d == 0) continue;
        ++rank;
        if (d > 1) h.torsion.push_back(d);
    }
    h.rank = cols - rank;
    return h;
}

}  // namespace

TEST_CASE("apply examples") {
    AffineTorusMap id2 = AffineTorusMap::identity(2);
    CHECK(apply(id2, pt({"1/4", "3/4"})) == pt({"1/4", "3/4"}));

    AffineTorusMap swap;
    swap.perm = {1, 0};
    swap.trans = {Rat(0), make_rat(1, 2)};
    CHECK(apply(swap, pt({"1/4", "3/4"})) == pt({"3/4", "3/4"}));

    AffineTorusMap half;
    half.perm = {0};
    half.trans = {make_rat(1, 2)};
    CHECK(apply(half, pt({"3/4"})) == pt({"1/4"}));

    CHECK_THROWS_AS(apply(half, pt({"0", "0"})), DimensionMismatch);
}

TEST_CASE("compose examples and the right-action law") {
    AffineTorusMap half;
    half.perm = {0};
    half.trans = {make_rat(1, 2)};
    CHECK(compose(half, half) == AffineTorusMap::identity(1));

    AffineTorusMap b;
    b.perm = {1, 0};
    b.trans = {Rat(0), make_rat(1, 2)};
    AffineTorusMap bb = compose(b, b);
    CHECK(bb.perm == std::vector<int>{0, 1});
    CHECK(bb.trans == std::vector<Rat>{make_rat(1, 2), make_rat(1, 2)});
    CHECK(compose(AffineTorusMap::identity(2), b) == b);

    // apply(apply(x, a), b) == apply(x, compose(a, b)) on sample points
    for (const auto& x : {pt({"0", "1/3"}), pt({"5/6", "1/2"}), pt({"1/7", "2/7"})})
        CHECK(apply(b, apply(bb, x)) == apply(compose(bb, b), x));
}

TEST_CASE("trivial and cyclic actions") {
    TorusAction t0 = act_trivial(0);
    CHECK(t0.dimension() == 0);
    CHECK(t0.evaluate(Element::unit()).is_identity());

    TorusAction t3 = act_trivial(3);
    CHECK(t3.evaluate(Element::unit()) == AffineTorusMap::identity(3));
    CHECK(t3.apply_direct(Element::unit(), pt({"1/3", "1/2", "0"})) ==
          pt({"1/3", "1/2", "0"}));

    TorusAction c2 = act_cyclic(2);
    CHECK(apply(c2.evaluate(zk(2, 1)), pt({"0"})) == pt({"1/2"}));
    TorusAction c3 = act_cyclic(3);
    CHECK(apply(c3.evaluate(zk(3, 2)), pt({"2/3"})) == pt({"1/3"}));
    CHECK(c3.evaluate(zk(3, 0)).is_identity());

    TorusAction c1 = act_cyclic(1);
    CHECK(c1.dimension() == 1);
    CHECK(c1.group() == FiniteExpr::trivial());
}

TEST_CASE("product and extension actions") {
    TorusAction prod = act_product({act_cyclic(2), act_cyclic(3)});
    CHECK(prod.dimension() == 2);
    Element g = Element::tuple({zk(2, 1), zk(3, 1)});
    CHECK(apply(prod.evaluate(g), pt({"0", "0"})) == pt({"1/2", "1/3"}));

    TorusAction single = act_product({act_cyclic(2)});
    CHECK(single.group() == FiniteExpr::cyclic(2));
    CHECK(single.dimension() == 1);

    TorusAction ext = act_extend_trivial(act_cyclic(2), 1);
    CHECK(ext.dimension() == 2);
    CHECK(apply(ext.evaluate(zk(2, 1)), pt({"0", "1/4"})) == pt({"1/2", "1/4"}));
    TorusAction same = act_extend_trivial(act_cyclic(2), 0);
    CHECK(same.dimension() == 1);
    CHECK(ext.evaluate(zk(2, 0)).is_identity());

    TorusAction all_trivial = act_product({act_trivial(1), act_trivial(2)});
    CHECK(all_trivial.dimension() == 3);
    CHECK(all_trivial.group() == FiniteExpr::trivial());
}

TEST_CASE("wreath action formula") {
    // G = Z_2 on T^1 by half-translation, m = 2; element (a(0)=1, a(1)=0, k=1)
    // sends (x0, x1, y) to (x1 + 1/2, x0, y + 1/2)
    TorusAction w = act_wreath(act_cyclic(2), 2);
    CHECK(w.dimension() == 3);
    CHECK(order(w.group()) == 8);
    Element g = Element::wreath({zk(2, 1), zk(2, 0)}, 1);
    CHECK(apply(w.evaluate(g), pt({"1/8", "1/4", "0"})) ==
          pt({"3/4", "1/8", "1/2"}));
    // composing with itself matches the group square
    Element gg = mul(w.group(), g, g);
    CHECK(compose(w.evaluate(g), w.evaluate(g)) == w.evaluate(gg));
    CHECK(w.evaluate(identity(w.group())).is_identity());

    // degenerate wreath over a point reduces to the cyclic rotation
    TorusAction deg = act_wreath(act_trivial(0), 3);
    CHECK(deg.dimension() == 1);
    Element rot = zk(3, 1);
    CHECK(apply(deg.evaluate(rot), pt({"0"})) == pt({"1/3"}));
}

TEST_CASE("action axioms exhaustively for a nested catalog") {
    std::vector<TorusAction> catalog;
    catalog.push_back(act_wreath(act_cyclic(2), 2));
    catalog.push_back(act_product({act_cyclic(2), act_wreath(act_trivial(0), 3)}));
    catalog.push_back(act_extend_trivial(act_wreath(act_cyclic(3), 2), 2));
    for (const auto& action : catalog) {
        std::vector<Element> elems = enumerate(action.group(), caps);
        CHECK(action.evaluate(identity(action.group())).is_identity());
        for (const auto& g : elems)
            for (const auto& h : elems)
                CHECK(compose(action.evaluate(g), action.evaluate(h)) ==
                      action.evaluate(mul(action.group(), g, h)));
    }
}

TEST_CASE("evaluate agrees with direct recipe application") {
    TorusAction w = act_product(
        {act_extend_trivial(act_cyclic(2), 1), act_wreath(act_cyclic(2), 2)});
    for (const auto& g : enumerate(w.group(), caps))
        for (const auto& x :
             {pt({"0", "0", "1/3", "2/3", "1/5"}), pt({"1/7", "1/2", "0", "1/4", "0"})})
            CHECK(apply(w.evaluate(g), x) == w.apply_direct(g, x));
}

TEST_CASE("fixed point criterion") {
    // rotation by k/m has no fixed point
    TorusAction c5 = act_cyclic(5);
    for (long long k = 1; k < 5; ++k)
        CHECK(!fixed_point(c5.evaluate(zk(5, k))).has_value());

    // swap with (1/2, 1/2): cycle sum 1, fixed point (x, x + 1/2)
    AffineTorusMap swap;
    swap.perm = {1, 0};
    swap.trans = {make_rat(1, 2), make_rat(1, 2)};
    auto hit = fixed_point(swap);
    REQUIRE(hit.has_value());
    CHECK(apply(swap, *hit) == *hit);

    // identity fixes everything
    auto id_hit = fixed_point(AffineTorusMap::identity(3));
    REQUIRE(id_hit.has_value());
    CHECK(*id_hit == pt({"0", "0", "0"}));
}

TEST_CASE("is_free certifies the constructions") {
    CHECK(is_free(act_cyclic(6), caps).free);
    CHECK(is_free(act_trivial(4), caps).free);
    CHECK(is_free(act_wreath(act_cyclic(2), 2), caps).free);
    CHECK(is_free(act_product({act_cyclic(2), act_cyclic(3)}), caps).free);
    FreenessReport r = is_free(act_wreath(act_cyclic(2), 2), caps);
    CHECK(r.items.size() == 7);
    for (const auto& item : r.items) CHECK(item.fixed_point_free);
    CHECK(is_free(act_cyclic(2), caps).all_translations);
    CHECK(!is_free(act_wreath(act_cyclic(2), 2), caps).all_translations);
}

TEST_CASE("grid scan agrees with the cycle criterion") {
    std::vector<TorusAction> catalog{act_cyclic(4),
                                     act_wreath(act_cyclic(2), 2),
                                     act_product({act_cyclic(2), act_cyclic(2)})};
    for (const auto& action : catalog)
        for (const auto& g : enumerate(action.group(), caps)) {
            AffineTorusMap m = action.evaluate(g);
            CHECK(fixed_point(m).has_value() ==
                  grid_fixed_point_scan(m, caps).has_value());
        }
    // spec example: swap with (1/2,1/2) scans to (0, 1/2)
    AffineTorusMap swap;
    swap.perm = {1, 0};
    swap.trans = {make_rat(1, 2), make_rat(1, 2)};
    auto hit = grid_fixed_point_scan(swap, caps);
    REQUIRE(hit.has_value());
    CHECK(*hit == pt({"0", "1/2"}));
    auto origin = grid_fixed_point_scan(AffineTorusMap::identity(2), caps);
    REQUIRE(origin.has_value());
    CHECK(*origin == pt({"0", "0"}));
}

TEST_CASE("pi1 of a quotient") {
    // trivial action: the crystal group is the lattice
    CrystalGroup lattice = pi1_presentation(act_trivial(2), caps);
    auto e1 = lattice.lattice({Int(1), Int(0)});
    auto e2 = lattice.lattice({Int(0), Int(1)});
    auto s = lattice.mul(e1, e2);
    CHECK(s.z == std::vector<Int>{1, 1});
    CHECK(lattice.in_lattice(s));

    // half rotation: ghat^2 is the lattice generator, so pi1 is infinite cyclic
    CrystalGroup circle = pi1_presentation(act_cyclic(2), caps);
    auto ghat = circle.lift(zk(2, 1));
    auto sq = circle.mul(ghat, ghat);
    CHECK(circle.in_lattice(sq));
    CHECK(sq.z == std::vector<Int>{1});

    // deck projection is surjective with lattice kernel
    CrystalGroup w = pi1_presentation(act_wreath(act_cyclic(2), 2), caps);
    std::set<Element> image;
    for (const auto& g : enumerate(w.deck_group(), caps)) {
        auto lift = w.lift(g);
        image.insert(w.delta(lift));
        CHECK(w.in_lattice(w.mul(lift, w.inverse(lift))));
    }
    CHECK(Int(static_cast<unsigned long>(image.size())) == order(w.deck_group()));
}

TEST_CASE("crystal group associativity and inverses") {
    CrystalGroup w = pi1_presentation(act_wreath(act_cyclic(2), 2), caps);
    std::vector<CrystalGroup::Elt> sample;
    for (const auto& g : enumerate(w.deck_group(), caps)) {
        sample.push_back(w.lift(g));
        sample.push_back(w.mul(w.lift(g), w.lattice({Int(1), Int(-2), Int(0)})));
    }
    for (const auto& a : sample) {
        CHECK(w.mul(a, w.identity_elt()) == a);
        CHECK(w.mul(w.identity_elt(), a) == a);
        CHECK(w.mul(a, w.inverse(a)) == w.identity_elt());
        for (const auto& b : sample)
            for (const auto& c : sample)
                CHECK(w.mul(w.mul(a, b), c) == w.mul(a, w.mul(b, c)));
    }
}

TEST_CASE("homology of quotients") {
    // trivial action on T^p: H1 = Z^p
    Homology h = homology_h1(pi1_presentation(act_trivial(3), caps), caps);
    CHECK(h == Homology{3, {}});

    // half rotation on T^1: quotient is a circle
    h = homology_h1(pi1_presentation(act_cyclic(2), caps), caps);
    CHECK(h == Homology{1, {}});

    // wreath over a point with m = 2 on T^1: same circle
    h = homology_h1(pi1_presentation(act_wreath(act_trivial(0), 2), caps), caps);
    CHECK(h == Homology{1, {}});
}

TEST_CASE("homology agrees with the full one-lift-per-element presentation") {
    std::vector<TorusAction> catalog;
    catalog.push_back(act_trivial(2));
    catalog.push_back(act_cyclic(2));
    catalog.push_back(act_cyclic(4));
    catalog.push_back(act_product({act_cyclic(2), act_cyclic(3)}));
    catalog.push_back(act_wreath(act_trivial(1), 2));  // block swap + shift
    catalog.push_back(act_wreath(act_cyclic(2), 2));
    catalog.push_back(act_extend_trivial(act_wreath(act_trivial(1), 3), 1));
    for (const auto& action : catalog) {
        CrystalGroup crystal = pi1_presentation(action, caps);
        CHECK(homology_h1(crystal, caps) == h1_full_presentation(crystal, caps));
    }
}
