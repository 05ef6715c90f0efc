#include <random>

#include "doctest.h"

#include "dclab/bautin.hpp"
#include "dclab/flowsim.hpp"

using namespace dclab;
using bautin::ArcComponent;
using bautin::ArcGerm;
using bautin::Rat;
using bautin::RatPoly;

namespace {

RatPoly rp(std::initializer_list<Rat> coeffs) {
    RatPoly p;
    p.c = coeffs;
    return p;
}

ArcGerm arc5(RatPoly a, RatPoly b, RatPoly c, RatPoly d, RatPoly e) {
    ArcGerm g;
    g.l = {std::move(a), std::move(b), std::move(c), std::move(d), std::move(e)};
    return g;
}

}  // namespace

TEST_SUITE("bautin") {

TEST_CASE("normal form substitution table") {
    {
        const auto c = bautin::normal_form_substitution({1, 0, 0, 0, 0});
        CHECK(c.a[1][0] == 1.0);
        CHECK(c.b[0][1] == -1.0);
        CHECK(c.a[2][0] == 0.0);
        CHECK(c.a[1][1] == 0.0);
        CHECK(c.b[1][1] == 0.0);
    }
    {
        const auto c = bautin::normal_form_substitution({0, 1, 0, 0, 0});
        CHECK(c.a[2][0] == 1.0);
        CHECK(c.a[0][2] == 1.0);
        CHECK(c.a[1][0] == 0.0);
        CHECK(c.b[2][0] == 0.0);
    }
    {
        const auto c = bautin::normal_form_substitution({0, 0, 0, 0, 1});
        CHECK(c.a[1][1] == 2.0);
        CHECK(c.b[2][0] == -1.0);
        CHECK(c.b[0][2] == 1.0);
    }
    // a00, b00, a01, b10 always vanish
    const auto c = bautin::normal_form_substitution({0.1, -0.2, 0.3, 0.4, -0.5});
    CHECK(c.a[0][0] == 0.0);
    CHECK(c.b[0][0] == 0.0);
    CHECK(c.a[0][1] == 0.0);
    CHECK(c.b[1][0] == 0.0);
}

TEST_CASE("focal values") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int k = 0; k < 20; ++k) {
        const geom::Parameters l{U(rng), U(rng), U(rng), U(rng), U(rng)};
        const auto v = bautin::focal_values(l);
        CHECK(v[0] == doctest::Approx(-2.0 * kPi * l.l3).epsilon(1e-13));
    }
    const auto v = bautin::focal_values({0, 1, 0, 0, 1});
    CHECK(v[1] == doctest::Approx(2.0).epsilon(1e-13));
    const auto z = bautin::focal_values({});
    CHECK(z[0] == 0.0);
    CHECK(z[1] == 0.0);
    CHECK(z[2] == 0.0);
    // with l3 = 0: v5 = (2/3)(-2+l2)(-1-2 l2) l2 l5
    std::uniform_real_distribution<double> V(-0.5, 0.5);
    for (int k = 0; k < 10; ++k) {
        const double l2 = V(rng), l5 = V(rng), l4 = V(rng);
        const auto w = bautin::focal_values({0, l2, 0, l4, l5});
        CHECK(w[1] ==
              doctest::Approx((2.0 / 3.0) * (-2.0 + l2) * (-1.0 - 2.0 * l2) * l2 * l5).epsilon(1e-12));
    }
}

TEST_CASE("ideal generators") {
    const auto g = bautin::ideal_generators(Center::first, {0, 1, 0, 0, 1});
    CHECK(g[0] == 0.0);
    CHECK(g[1] == 0.0);
    CHECK(g[2] == 1.0);
    geom::Parameters l{0.1, 0.2, 0, 0, 0};
    l.l3 = -l.l1 - l.l1 * l.l2;
    const auto g2 = bautin::ideal_generators(Center::second, l);
    CHECK(std::abs(g2[0]) < 1e-15);
    const auto gz = bautin::ideal_generators(Center::first, {});
    CHECK((gz[0] == 0.0 && gz[1] == 0.0 && gz[2] == 0.0));
}

TEST_CASE("center membership") {
    {
        const auto m = bautin::center_membership({0, 0.3, 0, 0, 0});
        CHECK(m.rv1);
        CHECK(m.rv2);
        CHECK(m.lv2);
        CHECK(!m.lv1);
    }
    {
        const auto m = bautin::center_membership({0, 0, 0, 0.2, 0.1});
        CHECK(m.lv1);
        CHECK(!m.rv1);
        CHECK(!m.rv2);
        CHECK(!m.lv2);
    }
    {
        const auto m = bautin::center_membership({});
        CHECK((m.rv1 && m.lv1 && m.rv2 && m.lv2));
    }
}

TEST_CASE("LV first integral reduces to H when lambda vanishes") {
    bautin::ThetaTracker st;
    const double v = bautin::lv_first_integral({}, 0.3, 0.8, st);
    // (x^2+y^2)/|1-2y| = H on the second annulus side
    CHECK(v == doctest::Approx(std::abs(geom::hamiltonian(0.3, 0.8))).epsilon(1e-13));
    CHECK_THROWS_AS(bautin::lv_first_integral({0, 0, 0, 0.1, 0}, 0.3, 0.8, st), RangeError);
}

TEST_CASE("LV first integral is conserved along orbits") {
    geom::Parameters l{0.02, 0.1, 0, 0, 0};
    l.l3 = -l.l1 - l.l1 * l.l2;
    const double y0 = flow::section_y(Center::second, 1.5);
    const auto tr = flow::integrate_orbit(l, {0.0, y0, 0.0}, 2.0 * kPi * 1.02, 1e-11);
    bautin::ThetaTracker st;
    double first = 0.0;
    bool started = false;
    for (const auto& s : tr.states) {
        const double v = bautin::lv_first_integral(l, s.x, s.y, st);
        if (!started) {
            first = v;
            started = true;
        }
        CHECK(std::abs(v - first) <= 1e-6 * std::abs(first));
    }
    // section value equals its Poincare return value
    const double d = flow::poincare_displacement(l, Center::second, 1.5, 1e-11);
    CHECK(std::abs(d) < 1e-8);
}

TEST_CASE("v3 sign matches the near-center displacement") {
    // with l1 = 0 the leading focal value is v3 = -2 pi l3
    for (const double l3 : {0.01, -0.01}) {
        const geom::Parameters l{0, 0, l3, 0, 0};
        const double d = flow::poincare_displacement(l, Center::first, -0.05, 1e-11);
        const double v3 = bautin::focal_values(l)[0];
        CHECK(d * v3 > 0.0);  // sign(displacement) = sign(-l3)
    }
}

TEST_CASE("involution basics") {
    const auto z = bautin::involution_parameters({});
    CHECK(z.norm_inf() < 1e-14);
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> U(-0.05, 0.05);
    for (int k = 0; k < 30; ++k) {
        const geom::Parameters l{U(rng), U(rng), U(rng), U(rng), U(rng)};
        const auto li = bautin::involution_parameters(l);
        const auto lii = bautin::involution_parameters(li);
        CHECK(std::abs(lii.l1 - l.l1) < 1e-12);
        CHECK(std::abs(lii.l2 - l.l2) < 1e-12);
        CHECK(std::abs(lii.l3 - l.l3) < 1e-12);
        CHECK(std::abs(lii.l4 - l.l4) < 1e-12);
        CHECK(std::abs(lii.l5 - l.l5) < 1e-12);
    }
}

TEST_CASE("involution exchanges the center varieties") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> U(-0.05, 0.05);
    for (int k = 0; k < 100; ++k) {
        // RV1 -> RV2 and vice versa (same equations)
        const auto mi = bautin::center_membership(
            bautin::involution_parameters({0, U(rng), 0, U(rng), 0}));
        CHECK(mi.rv2);
        // LV1 -> LV2
        const auto mj = bautin::center_membership(
            bautin::involution_parameters({0, 0, 0, U(rng), U(rng)}));
        CHECK(mj.lv2);
        // LV2 -> LV1
        geom::Parameters l{U(rng), U(rng), 0, 0, 0};
        l.l3 = -l.l1 - l.l1 * l.l2;
        const auto mk = bautin::center_membership(bautin::involution_parameters(l));
        CHECK(mk.lv1);
    }
}

TEST_CASE("ideal pullback under the involution") {
    std::mt19937_64 rng(44);
    std::uniform_real_distribution<double> U(-0.05, 0.05);
    for (int k = 0; k < 100; ++k) {
        // on the B2 zero set, the image lies on the B1 zero set
        geom::Parameters l = (k % 2 == 0)
                                 ? geom::Parameters{0, U(rng), 0, U(rng), 0}  // RV2
                                 : geom::Parameters{U(rng), U(rng), 0, 0, 0};  // LV2 below
        if (k % 2 == 1) l.l3 = -l.l1 - l.l1 * l.l2;
        const auto g = bautin::ideal_generators(Center::first, bautin::involution_parameters(l));
        CHECK(std::abs(g[0]) < 1e-12);
        CHECK(std::abs(g[1]) < 1e-12);
        CHECK(std::abs(g[2]) < 1e-12);
    }
}

TEST_CASE("arc format parser") {
    const auto arc = bautin::parse_arc("l1=e; l2=e^2; l3=-e+3/2*e^2; l4=-2*e; l5=e^2");
    CHECK(arc.l[0].at(1) == Rat(1));
    CHECK(arc.l[1].at(2) == Rat(1));
    CHECK(arc.l[2].at(1) == Rat(-1));
    CHECK(arc.l[2].at(2) == Rat(3, 2));
    CHECK(arc.l[3].at(1) == Rat(-2));
    CHECK(arc.l[4].at(2) == Rat(1));
    CHECK_THROWS_AS(bautin::parse_arc("l1=1+e"), InvariantError);  // lambda(0) != 0
    CHECK_THROWS_AS(bautin::parse_arc("l9=e"), RangeError);
    CHECK_THROWS_AS(bautin::parse_arc("l1=0; l2=0; l3=0; l4=0; l5=0"), InvariantError);
}

TEST_CASE("classify: the blow-up family arc") {
    // (e, e^2, -e + l30 e^2, -l40 e, l50 e^2) -> ([1:-1:0], [l30:l50:l40]), E2
    const Rat l30(5), l40(3), l50(7);
    const auto arc = arc5(rp({Rat(0), Rat(1)}), rp({Rat(0), Rat(0), Rat(1)}),
                          rp({Rat(0), Rat(-1), l30}), rp({Rat(0), -l40}),
                          rp({Rat(0), Rat(0), l50}));
    const auto cls = bautin::classify_arc(arc);
    CHECK(cls.component == ArcComponent::E2);
    REQUIRE(cls.p1.has_value());
    REQUIRE(cls.p2.has_value());
    CHECK(*cls.p1 == bautin::IntTriple{1, -1, 0});
    CHECK(*cls.p2 == bautin::IntTriple{5, 7, 3});
}

TEST_CASE("classify: minimal order at lambda_5") {
    // (e^2, e, e^2, e, e) -> ([1:1:1], [0:1:0]), E1
    const auto arc = arc5(rp({Rat(0), Rat(0), Rat(1)}), rp({Rat(0), Rat(1)}),
                          rp({Rat(0), Rat(0), Rat(1)}), rp({Rat(0), Rat(1)}), rp({Rat(0), Rat(1)}));
    const auto cls = bautin::classify_arc(arc);
    CHECK(cls.component == ArcComponent::E1);
    CHECK(*cls.p1 == bautin::IntTriple{1, 1, 1});
    CHECK(*cls.p2 == bautin::IntTriple{0, 1, 0});
}

TEST_CASE("classify: generators vanish only to finite order") {
    // (0, e, 0, 0, e): B1 generators (0, 0, e^2) do not vanish identically
    const auto arc = arc5(rp({}), rp({Rat(0), Rat(1)}), rp({}), rp({}), rp({Rat(0), Rat(1)}));
    const auto cls = bautin::classify_arc(arc);
    CHECK(cls.component == ArcComponent::E1);
    CHECK(*cls.p1 == bautin::IntTriple{0, 0, 1});
    CHECK(*cls.p2 == bautin::IntTriple{0, 1, 0});
}

TEST_CASE("classify: arcs inside the center varieties") {
    // reversible arc: l1 = l3 = l5 = 0 identically -> inside both varieties
    const auto rv = arc5(rp({}), rp({Rat(0), Rat(1)}), rp({}), rp({Rat(0), Rat(2)}), rp({}));
    CHECK(bautin::classify_arc(rv).component == ArcComponent::inside_both_center_varieties);
    // LV1 arc: l1 = l2 = l3 = 0, generic l4, l5: B1 vanishes identically, B2 does not
    const auto lv1 = arc5(rp({}), rp({}), rp({}), rp({Rat(0), Rat(1)}), rp({Rat(0), Rat(1)}));
    const auto cls = bautin::classify_arc(lv1);
    CHECK(cls.component == ArcComponent::inside_center_variety_1);
    CHECK(!cls.p1.has_value());
    CHECK(*cls.p2 == bautin::IntTriple{0, 1, 0});
}

TEST_CASE("floating-point limit converges to the classified point") {
    std::mt19937_64 rng(45);
    std::uniform_int_distribution<int> C(-3, 3), D(1, 3);
    int done = 0;
    while (done < 200) {
        ArcGerm arc;
        for (auto& p : arc.l) {
            p.c.assign(4, Rat(0));
            const int d = D(rng);
            p.c[size_t(d)] = Rat(C(rng));
            if (C(rng) > 1) p.c[3] = Rat(C(rng));
        }
        bool zero = true;
        for (const auto& p : arc.l) zero = zero && p.is_zero();
        if (zero) continue;
        bautin::ArcClass cls;
        cls = bautin::classify_arc(arc);
        ++done;
        const double eps = 1e-4;
        const geom::Parameters lam = arc.eval(eps);
        for (const auto center : {Center::first, Center::second}) {
            const auto& pt = center == Center::first ? cls.p1 : cls.p2;
            if (!pt) continue;
            const auto g = bautin::ideal_generators(center, lam);
            double gn = 0, pn = 0, dot = 0;
            for (int i = 0; i < 3; ++i) {
                gn += g[size_t(i)] * g[size_t(i)];
                pn += double((*pt)[size_t(i)]) * double((*pt)[size_t(i)]);
                dot += g[size_t(i)] * double((*pt)[size_t(i)]);
            }
            if (gn == 0.0) continue;  // below double precision
            const double cosd = 1.0 - std::abs(dot) / std::sqrt(gn * pn);
            CHECK(cosd < 1e-3);
        }
    }
}

TEST_CASE("sampled pairs satisfy the component equations") {
    std::mt19937_64 rng(46);
    for (int k = 0; k < 50; ++k) {
        const auto p1 = bautin::sample_component(EComponent::E1, rng);
        CHECK(p1.c2[0] == 0.0);
        CHECK(p1.c2[2] == 0.0);
        const auto p2 = bautin::sample_component(EComponent::E2, rng);
        CHECK(p2.c1[0] + p2.c1[1] == 0.0);
        CHECK(p2.c1[2] == 0.0);
        const auto p3 = bautin::sample_component(EComponent::E3, rng);
        CHECK(p3.c1[2] == 0.0);
        CHECK(p3.c2[2] == 0.0);
    }
}

}  // TEST_SUITE
