#include <random>

#include "doctest.h"

#include "dclab/curvegeom.hpp"
#include "dclab/pathint.hpp"

using namespace dclab;

namespace {
constexpr cplx kI{0.0, 1.0};
}

TEST_SUITE("curvegeom") {

TEST_CASE("hamiltonian values and singular line") {
    CHECK(geom::hamiltonian(0.0, 0.0) == 0.0);
    CHECK(geom::hamiltonian(0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(geom::hamiltonian(0.0, -1.0) == doctest::Approx(-1.0 / 3.0).epsilon(1e-15));
    CHECK_THROWS_AS(geom::hamiltonian(0.3, 0.5), SingularInputError);
}

TEST_CASE("chart to (z,h)") {
    {
        const auto [z, h] = geom::chart_to_zh(0.0, -1.0);
        CHECK(std::abs(z - (-2.0 * kI / 3.0)) < 1e-15);
        CHECK(h == doctest::Approx(-1.0 / 3.0).epsilon(1e-15));
        CHECK(std::norm(z) == doctest::Approx(h * (h - 1.0)).epsilon(1e-14));
    }
    {
        const auto [z, h] = geom::chart_to_zh(0.0, 2.0);
        CHECK(h == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
        CHECK(std::abs(z - 2.0 * kI / 3.0) < 1e-15);
    }
    {
        const auto [z, h] = geom::chart_to_zh(0.7, -0.3);
        CHECK(z.real() == doctest::Approx(0.7).epsilon(1e-15));
        (void)h;
    }
}

TEST_CASE("chart from (z,h)") {
    {
        const auto [x, y] = geom::chart_from_zh(-2.0 * kI / 3.0, -1.0 / 3.0);
        CHECK(std::abs(x) < 1e-15);
        CHECK(std::abs(y - cplx(-1.0)) < 1e-14);
    }
    {
        // basepoint of the real oval: z = R > 0 lands on (x,y) real
        const double h = -1.0;
        const double R = std::sqrt(h * (h - 1.0));
        const auto [x, y] = geom::chart_from_zh(R, h);
        CHECK(std::abs(x.imag()) < 1e-15);
        CHECK(std::abs(y.imag()) < 1e-15);
        const double xr = x.real(), yr = y.real();
        CHECK(xr * xr + (yr - h) * (yr - h) == doctest::Approx(h * (h - 1.0)).epsilon(1e-13));
    }
    CHECK_THROWS_AS(geom::chart_from_zh(0.0, -1.0), SingularInputError);
}

TEST_CASE("chart round trip on random points") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-4.0, 4.0);
    int done = 0;
    while (done < 1000) {
        const double x = U(rng), y = U(rng);
        if (std::abs(2.0 * y - 1.0) < 0.1) continue;
        double h;
        try {
            h = geom::hamiltonian(x, y);
        } catch (const Error&) {
            continue;
        }
        if (std::abs(h) < 0.05 || std::abs(h - 1.0) < 0.05 || std::abs(h) > 10.0) continue;
        const auto [z, hh] = geom::chart_to_zh(x, y);
        const auto [xb, yb] = geom::chart_from_zh(z, hh);
        CHECK(std::abs(xb - cplx(x)) < 1e-10);
        CHECK(std::abs(yb - cplx(y)) < 1e-10);
        ++done;
    }
}

TEST_CASE("puncture algebra") {
    {
        const auto p = geom::punctures(cplx(-1.0 / 3.0));
        CHECK(std::abs(p.a - kI / 3.0) < 1e-15);
        CHECK(std::abs(p.b - 4.0 * kI / 3.0) < 1e-15);
        CHECK(std::abs(p.R2 - cplx(4.0 / 9.0)) < 1e-15);
    }
    {
        const auto p = geom::punctures(cplx(2.0));
        CHECK(std::abs(p.a + 2.0 * kI) < 1e-15);
        CHECK(std::abs(p.b + kI) < 1e-15);
        CHECK(std::abs(p.R2 - cplx(2.0)) < 1e-15);
    }
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> U(-3.0, 3.0);
    for (int k = 0; k < 50; ++k) {
        const cplx h(U(rng), U(rng));
        if (std::abs(h) < 0.05 || std::abs(h - 1.0) < 0.05) continue;
        const auto p = geom::punctures(h);
        CHECK(std::abs(p.b - p.a - kI) < 1e-15);
        CHECK(std::abs(p.R2 + p.a * p.b) < 1e-13);
    }
    CHECK_THROWS_AS(geom::punctures(cplx(0.0)), SingularInputError);
    CHECK_THROWS_AS(geom::punctures(cplx(1.0)), SingularInputError);
}

TEST_CASE("canonical loop windings") {
    const double h = -1.0 / 3.0;
    const auto p = geom::punctures(cplx(h));
    const auto windings = [&](const path::PathLoop& l) {
        return std::array<int, 3>{path::winding_number(l, p.c), path::winding_number(l, p.a),
                                  path::winding_number(l, p.b)};
    };
    CHECK(windings(geom::canonical_loop(geom::LoopKind::delta, h)) == std::array<int, 3>{1, 1, 0});
    CHECK(windings(geom::canonical_loop(geom::LoopKind::alpha, h)) == std::array<int, 3>{0, 1, 0});
    CHECK(windings(geom::canonical_loop(geom::LoopKind::beta, h)) == std::array<int, 3>{0, 0, 1});
    CHECK(windings(geom::canonical_loop(geom::LoopKind::gamma, h)) == std::array<int, 3>{1, 0, 0});

    const double h2 = 2.0;
    const auto q = geom::punctures(cplx(h2));
    const auto dt = geom::canonical_loop(geom::LoopKind::delta_tilde, h2);
    CHECK(path::winding_number(dt, q.c) == 1);
    CHECK(path::winding_number(dt, q.a) == 0);
    CHECK(path::winding_number(dt, q.b) == 1);
    CHECK(std::abs(dt.segments.front().radius - std::sqrt(2.0)) < 1e-14);

    CHECK_THROWS_AS(geom::canonical_loop(geom::LoopKind::delta, 0.5), RangeError);
    CHECK_THROWS_AS(geom::canonical_loop(geom::LoopKind::delta_tilde, -1.0), RangeError);
}

TEST_CASE("homology relations as winding vectors") {
    // delta = alpha + gamma and delta~ = beta + gamma
    for (const double h : {-0.6, 1.7}) {
        const auto p = geom::punctures(cplx(h));
        const auto wind = [&](geom::LoopKind k) {
            const auto l = geom::canonical_loop(k, h);
            return std::array<int, 3>{path::winding_number(l, p.c), path::winding_number(l, p.a),
                                      path::winding_number(l, p.b)};
        };
        const auto wa = wind(geom::LoopKind::alpha);
        const auto wb = wind(geom::LoopKind::beta);
        const auto wg = wind(geom::LoopKind::gamma);
        if (h < 0) {
            const auto wd = wind(geom::LoopKind::delta);
            for (int i = 0; i < 3; ++i) CHECK(wd[size_t(i)] == wa[size_t(i)] + wg[size_t(i)]);
        } else {
            const auto wd = wind(geom::LoopKind::delta_tilde);
            for (int i = 0; i < 3; ++i) CHECK(wd[size_t(i)] == wb[size_t(i)] + wg[size_t(i)]);
        }
    }
}

TEST_CASE("displayed coefficients of omega_2 and omega_5") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> U(-2.0, -0.1);
    for (int rep = 0; rep < 4; ++rep) {
        const double h = U(rng);
        const auto p = geom::punctures(cplx(h));
        const auto w2 = geom::omega_form(2, h);
        CHECK(std::abs(rat::residue(w2.F, p.c) - cplx(-h / 2)) < 1e-12);
        CHECK(std::abs(rat::residue(w2.F, p.a) - cplx(h / 2)) < 1e-12);
        CHECK(std::abs(rat::residue(w2.F, p.b) - cplx(h / 2)) < 1e-12);
        CHECK(std::abs(rat::residue(w2.Phi, p.a) - kI * h / 2.0) < 1e-12);

        const auto w5 = geom::omega_form(5, h);
        REQUIRE(!w5.F.polynomial_part.empty());
        CHECK(std::abs(w5.F.polynomial_part[0] - cplx(0.5)) < 1e-12);
    }
}

TEST_CASE("forms only have poles at the punctures") {
    for (const double h : {-0.4, 2.2}) {
        const auto p = geom::punctures(cplx(h));
        for (int idx = 1; idx <= 5; ++idx) {
            const auto w = geom::omega_form(idx, h);
            for (const auto& f : {w.F, w.Phi, *w.dF_dh})
                for (const cplx q : f.pole_locations()) {
                    const double d = std::min({std::abs(q - p.a), std::abs(q - p.b), std::abs(q)});
                    CHECK(d < 1e-10);
                }
        }
    }
}

TEST_CASE("pullback oracle agrees with the assembled forms") {
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int idx = 1; idx <= 5; ++idx) {
        int done = 0;
        while (done < 20) {
            double h = U(rng) < 0 ? -2.0 + 1.9 * std::abs(U(rng)) : 1.1 + 1.9 * std::abs(U(rng));
            const cplx z(2.0 * U(rng), 2.0 * U(rng));
            const auto p = geom::punctures(cplx(h));
            if (std::min({std::abs(z), std::abs(z - p.a), std::abs(z - p.b)}) < 0.2) continue;
            const auto w = geom::omega_form(idx, h);
            const auto [Fo, Po] = geom::pullback_oracle(idx, h, z);
            CHECK(std::abs(w.F.eval(z) - Fo) <= 1e-9 * std::max(1.0, std::abs(Fo)));
            CHECK(std::abs(w.Phi.eval(z) - Po) <= 1e-9 * std::max(1.0, std::abs(Po)));
            ++done;
        }
    }
    // specific points from the operation contract
    {
        const auto w = geom::omega_form(2, -1.0);
        const auto [Fo, Po] = geom::pullback_oracle(2, -1.0, std::sqrt(cplx(2.0)));
        CHECK(std::abs(w.F.eval(std::sqrt(cplx(2.0))) - Fo) < 1e-11);
        CHECK(std::abs(w.Phi.eval(std::sqrt(cplx(2.0))) - Po) < 1e-11);
    }
    {
        const cplx z = std::sqrt(2.0) * std::polar(1.0, kPi / 5.0);
        const auto w = geom::omega_form(5, -1.0);
        const auto [Fo, Po] = geom::pullback_oracle(5, -1.0, z);
        CHECK(std::abs(w.F.eval(z) - Fo) < 1e-11);
        CHECK(std::abs(w.Phi.eval(z) - Po) < 1e-11);
    }
    {
        const cplx z = std::sqrt(2.0) * kI + 0.3;
        const auto w = geom::omega_form(1, 2.0);
        const auto [Fo, Po] = geom::pullback_oracle(1, 2.0, z);
        CHECK(std::abs(w.F.eval(z) - Fo) < 1e-11);
        CHECK(std::abs(w.Phi.eval(z) - Po) < 1e-11);
    }
}

TEST_CASE("analytic h-derivative matches finite differences") {
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int idx = 1; idx <= 5; ++idx) {
        for (const double h : {-0.9, 1.5, 1.6, 2.5}) {
            const double e = 1e-5 * std::max(1.0, std::abs(h));
            const auto w = geom::omega_form(idx, h);
            const auto wp = geom::omega_form(idx, h + e);
            const auto wm = geom::omega_form(idx, h - e);
            for (int k = 0; k < 5; ++k) {
                const cplx z(1.0 + U(rng), 1.0 + U(rng));
                const cplx fd = (wp.F.eval(z) - wm.F.eval(z)) / (2.0 * e);
                const cplx an = w.dF_dh->eval(z);
                CHECK(std::abs(an - fd) <= 1e-6 * std::max(1.0, std::abs(an)));
            }
        }
    }
}

TEST_CASE("h-derivative of F5 equals the displayed expansion") {
    std::mt19937_64 rng(15);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (const double h : {-1.3, -0.5, 1.9}) {
        const auto p = geom::punctures(cplx(h));
        const auto w5 = geom::omega_form(5, h);
        auto display = [&](cplx z) {
            const cplx za = z - p.a, zb = z - p.b;
            return -kI * (1.0 / z - 1.0 / za + 1.0 / zb) - (h - 0.5) / (z * z) -
                   0.5 / (za * za) - 2.0 * (h - 1.0) / (zb * zb) +
                   kI * h * (h - 1.0) / (za * za * za) + kI * (h - 1.0) * (h - 1.0) / (zb * zb * zb);
        };
        for (int k = 0; k < 8; ++k) {
            const cplx z(2.0 * U(rng), 2.0 * U(rng));
            if (std::min({std::abs(z), std::abs(z - p.a), std::abs(z - p.b)}) < 0.3) continue;
            const cplx d = display(z);
            CHECK(std::abs(w5.dF_dh->eval(z) - d) <= 1e-9 * std::max(1.0, std::abs(d)));
        }
    }
}

}  // TEST_SUITE
