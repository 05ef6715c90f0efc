#include "dclab/melnikov.hpp"

#include <algorithm>
#include <cmath>

namespace dclab::mel {

namespace {

constexpr cplx kI{0.0, 1.0};

void require_range(Center center, double h, const char* who) {
    if (center == Center::first && !(h < 0.0)) throw RangeError(std::string(who) + ": first center needs h < 0");
    if (center == Center::second && !(h > 1.0)) throw RangeError(std::string(who) + ": second center needs h > 1");
}

path::Evaluator pf_evaluator(const rat::PartialFractionForm& f) {
    return [f](cplx z) { return f.eval(z); };
}

}  // namespace

double m1_closed(Center center, const geom::Parameters& lambda, double h) {
    require_range(center, h, "m1_closed");
    if (center == Center::first)
        return -2.0 * kPi * h * (h * (lambda.l1 + lambda.l3) - lambda.l1);
    return 2.0 * kPi * (h - 1.0) *
           ((h - 1.0) * (lambda.l1 + lambda.l3) + lambda.l1 + lambda.l3 - 2.0 * lambda.l5);
}

double m1_residues(Center center, const geom::Parameters& lambda, double h) {
    require_range(center, h, "m1_residues");
    const auto loop = geom::canonical_loop(
        center == Center::first ? geom::LoopKind::delta : geom::LoopKind::delta_tilde, h);
    const rat::PartialFractionForm F = geom::omega_combined_F(lambda, h);
    const cplx val = rat::residue_sum_integral(F, loop);
    if (std::abs(val.imag()) > 1e-9 * std::max(1.0, std::abs(val.real())))
        throw Error("m1_residues: residue sum is not real");
    return kFirstOrderOrientation * val.real();
}

rat::PartialFractionForm gelfand_leray(const geom::RelativeOneForm& form) {
    rat::PartialFractionForm dPhi_dz = form.Phi.derivative_z();
    if (form.dF_dh) return *form.dF_dh + dPhi_dz * (-1.0);
    return dPhi_dz * (-1.0);
}

double m2_closed(Center center, double h) {
    require_range(center, h, "m2_closed");
    if (center == Center::first)
        return 2.0 * kPi * (h + 0.5 * h * h + std::log1p(-h));
    return kPi * (h - 1.0) * (h - 4.0) + 2.0 * kPi * std::log(h);
}

double m2_part_w5_glw2(double h, double tol) {
    if (!(h < 0.0)) throw RangeError("m2_part_w5_glw2: h < 0 required");
    const auto loop = geom::canonical_loop(geom::LoopKind::delta, h);
    const auto w2 = geom::omega_form(2, h);
    const auto w5 = geom::omega_form(5, h);
    const auto gl2 = gelfand_leray(w2);
    const auto r = path::iterated_integral2(pf_evaluator(w5.F), pf_evaluator(gl2), loop, tol);
    return kSecondOrderNormalization * (-r.value.real());
}

double m2_part_w2_glw5(double h, double tol) {
    if (!(h < 0.0)) throw RangeError("m2_part_w2_glw5: h < 0 required");
    const auto loop = geom::canonical_loop(geom::LoopKind::delta, h);
    const auto w2 = geom::omega_form(2, h);
    const auto w5 = geom::omega_form(5, h);
    const auto gl5 = gelfand_leray(w5);
    const auto r = path::iterated_integral2(pf_evaluator(w2.F), pf_evaluator(gl5), loop, tol);
    return kSecondOrderNormalization * (-r.value.real());
}

double m2_iterated(Center center, double h, double tol) {
    require_range(center, h, "m2_iterated");
    if (center == Center::first)
        return m2_part_w5_glw2(h, 0.5 * tol) + m2_part_w2_glw5(h, 0.5 * tol);

    // Flow orientation: the second-center ovals run clockwise in the z chart.
    const auto loop = geom::canonical_loop(geom::LoopKind::delta_tilde, h).reversed();
    const auto w1 = geom::omega_form(1, h);
    const auto w3 = geom::omega_form(3, h);
    const auto w4 = geom::omega_form(4, h);
    // The second-center pair couples omega_3 - omega_1 with omega_4 (the
    // lambda_3 lambda_4 slot of the displacement).
    geom::RelativeOneForm wd;
    wd.F = w3.F + w1.F * (-1.0);
    wd.Phi = w3.Phi + w1.Phi * (-1.0);
    wd.dF_dh = *w3.dF_dh + *w1.dF_dh * (-1.0);
    const auto gld = gelfand_leray(wd);
    const auto gl4 = gelfand_leray(w4);
    const auto ra = path::iterated_integral2(pf_evaluator(wd.F), pf_evaluator(gl4), loop, 0.5 * tol);
    const auto rb = path::iterated_integral2(pf_evaluator(w4.F), pf_evaluator(gld), loop, 0.5 * tol);
    return kSecondOrderNormalization * (-(ra.value.real() + rb.value.real()));
}

cplx commutator_integral(const geom::Parameters& lambda, cplx h, CommutatorMode mode, double tol) {
    const geom::Punctures p = geom::punctures(h);
    rat::PartialFractionForm F, GL;
    for (int i = 1; i <= 5; ++i) {
        const double li = lambda[i];
        if (li == 0.0) continue;
        const auto w = geom::omega_form(i, h);
        F = F + w.F * li;
        GL = GL + gelfand_leray(w) * li;
    }
    const cplx two_pi_i(0.0, 2.0 * kPi);
    if (mode == CommutatorMode::determinant) {
        const cplx A1 = two_pi_i * rat::residue(F, p.a);
        const cplx A2 = two_pi_i * rat::residue(GL, p.a);
        const cplx B1 = two_pi_i * rat::residue(F, p.b);
        const cplx B2 = two_pi_i * rat::residue(GL, p.b);
        // Order fixed by the direct mode below (word read right to left).
        return A2 * B1 - A1 * B2;
    }
    const auto alpha = geom::canonical_loop(geom::LoopKind::alpha, h);
    const auto beta = geom::canonical_loop(geom::LoopKind::beta, h);
    const cplx basept = std::sqrt(p.R2);
    const std::array<cplx, 3> punct = {p.c, p.a, p.b};
    // (alpha, beta) = alpha^-1 beta^-1 alpha beta, rightmost factor first.
    const std::array<std::pair<const path::PathLoop*, int>, 4> word = {
        std::pair{&beta, 1}, std::pair{&alpha, 1}, std::pair{&beta, -1}, std::pair{&alpha, -1}};
    const auto K = path::compose_loops(word, basept, punct);
    return path::iterated_integral2(pf_evaluator(F), pf_evaluator(GL), K, tol).value;
}

MonodromyClass monodromy_action(TurnAround around, MonodromyClass cls, Center center) {
    const bool acts = (center == Center::first && around == TurnAround::h1) ||
                      (center == Center::second && around == TurnAround::h0);
    if (acts) cls.k_comm += cls.k_delta;
    return cls;
}

double bifurcation_pair_eval(const BifurcationPair& pair, double h, Center center) {
    require_range(center, h, "bifurcation_pair_eval");
    if (center == Center::first) {
        const auto& c = pair.c1;
        return h * (c[0] * (h - 1.0) + c[1] * h + c[2] * m2_closed(Center::first, h));
    }
    const auto& c = pair.c2;
    return (h - 1.0) * (c[0] * (h - 1.0) - 2.0 * c[1] + c[2] * m2_closed(Center::second, h));
}

std::array<rat::PartialFractionForm, 7> tracked_forms(double h) {
    std::array<rat::PartialFractionForm, 7> out;
    geom::RelativeOneForm w2, w5;
    for (int i = 1; i <= 5; ++i) {
        auto w = geom::omega_form(i, h);
        if (i == 2) w2 = w;
        if (i == 5) w5 = w;
        out[size_t(i - 1)] = std::move(w.F);
    }
    out[5] = gelfand_leray(w2);
    out[6] = gelfand_leray(w5);
    return out;
}

double shuffle_defect(const rat::PartialFractionForm& a, const rat::PartialFractionForm& b,
                      const path::PathLoop& loop, double tol) {
    const auto ab = path::iterated_integral2(pf_evaluator(a), pf_evaluator(b), loop, tol);
    const auto ba = path::iterated_integral2(pf_evaluator(b), pf_evaluator(a), loop, tol);
    const cplx ia = rat::residue_sum_integral(a, loop);
    const cplx ib = rat::residue_sum_integral(b, loop);
    return std::abs(ab.value + ba.value - ia * ib);
}

namespace {

double bisect_zero(const std::function<double(double)>& f, double lo, double hi,
                   double flo) {
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo < 1e-12) return mid;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::vector<double> zeros_on_grid(const std::function<double(double)>& f, double lo, double hi,
                                  int grid) {
    std::vector<double> zs;
    const double dx = (hi - lo) / grid;
    double x0 = lo, f0 = f(lo);
    for (int k = 1; k <= grid; ++k) {
        const double x1 = (k == grid) ? hi : lo + k * dx;
        const double f1 = f(x1);
        if ((f0 > 0) != (f1 > 0)) {
            const double z = bisect_zero(f, x0, x1, f0);
            if (zs.empty() || z - zs.back() > 1e-9) zs.push_back(z);
        }
        x0 = x1;
        f0 = f1;
    }
    return zs;
}

}  // namespace

ZeroCount count_zeros(const std::function<double(double)>& f, double lo, double hi, int grid) {
    if (!(lo < hi)) throw RangeError("count_zeros: empty interval");
    if (std::abs(f(lo)) <= 1e-12 || std::abs(f(hi)) <= 1e-12)
        throw SingularInputError("count_zeros: endpoint is a zero");
    const std::vector<double> base = zeros_on_grid(f, lo, hi, grid);
    const std::vector<double> fine = zeros_on_grid(f, lo, hi, 2 * grid);
    ZeroCount out;
    out.zeros = fine;
    out.count = static_cast<int>(fine.size());
    if (base.size() != fine.size()) {
        out.tangency_suspected = true;
        // Report the coarse-grid zeros without a fine-grid partner.
        for (double z : base) {
            bool matched = false;
            for (double w : fine)
                if (std::abs(z - w) < 1e-6) matched = true;
            if (!matched) out.tangency_locations.push_back(z);
        }
    }
    return out;
}

}  // namespace dclab::mel
