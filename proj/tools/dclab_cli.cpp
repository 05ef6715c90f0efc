// dclab: bifurcation laboratory for quadratic perturbations of the
// isochronous Lotka-Volterra double center.
//
// Subcommands: melnikov, shuffle-check, commutator, census, classify-arc,
// sweep-components. Numeric outputs are reproducible bit-for-bit for a fixed
// seed and tolerance set; worker count is capped by DCLAB_THREADS.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "dclab/bautin.hpp"
#include "dclab/flowsim.hpp"
#include "dclab/melnikov.hpp"
#include "dclab/parallel.hpp"

using nlohmann::json;
using namespace dclab;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr const char* kNormalizationTag = "m2.v1 (global -1, flow-oriented cycles)";

struct HGrid {
    double lo = 0, hi = 0;
    int n = 0;
};

HGrid parse_grid(const std::string& text, bool with_count) {
    HGrid g;
    char c1, c2;
    std::istringstream ss(text);
    if (with_count) {
        if (!(ss >> g.lo >> c1 >> g.hi >> c2 >> g.n) || c1 != ':' || c2 != ':' || g.n < 1)
            throw RangeError("grid must be lo:hi:n, got '" + text + "'");
    } else {
        if (!(ss >> g.lo >> c1 >> g.hi) || c1 != ':')
            throw RangeError("range must be lo:hi, got '" + text + "'");
        g.n = 0;
    }
    if (!(g.lo < g.hi)) throw RangeError("grid bounds must satisfy lo < hi");
    return g;
}

void check_grid_clears_critical(const HGrid& g) {
    for (const double c : {0.0, 1.0})
        if (g.lo <= c + 1e-4 && g.hi >= c - 1e-4)
            throw RangeError("h-grid must avoid the critical values 0 and 1 by at least 1e-4");
}

geom::Parameters parse_lambda(const std::vector<double>& v) {
    if (v.size() != 5) throw RangeError("--lambda needs five comma-separated values");
    return {v[0], v[1], v[2], v[3], v[4]};
}

json meta_block(const std::string& command, std::optional<long> seed, json tolerances) {
    json m{{"tool", "dclab"},
           {"version", kVersion},
           {"command", command},
           {"normalization", kNormalizationTag},
           {"threads", worker_count()},
           {"tolerances", std::move(tolerances)}};
    if (seed) m["seed"] = *seed;
    return m;
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path);
    if (!f) throw RangeError("cannot open output file: " + out_path);
    f << text;
}

std::string csv_escape_none(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------------------

int run_melnikov(int center, int order, const std::string& grid_text,
                 const std::vector<double>& lambda_v, bool oracle, double tol,
                 const std::string& format, const std::string& out) {
    const HGrid grid = parse_grid(grid_text, true);
    check_grid_clears_critical(grid);
    const Center center_e = center == 1 ? Center::first : Center::second;
    if (center == 1 && grid.hi >= 0.0) throw RangeError("center 1 needs an h-grid below 0");
    if (center == 2 && grid.lo <= 1.0) throw RangeError("center 2 needs an h-grid above 1");
    const geom::Parameters lambda = parse_lambda(lambda_v);

    std::vector<double> hs(static_cast<size_t>(grid.n));
    for (int k = 0; k < grid.n; ++k)
        hs[size_t(k)] = grid.n == 1 ? grid.lo : grid.lo + (grid.hi - grid.lo) * k / (grid.n - 1);

    std::vector<double> closed(hs.size()), orac(hs.size(), 0.0);
    for (size_t k = 0; k < hs.size(); ++k)
        closed[k] = order == 1 ? mel::m1_closed(center_e, lambda, hs[k])
                               : mel::m2_closed(center_e, hs[k]);
    if (oracle) {
        parallel_for(static_cast<int>(hs.size()), [&](int k) {
            orac[size_t(k)] = order == 1 ? mel::m1_residues(center_e, lambda, hs[size_t(k)])
                                         : mel::m2_iterated(center_e, hs[size_t(k)], tol);
        });
    }

    double max_delta = 0.0;
    for (size_t k = 0; k < hs.size(); ++k)
        if (oracle) max_delta = std::max(max_delta, std::abs(closed[k] - orac[k]));

    if (format == "csv") {
        std::ostringstream ss;
        ss << "# dclab melnikov: center=" << center << " order=" << order
           << "; h dimensionless, values in displacement units; normalization " << kNormalizationTag
           << "\n";
        ss << (oracle ? "h,closed,oracle,abs_delta\n" : "h,closed\n");
        for (size_t k = 0; k < hs.size(); ++k) {
            ss << csv_escape_none(hs[k]) << ',' << csv_escape_none(closed[k]);
            if (oracle)
                ss << ',' << csv_escape_none(orac[k]) << ','
                   << csv_escape_none(std::abs(closed[k] - orac[k]));
            ss << '\n';
        }
        emit(out, ss.str());
    } else {
        json rows = json::array();
        for (size_t k = 0; k < hs.size(); ++k) {
            json row{{"h", hs[k]}, {"closed", closed[k]}};
            if (oracle) {
                row["oracle"] = orac[k];
                row["abs_delta"] = std::abs(closed[k] - orac[k]);
            }
            rows.push_back(std::move(row));
        }
        json doc{{"meta", meta_block("melnikov", std::nullopt, {{"oracle_tol", tol}})},
                 {"data", {{"center", center}, {"order", order}, {"rows", rows}}}};
        if (oracle) doc["data"]["max_abs_delta"] = max_delta;
        emit(out, doc.dump(2) + "\n");
    }
    return 0;
}

int run_shuffle_check(double h, long seed, double tol, const std::string& format,
                      const std::string& out) {
    if (std::abs(h) < 1e-4 || std::abs(h - 1.0) < 1e-4)
        throw RangeError("--h must avoid the critical values 0 and 1 by 1e-4");
    // The seed rotates every loop basepoint; defects are basepoint independent.
    std::mt19937_64 rng(static_cast<unsigned long long>(seed));
    std::uniform_real_distribution<double> U(0.0, 2.0 * kPi);
    const double spin = U(rng);

    const auto forms = mel::tracked_forms(h);
    const char* form_names[7] = {"w1", "w2", "w3", "w4", "w5", "GL(w2)", "GL(w5)"};

    struct LoopEntry {
        std::string name;
        path::PathLoop loop;
    };
    std::vector<LoopEntry> loops;
    auto spin_loop = [&](path::PathLoop lp) {
        for (auto& s : lp.segments)
            if (s.kind == path::Segment::Kind::arc) {
                s.t0 += spin;
                s.t1 += spin;
            }
        lp.basepoint = lp.segments.front().start();
        return lp;
    };
    loops.push_back({"alpha", spin_loop(geom::canonical_loop(geom::LoopKind::alpha, h))});
    loops.push_back({"beta", spin_loop(geom::canonical_loop(geom::LoopKind::beta, h))});
    loops.push_back({"gamma", spin_loop(geom::canonical_loop(geom::LoopKind::gamma, h))});
    if (h < 0.0)
        loops.push_back({"delta", spin_loop(geom::canonical_loop(geom::LoopKind::delta, h))});
    if (h > 1.0)
        loops.push_back({"delta_tilde",
                         spin_loop(geom::canonical_loop(geom::LoopKind::delta_tilde, h))});

    struct Item {
        int i, j, l;
        double defect;
    };
    std::vector<Item> items;
    for (int l = 0; l < static_cast<int>(loops.size()); ++l)
        for (int i = 0; i < 7; ++i)
            for (int j = 0; j < 7; ++j) items.push_back({i, j, l, 0.0});
    parallel_for(static_cast<int>(items.size()), [&](int k) {
        auto& it = items[size_t(k)];
        it.defect = mel::shuffle_defect(forms[size_t(it.i)], forms[size_t(it.j)],
                                        loops[size_t(it.l)].loop, tol);
    });

    int failures = 0;
    double worst = 0.0;
    for (const auto& it : items) {
        worst = std::max(worst, it.defect);
        if (it.defect >= 1e-7) ++failures;
    }

    if (format == "csv") {
        std::ostringstream ss;
        ss << "# dclab shuffle-check: h=" << h << " seed=" << seed
           << "; defect = |I(a,b)+I(b,a)-(int a)(int b)|, pass threshold 1e-7; normalization "
           << kNormalizationTag << "\n";
        ss << "form_a,form_b,loop,defect,pass\n";
        for (const auto& it : items)
            ss << form_names[it.i] << ',' << form_names[it.j] << ',' << loops[size_t(it.l)].name
               << ',' << csv_escape_none(it.defect) << ',' << (it.defect < 1e-7 ? 1 : 0) << '\n';
        emit(out, ss.str());
    } else {
        json rows = json::array();
        for (const auto& it : items)
            rows.push_back({{"form_a", form_names[it.i]},
                            {"form_b", form_names[it.j]},
                            {"loop", loops[size_t(it.l)].name},
                            {"defect", it.defect},
                            {"pass", it.defect < 1e-7}});
        json doc{{"meta", meta_block("shuffle-check", seed, {{"quadrature_tol", tol}})},
                 {"data",
                  {{"h", h}, {"worst_defect", worst}, {"failures", failures}, {"rows", rows}}}};
        emit(out, doc.dump(2) + "\n");
    }
    return failures == 0 ? 0 : 3;
}

int run_commutator(const std::vector<double>& lambda_v, double h_re, double h_im, double tol,
                   const std::string& out) {
    const geom::Parameters lambda = parse_lambda(lambda_v);
    const cplx h(h_re, h_im);
    const cplx det = mel::commutator_integral(lambda, h, mel::CommutatorMode::determinant, tol);
    const cplx dir = mel::commutator_integral(lambda, h, mel::CommutatorMode::direct, tol);
    json doc{{"meta", meta_block("commutator", std::nullopt, {{"quadrature_tol", tol}})},
             {"data",
              {{"h", {h.real(), h.imag()}},
               {"determinant", {det.real(), det.imag()}},
               {"direct", {dir.real(), dir.imag()}},
               {"mode_disagreement", std::abs(det - dir)},
               {"reference_minus_4pi2_l2l5", -4.0 * kPi * kPi * lambda.l2 * lambda.l5}}}};
    emit(out, doc.dump(2) + "\n");
    return 0;
}

json census_to_json(const flow::Census& c) {
    return {{"i", c.i},
            {"j", c.j},
            {"cycle_levels", {{"first", c.first_levels}, {"second", c.second_levels}}},
            {"diagnostics",
             {{"noise_floor", c.diag.noise_floor},
              {"sub_noise_crossings", c.diag.sub_noise_crossings},
              {"tangency_h", c.diag.tangency_h},
              {"non_hyperbolic_h", c.diag.non_hyperbolic_h},
              {"notes", c.diag.notes},
              {"desk_scale_note",
               "counts cover the desk-scale h ranges only, not arbitrarily large compact discs"}}}};
}

int run_census(const std::vector<double>& lambda_v, const std::string& h1_text,
               const std::string& h2_text, double rel_tol, const std::string& out) {
    const geom::Parameters lambda = parse_lambda(lambda_v);
    const HGrid r1 = parse_grid(h1_text, false);
    const HGrid r2 = parse_grid(h2_text, false);
    check_grid_clears_critical(r1);
    check_grid_clears_critical(r2);
    if (r1.hi >= 0.0) throw RangeError("--h1 must lie below 0");
    if (r2.lo <= 1.0) throw RangeError("--h2 must lie above 1");
    const auto c = flow::limit_cycle_census(lambda, {r1.lo, r1.hi}, {r2.lo, r2.hi}, rel_tol);
    json doc{{"meta", meta_block("census", std::nullopt, {{"rel_tol", rel_tol}})},
             {"data", census_to_json(c)}};
    emit(out, doc.dump(2) + "\n");
    return 0;
}

int run_classify_arc(const std::string& arc_text, const std::string& out) {
    const bautin::ArcGerm arc = bautin::parse_arc(arc_text);
    const bautin::ArcClass cls = bautin::classify_arc(arc);
    auto triple = [](const std::optional<bautin::IntTriple>& t) -> json {
        if (!t) return nullptr;
        return json::array({(*t)[0], (*t)[1], (*t)[2]});
    };
    json doc{{"meta", meta_block("classify-arc", std::nullopt, json::object())},
             {"data",
              {{"p1", triple(cls.p1)},
               {"p2", triple(cls.p2)},
               {"component", bautin::to_string(cls.component)}}}};
    emit(out, doc.dump(2) + "\n");
    return 0;
}

int run_sweep_components(int samples, long seed, int grid, const std::string& format,
                         const std::string& out) {
    struct Cell {
        int i = 0, j = 0, count = 0;
    };
    json data = json::object();
    std::ostringstream csv;
    csv << "# dclab sweep-components: zero counts of sampled bifurcation pairs per component; "
           "intervals (-50,-1e-4) and (1+1e-4,50); grid " << grid << "; normalization "
        << kNormalizationTag << "\n";
    csv << "component,i,j,count\n";
    for (const auto [comp, name] : {std::pair{EComponent::E1, "E1"},
                                    std::pair{EComponent::E2, "E2"},
                                    std::pair{EComponent::E3, "E3"}}) {
        std::vector<std::pair<int, int>> counts(static_cast<size_t>(samples));
        parallel_for(samples, [&](int k) {
            std::mt19937_64 rng(static_cast<unsigned long long>(seed) ^
                                (0x9e3779b97f4a7c15ull * (static_cast<unsigned long long>(k) + 1)) ^
                                (static_cast<unsigned long long>(comp) << 56));
            const BifurcationPair pair = bautin::sample_component(comp, rng);
            const auto zi = mel::count_zeros(
                [&](double h) { return mel::bifurcation_pair_eval(pair, h, Center::first); },
                -50.0, -1e-4, grid);
            const auto zj = mel::count_zeros(
                [&](double h) { return mel::bifurcation_pair_eval(pair, h, Center::second); },
                1.0 + 1e-4, 50.0, grid);
            counts[size_t(k)] = {zi.count, zj.count};
        });
        std::map<std::pair<int, int>, int> hist;
        for (const auto& c : counts) hist[c]++;
        json jh = json::array();
        for (const auto& [ij, n] : hist) {
            jh.push_back({{"i", ij.first}, {"j", ij.second}, {"count", n}});
            csv << name << ',' << ij.first << ',' << ij.second << ',' << n << '\n';
        }
        data[name] = std::move(jh);
    }
    if (format == "csv") {
        emit(out, csv.str());
    } else {
        json doc{{"meta",
                  meta_block("sweep-components", seed, {{"grid", grid}, {"samples", samples}})},
                 {"data", std::move(data)}};
        emit(out, doc.dump(2) + "\n");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dclab: double-center bifurcation laboratory"};
    app.require_subcommand(1);
    // long-only help; --h is a real option on several subcommands
    app.set_help_flag("--help", "print help");

    // melnikov
    auto* mel_cmd = app.add_subcommand("melnikov", "evaluate bifurcation functions on an h-grid");
    mel_cmd->set_help_flag("--help", "print help");
    int center = 1, order = 1;
    std::string grid_text, h1_text = "-0.8:-0.01", h2_text = "1.01:5", arc_text, out_path, format = "csv";
    std::vector<double> lambda_v{0, 0, 0, 0, 0};
    bool oracle = false;
    double tol = 1e-9, rel_tol = 1e-9, h_re = 0, h_im = 0;
    long seed = 0;
    int samples = 10000, grid_n = 4096;
    mel_cmd->add_option("--center", center, "center: 1 or 2")->required()->check(CLI::Range(1, 2));
    mel_cmd->add_option("--order", order, "Melnikov order: 1 or 2")->required()->check(CLI::Range(1, 2));
    mel_cmd->add_option("--h-grid", grid_text, "grid lo:hi:n")->required();
    mel_cmd->add_option("--lambda", lambda_v, "l1,l2,l3,l4,l5")->delimiter(',')->expected(5);
    mel_cmd->add_flag("--oracle", oracle, "also run the numeric oracle and report deltas");
    mel_cmd->add_option("--tol", tol, "oracle quadrature tolerance");
    mel_cmd->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    mel_cmd->add_option("--out", out_path, "output file (default stdout)");

    // shuffle-check
    auto* shuf = app.add_subcommand("shuffle-check", "shuffle identity pass/fail matrix");
    shuf->set_help_flag("--help", "print help");
    double shuffle_h = -1.0;
    std::string shuf_format = "json", shuf_out;
    double shuf_tol = 5e-9;
    long shuf_seed = 0;
    shuf->add_option("--h", shuffle_h, "level h")->required();
    shuf->add_option("--seed", shuf_seed, "basepoint spin seed");
    shuf->add_option("--tol", shuf_tol, "per-integral quadrature tolerance");
    shuf->add_option("--format", shuf_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    shuf->add_option("--out", shuf_out, "output file (default stdout)");

    // commutator
    auto* comm = app.add_subcommand("commutator", "commutator iterated integral, both modes");
    comm->set_help_flag("--help", "print help");
    std::vector<double> comm_lambda{0, 0, 0, 0, 0};
    std::string comm_out;
    double comm_tol = 1e-7;
    comm->add_option("--lambda", comm_lambda, "l1,l2,l3,l4,l5")->required()->delimiter(',')->expected(5);
    comm->add_option("--h", h_re, "level h (real part)")->required();
    comm->add_option("--h-imag", h_im, "imaginary part of h");
    comm->add_option("--tol", comm_tol, "direct-mode quadrature tolerance");
    comm->add_option("--out", comm_out, "output file (default stdout)");

    // census
    auto* cen = app.add_subcommand("census", "limit-cycle census over both annuli");
    cen->set_help_flag("--help", "print help");
    std::vector<double> cen_lambda;
    std::string cen_out;
    cen->add_option("--lambda", cen_lambda, "l1,l2,l3,l4,l5")->required()->delimiter(',')->expected(5);
    cen->add_option("--h1", h1_text, "first-annulus range lo:hi");
    cen->add_option("--h2", h2_text, "second-annulus range lo:hi");
    cen->add_option("--rel-tol", rel_tol, "integrator relative tolerance");
    cen->add_option("--out", cen_out, "output file (default stdout)");

    // classify-arc
    auto* cls = app.add_subcommand("classify-arc", "blow-up classification of a parameter arc");
    cls->set_help_flag("--help", "print help");
    std::string cls_out;
    cls->add_option("--arc", arc_text, "l1=<poly>;...;l5=<poly> in e")->required();
    cls->add_option("--out", cls_out, "output file (default stdout)");

    // sweep-components
    auto* swp = app.add_subcommand("sweep-components", "zero-count histogram per E component");
    swp->set_help_flag("--help", "print help");
    std::string swp_format = "json", swp_out;
    swp->add_option("--samples", samples, "pairs per component");
    swp->add_option("--seed", seed, "sampling seed")->required();
    swp->add_option("--grid", grid_n, "count_zeros grid size");
    swp->add_option("--format", swp_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    swp->add_option("--out", swp_out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (mel_cmd->parsed())
            return run_melnikov(center, order, grid_text, lambda_v, oracle, tol, format, out_path);
        if (shuf->parsed())
            return run_shuffle_check(shuffle_h, shuf_seed, shuf_tol, shuf_format, shuf_out);
        if (comm->parsed()) return run_commutator(comm_lambda, h_re, h_im, comm_tol, comm_out);
        if (cen->parsed()) return run_census(cen_lambda, h1_text, h2_text, rel_tol, cen_out);
        if (cls->parsed()) return run_classify_arc(arc_text, cls_out);
        if (swp->parsed())
            return run_sweep_components(samples, seed, grid_n, swp_format, swp_out);
    } catch (const ConvergenceError& e) {
        std::cerr << "numeric non-convergence: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
