// Acceptance suite: each numbered criterion prints exactly one PASS/FAIL line.
#include "fglfans/descent.hpp"
#include "fglfans/error.hpp"
#include "fglfans/lazard.hpp"
#include "fglfans/oracles.hpp"
#include "fglfans/pps.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

using namespace fglfans;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& what, bool ok, const std::string& detail = "") {
    std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << criterion << ": " << what;
    if (!ok && !detail.empty()) std::cout << " -- " << detail;
    std::cout << "\n";
    if (!ok) ++g_failures;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::map<std::string, std::shared_ptr<const Fan>> load_corpus(const std::string& dir) {
    namespace fs = std::filesystem;
    std::map<std::string, std::shared_ptr<const Fan>> fans;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() != ".json") continue;
        std::string stem = entry.path().stem().string();
        if (stem == "fixtures") continue;
        fans[stem] = Fan::from_json(read_file(entry.path().string()));
    }
    return fans;
}

int partitions_oracle(int n) {
    // Euler recurrence with pentagonal numbers, independent of the ring code
    std::vector<long> p(n + 1, 0);
    p[0] = 1;
    for (int m = 1; m <= n; ++m) {
        long total = 0;
        for (int k = 1;; ++k) {
            int g1 = k * (3 * k - 1) / 2;
            int g2 = k * (3 * k + 1) / 2;
            if (g1 > m && g2 > m) break;
            long sign = (k % 2 == 1) ? 1 : -1;
            if (g1 <= m) total += sign * p[m - g1];
            if (g2 <= m) total += sign * p[m - g2];
        }
        p[m] = total;
    }
    return static_cast<int>(p[n]);
}

// ------------------------------------------------------------------ 1

void criterion_fgl_axioms() {
    bool ok = true;
    std::string detail;
    for (int d : {3, 5}) {
        auto ring = build_lazard_ring(d);
        AxiomResiduals res = fgl_axiom_residuals(d);
        for (const auto& [e, poly] : res.unit)
            if (!lazard_normal_form(ring, poly).is_zero()) ok = false;
        for (const auto& [e, poly] : res.commutativity)
            if (!lazard_normal_form(ring, poly).is_zero()) ok = false;
        if (res.associativity.empty()) {
            ok = false;
            detail = "no associativity coefficients extracted";
        }
        for (const auto& [e, poly] : res.associativity)
            if (!lazard_normal_form(ring, poly).is_zero()) {
                ok = false;
                detail = "associativity coefficient fails to normal-form to zero";
            }
        // the same identities as truncated series over the universal ring
        GradedSeries u = GradedSeries::variable(ring, 3, 0);
        GradedSeries v = GradedSeries::variable(ring, 3, 1);
        GradedSeries w = GradedSeries::variable(ring, 3, 2);
        GradedSeries zero(ring, 3, 1);
        if (!(fgl_sum(u, zero) == u && fgl_sum(zero, u) == u)) ok = false;
        if (!(fgl_sum(u, v) == fgl_sum(v, u))) ok = false;
        if (!(fgl_sum(fgl_sum(u, v), w) == fgl_sum(u, fgl_sum(v, w)))) ok = false;
    }
    report(1, "formal group law axiom residuals vanish at D=3 and D=5", ok, detail);
}

// ------------------------------------------------------------------ 2

void criterion_inverse_and_n_series() {
    auto ring = build_lazard_ring(4);
    bool ok = true;
    GradedSeries u = GradedSeries::variable(ring, 1, 0);
    GradedSeries chi = inverse_series(ring);
    if (!fgl_sum(u, chi).is_zero()) ok = false;
    if (!(substitute(chi, {chi}) == u)) ok = false;
    for (long m = -5; m <= 5 && ok; ++m)
        for (long n = -5; n <= 5 && ok; ++n)
            if (!(n_series(ring, m + n) == fgl_sum(n_series(ring, m), n_series(ring, n))))
                ok = false;
    report(2, "inverse and n-series identities exact to truncation at D=4", ok);
}

// ------------------------------------------------------------------ 3

void criterion_lazard_ranks() {
    auto ring = build_lazard_ring(5);
    bool ok = true;
    std::string detail;
    for (int k = 0; k <= 5; ++k) {
        GradedRankReport rep = graded_rank(*ring, k);
        if (rep.rank != partitions_oracle(k) || !rep.torsion_invariants.empty()) {
            ok = false;
            detail = "piece " + std::to_string(k) + " has rank " + std::to_string(rep.rank) +
                     ", expected " + std::to_string(partitions_oracle(k));
        }
    }
    report(3, "Lazard graded ranks are the partition numbers with no torsion (D=5)", ok, detail);
}

// ------------------------------------------------------------------ 4

void criterion_sheaf_axioms(const std::map<std::string, std::shared_ptr<const Fan>>& fans) {
    auto ring = build_lazard_ring(3);
    bool ok = true;
    std::string detail;
    for (const auto& [name, fan] : fans) {
        SheafSystem sys(fan, ring);
        for (int sigma = 0; sigma < fan->num_cones() && ok; ++sigma) {
            int nv = sys.stalk(sigma).num_vars;
            // probes that exercise the formal group law corrections
            std::vector<GradedSeries> probes;
            GradedSeries usum(ring, nv, 1);
            for (int i = 0; i < nv; ++i)
                usum = fgl_sum(usum, GradedSeries::variable(ring, nv, i));
            probes.push_back(usum);
            probes.push_back(usum * usum);
            probes.push_back(usum.scaled(ring->fgl_coefficient(1, 1)));

            for (const GradedSeries& f : probes) {
                if (!(apply_stalk_map(sys.restriction(sigma, sigma), f) == f)) {
                    ok = false;
                    detail = name + ": identity restriction fails";
                    break;
                }
                for (int tau : fan->faces_of(sigma)) {
                    for (int rho : fan->faces_of(tau)) {
                        GradedSeries via = apply_stalk_map(
                            sys.restriction(tau, rho),
                            apply_stalk_map(sys.restriction(sigma, tau), f));
                        GradedSeries direct = apply_stalk_map(sys.restriction(sigma, rho), f);
                        if (!(via == direct)) {
                            ok = false;
                            detail = name + ": composition fails on a chain";
                        }
                    }
                }
            }
        }
    }
    report(4, "sheaf axioms res = id and res o res = res on all cone chains (D=3)", ok, detail);
}

// ------------------------------------------------------------------ 5

void criterion_two_routes(const std::map<std::string, std::shared_ptr<const Fan>>& fans) {
    auto ring = build_lazard_ring(3);
    bool ok = true;
    std::string detail;
    for (const auto& [name, fan] : fans)
        for (ResolveOrder order : {ResolveOrder::canonical, ResolveOrder::alternate})
            for (int d = 0; d <= 2; ++d) {
                try {
                    ResolutionResult res = compute_via_resolution(fan, d, ring, order);
                    if (!res.report.match) ok = false;
                } catch (const std::exception& e) {
                    ok = false;
                    detail = name + " degree " + std::to_string(d) + ": " + e.what();
                }
            }
    report(5, "resolution route equals the direct solver on every fan, two orders (D=3)", ok,
           detail);
}

// ------------------------------------------------------------------ 6

void criterion_cartesian(const std::map<std::string, std::shared_ptr<const Fan>>& fans) {
    auto ring = build_lazard_ring(3);
    bool ok = true;
    std::string detail;

    DescentSquare blowup =
        make_descent_square(star_subdivision(fans.at("a2"), {Int(1), Int(1)}));
    auto quad_chain = resolve(fans.at("quadric"));
    DescentSquare quad = make_descent_square(quad_chain.front());

    for (const auto& [label, sq] :
         std::vector<std::pair<std::string, DescentSquare>>{{"a2 blowup", blowup},
                                                            {"quadric resolution", quad}})
        for (int d = 0; d <= 2; ++d) {
            GluingReport rep = check_cartesian(sq, d, ring);
            if (!rep.cartesian()) {
                ok = false;
                detail = label + " degree " + std::to_string(d) + ": " + rep.witness;
            }
        }
    report(6, "descent squares commute, are injective and exact (D=3, d<=2)", ok, detail);
}

// ------------------------------------------------------------------ 7

void criterion_chow_oracle(const std::map<std::string, std::shared_ptr<const Fan>>& fans) {
    bool ok = true;
    std::string detail;
    for (const auto& [name, fan] : fans) {
        oracles::ChowComparisonReport rep =
            oracles::compare_with_additive_specialization(fan, 3, 3);
        if (!rep.match) {
            ok = false;
            detail = name + " differs at degree " + std::to_string(rep.witness_degree);
        }
    }
    for (const auto& [name, count] :
         std::vector<std::pair<std::string, int>>{{"p1", 2}, {"p2", 3}, {"p1xp1", 4}}) {
        int r = oracles::pp_global_sections(*fans.at(name), 1).rank;
        if (r != count) {
            ok = false;
            detail = name + " degree-1 rank " + std::to_string(r) + ", expected ray count " +
                     std::to_string(count);
        }
    }
    report(7, "additive specialization matches the piecewise polynomial oracle (d<=3)", ok,
           detail);
}

// ------------------------------------------------------------------ 8

void criterion_injectivity(const std::map<std::string, std::shared_ptr<const Fan>>& fans) {
    auto ring = build_lazard_ring(3);
    bool ok = true;
    std::string detail;

    std::vector<std::pair<std::string, SubdivisionMap>> subs;
    subs.emplace_back("a2 at (1,1)", star_subdivision(fans.at("a2"), {Int(1), Int(1)}));
    subs.emplace_back("p2 at (1,1)", star_subdivision(fans.at("p2"), {Int(1), Int(1)}));
    subs.emplace_back("p1xp1 at (1,1)", star_subdivision(fans.at("p1xp1"), {Int(1), Int(1)}));
    for (const auto& step : resolve(fans.at("quadric")))
        subs.emplace_back("quadric resolution step", step);
    for (const auto& step : resolve(fans.at("squarecone")))
        subs.emplace_back("squarecone resolution step", step);

    for (const auto& [label, sub] : subs) {
        SheafSystem coarse(sub.target, ring), fine(sub.source, ring);
        for (int d = 0; d <= 3; ++d) {
            SectionModule mc = global_sections(coarse, fan_domain(sub.target), d);
            SectionModule mf = section_module_shape(fine, fan_domain(sub.source), d);
            std::vector<int> sources;
            for (int m : mf.domain.maximal) sources.push_back(sub.cone_map[m]);
            intlin::IntMatrix pull = transfer_matrix(coarse, mc, fine, mf, sources);
            if (intlin::rank(pull.mul(mc.basis.transpose())) != mc.rank()) {
                ok = false;
                detail = label + " degree " + std::to_string(d);
            }
        }
    }
    report(8, "subdivision pullback has zero kernel on global sections (d<=3)", ok, detail);
}

// ------------------------------------------------------------------ 9

std::string capture(const std::string& command) {
    std::string out;
    FILE* pipe = popen(command.c_str(), "r");
    if (!pipe) throw InternalError("cannot launch: " + command);
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) out.append(buf, n);
    int status = pclose(pipe);
    if (status != 0) throw InternalError("selftest exited with nonzero status");
    return out;
}

void criterion_determinism(const std::string& cli, const std::string& corpus) {
    bool ok = true;
    std::string detail;
    try {
        std::string cmd = "'" + cli + "' selftest --corpus '" + corpus + "' 2>/dev/null";
        std::string first = capture(cmd);
        std::string second = capture(cmd);
        ok = !first.empty() && first == second;
        if (!ok) detail = "reports differ between runs";
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    report(9, "two consecutive selftest runs are byte-identical", ok, detail);
}

} // namespace

int main(int argc, char** argv) {
    std::string corpus = "fans";
    std::string cli;
    for (int i = 1; i + 1 < argc; i += 2) {
        std::string flag = argv[i];
        if (flag == "--corpus") corpus = argv[i + 1];
        if (flag == "--cli") cli = argv[i + 1];
    }

    auto t0 = std::chrono::steady_clock::now();
    try {
        auto fans = load_corpus(corpus);
        if (fans.size() < 8) throw InputError("bundled corpus incomplete in '" + corpus + "'");

        criterion_fgl_axioms();
        criterion_inverse_and_n_series();
        criterion_lazard_ranks();
        criterion_sheaf_axioms(fans);
        criterion_two_routes(fans);
        criterion_cartesian(fans);
        criterion_chow_oracle(fans);
        criterion_injectivity(fans);
        if (!cli.empty())
            criterion_determinism(cli, corpus);
        else
            report(9, "two consecutive selftest runs are byte-identical", false,
                   "--cli path not provided");
    } catch (const std::exception& e) {
        std::cout << "[FAIL] acceptance suite aborted: " << e.what() << "\n";
        return 1;
    }

    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cerr << "acceptance suite finished in " << secs << " s\n";
    return g_failures == 0 ? 0 : 1;
}
