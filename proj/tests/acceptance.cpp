// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <vector>

#include "nkappa/classify.hpp"
#include "nkappa/colligation.hpp"
#include "nkappa/corpus.hpp"
#include "nkappa/errors.hpp"
#include "nkappa/factorize.hpp"
#include "nkappa/realize.hpp"

using namespace nkappa;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& what, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion, what.c_str(),
                detail.c_str());
    if (!pass) ++failures;
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

// Newton search for a zero of 1/V in the upper half-plane, seeded by a coarse
// grid scan.
Complex pole_search(const MatrixFunction& v) {
    Complex best(0, 1);
    double best_mag = std::numeric_limits<double>::infinity();
    for (double re = -3.0; re <= 3.0; re += 0.1)
        for (double im = 0.15; im <= 3.0; im += 0.1) {
            const Complex z(re, im);
            try {
                const double mag = std::abs(1.0 / v(z)(0, 0));
                if (mag < best_mag) {
                    best_mag = mag;
                    best = z;
                }
            } catch (const pole_error&) {
                return z;  // landed exactly on it
            }
        }
    // Secant iteration on 1/V (derivative-free, so the vanishing of V's
    // denominator near the pole cannot poison the step).
    auto g = [&](Complex z) { return 1.0 / v(z)(0, 0); };
    Complex z0 = best, z1 = best + Complex(1e-3, 1e-3);
    try {
        Complex g0 = g(z0), g1 = g(z1);
        for (int it = 0; it < 80; ++it) {
            if (g1 == g0) break;
            const Complex z2 = z1 - g1 * (z1 - z0) / (g1 - g0);
            z0 = z1;
            g0 = g1;
            z1 = z2;
            g1 = g(z1);
            if (std::abs(z1 - z0) < 1e-14 * std::max(1.0, std::abs(z1))) break;
        }
    } catch (const pole_error& e) {
        return e.location;  // landed on the pole itself
    }
    return z1;
}

void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto rep = classify_full(MatrixFunction::example2(1.0, 0.0));
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = rep.kappa.kappa == 1 && rep.kappa.stabilized &&
                      rep.subclass == Subclass::N1 && rep.realizable && secs < 10.0;
    report(1, pass, "transcendental resolvent example: kappa 1, full subspace, realizable",
           "kappa=" + std::to_string(rep.kappa.kappa) + " subclass=" + to_string(rep.subclass) +
               " realizable=" + (rep.realizable ? "yes" : "no") + " in " + fmt(secs) + "s");
}

void criterion_2() {
    struct Case { double gamma, d; };
    const std::vector<Case> cases{{1.0, 0.0}, {1.0, 0.5}, {2.0, 1.0}};
    bool pass = true;
    std::string detail;
    for (const auto& cs : cases) {
        const double g = cs.gamma * cs.gamma;
        // Closed-form pole re-derived from the defining equation:
        // (1+2g)z - d = 2g sqrt(z^2-1) squares to
        // (1+4g) z^2 - 2d(1+2g) z + (d^2+4g^2) = 0.
        const Complex z0((cs.d * (1.0 + 2.0 * g)) / (1.0 + 4.0 * g),
                         (2.0 * g * std::sqrt(4.0 * g + 1.0 - cs.d * cs.d)) / (1.0 + 4.0 * g));
        const MatrixFunction v = MatrixFunction::example2(cs.gamma, cs.d);
        // oracle self-check: the closed form really is a zero of 1/V
        const double at_z0 = std::abs(1.0 / v(z0 + Complex(0, 1e-9))(0, 0));
        const Complex found = pole_search(v);
        const double rel = std::abs(found - z0) / std::abs(z0);
        pass = pass && rel <= 1e-6 && at_z0 < 1e-6;
        detail += fmt(rel) + " ";
    }
    report(2, pass, "pole search matches the closed-form pole for three parameter sets",
           "rel errs: " + detail);
}

void criterion_3() {
    const Complex z(0, 2);
    const Complex closed = MatrixFunction::example2(1.0, 0.0)(z)(0, 0);
    auto err_at = [&](int nodes) {
        return std::abs(chebyshev_model(1.0, 0.0, nodes).impedance(z)(0, 0) - closed);
    };
    const std::vector<int> coarse{4, 6, 8, 10};
    const std::vector<int> stated{25, 50, 100, 200};
    std::vector<double> ce, se;
    for (int n : coarse) ce.push_back(err_at(n));
    for (int n : stated) se.push_back(err_at(n));
    bool monotone_resolvable = true;
    for (std::size_t i = 1; i < ce.size(); ++i)
        if (!(ce[i] < ce[i - 1])) monotone_resolvable = false;
    bool monotone_stated = true;
    // Below ~1e-13 the errors sit on the double-precision floor; treat
    // floor-level values as converged rather than comparable.
    for (std::size_t i = 1; i < se.size(); ++i)
        if (!(se[i] <= se[i - 1] || se[i] <= 1e-13)) monotone_stated = false;
    const bool pass = se.back() <= 1e-8 && monotone_stated && monotone_resolvable;
    std::string detail = "errs(25/50/100/200): ";
    for (double e : se) detail += fmt(e) + " ";
    report(3, pass, "quadrature model converges to the closed form at 2i", detail);
}

void criterion_4() {
    const MatrixFunction v = MatrixFunction::example1();
    const auto rep = classify_full(v);
    const Complex at1e4 = v(Complex(0, 1e4))(0, 0);
    const double weighted = std::abs(1e4 * (at1e4.imag()));
    const double ratio = std::abs(at1e4 / 1e4);
    const bool pass = rep.kappa.kappa == 1 && rep.kappa.stabilized &&
                      rep.subclass == Subclass::N0 && rep.b.basis.empty() && rep.realizable &&
                      weighted > 1e3 && ratio < 1e-3;
    report(4, pass, "boundary-coupling example: kappa 1, trivial subspace, divergent trace",
           "kappa=" + std::to_string(rep.kappa.kappa) + " subclass=" + to_string(rep.subclass) +
               " |y Im V|=" + fmt(weighted) + " |V|/y=" + fmt(ratio));
}

void criterion_5() {
    Rng rng(0x1777);
    double worst = 0.0;
    int colligations = 0;
    while (colligations < 20) {
        const int n = 2 + colligations % 7;                    // up to 8
        const int kappa = colligations % std::min(4, n);       // up to 3
        const int m = 1 + colligations % 2;
        const auto c = random_valid_colligation(rng, n, kappa, m, colligations % 4 == 0);
        if (!validate(c, 1e-9).ok) continue;
        ++colligations;
        int pts = 0;
        for (int i = 0; i < 60 && pts < 20; ++i) {
            const Complex z = rng.in_rectangle(-3, 3, 0.4, 3);
            try {
                worst = std::max(worst, cayley_residual(c, z));
                ++pts;
            } catch (const resolvent_error&) {
            }
        }
    }
    report(5, worst <= 1e-10, "fractional-linear identity on random colligations",
           "worst residual " + fmt(worst));
}

void criterion_6() {
    Rng rng(0x2777);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const int n0 = 4 + trial % 33;  // total up to 40
        const int nn = 1 + trial % 4;
        const BlockSystem sys =
            schur_build(rng.hermitian(n0), rng.matrix(nn, n0), rng.hermitian(nn));
        const Complex z = rng.in_rectangle(-2, 2, 0.8, 3);
        const int total = n0 + nn;
        const CMatrix direct =
            (sys.t() - z * CMatrix::Identity(total, total)).fullPivLu().inverse();
        const CMatrix via = schur_resolvent(sys, z).assemble();
        worst = std::max(worst,
                         spectral_norm(CMatrix(direct - via)) / std::max(1.0, spectral_norm(direct)));
    }
    report(6, worst <= 1e-10, "partitioned resolvent matches direct inversion on 50 systems",
           "worst rel err " + fmt(worst));
}

struct CorpusResults {
    int realized = 0;
    double worst_roundtrip = 0.0;
    double worst_kernel_identity = 0.0;
    double worst_oracle_gap = 0.0;
    bool metric_matches_kernel = true;
    bool all_pass = true;
};

CorpusResults run_corpus_realizations(const std::vector<CorpusEntry>& corpus) {
    CorpusResults res;
    Rng rng(0x3777);
    for (const auto& entry : corpus) {
        const auto c = realize_rkps(entry.v);
        const auto pf = pf_realize(entry.v);
        const auto pts = holdout_points(entry.v, 50, 0x5050 + res.realized);
        const auto rep = roundtrip_verify(entry.v, c, pts, 1e-6);
        res.all_pass = res.all_pass && rep.pass;
        res.worst_roundtrip = std::max(res.worst_roundtrip, rep.max_impedance_rel_err);
        res.worst_kernel_identity =
            std::max(res.worst_kernel_identity, rep.kernel_identity_residual);
        res.metric_matches_kernel =
            res.metric_matches_kernel && rep.kappa_metric == rep.kappa_kernel &&
            rep.kappa_metric == entry.intended_kappa;
        int done = 0;
        for (int i = 0; i < 120 && done < 50; ++i) {
            const Complex z = rng.in_rectangle(-5, 5, 0.3, 5);
            try {
                const Complex va = impedance_V(c, z)(0, 0);
                const Complex vb = impedance_V(pf, z)(0, 0);
                res.worst_oracle_gap =
                    std::max(res.worst_oracle_gap,
                             std::abs(va - vb) / std::max(1.0, std::abs(va)));
                ++done;
            } catch (const resolvent_error&) {
            }
        }
        ++res.realized;
    }
    return res;
}

void criterion_7_and_9(const std::vector<CorpusEntry>& corpus) {
    CorpusResults res;
    std::string why;
    try {
        res = run_corpus_realizations(corpus);
    } catch (const std::exception& e) {
        why = e.what();
        res.all_pass = false;
    }
    const bool pass7 = res.realized == static_cast<int>(corpus.size()) && res.all_pass &&
                       res.metric_matches_kernel && res.worst_roundtrip <= 1e-6 &&
                       res.worst_oracle_gap <= 1e-7;
    report(7, pass7, "round trip over the 20-function corpus",
           why.empty() ? ("realized " + std::to_string(res.realized) + ", worst imp err " +
                          fmt(res.worst_roundtrip) + ", oracle gap " + fmt(res.worst_oracle_gap))
                       : why);
    report(9, res.worst_kernel_identity <= 1e-8 && res.realized > 0,
           "difference-quotient kernel equals the model Gram on a 6x6 grid",
           "worst residual " + fmt(res.worst_kernel_identity));
}

void criterion_8(const std::vector<CorpusEntry>& corpus) {
    FactorizeConfig cfg;
    cfg.per_candidate_diagnostics = false;
    bool pass = true;
    std::string why;
    Rng rng(0x4777);
    try {
        for (const auto& entry : corpus) {
            const auto f = factorize(entry.v, cfg);
            if (negative_squares(f.v0).kappa != 0) { pass = false; why = "factor kappa != 0"; }
            const auto kv = negative_squares(entry.v);
            if (std::max(f.p.degree(), f.q.degree()) != kv.kappa) {
                pass = false;
                why = "degree/kappa mismatch on " + entry.name;
            }
            const ComplexPolynomial pp = f.p * f.p.sharp();
            const ComplexPolynomial qq = f.q * f.q.sharp();
            int done = 0;
            for (int i = 0; i < 120 && done < 50; ++i) {
                const Complex z = rng.in_rectangle(-5, 5, 0.3, 5);
                try {
                    const Complex truth = entry.v(z)(0, 0);
                    const Complex recon = pp(z) / qq(z) * f.v0(z)(0, 0);
                    if (std::abs(recon - truth) > 1e-8 * std::max(std::abs(truth), 1e-3)) {
                        pass = false;
                        why = "reconstruction error on " + entry.name;
                    }
                    ++done;
                } catch (const pole_error&) {
                }
            }
            const bool cls = classify_full(entry.v).realizable;
            const bool via_route = realizability_route(entry.v, cfg).realizable;
            if (cls != via_route) { pass = false; why = "route disagreement on " + entry.name; }
        }
        // hand cases
        const MatrixFunction one_over_z =
            MatrixFunction::scalar_rational(ComplexPolynomial({Complex(1.0)}),
                                            ComplexPolynomial({Complex(0.0), Complex(1.0)}));
        const MatrixFunction z3 = MatrixFunction::scalar_rational(
            ComplexPolynomial({Complex(0.0), Complex(0.0), Complex(0.0), Complex(1.0)}),
            ComplexPolynomial({Complex(1.0)}));
        const MatrixFunction mz = MatrixFunction::scalar_rational(
            ComplexPolynomial({Complex(0.0), Complex(-1.0)}),
            ComplexPolynomial({Complex(1.0), Complex(0.0), Complex(1.0)}));
        if (!realizability_route(one_over_z, cfg).realizable) { pass = false; why = "1/z should pass"; }
        if (realizability_route(z3, cfg).realizable) { pass = false; why = "z^3 should fail"; }
        if (!realizability_route(mz, cfg).realizable) { pass = false; why = "-z/(z^2+1) should pass"; }
    } catch (const std::exception& e) {
        pass = false;
        why = e.what();
    }
    report(8, pass, "factorization reconstructs, reaches the index, and matches classification",
           why.empty() ? "ok" : why);
}

void criterion_10() {
    bool pass = true;
    std::string why;
    try {
        const MatrixFunction vz = MatrixFunction::scalar_rational(
            ComplexPolynomial({Complex(0.0), Complex(1.0)}), ComplexPolynomial({Complex(1.0)}));
        const auto rz = classify_full(vz);
        if (rz.cond_growth || rz.realizable) { pass = false; why = "V=z accepted"; }

        const MatrixFunction c3 = MatrixFunction::scalar_rational(
            ComplexPolynomial({Complex(3.0)}), ComplexPolynomial({Complex(1.0)}));
        const auto rc = classify_full(c3);
        if (rc.cond_strict || rc.realizable) { pass = false; why = "constant accepted"; }

        const MatrixFunction z3 = MatrixFunction::scalar_rational(
            ComplexPolynomial({Complex(0.0), Complex(0.0), Complex(0.0), Complex(1.0)}),
            ComplexPolynomial({Complex(1.0)}));
        const auto r3 = classify_full(z3);
        FactorizeConfig cfg;
        cfg.per_candidate_diagnostics = false;
        const auto t3 = realizability_route(z3, cfg);
        if (r3.realizable || t3.realizable) { pass = false; why = "z^3 accepted"; }
    } catch (const std::exception& e) {
        pass = false;
        why = e.what();
    }
    report(10, pass, "negative controls are rejected by the stated conditions",
           why.empty() ? "ok" : why);
}

} // namespace

int main() {
    CorpusSpec spec;
    spec.count = 20;
    spec.kappa_max = 2;
    spec.seed = 0x4E4B;
    const auto corpus = generate_corpus(spec);

    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7_and_9(corpus);
    criterion_8(corpus);
    criterion_10();

    if (failures == 0)
        std::printf("acceptance: all criteria passed\n");
    else
        std::printf("acceptance: %d criterion(s) FAILED\n", failures);
    return failures == 0 ? 0 : 1;
}
