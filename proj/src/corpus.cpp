#include "nkappa/corpus.hpp"

#include <cmath>

#include "nkappa/errors.hpp"
#include "nkappa/linalg.hpp"

namespace nkappa {

namespace {

double pick_separated(Rng& rng, std::vector<double>& used, double lo, double hi, double min_gap) {
    for (int tries = 0; tries < 200; ++tries) {
        const double x = rng.uniform(lo, hi);
        bool ok = true;
        for (double u : used)
            if (std::abs(u - x) < min_gap) { ok = false; break; }
        if (ok) {
            used.push_back(x);
            return x;
        }
    }
    used.push_back(lo);
    return lo;
}

/// Positive-residue pole sum: sum_j c_j / (t_j - z), c_j > 0.
MatrixFunction herglotz_sum(Rng& rng, int poles, std::vector<double>& used_abscissas) {
    ComplexPolynomial den = ComplexPolynomial::constant(1.0);
    std::vector<double> ts, cs;
    for (int j = 0; j < poles; ++j) {
        ts.push_back(pick_separated(rng, used_abscissas, -4.0, 4.0, 0.7));
        cs.push_back(rng.uniform(0.5, 2.0));
        den = den * ComplexPolynomial({Complex(-ts.back()), Complex(1.0)});
    }
    ComplexPolynomial num;
    for (int j = 0; j < poles; ++j) {
        ComplexPolynomial rest = ComplexPolynomial::constant(Complex(-cs[static_cast<std::size_t>(j)]));
        for (int l = 0; l < poles; ++l) {
            if (l == j) continue;
            rest = rest * ComplexPolynomial({Complex(-ts[static_cast<std::size_t>(l)]), Complex(1.0)});
        }
        num = num + rest;
    }
    return MatrixFunction::scalar_rational(num, den);
}

} // namespace

std::vector<CorpusEntry> generate_corpus(const CorpusSpec& spec) {
    if (spec.kappa_max < 0 || spec.kappa_max > 4)
        throw domain_error("corpus: kappa_max must lie in [0, 4]");
    if (spec.max_poles < 1 || spec.max_poles > 10)
        throw domain_error("corpus: pole count must lie in [1, 10]");
    std::vector<CorpusEntry> out;
    Rng rng(spec.seed);
    for (int i = 0; i < spec.count; ++i) {
        const int kappa = i % (spec.kappa_max + 1);
        const int variant = (i / (spec.kappa_max + 1)) % 3;
        std::vector<double> used;
        // Keep the total degree moderate; sampling-circle Gram conditioning
        // degrades quickly past degree ~7.
        const int poles = kappa >= 2 ? 2 : 2 + i % 2;
        MatrixFunction v0 = herglotz_sum(rng, std::min(poles, spec.max_poles), used);

        ComplexPolynomial p = ComplexPolynomial::constant(1.0);
        ComplexPolynomial q = ComplexPolynomial::constant(1.0);
        int q_left = kappa;
        if (kappa >= 1 && variant == 1) {
            // One real double-zero factor in p, rest of the budget in q.
            const double xp = pick_separated(rng, used, -3.5, 3.5, 0.7);
            p = p * ComplexPolynomial({Complex(-xp), Complex(1.0)});
        }
        if (kappa >= 1 && variant == 2) {
            // One real double-pole factor in q.
            const double xq = pick_separated(rng, used, -3.5, 3.5, 0.7);
            q = q * ComplexPolynomial({Complex(-xq), Complex(1.0)});
            --q_left;
        }
        std::vector<double> used_re;
        for (int l = 0; l < q_left; ++l) {
            const double wre = pick_separated(rng, used_re, -2.0, 2.0, 0.8);
            const Complex w(wre, rng.uniform(0.6, 1.8));
            q = q * ComplexPolynomial({-w, Complex(1.0)});
        }

        CorpusEntry entry;
        entry.v = v0.times_fraction((p * p.sharp()).cleaned(), (q * q.sharp()).cleaned());
        entry.intended_kappa = kappa;
        entry.deg_p = p.degree();
        entry.deg_q = q.degree();
        char buf[16];
        std::snprintf(buf, sizeof buf, "fn_%02d", i);
        entry.name = buf;
        out.push_back(std::move(entry));
    }
    return out;
}

} // namespace nkappa
