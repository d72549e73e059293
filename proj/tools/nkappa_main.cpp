// nkappa: estimate negative-square indices, classify realizability,
// factorize, and build/verify finite-dimensional realizations of
// generalized Nevanlinna functions.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "nkappa/classify.hpp"
#include "nkappa/colligation.hpp"
#include "nkappa/corpus.hpp"
#include "nkappa/errors.hpp"
#include "nkappa/factorize.hpp"
#include "nkappa/json_io.hpp"
#include "nkappa/realize.hpp"

namespace fs = std::filesystem;
using namespace nkappa;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInconsistent = 2;
constexpr int kExitNonStabilized = 3;

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fmt(Complex z) {
    if (z.imag() == 0.0) return fmt(z.real());
    return fmt(z.real()) + (z.imag() < 0 ? "" : "+") + fmt(z.imag()) + "i";
}

void print_matrix(const CMatrix& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            std::cout << (j ? "  " : "") << fmt(m(i, j));
        std::cout << "\n";
    }
}

struct CommonOpts {
    int grid_start = 12;
    int grid_max = 384;
    std::uint64_t seed = 0x4E4B;
    double tol = 1e-10;
    bool seed_given = false;

    KernelConfig kernel() const {
        KernelConfig k;
        k.grid_start = grid_start;
        k.grid_max = grid_max;
        k.seed = seed;
        k.tol = tol;
        return k;
    }
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_tol = true) {
    cmd->add_option("--kernel-grid-start", opts.grid_start, "initial kernel grid size");
    cmd->add_option("--kernel-grid-max", opts.grid_max, "maximum kernel grid size");
    cmd->add_option("--seed", opts.seed, "sampling seed")->each([&](const std::string&) {
        opts.seed_given = true;
    });
    if (with_tol) cmd->add_option("--tol", opts.tol, "eigenvalue zero-cluster tolerance");
}

void apply_env_seed(CommonOpts& opts) {
    if (opts.seed_given) return;
    if (const char* env = std::getenv("NKAPPA_SEED")) opts.seed = std::strtoull(env, nullptr, 0);
}

std::vector<Complex> read_points_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw domain_error("cannot open points file: " + path.string());
    std::vector<Complex> pts;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        pts.push_back(parse_complex(line));
    }
    return pts;
}

void write_scan_csv(const MatrixFunction& v, const fs::path& out_path, double y_min, double y_max,
                    int per_decade) {
    std::ofstream out(out_path);
    if (!out) throw domain_error("cannot open for writing: " + out_path.string());
    const int m = v.dim();
    out << "y";
    for (int f = 0; f < m; ++f)
        out << ",growth_ratio_re_f" << f << ",growth_ratio_im_f" << f << ",y_weighted_im_f" << f
            << ",abs_value_f" << f;
    out << ",note\n";
    const double decades = std::log10(y_max / y_min);
    const int steps = std::max(2, static_cast<int>(std::round(decades * per_decade)));
    for (int k = 0; k <= steps; ++k) {
        const double y = y_min * std::pow(y_max / y_min, double(k) / steps);
        out << fmt(y);
        try {
            const CMatrix val = v(Complex(0.0, y));
            const CMatrix im = (val - val.adjoint()) / Complex(0.0, 2.0);
            for (int f = 0; f < m; ++f) {
                const Complex g = val(f, f) / y;
                const double w = im(f, f).real() * y;
                const double a = val.col(f).norm();
                out << "," << fmt(g.real()) << "," << fmt(g.imag()) << "," << fmt(w) << ","
                    << fmt(a);
            }
            out << ",\n";
        } catch (const pole_error&) {
            for (int f = 0; f < m; ++f) out << ",nan,nan,nan,nan";
            out << ",pole\n";
        }
    }
}

int cmd_kappa(const fs::path& file, const CommonOpts& opts) {
    const MatrixFunction v = load_function(file);
    const KappaEstimate est = negative_squares(v, opts.kernel());
    std::cout << "kappa = " << est.kappa << (est.stabilized ? " (stabilized)" : " (NOT stabilized)")
              << "\n";
    for (const auto& h : est.history)
        std::cout << "  grid " << h.size << ": negative " << h.negative << ", ambiguous "
                  << h.ambiguous_negative << "\n";
    return est.stabilized ? kExitOk : kExitNonStabilized;
}

int cmd_classify(const fs::path& file, const std::optional<fs::path>& out,
                 const std::optional<fs::path>& trace, const CommonOpts& opts) {
    const MatrixFunction v = load_function(file);
    ClassifyConfig cfg;
    cfg.kernel = opts.kernel();
    const ClassificationReport rep = classify_full(v, cfg);
    std::cout << v.describe() << ": kappa = " << rep.kappa.kappa
              << (rep.kappa.stabilized ? "" : " (not stabilized)")
              << ", subclass = " << to_string(rep.subclass)
              << ", realizable = " << (rep.realizable ? "yes" : "no") << "\n";
    std::cout << "  growth " << (rep.cond_growth ? "ok" : "FAIL") << ", strictness "
              << (rep.cond_strict ? "ok" : "FAIL") << ", decay on B "
              << (rep.cond_decay_on_b ? "ok" : "FAIL") << ", dim B = " << rep.b.basis.size()
              << "\n";
    if (out) save_json(*out, report_to_json(rep));
    if (trace) write_scan_csv(v, *trace, 10.0, 1e6, 8);
    return rep.kappa.stabilized ? kExitOk : kExitNonStabilized;
}

int cmd_factor(const fs::path& file, const std::optional<fs::path>& out, const CommonOpts& opts) {
    const MatrixFunction v = load_function(file);
    if (!strictness_check(v, default_strictness_points(v))) {
        std::cerr << "strictness violation: the kernel has a common null direction "
                     "(constant functions are not factorizable members of the realizable class)\n";
        return kExitInconsistent;
    }
    FactorizeConfig cfg;
    cfg.kernel = opts.kernel();
    const Factorization f = factorize(v, cfg);
    std::cout << "kappa = " << f.kappa << ", deg p = " << f.p.degree()
              << ", deg q = " << f.q.degree() << "\n";
    const RealizabilityRoute t = realizability_route(v, cfg);
    std::cout << "realizable = " << (t.realizable ? "yes" : "no") << " via " << t.route << "\n";
    for (const auto& line : f.log) std::cout << "  note: " << line << "\n";
    if (out) save_json(*out, factorization_to_json(f));
    return kExitOk;
}

int cmd_realize(const fs::path& file, const fs::path& out, const CommonOpts& opts) {
    const MatrixFunction v = load_function(file);
    RealizeConfig cfg;
    cfg.kernel = opts.kernel();
    const Colligation c = realize_rkps(v, cfg);
    save_json(out, colligation_to_json(c));
    std::cout << "realized: n = " << c.n() << ", metric kappa = " << c.metric.kappa() << " -> "
              << out.string() << "\n";
    return kExitOk;
}

int cmd_eval(const fs::path& model, const std::vector<std::string>& zs,
             const std::optional<fs::path>& points_file, bool transfer) {
    const Colligation c = load_colligation(model);
    std::vector<Complex> pts;
    for (const auto& s : zs) pts.push_back(parse_complex(s));
    if (points_file) {
        const auto extra = read_points_file(*points_file);
        pts.insert(pts.end(), extra.begin(), extra.end());
    }
    if (pts.empty()) throw domain_error("no evaluation points given (use -z or --points-file)");
    for (const auto& z : pts) {
        std::cout << (transfer ? "W(" : "V(") << fmt(z) << ") =\n";
        print_matrix(transfer ? transfer_W(c, z) : impedance_V(c, z));
    }
    return kExitOk;
}

int cmd_verify(const fs::path& file, const fs::path& model, int points, double tol,
               const CommonOpts& opts) {
    const MatrixFunction v = load_function(file);
    const Colligation c = load_colligation(model);
    const std::vector<Complex> pts = holdout_points(v, points, opts.seed ^ 0x1357);
    const RoundtripReport rep = roundtrip_verify(v, c, pts, tol, opts.kernel());
    std::cout << "impedance max rel err = " << fmt(rep.max_impedance_rel_err) << " at z = "
              << fmt(rep.worst_point) << "\n"
              << "kernel identity residual = " << fmt(rep.kernel_identity_residual) << "\n"
              << "minimal = " << (rep.minimal ? "yes" : "no") << ", kappa(metric) = "
              << rep.kappa_metric << ", kappa(kernel) = " << rep.kappa_kernel << "\n"
              << (rep.pass ? "PASS" : "FAIL") << "\n";
    return rep.pass ? kExitOk : kExitInconsistent;
}

int cmd_schur(const std::optional<fs::path>& system_file, double gamma, double d, int nodes,
              const std::optional<fs::path>& out, const std::vector<std::string>& zs) {
    BlockSystem sys = [&] {
        if (system_file) {
            const auto j = load_json(*system_file);
            BlockSystem s = schur_build(matrix_from_json(j.at("A0")), matrix_from_json(j.at("B")),
                                        matrix_from_json(j.at("D")));
            if (j.contains("D_im")) s.d_im = matrix_from_json(j.at("D_im"));
            return s;
        }
        return chebyshev_model(gamma, d, nodes);
    }();
    if (out) save_json(*out, colligation_to_json(sys.to_colligation()));
    for (const auto& s : zs) {
        const Complex z = parse_complex(s);
        std::cout << "V(" << fmt(z) << ") =\n";
        print_matrix(sys.impedance(z));
    }
    return kExitOk;
}

int cmd_scan(const fs::path& file, const fs::path& out, double y_min, double y_max,
             int per_decade) {
    const MatrixFunction v = load_function(file);
    write_scan_csv(v, out, y_min, y_max, per_decade);
    std::cout << "scan written to " << out.string() << "\n";
    return kExitOk;
}

int cmd_corpus(const fs::path& outdir, int count, int kappa_max, const CommonOpts& opts) {
    CorpusSpec spec;
    spec.count = count;
    spec.kappa_max = kappa_max;
    spec.seed = opts.seed;
    fs::create_directories(outdir);
    const auto entries = generate_corpus(spec);
    ordered_json manifest;
    manifest["format"] = 1;
    manifest["seed"] = spec.seed;
    manifest["count"] = spec.count;
    manifest["kappa_max"] = spec.kappa_max;
    ordered_json items = ordered_json::array();
    for (const auto& e : entries) {
        const fs::path file = outdir / (e.name + ".json");
        save_json(file, function_to_json(e.v));
        ordered_json item;
        item["file"] = file.filename().string();
        item["intended_kappa"] = e.intended_kappa;
        item["deg_p"] = e.deg_p;
        item["deg_q"] = e.deg_q;
        items.push_back(std::move(item));
    }
    manifest["functions"] = std::move(items);
    save_json(outdir / "manifest.json", manifest);
    std::cout << "wrote " << entries.size() << " functions + manifest to " << outdir.string()
              << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"computations with generalized Nevanlinna functions: negative-square index, "
                 "realizability classification, factorization, state-space realization"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string file, model, out, trace, points_file, system_file, outdir;
    std::vector<std::string> zs;
    int points = 50, nodes = 200, count = 20, kappa_max = 2, per_decade = 8;
    double tol = 1e-6, gamma = 1.0, dshift = 0.0, y_min = 10.0, y_max = 1e6;

    auto* kappa_cmd = app.add_subcommand("kappa", "estimate the negative-square index");
    kappa_cmd->add_option("-f,--function", file, "function JSON file")->required();
    add_common(kappa_cmd, opts);

    auto* classify_cmd = app.add_subcommand("classify", "full realizability classification");
    classify_cmd->add_option("-f,--function", file)->required();
    classify_cmd->add_option("-o,--output", out, "report JSON path");
    classify_cmd->add_option("--trace", trace, "CSV trace path");
    add_common(classify_cmd, opts);

    auto* factor_cmd = app.add_subcommand("factor", "factorize into p p#/(q q#) times a "
                                                    "nonnegative-type factor");
    factor_cmd->add_option("-f,--function", file)->required();
    factor_cmd->add_option("-o,--output", out, "factorization JSON path");
    add_common(factor_cmd, opts);

    auto* realize_cmd = app.add_subcommand("realize", "build a minimal state-space realization");
    realize_cmd->add_option("-f,--function", file)->required();
    realize_cmd->add_option("-o,--output", out, "model JSON path")->required();
    add_common(realize_cmd, opts);

    auto* transfer_cmd = app.add_subcommand("transfer", "evaluate the transfer function of a model");
    transfer_cmd->add_option("-m,--model", model)->required();
    transfer_cmd->add_option("-z", zs, "evaluation point(s), e.g. \"1+2i\"");
    transfer_cmd->add_option("--points-file", points_file, "file with one point per line");

    auto* impedance_cmd = app.add_subcommand("impedance", "evaluate the impedance function of a model");
    impedance_cmd->add_option("-m,--model", model)->required();
    impedance_cmd->add_option("-z", zs);
    impedance_cmd->add_option("--points-file", points_file);

    auto* verify_cmd = app.add_subcommand("verify", "round-trip check of a model against a function");
    verify_cmd->add_option("-f,--function", file)->required();
    verify_cmd->add_option("-m,--model", model)->required();
    verify_cmd->add_option("--points", points, "number of held-out points");
    verify_cmd->add_option("--tol", tol, "pass tolerance");
    add_common(verify_cmd, opts, /*with_tol=*/false);

    auto* schur_cmd = app.add_subcommand("schur", "block-system builder and impedance evaluator");
    schur_cmd->add_option("-f,--system", system_file, "block system JSON {A0,B,D[,D_im]}");
    schur_cmd->add_option("--gamma", gamma, "coupling strength for the quadrature model");
    schur_cmd->add_option("--d", dshift, "channel shift for the quadrature model");
    schur_cmd->add_option("--nodes", nodes, "quadrature node count");
    schur_cmd->add_option("-o,--output", out, "write the model as colligation JSON");
    schur_cmd->add_option("-z", zs, "evaluation point(s)");

    auto* scan_cmd = app.add_subcommand("scan", "CSV trace of the ray evidence");
    scan_cmd->add_option("-f,--function", file)->required();
    scan_cmd->add_option("-o,--output", out)->required();
    scan_cmd->add_option("--y-min", y_min);
    scan_cmd->add_option("--y-max", y_max);
    scan_cmd->add_option("--per-decade", per_decade);

    auto* corpus_cmd = app.add_subcommand("corpus", "generate a test corpus with known indices");
    corpus_cmd->add_option("-o,--output", outdir, "output directory")->required();
    corpus_cmd->add_option("--count", count);
    corpus_cmd->add_option("--kappa-max", kappa_max);
    add_common(corpus_cmd, opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    apply_env_seed(opts);
    try {
        if (kappa_cmd->parsed()) return cmd_kappa(file, opts);
        if (classify_cmd->parsed())
            return cmd_classify(file,
                                out.empty() ? std::nullopt : std::optional<fs::path>(out),
                                trace.empty() ? std::nullopt : std::optional<fs::path>(trace), opts);
        if (factor_cmd->parsed())
            return cmd_factor(file, out.empty() ? std::nullopt : std::optional<fs::path>(out), opts);
        if (realize_cmd->parsed()) return cmd_realize(file, out, opts);
        if (transfer_cmd->parsed())
            return cmd_eval(model, zs,
                            points_file.empty() ? std::nullopt : std::optional<fs::path>(points_file),
                            /*transfer=*/true);
        if (impedance_cmd->parsed())
            return cmd_eval(model, zs,
                            points_file.empty() ? std::nullopt : std::optional<fs::path>(points_file),
                            /*transfer=*/false);
        if (verify_cmd->parsed()) return cmd_verify(file, model, points, tol, opts);
        if (schur_cmd->parsed())
            return cmd_schur(system_file.empty() ? std::nullopt : std::optional<fs::path>(system_file),
                             gamma, dshift, nodes,
                             out.empty() ? std::nullopt : std::optional<fs::path>(out), zs);
        if (scan_cmd->parsed()) return cmd_scan(file, out, y_min, y_max, per_decade);
        if (corpus_cmd->parsed()) return cmd_corpus(outdir, count, kappa_max, opts);
    } catch (const nlohmann::json::parse_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const inconsistency_error& e) {
        std::cerr << "inconsistency: " << e.what() << "\n";
        return kExitInconsistent;
    } catch (const nonstabilized_error& e) {
        std::cerr << "non-stabilization: " << e.what() << "\n";
        return kExitNonStabilized;
    } catch (const domain_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
