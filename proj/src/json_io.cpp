#include "nkappa/json_io.hpp"

#include <fstream>

#include "nkappa/errors.hpp"

namespace nkappa {

ordered_json complex_to_json(Complex z) { return ordered_json::array({z.real(), z.imag()}); }

Complex complex_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2)
        throw domain_error("complex values must be [re, im] pairs");
    return {j[0].get<double>(), j[1].get<double>()};
}

ordered_json matrix_to_json(const CMatrix& m) {
    ordered_json rows = ordered_json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index jv = 0; jv < m.cols(); ++jv) row.push_back(complex_to_json(m(i, jv)));
        rows.push_back(std::move(row));
    }
    return rows;
}

CMatrix matrix_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.empty()) throw domain_error("matrix must be a non-empty array of rows");
    const int rows = static_cast<int>(j.size());
    const int cols = static_cast<int>(j[0].size());
    CMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        if (static_cast<int>(j[i].size()) != cols) throw domain_error("ragged matrix rows");
        for (int c = 0; c < cols; ++c) m(i, c) = complex_from_json(j[i][c]);
    }
    return m;
}

ordered_json poly_to_json(const ComplexPolynomial& p) {
    ordered_json out = ordered_json::array();
    for (const auto& c : p.coeffs()) out.push_back(complex_to_json(c));
    return out;
}

ComplexPolynomial poly_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw domain_error("polynomial must be an array of [re, im] coefficients");
    std::vector<Complex> coeffs;
    for (const auto& c : j) coeffs.push_back(complex_from_json(c));
    return ComplexPolynomial(std::move(coeffs));
}

ordered_json function_to_json(const MatrixFunction& v) {
    ordered_json out;
    out["format"] = 1;
    switch (v.kind()) {
        case MatrixFunction::Kind::Rational: {
            out["type"] = "rational";
            out["dim"] = v.dim();
            ordered_json rows = ordered_json::array();
            for (const auto& row : v.entries()) {
                ordered_json jr = ordered_json::array();
                for (const auto& e : row) {
                    ordered_json je;
                    je["num"] = poly_to_json(e.num);
                    je["den"] = poly_to_json(e.den);
                    jr.push_back(std::move(je));
                }
                rows.push_back(std::move(jr));
            }
            out["entries"] = std::move(rows);
            break;
        }
        case MatrixFunction::Kind::Builtin:
            out["type"] = "builtin";
            if (v.builtin_name() == MatrixFunction::BuiltinName::Example1) {
                out["name"] = "example1";
            } else {
                out["name"] = "example2";
                out["gamma"] = v.gamma();
                out["d"] = v.d();
            }
            break;
        case MatrixFunction::Kind::BlockDiag: {
            out["type"] = "blockdiag";
            ordered_json blocks = ordered_json::array();
            for (const auto& b : v.blocks()) blocks.push_back(function_to_json(b));
            out["blocks"] = std::move(blocks);
            break;
        }
    }
    return out;
}

MatrixFunction function_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw domain_error("function: object expected");
    if (j.contains("format") && j["format"].get<int>() != 1)
        throw domain_error("function: unsupported format version");
    const std::string type = j.at("type").get<std::string>();
    if (type == "rational") {
        const auto& entries = j.at("entries");
        std::vector<std::vector<RationalEntry>> rows;
        for (const auto& row : entries) {
            std::vector<RationalEntry> r;
            for (const auto& e : row)
                r.push_back(RationalEntry{poly_from_json(e.at("num")), poly_from_json(e.at("den"))});
            rows.push_back(std::move(r));
        }
        if (j.contains("dim") && j["dim"].get<int>() != static_cast<int>(rows.size()))
            throw domain_error("function: dim does not match the entries");
        return MatrixFunction::rational(std::move(rows));
    }
    if (type == "builtin") {
        const std::string name = j.at("name").get<std::string>();
        if (name == "example1") return MatrixFunction::example1();
        if (name == "example2")
            return MatrixFunction::example2(j.at("gamma").get<double>(), j.at("d").get<double>());
        throw domain_error("function: unknown builtin '" + name + "'");
    }
    if (type == "blockdiag") {
        std::vector<MatrixFunction> blocks;
        for (const auto& b : j.at("blocks")) blocks.push_back(function_from_json(b));
        return MatrixFunction::block_diag(std::move(blocks));
    }
    throw domain_error("function: unknown type '" + type + "'");
}

ordered_json colligation_to_json(const Colligation& c) {
    ordered_json out;
    out["format"] = 1;
    out["n"] = c.n();
    out["metric"] = matrix_to_json(c.metric.matrix());
    out["H"] = matrix_to_json(c.h_full);
    out["K"] = matrix_to_json(c.k);
    out["Jdir"] = matrix_to_json(c.jdir.matrix());
    return out;
}

Colligation colligation_from_json(const nlohmann::json& j) {
    if (j.contains("format") && j["format"].get<int>() != 1)
        throw domain_error("colligation: unsupported format version");
    SignatureMetric metric(matrix_from_json(j.at("metric")));
    SignatureMetric jdir(matrix_from_json(j.at("Jdir")));
    CMatrix k = matrix_from_json(j.at("K"));
    CMatrix h;
    if (j.contains("H")) {
        h = matrix_from_json(j.at("H"));
    } else if (j.contains("H_R")) {
        // Impedance-form input: synthesize the full state matrix.
        const CMatrix hr = matrix_from_json(j.at("H_R"));
        h = hr + kI * k * jdir.matrix() * k.adjoint() * metric.matrix();
    } else {
        throw domain_error("colligation: missing H (or H_R)");
    }
    if (j.contains("n") && j["n"].get<int>() != static_cast<int>(h.rows()))
        throw domain_error("colligation: n does not match H");
    return Colligation{std::move(metric), std::move(h), std::move(k), std::move(jdir)};
}

ordered_json report_to_json(const ClassificationReport& rep) {
    ordered_json out;
    out["format"] = 1;
    out["kappa"] = rep.kappa.kappa;
    out["kappa_stabilized"] = rep.kappa.stabilized;
    ordered_json hist = ordered_json::array();
    for (const auto& h : rep.kappa.history)
        hist.push_back(ordered_json::array({h.size, h.negative, h.ambiguous_negative}));
    out["kappa_history"] = std::move(hist);
    out["subclass"] = to_string(rep.subclass);
    out["realizable"] = rep.realizable;
    out["conditions"] = {{"growth", rep.cond_growth},
                         {"strict", rep.cond_strict},
                         {"decay_on_B", rep.cond_decay_on_b}};
    out["b_dim"] = rep.b.basis.size();
    out["b_exact"] = rep.b.exact;
    ordered_json basis = ordered_json::array();
    for (const auto& f : rep.b.basis) {
        ordered_json v = ordered_json::array();
        for (int i = 0; i < f.size(); ++i) v.push_back(complex_to_json(f(i)));
        basis.push_back(std::move(v));
    }
    out["b_basis"] = std::move(basis);
    out["notes"] = rep.notes;
    ordered_json trace = ordered_json::array();
    for (const auto& [y, val] : rep.growth_trace)
        trace.push_back(ordered_json::array({y, val.real(), val.imag()}));
    out["growth_trace"] = std::move(trace);
    return out;
}

ordered_json factorization_to_json(const Factorization& f) {
    ordered_json out;
    out["format"] = 1;
    out["p"] = poly_to_json(f.p);
    out["q"] = poly_to_json(f.q);
    out["kappa"] = f.kappa;
    out["V0"] = function_to_json(f.v0);
    ordered_json pts = ordered_json::array();
    for (const auto& pt : f.points) {
        ordered_json jp;
        if (pt.at_infinity)
            jp["location"] = "infinity";
        else
            jp["location"] = complex_to_json(pt.location);
        jp["kind"] = pt.kind == NonposPoint::Kind::Pole ? "pole" : "zero";
        jp["multiplicity"] = pt.multiplicity;
        if (pt.kappa_after_strip >= 0) jp["kappa_after_strip"] = pt.kappa_after_strip;
        pts.push_back(std::move(jp));
    }
    out["points"] = std::move(pts);
    out["log"] = f.log;
    return out;
}

Complex parse_complex(const std::string& text) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
    if (s.empty()) throw domain_error("empty complex literal");
    const bool imaginary = s.back() == 'i' || s.back() == 'I';
    if (!imaginary) {
        std::size_t pos = 0;
        const double re = std::stod(s, &pos);
        if (pos != s.size()) throw domain_error("bad complex literal '" + text + "'");
        return {re, 0.0};
    }
    s.pop_back();
    // Split at the last top-level +/- that is not an exponent sign.
    std::size_t split = std::string::npos;
    for (std::size_t i = s.size(); i-- > 1;) {
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    auto parse_coeff = [&](std::string part) {
        if (part.empty() || part == "+") return 1.0;
        if (part == "-") return -1.0;
        std::size_t pos = 0;
        const double val = std::stod(part, &pos);
        if (pos != part.size()) throw domain_error("bad complex literal '" + text + "'");
        return val;
    };
    if (split == std::string::npos) return {0.0, parse_coeff(s)};
    const std::string re_part = s.substr(0, split);
    const std::string im_part = s.substr(split);
    std::size_t pos = 0;
    const double re = std::stod(re_part, &pos);
    if (pos != re_part.size()) throw domain_error("bad complex literal '" + text + "'");
    return {re, parse_coeff(im_part)};
}

void save_json(const std::filesystem::path& path, const ordered_json& j) {
    std::ofstream out(path);
    if (!out) throw domain_error("cannot open for writing: " + path.string());
    out << j.dump(2) << "\n";
}

ordered_json load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw domain_error("cannot open: " + path.string());
    return ordered_json::parse(in);
}

MatrixFunction load_function(const std::filesystem::path& path) {
    return function_from_json(load_json(path));
}

Colligation load_colligation(const std::filesystem::path& path) {
    return colligation_from_json(load_json(path));
}

} // namespace nkappa
