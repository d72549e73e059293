#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "nkappa/classify.hpp"
#include "nkappa/colligation.hpp"
#include "nkappa/factorize.hpp"

namespace nkappa {

using ordered_json = nlohmann::ordered_json;

ordered_json complex_to_json(Complex z);
Complex complex_from_json(const nlohmann::json& j);

ordered_json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const nlohmann::json& j);

ordered_json poly_to_json(const ComplexPolynomial& p);
ComplexPolynomial poly_from_json(const nlohmann::json& j);

ordered_json function_to_json(const MatrixFunction& v);
MatrixFunction function_from_json(const nlohmann::json& j);

ordered_json colligation_to_json(const Colligation& c);
Colligation colligation_from_json(const nlohmann::json& j);

ordered_json report_to_json(const ClassificationReport& rep);
ordered_json factorization_to_json(const Factorization& f);

/// Parses "a+bi" (also "3", "2i", "-i", "1e-3-2.5i"); whitespace tolerated.
Complex parse_complex(const std::string& text);

void save_json(const std::filesystem::path& path, const ordered_json& j);
ordered_json load_json(const std::filesystem::path& path);

MatrixFunction load_function(const std::filesystem::path& path);
Colligation load_colligation(const std::filesystem::path& path);

} // namespace nkappa
