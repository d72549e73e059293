#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nkappa/matrix_function.hpp"

namespace nkappa {

struct CorpusSpec {
    int count = 20;
    int kappa_max = 2;
    int max_poles = 4;
    std::uint64_t seed = 0x4E4B;
};

struct CorpusEntry {
    MatrixFunction v;
    int intended_kappa = 0;
    int deg_p = 0;
    int deg_q = 0;
    std::string name;
};

/// Scalar test functions built as (p p_sharp / q q_sharp) V0 with V0 a
/// positive-residue pole sum, so the intended kappa and degrees are known
/// by construction. All entries are realizable (deg p <= deg q, strictly
/// proper).
std::vector<CorpusEntry> generate_corpus(const CorpusSpec& spec);

} // namespace nkappa
