#pragma once

#include <string>

#include "json.hpp"
#include "snp/embed.hpp"
#include "snp/matrix.hpp"
#include "snp/schatten.hpp"

namespace snp {

// Matrix wire format: {"rows": N, "cols": M, "entries": [[re, im], ...]}
// row-major.
nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j);

ComplexMatrix load_matrix_file(const std::string& path);
void save_matrix_file(const std::string& path, const ComplexMatrix& m);

// Accepts a number, or "inf" for the sup norm, or "one"/1 for the trace norm.
PNorm pnorm_from_json(const nlohmann::json& j);
nlohmann::json pnorm_to_json(const PNorm& p);

// Claim envelope: {"q": number|"inf", "p": number|"inf"|"one", "A": matrix,
// "B": matrix, "reduced": bool}.
EmbeddingClaim claim_from_json(const nlohmann::json& j);
EmbeddingClaim load_claim_file(const std::string& path);

nlohmann::json refutation_report_to_json(const RefutationReport& rep);

std::string conclusion_str(RefutationReport::Conclusion c);

}  // namespace snp
