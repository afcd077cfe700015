#include "snp/json_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>

namespace snp {

using nlohmann::json;

json matrix_to_json(const ComplexMatrix& m) {
    json entries = json::array();
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            entries.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

ComplexMatrix matrix_from_json(const json& j) {
    for (const char* field : {"rows", "cols", "entries"})
        if (!j.contains(field))
            throw std::invalid_argument(std::string("matrix JSON missing field '") + field +
                                        "'");
    const int rows = j.at("rows").get<int>();
    const int cols = j.at("cols").get<int>();
    if (rows <= 0 || cols <= 0)
        throw std::invalid_argument("matrix JSON field 'rows'/'cols' must be positive");
    const json& entries = j.at("entries");
    if (!entries.is_array() ||
        entries.size() != static_cast<size_t>(rows) * static_cast<size_t>(cols))
        throw std::invalid_argument(
            "matrix JSON field 'entries' must hold rows*cols [re, im] pairs");
    ComplexMatrix m(rows, cols);
    size_t k = 0;
    for (const json& e : entries) {
        if (!e.is_array() || e.size() != 2)
            throw std::invalid_argument("matrix JSON entry must be an [re, im] pair");
        const double re = e[0].get<double>();
        const double im = e[1].get<double>();
        if (!std::isfinite(re) || !std::isfinite(im))
            throw std::invalid_argument("matrix JSON entries must be finite");
        m.data()[k++] = Complex(re, im);
    }
    return m;
}

ComplexMatrix load_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open matrix file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("malformed JSON in '" + path + "': " + e.what());
    }
    return matrix_from_json(j);
}

void save_matrix_file(const std::string& path, const ComplexMatrix& m) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write matrix file '" + path + "'");
    out << matrix_to_json(m).dump(2) << "\n";
}

PNorm pnorm_from_json(const json& j) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "inf" || s == "infinity") return PNorm::infinity();
        if (s == "one" || s == "1") return PNorm::one();
        throw std::invalid_argument("p must be a number, \"one\" or \"inf\"; got \"" + s +
                                    "\"");
    }
    if (j.is_number()) {
        const double v = j.get<double>();
        if (v == 1.0) return PNorm::one();
        return PNorm::finite(v);
    }
    throw std::invalid_argument("p must be a number, \"one\" or \"inf\"");
}

json pnorm_to_json(const PNorm& p) {
    switch (p.tag) {
        case PNorm::Tag::One:
            return json(1.0);
        case PNorm::Tag::Infinity:
            return json("inf");
        case PNorm::Tag::Finite:
            return json(p.p);
    }
    throw std::logic_error("unreachable");
}

EmbeddingClaim claim_from_json(const json& j) {
    for (const char* field : {"q", "p", "A", "B"})
        if (!j.contains(field))
            throw std::invalid_argument(std::string("claim JSON missing field '") + field +
                                        "'");
    double q;
    if (j.at("q").is_string()) {
        const std::string s = j.at("q").get<std::string>();
        if (s != "inf" && s != "infinity")
            throw std::invalid_argument("claim field 'q' must be a number or \"inf\"");
        q = std::numeric_limits<double>::infinity();
    } else {
        q = j.at("q").get<double>();
    }
    const PNorm p = pnorm_from_json(j.at("p"));
    const ComplexMatrix a = matrix_from_json(j.at("A"));
    const ComplexMatrix b = matrix_from_json(j.at("B"));
    const bool reduced = j.value("reduced", false);
    return EmbeddingClaim::make(a, b, q, p, reduced);
}

EmbeddingClaim load_claim_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open claim file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("malformed JSON in '" + path + "': " + e.what());
    }
    return claim_from_json(j);
}

std::string conclusion_str(RefutationReport::Conclusion c) {
    switch (c) {
        case RefutationReport::Conclusion::VerifiedNumerically:
            return "verified_numerically";
        case RefutationReport::Conclusion::RefutedAt:
            return "refuted_at";
        case RefutationReport::Conclusion::OutOfTheoremScope:
            return "out_of_theorem_scope";
        case RefutationReport::Conclusion::ConsistentOnlyIfQEq2:
            return "consistent_only_if_q_eq_2";
    }
    throw std::logic_error("unreachable");
}

json refutation_report_to_json(const RefutationReport& rep) {
    json j;
    j["claimed_q"] = std::isfinite(rep.claimed_q) ? json(rep.claimed_q) : json("inf");
    j["p"] = rep.p_str;
    j["conclusion"] = conclusion_str(rep.conclusion);
    if (!rep.refuted_stage.empty()) j["refuted_stage"] = rep.refuted_stage;
    j["summary"] = rep.summary;

    j["iqp"] = {{"max_residual", rep.iqp.max_residual},
                {"argmax_t", rep.iqp.argmax_t},
                {"tolerance", rep.iqp.tolerance},
                {"pass", rep.iqp.pass},
                {"points", rep.iqp.ts.size()}};

    if (rep.bj_checked)
        j["bj"] = {{"trace", rep.bj_trace},
                   {"tolerance", rep.bj_tolerance},
                   {"orthogonal", rep.bj_ok}};
    if (rep.ab_checked)
        j["ab_product"] = {{"nonzero", rep.ab.nonzero},
                           {"max_entry", rep.ab.max_entry},
                           {"witness", json::array({rep.ab.witness_row, rep.ab.witness_col})}};
    if (rep.d2_checked)
        j["second_derivative"] = {{"value", rep.second_deriv},
                                  {"regularized", rep.used_regularized},
                                  {"ladder_diverged", rep.ladder_diverged}};
    if (rep.exponent_checked)
        j["exponent_fit"] = {{"q_hat", rep.fitted_q},
                             {"width", rep.fitted_q_width},
                             {"a2_data", rep.fitted_a2}};
    if (rep.endpoint) {
        j["sup_kernel_test"] = {{"max_bx", rep.endpoint->max_bx},
                                {"pb_max", rep.endpoint->pb_max},
                                {"residual_norm", rep.endpoint->residual_norm},
                                {"obstruction_met", rep.endpoint->obstruction_met},
                                {"locally_constant", rep.endpoint->locally_constant},
                                {"verdict", rep.endpoint->verdict}};
    }
    if (rep.probe) {
        const char* verdict = "inconclusive";
        switch (rep.probe->verdict) {
            case AnalyticityScore::Verdict::AnalyticExtensionImpossible:
                verdict = "analytic_extension_impossible";
                break;
            case AnalyticityScore::Verdict::ConsistentWithAnalyticity:
                verdict = "consistent_with_analyticity";
                break;
            case AnalyticityScore::Verdict::IntegerQInconclusive:
                verdict = "integer_q_boundary_inconclusive";
                break;
            case AnalyticityScore::Verdict::Inconclusive:
                break;
        }
        j["analyticity_probe"] = {{"difference_order", rep.probe->difference_order},
                                  {"fitted_exponent", rep.probe->fitted_exponent},
                                  {"target_exponent", rep.probe->target_exponent},
                                  {"verdict", verdict}};
    }
    if (rep.pl) {
        j["pl_convexity"] = {{"circular_mean_sq", rep.pl->circular_mean_sq},
                             {"norm_x", rep.pl->norm_x},
                             {"norm_y", rep.pl->norm_y},
                             {"inequality_holds", rep.pl->inequality_holds},
                             {"growth_1p5_pow_q", rep.pl->growth},
                             {"refuted", rep.pl->refuted}};
    }
    return j;
}

}  // namespace snp
