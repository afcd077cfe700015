#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "snp/embed.hpp"
#include "snp/json_io.hpp"
#include "snp/moi.hpp"
#include "snp/perturb.hpp"
#include "snp/schatten.hpp"

namespace {

using nlohmann::json;

snp::PNorm parse_pnorm(const std::string& s) {
    if (s == "inf" || s == "infinity") return snp::PNorm::infinity();
    if (s == "one") return snp::PNorm::one();
    try {
        size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("");
        return v == 1.0 ? snp::PNorm::one() : snp::PNorm::finite(v);
    } catch (...) {
        throw std::invalid_argument("invalid p value '" + s + "' (expected real, one, inf)");
    }
}

unsigned long seed_from_env() {
    if (const char* s = std::getenv("SNPERTURB_SEED")) return std::strtoul(s, nullptr, 10);
    return 42ul;
}

int run(int argc, char** argv) {
    CLI::App app{"snperturb: Schatten-norm perturbation toolkit"};
    app.require_subcommand(1);

    // norm
    auto* cmd_norm = app.add_subcommand("norm", "Schatten p-norm of a matrix");
    std::string norm_matrix, norm_p;
    cmd_norm->add_option("--matrix", norm_matrix, "matrix JSON path")->required();
    cmd_norm->add_option("--p", norm_p, "p (real > 0, one, inf)")->required();

    // deriv
    auto* cmd_deriv = app.add_subcommand("deriv", "t-derivative of ||A+tB||_p^p at t = 0");
    std::string da, db;
    double dp = 2.0;
    int dorder = 1;
    bool fd_check = false;
    cmd_deriv->add_option("--a", da, "A matrix JSON")->required();
    cmd_deriv->add_option("--b", db, "B matrix JSON")->required();
    cmd_deriv->add_option("--p", dp, "p in (1, inf)")->required();
    cmd_deriv->add_option("--order", dorder, "derivative order (1, 2 or 3)")->required();
    cmd_deriv->add_flag("--fd-check", fd_check, "include the finite-difference cross-check");

    // moi-trace
    auto* cmd_moi = app.add_subcommand("moi-trace", "second-order trace contraction");
    std::string ma, mb;
    double mp = 2.0;
    int mrank = 0;
    cmd_moi->add_option("--a", ma, "A matrix JSON")->required();
    cmd_moi->add_option("--b", mb, "B matrix JSON")->required();
    cmd_moi->add_option("--p", mp, "p > 1")->required();
    cmd_moi->add_option("--rank", mrank, "truncate to the top-rank eigendirections");

    // bj
    auto* cmd_bj = app.add_subcommand("bj", "Birkhoff-James orthogonality test");
    std::string ba, bb;
    double bp = 2.0;
    cmd_bj->add_option("--a", ba, "A matrix JSON")->required();
    cmd_bj->add_option("--b", bb, "B matrix JSON")->required();
    cmd_bj->add_option("--p", bp, "p in (1, inf)")->required();

    // eigpath
    auto* cmd_eig = app.add_subcommand("eigpath", "track eigenvalue branches of A+tB");
    std::string ea, eb, eout;
    double etmax = 1.0;
    int esteps = 256;
    cmd_eig->add_option("--a", ea, "A matrix JSON")->required();
    cmd_eig->add_option("--b", eb, "B matrix JSON")->required();
    cmd_eig->add_option("--tmax", etmax, "half-width of the t interval")->required();
    cmd_eig->add_option("--steps", esteps, "grid steps (even, >= 64)")->required();
    cmd_eig->add_option("--out", eout, "CSV output path")->required();

    // reduce
    auto* cmd_red = app.add_subcommand("reduce", "self-adjoint 2x2 block reduction");
    std::string ra, rb, rp, rprefix;
    cmd_red->add_option("--a", ra, "A matrix JSON")->required();
    cmd_red->add_option("--b", rb, "B matrix JSON")->required();
    cmd_red->add_option("--p", rp, "p (real, one, inf)")->required();
    cmd_red->add_option("--out-prefix", rprefix, "writes PREFIX_A.json, PREFIX_B.json")
        ->required();

    // iqp-verify
    auto* cmd_iqp = app.add_subcommand("iqp-verify", "grid check of the norm identity");
    std::string iclaim;
    int igrid = 513;
    cmd_iqp->add_option("--claim", iclaim, "claim JSON path")->required();
    cmd_iqp->add_option("--grid", igrid, "grid points (default 513)");

    // refute
    auto* cmd_ref = app.add_subcommand("refute", "run the full obstruction pipeline");
    std::string rclaim, rout;
    cmd_ref->add_option("--claim", rclaim, "claim JSON path")->required();
    cmd_ref->add_option("--out", rout, "report JSON output path")->required();

    // plconvex
    auto* cmd_pl = app.add_subcommand("plconvex", "trace-norm uniform convexity check");
    std::string px, py;
    int pangles = 256;
    double pq = 4.0;
    cmd_pl->add_option("--x", px, "x matrix JSON")->required();
    cmd_pl->add_option("--y", py, "y matrix JSON")->required();
    cmd_pl->add_option("--angles", pangles, "quadrature angles (default 256)");
    cmd_pl->add_option("--q", pq, "claimed q (default 4)");

    // fq-deriv
    auto* cmd_fq = app.add_subcommand("fq-deriv", "derivative of (1+|t|^q)^{1/q}");
    double fq_q = 1.5, fq_t = 1.0;
    int fq_n = 1;
    cmd_fq->add_option("--q", fq_q, "q > 1, noninteger")->required();
    cmd_fq->add_option("--n", fq_n, "derivative order")->required();
    cmd_fq->add_option("--t", fq_t, "evaluation point (nonzero)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    (void)seed_from_env();  // reserved for randomized sub-procedures

    std::cout.precision(15);

    if (cmd_norm->parsed()) {
        const snp::ComplexMatrix m = snp::load_matrix_file(norm_matrix);
        std::cout << snp::schatten_norm(m, parse_pnorm(norm_p)) << "\n";
        return 0;
    }
    if (cmd_deriv->parsed()) {
        const snp::HermitianMatrix a{snp::load_matrix_file(da)};
        const snp::HermitianMatrix b{snp::load_matrix_file(db)};
        const snp::DerivativeReport rep = snp::rth_derivative(a, b, dp, dorder);
        json j{{"order", rep.order}, {"value", rep.value}};
        if (fd_check) {
            j["fd_value"] = rep.fd_value;
            j["residual_vs_fd"] = rep.residual_vs_fd;
        }
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    if (cmd_moi->parsed()) {
        const snp::HermitianMatrix a{snp::load_matrix_file(ma)};
        const snp::HermitianMatrix b{snp::load_matrix_file(mb)};
        const snp::SpectralDecomposition sa = snp::hermitian_eig(a);
        const double v = (mrank > 0) ? snp::moi_trace_truncated(sa, mp, b, mrank)
                                     : snp::moi_trace_order2(sa, mp, b);
        std::cout << v << "\n";
        return 0;
    }
    if (cmd_bj->parsed()) {
        const snp::HermitianMatrix a{snp::load_matrix_file(ba)};
        const snp::HermitianMatrix b{snp::load_matrix_file(bb)};
        const snp::BjResult res = snp::bj_orthogonal(a, b, bp);
        json j{{"trace", res.trace_value},
               {"tolerance", res.tolerance},
               {"orthogonal", res.verdict},
               {"probe",
                {{"grid_min", res.probe.grid_min},
                 {"argmin_z", json::array({res.probe.argmin_z.real(), res.probe.argmin_z.imag()})},
                 {"slope_min", res.probe.slope_min},
                 {"tolerance", res.probe.tolerance},
                 {"attained_at_zero", res.probe.attained_at_zero}}}};
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    if (cmd_eig->parsed()) {
        const snp::HermitianMatrix a{snp::load_matrix_file(ea)};
        const snp::HermitianMatrix b{snp::load_matrix_file(eb)};
        const snp::BranchFamily fam = snp::track_branches(a, b, etmax, esteps);
        std::ofstream out(eout);
        if (!out) throw std::invalid_argument("cannot write '" + eout + "'");
        out << fam.to_csv();
        json j{{"branches", fam.n()}, {"rows", fam.t_grid.size()}, {"out", eout}};
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    if (cmd_red->parsed()) {
        const snp::ComplexMatrix a = snp::load_matrix_file(ra);
        const snp::ComplexMatrix b = snp::load_matrix_file(rb);
        const auto [an, bn] = snp::reduce_to_selfadjoint(a, b, parse_pnorm(rp));
        snp::save_matrix_file(rprefix + "_A.json", an.mat());
        snp::save_matrix_file(rprefix + "_B.json", bn.mat());
        json j{{"a_out", rprefix + "_A.json"},
               {"b_out", rprefix + "_B.json"},
               {"dim", an.dim()}};
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    if (cmd_iqp->parsed()) {
        const snp::EmbeddingClaim claim = snp::load_claim_file(iclaim);
        const snp::IqpResidual res = snp::verify_iqp(claim, igrid);
        json j{{"max_residual", res.max_residual},
               {"argmax_t", res.argmax_t},
               {"tolerance", res.tolerance},
               {"points", res.ts.size()},
               {"pass", res.pass}};
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    if (cmd_ref->parsed()) {
        const snp::EmbeddingClaim claim = snp::load_claim_file(rclaim);
        const snp::RefutationReport rep = snp::refute(claim);
        std::ofstream out(rout);
        if (!out) throw std::invalid_argument("cannot write '" + rout + "'");
        out << snp::refutation_report_to_json(rep).dump(2) << "\n";
        std::cout << snp::conclusion_str(rep.conclusion)
                  << (rep.refuted_stage.empty() ? "" : " (" + rep.refuted_stage + ")") << "\n";
        return 0;
    }
    if (cmd_pl->parsed()) {
        const snp::ComplexMatrix x = snp::load_matrix_file(px);
        const snp::ComplexMatrix y = snp::load_matrix_file(py);
        const snp::PlConvexityResult res = snp::pl_convexity_check(x, y, pq, pangles);
        json j{{"circular_mean_sq", res.circular_mean_sq},
               {"norm_x", res.norm_x},
               {"norm_y", res.norm_y},
               {"inequality_holds", res.inequality_holds},
               {"growth_1p5_pow_q", res.growth},
               {"refuted", res.refuted}};
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    if (cmd_fq->parsed()) {
        std::cout << snp::fq_derivative(fq_q, fq_n, fq_t) << "\n";
        return 0;
    }
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
}
