#include "snp/embed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "snp/divdiff.hpp"
#include "snp/eig.hpp"
#include "snp/linfit.hpp"
#include "snp/moi.hpp"

namespace snp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool q_is(double q, double v) { return std::abs(q - v) <= 1e-9; }

double target_curve(double q, double t) {
    const double m = std::max(1.0, std::abs(t));
    if (q == kInf) return m;
    // factor out the larger coordinate so t^q never overflows
    const double r = std::min(1.0, std::abs(t)) / m;
    return m * std::pow(1.0 + std::pow(r, q), 1.0 / q);
}

}  // namespace

std::pair<HermitianMatrix, HermitianMatrix> reduce_to_selfadjoint(const ComplexMatrix& a,
                                                                  const ComplexMatrix& b,
                                                                  const PNorm& p) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("reduce_to_selfadjoint: A and B must share shape");
    if (!a.is_square())
        throw std::invalid_argument("reduce_to_selfadjoint: inputs must be square "
                                    "(pad rectangular blocks first)");
    const int n = a.rows();
    const double factor =
        (p.tag == PNorm::Tag::Infinity) ? 1.0 : std::pow(2.0, -1.0 / p.exponent());

    auto embed_offdiag = [&](const ComplexMatrix& m) {
        ComplexMatrix r(2 * n, 2 * n);
        const ComplexMatrix ms = adjoint(m);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                r(i, n + j) = factor * m(i, j);
                r(n + i, j) = factor * ms(i, j);
            }
        return HermitianMatrix::symmetrize(r);
    };
    return {embed_offdiag(a), embed_offdiag(b)};
}

EmbeddingClaim EmbeddingClaim::make(const ComplexMatrix& a_in, const ComplexMatrix& b_in,
                                    double q, const PNorm& p, bool already_reduced) {
    if (!(q > 1.0)) throw std::invalid_argument("claim requires q in (1, inf]");

    HermitianMatrix a = HermitianMatrix::from_diagonal({1.0});
    HermitianMatrix b = a;
    if (already_reduced) {
        a = HermitianMatrix(a_in);
        b = HermitianMatrix(b_in);
    } else {
        std::tie(a, b) = reduce_to_selfadjoint(a_in, b_in, p);
    }

    // Canonical basis: diagonalize A and carry B along.
    const SpectralDecomposition sa = hermitian_eig(a);
    a = HermitianMatrix::from_diagonal(sa.eigenvalues);
    b = HermitianMatrix::symmetrize(adjoint(sa.eigenvectors) * (b.mat() * sa.eigenvectors));

    const double na = schatten_norm(a, p);
    const double nb = schatten_norm(b, p);
    if (na <= 0.0 || nb <= 0.0)
        throw std::invalid_argument("claim requires nonzero A and B");
    a = (1.0 / na) * a;
    b = (1.0 / nb) * b;
    return EmbeddingClaim(std::move(a), std::move(b), q, p, na, nb);
}

EmbeddingClaim construct_rank_one_control(const PNorm& p) {
    ComplexMatrix a0(2, 2), b0(2, 2);
    a0(0, 0) = 1.0;
    b0(0, 1) = 1.0;
    return EmbeddingClaim::make(a0, b0, 2.0, p, false);
}

IqpResidual verify_iqp(const EmbeddingClaim& claim, int grid_points, double t_span,
                       double early_stop) {
    if (grid_points < 3) throw std::invalid_argument("verify_iqp: need at least 3 points");
    IqpResidual out;
    out.ts.reserve(grid_points);
    out.residuals.reserve(grid_points);
    for (int k = 0; k < grid_points; ++k) {
        const double t = -t_span + 2.0 * t_span * k / (grid_points - 1);
        const double nv = schatten_norm(pencil_at(claim.a(), claim.b(), t), claim.p());
        const double resid = std::abs(nv - target_curve(claim.q(), t));
        out.ts.push_back(t);
        out.residuals.push_back(resid);
        if (resid > out.max_residual) {
            out.max_residual = resid;
            out.argmax_t = t;
        }
        if (early_stop > 0.0 && resid > early_stop) break;
    }
    out.pass = out.max_residual <= out.tolerance;
    return out;
}

AbProduct check_ab_nonzero(const EmbeddingClaim& claim) {
    const ComplexMatrix prod = claim.a().mat() * claim.b().mat();
    AbProduct out;
    for (int i = 0; i < prod.rows(); ++i)
        for (int j = 0; j < prod.cols(); ++j)
            if (std::abs(prod(i, j)) > out.max_entry) {
                out.max_entry = std::abs(prod(i, j));
                out.witness_row = i;
                out.witness_col = j;
            }
    out.nonzero = out.max_entry > 1e-10;
    return out;
}

RegularizedSecond second_derivative_regularized(const HermitianMatrix& a,
                                                const HermitianMatrix& b, double p,
                                                std::vector<double> x_ladder) {
    if (!(p > 1.0) || !(p < 2.0))
        throw std::invalid_argument("second_derivative_regularized targets p in (1, 2)");
    if (a.dim() != b.dim())
        throw std::invalid_argument("second_derivative_regularized: dimension mismatch");

    const SpectralDecomposition sa = hermitian_eig(a);
    double radius = 0.0;
    for (double d : sa.eigenvalues) radius = std::max(radius, std::abs(d));
    double min_nz = kInf;
    for (double d : sa.eigenvalues)
        if (std::abs(d) > 1e-12 * radius) min_nz = std::min(min_nz, std::abs(d));
    if (!std::isfinite(min_nz)) min_nz = 1.0;

    // The shift may not flip the sign of any nonzero eigenvalue.
    std::sort(x_ladder.begin(), x_ladder.end(), std::greater<>());
    std::vector<double> xs;
    for (double x : x_ladder)
        if (x > 0.0 && x < 0.5 * min_nz) xs.push_back(x);
    if (xs.size() < 3) {
        xs.clear();
        for (double f : {0.4, 0.04, 4e-3, 4e-4, 4e-5}) xs.push_back(f * min_nz);
    }

    const ComplexMatrix bt =
        adjoint(sa.eigenvectors) * (b.mat() * sa.eigenvectors);
    const int n = a.dim();
    auto value_at = [&](double x) {
        double sum = 0.0;
        for (int l = 0; l < n; ++l) {
            const double dl = sa.eigenvalues[l] + x;
            sum += 0.5 * sym_second_dd(p, dl, dl) * std::norm(bt(l, l));
            for (int k = l + 1; k < n; ++k)
                sum += sym_second_dd(p, dl, sa.eigenvalues[k] + x) * std::norm(bt(l, k));
        }
        return 2.0 * sum;
    };

    RegularizedSecond out;
    for (double x : xs) {
        out.ladder_x.push_back(x);
        out.ladder_value.push_back(value_at(x));
    }

    // A perturbation with weight on the kernel block blows up like x^{p-2},
    // i.e. by 10^{2-p} per decade; half that rate (geometrically) separates
    // it from a converging ladder.
    const double per_decade = std::pow(10.0, (2.0 - p) / 2.0);
    const size_t m = out.ladder_value.size();
    if (m >= 3) {
        double g1 = std::abs(out.ladder_value[m - 2]) /
                    std::max(std::abs(out.ladder_value[m - 3]), 1e-300);
        double g2 = std::abs(out.ladder_value[m - 1]) /
                    std::max(std::abs(out.ladder_value[m - 2]), 1e-300);
        const double decades1 = std::log10(out.ladder_x[m - 3] / out.ladder_x[m - 2]);
        const double decades2 = std::log10(out.ladder_x[m - 2] / out.ladder_x[m - 1]);
        if (g1 >= std::pow(per_decade, decades1) && g2 >= std::pow(per_decade, decades2)) {
            out.diverged = true;
            return out;
        }
    }

    // v(x) = v0 + c1 x^{p-1} + c2 x^{2(p-1)} + ...; least squares in the first
    // three powers over the smallest rungs.
    const size_t use = std::min<size_t>(4, m);
    const double e1 = p - 1.0;
    double g[3][3] = {{0}}, rhs[3] = {0};
    for (size_t i = m - use; i < m; ++i) {
        const double x = out.ladder_x[i];
        const double basis[3] = {1.0, std::pow(x, e1), std::pow(x, 2.0 * e1)};
        for (int r = 0; r < 3; ++r) {
            rhs[r] += basis[r] * out.ladder_value[i];
            for (int c = 0; c < 3; ++c) g[r][c] += basis[r] * basis[c];
        }
    }
    // 3x3 Gaussian elimination with partial pivoting
    int piv[3] = {0, 1, 2};
    for (int col = 0; col < 3; ++col) {
        int best = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(g[piv[r]][col]) > std::abs(g[piv[best]][col])) best = r;
        std::swap(piv[col], piv[best]);
        for (int r = col + 1; r < 3; ++r) {
            const double f = g[piv[r]][col] / g[piv[col]][col];
            for (int c = col; c < 3; ++c) g[piv[r]][c] -= f * g[piv[col]][c];
            rhs[piv[r]] -= f * rhs[piv[col]];
        }
    }
    double sol[3];
    for (int col = 2; col >= 0; --col) {
        double s = rhs[piv[col]];
        for (int c = col + 1; c < 3; ++c) s -= g[piv[col]][c] * sol[c];
        sol[col] = s / g[piv[col]][col];
    }
    out.value = sol[0];
    return out;
}

PlConvexityResult pl_convexity_check(const ComplexMatrix& x, const ComplexMatrix& y,
                                     double q_claimed, int angles) {
    if (angles < 8) throw std::invalid_argument("pl_convexity_check: need >= 8 angles");
    PlConvexityResult out;
    out.claimed_q = q_claimed;
    const PNorm one = PNorm::one();
    out.norm_x = schatten_norm(x, one);
    out.norm_y = schatten_norm(y, one);
    double mean = 0.0;
    for (int k = 0; k < angles; ++k) {
        const double theta = 2.0 * std::numbers::pi * k / angles;
        const double nv = schatten_norm(x + std::polar(1.0, theta) * y, one);
        mean += nv * nv;
    }
    out.circular_mean_sq = mean / angles;
    const double rhs = out.norm_x * out.norm_x + 0.5 * out.norm_y * out.norm_y;
    out.inequality_holds = out.circular_mean_sq >= rhs - 1e-6 * (1.0 + rhs);
    out.growth = std::pow(1.5, q_claimed);
    out.refuted = q_claimed >= 4.0;
    return out;
}

namespace {

struct TwoTermFit {
    double c_hi = 0.0;  // coefficient of t^e_hi
    double c_lo = 0.0;  // coefficient of t^e_lo
    double sse = 0.0;
};

// Weighted least squares of F ~ c_hi t^{e_hi} + c_lo t^{e_lo} with relative
// weights.
TwoTermFit fit_two_term(const std::vector<double>& ts, const std::vector<double>& fs,
                        double e_hi, double e_lo, double floor) {
    double a11 = 0, a12 = 0, a22 = 0, b1 = 0, b2 = 0;
    for (size_t i = 0; i < ts.size(); ++i) {
        const double w = 1.0 / std::pow(std::max(std::abs(fs[i]), floor), 2);
        const double x1 = std::pow(ts[i], e_hi);
        const double x2 = std::pow(ts[i], e_lo);
        a11 += w * x1 * x1;
        a12 += w * x1 * x2;
        a22 += w * x2 * x2;
        b1 += w * x1 * fs[i];
        b2 += w * x2 * fs[i];
    }
    TwoTermFit fit;
    const double det = a11 * a22 - a12 * a12;
    if (std::abs(det) < 1e-30 * a11 * a22 || a22 == 0.0) {
        fit.c_hi = (a11 > 0.0) ? b1 / a11 : 0.0;
        fit.c_lo = 0.0;
    } else {
        fit.c_hi = (b1 * a22 - b2 * a12) / det;
        fit.c_lo = (b2 * a11 - b1 * a12) / det;
    }
    for (size_t i = 0; i < ts.size(); ++i) {
        const double w = 1.0 / std::pow(std::max(std::abs(fs[i]), floor), 2);
        const double r = fs[i] - fit.c_hi * std::pow(ts[i], e_hi) -
                         fit.c_lo * std::pow(ts[i], e_lo);
        fit.sse += w * r * r;
    }
    return fit;
}

}  // namespace

ExponentStage run_exponent_stage(const std::vector<double>& ts,
                                 const std::vector<double>& fs, double p,
                                 double claimed_q, double a2_trace) {
    (void)p;
    if (ts.size() != fs.size() || ts.size() < 8)
        throw std::invalid_argument("run_exponent_stage: need at least 8 samples");
    double fmax = 0.0;
    for (double f : fs) fmax = std::max(fmax, std::abs(f));
    const double floor = std::max(1e-13 * fmax, 1e-300);

    ExponentStage out;

    // Scan the singular exponent; the model is c t^q + a2 t^2 with both
    // coefficients free (the trace-formula a2 is a cross-check, not an input
    // to the fit, so ladder error cannot contaminate the exponent).
    auto sse_at = [&](double q) { return fit_two_term(ts, fs, q, 2.0, floor).sse; };
    double best_q = 1.05, best_sse = kInf;
    std::vector<std::pair<double, double>> scan;
    for (double q = 1.02; q <= 3.90001; q += 0.02) {
        if (q > 1.93 && q < 2.07) continue;  // collinear with the t^2 term
        const double s = sse_at(q);
        scan.emplace_back(q, s);
        if (s < best_sse) {
            best_sse = s;
            best_q = q;
        }
    }
    // local refinement
    double lo = best_q - 0.02, hi = best_q + 0.02;
    for (int it = 0; it < 40; ++it) {
        const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (sse_at(m1) < sse_at(m2))
            hi = m2;
        else
            lo = m1;
    }
    best_q = 0.5 * (lo + hi);
    best_sse = sse_at(best_q);

    // Alternative: the curve is analytic through t^4 (the q = 2 shape).
    const TwoTermFit analytic = fit_two_term(ts, fs, 4.0, 2.0, floor);

    if (analytic.sse <= 1.2 * best_sse) {
        out.q_hat = 2.0;
        out.a2_data = analytic.c_lo;
        double width = 0.01;
        for (const auto& [q, s] : scan)
            if (s <= 2.0 * std::max(analytic.sse, 1e-300)) width = std::max(width, std::abs(q - 2.0));
        out.width = std::min(width, 0.5);
    } else {
        const TwoTermFit fit = fit_two_term(ts, fs, best_q, 2.0, floor);
        out.q_hat = best_q;
        out.a2_data = fit.c_lo;
        double qlo = best_q, qhi = best_q;
        for (const auto& [q, s] : scan)
            if (s <= 2.0 * best_sse) {
                qlo = std::min(qlo, q);
                qhi = std::max(qhi, q);
            }
        out.width = std::max(0.01, 0.5 * (qhi - qlo));
    }

    if (std::isfinite(a2_trace) && std::abs(out.a2_data - a2_trace) >
                                       0.05 * std::max({std::abs(a2_trace), std::abs(out.a2_data), 1e-6})) {
        // curve and trace formula disagree on the t^2 coefficient; keep the
        // curve-side fit but widen the confidence interval
        out.width = std::max(out.width, 0.05);
    }

    out.q2_consistent = std::abs(out.q_hat - 2.0) <= 0.1;
    const bool claimed_is_2 = q_is(claimed_q, 2.0);
    out.fired = !(out.q2_consistent && claimed_is_2);
    return out;
}

namespace {

std::vector<double> log_spaced(double lo, double hi, int n) {
    std::vector<double> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i)
        out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
    return out;
}

void conclude_refuted(RefutationReport& rep, const std::string& stage,
                      const std::string& why) {
    rep.conclusion = RefutationReport::Conclusion::RefutedAt;
    rep.refuted_stage = stage;
    rep.summary = "refuted at " + stage + ": " + why;
}

}  // namespace

RefutationReport refute(const EmbeddingClaim& claim) {
    RefutationReport rep;
    rep.claimed_q = claim.q();
    rep.p_str = claim.p().str();
    const double q = claim.q();
    const PNorm& p = claim.p();

    rep.iqp = verify_iqp(claim);
    if (!rep.iqp.pass) {
        std::ostringstream os;
        os << "max residual " << rep.iqp.max_residual << " at t = " << rep.iqp.argmax_t;
        conclude_refuted(rep, "iqp_grid", os.str());
        return rep;
    }

    // q = p is the diagonal embedding and always realizable; none of the
    // obstructions assume it.
    const bool p_is_one = p.tag == PNorm::Tag::One;
    const bool p_is_inf = p.tag == PNorm::Tag::Infinity;
    const bool q_equals_p = (q == kInf && p_is_inf) ||
                            (q != kInf && !p_is_inf && std::abs(q - p.exponent()) <= 1e-9);
    if (q_equals_p) {
        rep.conclusion = RefutationReport::Conclusion::VerifiedNumerically;
        rep.summary = "q = p holds for the diagonal pencil; the obstructions assume q != p";
        return rep;
    }

    // Cells the theory leaves open: q = 3 against the trace norm or the sup
    // norm, and q = inf against the trace norm.
    if ((q_is(q, 3.0) && (p_is_one || p_is_inf)) || (q == kInf && p_is_one)) {
        rep.conclusion = RefutationReport::Conclusion::OutOfTheoremScope;
        rep.summary = "claim passed the grid check but (q, p) lies outside the "
                      "supported theorem region";
        return rep;
    }

    if (!p_is_one && !p_is_inf && q != kInf) {
        const double pv = p.exponent();

        const BjResult bj = bj_orthogonal(claim.a(), claim.b(), pv);
        rep.bj_checked = true;
        rep.bj_trace = bj.trace_value;
        rep.bj_tolerance = bj.tolerance;
        rep.bj_ok = bj.verdict;
        if (!bj.verdict) {
            std::ostringstream os;
            os << "first-order trace " << bj.trace_value << " exceeds tolerance "
               << bj.tolerance;
            conclude_refuted(rep, "bj_orthogonality", os.str());
            return rep;
        }

        rep.ab = check_ab_nonzero(claim);
        rep.ab_checked = true;
        if (!rep.ab.nonzero) {
            conclude_refuted(rep, "ab_product",
                             "A.B = 0 is incompatible with the grid identity for q != p");
            return rep;
        }

        double a2_trace = std::numeric_limits<double>::quiet_NaN();
        const SpectralDecomposition sa = hermitian_eig(claim.a());
        double min_abs_d = kInf;
        for (double d : sa.eigenvalues) min_abs_d = std::min(min_abs_d, std::abs(d));
        if (pv >= 2.0 || min_abs_d > 1e-10) {
            const DerivativeReport d2 = second_derivative(claim.a(), claim.b(), pv);
            rep.d2_checked = true;
            rep.second_deriv = d2.value;
            a2_trace = 0.5 * d2.value;
        } else {
            const RegularizedSecond reg =
                second_derivative_regularized(claim.a(), claim.b(), pv);
            rep.d2_checked = true;
            rep.used_regularized = true;
            rep.ladder_diverged = reg.diverged;
            if (reg.diverged) {
                conclude_refuted(rep, "kernel_block_divergence",
                                 "regularized second-derivative ladder diverges, so the "
                                 "perturbation loads the kernel block of A");
                return rep;
            }
            rep.second_deriv = reg.value;
            a2_trace = 0.5 * reg.value;
        }

        const std::vector<double> ts = log_spaced(1e-3, 1e-1, 40);
        std::vector<double> fs;
        fs.reserve(ts.size());
        for (double t : ts)
            fs.push_back(schatten_pow(pencil_at(claim.a(), claim.b(), t), pv) - 1.0);
        const ExponentStage stage = run_exponent_stage(ts, fs, pv, q, a2_trace);
        rep.exponent_checked = true;
        rep.fitted_q = stage.q_hat;
        rep.fitted_q_width = stage.width;
        rep.fitted_a2 = stage.a2_data;
        if (stage.fired) {
            if (stage.q2_consistent) {
                rep.conclusion = RefutationReport::Conclusion::ConsistentOnlyIfQEq2;
                std::ostringstream os;
                os << "measured growth exponent " << stage.q_hat << " +- " << stage.width
                   << " matches q = 2, not the claimed q = " << q;
                rep.summary = os.str();
            } else {
                std::ostringstream os;
                os << "fitted exponent " << stage.q_hat << " +- " << stage.width
                   << " is incompatible with an order-2 expansion";
                conclude_refuted(rep, "exponent_fit", os.str());
            }
            return rep;
        }
        rep.conclusion = RefutationReport::Conclusion::VerifiedNumerically;
        rep.summary = "grid identity holds and no obstruction fired";
        return rep;
    }

    if (!p_is_one && !p_is_inf && q == kInf) {
        // The target max(1, |t|^p) has a slope jump of p at t = 1; the matrix
        // curve is differentiable there.
        const double pv = p.exponent();
        const double h = 1e-4;
        auto phi = [&](double t) {
            return schatten_pow(pencil_at(claim.a(), claim.b(), t), pv);
        };
        const double jump = (phi(1.0 + h) - phi(1.0)) / h - (phi(1.0) - phi(1.0 - h)) / h;
        if (std::abs(jump) < 0.5 * pv) {
            std::ostringstream os;
            os << "||A+tB||_p^p is differentiable at t = 1 (one-sided slope jump " << jump
               << "), while max(1, |t|^p) jumps by " << pv;
            conclude_refuted(rep, "endpoint_nondifferentiability", os.str());
        } else {
            rep.conclusion = RefutationReport::Conclusion::VerifiedNumerically;
            rep.summary = "corner detected at t = 1; no obstruction fired";
        }
        return rep;
    }

    if (p_is_inf) {
        if (q_is(q, 2.0)) {
            rep.conclusion = RefutationReport::Conclusion::VerifiedNumerically;
            rep.summary = "q = 2 is exempt from the sup-norm obstructions";
            return rep;
        }
        if (q > 2.0) {
            rep.endpoint = sup_norm_kernel_test(claim.a(), claim.b());
            const KernelTestResult& kt = *rep.endpoint;
            if (!kt.obstruction_met) {
                conclude_refuted(rep, "sup_kernel_test", kt.verdict);
            } else if (kt.locally_constant) {
                conclude_refuted(rep, "sup_local_constancy", kt.verdict);
            } else {
                rep.conclusion = RefutationReport::Conclusion::VerifiedNumerically;
                rep.summary = "kernel test inconclusive; no obstruction fired";
            }
            return rep;
        }
        // 1 < q < 2: non-analyticity of the sup-norm curve at 0
        const int npts = 1025;
        std::vector<double> tg(npts), ys(npts);
        for (int k = 0; k < npts; ++k) {
            tg[k] = -0.5 + k * (1.0 / (npts - 1));
            ys[k] = schatten_norm(pencil_at(claim.a(), claim.b(), tg[k]), p);
        }
        rep.probe = analyticity_probe(ys, tg, q);
        if (rep.probe->verdict == AnalyticityScore::Verdict::AnalyticExtensionImpossible) {
            std::ostringstream os;
            os << "sup-norm curve blows up at difference order " << rep.probe->difference_order
               << " with exponent " << rep.probe->fitted_exponent;
            conclude_refuted(rep, "analyticity_probe", os.str());
        } else {
            rep.conclusion = RefutationReport::Conclusion::VerifiedNumerically;
            rep.summary = "analyticity probe did not fire";
        }
        return rep;
    }

    // p = 1
    if (q_is(q, 2.0)) {
        rep.conclusion = RefutationReport::Conclusion::VerifiedNumerically;
        rep.summary = "q = 2 is exempt from the trace-norm obstructions";
        return rep;
    }
    if (q >= 4.0) {
        rep.pl = pl_convexity_check(claim.a().mat(), claim.b().mat(), q);
        if (rep.pl->refuted) {
            std::ostringstream os;
            os << "uniform convexity forces 1.5^q <= 4 but 1.5^" << q << " = "
               << rep.pl->growth;
            conclude_refuted(rep, "pl_convexity", os.str());
        } else {
            rep.conclusion = RefutationReport::Conclusion::VerifiedNumerically;
            rep.summary = "convexity bound not violated";
        }
        return rep;
    }
    // 1 < q < 4, q != 2, 3: non-analyticity of the trace-norm curve
    {
        const int npts = 1025;
        std::vector<double> tg(npts), ys(npts);
        for (int k = 0; k < npts; ++k) {
            tg[k] = -0.5 + k * (1.0 / (npts - 1));
            ys[k] = schatten_norm(pencil_at(claim.a(), claim.b(), tg[k]), p);
        }
        rep.probe = analyticity_probe(ys, tg, q);
        if (rep.probe->verdict == AnalyticityScore::Verdict::AnalyticExtensionImpossible) {
            std::ostringstream os;
            os << "trace-norm curve blows up at difference order "
               << rep.probe->difference_order << " with exponent "
               << rep.probe->fitted_exponent;
            conclude_refuted(rep, "trace_norm_analyticity", os.str());
        } else {
            rep.conclusion = RefutationReport::Conclusion::VerifiedNumerically;
            rep.summary = "analyticity probe did not fire";
        }
        return rep;
    }
}

}  // namespace snp
