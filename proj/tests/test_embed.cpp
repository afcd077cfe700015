#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "snp/divdiff.hpp"
#include "snp/embed.hpp"
#include "snp/json_io.hpp"
#include "test_util.hpp"

using namespace snp;
using snp::testing::make_rng;
using snp::testing::random_complex;
using snp::testing::random_hermitian;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> log_ts(double lo, double hi, int n) {
    std::vector<double> out;
    for (int i = 0; i < n; ++i)
        out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
    return out;
}

// Synthetic pencil curve (1 + |t|^q)^{p/q} - 1, bypassing matrices.
std::vector<double> synthetic_curve(const std::vector<double>& ts, double q, double p) {
    std::vector<double> out;
    for (double t : ts)
        out.push_back(std::pow(1.0 + std::pow(std::abs(t), q), p / q) - 1.0);
    return out;
}

}  // namespace

TEST_CASE("reduction preserves the norm of hermitian inputs") {
    auto rng = make_rng(71);
    const HermitianMatrix x = random_hermitian(3, rng);
    for (const PNorm& p :
         {PNorm::one(), PNorm::finite(1.7), PNorm::finite(3.0), PNorm::infinity()}) {
        const auto [xr, junk] = reduce_to_selfadjoint(x.mat(), x.mat(), p);
        CHECK(schatten_norm(xr, p) == doctest::Approx(schatten_norm(x, p)).epsilon(1e-10));
    }
}

TEST_CASE("reduction preserves the pencil norm at random real weights") {
    auto rng = make_rng(72);
    const ComplexMatrix a = random_complex(3, 3, rng);
    const ComplexMatrix b = random_complex(3, 3, rng);
    const PNorm p = PNorm::finite(2.6);
    const auto [ar, br] = reduce_to_selfadjoint(a, b, p);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const double z = u(rng);
        const double w = u(rng);
        const double got = schatten_norm(z * ar.mat() + w * br.mat(), p);
        const double want = schatten_norm(z * a + w * b, p);
        CHECK(got == doctest::Approx(want).epsilon(1e-10));
    }
}

TEST_CASE("reduction preserves complex weights on an isometric pencil") {
    // the rank-one row pencil has ||zA + wB|| = ||(z, w)||_2 for every p
    ComplexMatrix a0(2, 2), b0(2, 2);
    a0(0, 0) = 1.0;
    b0(0, 1) = 1.0;
    auto rng = make_rng(76);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (const PNorm& p : {PNorm::one(), PNorm::finite(2.6), PNorm::infinity()}) {
        const auto [ar, br] = reduce_to_selfadjoint(a0, b0, p);
        for (int trial = 0; trial < 10; ++trial) {
            const Complex z(u(rng), u(rng));
            const Complex w(u(rng), u(rng));
            const double got = schatten_norm(z * ar.mat() + w * br.mat(), p);
            const double want = schatten_norm(z * a0 + w * b0, p);
            CHECK(got == doctest::Approx(want).epsilon(1e-10));
        }
    }
}

TEST_CASE("reduction of the rank-one pair has unit norm at p = 2") {
    ComplexMatrix a0(2, 2), b0(2, 2);
    a0(0, 0) = 1.0;
    b0(0, 1) = 1.0;
    const auto [ar, br] = reduce_to_selfadjoint(a0, b0, PNorm::finite(2.0));
    CHECK(ar.dim() == 4);
    CHECK(schatten_norm(ar, PNorm::finite(2.0)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(schatten_norm(br, PNorm::finite(2.0)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("claim construction canonicalizes and validates") {
    // disjoint diagonal pair is a legitimate claim shape for q != p
    const EmbeddingClaim c = EmbeddingClaim::make(
        HermitianMatrix::from_diagonal({1.0, 0.0}).mat(),
        HermitianMatrix::from_diagonal({0.0, 1.0}).mat(), 3.0, PNorm::finite(4.0), true);
    CHECK(schatten_norm(c.a(), c.p()) == doctest::Approx(1.0));
    CHECK(schatten_norm(c.b(), c.p()) == doctest::Approx(1.0));
    // A is stored diagonal with descending eigenvalues
    CHECK(c.a()(0, 0).real() == doctest::Approx(1.0));
    CHECK(std::abs(c.a()(0, 1)) < 1e-14);

    CHECK_THROWS_AS(EmbeddingClaim::make(ComplexMatrix::identity(2),
                                         ComplexMatrix::identity(2), 0.5,
                                         PNorm::finite(3.0), true),
                    std::invalid_argument);  // q <= 1
    CHECK_THROWS_AS(EmbeddingClaim::make(ComplexMatrix(2, 2), ComplexMatrix::identity(2),
                                         2.0, PNorm::finite(3.0), true),
                    std::invalid_argument);  // zero A
}

TEST_CASE("iqp residuals for diagonal pairs") {
    // claimed q = p: residual identically zero for the disjoint pair
    const EmbeddingClaim good = EmbeddingClaim::make(
        HermitianMatrix::from_diagonal({1.0, 0.0}).mat(),
        HermitianMatrix::from_diagonal({0.0, 1.0}).mat(), 3.0, PNorm::finite(3.0), true);
    const IqpResidual r1 = verify_iqp(good, 129);
    CHECK(r1.max_residual < 1e-12);
    CHECK(r1.pass);

    // claimed q far from p: residual at t = 1 is |2^{1/q} - 2^{1/p}|
    const EmbeddingClaim bad = EmbeddingClaim::make(
        HermitianMatrix::from_diagonal({1.0, 0.0}).mat(),
        HermitianMatrix::from_diagonal({0.0, 1.0}).mat(), 3.0, PNorm::finite(4.0), true);
    const IqpResidual r2 = verify_iqp(bad, 513);
    const double want = std::abs(std::pow(2.0, 1.0 / 3.0) - std::pow(2.0, 1.0 / 4.0));
    CHECK(r2.max_residual >= want - 1e-9);
    CHECK_FALSE(r2.pass);
}

TEST_CASE("rank-one control passes the grid check for every p") {
    for (const PNorm& p : {PNorm::one(), PNorm::finite(1.3), PNorm::finite(2.0),
                           PNorm::finite(3.7), PNorm::infinity()}) {
        const EmbeddingClaim c = construct_rank_one_control(p);
        const IqpResidual r = verify_iqp(c);
        CHECK(r.max_residual <= 1e-10);
    }
}

TEST_CASE("ab product witness") {
    const EmbeddingClaim disjoint = EmbeddingClaim::make(
        HermitianMatrix::from_diagonal({1.0, 0.0}).mat(),
        HermitianMatrix::from_diagonal({0.0, 1.0}).mat(), 3.0, PNorm::finite(4.0), true);
    CHECK_FALSE(check_ab_nonzero(disjoint).nonzero);

    const EmbeddingClaim control = construct_rank_one_control(PNorm::finite(4.0));
    CHECK(check_ab_nonzero(control).nonzero);

    const HermitianMatrix a = HermitianMatrix::from_diagonal({0.9, -0.5});
    const EmbeddingClaim self =
        EmbeddingClaim::make(a.mat(), a.mat(), 3.0, PNorm::finite(4.0), true);
    CHECK(check_ab_nonzero(self).nonzero);
}

TEST_CASE("regularized ladder agrees with the direct value on invertible input") {
    auto rng = make_rng(73);
    const HermitianMatrix a = snp::testing::random_hermitian_invertible(4, 0.4, 1.0, rng);
    const HermitianMatrix b = random_hermitian(4, rng);
    const double p = 1.5;
    const RegularizedSecond reg = second_derivative_regularized(a, b, p);
    CHECK_FALSE(reg.diverged);
    const double direct = second_derivative(a, b, p).value;
    CHECK(reg.value == doctest::Approx(direct).epsilon(1e-5));
}

TEST_CASE("regularized ladder diverges when B loads the kernel block") {
    const double c = std::pow(2.0, -1.0 / 1.5);
    const HermitianMatrix a = HermitianMatrix::from_diagonal({1.0, 0.0});
    ComplexMatrix bm(2, 2);
    bm(1, 1) = 1.0;  // b_22 on the kernel
    bm(0, 1) = 0.2;
    bm(1, 0) = 0.2;
    const RegularizedSecond reg =
        second_derivative_regularized(a, HermitianMatrix{bm}, 1.5);
    CHECK(reg.diverged);
    (void)c;
}

TEST_CASE("regularized ladder converges on a kernel-avoiding cross block") {
    // A = diag(1, 0), B purely off-diagonal; the limit is the cross-node
    // weight times |b_12|^2
    const HermitianMatrix a = HermitianMatrix::from_diagonal({1.0, 0.0});
    ComplexMatrix bm(2, 2);
    bm(0, 1) = 0.8;
    bm(1, 0) = 0.8;
    const double p = 1.5;
    const RegularizedSecond reg = second_derivative_regularized(a, HermitianMatrix{bm}, p);
    CHECK_FALSE(reg.diverged);
    const double want = 2.0 * sym_second_dd(p, 1.0, 1e-300) * 0.8 * 0.8;
    // oracle: Eq-style closed form p(|d|^p + 0 - 0)/(d)^2 = p at d = 1
    CHECK(want == doctest::Approx(2.0 * p * 0.64));
    CHECK(reg.value == doctest::Approx(want).epsilon(1e-3));
}

TEST_CASE("pl convexity anchors") {
    // 1x1 case x = y = 1: circular mean of |1+e^{i theta}|^2 is 2
    ComplexMatrix one(1, 1);
    one(0, 0) = 1.0;
    const PlConvexityResult r = pl_convexity_check(one, one, 2.0);
    CHECK(r.circular_mean_sq == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(r.inequality_holds);
    CHECK_FALSE(r.refuted);

    // q = 4: 1.5^4 = 5.0625 > 4 fires the arithmetic obstruction
    const PlConvexityResult r4 = pl_convexity_check(one, one, 4.0);
    CHECK(r4.growth == doctest::Approx(5.0625));
    CHECK(r4.refuted);
}

TEST_CASE("pl convexity inequality holds on random pairs") {
    auto rng = make_rng(74);
    for (int trial = 0; trial < 200; ++trial) {
        const ComplexMatrix x = random_complex(3, 3, rng);
        const ComplexMatrix y = random_complex(3, 3, rng);
        const PlConvexityResult r = pl_convexity_check(x, y, 2.0);
        CHECK(r.circular_mean_sq >=
              r.norm_x * r.norm_x + 0.5 * r.norm_y * r.norm_y - 1e-6);
    }
}

TEST_CASE("exponent stage recovers synthetic growth exponents") {
    const std::vector<double> ts = log_ts(1e-3, 1e-1, 40);
    const double p = 3.0;
    for (const double q : {1.5, 2.5, 3.0}) {
        const ExponentStage st =
            run_exponent_stage(ts, synthetic_curve(ts, q, p), p, q, q == 2.0 ? p / 2 : 0.0);
        CHECK(st.q_hat == doctest::Approx(q).epsilon(0.02));
        CHECK(st.fired);
    }
    // the true q = 2 curve is not refuted at this stage
    const ExponentStage st2 =
        run_exponent_stage(ts, synthetic_curve(ts, 2.0, p), p, 2.0, p / 2.0);
    CHECK(st2.q_hat == doctest::Approx(2.0).epsilon(0.025));
    CHECK_FALSE(st2.fired);
    // a q = 2 curve claimed as something else is flagged as q = 2 consistent
    const ExponentStage st3 =
        run_exponent_stage(ts, synthetic_curve(ts, 2.0, p), p, 2.5, p / 2.0);
    CHECK(st3.q2_consistent);
    CHECK(st3.fired);
}

TEST_CASE("exponent stage tolerates a2 from the curve itself") {
    // 1 + (p/q)|t|^q + a2 t^2 shape with a nonzero analytic t^2 part
    const std::vector<double> ts = log_ts(1e-3, 1e-1, 40);
    const double p = 3.0, a2 = 0.8;
    for (const double q : {1.5, 2.5, 3.0}) {
        std::vector<double> fs;
        for (double t : ts)
            fs.push_back((p / q) * std::pow(std::abs(t), q) + a2 * t * t);
        const ExponentStage st = run_exponent_stage(ts, fs, p, q, a2);
        CHECK(st.q_hat == doctest::Approx(q).epsilon(0.02));
        CHECK(st.a2_data == doctest::Approx(a2).epsilon(0.05));
    }
    // at q = 2 the singular term merges into the quadratic one
    std::vector<double> fs;
    for (double t : ts) fs.push_back((p / 2.0) * t * t + a2 * t * t);
    const ExponentStage st = run_exponent_stage(ts, fs, p, 2.0, p / 2.0 + a2);
    CHECK(st.q_hat == doctest::Approx(2.0).epsilon(0.01));
    CHECK_FALSE(st.fired);
}

TEST_CASE("kernel-loaded pencil ties the order-one branch to ladder divergence") {
    // the perturbation that gives a vanishing order m = 1 branch is exactly
    // the one whose p < 2 regularized ladder diverges, which refutes any
    // claim built on the pair
    const HermitianMatrix a = HermitianMatrix::from_diagonal({1.0, 0.0});
    ComplexMatrix bm(2, 2);
    bm(1, 1) = 0.7;
    bm(0, 1) = 0.1;
    bm(1, 0) = 0.1;
    const HermitianMatrix b{bm};
    const BranchFamily fam = track_branches(a, b, 0.5, 128);
    bool has_order_one = false;
    for (const VanishingOrder& v : fam.vanishing_orders)
        if (v.status == VanishingOrder::Status::Ok && v.m == 1) has_order_one = true;
    CHECK(has_order_one);
    CHECK(second_derivative_regularized(a, b, 1.5).diverged);
}

TEST_CASE("refute verifies the rank-one control across the p sweep") {
    for (const PNorm& p : {PNorm::one(), PNorm::finite(1.3), PNorm::finite(2.0),
                           PNorm::finite(3.0), PNorm::finite(4.0), PNorm::infinity()}) {
        const EmbeddingClaim c = construct_rank_one_control(p);
        const RefutationReport rep = refute(c);
        INFO("p = ", p.str());
        CHECK(rep.conclusion == RefutationReport::Conclusion::VerifiedNumerically);
    }
}

TEST_CASE("refute rejects the disjoint pair at the grid stage") {
    const EmbeddingClaim bad = EmbeddingClaim::make(
        HermitianMatrix::from_diagonal({1.0, 0.0}).mat(),
        HermitianMatrix::from_diagonal({0.0, 1.0}).mat(), 3.0, PNorm::finite(4.0), true);
    const RefutationReport rep = refute(bad);
    CHECK(rep.conclusion == RefutationReport::Conclusion::RefutedAt);
    CHECK(rep.refuted_stage == "iqp_grid");
}

TEST_CASE("open boundary cells never emit a theorem-stage verdict") {
    // no known pair realizes the q = 3 curve at p in {1, inf}, so claims in
    // those cells either fail the grid or land in the out-of-scope bucket;
    // they must never come back refuted by an obstruction stage
    auto rng = make_rng(77);
    const std::vector<PNorm> ps{PNorm::one(), PNorm::infinity()};
    for (const PNorm& p : ps) {
        for (int trial = 0; trial < 25; ++trial) {
            const HermitianMatrix a = random_hermitian(3, rng);
            const HermitianMatrix b = random_hermitian(3, rng);
            const EmbeddingClaim claim = EmbeddingClaim::make(a.mat(), b.mat(), 3.0, p, true);
            const RefutationReport rep = refute(claim);
            const bool acceptable =
                (rep.conclusion == RefutationReport::Conclusion::RefutedAt &&
                 rep.refuted_stage == "iqp_grid") ||
                rep.conclusion == RefutationReport::Conclusion::OutOfTheoremScope;
            CHECK(acceptable);
        }
    }
}

TEST_CASE("sup-norm kernel test on the reduced control records a nonzero image") {
    // the q = 2 pair moves its extremal eigenvectors, which is fine for
    // q = 2 but rules out any claimed q > 2
    const EmbeddingClaim c = construct_rank_one_control(PNorm::infinity());
    const KernelTestResult kt = sup_norm_kernel_test(c.a(), c.b());
    CHECK_FALSE(kt.obstruction_met);
    CHECK(kt.max_bx > 0.1);
}

TEST_CASE("refute fires the endpoint detectors") {
    // p = inf, q > 2: the control pair moves its extremal eigenvector, so the
    // kernel test fires against any claimed q > 2
    ComplexMatrix a0(2, 2), b0(2, 2);
    a0(0, 0) = 1.0;
    b0(0, 1) = 1.0;
    const EmbeddingClaim cinf = EmbeddingClaim::make(a0, b0, 2.0, PNorm::infinity(), false);
    // same matrices, compatible curve, but claimed q = 4 fails the grid first
    const EmbeddingClaim cq4 =
        EmbeddingClaim::make(a0, b0, 4.0, PNorm::infinity(), false);
    const RefutationReport rq4 = refute(cq4);
    CHECK(rq4.conclusion == RefutationReport::Conclusion::RefutedAt);
    CHECK(rq4.refuted_stage == "iqp_grid");
    // and the q = 2 claim is verified
    CHECK(refute(cinf).conclusion == RefutationReport::Conclusion::VerifiedNumerically);
}

TEST_CASE("a q = 2 pair claimed at q slightly off 2 is caught past the grid") {
    // claimed q within the grid tolerance of 2 but not equal to it: the grid
    // passes and the later stages must object
    ComplexMatrix a0(2, 2), b0(2, 2);
    a0(0, 0) = 1.0;
    b0(0, 1) = 1.0;

    // finite p: the exponent stage reports the pair as a q = 2 pencil
    const EmbeddingClaim cfin =
        EmbeddingClaim::make(a0, b0, 2.0 + 5e-8, PNorm::finite(3.0), false);
    const RefutationReport rfin = refute(cfin);
    CHECK(rfin.iqp.pass);
    CHECK(rfin.conclusion == RefutationReport::Conclusion::ConsistentOnlyIfQEq2);

    // p = inf with claimed q just above 2: the kernel test fires because the
    // pair moves its extremal eigenvectors
    const EmbeddingClaim cinf =
        EmbeddingClaim::make(a0, b0, 2.0 + 5e-8, PNorm::infinity(), false);
    const RefutationReport rinf = refute(cinf);
    CHECK(rinf.iqp.pass);
    CHECK(rinf.conclusion == RefutationReport::Conclusion::RefutedAt);
    CHECK(rinf.refuted_stage == "sup_kernel_test");
}

TEST_CASE("soundness fuzz: no non-2 claim in the theorem region verifies") {
    auto rng = make_rng(75);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const std::vector<std::pair<double, PNorm>> cells{
        {1.5, PNorm::finite(2.5)}, {2.5, PNorm::finite(1.5)}, {3.0, PNorm::finite(4.0)},
        {4.7, PNorm::finite(2.0)}, {1.7, PNorm::infinity()},  {2.5, PNorm::infinity()},
        {4.0, PNorm::one()},       {1.5, PNorm::one()},       {kInf, PNorm::finite(3.0)}};
    int refuted = 0, total = 0;
    for (const auto& [q, p] : cells) {
        for (int trial = 0; trial < 1000; ++trial) {
            const HermitianMatrix a = random_hermitian(3, rng);
            const HermitianMatrix b = random_hermitian(3, rng);
            EmbeddingClaim claim = EmbeddingClaim::make(a.mat(), b.mat(), q, p, true);
            ++total;
            if (trial < 5) {
                // exercise the full pipeline on a subsample
                const RefutationReport rep = refute(claim);
                if (!rep.verified() &&
                    rep.conclusion != RefutationReport::Conclusion::OutOfTheoremScope)
                    ++refuted;
            } else {
                const IqpResidual r = verify_iqp(claim, 513, 4.0, /*early_stop=*/1e-6);
                if (!r.pass) ++refuted;
            }
        }
    }
    // every random claim must fail; almost all die on the grid
    CHECK(refuted == total);
}

TEST_CASE("report serialization carries the stage record") {
    const EmbeddingClaim c = construct_rank_one_control(PNorm::finite(3.0));
    const RefutationReport rep = refute(c);
    const nlohmann::json j = refutation_report_to_json(rep);
    CHECK(j.at("conclusion") == "verified_numerically");
    CHECK(j.contains("iqp"));
    CHECK(j.contains("bj"));
    CHECK(j.contains("exponent_fit"));
    CHECK(j.at("iqp").at("tolerance").get<double>() == 1e-7);
}
