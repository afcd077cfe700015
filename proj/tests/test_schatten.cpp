#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "snp/schatten.hpp"
#include "test_util.hpp"

using namespace snp;
using snp::testing::make_rng;
using snp::testing::random_complex;
using snp::testing::random_hermitian;
using snp::testing::random_hermitian_invertible;
using snp::testing::random_unitary;

TEST_CASE("norm anchors") {
    const HermitianMatrix d = HermitianMatrix::from_diagonal({3.0, -4.0});
    CHECK(schatten_norm(d, PNorm::one()) == doctest::Approx(7.0));
    CHECK(schatten_norm(d, PNorm::infinity()) == doctest::Approx(4.0));

    ComplexMatrix row(2, 2);
    row(0, 0) = Complex(1.0, 2.0);
    row(0, 1) = Complex(-0.5, 0.3);
    const double frob = frobenius_norm(row);
    for (const double p : {1.0, 1.7, 3.0}) {
        CHECK(schatten_norm(row, PNorm::finite(p)) == doctest::Approx(frob).epsilon(1e-12));
    }
    CHECK(schatten_norm(row, PNorm::infinity()) == doctest::Approx(frob).epsilon(1e-12));

    auto rng = make_rng(41);
    const ComplexMatrix m = random_complex(5, 5, rng);
    CHECK(schatten_norm(m, PNorm::finite(2.0)) ==
          doctest::Approx(frobenius_norm(m)).epsilon(1e-11));
}

TEST_CASE("unitary invariance of the norm") {
    auto rng = make_rng(42);
    const ComplexMatrix m = random_complex(4, 4, rng);
    const ComplexMatrix u = random_unitary(4, rng);
    const ComplexMatrix v = random_unitary(4, rng);
    for (const double p : {1.0, 1.7, 2.0, 3.3}) {
        CHECK(schatten_norm(u * m * v, PNorm::finite(p)) ==
              doctest::Approx(schatten_norm(m, PNorm::finite(p))).epsilon(1e-10));
    }
}

TEST_CASE("off-diagonal doubling identity") {
    auto rng = make_rng(43);
    const ComplexMatrix x = random_complex(3, 3, rng);
    ComplexMatrix big(6, 6);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            big(i, 3 + j) = x(i, j);
            big(3 + i, j) = std::conj(x(j, i));
        }
    for (const double p : {1.0, 1.7, 2.0, 3.3}) {
        const double lhs = std::pow(schatten_norm(big, PNorm::finite(p)), p);
        const double rhs = 2.0 * std::pow(schatten_norm(x, PNorm::finite(p)), p);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
    CHECK(schatten_norm(big, PNorm::infinity()) ==
          doctest::Approx(schatten_norm(x, PNorm::infinity())).epsilon(1e-10));
}

TEST_CASE("first derivative anchors") {
    const HermitianMatrix a = HermitianMatrix::from_diagonal({2.0, -1.0});
    const HermitianMatrix eye{ComplexMatrix::identity(2)};
    const DerivativeReport r = first_derivative(a, eye, 3.0);
    CHECK(r.value == doctest::Approx(9.0).epsilon(1e-12));  // 12 - 3
    CHECK(r.residual_vs_fd < 1e-7);

    // B with zero diagonal in A's eigenbasis
    const HermitianMatrix a2 = HermitianMatrix::from_diagonal({1.0, 0.0});
    ComplexMatrix bm(2, 2);
    bm(0, 1) = 1.0;
    bm(1, 0) = 1.0;
    CHECK(first_derivative(a2, HermitianMatrix{bm}, 2.5).value ==
          doctest::Approx(0.0).epsilon(1e-12));

    // B = A with unit norm gives p
    auto rng = make_rng(44);
    for (const double p : {1.5, 3.2}) {
        HermitianMatrix a3 = random_hermitian_invertible(4, 0.2, 1.0, rng);
        a3 = (1.0 / schatten_norm(a3, PNorm::finite(p))) * a3;
        CHECK(first_derivative(a3, a3, p).value == doctest::Approx(p).epsilon(1e-10));
    }
}

TEST_CASE("second derivative anchors") {
    auto rng = make_rng(45);
    // p = 2: twice the squared Frobenius norm of B
    const HermitianMatrix a = random_hermitian(4, rng);
    const HermitianMatrix b = random_hermitian(4, rng);
    const double f2 = frobenius_norm(b.mat());
    CHECK(second_derivative(a, b, 2.0).value == doctest::Approx(2.0 * f2 * f2).epsilon(1e-10));

    // the quartic pencil anchor: 8 a^2 b^2 with a = b = 2^{-1/4}
    const double c = std::pow(2.0, -0.25);
    const HermitianMatrix a2 = HermitianMatrix::from_diagonal({c, -c});
    ComplexMatrix bm(2, 2);
    bm(0, 1) = c;
    bm(1, 0) = c;
    const DerivativeReport r = second_derivative(a2, HermitianMatrix{bm}, 4.0);
    CHECK(std::abs(r.value - 4.0) < 1e-8);

    // disjoint supports, p > 2
    const HermitianMatrix a3 = HermitianMatrix::from_diagonal({1.0, 0.0});
    const HermitianMatrix b3 = HermitianMatrix::from_diagonal({0.0, 1.0});
    CHECK(second_derivative(a3, b3, 3.0).value == doctest::Approx(0.0));

    // p < 2 with singular A is rejected
    CHECK_THROWS_AS(second_derivative(a3, b3, 1.5), std::domain_error);
}

TEST_CASE("derivative reports agree with finite differences on random pairs") {
    auto rng = make_rng(46);
    for (const double p : {1.5, 2.0, 3.0, 4.7}) {
        for (int trial = 0; trial < 5; ++trial) {
            const HermitianMatrix a = random_hermitian_invertible(5, 0.1, 1.0, rng);
            HermitianMatrix b = random_hermitian(5, rng);
            b = (1.0 / operator_norm_inf(b)) * b;
            CHECK(first_derivative(a, b, p).residual_vs_fd <= 1e-7);
            CHECK(second_derivative(a, b, p).residual_vs_fd <= 1e-5);
        }
    }
}

TEST_CASE("third derivative matches finite differences") {
    auto rng = make_rng(47);
    const double p = 4.5;
    const HermitianMatrix a = random_hermitian_invertible(4, 0.3, 1.0, rng);
    HermitianMatrix b = random_hermitian(4, rng);
    b = (1.0 / operator_norm_inf(b)) * b;
    const DerivativeReport r3 = rth_derivative(a, b, p, 3);
    CHECK(std::abs(r3.value - r3.fd_value) <= 1e-4 * (1.0 + std::abs(r3.value)));

    // r = 2 agrees with the dedicated second-derivative path
    const DerivativeReport r2 = rth_derivative(a, b, 3.5, 2);
    CHECK(r2.value == doctest::Approx(second_derivative(a, b, 3.5).value).epsilon(1e-9));

    // B = 0
    const HermitianMatrix z{ComplexMatrix(4, 4)};
    CHECK(rth_derivative(a, z, p, 3).value == doctest::Approx(0.0));

    // r >= p is rejected
    CHECK_THROWS_AS(rth_derivative(a, b, 2.5, 3), std::domain_error);
}

TEST_CASE("derivative homogeneity in A and B scales") {
    auto rng = make_rng(48);
    const HermitianMatrix a = random_hermitian_invertible(4, 0.2, 1.0, rng);
    const HermitianMatrix b = random_hermitian(4, rng);
    const double c = 1.7, s = 0.6, p = 3.3;
    const HermitianMatrix ca = c * a;
    const HermitianMatrix sb = s * b;
    CHECK(first_derivative(ca, sb, p).value ==
          doctest::Approx(std::pow(c, p - 1.0) * s * first_derivative(a, b, p).value)
              .epsilon(1e-9));
    CHECK(second_derivative(ca, sb, p).value ==
          doctest::Approx(std::pow(c, p - 2.0) * s * s * second_derivative(a, b, p).value)
              .epsilon(1e-9));

    // extreme scales go through the radius-2 rescaling path
    const HermitianMatrix ha = 1e6 * a;
    const HermitianMatrix hb = 1e-6 * b;
    CHECK(second_derivative(ha, hb, p).value ==
          doctest::Approx(std::pow(1e6, p - 2.0) * 1e-12 * second_derivative(a, b, p).value)
              .epsilon(1e-9));
}

TEST_CASE("bj orthogonality anchors") {
    // disjoint supports: trace 0, min at z = 0
    const HermitianMatrix a = HermitianMatrix::from_diagonal({1.0, 0.0});
    const HermitianMatrix b = HermitianMatrix::from_diagonal({0.0, 1.0});
    const BjResult r1 = bj_orthogonal(a, b, 3.0);
    CHECK(std::abs(r1.trace_value) < 1e-14);
    CHECK(r1.verdict);
    CHECK(r1.probe.attained_at_zero);

    // B = A with unit norm: trace 1
    const double c = std::pow(2.0, -1.0 / 3.0);
    const HermitianMatrix a2 = HermitianMatrix::from_diagonal({c, -c});
    const BjResult r2 = bj_orthogonal(a2, a2, 3.0);
    CHECK(r2.trace_value == doctest::Approx(1.0).epsilon(1e-10));
    CHECK_FALSE(r2.verdict);
    CHECK_FALSE(r2.probe.attained_at_zero);

    // zero diagonal of B in A's eigenbasis
    const double cp = std::pow(2.0, -1.0 / 2.5);
    const HermitianMatrix a3 = HermitianMatrix::from_diagonal({cp, -cp});
    ComplexMatrix bm(2, 2);
    bm(0, 1) = cp;
    bm(1, 0) = cp;
    const BjResult r3 = bj_orthogonal(a3, HermitianMatrix{bm}, 2.5);
    CHECK(std::abs(r3.trace_value) < 1e-14);
    CHECK(r3.verdict);
    CHECK(r3.probe.attained_at_zero);
}

TEST_CASE("bj trace criterion matches the grid probe on random pairs") {
    auto rng = make_rng(49);
    int checked = 0;
    for (const double p : {1.5, 3.0}) {
        for (int trial = 0; trial < 60; ++trial) {
            const HermitianMatrix a = random_hermitian_invertible(4, 0.2, 1.0, rng);
            const HermitianMatrix b = random_hermitian(4, rng);
            const BjResult r = bj_orthogonal(a, b, p);
            CHECK(r.verdict == r.probe.attained_at_zero);
            ++checked;
        }
    }
    CHECK(checked == 120);
}

TEST_CASE("taylor remainder decays at the expected rate") {
    auto rng = make_rng(50);
    // random normalized pair at p = 2.5
    HermitianMatrix a = random_hermitian_invertible(4, 0.3, 1.0, rng);
    a = (1.0 / schatten_norm(a, PNorm::finite(2.5))) * a;
    HermitianMatrix b = random_hermitian(4, rng);
    b = (1.0 / operator_norm_inf(b)) * b;
    const TaylorCheck t1 = taylor_check(a, b, 2.5);
    CHECK(t1.terms == 2);
    CHECK(t1.fitted_exponent >= 2.4);

    // B = 0: residual identically zero
    const HermitianMatrix z{ComplexMatrix(4, 4)};
    const TaylorCheck t2 = taylor_check(a, z, 2.5);
    CHECK(std::isinf(t2.fitted_exponent));
    for (double r : t2.residuals) CHECK(r <= 1e-12);

    // commuting diagonal pair with a kernel direction: scalar remainder,
    // exponent tracks p
    const double p = 3.5;
    HermitianMatrix ad = HermitianMatrix::from_diagonal({0.9, -0.7, 0.0});
    ad = (1.0 / schatten_norm(ad, PNorm::finite(p))) * ad;
    const HermitianMatrix bd = HermitianMatrix::from_diagonal({0.1, 0.2, 0.8});
    const TaylorCheck t3 = taylor_check(ad, bd, p);
    CHECK(t3.terms == 3);
    CHECK(t3.fitted_exponent == doctest::Approx(p).epsilon(0.05));
    // oracle: scalar closed form sum |a_i + t b_i|^p at one ladder point
    const double t = 1.0 / 32.0;
    double scalar = 0.0;
    for (int i = 0; i < 3; ++i)
        scalar += std::pow(std::abs(ad(i, i).real() + t * bd(i, i).real()), p);
    CHECK(schatten_pow(pencil_at(ad, bd, t), p) == doctest::Approx(scalar).epsilon(1e-12));

    // hypothesis ||A||_p <= 1 is enforced
    CHECK_THROWS_AS(taylor_check(HermitianMatrix::from_diagonal({2.0, 0.0, 0.0}), bd, p),
                    std::domain_error);
}
