#pragma once

#include <span>
#include <vector>

namespace snp {

// The scalar functions whose divided differences drive the trace formulas:
//   abs_pow(p):       x -> |x|^p,                p > 1
//   abs_pow_sign(p):  x -> |x|^{p-1} sgn(x),     p > 1
//   fq(q):            t -> (1 + |t|^q)^{1/q},    q > 1
struct FunctionSpec {
    enum class Kind { AbsPow, AbsPowSign, Fq };

    Kind kind;
    double exponent;

    static FunctionSpec abs_pow(double p);
    static FunctionSpec abs_pow_sign(double p);
    static FunctionSpec fq(double q);

    double value(double x) const;
    // k-th derivative; throws std::domain_error where the derivative does not
    // exist (e.g. |x|^p at x = 0 with k >= p and p not an even integer).
    double derivative(int k, double x) const;
};

using NodeList = std::vector<double>;

// Coefficients (ascending powers) of the polynomial factor appearing in the
// closed form of the n-th derivative of fq.
struct GnPolynomial {
    int order;
    std::vector<double> coefficients;

    double eval(double t) const;
};

// g_1 = 1, g_{n+1}(t) = (q-n)(1+t)g_n(t) + t(1-nq)g_n(t) + qt(1+t)g_n'(t).
GnPolynomial gn_polynomial(double q, int n);

// n-th derivative of (1+|t|^q)^{1/q} via the closed form; requires q > 1
// noninteger and t != 0.
double fq_derivative(double q, int n, double t);

// Confluent divided difference of order nodes.size()-1. Repeated (or nearly
// coincident) nodes take the Hermiteic branch using exact derivatives.
double divided_difference(const FunctionSpec& f, std::span<const double> nodes);

// f_p^{[2]}(d_l, d_k, d_k) + f_p^{[2]}(d_k, d_l, d_l) for f_p = |x|^p, in the
// cancellation-free closed form; coincident nodes give p(p-1)|d|^{p-2}.
double sym_second_dd(double p, double d_l, double d_k);

}  // namespace snp
