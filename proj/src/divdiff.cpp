#include "snp/divdiff.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace snp {

namespace {

constexpr int kMaxGnOrder = 12;

bool is_integer(double x, double tol = 1e-9) { return std::abs(x - std::round(x)) <= tol; }

double factorial(int n) {
    double r = 1.0;
    for (int k = 2; k <= n; ++k) r *= k;
    return r;
}

// k-th derivative of |x|^p. For x != 0 this is
// p(p-1)...(p-k+1) |x|^{p-k} sgn(x)^k.
double abs_pow_derivative(double p, int k, double x) {
    if (k == 0) return std::pow(std::abs(x), p);
    if (x != 0.0) {
        double coef = 1.0;
        for (int j = 0; j < k; ++j) coef *= (p - j);
        double r = coef * std::pow(std::abs(x), p - k);
        if (x < 0.0 && (k % 2 == 1)) r = -r;
        return r;
    }
    // At the origin |x|^p is a polynomial when p is an even integer and is
    // k-times differentiable (with zero derivative) when k < p.
    if (is_integer(p) && (static_cast<long>(std::llround(p)) % 2 == 0)) {
        const int pi = static_cast<int>(std::llround(p));
        return (k == pi) ? factorial(pi) : 0.0;
    }
    if (static_cast<double>(k) < p) return 0.0;
    std::ostringstream os;
    os << "|x|^p with p = " << p << " is not " << k << "-times differentiable at 0";
    throw std::domain_error(os.str());
}

// Shared closed form for d^n/dt^n (1+|t|^q)^{1/q}; t = 0 only for integer q
// with n <= q.
double fq_derivative_any(double q, int n, double t) {
    if (n == 0) return std::pow(1.0 + std::pow(std::abs(t), q), 1.0 / q);
    if (t == 0.0) {
        if (!is_integer(q))
            throw std::domain_error("derivative of (1+|t|^q)^{1/q} does not exist at t = 0 "
                                    "for noninteger q");
        const int qi = static_cast<int>(std::llround(q));
        if (n < qi) return 0.0;
        if (n == qi) return gn_polynomial(q, n).eval(0.0);
        throw std::domain_error("derivative of (1+|t|^q)^{1/q} at t = 0 beyond order q "
                                "is unavailable");
    }
    const double a = std::abs(t);
    const double aq = std::pow(a, q);
    const GnPolynomial g = gn_polynomial(q, n);
    double r = std::pow(a, q - n) * std::pow(1.0 + aq, 1.0 / q - n) * g.eval(aq);
    if (t < 0.0 && (n % 2 == 1)) r = -r;
    return r;
}

}  // namespace

FunctionSpec FunctionSpec::abs_pow(double p) {
    if (p <= 1.0) throw std::invalid_argument("abs_pow requires p > 1");
    return FunctionSpec{Kind::AbsPow, p};
}

FunctionSpec FunctionSpec::abs_pow_sign(double p) {
    if (p <= 1.0) throw std::invalid_argument("abs_pow_sign requires p > 1");
    return FunctionSpec{Kind::AbsPowSign, p};
}

FunctionSpec FunctionSpec::fq(double q) {
    if (q <= 1.0) throw std::invalid_argument("fq requires q > 1");
    return FunctionSpec{Kind::Fq, q};
}

double FunctionSpec::value(double x) const { return derivative(0, x); }

double FunctionSpec::derivative(int k, double x) const {
    if (k < 0) throw std::invalid_argument("derivative order must be >= 0");
    switch (kind) {
        case Kind::AbsPow:
            return abs_pow_derivative(exponent, k, x);
        case Kind::AbsPowSign:
            // |x|^{p-1} sgn(x) = (d/dx |x|^p) / p
            return abs_pow_derivative(exponent, k + 1, x) / exponent;
        case Kind::Fq:
            return fq_derivative_any(exponent, k, x);
    }
    throw std::logic_error("unreachable");
}

double GnPolynomial::eval(double t) const {
    double r = 0.0;
    for (size_t i = coefficients.size(); i-- > 0;) r = r * t + coefficients[i];
    return r;
}

GnPolynomial gn_polynomial(double q, int n) {
    if (n < 1) throw std::invalid_argument("gn_polynomial requires n >= 1");
    if (n > kMaxGnOrder) throw std::invalid_argument("gn_polynomial order capped at 12");
    std::vector<double> g{1.0};
    for (int m = 1; m < n; ++m) {
        // g_{m+1} = (q-m)(1+t) g_m + t(1-mq) g_m + q t(1+t) g_m'
        const size_t deg = g.size() - 1;
        std::vector<double> next(deg + 2, 0.0);
        for (size_t i = 0; i <= deg; ++i) {
            const double c = g[i];
            next[i] += (q - m) * c;            // (q-m) g_m
            next[i + 1] += (q - m) * c;        // (q-m) t g_m
            next[i + 1] += (1.0 - m * q) * c;  // t(1-mq) g_m
            if (i >= 1) {
                const double dc = static_cast<double>(i) * g[i];
                next[i] += q * dc;      // q t g_m'
                next[i + 1] += q * dc;  // q t^2 g_m'
            }
        }
        g = std::move(next);
    }
    return GnPolynomial{n, std::move(g)};
}

double fq_derivative(double q, int n, double t) {
    if (q <= 1.0) throw std::invalid_argument("fq_derivative requires q > 1");
    if (is_integer(q)) throw std::invalid_argument("fq_derivative requires noninteger q");
    if (n < 1) throw std::invalid_argument("fq_derivative requires n >= 1");
    if (n > kMaxGnOrder) throw std::invalid_argument("fq_derivative order capped at 12");
    if (t == 0.0)
        throw std::domain_error("fq_derivative: derivative does not exist at t = 0 for "
                                "noninteger q");
    return fq_derivative_any(q, n, t);
}

double divided_difference(const FunctionSpec& f, std::span<const double> nodes) {
    if (nodes.empty()) throw std::invalid_argument("divided_difference: empty node list");
    for (double x : nodes)
        if (!std::isfinite(x))
            throw std::invalid_argument("divided_difference: nodes must be finite");

    std::vector<double> z(nodes.begin(), nodes.end());
    std::sort(z.begin(), z.end());
    double scale = 0.0;
    for (double x : z) scale = std::max(scale, std::abs(x));
    const double merge_tol = 1e-7 * scale;

    // Nearly coincident nodes are merged onto their cluster mean and handled
    // by the confluent branch; the first-order recursion loses all digits
    // below this gap.
    std::vector<double> zc;
    zc.reserve(z.size());
    size_t i = 0;
    while (i < z.size()) {
        size_t j = i + 1;
        double sum = z[i];
        while (j < z.size() && z[j] - z[j - 1] <= merge_tol) {
            sum += z[j];
            ++j;
        }
        const double rep = sum / static_cast<double>(j - i);
        for (size_t k = i; k < j; ++k) zc.push_back(rep);
        i = j;
    }

    const size_t r = zc.size() - 1;
    std::vector<double> col(zc.size());
    for (size_t k = 0; k <= r; ++k) col[k] = f.value(zc[k]);
    for (size_t order = 1; order <= r; ++order) {
        for (size_t k = 0; k + order <= r; ++k) {
            if (zc[k + order] == zc[k]) {
                col[k] = f.derivative(static_cast<int>(order), zc[k]) /
                         factorial(static_cast<int>(order));
            } else {
                col[k] = (col[k + 1] - col[k]) / (zc[k + order] - zc[k]);
            }
        }
    }
    return col[0];
}

double sym_second_dd(double p, double d_l, double d_k) {
    if (p <= 1.0) throw std::invalid_argument("sym_second_dd requires p > 1");
    if (p < 2.0 && (d_l == 0.0 || d_k == 0.0))
        throw std::domain_error("sym_second_dd: p < 2 requires both nodes nonzero "
                                "(second-derivative weight diverges on the kernel)");
    if (p == 2.0) return 2.0;

    const double scale = std::max(std::abs(d_l), std::abs(d_k));
    if (scale == 0.0) return 0.0;  // p > 2, both nodes zero

    // Same-sign nearly coincident nodes cancel catastrophically in the closed
    // form; expand about the midpoint instead (integral mean of f'' over the
    // segment, accurate to O(gap^4)).
    if (d_l * d_k > 0.0 && std::abs(d_l - d_k) < 1e-6 * scale) {
        const double m = 0.5 * (d_l + d_k);
        const double g = d_l - d_k;
        const double base = p * (p - 1.0) * std::pow(std::abs(m), p - 2.0);
        const double corr = (p - 2.0) * (p - 3.0) * g * g / (24.0 * m * m);
        return base * (1.0 + corr);
    }

    const double al = std::abs(d_l), ak = std::abs(d_k);
    const double num = std::pow(al, p) + std::pow(ak, p) -
                       d_l * d_k * (std::pow(al, p - 2.0) + std::pow(ak, p - 2.0));
    const double den = (d_l - d_k) * (d_l - d_k);
    return p * num / den;
}

}  // namespace snp
