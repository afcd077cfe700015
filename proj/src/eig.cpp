#include "snp/eig.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace snp {

namespace {

// Unitary 2x2 that diagonalizes the Hermitian block [[a, g], [conj(g), b]]
// with a, b real. The rotation is J = [[c, s], [-s*e^{-i phi}, c*e^{-i phi}]]
// where g = |g| e^{i phi}.
struct Rotation2 {
    double c;
    double s;
    Complex phase;  // e^{-i phi}
};

Rotation2 hermitian_rotation(double a, double b, Complex g) {
    const double ag = std::abs(g);
    Rotation2 rot{1.0, 0.0, Complex(1.0, 0.0)};
    if (ag == 0.0) return rot;
    rot.phase = std::conj(g) / ag;
    const double tau = (b - a) / (2.0 * ag);
    double t;
    if (tau >= 0.0)
        t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
    else
        t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
    rot.c = 1.0 / std::sqrt(1.0 + t * t);
    rot.s = t * rot.c;
    return rot;
}

double offdiag_frobenius(const ComplexMatrix& w) {
    double s = 0.0;
    for (int i = 0; i < w.rows(); ++i)
        for (int j = i + 1; j < w.cols(); ++j) s += std::norm(w(i, j));
    return std::sqrt(2.0 * s);
}

void sort_descending(std::vector<double>& vals, ComplexMatrix& vecs) {
    const int n = static_cast<int>(vals.size());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return vals[a] > vals[b]; });
    std::vector<double> sv(n);
    ComplexMatrix su(vecs.rows(), n);
    for (int k = 0; k < n; ++k) {
        sv[k] = vals[order[k]];
        for (int i = 0; i < vecs.rows(); ++i) su(i, k) = vecs(i, order[k]);
    }
    vals = std::move(sv);
    vecs = std::move(su);
}

}  // namespace

ComplexMatrix SpectralDecomposition::reconstruct() const {
    const int n = dim();
    ComplexMatrix scaled(n, n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) scaled(i, k) = eigenvectors(i, k) * eigenvalues[k];
    return scaled * adjoint(eigenvectors);
}

SpectralDecomposition hermitian_eig(const HermitianMatrix& m) {
    const int n = m.dim();
    ComplexMatrix w = m.mat();
    ComplexMatrix u = ComplexMatrix::identity(n);
    const double threshold = 1e-13 * std::max(frobenius_norm(w), 1e-300);
    const int max_sweeps = 100;

    int sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        if (offdiag_frobenius(w) <= threshold) break;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const Complex g = w(p, q);
                if (std::abs(g) == 0.0) continue;
                const Rotation2 r =
                    hermitian_rotation(w(p, p).real(), w(q, q).real(), g);
                const Complex jpp = r.c;
                const Complex jpq = r.s;
                const Complex jqp = -r.s * r.phase;
                const Complex jqq = r.c * r.phase;
                // columns: W <- W J, U <- U J
                for (int i = 0; i < n; ++i) {
                    const Complex wp = w(i, p), wq = w(i, q);
                    w(i, p) = wp * jpp + wq * jqp;
                    w(i, q) = wp * jpq + wq * jqq;
                    const Complex up = u(i, p), uq = u(i, q);
                    u(i, p) = up * jpp + uq * jqp;
                    u(i, q) = up * jpq + uq * jqq;
                }
                // rows: W <- J* W
                for (int j = 0; j < n; ++j) {
                    const Complex wp = w(p, j), wq = w(q, j);
                    w(p, j) = std::conj(jpp) * wp + std::conj(jqp) * wq;
                    w(q, j) = std::conj(jpq) * wp + std::conj(jqq) * wq;
                }
                w(p, q) = 0.0;
                w(q, p) = 0.0;
                w(p, p) = w(p, p).real();
                w(q, q) = w(q, q).real();
            }
        }
    }
    if (sweep == max_sweeps && offdiag_frobenius(w) > threshold) {
        std::ostringstream os;
        os << "hermitian_eig: Jacobi iteration cap reached, off-diagonal residual "
           << offdiag_frobenius(w) << " exceeds threshold " << threshold;
        throw std::runtime_error(os.str());
    }

    SpectralDecomposition s;
    s.eigenvalues.resize(n);
    for (int i = 0; i < n; ++i) s.eigenvalues[i] = w(i, i).real();
    s.eigenvectors = std::move(u);
    sort_descending(s.eigenvalues, s.eigenvectors);
    return s;
}

namespace {

double column_norm_sq(const ComplexMatrix& w, int j) {
    double s = 0.0;
    for (int i = 0; i < w.rows(); ++i) s += std::norm(w(i, j));
    return s;
}

// Fills column `col` of u with a unit vector orthogonal to columns [0, col).
void gram_schmidt_fill(ComplexMatrix& u, int col) {
    const int m = u.rows();
    for (int candidate = 0; candidate < m; ++candidate) {
        std::vector<Complex> v(m, 0.0);
        v[candidate] = 1.0;
        for (int pass = 0; pass < 2; ++pass) {
            for (int k = 0; k < col; ++k) {
                Complex proj = 0.0;
                for (int i = 0; i < m; ++i) proj += std::conj(u(i, k)) * v[i];
                for (int i = 0; i < m; ++i) v[i] -= proj * u(i, k);
            }
        }
        double nrm = 0.0;
        for (const Complex& z : v) nrm += std::norm(z);
        nrm = std::sqrt(nrm);
        if (nrm > 0.3) {
            for (int i = 0; i < m; ++i) u(i, col) = v[i] / nrm;
            return;
        }
    }
    throw std::runtime_error("svd: failed to complete unitary basis");
}

}  // namespace

SvdResult svd(const ComplexMatrix& m) {
    if (!m.all_finite()) throw std::invalid_argument("svd: entries must be finite");
    if (m.rows() < m.cols()) {
        SvdResult r = svd(adjoint(m));
        return SvdResult{std::move(r.singular_values), std::move(r.v), std::move(r.u)};
    }
    const int rows = m.rows(), cols = m.cols();
    ComplexMatrix w = m;
    ComplexMatrix v = ComplexMatrix::identity(cols);
    const int max_sweeps = 60;
    // columns annihilated by earlier rotations sit at rounding level; pairs
    // touching them would churn forever on noise
    const double dead_col_sq = std::pow(1e-15 * std::max(frobenius_norm(m), 1e-300), 2);

    int sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        double worst = 0.0;
        for (int i = 0; i < cols - 1; ++i) {
            for (int j = i + 1; j < cols; ++j) {
                const double a = column_norm_sq(w, i);
                const double b = column_norm_sq(w, j);
                if (a <= dead_col_sq || b <= dead_col_sq) continue;
                Complex g = 0.0;
                for (int k = 0; k < rows; ++k) g += std::conj(w(k, i)) * w(k, j);
                const double rel = std::abs(g) / std::sqrt(a * b);
                worst = std::max(worst, rel);
                if (rel <= 1e-15) continue;
                const Rotation2 r = hermitian_rotation(a, b, g);
                const Complex jii = r.c;
                const Complex jij = r.s;
                const Complex jji = -r.s * r.phase;
                const Complex jjj = r.c * r.phase;
                for (int k = 0; k < rows; ++k) {
                    const Complex wi = w(k, i), wj = w(k, j);
                    w(k, i) = wi * jii + wj * jji;
                    w(k, j) = wi * jij + wj * jjj;
                }
                for (int k = 0; k < cols; ++k) {
                    const Complex vi = v(k, i), vj = v(k, j);
                    v(k, i) = vi * jii + vj * jji;
                    v(k, j) = vi * jij + vj * jjj;
                }
            }
        }
        if (worst <= 1e-14) break;
    }
    if (sweep == max_sweeps)
        throw std::runtime_error("svd: one-sided Jacobi iteration cap reached");

    std::vector<double> sigma(cols);
    for (int j = 0; j < cols; ++j) sigma[j] = std::sqrt(column_norm_sq(w, j));

    std::vector<int> order(cols);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return sigma[a] > sigma[b]; });

    SvdResult out;
    out.singular_values.resize(cols);
    out.u = ComplexMatrix(rows, rows);
    out.v = ComplexMatrix(cols, cols);
    const double sig_max = sigma.empty() ? 0.0 : sigma[order[0]];
    for (int k = 0; k < cols; ++k) {
        const int j = order[k];
        out.singular_values[k] = sigma[j];
        for (int i = 0; i < cols; ++i) out.v(i, k) = v(i, j);
        if (sigma[j] > std::max(1e-13 * sig_max, 1e-300)) {
            for (int i = 0; i < rows; ++i) out.u(i, k) = w(i, j) / sigma[j];
        } else {
            out.singular_values[k] = sigma[j];
            gram_schmidt_fill(out.u, k);
        }
    }
    for (int k = cols; k < rows; ++k) gram_schmidt_fill(out.u, k);
    return out;
}

HermitianMatrix spectral_map(const SpectralDecomposition& s,
                             const std::function<double(double)>& f) {
    const int n = s.dim();
    ComplexMatrix scaled(n, n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) scaled(i, k) = s.eigenvectors(i, k) * f(s.eigenvalues[k]);
    return HermitianMatrix::symmetrize(scaled * adjoint(s.eigenvectors));
}

HermitianMatrix polar_sign(const HermitianMatrix& m, double kernel_tol) {
    if (kernel_tol < 0.0) throw std::invalid_argument("polar_sign: kernel_tol must be >= 0");
    const SpectralDecomposition s = hermitian_eig(m);
    return spectral_map(s, [kernel_tol](double d) {
        if (std::abs(d) <= kernel_tol) return 0.0;
        return d > 0.0 ? 1.0 : -1.0;
    });
}

double operator_norm_inf(const HermitianMatrix& m) {
    const SpectralDecomposition s = hermitian_eig(m);
    double r = 0.0;
    for (double d : s.eigenvalues) r = std::max(r, std::abs(d));
    return r;
}

}  // namespace snp
