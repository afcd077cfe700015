#pragma once

#include <cstdlib>
#include <random>

#include "snp/eig.hpp"
#include "snp/matrix.hpp"

namespace snp::testing {

inline unsigned long base_seed() {
    if (const char* s = std::getenv("SNPERTURB_SEED")) return std::strtoul(s, nullptr, 10);
    return 42ul;
}

inline std::mt19937_64 make_rng(unsigned long salt = 0) {
    return std::mt19937_64(base_seed() + salt);
}

inline ComplexMatrix random_complex(int rows, int cols, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    ComplexMatrix m(rows, cols);
    for (auto& z : m.data()) z = Complex(u(rng), u(rng));
    return m;
}

inline HermitianMatrix random_hermitian(int n, std::mt19937_64& rng) {
    return HermitianMatrix::symmetrize(random_complex(n, n, rng));
}

inline ComplexMatrix random_unitary(int n, std::mt19937_64& rng) {
    // Gram-Schmidt on a random complex matrix.
    ComplexMatrix g = random_complex(n, n, rng);
    for (int j = 0; j < n; ++j) {
        for (int pass = 0; pass < 2; ++pass) {
            for (int k = 0; k < j; ++k) {
                Complex proj = 0.0;
                for (int i = 0; i < n; ++i) proj += std::conj(g(i, k)) * g(i, j);
                for (int i = 0; i < n; ++i) g(i, j) -= proj * g(i, k);
            }
        }
        double nrm = 0.0;
        for (int i = 0; i < n; ++i) nrm += std::norm(g(i, j));
        nrm = std::sqrt(nrm);
        for (int i = 0; i < n; ++i) g(i, j) /= nrm;
    }
    return g;
}

// Hermitian with prescribed eigenvalue magnitudes in [lo, hi], random signs
// and a random eigenbasis.
inline HermitianMatrix random_hermitian_invertible(int n, double lo, double hi,
                                                   std::mt19937_64& rng) {
    std::uniform_real_distribution<double> mag(lo, hi);
    std::bernoulli_distribution sign(0.5);
    std::vector<double> d(n);
    for (double& x : d) x = (sign(rng) ? 1.0 : -1.0) * mag(rng);
    const ComplexMatrix u = random_unitary(n, rng);
    ComplexMatrix scaled(n, n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) scaled(i, k) = u(i, k) * d[k];
    return HermitianMatrix::symmetrize(scaled * adjoint(u));
}

}  // namespace snp::testing
