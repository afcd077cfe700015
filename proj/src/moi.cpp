#include "snp/moi.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace snp {

MoiSymbol MoiSymbol::dd_abs_pow(double p, int order) {
    if (order < 0) throw std::invalid_argument("symbol order must be >= 0");
    MoiSymbol s;
    s.kind = Kind::DdAbsPow;
    s.arity = order + 1;
    s.function = FunctionSpec::abs_pow(p);
    return s;
}

MoiSymbol MoiSymbol::dd_abs_pow_sign(double p, int order) {
    if (order < 0) throw std::invalid_argument("symbol order must be >= 0");
    MoiSymbol s;
    s.kind = Kind::DdAbsPowSign;
    s.arity = order + 1;
    s.function = FunctionSpec::abs_pow_sign(p);
    return s;
}

MoiSymbol MoiSymbol::constant_one(int arity) {
    if (arity < 1) throw std::invalid_argument("symbol arity must be >= 1");
    MoiSymbol s;
    s.kind = Kind::ConstantOne;
    s.arity = arity;
    return s;
}

MoiSymbol MoiSymbol::projector_indicator(int arity, double lo, double hi) {
    if (arity < 1) throw std::invalid_argument("symbol arity must be >= 1");
    if (lo > hi) throw std::invalid_argument("indicator window is empty");
    MoiSymbol s;
    s.kind = Kind::ProjectorIndicator;
    s.arity = arity;
    s.indicator_lo = lo;
    s.indicator_hi = hi;
    return s;
}

double MoiSymbol::evaluate(std::span<const double> nodes) const {
    if (static_cast<int>(nodes.size()) != arity)
        throw std::invalid_argument("symbol evaluated with wrong number of nodes");
    switch (kind) {
        case Kind::ConstantOne:
            return 1.0;
        case Kind::ProjectorIndicator:
            return (nodes[0] >= indicator_lo && nodes[0] <= indicator_hi) ? 1.0 : 0.0;
        case Kind::DdAbsPow:
        case Kind::DdAbsPowSign:
            return divided_difference(function, nodes);
    }
    throw std::logic_error("unreachable");
}

namespace {

// Group indices of eigenvalues agreeing to 1e-9 * spectral radius; each group
// evaluates the symbol at its mean so the confluent branch sees exact ties.
struct EigenGrouping {
    std::vector<int> group_of;     // per eigen index
    std::vector<double> rep_value; // per group
};

EigenGrouping group_eigenvalues(const std::vector<double>& d) {
    EigenGrouping g;
    const int n = static_cast<int>(d.size());
    g.group_of.resize(n);
    double radius = 0.0;
    for (double x : d) radius = std::max(radius, std::abs(x));
    const double tol = 1e-9 * radius;

    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return d[a] < d[b]; });

    int gi = -1;
    double prev = 0.0, sum = 0.0;
    int count = 0;
    for (int k = 0; k < n; ++k) {
        const double x = d[order[k]];
        if (gi < 0 || x - prev > tol) {
            if (gi >= 0) g.rep_value[gi] = sum / count;
            ++gi;
            g.rep_value.push_back(0.0);
            sum = 0.0;
            count = 0;
        }
        g.group_of[order[k]] = gi;
        sum += x;
        ++count;
        prev = x;
    }
    if (gi >= 0) g.rep_value[gi] = sum / count;
    return g;
}

ComplexMatrix to_eigenbasis(const SpectralDecomposition& s, const HermitianMatrix& b) {
    return adjoint(s.eigenvectors) * (b.mat() * s.eigenvectors);
}

}  // namespace

MoiResult moi_apply(const SpectralDecomposition& spec_a, const MoiSymbol& symbol,
                    std::span<const HermitianMatrix> bs) {
    const int n = spec_a.dim();
    const int r = static_cast<int>(bs.size());
    if (symbol.arity != r + 1)
        throw std::invalid_argument("moi_apply: symbol arity must equal slots + 1");
    if (r > 3) throw std::invalid_argument("moi_apply: orders above 3 are unsupported");
    for (const HermitianMatrix& b : bs)
        if (b.dim() != n) throw std::invalid_argument("moi_apply: dimension mismatch");

    const EigenGrouping grouping = group_eigenvalues(spec_a.eigenvalues);
    std::vector<ComplexMatrix> bt;
    bt.reserve(bs.size());
    for (const HermitianMatrix& b : bs) bt.push_back(to_eigenbasis(spec_a, b));

    std::map<std::vector<int>, double> memo;
    auto weight = [&](std::initializer_list<int> idx) {
        std::vector<int> key;
        key.reserve(idx.size());
        for (int i : idx) key.push_back(grouping.group_of[i]);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        std::vector<double> nodes;
        nodes.reserve(key.size());
        for (int gi : key) nodes.push_back(grouping.rep_value[gi]);
        const double w = symbol.evaluate(nodes);
        memo.emplace(std::move(key), w);
        return w;
    };

    ComplexMatrix res(n, n);
    if (r == 0) {
        for (int i = 0; i < n; ++i) res(i, i) = weight({i});
    } else if (r == 1) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) res(i, j) = weight({i, j}) * bt[0](i, j);
    } else if (r == 2) {
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) {
                Complex acc = 0.0;
                for (int j = 0; j < n; ++j)
                    acc += weight({i, j, k}) * bt[0](i, j) * bt[1](j, k);
                res(i, k) = acc;
            }
    } else {
        for (int i = 0; i < n; ++i)
            for (int l = 0; l < n; ++l) {
                Complex acc = 0.0;
                for (int j = 0; j < n; ++j)
                    for (int k = 0; k < n; ++k)
                        acc += weight({i, j, k, l}) * bt[0](i, j) * bt[1](j, k) * bt[2](k, l);
                res(i, l) = acc;
            }
    }

    MoiResult out;
    out.trace = trace(res);
    const ComplexMatrix& u = spec_a.eigenvectors;
    out.matrix = u * (res * adjoint(u));
    return out;
}

double moi_trace_order2(const SpectralDecomposition& spec_a, double p,
                        const HermitianMatrix& b, double kernel_tol) {
    if (p <= 1.0) throw std::invalid_argument("moi_trace_order2 requires p > 1");
    const int n = spec_a.dim();
    if (b.dim() != n) throw std::invalid_argument("moi_trace_order2: dimension mismatch");
    if (p < 2.0) {
        for (double d : spec_a.eigenvalues)
            if (std::abs(d) <= kernel_tol) {
                std::ostringstream os;
                os << "moi_trace_order2: p = " << p
                   << " < 2 requires all eigenvalues away from zero (|d| > " << kernel_tol
                   << "); use the regularized ladder instead";
                throw std::domain_error(os.str());
            }
    }

    const ComplexMatrix bt = to_eigenbasis(spec_a, b);
    const std::vector<double>& d = spec_a.eigenvalues;
    double sum = 0.0;
    for (int l = 0; l < n; ++l) {
        sum += 0.5 * sym_second_dd(p, d[l], d[l]) * std::norm(bt(l, l));
        for (int k = l + 1; k < n; ++k)
            sum += sym_second_dd(p, d[l], d[k]) * std::norm(bt(l, k));
    }
    return sum;
}

double moi_trace_truncated(const SpectralDecomposition& spec_a, double p,
                           const HermitianMatrix& b, int rank) {
    const int n = spec_a.dim();
    if (rank < 1 || rank > n)
        throw std::invalid_argument("moi_trace_truncated: rank must be in [1, n]");
    if (p < 2.0)
        throw std::domain_error("moi_trace_truncated requires p >= 2 (monotone truncation)");
    if (b.dim() != n) throw std::invalid_argument("moi_trace_truncated: dimension mismatch");

    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](int a, int c) {
        return std::abs(spec_a.eigenvalues[a]) > std::abs(spec_a.eigenvalues[c]);
    });
    order.resize(rank);
    std::sort(order.begin(), order.end());

    const ComplexMatrix bt = to_eigenbasis(spec_a, b);
    double sum = 0.0;
    for (int li = 0; li < rank; ++li) {
        const int l = order[li];
        sum += 0.5 * sym_second_dd(p, spec_a.eigenvalues[l], spec_a.eigenvalues[l]) *
               std::norm(bt(l, l));
        for (int ki = li + 1; ki < rank; ++ki) {
            const int k = order[ki];
            sum += sym_second_dd(p, spec_a.eigenvalues[l], spec_a.eigenvalues[k]) *
                   std::norm(bt(l, k));
        }
    }
    return sum;
}

}  // namespace snp
