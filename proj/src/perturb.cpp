#include "snp/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "snp/eig.hpp"
#include "snp/linfit.hpp"

namespace snp {

std::string BranchFamily::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "t";
    for (int i = 1; i <= n(); ++i) os << ",lambda_" << i;
    os << "\n";
    for (size_t k = 0; k < t_grid.size(); ++k) {
        os << t_grid[k];
        for (int i = 0; i < n(); ++i) os << "," << branches[i][k];
        os << "\n";
    }
    return os.str();
}

double BranchFamily::max_divided_difference(int order) const {
    if (order < 1 || order > 3)
        throw std::invalid_argument("max_divided_difference supports orders 1..3");
    if (t_grid.size() < static_cast<size_t>(order) + 1) return 0.0;
    const double h = t_grid[1] - t_grid[0];
    static const std::vector<std::vector<double>> stencils{
        {-1.0, 1.0}, {1.0, -2.0, 1.0}, {-1.0, 3.0, -3.0, 1.0}};
    const std::vector<double>& c = stencils[order - 1];
    double worst = 0.0;
    for (const std::vector<double>& br : branches) {
        for (size_t k = 0; k + order < br.size(); ++k) {
            double acc = 0.0;
            for (int j = 0; j <= order; ++j) acc += c[j] * br[k + j];
            worst = std::max(worst, std::abs(acc) / std::pow(h, order));
        }
    }
    return worst;
}

std::vector<int> hungarian_assignment(const std::vector<std::vector<double>>& cost) {
    const int n = static_cast<int>(cost.size());
    // Potentials-based shortest augmenting path, 1-indexed internals.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    const double inf = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            const int i0 = p[j0];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> row_to_col(n, -1);
    for (int j = 1; j <= n; ++j)
        if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
    return row_to_col;
}

namespace {

struct TrackerState {
    // Last two accepted (t, values-per-branch) states, for prediction.
    double t1 = 0.0, t2 = 0.0;
    std::vector<double> v1, v2;  // v2 is the most recent
    int accepted = 0;
};

std::vector<double> eigenvalues_at(const HermitianMatrix& a, const HermitianMatrix& b,
                                   double t) {
    return hermitian_eig(pencil_at(a, b, t)).eigenvalues;
}

// Match sorted eigenvalues `vals` to branches; prediction by linear
// extrapolation once two states are available.
void advance(TrackerState& st, double t, const std::vector<double>& vals,
             double* max_distance, bool* ambiguous) {
    const int n = static_cast<int>(vals.size());
    *max_distance = 0.0;
    *ambiguous = false;
    if (st.accepted < 2) {
        // no prediction available; sorted order
        st.v1 = st.v2;
        st.t1 = st.t2;
        st.v2 = vals;
        st.t2 = t;
        ++st.accepted;
        return;
    }
    std::vector<double> pred(n);
    const double ratio = (t - st.t2) / (st.t2 - st.t1);
    for (int i = 0; i < n; ++i) pred[i] = st.v2[i] + (st.v2[i] - st.v1[i]) * ratio;

    for (int i = 0; i < n && !*ambiguous; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(pred[i] - pred[j]) < 1e-12) {
                *ambiguous = true;
                break;
            }

    std::vector<std::vector<double>> cost(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) cost[i][j] = std::abs(pred[i] - vals[j]);
    const std::vector<int> match = hungarian_assignment(cost);

    std::vector<double> next(n);
    for (int i = 0; i < n; ++i) {
        next[i] = vals[match[i]];
        *max_distance = std::max(*max_distance, cost[i][match[i]]);
    }
    st.v1 = std::move(st.v2);
    st.t1 = st.t2;
    st.v2 = std::move(next);
    st.t2 = t;
    ++st.accepted;
}

// True when three or more eigenvalues collide at one grid point.
bool multi_degenerate(const std::vector<double>& vals, double tol) {
    const int n = static_cast<int>(vals.size());
    for (int i = 0; i + 2 < n; ++i)
        if (std::abs(vals[i] - vals[i + 2]) < tol) return true;
    return false;
}

}  // namespace

BranchFamily track_branches(const HermitianMatrix& a, const HermitianMatrix& b,
                            double t_max, int steps) {
    if (a.dim() != b.dim()) throw std::invalid_argument("track_branches: dimension mismatch");
    if (!(t_max > 0.0)) throw std::invalid_argument("track_branches: t_max must be positive");
    if (steps < 64) throw std::invalid_argument("track_branches: steps must be >= 64");
    if (steps % 2 != 0)
        throw std::invalid_argument("track_branches: steps must be even so the grid "
                                    "contains t = 0");

    const int n = a.dim();
    const double h = 2.0 * t_max / steps;
    const double scale = operator_norm_inf(a) + t_max * operator_norm_inf(b);
    const double degen_tol = 1e-9 * std::max(scale, 1e-300);

    BranchFamily fam;
    fam.t_grid.resize(steps + 1);
    for (int k = 0; k <= steps; ++k)
        fam.t_grid[k] = (k == steps / 2) ? 0.0 : -t_max + k * h;
    fam.branches.assign(n, std::vector<double>(steps + 1));
    fam.match_distance.assign(steps + 1, 0.0);
    fam.ambiguous_step.assign(steps + 1, false);

    TrackerState st;
    for (int k = 0; k <= steps; ++k) {
        const double t = fam.t_grid[k];
        std::vector<double> vals = eigenvalues_at(a, b, t);
        double dist = 0.0;
        bool amb = false;
        if (st.accepted >= 2 && multi_degenerate(vals, degen_tol)) {
            // refine once: walk 3 intermediate points so the predictions
            // separate the colliding branches before the final match
            fam.ambiguous_step[k] = true;
            const double t_prev = st.t2;
            for (int sub = 1; sub <= 3; ++sub) {
                const double ts = t_prev + (t - t_prev) * sub / 4.0;
                double d2 = 0.0;
                bool a2 = false;
                advance(st, ts, eigenvalues_at(a, b, ts), &d2, &a2);
            }
        }
        advance(st, t, vals, &dist, &amb);
        fam.match_distance[k] = dist;
        if (amb) fam.ambiguous_step[k] = true;
        for (int i = 0; i < n; ++i) fam.branches[i][k] = st.v2[i];
    }

    fam.vanishing_orders.reserve(n);
    for (int i = 0; i < n; ++i)
        fam.vanishing_orders.push_back(vanishing_order(fam.branches[i], fam.t_grid, scale));
    return fam;
}

VanishingOrder vanishing_order(const std::vector<double>& branch,
                               const std::vector<double>& t_grid,
                               std::optional<double> scale) {
    if (branch.size() != t_grid.size() || branch.size() < 5)
        throw std::invalid_argument("vanishing_order: branch and grid sizes must agree");

    double sc = scale.value_or(0.0);
    if (sc == 0.0)
        for (double v : branch) sc = std::max(sc, std::abs(v));
    const double ztol = 1e-10 * std::max(sc, 1e-300);

    VanishingOrder out;
    bool all_zero = true;
    for (double v : branch)
        if (std::abs(v) > ztol) {
            all_zero = false;
            break;
        }
    if (all_zero) {
        out.status = VanishingOrder::Status::IdenticallyZero;
        return out;
    }

    size_t i0 = 0;
    for (size_t k = 1; k < t_grid.size(); ++k)
        if (std::abs(t_grid[k]) < std::abs(t_grid[i0])) i0 = k;
    if (std::abs(branch[i0]) > ztol) {
        out.m = 0;
        out.mu0 = branch[i0];
        out.raw_slope = 0.0;
        return out;
    }

    // log-log slope over the decade of positive t nearest 0
    std::vector<double> lt, lv;
    double t_first = 0.0;
    double sign_val = 0.0;
    for (size_t k = i0 + 1; k < t_grid.size(); ++k) {
        const double t = t_grid[k];
        const double v = branch[k];
        if (t <= 0.0 || std::abs(v) <= ztol) continue;
        if (t_first == 0.0) {
            t_first = t;
            sign_val = v;
        }
        if (lt.size() >= 3 && t > 10.0 * t_first) break;
        lt.push_back(std::log(t));
        lv.push_back(std::log(std::abs(v)));
    }
    if (lt.size() < 2) {
        out.status = VanishingOrder::Status::IdenticallyZero;
        return out;
    }
    const LineFit fit = fit_line(lt, lv);
    out.raw_slope = fit.slope;
    out.m = static_cast<int>(std::lround(fit.slope));
    if (out.m < 1) out.m = 1;  // lambda(0) = 0 was established above
    out.confident = std::abs(fit.slope - out.m) <= 0.15;
    out.mu0 = (sign_val >= 0.0 ? 1.0 : -1.0) * std::exp(fit.intercept);
    return out;
}

KernelTestResult sup_norm_kernel_test(const HermitianMatrix& a, const HermitianMatrix& b) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("sup_norm_kernel_test: dimension mismatch");
    const SpectralDecomposition sa = hermitian_eig(a);
    double norm_inf = 0.0;
    for (double d : sa.eigenvalues) norm_inf = std::max(norm_inf, std::abs(d));
    if (std::abs(norm_inf - 1.0) > 1e-9)
        throw std::domain_error("sup_norm_kernel_test requires ||A||_inf = 1");

    const int n = a.dim();
    KernelTestResult res;
    std::vector<int> extremal;
    for (int i = 0; i < n; ++i)
        if (std::abs(std::abs(sa.eigenvalues[i]) - 1.0) <= 1e-8) extremal.push_back(i);

    ComplexMatrix proj(n, n);
    for (int idx : extremal) {
        std::vector<Complex> x(n);
        for (int i = 0; i < n; ++i) x[i] = sa.eigenvectors(i, idx);
        // ||B x||
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            Complex acc = 0.0;
            for (int j = 0; j < n; ++j) acc += b(i, j) * x[j];
            s += std::norm(acc);
        }
        res.bx_norms.push_back(std::sqrt(s));
        res.max_bx = std::max(res.max_bx, res.bx_norms.back());
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) proj(i, j) += x[i] * std::conj(x[j]);
    }
    res.pb_max = max_abs(proj * b.mat());

    // (I-P) A (I-P) has exactly the non-extremal eigenvalues on range(I-P).
    for (int i = 0; i < n; ++i) {
        if (std::abs(std::abs(sa.eigenvalues[i]) - 1.0) <= 1e-8) continue;
        res.residual_norm = std::max(res.residual_norm, std::abs(sa.eigenvalues[i]));
    }

    res.obstruction_met = res.max_bx <= 1e-7;
    res.locally_constant = res.obstruction_met && res.residual_norm < 1.0 - 1e-8;
    if (!res.obstruction_met) {
        std::ostringstream os;
        os << "pair cannot satisfy a sup-norm isometry with q > 2: ||B x|| = " << res.max_bx
           << " on an extremal eigenvector";
        res.verdict = os.str();
    } else if (res.locally_constant) {
        std::ostringstream os;
        os << "obstruction met: B annihilates the extremal eigenspace and "
              "||(I-P)A(I-P)||_inf = "
           << res.residual_norm << " < 1, so ||A+tB||_inf is locally constant";
        res.verdict = os.str();
    } else {
        res.verdict = "obstruction met but the residual spectrum reaches 1; inconclusive";
    }
    return res;
}

AnalyticityScore analyticity_probe(const std::vector<double>& norm_samples,
                                   const std::vector<double>& t_grid, double q) {
    if (norm_samples.size() != t_grid.size())
        throw std::invalid_argument("analyticity_probe: samples and grid sizes differ");
    if (!(q > 1.0)) throw std::invalid_argument("analyticity_probe requires q > 1");
    const size_t total = t_grid.size();
    if (total < 17 || total % 2 == 0)
        throw std::invalid_argument("analyticity_probe: need an odd symmetric grid");
    const size_t n_pos = (total - 1) / 2;
    const size_t mid = n_pos;
    const double h = t_grid[mid + 1] - t_grid[mid];
    for (size_t k = 0; k + 1 < total; ++k)
        if (std::abs((t_grid[k + 1] - t_grid[k]) - h) > 1e-9 * h)
            throw std::invalid_argument("analyticity_probe: grid must be uniform");

    const bool integer_q = std::abs(q - std::round(q)) <= 1e-9;
    const int r = static_cast<int>(std::floor(q + 1e-12)) + 1;
    if (r > 5)
        throw std::invalid_argument("analyticity_probe: difference order above 5 unsupported");

    // Central stencils for the r-th derivative.
    struct Stencil {
        std::vector<int> offsets;
        std::vector<double> coeffs;
    };
    Stencil st;
    switch (r) {
        case 2:
            st = {{-1, 0, 1}, {1.0, -2.0, 1.0}};
            break;
        case 3:
            st = {{-2, -1, 1, 2}, {-0.5, 1.0, -1.0, 0.5}};
            break;
        case 4:
            st = {{-2, -1, 0, 1, 2}, {1.0, -4.0, 6.0, -4.0, 1.0}};
            break;
        default:
            st = {{-3, -2, -1, 1, 2, 3}, {-0.5, 2.0, -2.5, 2.5, -2.0, 0.5}};
            break;
    }
    const int hw = -st.offsets.front();

    double ymax = 0.0;
    for (double y : norm_samples) ymax = std::max(ymax, std::abs(y));
    double abs_coeff = 0.0;
    for (double c : st.coeffs) abs_coeff += std::abs(c);

    AnalyticityScore out;
    out.difference_order = r;
    out.target_exponent = q - std::floor(q + 1e-12) - 1.0;

    // Shrinking windows [0, t_max/2^k]; the stencil step scales with the
    // window so the centers form a clean dyadic ladder.
    std::vector<double> usable_lc, usable_ld;
    size_t count = n_pos;
    while (count >= 8) {
        const int step = static_cast<int>(count) / (2 * hw + 2);
        if (step < 1) break;
        const int center = (hw + 1) * step;
        const double s = step * h;
        const double tc = t_grid[mid + center];
        double val = 0.0;
        for (size_t j = 0; j < st.offsets.size(); ++j)
            val += st.coeffs[j] * norm_samples[mid + center + st.offsets[j] * step];
        val /= std::pow(s, r);
        out.window_centers.push_back(tc);
        out.difference_values.push_back(val);
        const double floor = 3.0 * 1e-14 * (1.0 + ymax) * abs_coeff / std::pow(s, r);
        if (std::abs(val) > floor) {
            usable_lc.push_back(std::log(tc));
            usable_ld.push_back(std::log(std::abs(val)));
        }
        count /= 2;
    }
    if (out.window_centers.size() < 3)
        throw std::domain_error("analyticity_probe: grid too coarse (fewer than 8 points "
                                "per window)");

    // Large windows see the global shape of the curve, not the behavior at 0;
    // drop them when enough small ones remain.
    if (usable_lc.size() >= 6) {
        const double cutoff = std::log(t_grid.back() / 8.0);
        std::vector<double> lc, ld;
        for (size_t i = 0; i < usable_lc.size(); ++i)
            if (usable_lc[i] <= cutoff) {
                lc.push_back(usable_lc[i]);
                ld.push_back(usable_ld[i]);
            }
        if (lc.size() >= 4) {
            usable_lc = std::move(lc);
            usable_ld = std::move(ld);
        }
    }

    if (usable_lc.size() < 3) {
        out.fitted_exponent = std::numeric_limits<double>::quiet_NaN();
        out.verdict = integer_q ? AnalyticityScore::Verdict::IntegerQInconclusive
                                : AnalyticityScore::Verdict::ConsistentWithAnalyticity;
        return out;
    }
    const LineFit fit = fit_line(usable_lc, usable_ld);
    out.fitted_exponent = fit.slope;
    if (!integer_q && std::abs(fit.slope - out.target_exponent) <= 0.1)
        out.verdict = AnalyticityScore::Verdict::AnalyticExtensionImpossible;
    else if (fit.slope >= -0.05)
        out.verdict = AnalyticityScore::Verdict::ConsistentWithAnalyticity;
    else
        out.verdict = integer_q ? AnalyticityScore::Verdict::IntegerQInconclusive
                                : AnalyticityScore::Verdict::Inconclusive;
    return out;
}

}  // namespace snp
