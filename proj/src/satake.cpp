#include "sbforms/satake.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sbforms/parallel.hpp"

namespace sbf {

namespace {
constexpr double kPi = 3.1415926535897932384626433832795;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kStableTol = 1e-6;
constexpr double kGrowthTol = 1e-3;
} // namespace

int weight_threshold(int n, int rho) {
    require(n >= 2, ErrorCode::InvalidArgument, "threshold requires n >= 2");
    require(rho >= 0, ErrorCode::InvalidArgument, "rho must be nonnegative");
    return 2 * n - rho;
}

std::string to_string(ClassifierVerdict v) {
    switch (v) {
        case ClassifierVerdict::CuspLike: return "CuspLike";
        case ClassifierVerdict::ConstantTermObstruction: return "ConstantTermObstruction";
        case ClassifierVerdict::KoecherViolation: return "KoecherViolation";
    }
    return "?";
}

namespace {

struct TransverseGrid {
    std::vector<double> y; // midpoints
    std::vector<std::vector<double>> u_re;
    std::vector<std::vector<double>> u_im;
    double cell_volume = 0.0; // dy * prod(du_re * du_im)
};

std::vector<double> midpoints(double lo, double hi, int cells) {
    std::vector<double> out(cells);
    const double h = (hi - lo) / cells;
    for (int i = 0; i < cells; ++i) out[i] = lo + (i + 0.5) * h;
    return out;
}

TransverseGrid make_transverse(const Region& region) {
    TransverseGrid g;
    g.y = midpoints(region.y_min, region.y_max, region.grid[1]);
    double vol = (region.y_max - region.y_min) / region.grid[1];
    for (std::size_t c = 0; c < region.u_box.size(); ++c) {
        const auto& ub = region.u_box[c];
        const int n_re = region.grid[2 + 2 * c];
        const int n_im = region.grid[3 + 2 * c];
        g.u_re.push_back(midpoints(ub.re_lo, ub.re_hi, n_re));
        g.u_im.push_back(midpoints(ub.im_lo, ub.im_hi, n_im));
        vol *= (ub.re_hi - ub.re_lo) / n_re * (ub.im_hi - ub.im_lo) / n_im;
    }
    g.cell_volume = vol;
    return g;
}

// Visits every transverse grid node (y, u) in a fixed row-major order.
template <typename Fn>
void for_each_transverse(const TransverseGrid& g, int n_minus_1, Fn&& fn) {
    const std::size_t axes = static_cast<std::size_t>(n_minus_1);
    std::vector<std::size_t> idx(2 * axes, 0);
    Eigen::VectorXcd u(n_minus_1);
    bool done = false;
    while (!done) {
        for (std::size_t c = 0; c < axes; ++c)
            u(c) = Complex(g.u_re[c][idx[2 * c]], g.u_im[c][idx[2 * c + 1]]);
        for (double y : g.y) fn(y, u);
        // odometer increment
        done = true;
        for (std::size_t a = 0; a < 2 * axes; ++a) {
            const std::size_t cap = (a % 2 == 0) ? g.u_re[a / 2].size() : g.u_im[a / 2].size();
            if (++idx[a] < cap) {
                done = false;
                break;
            }
            idx[a] = 0;
        }
        if (axes == 0) done = true;
    }
}

} // namespace

LsNormResult ls_norm(const Evaluator& q, int k, MultiIndex i, double s, const Region& region,
                     int doublings, int threads) {
    region.validate();
    require(static_cast<bool>(q), ErrorCode::InvalidArgument, "empty evaluator");
    require(s >= 1.0, ErrorCode::InvalidArgument, "s must lie in [1, inf]");
    require(doublings >= 0, ErrorCode::InvalidArgument, "doublings must be >= 0");

    const int n = region.n();
    const bool sup_norm = std::isinf(s);
    const double half_power = 0.5 * (k + i.cardinality());
    const double alpha = sup_norm ? half_power : half_power * s - (n + 1);

    const TransverseGrid transverse = make_transverse(region);
    const int x_cells = region.grid[0];

    // One octave [lo, hi]: midpoint rule over x, full transverse sweep per
    // x node. Per-cell results are accumulated in index order.
    auto octave_value = [&](double lo, double hi) -> double {
        const double hx = (hi - lo) / x_cells;
        std::vector<double> per_x(x_cells, 0.0);
        parallel_for(static_cast<std::size_t>(x_cells), threads, [&](std::size_t xi) {
            const double x = lo + (xi + 0.5) * hx;
            double acc = 0.0;
            double sup = 0.0;
            for_each_transverse(transverse, n - 1, [&](double y, const Eigen::VectorXcd& u) {
                const Eigen::VectorXcd w = psi(x, y, u);
                const Complex qv = q(w);
                require(std::isfinite(qv.real()) && std::isfinite(qv.imag()), ErrorCode::Numeric,
                        "evaluator returned a non-finite value on the region grid");
                const double absq = std::abs(qv);
                if (sup_norm)
                    sup = std::max(sup, absq * std::pow(x, alpha));
                else
                    acc += std::pow(absq, s) * std::pow(x, alpha);
            });
            per_x[xi] = sup_norm ? sup : acc * transverse.cell_volume * hx;
        });
        double total = 0.0;
        for (double v : per_x) total = sup_norm ? std::max(total, v) : total + v;
        return total;
    };

    LsNormResult result;
    double partial = octave_value(region.x_min, region.x_max);
    result.value = partial;
    result.partials.push_back(partial);
    result.x_max_seq.push_back(region.x_max);
    double lo = region.x_max;
    for (int dbl = 1; dbl <= doublings; ++dbl) {
        const double hi = lo * 2.0;
        const double extra = octave_value(lo, hi);
        partial = sup_norm ? std::max(partial, extra) : partial + extra;
        result.partials.push_back(partial);
        result.x_max_seq.push_back(hi);
        lo = hi;
    }

    if (result.partials.size() < 2) {
        result.diagnostic = LsNormDiagnostics::kInconclusive;
    } else {
        const double last = result.partials.back();
        const double prev = result.partials[result.partials.size() - 2];
        const double scale = std::max(std::abs(last), 1e-300);
        const double rel = std::abs(last - prev) / scale;
        if (rel < kStableTol)
            result.diagnostic = LsNormDiagnostics::kStable;
        else if (rel > kGrowthTol)
            result.diagnostic = LsNormDiagnostics::kGrowing;
        else
            result.diagnostic = LsNormDiagnostics::kInconclusive;
    }
    return result;
}

TailVerdict tail_dichotomy(double m0, int k, int rho, int n, double s, double x0) {
    require(x0 > 0.0, ErrorCode::InvalidArgument, "x0 must be positive");
    require(m0 <= 0.0, ErrorCode::InvalidArgument,
            "positive M0 means a Koecher violation; handled upstream");
    require(s >= 1.0, ErrorCode::InvalidArgument, "s must lie in [1, inf]");
    require(rho >= 0, ErrorCode::InvalidArgument, "rho must be nonnegative");

    TailVerdict verdict;
    if (std::isinf(s)) {
        // sup over [x0, inf) of e^{2 pi M0 x} x^{(k+rho)/2}
        const double alpha = 0.5 * (k + rho);
        if (m0 < 0.0) {
            const double beta = kTwoPi * (-m0);
            const double x_star = std::max(x0, alpha / beta);
            verdict.finite = true;
            verdict.bound = std::exp(-beta * x_star) * std::pow(x_star, alpha);
        } else if (alpha <= 0.0) {
            verdict.finite = true;
            verdict.bound = std::pow(x0, alpha);
        } else {
            verdict.reason = "x^{(k+rho)/2} is unbounded with M0 = 0";
        }
        return verdict;
    }

    const double alpha = 0.5 * (k + rho) * s - (n + 1);
    if (m0 < 0.0) {
        const double beta = kTwoPi * (-m0) * s;
        verdict.finite = true;
        if (alpha <= 0.0) {
            verdict.bound = std::pow(x0, alpha) * std::exp(-beta * x0) / beta;
        } else {
            // e^{-beta x} <= e^{-beta x0/2} e^{-beta x/2} on [x0, inf)
            verdict.bound = std::exp(-0.5 * beta * x0) * std::tgamma(alpha + 1.0) *
                            std::pow(2.0 / beta, alpha + 1.0);
        }
    } else if (alpha < -1.0) {
        verdict.finite = true;
        verdict.bound = std::pow(x0, alpha + 1.0) / (-alpha - 1.0);
    } else {
        verdict.reason = "power tail x^alpha with alpha = " + std::to_string(alpha) + " >= -1";
    }
    return verdict;
}

Classification classify(const GrowthProfile& profile, int n, int k, int rho, double s,
                        double x0) {
    require(n >= 2, ErrorCode::InvalidArgument, "classifier requires n >= 2");
    require(s >= 1.0, ErrorCode::InvalidArgument, "s must lie in [1, inf]");
    Classification out;
    if (profile.has_positive_frequency) {
        out.verdict = ClassifierVerdict::KoecherViolation;
        return out;
    }
    if (profile.has_constant_term) {
        require(k >= weight_threshold(n, rho), ErrorCode::InvalidArgument,
                "constant-term branch is asserted only at weight k >= 2n - rho");
        out.verdict = ClassifierVerdict::ConstantTermObstruction;
        return out;
    }
    require(profile.m0 < 0.0, ErrorCode::InvalidArgument,
            "strictly negative support requires M0 < 0");
    out.verdict = ClassifierVerdict::CuspLike;
    const double c = std::max(profile.c_bound, 0.0);
    std::vector<double> s_values = {1.0, 2.0, std::numeric_limits<double>::infinity()};
    if (std::find(s_values.begin(), s_values.end(), s) == s_values.end()) s_values.push_back(s);
    for (double sv : s_values) {
        TailVerdict tv = tail_dichotomy(profile.m0, k, rho, n, sv, x0);
        if (tv.finite) tv.bound *= std::isinf(sv) ? c : std::pow(c, sv);
        out.bounds[sv] = tv;
    }
    return out;
}

GrowthProfile profile_from_modes(const std::vector<FourierMode>& modes, const CuspData& cusp,
                                 MultiIndex i, int k, const Region& region) {
    region.validate();
    GrowthProfile profile;
    // Largest negative lattice frequency (a property of the lattice, not of
    // the support): frequencies are (j - offset)/lambda0, j integer.
    const double offset = lattice_offset(cusp, i, k);
    const double frac = offset - std::floor(offset); // in [0, 1)
    const bool integral = frac <= 1e-12 || frac >= 1.0 - 1e-12;
    double j_star;
    if (cusp.lambda0 > 0.0)
        j_star = integral ? std::round(offset) - 1.0 : std::floor(offset);
    else
        j_star = integral ? std::round(offset) + 1.0 : std::floor(offset) + 1.0;
    profile.m0 = (j_star - offset) / cusp.lambda0;

    const TransverseGrid transverse = make_transverse(region);
    double c_sum = 0.0;
    for (const auto& mode : modes) {
        if (!(mode.i == i)) continue;
        if (mode.m > 1e-12) {
            profile.has_positive_frequency = true;
            continue;
        }
        if (std::abs(mode.m) <= 1e-12) {
            profile.has_constant_term = true;
            continue;
        }
        // sup over the x = x_min slice of |c(u) e^{2 pi m w_1}|
        double sup = 0.0;
        for_each_transverse(transverse, region.n() - 1,
                            [&](double y, const Eigen::VectorXcd& u) {
                                (void)y;
                                const double re_w1 = region.x_min + 0.5 * u.squaredNorm();
                                sup = std::max(sup, std::abs(mode.c(u)) *
                                                        std::exp(kTwoPi * mode.m * re_w1));
                            });
        c_sum += sup;
    }
    profile.c_bound = c_sum * std::exp(-kTwoPi * profile.m0 * region.x_min);
    return profile;
}

} // namespace sbf
