#include "sbforms/jobs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "sbforms/json_io.hpp"
#include "sbforms/satake.hpp"
#include "sbforms/svg_plot.hpp"
#include "sbforms/version.hpp"

namespace sbf::jobs {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

using sbf::Json;

// ---------------------------------------------------------------------------
// report plumbing
// ---------------------------------------------------------------------------

struct CheckAccumulator {
    Json checks = Json::array();
    bool all_passed = true;

    void add(const std::string& name, bool passed, double residual, double tol,
             Json details = Json()) {
        Json c;
        c["name"] = name;
        c["passed"] = passed;
        c["residual"] = residual;
        c["tol"] = tol;
        if (!details.is_null()) c["details"] = std::move(details);
        checks.push_back(std::move(c));
        all_passed = all_passed && passed;
    }
};

long long seed_of(const Json& params, const RunOptions& opts) {
    if (opts.seed) return *opts.seed;
    if (params.contains("seed")) return params.at("seed").get<long long>();
    return 12345;
}

double tol_of(const Json& params, const RunOptions& opts, double fallback) {
    if (opts.tol) return *opts.tol;
    if (params.contains("tol")) return params.at("tol").get<double>();
    return fallback;
}

bool plots_of(const Json& params, const RunOptions& opts) {
    if (opts.plots) return *opts.plots;
    if (params.contains("plots")) return params.at("plots").get<bool>();
    return false;
}

int get_int(const Json& params, const char* key, int fallback) {
    return params.contains(key) ? params.at(key).get<int>() : fallback;
}

double get_double(const Json& params, const char* key, double fallback) {
    return params.contains(key) ? params.at(key).get<double>() : fallback;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// shared fixtures and helpers
// ---------------------------------------------------------------------------

Eigen::VectorXcd parse_point(const Json& j, int n) {
    Eigen::VectorXcd v = vector_from_json(j, "point");
    if (v.size() != n) fail(ErrorCode::Schema, "point has wrong dimension");
    return v;
}

// Generic test function on the ball with every odd degree populated:
// components mix under the slash action, which is what the identities probe.
SuperFunction fixture_ball_function(int n, int r, int k) {
    SuperFunction f(n, r, k, Realization::Ball);
    f.add_component(
        MultiIndex::empty(),
        [](const Eigen::VectorXcd& z) { return Complex(1.0, 0.0) + 0.3 * z(0); }, "1 + 0.3 z1");
    if (r >= 1)
        f.add_component(
            MultiIndex::from_indices({1}, r),
            [n](const Eigen::VectorXcd& z) { return z(std::min(1, n - 1)) + Complex(0.0, 0.5); },
            "z2 + i/2");
    if (r >= 2) {
        f.add_component(
            MultiIndex::from_indices({2}, r),
            [](const Eigen::VectorXcd& z) { return 0.7 * z(0) * z(0); }, "0.7 z1^2");
        f.add_component(
            MultiIndex::from_indices({1, 2}, r),
            [](const Eigen::VectorXcd& z) { return Complex(0.25, 0.0) - 0.1 * z(0); },
            "1/4 - 0.1 z1");
    }
    return f;
}

SuperFunction fixture_half_plane_function(int n, int r, int k) {
    SuperFunction f(n, r, k, Realization::HalfPlane);
    f.add_component(
        MultiIndex::empty(),
        [](const Eigen::VectorXcd& w) { return std::exp(-kTwoPi * w(0)); }, "e^{-2 pi w1}");
    if (r >= 1)
        f.add_component(
            MultiIndex::from_indices({1}, r),
            [n](const Eigen::VectorXcd& w) {
                return std::exp(-kTwoPi * w(0)) * (n > 1 ? w(1) : Complex(1.0, 0.0));
            },
            "w2 e^{-2 pi w1}");
    return f;
}

double coeff_distance(const GrassmannVector& a, const GrassmannVector& b) {
    double worst = 0.0;
    for (const auto& [idx, c] : a.coeffs()) worst = std::max(worst, std::abs(c - b.coeff(idx)));
    for (const auto& [idx, c] : b.coeffs()) worst = std::max(worst, std::abs(c - a.coeff(idx)));
    return worst;
}

// |det| of the numerical complex Jacobian of z -> gz via central differences.
double numeric_jacobian_det(const GroupElement& g, const Eigen::VectorXcd& z, double step) {
    const int n = static_cast<int>(z.size());
    Eigen::MatrixXcd jac(n, n);
    for (int j = 0; j < n; ++j) {
        Eigen::VectorXcd zp = z, zm = z;
        zp(j) += step;
        zm(j) -= step;
        jac.col(j) = (mobius_raw(g, zp) - mobius_raw(g, zm)) / (2.0 * step);
    }
    return std::abs(jac.determinant());
}

// ---------------------------------------------------------------------------
// verify command
// ---------------------------------------------------------------------------

void run_verify(const Json& params, const RunOptions& opts, CheckAccumulator& acc,
                Json& tolerances) {
    const int n = get_int(params, "n", 2);
    const int r = get_int(params, "r", 2);
    const int k = get_int(params, "k", 3);
    const int trials = get_int(params, "trials", 200);
    const long long seed = seed_of(params, opts);
    require(n >= 2, ErrorCode::Schema, "verify requires n >= 2");
    require(trials >= 1, ErrorCode::Schema, "trials must be positive");

    std::vector<std::string> suites;
    if (params.contains("suites"))
        for (const auto& s : params.at("suites")) suites.push_back(s.get<std::string>());
    auto wants = [&](const char* name) {
        return suites.empty() || std::find(suites.begin(), suites.end(), name) != suites.end();
    };
    auto tol_for = [&](const char* name, double fallback) {
        double t = fallback;
        if (params.contains("tolerances") && params.at("tolerances").contains(name))
            t = params.at("tolerances").at(name).get<double>();
        if (opts.tol) t = *opts.tol;
        tolerances[name] = t;
        return t;
    };

    Rng rng(static_cast<std::uint64_t>(seed));

    if (wants("cocycle_law")) {
        const double tol = tol_for("cocycle_law", 1e-10);
        double worst = 0.0;
        for (int t = 0; t < trials; ++t) {
            const GroupElement g = random_member(rng, n, r);
            const GroupElement h = random_member(rng, n, r);
            const Eigen::VectorXcd z = random_ball_vector(rng, n);
            const Complex lhs = cocycle(mul(g, h), z);
            const Complex rhs = cocycle(g, mobius_raw(h, z)) * cocycle(h, z);
            worst = std::max(worst, std::abs(lhs - rhs));
            // same law on the half plane through the Cayley conjugates
            const GroupElement gh_h = to_half_plane(g);
            const GroupElement hh_h = to_half_plane(h);
            const Eigen::VectorXcd w = random_half_plane_vector(rng, n);
            const Complex lhs_h = cocycle(mul(gh_h, hh_h), w);
            const Complex rhs_h = cocycle(gh_h, mobius_raw(hh_h, w)) * cocycle(hh_h, w);
            worst = std::max(worst, std::abs(lhs_h - rhs_h));
        }
        acc.add("cocycle_law", worst < tol, worst, tol, Json{{"trials", trials}});
    }

    if (wants("delta_transform")) {
        const double tol = tol_for("delta_transform", 1e-10);
        double worst = 0.0;
        for (int t = 0; t < trials; ++t) {
            const GroupElement g = random_member(rng, n, r);
            const Eigen::VectorXcd z = random_ball_vector(rng, n);
            const Eigen::VectorXcd w = random_ball_vector(rng, n);
            const Complex lhs = delta(mobius_raw(g, z), mobius_raw(g, w));
            const Complex rhs = delta(z, w) * cocycle(g, z) * std::conj(cocycle(g, w));
            worst = std::max(worst, std::abs(lhs - rhs));
        }
        acc.add("delta_transform", worst < tol, worst, tol, Json{{"trials", trials}});
    }

    if (wants("jacobian_cocycle")) {
        const double tol = tol_for("jacobian_cocycle", 1e-6);
        const double step = get_double(params, "fd_step", 1e-5);
        double worst = 0.0;
        for (int t = 0; t < trials; ++t) {
            const GroupElement g = random_member(rng, n, r);
            const Eigen::VectorXcd z = random_ball_vector(rng, n, 0.7);
            const double fd = numeric_jacobian_det(g, z, step);
            const double exact = std::pow(std::abs(cocycle(g, z)), n + 1);
            worst = std::max(worst, std::abs(fd - exact) / exact);
        }
        acc.add("jacobian_cocycle", worst < tol, worst, tol,
                Json{{"trials", trials}, {"fd_step", step}});
    }

    if (wants("heisenberg")) {
        const double tol = tol_for("heisenberg", 1e-12);
        double worst = 0.0;
        for (int t = 0; t < trials; ++t) {
            Eigen::VectorXcd u(n - 1), v(n - 1);
            for (int i = 0; i < n - 1; ++i) {
                u(i) = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
                v(i) = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
            }
            const double lambda = rng.uniform(-2, 2), mu = rng.uniform(-2, 2);
            const auto [lam2, u2] = heisenberg_mul(lambda, u, mu, v);
            const Eigen::MatrixXcd lhs =
                mul(n_prime(lambda, u, r), n_prime(mu, v, r)).full_matrix();
            const Eigen::MatrixXcd rhs = n_prime(lam2, u2, r).full_matrix();
            worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
            // inverse rule: inv(n'(lambda, u)) = n'(-lambda, -u)
            const Eigen::MatrixXcd li = inv(n_prime(lambda, u, r)).full_matrix();
            const Eigen::MatrixXcd ri = n_prime(-lambda, -u, r).full_matrix();
            worst = std::max(worst, (li - ri).cwiseAbs().maxCoeff());
        }
        acc.add("heisenberg", worst < tol, worst, tol, Json{{"trials", trials}});
    }

    if (wants("cayley_conjugation")) {
        const double tol = tol_for("cayley_conjugation", 1e-12);
        double worst = 0.0;
        for (double t = -2.0; t <= 2.0 + 1e-9; t += 0.5) {
            const Eigen::MatrixXcd lhs = to_half_plane(a_t(t, n, r)).full_matrix();
            const Eigen::MatrixXcd rhs = a_prime_t(t, n, r).full_matrix();
            worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
        }
        acc.add("cayley_conjugation", worst < tol, worst, tol,
                Json{{"t_values", "-2..2 step 0.5"}});
    }

    if (wants("membership_closure")) {
        const double tol = tol_for("membership_closure", 1e-9);
        double worst = 0.0;
        for (int t = 0; t < trials; ++t) {
            const GroupElement g = random_member(rng, n, r);
            const GroupElement h = random_member(rng, n, r);
            for (const GroupElement& e : {mul(g, h), inv(g)}) {
                const MembershipReport rep = is_member(e, tol);
                worst = std::max({worst, rep.form_residual, rep.unitarity_residual,
                                  rep.det_residual});
            }
        }
        acc.add("membership_closure", worst < tol, worst, tol, Json{{"trials", trials}});
    }

    if (wants("cayley_roundtrip")) {
        const double tol = tol_for("cayley_roundtrip", 1e-12);
        const int points = get_int(params, "roundtrip_points", 100);
        double worst = 0.0;
        for (int t = 0; t < points; ++t) {
            const Eigen::VectorXcd z = random_ball_vector(rng, n);
            const Eigen::VectorXcd w = cayley_point_raw(z);
            require(in_half_plane(w), ErrorCode::Numeric, "Cayley image left the half plane");
            worst = std::max(worst, (cayley_point_inv_raw(w) - z).cwiseAbs().maxCoeff());
        }
        acc.add("cayley_roundtrip", worst < tol, worst, tol, Json{{"points", points}});
    }

    if (wants("psi_delta")) {
        const double tol = tol_for("psi_delta", 1e-12);
        double worst = 0.0;
        for (int t = 0; t < trials; ++t) {
            Eigen::VectorXcd u(n - 1);
            for (int i = 0; i < n - 1; ++i) u(i) = Complex(rng.uniform(-2, 2), rng.uniform(-2, 2));
            const double x = rng.uniform(0.05, 4.0), y = rng.uniform(-3.0, 3.0);
            const Eigen::VectorXcd w = psi(x, y, u);
            worst = std::max(worst, std::abs(delta_h(w, w) - Complex(2.0 * x, 0.0)));
            const PsiCoords back = psi_inv(w);
            worst = std::max({worst, std::abs(back.x - x), std::abs(back.y - y),
                              (back.u - u).cwiseAbs().maxCoeff()});
        }
        acc.add("psi_delta", worst < tol, worst, tol, Json{{"trials", trials}});
    }

    if (wants("cocycle_reciprocal")) {
        const double tol = tol_for("cocycle_reciprocal", 1e-12);
        double worst = 0.0;
        for (int t = 0; t < trials; ++t) {
            const Eigen::VectorXcd z = random_ball_vector(rng, n);
            const Complex prod = cocycle_cayley_inv(cayley_point_raw(z)) * cocycle_cayley(z);
            worst = std::max(worst, std::abs(prod - Complex(1.0, 0.0)));
        }
        acc.add("cocycle_reciprocal", worst < tol, worst, tol, Json{{"trials", trials}});
    }

    if (wants("slash_composition")) {
        const double tol = tol_for("slash_composition", 1e-10);
        const SuperFunction f = fixture_ball_function(n, r, k);
        double worst = 0.0;
        const int reps = std::max(1, trials / 10);
        for (int t = 0; t < reps; ++t) {
            const GroupElement g = random_member(rng, n, r, 0.7);
            const GroupElement h = random_member(rng, n, r, 0.7);
            const Eigen::VectorXcd p = random_ball_vector(rng, n, 0.6);
            const GrassmannVector lhs = slash(slash(f, g), h).eval_raw(p);
            const GrassmannVector rhs = slash(f, mul(g, h)).eval_raw(p);
            worst = std::max(worst, coeff_distance(lhs, rhs));
        }
        acc.add("slash_composition", worst < tol, worst, tol, Json{{"trials", reps}});
    }

    if (wants("cayley_slash_roundtrip")) {
        const double tol = tol_for("cayley_slash_roundtrip", 1e-12);
        const SuperFunction f = fixture_ball_function(n, r, k);
        const SuperFunction round = slash_cayley(slash_cayley_inv(f));
        double worst = 0.0;
        for (int t = 0; t < trials; ++t) {
            const Eigen::VectorXcd p = random_ball_vector(rng, n);
            worst = std::max(worst, coeff_distance(round.eval_raw(p), f.eval_raw(p)));
        }
        acc.add("cayley_slash_roundtrip", worst < tol, worst, tol, Json{{"trials", trials}});
    }

    if (wants("commuting_square")) {
        const double tol = tol_for("commuting_square", 1e-10);
        const SuperFunction q = fixture_half_plane_function(n, r, k);
        double worst = 0.0;
        const int reps = std::max(1, trials / 10);
        for (int t = 0; t < reps; ++t) {
            const GroupElement g = random_member(rng, n, r, 0.7);
            const Eigen::VectorXcd z = random_ball_vector(rng, n, 0.6);
            const GrassmannVector lhs = slash_cayley(slash(q, to_half_plane(g))).eval_raw(z);
            const GrassmannVector rhs = slash(slash_cayley(q), g).eval_raw(z);
            worst = std::max(worst, coeff_distance(lhs, rhs));
        }
        acc.add("commuting_square", worst < tol, worst, tol, Json{{"trials", reps}});
    }

    if (wants("amplitude_invariance")) {
        const double tol = tol_for("amplitude_invariance", 1e-10);
        const SuperFunction f = fixture_ball_function(n, r, k);
        double worst = 0.0;
        const int reps = std::max(1, trials / 10);
        for (int t = 0; t < reps; ++t) {
            const GroupElement g = random_member(rng, n, r, 0.7);
            const BallPoint p = BallPoint::checked(random_ball_vector(rng, n, 0.6));
            const double lhs = amplitude(slash(f, g), p);
            const double rhs = amplitude(f, mobius(g, p));
            worst = std::max(worst, std::abs(lhs - rhs));
        }
        acc.add("amplitude_invariance", worst < tol, worst, tol, Json{{"trials", reps}});
    }

    if (wants("lift_equivariance")) {
        const double tol = tol_for("lift_equivariance", 1e-10);
        // invariant fixture: modes on the twisted lattice of a cusp element
        const int rr = std::min(r, 2);
        Eigen::VectorXd dd(rr);
        for (int i = 0; i < rr; ++i) dd(i) = 0.25 * (i + 1);
        CuspData cusp;
        cusp.lambda0 = 1.25;
        cusp.chi = -dd.sum() / (n + 1);
        cusp.d_diag = dd;
        std::vector<FourierMode> modes;
        std::vector<MultiIndex> mode_indices = {MultiIndex::empty()};
        if (rr >= 1) mode_indices.push_back(MultiIndex::from_indices({1}, rr));
        if (rr >= 2) mode_indices.push_back(MultiIndex::from_indices({1, 2}, rr));
        for (std::size_t mi_idx = 0; mi_idx < mode_indices.size(); ++mi_idx) {
            const Complex cval(0.6 + 0.2 * mi_idx, 0.1);
            modes.push_back(make_mode(
                cusp, mode_indices[mi_idx], k, -1 - static_cast<int>(mi_idx),
                [cval](const Eigen::VectorXcd&) { return cval; }, "const mode"));
        }
        const SuperFunction q = synthesize(modes, n, rr, k);
        const SuperFunction f = slash_cayley(q);
        const GroupElement gamma = to_ball(twisted_cusp_element(cusp.lambda0, cusp.chi, dd, n));
        double worst = 0.0;
        const int reps = std::max(1, trials / 10);
        Rng rng2(static_cast<std::uint64_t>(seed) + 17);
        for (int t = 0; t < reps; ++t) {
            const GroupElement g = random_member(rng2, n, rr, 0.6);
            const GrassmannVector lhs = lift(f, mul(gamma, g), 1e-8);
            const GrassmannVector rhs = lift(f, g, 1e-8);
            worst = std::max(worst, coeff_distance(lhs, rhs));
        }
        acc.add("lift_equivariance", worst < tol, worst, tol, Json{{"trials", reps}});
    }
}

// ---------------------------------------------------------------------------
// fourier helpers shared by fourier-expand / koecher-check / satake-classify
// ---------------------------------------------------------------------------

std::vector<FourierMode> modes_from_params(const Json& params, const CuspData& cusp, int n,
                                           int r, int k) {
    std::vector<FourierMode> modes;
    if (!params.contains("modes")) return modes;
    for (const Json& mj : params.at("modes")) {
        const MultiIndex idx =
            mj.contains("odd_index") ? multi_index_from_json(mj.at("odd_index"), r)
                                     : MultiIndex::empty();
        const Complex coeff = complex_from_json(
            mj.contains("coeff") ? mj.at("coeff") : Json::array({1.0, 0.0}), "mode coeff");
        std::vector<int> u_powers(static_cast<std::size_t>(n - 1), 0);
        if (mj.contains("u_powers")) {
            const Json& up = mj.at("u_powers");
            if (!up.is_array() || static_cast<int>(up.size()) != n - 1)
                fail(ErrorCode::Schema, "u_powers must list one exponent per w_2 coordinate");
            for (std::size_t i = 0; i < u_powers.size(); ++i) u_powers[i] = up[i].get<int>();
        }
        Evaluator c = [coeff, u_powers](const Eigen::VectorXcd& u) {
            Complex acc = coeff;
            for (std::size_t i = 0; i < u_powers.size(); ++i)
                acc *= int_pow(u(static_cast<Eigen::Index>(i)), u_powers[i]);
            return acc;
        };
        if (mj.contains("lattice_index")) {
            modes.push_back(make_mode(cusp, idx, k, mj.at("lattice_index").get<int>(),
                                      std::move(c), "mode"));
        } else if (mj.contains("m")) {
            FourierMode mode;
            mode.i = idx;
            mode.m = mj.at("m").get<double>();
            mode.c = std::move(c);
            mode.descriptor = "mode";
            modes.push_back(std::move(mode));
        } else {
            fail(ErrorCode::Schema, "mode needs 'lattice_index' or 'm'");
        }
    }
    return modes;
}

std::map<MultiIndex, Evaluator> component_map(const Json& params, const CuspData& cusp, int n,
                                              int r, int k) {
    std::map<MultiIndex, Evaluator> out;
    if (params.contains("function")) {
        const SuperFunction f = super_function_from_json(params.at("function"));
        require(f.n() == n && f.r() == r, ErrorCode::Schema,
                "function dimensions disagree with the job");
        require(f.domain() == Realization::HalfPlane, ErrorCode::Schema,
                "cusp analysis expects a half-plane function");
        for (const auto& [idx, comp] : f.components()) out[idx] = comp.fn;
        return out;
    }
    const auto modes = modes_from_params(params, cusp, n, r, k);
    require(!modes.empty(), ErrorCode::Schema, "provide 'function' or a nonempty 'modes' list");
    const SuperFunction f = synthesize(modes, n, r, k);
    for (const auto& [idx, comp] : f.components()) out[idx] = comp.fn;
    return out;
}

std::vector<HalfPlanePoint> bases_from_params(const Json& params, int n) {
    std::vector<HalfPlanePoint> bases;
    if (params.contains("bases")) {
        for (const Json& bj : params.at("bases"))
            bases.push_back(HalfPlanePoint::checked(parse_point(bj, n)));
    } else {
        // default spread: e_1 scaled and shifted in w_2
        for (int i = 0; i < 3; ++i) {
            Eigen::VectorXcd w = Eigen::VectorXcd::Zero(n);
            w(0) = Complex(1.0 + 0.5 * i, 0.0);
            if (n > 1) w(n - 1) = Complex(0.2 * i, -0.1 * i);
            w(0) += Complex(0.5 * w.tail(n - 1).squaredNorm(), 0.0);
            bases.push_back(HalfPlanePoint::checked(w));
        }
    }
    return bases;
}

std::string csv_of_coefficients(const Json& rows) {
    std::ostringstream csv;
    csv << "I,m,base_re,base_im,value_re,value_im\n";
    for (const Json& row : rows) {
        std::string iname = "{";
        bool first = true;
        for (const Json& v : row.at("I")) {
            if (!first) iname += ";";
            iname += std::to_string(v.get<int>());
            first = false;
        }
        iname += "}";
        csv << iname << "," << format_double(row.at("m").get<double>()) << ","
            << format_double(row.at("base_w2")[0].get<double>()) << ","
            << format_double(row.at("base_w2")[1].get<double>()) << ","
            << format_double(row.at("value")[0].get<double>()) << ","
            << format_double(row.at("value")[1].get<double>()) << "\n";
    }
    return csv.str();
}

// ---------------------------------------------------------------------------
// fourier-expand command
// ---------------------------------------------------------------------------

void run_fourier_expand(const Json& params, const RunOptions& opts, CheckAccumulator& acc,
                        Json& report, std::vector<Artifact>& artifacts, Json& tolerances) {
    const int n = get_int(params, "n", 2);
    const int r = get_int(params, "r", 0);
    const int k = get_int(params, "k", 2);
    require(n >= 2, ErrorCode::Schema, "fourier analysis requires n >= 2");
    const CuspData cusp = cusp_from_json(params.contains("cusp") ? params.at("cusp")
                                                                 : Json{{"lambda0", 1.0},
                                                                        {"chi", 0.0},
                                                                        {"D", Json::array()}});
    require(cusp.r() == r, ErrorCode::Schema, "cusp D size must equal r");
    const int j_min = params.contains("window") ? params.at("window").at("j_min").get<int>() : -4;
    const int j_max = params.contains("window") ? params.at("window").at("j_max").get<int>() : 4;
    const int quad_points = get_int(params, "quad_points", 256);
    tolerances["quad_points"] = quad_points;

    const auto components = component_map(params, cusp, n, r, k);
    const auto bases = bases_from_params(params, n);

    Json rows = Json::array();
    for (const auto& [idx, fn] : components) {
        for (double m : frequency_lattice(cusp, idx, k, j_min, j_max)) {
            for (std::size_t b = 0; b < bases.size(); ++b) {
                const Complex value = fourier_coefficient(fn, m, bases[b], cusp, quad_points);
                const Complex c_rec = value * std::exp(-kTwoPi * m * bases[b].w(0));
                Json row;
                row["I"] = multi_index_to_json(idx);
                row["m"] = m;
                row["base_index"] = b;
                row["base"] = vector_to_json(bases[b].w);
                const Eigen::VectorXcd w2 = bases[b].w2();
                row["base_w2"] = w2.size() > 0 ? complex_to_json(w2(0))
                                               : Json::array({0.0, 0.0});
                row["value"] = complex_to_json(value);
                row["c_value"] = complex_to_json(c_rec);
                rows.push_back(std::move(row));
            }
        }
    }
    report["coefficients"] = rows;
    artifacts.push_back({"coefficients.csv", csv_of_coefficients(rows)});

    if (plots_of(params, opts)) {
        std::map<std::string, PlotSeries> by_index;
        for (const Json& row : rows) {
            if (row.at("base_index").get<std::size_t>() != 0) continue;
            std::string key = row.at("I").dump();
            auto& series = by_index[key];
            series.label = "I=" + key;
            series.stems = true;
            series.points.emplace_back(
                row.at("m").get<double>(),
                std::abs(Complex(row.at("value")[0].get<double>(),
                                 row.at("value")[1].get<double>())));
        }
        std::vector<PlotSeries> series;
        for (auto& [key, s] : by_index) series.push_back(std::move(s));
        PlotOptions po;
        po.title = "coefficient magnitudes at base 0";
        po.x_label = "m";
        po.y_label = "|c e^{2 pi m w1}|";
        artifacts.push_back({"coefficients.svg", render_svg(series, po)});
    }

    acc.add("coefficients_finite", true, 0.0, 0.0,
            Json{{"count", rows.size()}, {"bases", bases.size()}});
}

// ---------------------------------------------------------------------------
// koecher-check command
// ---------------------------------------------------------------------------

void run_koecher(const Json& params, const RunOptions& opts, CheckAccumulator& acc, Json& report,
                 Json& tolerances) {
    const int n = get_int(params, "n", 2);
    const int r = get_int(params, "r", 0);
    const int k = get_int(params, "k", 2);
    require(n >= 2, ErrorCode::Schema, "Koecher analysis requires n >= 2");
    const CuspData cusp = cusp_from_json(params.at("cusp"));
    require(cusp.r() == r, ErrorCode::Schema, "cusp D size must equal r");

    KoecherOptions kopts;
    kopts.j_min = params.contains("window") ? params.at("window").at("j_min").get<int>() : -8;
    kopts.j_max = params.contains("window") ? params.at("window").at("j_max").get<int>() : 8;
    kopts.quad_points = get_int(params, "quad_points", 256);
    kopts.tol = tol_of(params, opts, 1e-10);
    kopts.threads = opts.threads;
    tolerances["koecher"] = kopts.tol;

    const auto components = component_map(params, cusp, n, r, k);
    const auto bases = bases_from_params(params, n);

    const KoecherReport rep = koecher_check(components, cusp, k, bases, kopts);

    Json details;
    details["max_positive_magnitude"] = rep.max_positive_magnitude;
    if (rep.worst_positive) {
        details["offender"] = Json{{"I", multi_index_to_json(rep.worst_positive->i)},
                                   {"m", rep.worst_positive->m},
                                   {"base_index", rep.worst_positive->base_index},
                                   {"magnitude", rep.worst_positive->magnitude}};
    }
    acc.add("no_positive_frequencies", rep.max_positive_magnitude < kopts.tol,
            rep.max_positive_magnitude, kopts.tol, details);

    Json const_checks = Json::array();
    bool const_ok = true;
    double worst_dev = 0.0;
    for (const auto& c : rep.constant_checks) {
        Json cj;
        cj["I"] = multi_index_to_json(c.i);
        cj["required"] = c.required;
        cj["max_deviation"] = c.max_deviation;
        cj["passed"] = c.passed;
        const_checks.push_back(std::move(cj));
        const_ok = const_ok && c.passed;
        if (c.required) worst_dev = std::max(worst_dev, c.max_deviation);
    }
    acc.add("constant_term_constant", const_ok, worst_dev, kopts.tol,
            Json{{"per_index", const_checks}});
    report["koecher"] = Json{{"passed", rep.passed}};

    if (params.contains("liouville")) {
        const Json& lj = params.at("liouville");
        std::string descriptor;
        const Evaluator c =
            evaluator_from_spec(lj.at("c"), n - 1, Realization::Ball, &descriptor);
        const double m = lj.at("m").get<double>();
        const double bound = lj.at("bound").get<double>();
        std::vector<double> radii;
        for (const Json& rj : lj.at("radii")) radii.push_back(rj.get<double>());
        const int directions = lj.contains("directions") ? lj.at("directions").get<int>() : 8;
        const LiouvilleReport lrep = liouville_bound_check(c, m, bound, radii, n - 1, directions);
        Json ldetails;
        ldetails["worst_excess"] = lrep.worst_excess;
        ldetails["c"] = descriptor;
        if (!lrep.failures.empty()) {
            const auto& f0 = lrep.failures.front();
            ldetails["first_failure"] = Json{{"radius", f0.radius},
                                             {"direction", f0.direction},
                                             {"lhs", f0.lhs},
                                             {"rhs", f0.rhs}};
        }
        acc.add("liouville_bound", lrep.passed, lrep.worst_excess, 0.0, ldetails);
    }
}

// ---------------------------------------------------------------------------
// satake-classify command
// ---------------------------------------------------------------------------

void run_satake(const Json& params, const RunOptions& opts, CheckAccumulator& acc, Json& report,
                std::vector<Artifact>& artifacts, Json& tolerances) {
    const int n = get_int(params, "n", 2);
    const int r = get_int(params, "r", 0);
    const int k = get_int(params, "k", 4);
    const int rho = get_int(params, "rho", 0);
    require(n >= 2, ErrorCode::Schema, "classifier requires n >= 2");
    const double x0 = get_double(params, "x0", 1.0);
    const int doublings = get_int(params, "doublings", 4);

    std::vector<double> s_values;
    if (params.contains("s_values")) {
        for (const Json& sv : params.at("s_values")) {
            if (sv.is_string() && (sv.get<std::string>() == "inf" || sv.get<std::string>() == "infinity"))
                s_values.push_back(std::numeric_limits<double>::infinity());
            else
                s_values.push_back(sv.get<double>());
        }
    } else {
        s_values = {1.0};
    }

    const Region region = region_from_json(params.at("region"));
    require(region.n() == n, ErrorCode::Schema, "region dimension disagrees with n");

    const MultiIndex idx = params.contains("odd_index")
                               ? multi_index_from_json(params.at("odd_index"), r)
                               : MultiIndex::empty();
    require(idx.cardinality() == rho, ErrorCode::Schema, "|odd_index| must equal rho");

    GrowthProfile profile;
    Evaluator q;
    std::optional<double> const_coeff_abs;
    std::vector<FourierMode> modes;
    if (params.contains("profile")) {
        const Json& pj = params.at("profile");
        profile.has_positive_frequency = pj.value("has_positive_frequency", false);
        profile.has_constant_term = pj.value("has_constant_term", false);
        profile.m0 = pj.value("M0", 0.0);
        profile.c_bound = pj.value("C_bound", 1.0);
    } else {
        const CuspData cusp = cusp_from_json(params.at("cusp"));
        require(cusp.r() == r, ErrorCode::Schema, "cusp D size must equal r");
        modes = modes_from_params(params, cusp, n, r, k);
        require(!modes.empty(), ErrorCode::Schema, "provide 'profile' or a 'modes' list");
        profile = profile_from_modes(modes, cusp, idx, k, region);
        const SuperFunction f = synthesize(modes, n, r, k);
        auto it = f.components().find(idx);
        require(it != f.components().end(), ErrorCode::Schema,
                "no mode carries the requested odd_index");
        q = it->second.fn;
        for (const auto& mode : modes)
            if (mode.i == idx && std::abs(mode.m) <= 1e-12) {
                const Complex c0 = mode.c(Eigen::VectorXcd::Zero(n - 1));
                const_coeff_abs = std::abs(c0);
            }
    }

    report["profile"] = Json{{"has_positive_frequency", profile.has_positive_frequency},
                             {"has_constant_term", profile.has_constant_term},
                             {"M0", profile.m0},
                             {"C_bound", profile.c_bound}};

    // classifier verdict (when its preconditions are satisfied)
    Json bounds = Json::object();
    std::string verdict_name;
    const bool classifiable =
        profile.has_positive_frequency ||
        (profile.has_constant_term ? k >= weight_threshold(n, rho) : profile.m0 < 0.0);
    if (classifiable) {
        const Classification cls = classify(profile, n, k, rho, s_values.front(), x0);
        verdict_name = to_string(cls.verdict);
        for (const auto& [sv, tv] : cls.bounds) {
            Json tvj;
            tvj["finite"] = tv.finite;
            if (tv.finite)
                tvj["bound"] = tv.bound;
            else
                tvj["reason"] = tv.reason;
            bounds[std::isinf(sv) ? "inf" : format_double(sv)] = std::move(tvj);
        }
        report["verdict"] = verdict_name;
        report["bounds"] = bounds;
    } else {
        report["verdict"] = nullptr;
        report["note"] =
            "constant term below the weight threshold: the classifier asserts nothing here";
    }

    // quadrature evidence per s plus the closed-form tail verdict
    Json norms = Json::array();
    const double stable_tol = 1e-6;
    tolerances["ls_norm_stable"] = stable_tol;
    for (double s : s_values) {
        // the slowest surviving frequency governs the tail: the constant term
        // (M0 = 0) when present, the top negative mode otherwise
        TailVerdict tv;
        if (profile.has_positive_frequency) {
            tv.finite = false;
            tv.reason = "positive frequency present";
        } else {
            tv = tail_dichotomy(profile.has_constant_term ? 0.0 : profile.m0, k, rho, n, s, x0);
        }
        Json entry;
        entry["s"] = std::isinf(s) ? Json("inf") : Json(s);
        entry["tail_finite"] = tv.finite;
        if (tv.finite)
            entry["tail_bound"] = tv.bound;
        else
            entry["tail_reason"] = tv.reason;
        if (q) {
            const LsNormResult norm = ls_norm(q, k, idx, s, region, doublings, opts.threads);
            entry["value"] = norm.value;
            entry["partials"] = norm.partials;
            entry["x_max_seq"] = norm.x_max_seq;
            entry["diagnostic"] = norm.diagnostic;
            const bool agree = tv.finite ? norm.diagnostic != LsNormDiagnostics::kGrowing
                                         : norm.diagnostic == LsNormDiagnostics::kGrowing;
            acc.add("dichotomy_agreement_s_" + (std::isinf(s) ? std::string("inf")
                                                              : format_double(s)),
                    agree, agree ? 0.0 : 1.0, 0.0,
                    Json{{"tail_finite", tv.finite}, {"diagnostic", norm.diagnostic}});
        }
        norms.push_back(std::move(entry));
    }
    report["norms"] = norms;
    report["s_values"] = params.contains("s_values") ? params.at("s_values") : Json::array({1});

    // S statistic: smallest sampled x where the strictly negative mode mass
    // drops below half the constant coefficient.
    if (const_coeff_abs && !modes.empty()) {
        Eigen::VectorXcd u_center(n - 1);
        for (int i = 0; i < n - 1; ++i)
            u_center(i) = Complex(0.5 * (region.u_box[i].re_lo + region.u_box[i].re_hi),
                                  0.5 * (region.u_box[i].im_lo + region.u_box[i].im_hi));
        double s_stat = -1.0;
        double x = region.x_min;
        const double x_end = region.x_max * std::exp2(doublings);
        while (x <= x_end) {
            double neg_mass = 0.0;
            for (const auto& mode : modes) {
                if (!(mode.i == idx) || mode.m > -1e-12) continue;
                neg_mass += std::abs(mode.c(u_center)) *
                            std::exp(kTwoPi * mode.m * (x + 0.5 * u_center.squaredNorm()));
            }
            if (neg_mass <= 0.5 * *const_coeff_abs) {
                s_stat = x;
                break;
            }
            x *= 1.25;
        }
        report["S_statistic"] = s_stat >= 0.0 ? Json(s_stat) : Json(nullptr);
    }

    if (plots_of(params, opts) && q) {
        std::vector<PlotSeries> series;
        for (const Json& entry : norms) {
            if (!entry.contains("partials")) continue;
            PlotSeries s;
            s.label = "s=" + entry.at("s").dump();
            const auto& xs = entry.at("x_max_seq");
            const auto& ps = entry.at("partials");
            for (std::size_t i = 0; i < ps.size(); ++i)
                s.points.emplace_back(xs[i].get<double>(), ps[i].get<double>());
            series.push_back(std::move(s));
        }
        PlotOptions po;
        po.title = "norm partials under doubling";
        po.x_label = "x_max";
        po.y_label = "partial value";
        po.log2_x = true;
        artifacts.push_back({"norm_partials.svg", render_svg(series, po)});
    }
}

// ---------------------------------------------------------------------------
// measure-check command
// ---------------------------------------------------------------------------

void run_measure_check(const Json& params, const RunOptions& opts, CheckAccumulator& acc,
                       Json& report, Json& tolerances) {
    const int n = get_int(params, "n", 2);
    const long long seed = seed_of(params, opts);
    const long long samples = params.contains("samples")
                                  ? params.at("samples").get<long long>()
                                  : 1000000;
    const double tol = tol_of(params, opts, 1e-3);
    tolerances["measure_invariance"] = tol;

    GroupElement g = params.contains("element")
                         ? group_element_from_json(params.at("element"))
                         : a_t(get_double(params, "t", 0.3), n, 0);
    require(g.realization() == Realization::Ball, ErrorCode::Schema,
            "measure check runs on the ball");
    require(is_member(g, 1e-8).ok, ErrorCode::NotMember, "element fails the membership check");

    Eigen::VectorXcd center = Eigen::VectorXcd::Zero(n);
    double half_width = 0.05;
    if (params.contains("box")) {
        center = parse_point(params.at("box").at("center"), n);
        half_width = params.at("box").at("half_width").get<double>();
    }
    const double pad = get_double(params, "pad", 0.02);

    // sanity: the closed box must sit inside the ball
    require(center.norm() + half_width * std::sqrt(2.0 * n) < 0.95, ErrorCode::Schema,
            "box reaches too close to the boundary");

    Rng rng(static_cast<std::uint64_t>(seed));
    const double box_vol = std::pow(2.0 * half_width, 2.0 * n);

    // direct mass of the box
    double mean_density = 0.0;
    for (long long i = 0; i < samples; ++i) {
        Eigen::VectorXcd z(n);
        for (int d = 0; d < n; ++d)
            z(d) = center(d) + Complex(rng.uniform(-half_width, half_width),
                                       rng.uniform(-half_width, half_width));
        mean_density += invariant_density(BallPoint{z});
    }
    const double mass_box = box_vol * mean_density / static_cast<double>(samples);

    // bounding box of the image from a deterministic boundary grid
    const int grid_steps = 6;
    Eigen::VectorXd lo = Eigen::VectorXd::Constant(2 * n, 1e30);
    Eigen::VectorXd hi = Eigen::VectorXd::Constant(2 * n, -1e30);
    std::vector<int> counter(2 * n, 0);
    while (true) {
        Eigen::VectorXcd z(n);
        for (int d = 0; d < n; ++d) {
            const double re = center(d).real() +
                              (-half_width + 2.0 * half_width * counter[2 * d] / grid_steps);
            const double im = center(d).imag() +
                              (-half_width + 2.0 * half_width * counter[2 * d + 1] / grid_steps);
            z(d) = Complex(re, im);
        }
        const Eigen::VectorXcd w = mobius_raw(g, z);
        for (int d = 0; d < n; ++d) {
            lo(2 * d) = std::min(lo(2 * d), w(d).real());
            hi(2 * d) = std::max(hi(2 * d), w(d).real());
            lo(2 * d + 1) = std::min(lo(2 * d + 1), w(d).imag());
            hi(2 * d + 1) = std::max(hi(2 * d + 1), w(d).imag());
        }
        int axis = 0;
        while (axis < 2 * n && ++counter[axis] > grid_steps) counter[axis++] = 0;
        if (axis == 2 * n) break;
    }
    for (int d = 0; d < 2 * n; ++d) {
        const double width = hi(d) - lo(d);
        lo(d) -= pad * width;
        hi(d) += pad * width;
    }

    double bbox_vol = 1.0;
    for (int d = 0; d < 2 * n; ++d) bbox_vol *= hi(d) - lo(d);

    // rejection sampling of the image region, weighted by the density
    const GroupElement ginv = inv(g);
    double image_sum = 0.0;
    long long accepted = 0;
    for (long long i = 0; i < samples; ++i) {
        Eigen::VectorXcd w(n);
        for (int d = 0; d < n; ++d)
            w(d) = Complex(rng.uniform(lo(2 * d), hi(2 * d)),
                           rng.uniform(lo(2 * d + 1), hi(2 * d + 1)));
        if (!in_ball(w)) continue;
        const Eigen::VectorXcd z = mobius_raw(ginv, w);
        bool inside = true;
        for (int d = 0; d < n && inside; ++d)
            inside = std::abs(z(d).real() - center(d).real()) <= half_width &&
                     std::abs(z(d).imag() - center(d).imag()) <= half_width;
        if (!inside) continue;
        ++accepted;
        image_sum += invariant_density(BallPoint{w});
    }
    const double mass_image = bbox_vol * image_sum / static_cast<double>(samples);

    const double rel = std::abs(mass_box - mass_image) / mass_box;
    report["measure"] = Json{{"mass_box", mass_box},
                             {"mass_image", mass_image},
                             {"relative_difference", rel},
                             {"samples", samples},
                             {"acceptance_fraction",
                              static_cast<double>(accepted) / static_cast<double>(samples)}};
    acc.add("measure_invariance", rel < tol, rel, tol);
}

} // namespace

std::string job_hash(const Json& job) {
    const std::string dump = job.dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

JobResult run_job(const Json& job, const RunOptions& opts) {
    JobResult result;
    Json report;
    report["tool"] = Json{{"name", "sbforms"}, {"version", sbf::kVersion}};
    report["job_hash"] = job_hash(job);
    report["threads"] = opts.threads;

    CheckAccumulator acc;
    Json tolerances = Json::object();
    try {
        require(job.is_object() && job.contains("command"), ErrorCode::Schema,
                "job must be an object with a 'command' field");
        const std::string command = job.at("command").get<std::string>();
        const Json params = job.contains("params") ? job.at("params") : Json::object();
        report["command"] = command;
        report["seed"] = seed_of(params, opts);

        if (command == "verify") {
            run_verify(params, opts, acc, tolerances);
        } else if (command == "fourier-expand") {
            run_fourier_expand(params, opts, acc, report, result.artifacts, tolerances);
        } else if (command == "koecher-check") {
            run_koecher(params, opts, acc, report, tolerances);
        } else if (command == "satake-classify") {
            run_satake(params, opts, acc, report, result.artifacts, tolerances);
        } else if (command == "measure-check") {
            run_measure_check(params, opts, acc, report, tolerances);
        } else {
            fail(ErrorCode::Schema, "unknown command '" + command + "'");
        }

        report["tolerances"] = tolerances;
        report["checks"] = acc.checks;
        report["passed"] = acc.all_passed;
        result.exit_code = acc.all_passed ? 0 : 1;
    } catch (const Error& e) {
        report["error"] = e.what();
        report["passed"] = false;
        switch (e.code()) {
            case ErrorCode::Schema:
            case ErrorCode::InvalidArgument:
            case ErrorCode::Dimension:
                result.exit_code = 2;
                break;
            default:
                result.exit_code = 3;
        }
    } catch (const Json::exception& e) {
        // missing/ill-typed fields surface as schema violations
        report["error"] = e.what();
        report["passed"] = false;
        result.exit_code = 2;
    } catch (const std::exception& e) {
        report["error"] = e.what();
        report["passed"] = false;
        result.exit_code = 3;
    }

    result.report = std::move(report);
    result.artifacts.insert(result.artifacts.begin(),
                            Artifact{"report.json", result.report.dump(2) + "\n"});
    return result;
}

JobResult run_job_text(const std::string& job_text, const RunOptions& opts) {
    Json job = Json::parse(job_text, nullptr, false);
    if (job.is_discarded()) {
        JobResult result;
        result.exit_code = 2;
        result.report = Json{{"error", "job file is not valid JSON"}, {"passed", false}};
        result.artifacts.push_back({"report.json", result.report.dump(2) + "\n"});
        return result;
    }
    return run_job(job, opts);
}

} // namespace sbf::jobs
