// Acceptance suite: runs every criterion at its stated tolerance and prints
// one pass/fail line per criterion. Exit code counts the failures.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <sbforms/jobs.hpp>
#include <sbforms/json_io.hpp>
#include <sbforms/satake.hpp>

#include "oracles.hpp"

using namespace sbf;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

struct Outcome {
    bool passed = true;
    std::string detail;

    void check(bool ok, const std::string& what) {
        if (!ok) {
            passed = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

MultiIndex mi(std::initializer_list<int> indices, int r) {
    return MultiIndex::from_indices(std::vector<int>(indices), r);
}

// --- criterion 1: identity suite -------------------------------------------

Outcome criterion_identity_suite() {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    const int n = 2, r = 2;
    Rng rng(20260810);
    double worst_cocycle = 0.0, worst_delta = 0.0, worst_jacobian = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const GroupElement g = random_member(rng, n, r);
        const GroupElement h = random_member(rng, n, r);
        const Eigen::VectorXcd z = random_ball_vector(rng, n);
        const Eigen::VectorXcd w = random_ball_vector(rng, n);

        worst_cocycle = std::max(
            worst_cocycle,
            std::abs(cocycle(mul(g, h), z) - cocycle(g, mobius_raw(h, z)) * cocycle(h, z)));
        worst_delta =
            std::max(worst_delta, std::abs(delta(mobius_raw(g, z), mobius_raw(g, w)) -
                                           delta(z, w) * cocycle(g, z) *
                                               std::conj(cocycle(g, w))));

        // central finite differences, step 1e-5
        Eigen::MatrixXcd jac(n, n);
        for (int c = 0; c < n; ++c) {
            Eigen::VectorXcd zp = z, zm = z;
            zp(c) += 1e-5;
            zm(c) -= 1e-5;
            jac.col(c) = (mobius_raw(g, zp) - mobius_raw(g, zm)) / 2e-5;
        }
        const double exact = std::pow(std::abs(cocycle(g, z)), n + 1);
        worst_jacobian =
            std::max(worst_jacobian, std::abs(std::abs(jac.determinant()) - exact) / exact);
    }
    out.check(worst_cocycle < 1e-10, "cocycle law residual " + std::to_string(worst_cocycle));
    out.check(worst_delta < 1e-10, "delta transform residual " + std::to_string(worst_delta));
    out.check(worst_jacobian < 1e-6, "jacobian residual " + std::to_string(worst_jacobian));

    double worst_heis = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        Eigen::VectorXcd u(n - 1), v(n - 1);
        for (int i = 0; i < n - 1; ++i) {
            u(i) = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
            v(i) = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
        }
        const double lam = rng.uniform(-2, 2), mu = rng.uniform(-2, 2);
        const auto [ls, us] = heisenberg_mul(lam, u, mu, v);
        worst_heis = std::max(worst_heis,
                              (mul(n_prime(lam, u), n_prime(mu, v)).full_matrix() -
                               n_prime(ls, us).full_matrix())
                                  .cwiseAbs()
                                  .maxCoeff());
    }
    out.check(worst_heis < 1e-12, "heisenberg residual " + std::to_string(worst_heis));

    double worst_at = 0.0;
    for (double t = -2.0; t <= 2.0 + 1e-9; t += 0.25) {
        worst_at = std::max(worst_at, (to_half_plane(a_t(t, n, r)).full_matrix() -
                                       a_prime_t(t, n, r).full_matrix())
                                          .cwiseAbs()
                                          .maxCoeff());
    }
    out.check(worst_at < 1e-12, "a_t conjugation residual " + std::to_string(worst_at));

    const double elapsed = seconds_since(t0);
    out.check(elapsed < 10.0, "runtime " + std::to_string(elapsed) + "s exceeds 10s");
    out.detail = out.detail.empty()
                     ? "max residuals: cocycle " + std::to_string(worst_cocycle) +
                           ", jacobian " + std::to_string(worst_jacobian)
                     : out.detail;
    return out;
}

// --- criterion 2: cayley suite ----------------------------------------------

Outcome criterion_cayley_suite() {
    Outcome out;
    const int n = 2, r = 2, k = 3;
    Rng rng(271828);

    double worst_rt = 0.0;
    for (int i = 0; i < 100; ++i) {
        const Eigen::VectorXcd z = random_ball_vector(rng, n);
        worst_rt = std::max(
            worst_rt, (cayley_point_inv_raw(cayley_point_raw(z)) - z).cwiseAbs().maxCoeff());
    }
    out.check(worst_rt < 1e-12, "roundtrip " + std::to_string(worst_rt));

    double worst_psi = 0.0;
    for (int i = 0; i < 100; ++i) {
        Eigen::VectorXcd u(n - 1);
        for (int c = 0; c < n - 1; ++c) u(c) = rng.complex_gaussian();
        const double x = rng.uniform(0.05, 4.0), y = rng.uniform(-3.0, 3.0);
        const Eigen::VectorXcd w = psi(x, y, u);
        worst_psi = std::max(worst_psi, std::abs(delta_h(w, w) - Complex(2.0 * x, 0.0)));
    }
    out.check(worst_psi < 1e-12, "psi delta " + std::to_string(worst_psi));

    SuperFunction f(n, r, k, Realization::Ball);
    f.add_component(
        MultiIndex::empty(),
        [](const Eigen::VectorXcd& z) { return Complex(1.0, 0.0) + 0.4 * z(0); }, "even");
    f.add_component(
        mi({1}, r), [](const Eigen::VectorXcd& z) { return z(1); }, "odd1");
    f.add_component(
        mi({1, 2}, r), [](const Eigen::VectorXcd& z) { return 0.2 - z(0); }, "odd12");
    const SuperFunction round = slash_cayley(slash_cayley_inv(f));
    double worst_slash_rt = 0.0;
    for (int i = 0; i < 100; ++i) {
        const Eigen::VectorXcd p = random_ball_vector(rng, n);
        const GrassmannVector a = f.eval_raw(p);
        const GrassmannVector b = round.eval_raw(p);
        for (const auto& [idx, c] : a.coeffs())
            worst_slash_rt = std::max(worst_slash_rt, std::abs(c - b.coeff(idx)));
    }
    out.check(worst_slash_rt < 1e-12, "slash roundtrip " + std::to_string(worst_slash_rt));

    SuperFunction q(n, r, k, Realization::HalfPlane);
    q.add_component(
        MultiIndex::empty(),
        [](const Eigen::VectorXcd& w) { return std::exp(-kTwoPi * w(0)); }, "decay");
    q.add_component(
        mi({2}, r), [](const Eigen::VectorXcd& w) { return w(1) * std::exp(-w(0)); }, "odd");
    double worst_square = 0.0;
    for (int i = 0; i < 40; ++i) {
        const GroupElement g = random_member(rng, n, r, 0.6);
        const Eigen::VectorXcd z = random_ball_vector(rng, n, 0.6);
        const GrassmannVector lhs = slash_cayley(slash(q, to_half_plane(g))).eval_raw(z);
        const GrassmannVector rhs = slash(slash_cayley(q), g).eval_raw(z);
        for (const auto& [idx, c] : rhs.coeffs())
            worst_square = std::max(worst_square, std::abs(c - lhs.coeff(idx)));
    }
    out.check(worst_square < 1e-10, "commuting square " + std::to_string(worst_square));

    if (out.passed)
        out.detail = "roundtrip " + std::to_string(worst_rt) + ", square " +
                     std::to_string(worst_square);
    return out;
}

// --- criterion 3: fourier suite ----------------------------------------------

Outcome criterion_fourier_suite() {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    const int n = 2, r = 2, k = 3;
    CuspData cusp;
    cusp.lambda0 = 2.0;
    cusp.chi = 0.25;
    cusp.d_diag = Eigen::VectorXd(2);
    cusp.d_diag << 0.25, 0.5;

    struct Spec {
        MultiIndex i;
        int j;
        Complex coeff;
    };
    const std::vector<Spec> specs = {
        {mi({}, r), -1, Complex(0.7, 0.1)},      {mi({}, r), -3, Complex(-0.2, 0.4)},
        {mi({1}, r), -2, Complex(1.1, 0.0)},     {mi({2}, r), -1, Complex(0.0, 0.9)},
        {mi({1, 2}, r), -2, Complex(0.5, -0.5)},
    };
    std::vector<FourierMode> modes;
    for (const auto& s : specs)
        modes.push_back(make_mode(
            cusp, s.i, k, s.j, [c = s.coeff](const Eigen::VectorXcd&) { return c; }, "m"));
    const SuperFunction q = synthesize(modes, n, r, k);

    Eigen::VectorXcd base_vec(2);
    base_vec << Complex(0.9, 0.1), Complex(0.25, -0.15);
    base_vec(0) += Complex(0.5 * std::norm(base_vec(1)), 0.0);
    const HalfPlanePoint base = HalfPlanePoint::checked(base_vec);

    double worst_rel = 0.0, worst_off = 0.0;
    for (std::size_t s = 0; s < specs.size(); ++s) {
        const auto& fn = q.components().at(specs[s].i).fn;
        const Complex got = fourier_coefficient(fn, modes[s].m, base, cusp, 1024);
        const Complex expected = specs[s].coeff * std::exp(kTwoPi * modes[s].m * base.w(0));
        worst_rel = std::max(worst_rel, std::abs(got - expected) / std::abs(expected));
    }
    out.check(worst_rel < 1e-10, "recovery rel error " + std::to_string(worst_rel));

    for (const auto& [idx, comp] : q.components()) {
        for (double m : frequency_lattice(cusp, idx, k, -5, 5)) {
            bool used = false;
            for (std::size_t s = 0; s < specs.size(); ++s)
                used |= specs[s].i == idx && std::abs(modes[s].m - m) < 1e-12;
            if (used) continue;
            worst_off = std::max(
                worst_off, std::abs(fourier_coefficient(comp.fn, m, base, cusp, 1024)));
        }
    }
    out.check(worst_off < 1e-10, "off-support coefficient " + std::to_string(worst_off));

    const double elapsed = seconds_since(t0);
    out.check(elapsed < 5.0, "runtime " + std::to_string(elapsed) + "s exceeds 5s");
    if (out.passed)
        out.detail = "recovery " + std::to_string(worst_rel) + ", off-support " +
                     std::to_string(worst_off);
    return out;
}

// --- criterion 4: koecher suite -----------------------------------------------

Outcome criterion_koecher_suite() {
    Outcome out;
    const int n = 2, r = 0, k = 2;
    CuspData cusp;
    cusp.lambda0 = 1.0;
    cusp.chi = 0.0;
    cusp.d_diag = Eigen::VectorXd::Zero(0);

    auto bases = std::vector<HalfPlanePoint>{};
    for (double w2re : {0.0, 0.35}) {
        Eigen::VectorXcd w(2);
        w(1) = Complex(w2re, 0.1);
        w(0) = Complex(1.0 + 0.5 * std::norm(w(1)), 0.0);
        bases.push_back(HalfPlanePoint::checked(w));
    }
    KoecherOptions opts;
    opts.j_min = -4;
    opts.j_max = 4;
    opts.quad_points = 256;
    opts.tol = 1e-10;

    std::vector<FourierMode> good;
    good.push_back(make_mode(
        cusp, mi({}, r), k, -1, [](const Eigen::VectorXcd&) { return Complex(1.0, 0.0); },
        "a"));
    good.push_back(make_mode(
        cusp, mi({}, r), k, -2, [](const Eigen::VectorXcd& u) { return u(0); }, "b"));
    const SuperFunction q_good = synthesize(good, n, r, k);
    std::map<MultiIndex, Evaluator> cg;
    for (const auto& [idx, c] : q_good.components()) cg[idx] = c.fn;
    const KoecherReport good_rep = koecher_check(cg, cusp, k, bases, opts);
    out.check(good_rep.passed, "negative-support fixture failed");

    auto bad = good;
    bad.push_back(make_mode(
        cusp, mi({}, r), k, +1, [](const Eigen::VectorXcd&) { return Complex(0.4, 0.0); },
        "inj"));
    const SuperFunction q_bad = synthesize(bad, n, r, k);
    std::map<MultiIndex, Evaluator> cb;
    for (const auto& [idx, c] : q_bad.components()) cb[idx] = c.fn;
    const KoecherReport bad_rep = koecher_check(cb, cusp, k, bases, opts);
    out.check(!bad_rep.passed, "injected +1 mode not detected");
    out.check(bad_rep.worst_positive && std::abs(bad_rep.worst_positive->m - 1.0) < 1e-12,
              "offending mode misidentified");

    // Liouville bound checks, exactly as hand-computed
    const Evaluator one = [](const Eigen::VectorXcd&) { return Complex(1.0, 0.0); };
    out.check(liouville_bound_check(one, -1.0, 1.0, {0.5, 1.0, 2.0}, n - 1).passed,
              "m<0 constant should pass");
    const LiouvilleReport lrep = liouville_bound_check(one, 1.0, 1.0, {2.0}, n - 1);
    out.check(!lrep.passed, "m=+1 at radius 2 should fail");
    const double margin = 1.0 - std::exp(-4.0 * M_PI);
    out.check(std::abs(lrep.worst_excess - margin) < 1e-12,
              "margin differs from 1 - e^{-4 pi}");
    if (out.passed) out.detail = "margin " + std::to_string(margin);
    return out;
}

// --- criterion 5: satake dichotomy anchor ---------------------------------------

Outcome criterion_satake_anchor() {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    const int n = 2, rho = 0;
    const double s = 1.0;

    Region region;
    region.x_min = 1.0;
    region.x_max = 2.0;
    region.y_min = -0.5;
    region.y_max = 0.5;
    region.u_box = {{-0.25, 0.25, -0.25, 0.25}};
    region.grid = {1024, 2, 2, 2};

    const Evaluator constant = [](const Eigen::VectorXcd&) { return Complex(1.0, 0.0); };

    // k = 2n: alpha = -1, divergent; partials must keep growing over 4 doublings
    const TailVerdict tv4 = tail_dichotomy(0.0, 4, rho, n, s, region.x_min);
    out.check(!tv4.finite, "k=4 tail should be Infinite");
    const LsNormResult n4 = ls_norm(constant, 4, MultiIndex::empty(), s, region, 4);
    out.check(n4.diagnostic == LsNormDiagnostics::kGrowing, "k=4 diagnostic not growing");
    for (std::size_t i = 1; i < n4.partials.size(); ++i)
        out.check((n4.partials[i] - n4.partials[i - 1]) / n4.partials[i] > 1e-3,
                  "k=4 doubling " + std::to_string(i) + " stabilized unexpectedly");

    // k = 3: alpha = -1.5, convergent; stable to 1e-6 across the last doubling
    const TailVerdict tv3 = tail_dichotomy(0.0, 3, rho, n, s, region.x_min);
    out.check(tv3.finite, "k=3 tail should be Finite");
    const LsNormResult n3 = ls_norm(constant, 3, MultiIndex::empty(), s, region, 40);
    out.check(n3.diagnostic == LsNormDiagnostics::kStable, "k=3 diagnostic not stable");
    const double last = n3.partials.back();
    const double prev = n3.partials[n3.partials.size() - 2];
    out.check(std::abs(last - prev) / last < 1e-6, "k=3 last doubling above 1e-6");

    const double elapsed = seconds_since(t0);
    out.check(elapsed < 30.0, "runtime " + std::to_string(elapsed) + "s exceeds 30s");
    if (out.passed)
        out.detail = "k=4 grows (last rel inc " +
                     std::to_string((n4.partials.back() -
                                     n4.partials[n4.partials.size() - 2]) /
                                    n4.partials.back()) +
                     "), k=3 stable";
    return out;
}

// --- criterion 6: decaying-mode norm anchor --------------------------------------

Outcome criterion_norm_anchor() {
    Outcome out;
    const int n = 2, k = 4;
    const double s = 1.0;

    Region region;
    region.x_min = 1.0;
    region.x_max = 4.0;
    region.y_min = -0.5;
    region.y_max = 0.5;
    region.u_box = {{-0.25, 0.25, -0.25, 0.25}};
    region.grid = {2048, 2, 64, 64};

    const Evaluator q = [](const Eigen::VectorXcd& w) { return std::exp(-kTwoPi * w(0)); };
    const LsNormResult norm = ls_norm(q, k, MultiIndex::empty(), s, region, 0);

    // separated 1-D oracle: |q(Psi)| x^{-1} = [e^{-2 pi x}/x] [1] [e^{-pi a^2}] [e^{-pi b^2}]
    const double ox = oracles::adaptive_simpson(
        [](double x) { return std::exp(-kTwoPi * x) / x; }, region.x_min, region.x_max);
    const double og = oracles::adaptive_simpson(
        [](double t) { return std::exp(-M_PI * t * t); }, -0.25, 0.25);
    const double oracle = ox * (region.y_max - region.y_min) * og * og;

    const double rel = std::abs(norm.value - oracle) / oracle;
    out.check(rel < 1e-4, "relative error " + std::to_string(rel));
    if (out.passed)
        out.detail = "ls_norm " + std::to_string(norm.value) + " vs oracle " +
                     std::to_string(oracle) + " (rel " + std::to_string(rel) + ")";
    return out;
}

// --- criterion 7: classifier matrix ------------------------------------------------

Outcome criterion_classifier_matrix() {
    Outcome out;
    Rng rng(987654);
    int seen_koecher = 0, seen_obstruction = 0, seen_cusp = 0, disagreements = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + static_cast<int>(rng.bits() % 2);
        const int rho = static_cast<int>(rng.bits() % 2);
        GrowthProfile profile;
        const int branch = static_cast<int>(rng.bits() % 3);
        int k;
        if (branch == 0) {
            profile.has_positive_frequency = true;
            k = weight_threshold(n, rho) + static_cast<int>(rng.bits() % 3);
        } else if (branch == 1) {
            profile.has_constant_term = true;
            k = weight_threshold(n, rho) + static_cast<int>(rng.bits() % 3);
        } else {
            profile.m0 = -rng.uniform(0.05, 2.0);
            profile.c_bound = rng.uniform(0.1, 3.0);
            k = weight_threshold(n, rho) + static_cast<int>(rng.bits() % 3);
        }
        const Classification cls = classify(profile, n, k, rho, 1.0);
        switch (cls.verdict) {
            case ClassifierVerdict::KoecherViolation: {
                ++seen_koecher;
                if (!profile.has_positive_frequency) ++disagreements;
                break;
            }
            case ClassifierVerdict::ConstantTermObstruction: {
                ++seen_obstruction;
                // every s must be non-integrable per the dichotomy
                for (double s : {1.0, 2.0, std::numeric_limits<double>::infinity()})
                    if (tail_dichotomy(0.0, k, rho, n, s, 1.0).finite) ++disagreements;
                break;
            }
            case ClassifierVerdict::CuspLike: {
                ++seen_cusp;
                for (const auto& [s, tv] : cls.bounds)
                    if (!tv.finite ||
                        !tail_dichotomy(profile.m0, k, rho, n, s, 1.0).finite)
                        ++disagreements;
                break;
            }
        }
    }
    out.check(seen_koecher > 0 && seen_obstruction > 0 && seen_cusp > 0,
              "not all three branches exercised");
    out.check(disagreements == 0, std::to_string(disagreements) + " disagreements");
    if (out.passed)
        out.detail = "branches: koecher " + std::to_string(seen_koecher) + ", obstruction " +
                     std::to_string(seen_obstruction) + ", cusp-like " +
                     std::to_string(seen_cusp);
    return out;
}

// --- criterion 8: determinism -------------------------------------------------------

Outcome criterion_determinism() {
    Outcome out;
    const nlohmann::json job{
        {"command", "verify"},
        {"params", {{"n", 2}, {"r", 2}, {"k", 3}, {"trials", 200}, {"seed", 31415}}}};
    const jobs::JobResult a = jobs::run_job(job);
    const jobs::JobResult b = jobs::run_job(job);
    out.check(a.exit_code == 0, "verify job failed");
    out.check(a.report.dump() == b.report.dump(), "reports differ between runs");
    out.check(!a.artifacts.empty() && a.artifacts.front().content == b.artifacts.front().content,
              "artifacts differ between runs");
    if (out.passed) out.detail = "verify report byte-identical across two seeded runs";
    return out;
}

} // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"identity suite (cocycle, delta, jacobian, heisenberg, a_t)",
         criterion_identity_suite},
        {"cayley suite (roundtrip, psi, slash transport, commuting square)",
         criterion_cayley_suite},
        {"fourier suite (twisted lattice recovery at 1024 points)",
         criterion_fourier_suite},
        {"koecher suite (vanishing, offender naming, liouville margins)",
         criterion_koecher_suite},
        {"satake dichotomy anchor (k = 2n vs k = 2n - 1)", criterion_satake_anchor},
        {"decaying-mode norm anchor (adaptive-quadrature oracle)", criterion_norm_anchor},
        {"classifier matrix (3 branches on 20 random profiles)",
         criterion_classifier_matrix},
        {"deterministic reports (byte-identical reruns)", criterion_determinism},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t_start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = criteria[i].second();
        } catch (const std::exception& e) {
            outcome.passed = false;
            outcome.detail = std::string("exception: ") + e.what();
        }
        const double elapsed = seconds_since(t_start);
        std::printf("[%s] criterion %zu: %s (%.2fs)%s%s\n", outcome.passed ? "PASS" : "FAIL",
                    i + 1, criteria[i].first.c_str(), elapsed,
                    outcome.detail.empty() ? "" : " - ", outcome.detail.c_str());
        if (!outcome.passed) ++failures;
    }
    std::printf("%d/%zu criteria passed in %.2fs\n",
                static_cast<int>(criteria.size()) - failures, criteria.size(),
                seconds_since(t0));
    return failures;
}
