#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sbforms/json_io.hpp>
#include <sbforms/superfunc.hpp>

using namespace sbf;

namespace {

MultiIndex mi(std::initializer_list<int> indices, int r) {
    return MultiIndex::from_indices(std::vector<int>(indices), r);
}

SuperFunction mixed_fixture(int n, int r, int k, Realization domain) {
    SuperFunction f(n, r, k, domain);
    f.add_component(
        MultiIndex::empty(),
        [](const Eigen::VectorXcd& z) { return Complex(1.0, 0.0) + 0.4 * z(0); }, "1+0.4z1");
    if (r >= 1)
        f.add_component(
            mi({1}, r), [](const Eigen::VectorXcd& z) { return z(0) * z(0); }, "z1^2");
    if (r >= 2) {
        f.add_component(
            mi({2}, r), [](const Eigen::VectorXcd& z) { return Complex(0.0, 1.0) * z(1); },
            "i z2");
        f.add_component(
            mi({1, 2}, r), [](const Eigen::VectorXcd& z) { return 0.3 - z(0); }, "0.3-z1");
    }
    return f;
}

} // namespace

TEST_CASE("eval places coefficients on the right monomials") {
    const SuperFunction one = constant_function(2, 2, 5, Realization::Ball, Complex(1.0, 0.0));
    const BallPoint p = BallPoint::checked(Eigen::VectorXcd::Zero(2));
    GrassmannVector v = eval(one, p);
    CHECK(v.coeff(MultiIndex::empty()) == Complex(1.0, 0.0));
    CHECK(v.coeffs().size() == 1);

    const SuperFunction odd =
        constant_function(2, 2, 5, Realization::Ball, Complex(1.0, 0.0), mi({1}, 2));
    v = eval(odd, p);
    CHECK(v.coeff(mi({1}, 2)) == Complex(1.0, 0.0));

    SuperFunction g(2, 0, 1, Realization::Ball);
    g.add_component(
        MultiIndex::empty(), [](const Eigen::VectorXcd& z) { return z(0); }, "z1");
    Eigen::VectorXcd half = Eigen::VectorXcd::Zero(2);
    half(0) = Complex(0.5, 0.0);
    CHECK(eval(g, BallPoint::checked(half)).coeff(MultiIndex::empty()) == Complex(0.5, 0.0));

    // wrong realization tag is rejected
    CHECK_THROWS_AS(eval(g, HalfPlanePoint::checked([&] {
                        Eigen::VectorXcd w = Eigen::VectorXcd::Zero(2);
                        w(0) = Complex(1.0, 0.0);
                        return w;
                    }())),
                    Error);
}

TEST_CASE("slash by the identity is the identity") {
    const SuperFunction f = mixed_fixture(2, 2, 3, Realization::Ball);
    const SuperFunction fs = slash(f, GroupElement::identity(2, 2, Realization::Ball));
    Rng rng(5);
    for (int t = 0; t < 20; ++t) {
        const Eigen::VectorXcd p = random_ball_vector(rng, 2);
        const GrassmannVector a = f.eval_raw(p);
        const GrassmannVector b = fs.eval_raw(p);
        for (const auto& [idx, c] : a.coeffs()) CHECK(std::abs(c - b.coeff(idx)) < 1e-15);
    }
}

TEST_CASE("slash of the constant by a_t produces the cocycle power") {
    const int k = 4;
    const SuperFunction one = constant_function(2, 0, k, Realization::Ball, Complex(1.0, 0.0));
    const SuperFunction moved = slash(one, a_t(0.9, 2, 0));
    const Complex at0 = moved.eval_raw(Eigen::VectorXcd::Zero(2)).coeff(MultiIndex::empty());
    CHECK(std::abs(at0 - Complex(std::pow(1.0 / std::cosh(0.9), k), 0.0)) < 1e-14);

    // lift of the constant: same number via f|_g(0)
    const GrassmannVector lifted = lift(one, a_t(0.9, 2, 0));
    CHECK(std::abs(lifted.coeff(MultiIndex::empty()) - at0) < 1e-15);
}

TEST_CASE("slash is a right representation") {
    const SuperFunction f = mixed_fixture(2, 2, 3, Realization::Ball);
    Rng rng(7);
    for (int t = 0; t < 20; ++t) {
        const GroupElement g = random_member(rng, 2, 2, 0.7);
        const GroupElement h = random_member(rng, 2, 2, 0.7);
        const Eigen::VectorXcd p = random_ball_vector(rng, 2, 0.6);
        const GrassmannVector lhs = slash(slash(f, g), h).eval_raw(p);
        const GrassmannVector rhs = slash(f, mul(g, h)).eval_raw(p);
        for (const auto& [idx, c] : rhs.coeffs()) CHECK(std::abs(c - lhs.coeff(idx)) < 1e-10);
    }
}

TEST_CASE("slash preserves degree support") {
    const SuperFunction f = mixed_fixture(2, 2, 3, Realization::Ball);
    Rng rng(11);
    const GroupElement g = random_member(rng, 2, 2);
    const SuperFunction fs = slash(f, g);
    std::multiset<int> before, after;
    for (const auto& [idx, comp] : f.components()) before.insert(idx.cardinality());
    for (const auto& [idx, comp] : fs.components()) after.insert(idx.cardinality());
    CHECK(before == after);

    // degree projection keeps only the requested degree
    const SuperFunction proj = fs.degree_project(1);
    for (const auto& [idx, comp] : proj.components()) CHECK(idx.cardinality() == 1);
    CHECK(proj.components().size() == 2);
}

TEST_CASE("slash rejects non-members") {
    const SuperFunction f = mixed_fixture(2, 1, 3, Realization::Ball);
    GroupElement bad(Eigen::MatrixXcd::Identity(2, 2) * 1.5, Eigen::VectorXcd::Zero(2),
                     Eigen::RowVectorXcd::Zero(2), Complex(1.0, 0.0),
                     Eigen::MatrixXcd::Identity(1, 1), Realization::Ball);
    CHECK_THROWS_AS(slash(f, bad), Error);
}

TEST_CASE("cayley transport composes to the identity") {
    for (int k : {0, 2}) {
        const SuperFunction f = mixed_fixture(2, 2, k, Realization::Ball);
        const SuperFunction round = slash_cayley(slash_cayley_inv(f));
        Rng rng(13);
        for (int t = 0; t < 30; ++t) {
            const Eigen::VectorXcd p = random_ball_vector(rng, 2);
            const GrassmannVector a = f.eval_raw(p);
            const GrassmannVector b = round.eval_raw(p);
            for (const auto& [idx, c] : a.coeffs()) CHECK(std::abs(c - b.coeff(idx)) < 1e-12);
        }
    }
}

TEST_CASE("commuting square with the group slash") {
    SuperFunction q(2, 1, 3, Realization::HalfPlane);
    q.add_component(
        MultiIndex::empty(),
        [](const Eigen::VectorXcd& w) { return std::exp(-2.0 * M_PI * w(0)); }, "decay");
    q.add_component(
        mi({1}, 1), [](const Eigen::VectorXcd& w) { return w(1) * std::exp(-w(0)); },
        "w2 decay");
    Rng rng(17);
    for (int t = 0; t < 15; ++t) {
        const GroupElement g = random_member(rng, 2, 1, 0.6);
        const Eigen::VectorXcd z = random_ball_vector(rng, 2, 0.6);
        const GrassmannVector lhs = slash_cayley(slash(q, to_half_plane(g))).eval_raw(z);
        const GrassmannVector rhs = slash(slash_cayley(q), g).eval_raw(z);
        for (const auto& [idx, c] : rhs.coeffs()) CHECK(std::abs(c - lhs.coeff(idx)) < 1e-10);
    }
}

TEST_CASE("amplitude values") {
    // constant of any weight is 1 at the center
    for (int k : {0, 3, 7}) {
        const SuperFunction one =
            constant_function(2, 2, k, Realization::Ball, Complex(1.0, 0.0));
        CHECK(amplitude(one, BallPoint::checked(Eigen::VectorXcd::Zero(2))) == 1.0);
    }

    // Delta^{k/2} factor: f = 1, k = 4, z = (1/2, 0) gives (3/4)^2
    const SuperFunction one = constant_function(2, 0, 4, Realization::Ball, Complex(1.0, 0.0));
    Eigen::VectorXcd half = Eigen::VectorXcd::Zero(2);
    half(0) = Complex(0.5, 0.0);
    CHECK(amplitude(one, BallPoint::checked(half)) == doctest::Approx(0.5625).epsilon(1e-15));

    // odd monomial at the center: Delta = 1 kills the exponent
    const SuperFunction odd =
        constant_function(2, 1, 3, Realization::Ball, Complex(1.0, 0.0), mi({1}, 1));
    CHECK(amplitude(odd, BallPoint::checked(Eigen::VectorXcd::Zero(2))) == 1.0);
}

TEST_CASE("amplitude is invariant under matched slash and moebius") {
    const SuperFunction f = mixed_fixture(2, 2, 3, Realization::Ball);
    Rng rng(19);
    for (int t = 0; t < 25; ++t) {
        const GroupElement g = random_member(rng, 2, 2, 0.7);
        const BallPoint p = BallPoint::checked(random_ball_vector(rng, 2, 0.6));
        CHECK(std::abs(amplitude(slash(f, g), p) - amplitude(f, mobius(g, p))) < 1e-10);
    }
}

TEST_CASE("lift basics and equivariance") {
    const SuperFunction one = constant_function(2, 1, 2, Realization::Ball, Complex(1.0, 0.0));
    GrassmannVector v = lift(one, GroupElement::identity(2, 1, Realization::Ball));
    CHECK(v.coeff(MultiIndex::empty()) == Complex(1.0, 0.0));

    const SuperFunction odd =
        constant_function(2, 1, 2, Realization::Ball, Complex(1.0, 0.0), mi({1}, 1));
    v = lift(odd, GroupElement::identity(2, 1, Realization::Ball));
    CHECK(v.coeff(mi({1}, 1)) == Complex(1.0, 0.0));

    // left translation by an invariance element of the fixture drops out
    const double lambda0 = 1.25;
    CuspData cusp;
    cusp.lambda0 = lambda0;
    cusp.d_diag = Eigen::VectorXd::Zero(0);
    cusp.chi = 0.0;
    std::vector<FourierMode> modes;
    modes.push_back(make_mode(
        cusp, MultiIndex::empty(), 2, -1,
        [](const Eigen::VectorXcd&) { return Complex(1.0, 0.0); }, "c"));
    modes.push_back(make_mode(
        cusp, MultiIndex::empty(), 2, -2,
        [](const Eigen::VectorXcd& u) { return u(0); }, "c2"));
    const SuperFunction q = synthesize(modes, 2, 0, 2);
    const SuperFunction f = slash_cayley(q);
    const GroupElement gamma =
        to_ball(n_prime(lambda0, Eigen::VectorXcd::Zero(1), 0));
    Rng rng(23);
    for (int t = 0; t < 10; ++t) {
        const GroupElement g = random_member(rng, 2, 0, 0.6);
        const GrassmannVector a = lift(f, mul(gamma, g), 1e-8);
        const GrassmannVector b = lift(f, g, 1e-8);
        CHECK(std::abs(a.coeff(MultiIndex::empty()) - b.coeff(MultiIndex::empty())) < 1e-10);
    }
}

TEST_CASE("super function JSON specs build and evaluate") {
    const Json spec = {
        {"n", 2},
        {"r", 1},
        {"weight", 3},
        {"domain", "ball"},
        {"components",
         Json::array({Json{{"kind", "constant"}, {"value", {1.0, 0.0}}},
                      Json{{"kind", "monomial"},
                           {"coeff", {0.5, 0.0}},
                           {"powers", {1, 0}},
                           {"odd_index", {1}}}})},
    };
    const SuperFunction f = super_function_from_json(spec);
    CHECK(f.weight() == 3);
    Eigen::VectorXcd p = Eigen::VectorXcd::Zero(2);
    p(0) = Complex(0.4, 0.2);
    const GrassmannVector v = f.eval_raw(p);
    CHECK(v.coeff(MultiIndex::empty()) == Complex(1.0, 0.0));
    CHECK(std::abs(v.coeff(MultiIndex::from_indices({1}, 1)) - 0.5 * p(0)) < 1e-15);

    // summing components with the same odd index
    Json spec2 = spec;
    spec2["components"].push_back(Json{{"kind", "constant"}, {"value", {0.0, 2.0}}});
    const SuperFunction f2 = super_function_from_json(spec2);
    CHECK(std::abs(f2.eval_raw(p).coeff(MultiIndex::empty()) - Complex(1.0, 2.0)) < 1e-15);

    CHECK_THROWS_AS(super_function_from_json(Json{{"n", 2}}), Error);
}
