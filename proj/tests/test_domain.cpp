#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sbforms/domain.hpp>
#include <sbforms/group.hpp>
#include <sbforms/json_io.hpp>

using namespace sbf;

namespace {

Eigen::VectorXcd vec2(Complex a, Complex b) {
    Eigen::VectorXcd v(2);
    v << a, b;
    return v;
}

} // namespace

TEST_CASE("delta basics") {
    CHECK(delta(Eigen::VectorXcd::Zero(2), Eigen::VectorXcd::Zero(2)) == Complex(1.0, 0.0));

    const auto z = vec2(Complex(0.5, 0.0), Complex(0.0, 0.0));
    CHECK(delta(z, z) == Complex(0.75, 0.0));

    // Delta(z,z) real in (0,1] on the closed ball, 1 only at the center
    Rng rng(3);
    for (int t = 0; t < 100; ++t) {
        const Eigen::VectorXcd p = random_ball_vector(rng, 2, 0.999);
        const Complex d = delta(p, p);
        CHECK(d.imag() == 0.0);
        CHECK(d.real() > 0.0);
        CHECK(d.real() <= 1.0);
    }
}

TEST_CASE("delta transformation law") {
    Rng rng(7);
    for (int t = 0; t < 200; ++t) {
        const GroupElement g = random_member(rng, 2, 1);
        const Eigen::VectorXcd z = random_ball_vector(rng, 2);
        const Eigen::VectorXcd w = random_ball_vector(rng, 2);
        const Complex lhs = delta(mobius_raw(g, z), mobius_raw(g, w));
        const Complex rhs = delta(z, w) * cocycle(g, z) * std::conj(cocycle(g, w));
        CHECK(std::abs(lhs - rhs) < 1e-10);
    }
}

TEST_CASE("delta_h values and consistency with the ball") {
    Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(2);
    e1(0) = Complex(1.0, 0.0);
    CHECK(delta_h(e1, e1) == Complex(2.0, 0.0));

    // Cayley image of (tanh t, 0) sits on the level 2 e^{2t}
    for (double t : {-1.0, -0.25, 0.5, 1.0}) {
        const auto z = vec2(Complex(std::tanh(t), 0.0), Complex(0.0, 0.0));
        const Eigen::VectorXcd w = cayley_point_raw(z);
        CHECK(std::abs(w(0) - Complex(std::exp(2.0 * t), 0.0)) < 1e-12);
        CHECK(std::abs(delta_h(w, w) - Complex(2.0 * std::exp(2.0 * t), 0.0)) < 1e-10);
    }

    // Delta'(z,w) = Delta(R^-1 z, R^-1 w) j(R^-1,z)^-1 conj(j(R^-1,w))^-1
    Rng rng(11);
    for (int t = 0; t < 100; ++t) {
        const Eigen::VectorXcd z = random_half_plane_vector(rng, 2);
        const Eigen::VectorXcd w = random_half_plane_vector(rng, 2);
        const Complex lhs = delta_h(z, w);
        const Complex rhs = delta(cayley_point_inv_raw(z), cayley_point_inv_raw(w)) /
                            (cocycle_cayley_inv(z) * std::conj(cocycle_cayley_inv(w)));
        CHECK(std::abs(lhs - rhs) < 1e-10);
    }
}

TEST_CASE("invariant density") {
    CHECK(invariant_density(BallPoint::checked(Eigen::VectorXcd::Zero(2))) == 1.0);

    Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(2);
    e1(0) = Complex(1.0, 0.0);
    CHECK(invariant_density(HalfPlanePoint::checked(e1)) == doctest::Approx(0.125));

    // boundary and exterior points are rejected
    CHECK_THROWS_AS(BallPoint::checked(e1), Error);
    Eigen::VectorXcd outside = Eigen::VectorXcd::Zero(2);
    outside(0) = Complex(-0.2, 0.0);
    CHECK_THROWS_AS(HalfPlanePoint::checked(outside), Error);
}

TEST_CASE("cayley point map") {
    // 0 -> e_1
    const Eigen::VectorXcd w0 = cayley_point_raw(Eigen::VectorXcd::Zero(2));
    CHECK(std::abs(w0(0) - Complex(1.0, 0.0)) == 0.0);
    CHECK(std::abs(w0(1)) == 0.0);

    Rng rng(13);
    for (int t = 0; t < 100; ++t) {
        const Eigen::VectorXcd z = random_ball_vector(rng, 3);
        const Eigen::VectorXcd w = cayley_point_raw(z);
        CHECK(in_half_plane(w));
        CHECK((cayley_point_inv_raw(w) - z).cwiseAbs().maxCoeff() < 1e-12);
    }

    // agreement with the Moebius action of the Cayley matrix
    const Eigen::MatrixXcd r = cayley_matrix(2);
    const GroupElement r_el = GroupElement::from_full_matrix(
        r, Eigen::MatrixXcd::Identity(0, 0), Realization::Ball);
    for (int t = 0; t < 20; ++t) {
        const Eigen::VectorXcd z = random_ball_vector(rng, 2);
        CHECK((mobius_raw(r_el, z) - cayley_point_raw(z)).cwiseAbs().maxCoeff() < 1e-13);
    }

    Eigen::VectorXcd pole = Eigen::VectorXcd::Zero(2);
    pole(0) = Complex(1.0, 0.0);
    CHECK_THROWS_AS(cayley_point_raw(pole), Error);
}

TEST_CASE("psi chart") {
    // origin fiber
    const Eigen::VectorXcd w = psi(1.0, 0.0, Eigen::VectorXcd::Zero(1));
    CHECK(std::abs(w(0) - Complex(1.0, 0.0)) == 0.0);

    // Delta' is 2x regardless of u and y
    Rng rng(17);
    for (int t = 0; t < 100; ++t) {
        Eigen::VectorXcd u(2);
        u << rng.complex_gaussian(), rng.complex_gaussian();
        const double x = rng.uniform(0.01, 5.0);
        const double y = rng.uniform(-4.0, 4.0);
        const Eigen::VectorXcd p = psi(x, y, u);
        CHECK(std::abs(delta_h(p, p) - Complex(2.0 * x, 0.0)) < 1e-12);
        const PsiCoords back = psi_inv(p);
        CHECK(std::abs(back.x - x) < 1e-12);
        CHECK(std::abs(back.y - y) < 1e-12);
        CHECK((back.u - u).cwiseAbs().maxCoeff() < 1e-12);
    }
    CHECK(std::abs(delta_h(psi(3.0, 5.0, Eigen::VectorXcd::Ones(1)),
                           psi(3.0, 5.0, Eigen::VectorXcd::Ones(1))) -
                   Complex(6.0, 0.0)) < 1e-12);

    CHECK_THROWS_AS(psi(-0.5, 0.0, Eigen::VectorXcd::Zero(1)), Error);
}

TEST_CASE("half-plane level sets under pseudo translations") {
    Rng rng(19);
    for (double t : {0.0, 0.5, -0.5, 1.0, -1.0}) {
        const auto z = vec2(Complex(std::tanh(t), 0.0), Complex(0.0, 0.0));
        const Eigen::VectorXcd base = cayley_point_raw(z); // R a_t 0
        for (int trial = 0; trial < 20; ++trial) {
            Eigen::VectorXcd u(1);
            u(0) = rng.complex_gaussian();
            const GroupElement np = n_prime(rng.uniform(-2, 2), u);
            const Eigen::VectorXcd moved = mobius_raw(np, base);
            CHECK(std::abs(delta_h(moved, moved) - Complex(2.0 * std::exp(2.0 * t), 0.0)) <
                  1e-10);
        }
    }
}

TEST_CASE("radial integrability probe") {
    // int_B Delta(z,z)^lambda dV converges iff lambda > -1; probe the induced
    // 1-D radial integrand (1-rho^2)^lambda rho^{2n-1} under truncation growth
    // mass added between truncation radii 1 - eps_hi and 1 - eps_lo
    auto shell_mass = [](double lambda, int n, double eps_hi, double eps_lo) {
        const int cells = 100000;
        const double a = 1.0 - eps_hi;
        const double b = 1.0 - eps_lo;
        const double h = (b - a) / cells;
        double acc = 0.0;
        for (int i = 0; i < cells; ++i) {
            const double rho = a + (i + 0.5) * h;
            acc += std::pow(1.0 - rho * rho, lambda) * std::pow(rho, 2.0 * n - 1.0) * h;
        }
        return acc;
    };
    const int n = 2;
    const std::vector<double> eps = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
    std::vector<double> div_inc, conv_inc;
    for (std::size_t i = 0; i + 1 < eps.size(); ++i) {
        div_inc.push_back(shell_mass(-1.0, n, eps[i], eps[i + 1]));
        conv_inc.push_back(shell_mass(-0.9, n, eps[i], eps[i + 1]));
    }
    // lambda = -1: every decade of truncation keeps adding the same log mass
    for (std::size_t i = 1; i < div_inc.size(); ++i)
        CHECK(div_inc[i] > 0.9 * div_inc[0]);
    // lambda = -0.9: increments decay geometrically (factor 10^-0.1 per decade)
    for (std::size_t i = 2; i < conv_inc.size(); ++i)
        CHECK(conv_inc[i] < 0.85 * conv_inc[i - 1]);
}

TEST_CASE("region validation and JSON round-trip") {
    Region region;
    region.x_min = 1.0;
    region.x_max = 2.0;
    region.y_min = -0.5;
    region.y_max = 0.5;
    region.u_box = {{-0.25, 0.25, -0.25, 0.25}};
    region.grid = {8, 4, 4, 4};
    region.validate();
    CHECK(region.n() == 2);
    CHECK(region.transverse_volume() == doctest::Approx(0.25));

    const Json j = region_to_json(region);
    const Region back = region_from_json(j);
    CHECK(region_to_json(back).dump() == j.dump());

    Region bad = region;
    bad.x_min = -1.0;
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = region;
    bad.grid = {1, 4, 4, 4};
    CHECK_THROWS_AS(bad.validate(), Error);
}
