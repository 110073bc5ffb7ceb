#include "sbforms/domain.hpp"

#include <cmath>

namespace sbf {

double ball_margin(const Eigen::VectorXcd& z) { return 1.0 - z.squaredNorm(); }

double half_plane_margin(const Eigen::VectorXcd& w) {
    const double w2sq = w.tail(w.size() - 1).squaredNorm();
    return 2.0 * w(0).real() - w2sq;
}

bool in_ball(const Eigen::VectorXcd& z, double slack) { return ball_margin(z) > -slack; }

bool in_half_plane(const Eigen::VectorXcd& w, double slack) {
    return w.size() >= 1 && half_plane_margin(w) > -slack;
}

BallPoint BallPoint::checked(const Eigen::VectorXcd& z) {
    require(z.size() >= 1, ErrorCode::Dimension, "ball point needs dimension >= 1");
    require(ball_margin(z) > 0.0, ErrorCode::Domain, "point not strictly inside the unit ball");
    return BallPoint{z};
}

HalfPlanePoint HalfPlanePoint::checked(const Eigen::VectorXcd& w) {
    require(w.size() >= 1, ErrorCode::Dimension, "half-plane point needs dimension >= 1");
    require(half_plane_margin(w) > 0.0, ErrorCode::Domain,
            "point not strictly inside the half plane");
    return HalfPlanePoint{w};
}

Complex delta(const Eigen::VectorXcd& z, const Eigen::VectorXcd& w) {
    require(z.size() == w.size(), ErrorCode::Dimension, "mismatched point dimensions");
    return Complex(1.0, 0.0) - w.dot(z); // Eigen dot conjugates the first argument
}

Complex delta_h(const Eigen::VectorXcd& z, const Eigen::VectorXcd& w) {
    require(z.size() == w.size() && z.size() >= 1, ErrorCode::Dimension,
            "mismatched point dimensions");
    const auto z2 = z.tail(z.size() - 1);
    const auto w2 = w.tail(w.size() - 1);
    return z(0) + std::conj(w(0)) - w2.dot(z2);
}

double invariant_density(const BallPoint& p) {
    const double d = ball_margin(p.z);
    require(d > 0.0, ErrorCode::Domain, "density undefined on the boundary");
    return std::pow(d, -(static_cast<double>(p.n()) + 1.0));
}

double invariant_density(const HalfPlanePoint& p) {
    const double d = half_plane_margin(p.w);
    require(d > 0.0, ErrorCode::Domain, "density undefined on the boundary");
    return std::pow(d, -(static_cast<double>(p.n()) + 1.0));
}

Eigen::VectorXcd cayley_point_raw(const Eigen::VectorXcd& z) {
    const Complex den = Complex(1.0, 0.0) - z(0);
    require(den != Complex(0.0, 0.0), ErrorCode::Pole, "Cayley pole at z_1 = 1");
    Eigen::VectorXcd w(z.size());
    w(0) = (Complex(1.0, 0.0) + z(0)) / den;
    w.tail(z.size() - 1) = std::sqrt(2.0) * z.tail(z.size() - 1) / den;
    return w;
}

Eigen::VectorXcd cayley_point_inv_raw(const Eigen::VectorXcd& w) {
    const Complex den = Complex(1.0, 0.0) + w(0);
    require(den != Complex(0.0, 0.0), ErrorCode::Pole, "inverse Cayley pole at w_1 = -1");
    Eigen::VectorXcd z(w.size());
    z(0) = (w(0) - Complex(1.0, 0.0)) / den;
    z.tail(w.size() - 1) = std::sqrt(2.0) * w.tail(w.size() - 1) / den;
    return z;
}

HalfPlanePoint cayley_point(const BallPoint& z) {
    return HalfPlanePoint::checked(cayley_point_raw(z.z));
}

BallPoint cayley_point_inv(const HalfPlanePoint& w) {
    return BallPoint::checked(cayley_point_inv_raw(w.w));
}

Eigen::VectorXcd psi(double x, double y, const Eigen::VectorXcd& u) {
    require(x > 0.0, ErrorCode::Domain, "psi requires x > 0");
    Eigen::VectorXcd w(u.size() + 1);
    w(0) = Complex(x + 0.5 * u.squaredNorm(), y);
    w.tail(u.size()) = u;
    return w;
}

PsiCoords psi_inv(const Eigen::VectorXcd& w) {
    PsiCoords c;
    c.u = w.tail(w.size() - 1);
    c.x = w(0).real() - 0.5 * c.u.squaredNorm();
    c.y = w(0).imag();
    require(c.x > 0.0, ErrorCode::Domain, "point outside the psi chart (x <= 0)");
    return c;
}

void Region::validate() const {
    require(x_min > 0.0, ErrorCode::InvalidArgument, "region requires x_min > 0");
    require(x_max > x_min, ErrorCode::InvalidArgument, "region requires x_max > x_min");
    require(y_max > y_min, ErrorCode::InvalidArgument, "region requires y_max > y_min");
    for (const auto& ui : u_box) {
        require(ui.re_hi > ui.re_lo && ui.im_hi > ui.im_lo, ErrorCode::InvalidArgument,
                "region u-box intervals must be nonempty");
    }
    require(grid.size() == 2 + 2 * u_box.size(), ErrorCode::InvalidArgument,
            "region grid must list x, y and per-u-axis resolutions");
    for (int g : grid)
        require(g >= 2, ErrorCode::InvalidArgument, "grid resolutions must be >= 2");
}

double Region::transverse_volume() const {
    double v = y_max - y_min;
    for (const auto& ui : u_box) v *= (ui.re_hi - ui.re_lo) * (ui.im_hi - ui.im_lo);
    return v;
}

Eigen::VectorXcd random_ball_vector(Rng& rng, int n, double radius_cap) {
    require(n >= 1, ErrorCode::InvalidArgument, "n >= 1 required");
    while (true) {
        Eigen::VectorXcd z(n);
        for (int i = 0; i < n; ++i) z(i) = Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
        if (z.norm() < radius_cap) return z;
    }
}

Eigen::VectorXcd random_half_plane_vector(Rng& rng, int n) {
    require(n >= 1, ErrorCode::InvalidArgument, "n >= 1 required");
    Eigen::VectorXcd u(n - 1);
    for (int i = 0; i < n - 1; ++i) u(i) = Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    const double x = rng.uniform(0.2, 3.0);
    const double y = rng.uniform(-2.0, 2.0);
    return psi(x, y, u);
}

} // namespace sbf
