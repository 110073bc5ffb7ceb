#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "sbforms/errors.hpp"
#include "sbforms/rng.hpp"

namespace sbf {

using Complex = std::complex<double>;

enum class Realization { Ball, HalfPlane };

// z*z < 1 (open unit ball in C^n)
bool in_ball(const Eigen::VectorXcd& z, double slack = 0.0);

// Re w_1 > (1/2) w_2* w_2 (generalized right half plane)
bool in_half_plane(const Eigen::VectorXcd& w, double slack = 0.0);

// Signed distance-like defect: positive inside, <= 0 on boundary/outside.
double ball_margin(const Eigen::VectorXcd& z);
double half_plane_margin(const Eigen::VectorXcd& w);

// Points validated at construction; the open domain is enforced strictly so
// every measure density stays finite.
struct BallPoint {
    Eigen::VectorXcd z;
    static BallPoint checked(const Eigen::VectorXcd& z);
    int n() const { return static_cast<int>(z.size()); }
};

struct HalfPlanePoint {
    Eigen::VectorXcd w;
    static HalfPlanePoint checked(const Eigen::VectorXcd& w);
    int n() const { return static_cast<int>(w.size()); }
    Complex w1() const { return w(0); }
    Eigen::VectorXcd w2() const { return w.tail(w.size() - 1); }
};

// Jordan triple determinant on the ball: 1 - w*z.
Complex delta(const Eigen::VectorXcd& z, const Eigen::VectorXcd& w);

// Half-plane Jordan triple determinant: z_1 + conj(w_1) - w_2* z_2.
Complex delta_h(const Eigen::VectorXcd& z, const Eigen::VectorXcd& w);

// Invariant measure density Delta(z,z)^-(n+1) resp. Delta'(w,w)^-(n+1).
double invariant_density(const BallPoint& p);
double invariant_density(const HalfPlanePoint& p);

// Cayley point map B -> H: w_1 = (1+z_1)/(1-z_1), w_2 = sqrt(2) z_2/(1-z_1),
// sending 0 to e_1 and e_1 to infinity. Raw versions skip domain validation.
Eigen::VectorXcd cayley_point_raw(const Eigen::VectorXcd& z);
Eigen::VectorXcd cayley_point_inv_raw(const Eigen::VectorXcd& w);
HalfPlanePoint cayley_point(const BallPoint& z);
BallPoint cayley_point_inv(const HalfPlanePoint& w);

// Cusp chart: Psi(x, y, u) = (x + u*u/2 + iy, u), a measure-preserving
// diffeomorphism with Delta'(Psi, Psi) = 2x exactly.
Eigen::VectorXcd psi(double x, double y, const Eigen::VectorXcd& u);
struct PsiCoords {
    double x;
    double y;
    Eigen::VectorXcd u;
};
PsiCoords psi_inv(const Eigen::VectorXcd& w);

// Integration box in Psi coordinates. Axis order: x, y, then for each of the
// n-1 complex u coordinates its real and imaginary part.
struct Region {
    double x_min = 1.0; // > 0
    double x_max = 2.0; // > x_min
    double y_min = 0.0;
    double y_max = 1.0;
    struct UInterval {
        double re_lo, re_hi, im_lo, im_hi;
    };
    std::vector<UInterval> u_box; // size n-1
    std::vector<int> grid;        // size 2 + 2*(n-1), each >= 2

    int n() const { return static_cast<int>(u_box.size()) + 1; }
    void validate() const;
    double transverse_volume() const; // measure of the (y, u) box
};

// Seeded samplers used by the verification suites.
Eigen::VectorXcd random_ball_vector(Rng& rng, int n, double radius_cap = 0.85);
Eigen::VectorXcd random_half_plane_vector(Rng& rng, int n);

} // namespace sbf
