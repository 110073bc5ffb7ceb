#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>

#include "sbforms/domain.hpp"
#include "sbforms/errors.hpp"
#include "sbforms/rng.hpp"

namespace sbf {

// Block matrix element of G = sS(U(n,1) x U(r)) or of its conjugate R G R^-1
// acting on the half plane. g' = [[A, b], [c, d]] is the (n+1) x (n+1) body
// part, E the r x r odd part.
class GroupElement {
public:
    GroupElement(Eigen::MatrixXcd a, Eigen::VectorXcd b, Eigen::RowVectorXcd c, Complex d,
                 Eigen::MatrixXcd e, Realization realization);

    static GroupElement identity(int n, int r, Realization realization);
    static GroupElement from_full_matrix(const Eigen::MatrixXcd& g_prime, Eigen::MatrixXcd e,
                                         Realization realization);

    int n() const { return static_cast<int>(a_.rows()); }
    int r() const { return static_cast<int>(e_.rows()); }
    Realization realization() const { return realization_; }

    const Eigen::MatrixXcd& a() const { return a_; }
    const Eigen::VectorXcd& b() const { return b_; }
    const Eigen::RowVectorXcd& c() const { return c_; }
    Complex d() const { return d_; }
    const Eigen::MatrixXcd& e() const { return e_; }

    Eigen::MatrixXcd full_matrix() const; // (n+1) x (n+1) body block

private:
    Eigen::MatrixXcd a_;
    Eigen::VectorXcd b_;
    Eigen::RowVectorXcd c_;
    Complex d_;
    Eigen::MatrixXcd e_;
    Realization realization_;
};

struct MembershipReport {
    bool ok = false;
    double form_residual = 0.0;      // max |g'* J g' - J|
    double unitarity_residual = 0.0; // max |E* E - 1|
    double det_residual = 0.0;       // |det g' - det E|
};

// Verifies the defining conditions of G (HalfPlane elements are conjugated
// back through the Cayley matrix first). Residuals are max-abs entrywise.
MembershipReport is_member(const GroupElement& g, double tol = 1e-10);

GroupElement mul(const GroupElement& g, const GroupElement& h);
GroupElement inv(const GroupElement& g);

// One-parameter hyperbolic family (Ball realization) and its half-plane
// conjugate diag(e^t, 1, ..., 1, e^-t).
GroupElement a_t(double t, int n, int r);
GroupElement a_prime_t(double t, int n, int r);

// Heisenberg element n'_{lambda,u} (HalfPlane realization), upper triangular
// with top row (1, u*, i lambda + u*u/2).
GroupElement n_prime(double lambda, const Eigen::VectorXcd& u, int r = 0);

// Group law on Heisenberg parameters:
// (lambda,u)(mu,v) = (lambda + mu + Im(u*v), u + v).
std::pair<double, Eigen::VectorXcd> heisenberg_mul(double lambda, const Eigen::VectorXcd& u,
                                                   double mu, const Eigen::VectorXcd& v);

// The partial Cayley matrix in SL(n+1, C), orthogonal, mapping B onto H.
Eigen::MatrixXcd cayley_matrix(int n);

// Conjugation by the Cayley matrix, switching the realization tag.
GroupElement to_half_plane(const GroupElement& g_ball);
GroupElement to_ball(const GroupElement& g_half_plane);

// Moebius action z -> (Az + b)(cz + d)^-1. The raw form only guards the
// denominator; the checked form validates both points against the domain of
// the element's realization.
Eigen::VectorXcd mobius_raw(const GroupElement& g, const Eigen::VectorXcd& z);
BallPoint mobius(const GroupElement& g, const BallPoint& z);
HalfPlanePoint mobius(const GroupElement& g, const HalfPlanePoint& w);

// Cocycle j(g,z) = (cz + d)^-1, identical formula on both realizations.
Complex cocycle(const GroupElement& g, const Eigen::VectorXcd& z);

// j(R,z) = sqrt(2)/(1 - z_1) and j(R^-1,w) = sqrt(2)/(1 + w_1).
Complex cocycle_cayley(const Eigen::VectorXcd& z);
Complex cocycle_cayley_inv(const Eigen::VectorXcd& w);

// Element (eps * 1, E) of the centralizer Z(G'), with eps the principal
// (n+1)-th root of det E.
GroupElement center_element(const Eigen::MatrixXcd& e, int n);

// The half-plane element n'_{lambda0, 0} (eps 1, E) attached to cusp data:
// eps = e^{-2 pi i chi}, E = exp(2 pi i D). Requires eps^{n+1} = det E.
GroupElement twisted_cusp_element(double lambda0, double chi, const Eigen::VectorXd& d_diag,
                                  int n);

// Seeded random member of G (Ball realization): k1 a_t k2 with unitary
// factors, final phase fixed so that det g' = det E exactly.
GroupElement random_member(Rng& rng, int n, int r, double t_range = 1.0);

// Random unitary matrix from the QR factorization of a complex Gaussian.
Eigen::MatrixXcd random_unitary(Rng& rng, int size);

// Integer power by repeated multiplication; exponents k + |I| stay integral
// so no branch cuts arise.
Complex int_pow(Complex base, int exponent);

} // namespace sbf
