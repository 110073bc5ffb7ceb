#include "sbforms/group.hpp"

#include <cmath>

namespace sbf {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

Eigen::MatrixXcd signature_form(int n) {
    Eigen::MatrixXcd j = Eigen::MatrixXcd::Identity(n + 1, n + 1);
    j(n, n) = Complex(-1.0, 0.0);
    return j;
}

double max_abs(const Eigen::MatrixXcd& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

} // namespace

GroupElement::GroupElement(Eigen::MatrixXcd a, Eigen::VectorXcd b, Eigen::RowVectorXcd c,
                           Complex d, Eigen::MatrixXcd e, Realization realization)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(d), e_(std::move(e)),
      realization_(realization) {
    require(a_.rows() == a_.cols(), ErrorCode::Dimension, "A block must be square");
    require(b_.size() == a_.rows() && c_.size() == a_.rows(), ErrorCode::Dimension,
            "b and c blocks must have length n");
    require(e_.rows() == e_.cols(), ErrorCode::Dimension, "E block must be square");
}

GroupElement GroupElement::identity(int n, int r, Realization realization) {
    require(n >= 1 && r >= 0, ErrorCode::InvalidArgument, "need n >= 1, r >= 0");
    return GroupElement(Eigen::MatrixXcd::Identity(n, n), Eigen::VectorXcd::Zero(n),
                        Eigen::RowVectorXcd::Zero(n), Complex(1.0, 0.0),
                        Eigen::MatrixXcd::Identity(r, r), realization);
}

GroupElement GroupElement::from_full_matrix(const Eigen::MatrixXcd& g_prime, Eigen::MatrixXcd e,
                                            Realization realization) {
    require(g_prime.rows() == g_prime.cols() && g_prime.rows() >= 2, ErrorCode::Dimension,
            "body block must be square of size n+1 >= 2");
    const int n = static_cast<int>(g_prime.rows()) - 1;
    return GroupElement(g_prime.topLeftCorner(n, n), g_prime.topRightCorner(n, 1),
                        g_prime.bottomLeftCorner(1, n), g_prime(n, n), std::move(e), realization);
}

Eigen::MatrixXcd GroupElement::full_matrix() const {
    const int n = this->n();
    Eigen::MatrixXcd m(n + 1, n + 1);
    m.topLeftCorner(n, n) = a_;
    m.topRightCorner(n, 1) = b_;
    m.bottomLeftCorner(1, n) = c_;
    m(n, n) = d_;
    return m;
}

MembershipReport is_member(const GroupElement& g, double tol) {
    Eigen::MatrixXcd gp = g.full_matrix();
    if (g.realization() == Realization::HalfPlane) {
        const Eigen::MatrixXcd r = cayley_matrix(g.n());
        gp = r.adjoint() * gp * r; // R^-1 g' R, with R orthogonal real
    }
    const Eigen::MatrixXcd j = signature_form(g.n());
    MembershipReport rep;
    rep.form_residual = max_abs(gp.adjoint() * j * gp - j);
    rep.unitarity_residual =
        max_abs(g.e().adjoint() * g.e() - Eigen::MatrixXcd::Identity(g.r(), g.r()));
    const Complex det_g = gp.determinant();
    const Complex det_e = g.r() == 0 ? Complex(1.0, 0.0) : g.e().determinant();
    rep.det_residual = std::abs(det_g - det_e);
    rep.ok = rep.form_residual < tol && rep.unitarity_residual < tol && rep.det_residual < tol;
    return rep;
}

GroupElement mul(const GroupElement& g, const GroupElement& h) {
    require(g.n() == h.n() && g.r() == h.r(), ErrorCode::Dimension, "mismatched (n, r)");
    require(g.realization() == h.realization(), ErrorCode::InvalidArgument,
            "mismatched realization tags");
    return GroupElement::from_full_matrix(g.full_matrix() * h.full_matrix(), g.e() * h.e(),
                                          g.realization());
}

GroupElement inv(const GroupElement& g) {
    return GroupElement::from_full_matrix(g.full_matrix().inverse(), g.e().inverse().eval(),
                                          g.realization());
}

GroupElement a_t(double t, int n, int r) {
    require(n >= 1, ErrorCode::InvalidArgument, "need n >= 1");
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(n, n);
    a(0, 0) = std::cosh(t);
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(n);
    b(0) = std::sinh(t);
    Eigen::RowVectorXcd c = Eigen::RowVectorXcd::Zero(n);
    c(0) = std::sinh(t);
    return GroupElement(std::move(a), std::move(b), std::move(c), Complex(std::cosh(t), 0.0),
                        Eigen::MatrixXcd::Identity(r, r), Realization::Ball);
}

GroupElement a_prime_t(double t, int n, int r) {
    require(n >= 1, ErrorCode::InvalidArgument, "need n >= 1");
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(n, n);
    a(0, 0) = std::exp(t);
    return GroupElement(std::move(a), Eigen::VectorXcd::Zero(n), Eigen::RowVectorXcd::Zero(n),
                        Complex(std::exp(-t), 0.0), Eigen::MatrixXcd::Identity(r, r),
                        Realization::HalfPlane);
}

GroupElement n_prime(double lambda, const Eigen::VectorXcd& u, int r) {
    const int n = static_cast<int>(u.size()) + 1;
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(n, n);
    a.topRightCorner(1, n - 1) = u.adjoint();
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(n);
    b(0) = Complex(0.5 * u.squaredNorm(), lambda);
    b.tail(n - 1) = u;
    return GroupElement(std::move(a), std::move(b), Eigen::RowVectorXcd::Zero(n),
                        Complex(1.0, 0.0), Eigen::MatrixXcd::Identity(r, r),
                        Realization::HalfPlane);
}

std::pair<double, Eigen::VectorXcd> heisenberg_mul(double lambda, const Eigen::VectorXcd& u,
                                                   double mu, const Eigen::VectorXcd& v) {
    require(u.size() == v.size(), ErrorCode::Dimension, "mismatched u, v lengths");
    const Complex uv = u.dot(v); // u* v
    return {lambda + mu + uv.imag(), u + v};
}

Eigen::MatrixXcd cayley_matrix(int n) {
    require(n >= 1, ErrorCode::InvalidArgument, "need n >= 1");
    const double s = 1.0 / std::sqrt(2.0);
    Eigen::MatrixXcd r = Eigen::MatrixXcd::Identity(n + 1, n + 1);
    r(0, 0) = s;
    r(0, n) = s;
    r(n, 0) = -s;
    r(n, n) = s;
    return r;
}

GroupElement to_half_plane(const GroupElement& g_ball) {
    require(g_ball.realization() == Realization::Ball, ErrorCode::InvalidArgument,
            "expected a Ball-realization element");
    const Eigen::MatrixXcd r = cayley_matrix(g_ball.n());
    return GroupElement::from_full_matrix(r * g_ball.full_matrix() * r.adjoint(), g_ball.e(),
                                          Realization::HalfPlane);
}

GroupElement to_ball(const GroupElement& g_half_plane) {
    require(g_half_plane.realization() == Realization::HalfPlane, ErrorCode::InvalidArgument,
            "expected a HalfPlane-realization element");
    const Eigen::MatrixXcd r = cayley_matrix(g_half_plane.n());
    return GroupElement::from_full_matrix(r.adjoint() * g_half_plane.full_matrix() * r,
                                          g_half_plane.e(), Realization::Ball);
}

Eigen::VectorXcd mobius_raw(const GroupElement& g, const Eigen::VectorXcd& z) {
    require(z.size() == g.n(), ErrorCode::Dimension, "point dimension does not match element");
    const Complex den = (g.c() * z).value() + g.d();
    require(den != Complex(0.0, 0.0) && std::isfinite(std::abs(den)), ErrorCode::Pole,
            "vanishing denominator cz + d");
    return (g.a() * z + g.b()) / den;
}

BallPoint mobius(const GroupElement& g, const BallPoint& z) {
    require(g.realization() == Realization::Ball, ErrorCode::InvalidArgument,
            "element does not act on the ball");
    const Eigen::VectorXcd image = mobius_raw(g, z.z);
    require(in_ball(image, 1e-9), ErrorCode::Domain, "image left the unit ball");
    return BallPoint{image};
}

HalfPlanePoint mobius(const GroupElement& g, const HalfPlanePoint& w) {
    require(g.realization() == Realization::HalfPlane, ErrorCode::InvalidArgument,
            "element does not act on the half plane");
    const Eigen::VectorXcd image = mobius_raw(g, w.w);
    require(in_half_plane(image, 1e-9), ErrorCode::Domain, "image left the half plane");
    return HalfPlanePoint{image};
}

Complex cocycle(const GroupElement& g, const Eigen::VectorXcd& z) {
    require(z.size() == g.n(), ErrorCode::Dimension, "point dimension does not match element");
    const Complex den = (g.c() * z).value() + g.d();
    require(den != Complex(0.0, 0.0) && std::isfinite(std::abs(den)), ErrorCode::Pole,
            "vanishing denominator cz + d");
    return Complex(1.0, 0.0) / den;
}

Complex cocycle_cayley(const Eigen::VectorXcd& z) {
    const Complex den = Complex(1.0, 0.0) - z(0);
    require(den != Complex(0.0, 0.0), ErrorCode::Pole, "cocycle pole at z_1 = 1");
    return std::sqrt(2.0) / den;
}

Complex cocycle_cayley_inv(const Eigen::VectorXcd& w) {
    const Complex den = Complex(1.0, 0.0) + w(0);
    require(den != Complex(0.0, 0.0), ErrorCode::Pole, "cocycle pole at w_1 = -1");
    return std::sqrt(2.0) / den;
}

GroupElement center_element(const Eigen::MatrixXcd& e, int n) {
    require(e.rows() == e.cols(), ErrorCode::Dimension, "E must be square");
    const Complex det_e = e.rows() == 0 ? Complex(1.0, 0.0) : e.determinant();
    require(std::abs(std::abs(det_e) - 1.0) < 1e-8, ErrorCode::NotMember,
            "E must be unitary (|det E| = 1)");
    // principal (n+1)-th root of det E
    const Complex eps = std::polar(1.0, std::arg(det_e) / (n + 1.0));
    return GroupElement(eps * Eigen::MatrixXcd::Identity(n, n), Eigen::VectorXcd::Zero(n),
                        Eigen::RowVectorXcd::Zero(n), eps, e, Realization::Ball);
}

GroupElement twisted_cusp_element(double lambda0, double chi, const Eigen::VectorXd& d_diag,
                                  int n) {
    require(lambda0 != 0.0, ErrorCode::InvalidArgument, "lambda0 must be nonzero");
    const int r = static_cast<int>(d_diag.size());
    const Complex eps = std::polar(1.0, -kTwoPi * chi);
    Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(r, r);
    for (int i = 0; i < r; ++i) e(i, i) = std::polar(1.0, kTwoPi * d_diag(i));
    const Complex det_e = r == 0 ? Complex(1.0, 0.0) : e.determinant();
    require(std::abs(int_pow(eps, n + 1) - det_e) < 1e-9, ErrorCode::NotMember,
            "cusp data violates eps^{n+1} = det E; adjust chi or D");
    const GroupElement zc(eps * Eigen::MatrixXcd::Identity(n, n), Eigen::VectorXcd::Zero(n),
                          Eigen::RowVectorXcd::Zero(n), eps, std::move(e),
                          Realization::HalfPlane);
    return mul(n_prime(lambda0, Eigen::VectorXcd::Zero(n - 1), r), zc);
}

Eigen::MatrixXcd random_unitary(Rng& rng, int size) {
    if (size == 0) return Eigen::MatrixXcd(0, 0);
    Eigen::MatrixXcd m(size, size);
    for (int i = 0; i < size; ++i)
        for (int j = 0; j < size; ++j) m(i, j) = rng.complex_gaussian();
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
    Eigen::MatrixXcd q = qr.householderQ();
    // fix the phase ambiguity so the factor is reproducible
    const Eigen::MatrixXcd rmat = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < size; ++i) {
        const Complex rii = rmat(i, i);
        if (rii != Complex(0.0, 0.0)) q.col(i) *= rii / std::abs(rii);
    }
    return q;
}

GroupElement random_member(Rng& rng, int n, int r, double t_range) {
    const Eigen::MatrixXcd u1 = random_unitary(rng, n);
    const Eigen::MatrixXcd u2 = random_unitary(rng, n);
    const Complex phase1 = std::polar(1.0, kTwoPi * rng.uniform());
    const double t = rng.uniform(-t_range, t_range);
    const Eigen::MatrixXcd e = random_unitary(rng, r);

    Eigen::MatrixXcd k1 = Eigen::MatrixXcd::Zero(n + 1, n + 1);
    k1.topLeftCorner(n, n) = u1;
    k1(n, n) = phase1;
    Eigen::MatrixXcd k2 = Eigen::MatrixXcd::Zero(n + 1, n + 1);
    k2.topLeftCorner(n, n) = u2;
    k2(n, n) = Complex(1.0, 0.0); // placeholder, fixed below

    const Eigen::MatrixXcd at = a_t(t, n, 0).full_matrix();
    const Complex det_e = r == 0 ? Complex(1.0, 0.0) : e.determinant();
    // det(k1 at k2) = det(u1) phase1 det(u2) phase2; solve for phase2 so the
    // determinant condition det g' = det E holds exactly.
    const Complex partial = u1.determinant() * phase1 * u2.determinant();
    k2(n, n) = det_e / partial;

    return GroupElement::from_full_matrix(k1 * at * k2, e, Realization::Ball);
}

Complex int_pow(Complex base, int exponent) {
    if (exponent < 0) return Complex(1.0, 0.0) / int_pow(base, -exponent);
    Complex acc(1.0, 0.0);
    for (int i = 0; i < exponent; ++i) acc *= base;
    return acc;
}

} // namespace sbf
