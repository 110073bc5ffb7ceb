#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "sbforms/superfunc.hpp"

namespace sbf {

// Cusp data (lambda0, chi, D): period of the central pseudo-translation,
// phase exponent with j = e^{2 pi i chi}, and the diagonal odd twist with
// E = exp(2 pi i D). Shifting chi by an integer relabels the lattice.
struct CuspData {
    double lambda0 = 1.0;
    double chi = 0.0;
    Eigen::VectorXd d_diag; // r diagonal entries of D

    int r() const { return static_cast<int>(d_diag.size()); }
    void validate() const;
};

// tr_I D = sum of the selected diagonal entries.
double tr_i(const Eigen::VectorXd& d_diag, MultiIndex i);

// Twist offset tr_I D + (k+|I|) chi of the I-component lattice.
double lattice_offset(const CuspData& cusp, MultiIndex i, int k);

// Frequencies (j - tr_I D - (k+|I|) chi)/lambda0 for j in [j_min, j_max],
// returned ascending.
std::vector<double> frequency_lattice(const CuspData& cusp, MultiIndex i, int k, int j_min,
                                      int j_max);

bool on_lattice(const CuspData& cusp, MultiIndex i, int k, double m, double tol = 1e-12);

struct FourierMode {
    MultiIndex i;
    double m = 0.0;
    Evaluator c; // c_{I,m} as a function of w_2 in C^{n-1}
    std::string descriptor;
};

// Mode with frequency placed exactly on the twisted lattice at integer index j.
FourierMode make_mode(const CuspData& cusp, MultiIndex i, int k, int j, Evaluator c,
                      std::string descriptor);

// Coefficient extraction over one period: the value c_{I,m}(base_2) e^{2 pi m base_1}
// from the uniform-grid quadrature of
//   (1/lambda0) int_0^lambda0 q(w + i lambda e_1) e^{-2 pi i m lambda} d lambda.
// Exact on synthesized lattice modes whose index gap stays below quad_points.
Complex fourier_coefficient(const Evaluator& q, double m, const HalfPlanePoint& base,
                            const CuspData& cusp, int quad_points = 256);

// Pointwise sum sum_m c_{I,m}(w_2) e^{2 pi m w_1} per multi-index, packaged
// as a half-plane super function of the given weight.
SuperFunction synthesize(const std::vector<FourierMode>& modes, int n, int r, int k);

struct KoecherOptions {
    int j_min = -8;
    int j_max = 8;
    int quad_points = 256;
    double tol = 1e-10;
    int threads = 1;
};

struct KoecherFinding {
    MultiIndex i;
    double m = 0.0;
    int base_index = 0;
    double magnitude = 0.0;
};

struct KoecherConstantCheck {
    MultiIndex i;
    bool required = false;  // offset tr_I D + (k+|I|) chi is integral
    double max_deviation = 0.0;
    bool passed = true;
};

struct KoecherReport {
    bool passed = false;
    double max_positive_magnitude = 0.0;
    std::optional<KoecherFinding> worst_positive;
    std::vector<KoecherFinding> positive_masses;
    std::vector<KoecherConstantCheck> constant_checks;
};

// Checks that every positive lattice frequency carries no mass (the
// vanishing half of the expansion theorem) and, where the lattice offset is
// integral, that the zero mode is constant across the supplied base points.
KoecherReport koecher_check(const std::map<MultiIndex, Evaluator>& q, const CuspData& cusp,
                            int k, const std::vector<HalfPlanePoint>& bases,
                            const KoecherOptions& opts = {});

struct LiouvilleSample {
    double radius = 0.0;
    int direction = 0;
    double lhs = 0.0; // |c(u)|
    double rhs = 0.0; // bound * e^{-pi m u*u}
    bool ok = true;
};

struct LiouvilleReport {
    bool passed = true;
    std::vector<LiouvilleSample> failures;
    double worst_excess = 0.0; // max over samples of lhs - rhs
};

// Samples |c(u)| <= bound e^{-pi m u*u} on spheres of the given radii along
// fixed deterministic directions. For m > 0 any nonzero polynomial c must
// fail at large enough radius.
LiouvilleReport liouville_bound_check(const Evaluator& c, double m, double bound,
                                      const std::vector<double>& radii, int dim,
                                      int directions_per_radius = 8);

} // namespace sbf
