#pragma once

#include <map>
#include <string>
#include <vector>

#include "sbforms/fourier.hpp"

namespace sbf {

// Weight threshold of the integrability theorem: 2n - rho. The argument
// n >= 2 is essential (the Liouville step of the vanishing proof needs it).
int weight_threshold(int n, int rho);

// Summary of a cusp expansion's growth: either a strictly negative support
// with top frequency M0 < 0 and sup constant C'', or a constant term, or a
// positive-frequency defect.
struct GrowthProfile {
    bool has_positive_frequency = false;
    bool has_constant_term = false;
    double m0 = 0.0;     // max negative lattice frequency when support < 0
    double c_bound = 1.0; // the constant C''
};

enum class ClassifierVerdict {
    CuspLike,                // integrable for every s in [1, inf]
    ConstantTermObstruction, // not integrable for any s at weight >= 2n - rho
    KoecherViolation,        // positive frequency present
};

std::string to_string(ClassifierVerdict v);

struct LsNormDiagnostics {
    static constexpr const char* kStable = "stable";
    static constexpr const char* kGrowing = "growing";
    static constexpr const char* kInconclusive = "inconclusive";
};

struct LsNormResult {
    double value = 0.0;            // quadrature over the stated region
    std::vector<double> partials;  // values under doubling x_max
    std::vector<double> x_max_seq; // right endpoints matching partials
    std::string diagnostic;        // stable / growing / inconclusive
};

// L^s mass of q against the invariant measure in Psi coordinates:
//   int |q(Psi(x,y,u))|^s x^{(k+|I|)s/2 - (n+1)} dx dy dV(u)
// by a midpoint tensor rule. The x axis is extended octave by octave
// (doubling x_max, same per-octave resolution) to expose the tail behaviour;
// s = inf takes the grid supremum of |q(Psi)| x^{(k+|I|)/2} instead.
LsNormResult ls_norm(const Evaluator& q, int k, MultiIndex i, double s, const Region& region,
                     int doublings = 4, int threads = 1);

struct TailVerdict {
    bool finite = false;
    double bound = 0.0; // explicit upper bound when finite (unit C'')
    std::string reason;
};

// Closed-form dichotomy for int_{x0}^inf e^{2 pi M0 x s} x^alpha dx with
// alpha = (k+rho)s/2 - (n+1); for s = inf the supremum of e^{2 pi M0 x}
// x^{(k+rho)/2} over [x0, inf). Finite verdicts carry explicit bounds by
// incomplete-gamma comparison.
TailVerdict tail_dichotomy(double m0, int k, int rho, int n, double s, double x0);

struct Classification {
    ClassifierVerdict verdict;
    // tail bounds for s in {1, 2, inf}, scaled by c_bound^s; only for CuspLike
    std::map<double, TailVerdict> bounds;
};

// The integrability classifier at weight k: positive frequencies are fatal,
// a constant term obstructs every s once k >= 2n - rho, and strictly
// negative support is cusp-like with finite norms for all s.
Classification classify(const GrowthProfile& profile, int n, int k, int rho, double s,
                        double x0 = 1.0);

// Growth profile read off a synthesized mode list: positive frequencies and
// the constant term are detected on the lattice, M0 is the largest negative
// lattice frequency, and C'' is the sup bound over the x = x_min slice.
GrowthProfile profile_from_modes(const std::vector<FourierMode>& modes, const CuspData& cusp,
                                 MultiIndex i, int k, const Region& region);

} // namespace sbf
