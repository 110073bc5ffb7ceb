#pragma once

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <memory>
#include <string>

#include "sbforms/domain.hpp"
#include "sbforms/grassmann.hpp"
#include "sbforms/group.hpp"

namespace sbf {

// Pointwise component evaluator. Must be pure; called with raw domain
// vectors from inside quadrature loops.
using Evaluator = std::function<Complex(const Eigen::VectorXcd&)>;

struct Component {
    Evaluator fn;
    std::string descriptor;
};

// Finite family of component evaluators indexed by odd multi-indices,
// f = sum_I f_I zeta^I, with an integral weight and a realization tag.
class SuperFunction {
public:
    SuperFunction(int n, int r, int weight, Realization domain);

    int n() const { return n_; }
    int r() const { return r_; }
    int weight() const { return weight_; }
    Realization domain() const { return domain_; }

    // Adds f_I; stacking the same index accumulates a pointwise sum.
    void add_component(MultiIndex i, Evaluator fn, std::string descriptor);

    const std::map<MultiIndex, Component>& components() const { return components_; }
    bool has_component(MultiIndex i) const { return components_.count(i) > 0; }

    // Evaluates all components at a raw domain vector (no domain check).
    GrassmannVector eval_raw(const Eigen::VectorXcd& p) const;

    SuperFunction degree_project(int rho) const;

private:
    int n_, r_, weight_;
    Realization domain_;
    std::map<MultiIndex, Component> components_;
};

SuperFunction constant_function(int n, int r, int weight, Realization domain, Complex value,
                                MultiIndex i = MultiIndex::empty());

// Domain-checked evaluation.
GrassmannVector eval(const SuperFunction& f, const BallPoint& p);
GrassmannVector eval(const SuperFunction& f, const HalfPlanePoint& p);

// Weighted slash action: h_J(p) = sum_{|I|=|J|} f_I(g p) j(g,p)^{k+|I|} det(E[I;J]).
// Right action: slash(f, mul(g,h)) = slash(slash(f,g), h).
SuperFunction slash(const SuperFunction& f, const GroupElement& g, double member_tol = 1e-10);

// Transport along the partial Cayley transformation. slash_cayley maps
// half-plane functions to ball functions via f_I(R z) j(R,z)^{k+|I|};
// slash_cayley_inv is the inverse direction and composes to the identity.
SuperFunction slash_cayley(const SuperFunction& f_on_h);
SuperFunction slash_cayley_inv(const SuperFunction& f_on_b);

// Lift to the group: coefficients of f|_g at the origin in the eta basis.
GrassmannVector lift(const SuperFunction& f, const GroupElement& g, double member_tol = 1e-10);

// Pointwise amplitude sqrt(sum_I |f_I|^2 Delta(p,p)^{k+|I|}), with Delta'
// in place of Delta on the half plane. This is the integrand of every norm
// and is invariant under matched slash/moebius pairs.
double amplitude(const SuperFunction& f, const BallPoint& p);
double amplitude(const SuperFunction& f, const HalfPlanePoint& p);

} // namespace sbf
