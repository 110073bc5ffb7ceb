#include "sbforms/superfunc.hpp"

#include <cmath>

namespace sbf {

SuperFunction::SuperFunction(int n, int r, int weight, Realization domain)
    : n_(n), r_(r), weight_(weight), domain_(domain) {
    require(n >= 1, ErrorCode::InvalidArgument, "need n >= 1");
    require(r >= 0 && r <= MultiIndex::kMaxRank, ErrorCode::InvalidArgument,
            "need 0 <= r <= 16");
}

void SuperFunction::add_component(MultiIndex i, Evaluator fn, std::string descriptor) {
    require(i.cardinality() == 0 || i.indices().back() <= r_, ErrorCode::InvalidArgument,
            "multi-index exceeds odd rank r");
    require(static_cast<bool>(fn), ErrorCode::InvalidArgument, "empty evaluator");
    auto it = components_.find(i);
    if (it == components_.end()) {
        components_.emplace(i, Component{std::move(fn), std::move(descriptor)});
        return;
    }
    Evaluator prev = it->second.fn;
    Evaluator next = std::move(fn);
    it->second.fn = [prev, next](const Eigen::VectorXcd& p) { return prev(p) + next(p); };
    it->second.descriptor += " + " + descriptor;
}

GrassmannVector SuperFunction::eval_raw(const Eigen::VectorXcd& p) const {
    require(p.size() == n_, ErrorCode::Dimension, "point dimension does not match function");
    GrassmannVector out(r_);
    for (const auto& [idx, comp] : components_) {
        const Complex v = comp.fn(p);
        require(std::isfinite(v.real()) && std::isfinite(v.imag()), ErrorCode::Numeric,
                "component evaluator returned a non-finite value (" + comp.descriptor + ")");
        out.add(idx, v);
    }
    return out;
}

SuperFunction SuperFunction::degree_project(int rho) const {
    SuperFunction out(n_, r_, weight_, domain_);
    for (const auto& [idx, comp] : components_)
        if (idx.cardinality() == rho) out.add_component(idx, comp.fn, comp.descriptor);
    return out;
}

SuperFunction constant_function(int n, int r, int weight, Realization domain, Complex value,
                                MultiIndex i) {
    SuperFunction f(n, r, weight, domain);
    f.add_component(
        i, [value](const Eigen::VectorXcd&) { return value; },
        "constant");
    return f;
}

GrassmannVector eval(const SuperFunction& f, const BallPoint& p) {
    require(f.domain() == Realization::Ball, ErrorCode::Domain,
            "function lives on the half plane, got a ball point");
    return f.eval_raw(p.z);
}

GrassmannVector eval(const SuperFunction& f, const HalfPlanePoint& p) {
    require(f.domain() == Realization::HalfPlane, ErrorCode::Domain,
            "function lives on the ball, got a half-plane point");
    return f.eval_raw(p.w);
}

SuperFunction slash(const SuperFunction& f, const GroupElement& g, double member_tol) {
    require(g.realization() == f.domain(), ErrorCode::InvalidArgument,
            "realization tags of function and element differ");
    require(g.n() == f.n() && g.r() == f.r(), ErrorCode::Dimension, "mismatched (n, r)");
    const MembershipReport rep = is_member(g, member_tol);
    require(rep.ok, ErrorCode::NotMember, "slash requires a group member");

    const auto shared_g = std::make_shared<const GroupElement>(g);
    const int k = f.weight();

    struct Term {
        Evaluator source;
        int power; // k + |I|
        Complex minor;
    };
    std::map<MultiIndex, std::vector<Term>> terms;
    std::map<MultiIndex, std::string> descriptors;
    for (const auto& [i, comp] : f.components()) {
        const GrassmannVector action = exterior_action(g.e(), i);
        for (const auto& [j, minor] : action.coeffs()) {
            terms[j].push_back(Term{comp.fn, k + i.cardinality(), minor});
            auto& d = descriptors[j];
            if (!d.empty()) d += " + ";
            d += comp.descriptor;
        }
    }

    SuperFunction out(f.n(), f.r(), k, f.domain());
    for (auto& [j, term_list] : terms) {
        auto list = std::make_shared<const std::vector<Term>>(std::move(term_list));
        out.add_component(
            j,
            [shared_g, list](const Eigen::VectorXcd& p) {
                const Eigen::VectorXcd gp = mobius_raw(*shared_g, p);
                const Complex jj = cocycle(*shared_g, p);
                Complex acc(0.0, 0.0);
                for (const auto& t : *list) acc += t.source(gp) * int_pow(jj, t.power) * t.minor;
                return acc;
            },
            "(" + descriptors[j] + ")|g");
    }
    return out;
}

namespace {

SuperFunction cayley_transport(const SuperFunction& f, bool inverse) {
    SuperFunction out(f.n(), f.r(), f.weight(),
                      inverse ? Realization::HalfPlane : Realization::Ball);
    const int k = f.weight();
    for (const auto& [i, comp] : f.components()) {
        const int power = k + i.cardinality();
        Evaluator src = comp.fn;
        Evaluator moved;
        if (inverse) {
            // f on B -> f|_{R^-1} on H
            moved = [src, power](const Eigen::VectorXcd& w) {
                return src(cayley_point_inv_raw(w)) * int_pow(cocycle_cayley_inv(w), power);
            };
        } else {
            // f on H -> f|_R on B
            moved = [src, power](const Eigen::VectorXcd& z) {
                return src(cayley_point_raw(z)) * int_pow(cocycle_cayley(z), power);
            };
        }
        out.add_component(i, std::move(moved),
                          "(" + comp.descriptor + (inverse ? ")|R^-1" : ")|R"));
    }
    return out;
}

} // namespace

SuperFunction slash_cayley(const SuperFunction& f_on_h) {
    require(f_on_h.domain() == Realization::HalfPlane, ErrorCode::InvalidArgument,
            "slash_cayley expects a half-plane function");
    return cayley_transport(f_on_h, false);
}

SuperFunction slash_cayley_inv(const SuperFunction& f_on_b) {
    require(f_on_b.domain() == Realization::Ball, ErrorCode::InvalidArgument,
            "slash_cayley_inv expects a ball function");
    return cayley_transport(f_on_b, true);
}

GrassmannVector lift(const SuperFunction& f, const GroupElement& g, double member_tol) {
    require(f.domain() == Realization::Ball, ErrorCode::InvalidArgument,
            "lift is defined for ball functions");
    const SuperFunction moved = slash(f, g, member_tol);
    return moved.eval_raw(Eigen::VectorXcd::Zero(f.n()));
}

namespace {

double amplitude_impl(const SuperFunction& f, const Eigen::VectorXcd& p, double delta_diag) {
    require(delta_diag > 0.0, ErrorCode::Domain, "amplitude undefined on the boundary");
    const GrassmannVector values = f.eval_raw(p);
    double acc = 0.0;
    for (const auto& [idx, c] : values.coeffs())
        acc += std::norm(c) * std::pow(delta_diag, f.weight() + idx.cardinality());
    return std::sqrt(acc);
}

} // namespace

double amplitude(const SuperFunction& f, const BallPoint& p) {
    require(f.domain() == Realization::Ball, ErrorCode::Domain, "domain tag mismatch");
    return amplitude_impl(f, p.z, delta(p.z, p.z).real());
}

double amplitude(const SuperFunction& f, const HalfPlanePoint& p) {
    require(f.domain() == Realization::HalfPlane, ErrorCode::Domain, "domain tag mismatch");
    return amplitude_impl(f, p.w, delta_h(p.w, p.w).real());
}

} // namespace sbf
