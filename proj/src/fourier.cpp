#include "sbforms/fourier.hpp"

#include <algorithm>
#include <cmath>

#include "sbforms/parallel.hpp"

namespace sbf {

namespace {
constexpr double kPi = 3.1415926535897932384626433832795;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kZeroFrequencyTol = 1e-12;
} // namespace

void CuspData::validate() const {
    require(lambda0 != 0.0 && std::isfinite(lambda0), ErrorCode::InvalidArgument,
            "cusp period lambda0 must be nonzero");
    require(std::isfinite(chi), ErrorCode::InvalidArgument, "chi must be finite");
    for (int i = 0; i < d_diag.size(); ++i)
        require(std::isfinite(d_diag(i)), ErrorCode::InvalidArgument, "D entries must be finite");
}

double tr_i(const Eigen::VectorXd& d_diag, MultiIndex i) {
    double s = 0.0;
    for (int idx : i.indices()) {
        require(idx <= d_diag.size(), ErrorCode::InvalidArgument,
                "multi-index exceeds the size of D");
        s += d_diag(idx - 1);
    }
    return s;
}

double lattice_offset(const CuspData& cusp, MultiIndex i, int k) {
    return tr_i(cusp.d_diag, i) + (k + i.cardinality()) * cusp.chi;
}

std::vector<double> frequency_lattice(const CuspData& cusp, MultiIndex i, int k, int j_min,
                                      int j_max) {
    cusp.validate();
    require(j_min <= j_max, ErrorCode::InvalidArgument, "empty lattice window");
    const double offset = lattice_offset(cusp, i, k);
    std::vector<double> out;
    out.reserve(j_max - j_min + 1);
    for (int j = j_min; j <= j_max; ++j) out.push_back((j - offset) / cusp.lambda0);
    std::sort(out.begin(), out.end());
    return out;
}

bool on_lattice(const CuspData& cusp, MultiIndex i, int k, double m, double tol) {
    const double j = m * cusp.lambda0 + lattice_offset(cusp, i, k);
    return std::abs(j - std::round(j)) <= tol;
}

FourierMode make_mode(const CuspData& cusp, MultiIndex i, int k, int j, Evaluator c,
                      std::string descriptor) {
    cusp.validate();
    FourierMode mode;
    mode.i = i;
    mode.m = (j - lattice_offset(cusp, i, k)) / cusp.lambda0;
    mode.c = std::move(c);
    mode.descriptor = std::move(descriptor);
    return mode;
}

Complex fourier_coefficient(const Evaluator& q, double m, const HalfPlanePoint& base,
                            const CuspData& cusp, int quad_points) {
    cusp.validate();
    require(quad_points >= 8, ErrorCode::InvalidArgument, "quadrature budget too small (< 8)");
    Eigen::VectorXcd w = base.w;
    Complex acc(0.0, 0.0);
    for (int j = 0; j < quad_points; ++j) {
        const double lam = cusp.lambda0 * static_cast<double>(j) / quad_points;
        w(0) = base.w(0) + Complex(0.0, lam);
        const Complex qv = q(w);
        require(std::isfinite(qv.real()) && std::isfinite(qv.imag()), ErrorCode::Numeric,
                "evaluator returned a non-finite value during coefficient quadrature");
        acc += qv * std::polar(1.0, -kTwoPi * m * lam);
    }
    return acc / static_cast<double>(quad_points);
}

SuperFunction synthesize(const std::vector<FourierMode>& modes, int n, int r, int k) {
    SuperFunction f(n, r, k, Realization::HalfPlane);
    for (const auto& mode : modes) {
        require(static_cast<bool>(mode.c), ErrorCode::InvalidArgument, "mode without evaluator");
        const double m = mode.m;
        Evaluator c = mode.c;
        f.add_component(
            mode.i,
            [m, c](const Eigen::VectorXcd& w) {
                return c(w.tail(w.size() - 1)) * std::exp(kTwoPi * m * w(0));
            },
            mode.descriptor.empty() ? "mode(m=" + std::to_string(m) + ")" : mode.descriptor);
    }
    return f;
}

KoecherReport koecher_check(const std::map<MultiIndex, Evaluator>& q, const CuspData& cusp,
                            int k, const std::vector<HalfPlanePoint>& bases,
                            const KoecherOptions& opts) {
    cusp.validate();
    require(!bases.empty(), ErrorCode::InvalidArgument, "need at least one base point");

    struct Task {
        MultiIndex i;
        const Evaluator* fn;
        double m;
        int base_index;
    };
    std::vector<Task> tasks;
    for (const auto& [i, fn] : q) {
        for (double m : frequency_lattice(cusp, i, k, opts.j_min, opts.j_max)) {
            if (m <= kZeroFrequencyTol) continue; // only strictly positive frequencies
            for (int b = 0; b < static_cast<int>(bases.size()); ++b)
                tasks.push_back(Task{i, &fn, m, b});
        }
    }

    std::vector<double> magnitudes(tasks.size(), 0.0);
    parallel_for(tasks.size(), opts.threads, [&](std::size_t t) {
        const Task& task = tasks[t];
        magnitudes[t] = std::abs(fourier_coefficient(*task.fn, task.m, bases[task.base_index],
                                                     cusp, opts.quad_points));
    });

    KoecherReport report;
    for (std::size_t t = 0; t < tasks.size(); ++t) {
        const Task& task = tasks[t];
        report.positive_masses.push_back(
            KoecherFinding{task.i, task.m, task.base_index, magnitudes[t]});
        if (magnitudes[t] > report.max_positive_magnitude) {
            report.max_positive_magnitude = magnitudes[t];
            report.worst_positive = report.positive_masses.back();
        }
    }

    bool constants_ok = true;
    for (const auto& [i, fn] : q) {
        const double offset = lattice_offset(cusp, i, k);
        KoecherConstantCheck check;
        check.i = i;
        check.required = std::abs(offset - std::round(offset)) <= kZeroFrequencyTol;
        if (check.required) {
            // zero lies on this lattice; c_{I,0} must not depend on w_2
            std::vector<Complex> values;
            values.reserve(bases.size());
            for (const auto& base : bases)
                values.push_back(fourier_coefficient(fn, 0.0, base, cusp, opts.quad_points));
            for (const Complex& v : values)
                check.max_deviation = std::max(check.max_deviation, std::abs(v - values.front()));
            check.passed = check.max_deviation <= opts.tol;
            constants_ok = constants_ok && check.passed;
        }
        report.constant_checks.push_back(check);
    }

    report.passed = report.max_positive_magnitude < opts.tol && constants_ok;
    return report;
}

LiouvilleReport liouville_bound_check(const Evaluator& c, double m, double bound,
                                      const std::vector<double>& radii, int dim,
                                      int directions_per_radius) {
    require(dim >= 1, ErrorCode::InvalidArgument, "need dimension >= 1 (n >= 2)");
    require(directions_per_radius >= 1, ErrorCode::InvalidArgument, "need >= 1 direction");
    for (double rad : radii)
        require(rad > 0.0, ErrorCode::InvalidArgument, "radii must be positive");

    // Fixed direction set: coordinate axes (real and imaginary), then a
    // reproducible pseudo-random fill. Identical on every run.
    std::vector<Eigen::VectorXcd> directions;
    for (int i = 0; i < dim && static_cast<int>(directions.size()) < directions_per_radius; ++i) {
        Eigen::VectorXcd e = Eigen::VectorXcd::Zero(dim);
        e(i) = Complex(1.0, 0.0);
        directions.push_back(e);
        if (static_cast<int>(directions.size()) < directions_per_radius) {
            e(i) = Complex(0.0, 1.0);
            directions.push_back(e);
        }
    }
    Rng rng(0xb0d1e5u);
    while (static_cast<int>(directions.size()) < directions_per_radius) {
        Eigen::VectorXcd v(dim);
        for (int i = 0; i < dim; ++i) v(i) = rng.complex_gaussian();
        const double norm = v.norm();
        if (norm < 1e-9) continue;
        directions.push_back(v / norm);
    }

    LiouvilleReport report;
    for (double rad : radii) {
        for (int d = 0; d < static_cast<int>(directions.size()); ++d) {
            const Eigen::VectorXcd u = rad * directions[d];
            const Complex cv = c(u);
            require(std::isfinite(cv.real()) && std::isfinite(cv.imag()), ErrorCode::Numeric,
                    "coefficient evaluator returned a non-finite value");
            LiouvilleSample sample;
            sample.radius = rad;
            sample.direction = d;
            sample.lhs = std::abs(cv);
            sample.rhs = bound * std::exp(-kPi * m * u.squaredNorm());
            sample.ok = sample.lhs <= sample.rhs;
            report.worst_excess = std::max(report.worst_excess, sample.lhs - sample.rhs);
            if (!sample.ok) {
                report.passed = false;
                report.failures.push_back(sample);
            }
        }
    }
    return report;
}

} // namespace sbf
