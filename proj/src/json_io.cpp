#include "sbforms/json_io.hpp"

#include <cmath>

namespace sbf {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

[[noreturn]] void schema_fail(const std::string& what) { fail(ErrorCode::Schema, what); }

const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key))
        schema_fail(std::string("missing field '") + key + "'");
    return j.at(key);
}

double number_field(const Json& j, const char* key) {
    const Json& v = field(j, key);
    if (!v.is_number()) schema_fail(std::string("field '") + key + "' must be a number");
    return v.get<double>();
}

int int_field(const Json& j, const char* key) {
    const Json& v = field(j, key);
    if (!v.is_number_integer()) schema_fail(std::string("field '") + key + "' must be an integer");
    return v.get<int>();
}

} // namespace

Json complex_to_json(Complex v) { return Json::array({v.real(), v.imag()}); }

Complex complex_from_json(const Json& j, const std::string& what) {
    if (j.is_number()) return Complex(j.get<double>(), 0.0);
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        schema_fail(what + " must be [re, im]");
    return Complex(j[0].get<double>(), j[1].get<double>());
}

Json matrix_to_json(const Eigen::MatrixXcd& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXcd matrix_from_json(const Json& j, const std::string& what) {
    if (!j.is_array()) schema_fail(what + " must be an array of rows");
    const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
    Eigen::Index cols = -1;
    for (const Json& row : j) {
        if (!row.is_array()) schema_fail(what + " rows must be arrays");
        if (cols < 0)
            cols = static_cast<Eigen::Index>(row.size());
        else if (cols != static_cast<Eigen::Index>(row.size()))
            schema_fail(what + " rows must have equal length");
    }
    Eigen::MatrixXcd m(rows, cols < 0 ? 0 : cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index c = 0; c < cols; ++c)
            m(i, c) = complex_from_json(j[i][c], what + " entry");
    return m;
}

Json vector_to_json(const Eigen::VectorXcd& v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
    return out;
}

Eigen::VectorXcd vector_from_json(const Json& j, const std::string& what) {
    if (!j.is_array()) schema_fail(what + " must be an array");
    Eigen::VectorXcd v(static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i)
        v(i) = complex_from_json(j[i], what + " entry");
    return v;
}

namespace {

std::string realization_name(Realization r) {
    return r == Realization::Ball ? "ball" : "half_plane";
}

Realization realization_from_name(const std::string& name) {
    if (name == "ball") return Realization::Ball;
    if (name == "half_plane") return Realization::HalfPlane;
    schema_fail("realization must be 'ball' or 'half_plane'");
}

} // namespace

Json group_element_to_json(const GroupElement& g) {
    Json j;
    j["n"] = g.n();
    j["r"] = g.r();
    j["realization"] = realization_name(g.realization());
    j["A"] = matrix_to_json(g.a());
    j["b"] = vector_to_json(g.b());
    j["c"] = vector_to_json(g.c().transpose());
    j["d"] = complex_to_json(g.d());
    j["E"] = matrix_to_json(g.e());
    return j;
}

GroupElement group_element_from_json(const Json& j) {
    const int n = int_field(j, "n");
    const int r = int_field(j, "r");
    if (n < 1 || r < 0) schema_fail("need n >= 1 and r >= 0");
    const Realization realization =
        realization_from_name(field(j, "realization").get<std::string>());
    Eigen::MatrixXcd a = matrix_from_json(field(j, "A"), "A");
    Eigen::VectorXcd b = vector_from_json(field(j, "b"), "b");
    Eigen::VectorXcd c = vector_from_json(field(j, "c"), "c");
    const Complex d = complex_from_json(field(j, "d"), "d");
    Eigen::MatrixXcd e = matrix_from_json(field(j, "E"), "E");
    if (a.rows() != n || a.cols() != n || b.size() != n || c.size() != n || e.rows() != r ||
        e.cols() != r)
        schema_fail("group element block shapes inconsistent with (n, r)");
    return GroupElement(std::move(a), std::move(b), c.transpose(), d, std::move(e), realization);
}

Json region_to_json(const Region& region) {
    Json j;
    j["x_min"] = region.x_min;
    j["x_max"] = region.x_max;
    j["y_min"] = region.y_min;
    j["y_max"] = region.y_max;
    Json ub = Json::array();
    for (const auto& u : region.u_box)
        ub.push_back(Json::array({u.re_lo, u.re_hi, u.im_lo, u.im_hi}));
    j["u_box"] = std::move(ub);
    j["grid"] = region.grid;
    return j;
}

Region region_from_json(const Json& j) {
    Region region;
    region.x_min = number_field(j, "x_min");
    region.x_max = number_field(j, "x_max");
    region.y_min = number_field(j, "y_min");
    region.y_max = number_field(j, "y_max");
    const Json& ub = field(j, "u_box");
    if (!ub.is_array()) schema_fail("u_box must be an array");
    for (const Json& u : ub) {
        if (!u.is_array() || u.size() != 4)
            schema_fail("u_box entries must be [re_lo, re_hi, im_lo, im_hi]");
        region.u_box.push_back(
            {u[0].get<double>(), u[1].get<double>(), u[2].get<double>(), u[3].get<double>()});
    }
    const Json& grid = field(j, "grid");
    if (!grid.is_array()) schema_fail("grid must be an array of resolutions");
    for (const Json& g : grid) {
        if (!g.is_number_integer()) schema_fail("grid entries must be integers");
        region.grid.push_back(g.get<int>());
    }
    try {
        region.validate();
    } catch (const Error& e) {
        schema_fail(std::string("invalid region: ") + e.what());
    }
    return region;
}

Json cusp_to_json(const CuspData& cusp) {
    Json j;
    j["lambda0"] = cusp.lambda0;
    j["chi"] = cusp.chi;
    Json d = Json::array();
    for (int i = 0; i < cusp.d_diag.size(); ++i) d.push_back(cusp.d_diag(i));
    j["D"] = std::move(d);
    return j;
}

CuspData cusp_from_json(const Json& j) {
    CuspData cusp;
    cusp.lambda0 = number_field(j, "lambda0");
    cusp.chi = number_field(j, "chi");
    const Json& d = field(j, "D");
    if (!d.is_array()) schema_fail("D must be an array of diagonal entries");
    cusp.d_diag.resize(static_cast<Eigen::Index>(d.size()));
    for (Eigen::Index i = 0; i < cusp.d_diag.size(); ++i) {
        if (!d[i].is_number()) schema_fail("D entries must be numbers");
        cusp.d_diag(i) = d[i].get<double>();
    }
    try {
        cusp.validate();
    } catch (const Error& e) {
        schema_fail(std::string("invalid cusp data: ") + e.what());
    }
    return cusp;
}

Json multi_index_to_json(MultiIndex i) {
    Json out = Json::array();
    for (int idx : i.indices()) out.push_back(idx);
    return out;
}

MultiIndex multi_index_from_json(const Json& j, int r) {
    if (!j.is_array()) schema_fail("odd_index must be an array of 1-based integers");
    std::vector<int> indices;
    for (const Json& v : j) {
        if (!v.is_number_integer()) schema_fail("odd_index entries must be integers");
        indices.push_back(v.get<int>());
    }
    try {
        return MultiIndex::from_indices(indices, r);
    } catch (const Error& e) {
        schema_fail(std::string("invalid odd_index: ") + e.what());
    }
}

Evaluator evaluator_from_spec(const Json& spec, int n, Realization domain,
                              std::string* descriptor_out) {
    const std::string kind = field(spec, "kind").get<std::string>();
    if (kind == "constant") {
        const Complex value = complex_from_json(field(spec, "value"), "value");
        if (descriptor_out) *descriptor_out = "constant";
        return [value](const Eigen::VectorXcd&) { return value; };
    }
    if (kind == "monomial") {
        const Complex coeff = complex_from_json(field(spec, "coeff"), "coeff");
        const Json& pj = field(spec, "powers");
        if (!pj.is_array() || static_cast<int>(pj.size()) != n)
            schema_fail("monomial powers must list one exponent per coordinate");
        std::vector<int> powers;
        for (const Json& p : pj) {
            if (!p.is_number_integer() || p.get<int>() < 0)
                schema_fail("monomial powers must be nonnegative integers");
            powers.push_back(p.get<int>());
        }
        if (descriptor_out) *descriptor_out = "monomial";
        return [coeff, powers](const Eigen::VectorXcd& z) {
            Complex acc = coeff;
            for (std::size_t i = 0; i < powers.size(); ++i)
                acc *= int_pow(z(static_cast<Eigen::Index>(i)), powers[i]);
            return acc;
        };
    }
    if (kind == "fourier_mode") {
        if (domain != Realization::HalfPlane)
            schema_fail("fourier_mode components live on the half plane");
        const Complex coeff = complex_from_json(field(spec, "coeff"), "coeff");
        const double m = number_field(spec, "m");
        std::vector<int> u_powers(static_cast<std::size_t>(n - 1), 0);
        if (spec.contains("u_powers")) {
            const Json& up = spec.at("u_powers");
            if (!up.is_array() || static_cast<int>(up.size()) != n - 1)
                schema_fail("u_powers must list one exponent per w_2 coordinate");
            for (std::size_t i = 0; i < u_powers.size(); ++i) {
                if (!up[i].is_number_integer() || up[i].get<int>() < 0)
                    schema_fail("u_powers must be nonnegative integers");
                u_powers[i] = up[i].get<int>();
            }
        }
        if (descriptor_out) *descriptor_out = "fourier_mode(m=" + std::to_string(m) + ")";
        return [coeff, m, u_powers](const Eigen::VectorXcd& w) {
            Complex acc = coeff * std::exp(kTwoPi * m * w(0));
            for (std::size_t i = 0; i < u_powers.size(); ++i)
                acc *= int_pow(w(static_cast<Eigen::Index>(i) + 1), u_powers[i]);
            return acc;
        };
    }
    if (kind == "cocycle_power") {
        const int power = int_field(spec, "power");
        const Json& el = field(spec, "element");
        if (el.is_string()) {
            const std::string name = el.get<std::string>();
            if (name == "cayley") {
                if (descriptor_out) *descriptor_out = "j(R,.)^" + std::to_string(power);
                return [power](const Eigen::VectorXcd& z) {
                    return int_pow(cocycle_cayley(z), power);
                };
            }
            if (name == "cayley_inv") {
                if (descriptor_out) *descriptor_out = "j(R^-1,.)^" + std::to_string(power);
                return [power](const Eigen::VectorXcd& w) {
                    return int_pow(cocycle_cayley_inv(w), power);
                };
            }
            schema_fail("cocycle_power element must be 'cayley', 'cayley_inv' or a group element");
        }
        auto g = std::make_shared<const GroupElement>(group_element_from_json(el));
        if (g->n() != n) schema_fail("cocycle_power element dimension mismatch");
        if (descriptor_out) *descriptor_out = "j(g,.)^" + std::to_string(power);
        return [g, power](const Eigen::VectorXcd& z) { return int_pow(cocycle(*g, z), power); };
    }
    schema_fail("unknown function-spec kind '" + kind + "'");
}

SuperFunction super_function_from_json(const Json& j) {
    const int n = int_field(j, "n");
    const int r = int_field(j, "r");
    const int weight = int_field(j, "weight");
    const Realization domain = realization_from_name(field(j, "domain").get<std::string>());
    if (n < 1 || r < 0 || r > MultiIndex::kMaxRank) schema_fail("need n >= 1, 0 <= r <= 16");
    SuperFunction f(n, r, weight, domain);
    const Json& comps = field(j, "components");
    if (!comps.is_array()) schema_fail("components must be an array");
    for (const Json& comp : comps) {
        const MultiIndex idx = comp.contains("odd_index")
                                   ? multi_index_from_json(comp.at("odd_index"), r)
                                   : MultiIndex::empty();
        std::string descriptor;
        Evaluator fn = evaluator_from_spec(comp, n, domain, &descriptor);
        f.add_component(idx, std::move(fn), std::move(descriptor));
    }
    return f;
}

} // namespace sbf
