#include "sbforms/sbforms.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>

#include "sbforms/jobs.hpp"
#include "sbforms/json_io.hpp"
#include "sbforms/satake.hpp"
#include "sbforms/version.hpp"

// Opaque handle definitions. The C structs wrap the C++ values by pointer so
// the ABI stays stable regardless of the core layout.
struct sbf_group_element {
    sbf::GroupElement value;
};
struct sbf_super_function {
    sbf::SuperFunction value;
};
struct sbf_job_result {
    sbf::jobs::JobResult value;
    std::string report_text;
};

namespace {

thread_local std::string g_last_error;

sbf_status status_of(const sbf::Error& e) {
    switch (e.code()) {
        case sbf::ErrorCode::InvalidArgument: return SBF_ERR_INVALID_ARGUMENT;
        case sbf::ErrorCode::Dimension: return SBF_ERR_DIMENSION;
        case sbf::ErrorCode::Domain: return SBF_ERR_DOMAIN;
        case sbf::ErrorCode::Pole: return SBF_ERR_POLE;
        case sbf::ErrorCode::NotMember: return SBF_ERR_NOT_MEMBER;
        case sbf::ErrorCode::Schema: return SBF_ERR_SCHEMA;
        case sbf::ErrorCode::Numeric: return SBF_ERR_NUMERIC;
        case sbf::ErrorCode::Io: return SBF_ERR_IO;
    }
    return SBF_ERR_INTERNAL;
}

template <typename Fn>
sbf_status guarded(Fn&& fn) {
    try {
        fn();
        return SBF_OK;
    } catch (const sbf::Error& e) {
        g_last_error = e.what();
        return status_of(e);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return SBF_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return SBF_ERR_INTERNAL;
    }
}

sbf_status require_c(bool ok, const char* message) {
    if (ok) return SBF_OK;
    g_last_error = message;
    return SBF_ERR_INVALID_ARGUMENT;
}

Eigen::VectorXcd unpack(const double* reim, int n) {
    Eigen::VectorXcd v(n);
    for (int i = 0; i < n; ++i) v(i) = sbf::Complex(reim[2 * i], reim[2 * i + 1]);
    return v;
}

void pack(const Eigen::VectorXcd& v, double* reim) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        reim[2 * i] = v(i).real();
        reim[2 * i + 1] = v(i).imag();
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

sbf::MultiIndex index_of(const int* odd_index, int odd_count, int r) {
    std::vector<int> indices(odd_index, odd_index + odd_count);
    return sbf::MultiIndex::from_indices(indices, r);
}

sbf::Json coeffs_json(const sbf::GrassmannVector& v) {
    sbf::Json out = sbf::Json::array();
    for (const auto& [idx, c] : v.coeffs()) {
        out.push_back(sbf::Json{{"I", sbf::multi_index_to_json(idx)},
                                {"value", sbf::complex_to_json(c)}});
    }
    return out;
}

sbf::CuspData cusp_of(const char* cusp_json) {
    sbf::Json j = sbf::Json::parse(cusp_json, nullptr, false);
    sbf::require(!j.is_discarded(), sbf::ErrorCode::Schema, "invalid cusp JSON");
    return sbf::cusp_from_json(j);
}

} // namespace

extern "C" {

const char* sbf_version(void) { return sbf::kVersion; }

const char* sbf_last_error(void) { return g_last_error.c_str(); }

/* --- group elements ------------------------------------------------------ */

sbf_status sbf_group_element_parse(const char* json, sbf_group_element** out) {
    if (auto s = require_c(json && out, "null argument")) return s;
    return guarded([&] {
        sbf::Json j = sbf::Json::parse(json, nullptr, false);
        sbf::require(!j.is_discarded(), sbf::ErrorCode::Schema, "invalid JSON");
        *out = new sbf_group_element{sbf::group_element_from_json(j)};
    });
}

sbf_status sbf_group_element_to_json(const sbf_group_element* g, char** json_out) {
    if (auto s = require_c(g && json_out, "null argument")) return s;
    return guarded([&] { *json_out = dup_string(sbf::group_element_to_json(g->value).dump()); });
}

sbf_status sbf_group_element_identity(int n, int r, int half_plane, sbf_group_element** out) {
    if (auto s = require_c(out != nullptr, "null output")) return s;
    return guarded([&] {
        *out = new sbf_group_element{sbf::GroupElement::identity(
            n, r, half_plane ? sbf::Realization::HalfPlane : sbf::Realization::Ball)};
    });
}

sbf_status sbf_group_element_a_t(double t, int n, int r, sbf_group_element** out) {
    if (auto s = require_c(out != nullptr, "null output")) return s;
    return guarded([&] { *out = new sbf_group_element{sbf::a_t(t, n, r)}; });
}

sbf_status sbf_group_element_a_prime_t(double t, int n, int r, sbf_group_element** out) {
    if (auto s = require_c(out != nullptr, "null output")) return s;
    return guarded([&] { *out = new sbf_group_element{sbf::a_prime_t(t, n, r)}; });
}

sbf_status sbf_group_element_n_prime(double lambda, const double* u_reim, int n, int r,
                                     sbf_group_element** out) {
    if (auto s = require_c(out && (n <= 1 || u_reim), "null argument")) return s;
    return guarded([&] {
        *out = new sbf_group_element{sbf::n_prime(lambda, unpack(u_reim, n - 1), r)};
    });
}

sbf_status sbf_group_element_mul(const sbf_group_element* g, const sbf_group_element* h,
                                 sbf_group_element** out) {
    if (auto s = require_c(g && h && out, "null argument")) return s;
    return guarded([&] { *out = new sbf_group_element{sbf::mul(g->value, h->value)}; });
}

sbf_status sbf_group_element_inv(const sbf_group_element* g, sbf_group_element** out) {
    if (auto s = require_c(g && out, "null argument")) return s;
    return guarded([&] { *out = new sbf_group_element{sbf::inv(g->value)}; });
}

sbf_status sbf_group_element_is_member(const sbf_group_element* g, double tol, int* ok_out,
                                       double residuals_out[3]) {
    if (auto s = require_c(g && ok_out, "null argument")) return s;
    return guarded([&] {
        const sbf::MembershipReport rep = sbf::is_member(g->value, tol);
        *ok_out = rep.ok ? 1 : 0;
        if (residuals_out) {
            residuals_out[0] = rep.form_residual;
            residuals_out[1] = rep.unitarity_residual;
            residuals_out[2] = rep.det_residual;
        }
    });
}

sbf_status sbf_mobius(const sbf_group_element* g, const double* z_reim, double* out_reim) {
    if (auto s = require_c(g && z_reim && out_reim, "null argument")) return s;
    return guarded([&] {
        const Eigen::VectorXcd z = unpack(z_reim, g->value.n());
        if (g->value.realization() == sbf::Realization::Ball) {
            pack(sbf::mobius(g->value, sbf::BallPoint::checked(z)).z, out_reim);
        } else {
            pack(sbf::mobius(g->value, sbf::HalfPlanePoint::checked(z)).w, out_reim);
        }
    });
}

sbf_status sbf_cocycle(const sbf_group_element* g, const double* z_reim, double out_reim[2]) {
    if (auto s = require_c(g && z_reim && out_reim, "null argument")) return s;
    return guarded([&] {
        const sbf::Complex j = sbf::cocycle(g->value, unpack(z_reim, g->value.n()));
        out_reim[0] = j.real();
        out_reim[1] = j.imag();
    });
}

void sbf_group_element_free(sbf_group_element* g) { delete g; }

/* --- domain ---------------------------------------------------------------- */

sbf_status sbf_delta(const double* z_reim, const double* w_reim, int n, double out_reim[2]) {
    if (auto s = require_c(z_reim && w_reim && out_reim && n >= 1, "bad argument")) return s;
    return guarded([&] {
        const sbf::Complex d = sbf::delta(unpack(z_reim, n), unpack(w_reim, n));
        out_reim[0] = d.real();
        out_reim[1] = d.imag();
    });
}

sbf_status sbf_delta_h(const double* z_reim, const double* w_reim, int n, double out_reim[2]) {
    if (auto s = require_c(z_reim && w_reim && out_reim && n >= 1, "bad argument")) return s;
    return guarded([&] {
        const sbf::Complex d = sbf::delta_h(unpack(z_reim, n), unpack(w_reim, n));
        out_reim[0] = d.real();
        out_reim[1] = d.imag();
    });
}

sbf_status sbf_cayley_point(const double* z_reim, int n, double* w_reim_out) {
    if (auto s = require_c(z_reim && w_reim_out && n >= 1, "bad argument")) return s;
    return guarded([&] {
        pack(sbf::cayley_point(sbf::BallPoint::checked(unpack(z_reim, n))).w, w_reim_out);
    });
}

sbf_status sbf_cayley_point_inv(const double* w_reim, int n, double* z_reim_out) {
    if (auto s = require_c(w_reim && z_reim_out && n >= 1, "bad argument")) return s;
    return guarded([&] {
        pack(sbf::cayley_point_inv(sbf::HalfPlanePoint::checked(unpack(w_reim, n))).z,
             z_reim_out);
    });
}

sbf_status sbf_psi(double x, double y, const double* u_reim, int n, double* w_reim_out) {
    if (auto s = require_c(w_reim_out && n >= 1 && (n == 1 || u_reim), "bad argument")) return s;
    return guarded([&] { pack(sbf::psi(x, y, unpack(u_reim, n - 1)), w_reim_out); });
}

sbf_status sbf_invariant_density(const double* p_reim, int n, int half_plane, double* out) {
    if (auto s = require_c(p_reim && out && n >= 1, "bad argument")) return s;
    return guarded([&] {
        const Eigen::VectorXcd p = unpack(p_reim, n);
        *out = half_plane ? sbf::invariant_density(sbf::HalfPlanePoint::checked(p))
                          : sbf::invariant_density(sbf::BallPoint::checked(p));
    });
}

/* --- super functions --------------------------------------------------------- */

sbf_status sbf_super_function_parse(const char* json, sbf_super_function** out) {
    if (auto s = require_c(json && out, "null argument")) return s;
    return guarded([&] {
        sbf::Json j = sbf::Json::parse(json, nullptr, false);
        sbf::require(!j.is_discarded(), sbf::ErrorCode::Schema, "invalid JSON");
        *out = new sbf_super_function{sbf::super_function_from_json(j)};
    });
}

sbf_status sbf_super_function_info(const sbf_super_function* f, int* n_out, int* r_out,
                                   int* weight_out, int* half_plane_out) {
    if (auto s = require_c(f != nullptr, "null argument")) return s;
    if (n_out) *n_out = f->value.n();
    if (r_out) *r_out = f->value.r();
    if (weight_out) *weight_out = f->value.weight();
    if (half_plane_out)
        *half_plane_out = f->value.domain() == sbf::Realization::HalfPlane ? 1 : 0;
    return SBF_OK;
}

sbf_status sbf_super_function_slash(const sbf_super_function* f, const sbf_group_element* g,
                                    sbf_super_function** out) {
    if (auto s = require_c(f && g && out, "null argument")) return s;
    return guarded([&] { *out = new sbf_super_function{sbf::slash(f->value, g->value)}; });
}

sbf_status sbf_super_function_slash_cayley(const sbf_super_function* f_on_h,
                                           sbf_super_function** out) {
    if (auto s = require_c(f_on_h && out, "null argument")) return s;
    return guarded([&] { *out = new sbf_super_function{sbf::slash_cayley(f_on_h->value)}; });
}

sbf_status sbf_super_function_slash_cayley_inv(const sbf_super_function* f_on_b,
                                               sbf_super_function** out) {
    if (auto s = require_c(f_on_b && out, "null argument")) return s;
    return guarded([&] { *out = new sbf_super_function{sbf::slash_cayley_inv(f_on_b->value)}; });
}

sbf_status sbf_super_function_eval(const sbf_super_function* f, const double* p_reim,
                                   char** json_out) {
    if (auto s = require_c(f && p_reim && json_out, "null argument")) return s;
    return guarded([&] {
        const Eigen::VectorXcd p = unpack(p_reim, f->value.n());
        if (f->value.domain() == sbf::Realization::Ball)
            sbf::require(sbf::in_ball(p), sbf::ErrorCode::Domain, "point outside the ball");
        else
            sbf::require(sbf::in_half_plane(p), sbf::ErrorCode::Domain,
                         "point outside the half plane");
        *json_out = dup_string(coeffs_json(f->value.eval_raw(p)).dump());
    });
}

sbf_status sbf_super_function_lift(const sbf_super_function* f, const sbf_group_element* g,
                                   char** json_out) {
    if (auto s = require_c(f && g && json_out, "null argument")) return s;
    return guarded(
        [&] { *json_out = dup_string(coeffs_json(sbf::lift(f->value, g->value)).dump()); });
}

sbf_status sbf_super_function_amplitude(const sbf_super_function* f, const double* p_reim,
                                        double* out) {
    if (auto s = require_c(f && p_reim && out, "null argument")) return s;
    return guarded([&] {
        const Eigen::VectorXcd p = unpack(p_reim, f->value.n());
        *out = f->value.domain() == sbf::Realization::Ball
                   ? sbf::amplitude(f->value, sbf::BallPoint::checked(p))
                   : sbf::amplitude(f->value, sbf::HalfPlanePoint::checked(p));
    });
}

void sbf_super_function_free(sbf_super_function* f) { delete f; }

/* --- cusp Fourier analysis -------------------------------------------------- */

sbf_status sbf_frequency_lattice(const char* cusp_json, const int* odd_index, int odd_count,
                                 int r, int k, int j_min, int j_max, double* out,
                                 size_t out_capacity, size_t* count_out) {
    if (auto s = require_c(cusp_json && count_out && (odd_count == 0 || odd_index),
                           "null argument"))
        return s;
    return guarded([&] {
        const auto lattice = sbf::frequency_lattice(cusp_of(cusp_json),
                                                    index_of(odd_index, odd_count, r), k, j_min,
                                                    j_max);
        *count_out = lattice.size();
        sbf::require(!out || out_capacity >= lattice.size(), sbf::ErrorCode::InvalidArgument,
                     "output buffer too small");
        if (out)
            for (size_t i = 0; i < lattice.size(); ++i) out[i] = lattice[i];
    });
}

sbf_status sbf_fourier_coefficient(const sbf_super_function* f, const int* odd_index,
                                   int odd_count, double m, const double* base_reim,
                                   const char* cusp_json, int quad_points, double out_reim[2]) {
    if (auto s = require_c(f && base_reim && cusp_json && out_reim &&
                               (odd_count == 0 || odd_index),
                           "null argument"))
        return s;
    return guarded([&] {
        const sbf::MultiIndex idx = index_of(odd_index, odd_count, f->value.r());
        const auto& comps = f->value.components();
        auto it = comps.find(idx);
        sbf::require(it != comps.end(), sbf::ErrorCode::InvalidArgument,
                     "function has no component with this odd index");
        const sbf::HalfPlanePoint base =
            sbf::HalfPlanePoint::checked(unpack(base_reim, f->value.n()));
        const sbf::Complex c = sbf::fourier_coefficient(it->second.fn, m, base,
                                                        cusp_of(cusp_json), quad_points);
        out_reim[0] = c.real();
        out_reim[1] = c.imag();
    });
}

/* --- integrability classifier ------------------------------------------------ */

sbf_status sbf_weight_threshold(int n, int rho, int* out) {
    if (auto s = require_c(out != nullptr, "null output")) return s;
    return guarded([&] { *out = sbf::weight_threshold(n, rho); });
}

sbf_status sbf_tail_dichotomy(double m0, int k, int rho, int n, double s, double x0,
                              int* finite_out, double* bound_out) {
    if (auto st = require_c(finite_out != nullptr, "null output")) return st;
    return guarded([&] {
        const sbf::TailVerdict v = sbf::tail_dichotomy(m0, k, rho, n, s, x0);
        *finite_out = v.finite ? 1 : 0;
        if (v.finite && bound_out) *bound_out = v.bound;
    });
}

sbf_status sbf_ls_norm(const sbf_super_function* f, const int* odd_index, int odd_count,
                       double s, const char* region_json, int doublings, int threads,
                       char** json_out) {
    if (auto st = require_c(f && region_json && json_out && (odd_count == 0 || odd_index),
                            "null argument"))
        return st;
    return guarded([&] {
        sbf::Json rj = sbf::Json::parse(region_json, nullptr, false);
        sbf::require(!rj.is_discarded(), sbf::ErrorCode::Schema, "invalid region JSON");
        const sbf::Region region = sbf::region_from_json(rj);
        const sbf::MultiIndex idx = index_of(odd_index, odd_count, f->value.r());
        const auto& comps = f->value.components();
        auto it = comps.find(idx);
        sbf::require(it != comps.end(), sbf::ErrorCode::InvalidArgument,
                     "function has no component with this odd index");
        const sbf::LsNormResult res =
            sbf::ls_norm(it->second.fn, f->value.weight(), idx, s, region, doublings, threads);
        sbf::Json j;
        j["value"] = res.value;
        j["partials"] = res.partials;
        j["x_max_seq"] = res.x_max_seq;
        j["diagnostic"] = res.diagnostic;
        *json_out = dup_string(j.dump());
    });
}

/* --- batch jobs --------------------------------------------------------------- */

sbf_status sbf_job_run(const char* job_json, int threads, long long seed_override,
                       double tol_override, int plots_override, sbf_job_result** out) {
    if (auto s = require_c(job_json && out, "null argument")) return s;
    return guarded([&] {
        sbf::jobs::RunOptions opts;
        opts.threads = threads;
        if (seed_override >= 0) opts.seed = seed_override;
        if (!std::isnan(tol_override)) opts.tol = tol_override;
        if (plots_override >= 0) opts.plots = plots_override != 0;
        auto result = sbf::jobs::run_job_text(job_json, opts);
        auto* handle = new sbf_job_result{std::move(result), {}};
        handle->report_text = handle->value.report.dump(2);
        *out = handle;
    });
}

int sbf_job_result_exit_code(const sbf_job_result* res) {
    return res ? res->value.exit_code : 2;
}

const char* sbf_job_result_report(const sbf_job_result* res) {
    return res ? res->report_text.c_str() : "";
}

size_t sbf_job_result_artifact_count(const sbf_job_result* res) {
    return res ? res->value.artifacts.size() : 0;
}

const char* sbf_job_result_artifact_name(const sbf_job_result* res, size_t idx) {
    if (!res || idx >= res->value.artifacts.size()) return nullptr;
    return res->value.artifacts[idx].name.c_str();
}

const char* sbf_job_result_artifact_content(const sbf_job_result* res, size_t idx) {
    if (!res || idx >= res->value.artifacts.size()) return nullptr;
    return res->value.artifacts[idx].content.c_str();
}

void sbf_job_result_free(sbf_job_result* res) { delete res; }

void sbf_string_free(char* s) { std::free(s); }

} // extern "C"
