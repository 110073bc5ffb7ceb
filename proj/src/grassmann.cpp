#include "sbforms/grassmann.hpp"

#include <sstream>

namespace sbf {

MultiIndex MultiIndex::from_indices(const std::vector<int>& indices, int r) {
    require(r >= 0 && r <= kMaxRank, ErrorCode::InvalidArgument, "rank out of range [0,16]");
    std::uint32_t bits = 0;
    for (int idx : indices) {
        require(idx >= 1 && idx <= r, ErrorCode::InvalidArgument,
                "multi-index entry " + std::to_string(idx) + " outside {1,...," + std::to_string(r) + "}");
        const std::uint32_t bit = 1u << (idx - 1);
        require((bits & bit) == 0, ErrorCode::InvalidArgument, "repeated multi-index entry");
        bits |= bit;
    }
    return MultiIndex(bits);
}

std::vector<int> MultiIndex::indices() const {
    std::vector<int> out;
    for (int i = 0; i < kMaxRank; ++i)
        if ((bits_ >> i) & 1u) out.push_back(i + 1);
    return out;
}

std::string MultiIndex::to_string() const {
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (int i : indices()) {
        if (!first) os << ',';
        os << i;
        first = false;
    }
    os << '}';
    return os.str();
}

Wedge wedge(MultiIndex i, MultiIndex j) {
    if (!i.disjoint(j)) return {};
    // Each factor of J moves left past the factors of I that exceed it; count
    // those transpositions.
    int inversions = 0;
    for (int b : j.indices()) inversions += __builtin_popcount(i.bits() >> b);
    Wedge w;
    w.sign = (inversions % 2 == 0) ? 1 : -1;
    w.index = MultiIndex(i.bits() | j.bits());
    return w;
}

GrassmannVector::GrassmannVector(int generators) : generators_(generators) {
    require(generators >= 0 && generators <= 2 * MultiIndex::kMaxRank, ErrorCode::InvalidArgument,
            "generator count out of range");
}

void GrassmannVector::add(MultiIndex idx, Complex coeff) {
    auto [it, inserted] = coeffs_.try_emplace(idx, coeff);
    if (!inserted) it->second += coeff;
    if (it->second == Complex(0.0, 0.0)) coeffs_.erase(it);
}

void GrassmannVector::set(MultiIndex idx, Complex coeff) {
    if (coeff == Complex(0.0, 0.0))
        coeffs_.erase(idx);
    else
        coeffs_[idx] = coeff;
}

Complex GrassmannVector::coeff(MultiIndex idx) const {
    auto it = coeffs_.find(idx);
    return it == coeffs_.end() ? Complex(0.0, 0.0) : it->second;
}

GrassmannVector& GrassmannVector::operator+=(const GrassmannVector& other) {
    require(generators_ == other.generators_, ErrorCode::Dimension, "mismatched generator count");
    for (const auto& [idx, c] : other.coeffs_) add(idx, c);
    return *this;
}

GrassmannVector& GrassmannVector::operator*=(Complex scale) {
    if (scale == Complex(0.0, 0.0)) {
        coeffs_.clear();
        return *this;
    }
    for (auto& [idx, c] : coeffs_) c *= scale;
    return *this;
}

double GrassmannVector::norm() const {
    double s = 0.0;
    for (const auto& [idx, c] : coeffs_) s += std::norm(c);
    return std::sqrt(s);
}

Complex scalar_product(const GrassmannVector& a, const GrassmannVector& b) {
    require(a.generators() == b.generators(), ErrorCode::Dimension, "mismatched generator count");
    Complex s(0.0, 0.0);
    for (const auto& [idx, ca] : a.coeffs()) {
        Complex cb = b.coeff(idx);
        if (cb != Complex(0.0, 0.0)) s += ca * std::conj(cb);
    }
    return s;
}

namespace {

Complex det_laplace(const Eigen::MatrixXcd& m) {
    const auto n = m.rows();
    if (n == 0) return {1.0, 0.0};
    if (n == 1) return m(0, 0);
    if (n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    // expand along the first row
    Complex det(0.0, 0.0);
    double sign = 1.0;
    for (Eigen::Index col = 0; col < n; ++col) {
        Eigen::MatrixXcd sub(n - 1, n - 1);
        for (Eigen::Index i = 1; i < n; ++i) {
            Eigen::Index cj = 0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j == col) continue;
                sub(i - 1, cj++) = m(i, j);
            }
        }
        det += sign * m(0, col) * det_laplace(sub);
        sign = -sign;
    }
    return det;
}

} // namespace

Complex minor_det(const Eigen::MatrixXcd& e, MultiIndex rows, MultiIndex cols) {
    require(rows.cardinality() == cols.cardinality(), ErrorCode::InvalidArgument,
            "minor requires equally sized row and column sets");
    const auto ri = rows.indices();
    const auto ci = cols.indices();
    const int p = static_cast<int>(ri.size());
    for (int idx : ri)
        require(idx <= e.rows(), ErrorCode::Dimension, "row index exceeds matrix size");
    for (int idx : ci)
        require(idx <= e.cols(), ErrorCode::Dimension, "column index exceeds matrix size");
    Eigen::MatrixXcd sub(p, p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) sub(i, j) = e(ri[i] - 1, ci[j] - 1);
    if (p <= 4) return det_laplace(sub);
    return Eigen::FullPivLU<Eigen::MatrixXcd>(sub).determinant();
}

GrassmannVector exterior_action(const Eigen::MatrixXcd& e, MultiIndex i) {
    require(e.rows() == e.cols(), ErrorCode::Dimension, "exterior action needs a square matrix");
    const int r = static_cast<int>(e.rows());
    require(r <= MultiIndex::kMaxRank, ErrorCode::Dimension, "rank above 16 unsupported");
    require(i.cardinality() == 0 || i.indices().back() <= r, ErrorCode::Dimension,
            "multi-index exceeds matrix rank");
    GrassmannVector out(r);
    const int p = i.cardinality();
    if (p == 0) {
        out.set(MultiIndex::empty(), Complex(1.0, 0.0));
        return out;
    }
    // Gosper's hack enumerates all subsets J with |J| = |I| in increasing
    // bitset order.
    const std::uint32_t limit = (r == 32) ? 0xffffffffu : ((1u << r) - 1u);
    std::uint32_t j = (1u << p) - 1u;
    while (j <= limit) {
        MultiIndex jj(j);
        Complex d = minor_det(e, i, jj);
        if (d != Complex(0.0, 0.0)) out.set(jj, d);
        const std::uint32_t c = j & (~j + 1u);
        const std::uint32_t rmask = j + c;
        if (c == 0 || rmask == 0) break;
        j = (((rmask ^ j) >> 2) / c) | rmask;
    }
    return out;
}

} // namespace sbf
