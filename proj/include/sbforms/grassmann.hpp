#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sbforms/errors.hpp"

namespace sbf {

using Complex = std::complex<double>;

// Subset of {1,...,r} stored as a bitset, lowest bit = index 1. Monomials are
// always kept in strictly increasing factor order, so the bitset alone
// determines the basis element.
class MultiIndex {
public:
    static constexpr int kMaxRank = 16;

    MultiIndex() = default;
    explicit MultiIndex(std::uint32_t bits) : bits_(bits) {}

    static MultiIndex empty() { return MultiIndex(0); }

    // Builds from 1-based indices; rejects duplicates and out-of-range entries.
    static MultiIndex from_indices(const std::vector<int>& indices, int r);

    std::uint32_t bits() const { return bits_; }
    int cardinality() const { return __builtin_popcount(bits_); }
    bool contains(int index_1based) const { return (bits_ >> (index_1based - 1)) & 1u; }
    bool disjoint(MultiIndex other) const { return (bits_ & other.bits_) == 0; }

    std::vector<int> indices() const; // ascending, 1-based

    bool operator==(const MultiIndex& o) const { return bits_ == o.bits_; }
    bool operator<(const MultiIndex& o) const { return bits_ < o.bits_; }

    std::string to_string() const; // "{}", "{1}", "{1,3}"

private:
    std::uint32_t bits_ = 0;
};

struct Wedge {
    int sign = 0; // +1 or -1; 0 encodes the zero product
    MultiIndex index;
    bool is_zero() const { return sign == 0; }
};

// zeta^I wedge zeta^J. Zero iff the index sets intersect; otherwise the union
// with the sign of the permutation sorting (I, J) into increasing order.
Wedge wedge(MultiIndex i, MultiIndex j);

// Coefficient vector on the monomial basis of Lambda(C^r). The full sector
// Lambda(C^{2r}) is the same type with 2r generators.
class GrassmannVector {
public:
    explicit GrassmannVector(int generators);

    int generators() const { return generators_; }

    void add(MultiIndex idx, Complex coeff);
    void set(MultiIndex idx, Complex coeff);
    Complex coeff(MultiIndex idx) const;

    const std::map<MultiIndex, Complex>& coeffs() const { return coeffs_; }

    GrassmannVector& operator+=(const GrassmannVector& other);
    GrassmannVector& operator*=(Complex scale);

    double norm() const;

private:
    int generators_;
    std::map<MultiIndex, Complex> coeffs_; // absent entries are zero
};

// (E theta)^I expanded over basis monomials: sum over |J| = |I| of
// det(E[I;J]) theta^J, with E[I;J] the submatrix rows I, columns J.
GrassmannVector exterior_action(const Eigen::MatrixXcd& e, MultiIndex i);

// Canonical scalar product: basis monomials are orthonormal; semi-linear in
// the second entry.
Complex scalar_product(const GrassmannVector& a, const GrassmannVector& b);

// Minor determinant det(E[rows; cols]) with rows/cols as multi-indices of
// equal cardinality. Laplace expansion up to 4x4, LU above.
Complex minor_det(const Eigen::MatrixXcd& e, MultiIndex rows, MultiIndex cols);

} // namespace sbf
