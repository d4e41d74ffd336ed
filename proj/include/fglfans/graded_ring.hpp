#pragma once

#include "fglfans/intlin.hpp"

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace fglfans {

// Exponent vector; the variable list it refers to is contextual (ring
// variables or power series variables).
using Monomial = std::vector<int>;

struct GradedLexLess {
    bool operator()(const Monomial& a, const Monomial& b) const;
};

int monomial_total(const Monomial& m);

// All exponent vectors e >= 0 with sum e_i * weights_i == target, sorted.
std::vector<Monomial> enumerate_weighted_monomials(const std::vector<int>& weights, int target);

struct RingVariable {
    std::string name;
    int weight; // positive; the cohomological degree is -weight
};

// Sparse homogeneous polynomial in the ring variables.
using SparseRingPoly = std::vector<std::pair<Monomial, Int>>;

class GradedRing;

// An element of one graded piece, kept in normal form at all times.
class RingElem {
public:
    RingElem() = default;
    RingElem(const GradedRing* ring, int weight, std::vector<Int> coords);

    const GradedRing* ring() const { return ring_; }
    int weight() const { return weight_; }
    const std::vector<Int>& coords() const { return coords_; }

    bool is_zero() const;
    bool operator==(const RingElem& other) const;

    RingElem operator+(const RingElem& other) const;
    RingElem operator-(const RingElem& other) const;
    RingElem operator-() const;
    RingElem operator*(const RingElem& other) const;
    RingElem scaled(const Int& k) const;

private:
    const GradedRing* ring_ = nullptr;
    int weight_ = 0;
    std::vector<Int> coords_;
};

// A graded ring concentrated in cohomological degrees -D..0 whose piece of
// degree -k is the free abelian group on the weight-k monomials in the ring
// variables, modulo a relation sublattice. Carries the coefficients of a
// formal group law. Immutable after construction.
class GradedRing {
public:
    GradedRing(std::string name,
               int truncation,
               std::vector<RingVariable> variables,
               const std::vector<SparseRingPoly>& relations,
               const std::map<std::pair<int, int>, SparseRingPoly>& fgl_coefficients);

    const std::string& name() const { return name_; }
    int truncation() const { return truncation_; }
    int num_variables() const { return static_cast<int>(variables_.size()); }
    const RingVariable& variable(int i) const { return variables_[i]; }

    bool piece_exists(int k) const { return k >= 0 && k <= truncation_; }
    const std::vector<Monomial>& monomials(int k) const;
    int monomial_index(int k, const Monomial& m) const; // -1 when absent
    int num_generators(int k) const;
    int free_rank(int k) const;
    const intlin::LatticeSubspace& relation_lattice(int k) const;

    std::vector<Int> normal_form(int k, std::vector<Int> coords) const;
    std::vector<Int> free_coords(int k, const std::vector<Int>& coords) const;
    std::vector<Int> lift_free_coords(int k, const std::vector<Int>& free) const;

    RingElem zero(int weight) const;
    RingElem one() const;
    RingElem element(int weight, std::vector<Int> coords) const;
    RingElem from_poly(int weight, const SparseRingPoly& poly) const;
    RingElem fgl_coefficient(int i, int j) const; // a_{i,j}, defined for i+j-1 <= D

    RingElem add(const RingElem& a, const RingElem& b) const;
    RingElem mul(const RingElem& a, const RingElem& b) const;

private:
    struct Piece {
        std::vector<Monomial> monomials;
        std::map<Monomial, int> index;
        intlin::LatticeSubspace relations;  // canonical row-HNF basis
        intlin::IntMatrix reduce_cols;      // column hermite form of relations^T
        std::vector<std::pair<int, int>> reduce_pivots;
        int free_rank = 0;
        intlin::IntMatrix proj; // free_rank x g
        intlin::IntMatrix lift; // free_rank x g (rows lift unit free coords)
    };

    const Piece& piece(int k) const;

    std::string name_;
    int truncation_ = 0;
    std::vector<RingVariable> variables_;
    std::vector<Piece> pieces_;
    std::map<std::pair<int, int>, RingElem> fgl_;
};

// Z concentrated in degree 0; the formal group law becomes u + v.
std::shared_ptr<const GradedRing> make_additive_ring(int truncation);

// Z[b] with b of cohomological degree -1, truncated at b^D; the formal
// group law becomes u + v - b*u*v.
std::shared_ptr<const GradedRing> make_multiplicative_ring(int truncation);

} // namespace fglfans
