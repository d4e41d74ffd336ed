#pragma once

#include "fglfans/graded_ring.hpp"
#include "fglfans/series.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace fglfans {

// Variables A[i,j] with 1 <= i <= j and i+j-1 <= truncation, sorted by
// (i+j, i); commutativity of the law is built into the variable set.
struct LazardVariables {
    explicit LazardVariables(int truncation);
    std::vector<std::pair<int, int>> labels;
    int count() const { return static_cast<int>(labels.size()); }
    int index(int i, int j) const; // symmetric lookup
    Monomial unit_monomial(int i, int j) const;
};

// Coefficient polynomials of the formal group law axiom residuals over
// Z[A[i,j]], keyed by the exponent of the series monomial they multiply.
// Expansion runs to total degree truncation+1, the largest degree whose
// coefficients still land in the truncated coefficient ring.
struct AxiomResiduals {
    int truncation = 0;
    std::map<Monomial, SparseRingPoly> unit;          // F(u,0) - u, one slot
    std::map<Monomial, SparseRingPoly> commutativity; // F(u,v) - F(v,u), two slots
    std::map<Monomial, SparseRingPoly> associativity; // F(F(u,v),w) - F(u,F(v,w)), three slots
};
AxiomResiduals fgl_axiom_residuals(int truncation);

// The coefficient ring of the universal formal group law, truncated:
// Z[A[i,j]] modulo the graded pieces of the associativity relation ideal.
std::shared_ptr<const GradedRing> build_lazard_ring(int truncation);

// Canonical element from a homogeneous polynomial in the A[i,j]; rejects
// non-homogeneous input.
RingElem lazard_normal_form(const std::shared_ptr<const GradedRing>& ring, const SparseRingPoly& p);

struct GradedRankReport {
    int rank = 0;
    std::vector<Int> torsion_invariants; // empty when the piece is free
};
GradedRankReport graded_rank(const GradedRing& ring, int k);

// Evaluation of the universal law in a concrete coefficient ring.
struct Specialization {
    std::shared_ptr<const GradedRing> source;
    std::shared_ptr<const GradedRing> target;
    std::vector<RingElem> variable_images; // per source ring variable
};

Specialization specialize_additive(std::shared_ptr<const GradedRing> lazard);
Specialization specialize_multiplicative(std::shared_ptr<const GradedRing> lazard);

RingElem apply_specialization(const Specialization& s, const RingElem& x);
GradedSeries apply_specialization(const Specialization& s, const GradedSeries& f);

// Per-degree monomial basis and relation matrix, for fixture regression.
std::string dump_ring(const GradedRing& ring);

} // namespace fglfans
