#pragma once

#include "fglfans/fan.hpp"
#include "fglfans/graded_ring.hpp"

#include <array>
#include <map>
#include <memory>
#include <vector>

// Brute-force reference solvers used to cross-check the main pipeline. The
// piecewise polynomial path works with dense polynomials in ambient dual
// coordinates and never touches stalk bases or the formal group law.
namespace fglfans::oracles {

using PolyMap = std::map<Monomial, Int>; // ambient-variable exponents -> coefficient

Int evaluate_poly(const PolyMap& p, const Vec& point);

// substitute x = y * basis into a polynomial (restriction to a sublattice)
PolyMap restrict_poly(const PolyMap& p, const intlin::IntMatrix& basis);

struct PolynomialSections {
    int degree = 0;
    int rank = 0;                            // rank of the function module
    int tuple_rank = 0;                      // rank of the raw tuple lattice
    std::vector<int> cones;                  // maximal cone indices, block order
    std::vector<std::vector<PolyMap>> basis; // tuple basis, one polynomial per block
};

// Integral piecewise polynomial functions of homogeneous degree d on the fan.
PolynomialSections pp_global_sections(const Fan& fan, int degree);

struct ChowComparisonRow {
    int degree = 0;
    int pp_rank = 0;
    int specialized_rank = 0;
};

struct ChowComparisonReport {
    bool match = true;
    int witness_degree = -1;
    std::vector<ChowComparisonRow> rows;
};

// Ranks of the additively specialized sheaf solver against the independent
// polynomial solver, for 0 <= d <= max_degree.
ChowComparisonReport compare_with_additive_specialization(std::shared_ptr<const Fan> fan,
                                                          int max_degree, int truncation);

} // namespace fglfans::oracles
