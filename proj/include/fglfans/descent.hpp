#pragma once

#include "fglfans/pps.hpp"

#include <memory>
#include <string>

namespace fglfans {

// The gluing square of a star subdivision: sections on the coarse fan, the
// refined fan, the star of the subdivided cone and the star of the new ray.
struct DescentSquare {
    SubdivisionMap sub;
    int cone_pi = -1;  // in sub.target: smallest cone containing the center
    int cone_rho = -1; // in sub.source: the center ray
};

DescentSquare make_descent_square(SubdivisionMap sub);

struct GluingReport {
    int degree = 0;
    int rank_coarse = 0;
    int rank_fine = 0;
    int rank_star_pi = 0;
    int rank_star_rho = 0;
    bool commutes = false;
    bool injective = false;
    bool exact = false;
    std::string witness;

    bool cartesian() const { return commutes && injective && exact; }
};

// Verifies commutativity of the square, injectivity of the coarse-to-fine
// pullback, and the fiber-product description of the coarse sections.
GluingReport check_cartesian(const DescentSquare& sq, int degree,
                             std::shared_ptr<const GradedRing> ring, SolveOptions options = {});

// The map of section modules PPS(St pi) -> PPS(St rho) on free coordinates.
intlin::IntMatrix star_pullback_matrix(const DescentSquare& sq, const SheafSystem& coarse_sys,
                                       const SheafSystem& fine_sys, const SectionModule& from,
                                       const SectionModule& to);

struct ResolutionRouteReport {
    bool match = false;
    int direct_rank = 0;
    int resolution_rank = 0;
    int steps = 0;
};

struct ResolutionResult {
    SectionModule sections; // on the input fan, via descent through the resolution
    ResolutionRouteReport report;
};

// Computes the sections by resolving the fan, solving on the smooth end and
// descending step by step; asserts agreement with the direct solver.
ResolutionResult compute_via_resolution(std::shared_ptr<const Fan> fan, int degree,
                                        std::shared_ptr<const GradedRing> ring,
                                        ResolveOrder order = ResolveOrder::canonical,
                                        SolveOptions options = {});

} // namespace fglfans
