#pragma once

#include "fglfans/fan.hpp"
#include "fglfans/series.hpp"

#include <map>
#include <memory>
#include <vector>

namespace fglfans {

// The graded power series ring attached to a cone: one variable per
// dimension, dual to the chosen basis of Span(cone) meet Z^n.
struct Stalk {
    std::shared_ptr<const GradedRing> ring;
    int num_vars = 0;
    intlin::IntMatrix lattice_basis; // num_vars x ambient_rank, saturated, canonical
};

Stalk build_stalk(const Cone& c, std::shared_ptr<const GradedRing> ring);

// Ring map S_sigma -> S_tau induced by Span(tau) subset Span(sigma): each
// source variable goes to the formal group law combination of the target
// variables given by the integer change of basis.
struct StalkMap {
    int source_vars = 0;
    int target_vars = 0;
    std::vector<GradedSeries> variable_images;
};

StalkMap stalk_map(const Stalk& source, const Stalk& target);
GradedSeries apply_stalk_map(const StalkMap& m, const GradedSeries& f);

// Matrix of the map on degree-d free coordinates.
intlin::IntMatrix stalk_map_matrix(const StalkMap& m, const SeriesLayout& source,
                                   const SeriesLayout& target);

// A fan or a closed star inside it, as a list of cone indices.
struct SheafDomain {
    std::shared_ptr<const Fan> fan;
    std::vector<int> cones;   // sorted
    std::vector<int> maximal; // maximal elements of the domain
};

SheafDomain fan_domain(std::shared_ptr<const Fan> fan);
SheafDomain star_domain(std::shared_ptr<const Fan> fan, int rho);

// A family of degree-d series over the maximal cones of a domain.
struct PiecewiseSeries {
    SheafDomain domain;
    int degree = 0;
    std::map<int, GradedSeries> values;
};

// Stalks and restriction maps over one fan and one coefficient ring.
class SheafSystem {
public:
    SheafSystem(std::shared_ptr<const Fan> fan, std::shared_ptr<const GradedRing> ring);

    const std::shared_ptr<const Fan>& fan() const { return fan_; }
    const std::shared_ptr<const GradedRing>& ring() const { return ring_; }
    const Stalk& stalk(int cone) const { return stalks_[cone]; }

    // tau must be a face of sigma
    StalkMap restriction(int sigma, int tau) const;

    // value of a global section on any domain cone (restricted from the
    // first containing maximal cone)
    GradedSeries value_at(const PiecewiseSeries& p, int cone) const;

private:
    std::shared_ptr<const Fan> fan_;
    std::shared_ptr<const GradedRing> ring_;
    std::vector<Stalk> stalks_;
};

bool is_global_section(const SheafSystem& sys, const PiecewiseSeries& p, bool all_faces = false);

PiecewiseSeries unit_section(const SheafSystem& sys, const SheafDomain& domain);
PiecewiseSeries pps_multiply(const SheafSystem& sys, const PiecewiseSeries& p,
                             const PiecewiseSeries& q);
PiecewiseSeries restrict_to_star(const SheafSystem& sys, const PiecewiseSeries& p, int rho);

struct SolveOptions {
    bool parallel = true;
    bool all_faces = false; // exhaustive constraint assembly for cross-validation
};

// The degree-d piece of the section module, with its coordinate layout.
struct SectionModule {
    SheafDomain domain;
    int degree = 0;
    std::shared_ptr<const GradedRing> ring;
    std::vector<SeriesLayout> layouts; // per domain-maximal cone
    std::vector<int> offsets;
    int total_dim = 0;
    intlin::IntMatrix basis; // rows = sections, saturated canonical basis

    int rank() const { return basis.rows(); }
};

// Layouts and offsets only; the basis starts empty.
SectionModule section_module_shape(const SheafSystem& sys, const SheafDomain& domain, int degree);

SectionModule global_sections(const SheafSystem& sys, const SheafDomain& domain, int degree,
                              SolveOptions options = {});

PiecewiseSeries section_from_coords(const SectionModule& mod, const std::vector<Int>& coords);
PiecewiseSeries module_basis_section(const SectionModule& mod, int index);
std::vector<Int> section_coords(const SectionModule& mod, const PiecewiseSeries& p);

// Pullback of a global section along a subdivision; the result is a global
// section on the refined fan and the map is a ring homomorphism.
PiecewiseSeries pullback_subdivision(const SubdivisionMap& sub, const SheafSystem& target_sys,
                                     const SheafSystem& source_sys, const PiecewiseSeries& p);

// Coordinate matrix of a sheaf transfer: block bi of `to` is filled from the
// cone source_cone_per_block[bi] of the `from` domain (restricting through
// the first containing maximal cone). On global sections the choice of
// containing cone does not matter.
intlin::IntMatrix transfer_matrix(const SheafSystem& from_sys, const SectionModule& from,
                                  const SheafSystem& to_sys, const SectionModule& to,
                                  const std::vector<int>& source_cone_per_block);

struct Specialization;
// Stalk-wise specialization of a section family (universal coefficients to a
// concrete law); global sections map to global sections.
PiecewiseSeries specialize_section(const Specialization& s, const PiecewiseSeries& p);

} // namespace fglfans
