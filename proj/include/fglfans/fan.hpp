#pragma once

#include "fglfans/intlin.hpp"

#include <memory>
#include <string>
#include <vector>

namespace fglfans {

using Vec = std::vector<Int>;

// A strongly convex rational polyhedral cone given by its primitive extreme
// ray generators (rows, sorted lexicographically).
struct Cone {
    int ambient_rank = 0;
    intlin::IntMatrix rays;
    int dim = 0;

    int num_rays() const { return rays.rows(); }
};

// Canonicalizes and checks the generator list: primitive, pointed, extreme.
Cone make_cone(int ambient_rank, std::vector<Vec> rays);

// All faces as subsets of ray positions (sorted, includes {} and the full set).
std::vector<std::vector<int>> face_ray_subsets(const Cone& c);
std::vector<Cone> faces(const Cone& c);

// Inward facet normals in ambient coordinates: f * ray >= 0 for all rays,
// with equality exactly on the facet.
std::vector<Vec> ambient_facet_normals(const Cone& c);

bool cone_contains(const Cone& c, const Vec& x);
bool in_relative_interior(const Cone& c, const Vec& x);

// Generators extend to a lattice basis (simplicial of multiplicity one).
bool is_smooth(const Cone& c);

// Multiplicity of a simplicial cone (index of the generator lattice in the
// saturated span lattice).
Int cone_multiplicity(const Cone& c);

struct ValidationReport {
    bool valid = true;
    std::vector<std::string> violations;
};

ValidationReport validate_fan(int rank, const std::vector<Vec>& rays,
                              const std::vector<std::vector<int>>& cones);

class Fan {
public:
    // Builds the face closure from generating cones; throws InputError when
    // validation fails (pass validate = false to skip the pairwise checks).
    static std::shared_ptr<const Fan> build(int rank, std::vector<Vec> rays,
                                            std::vector<std::vector<int>> cones,
                                            bool validate = true);

    int rank() const { return rank_; }
    int num_rays() const { return static_cast<int>(rays_.size()); }
    const Vec& ray(int i) const { return rays_[i]; }
    int ray_index(const Vec& v) const; // -1 when absent

    int num_cones() const { return static_cast<int>(cones_.size()); }
    const std::vector<int>& cone_rays(int i) const { return cones_[i]; }
    int cone_dim(int i) const { return dims_[i]; }
    const Cone& cone(int i) const { return materialized_[i]; }
    int cone_index(const std::vector<int>& sorted_rays) const; // -1 when absent
    int zero_cone() const { return zero_cone_; }

    const std::vector<int>& faces_of(int i) const { return faces_of_[i]; }
    bool is_face(int small, int big) const;
    const std::vector<int>& maximal_cones() const { return maximal_; }
    bool is_maximal(int i) const;

    // Index of the common face of two cones.
    int intersection(int a, int b) const;

    // All cones having `rho` as a face (the closed star).
    std::vector<int> star(int rho) const;

    // The unique smallest cone containing v, -1 when v is outside the support.
    int smallest_containing(const Vec& v) const;
    // Smallest cone containing a whole cone of another fan.
    int smallest_containing_cone(const Cone& c) const;

    bool all_cones_smooth() const;

    std::string to_json() const;
    static std::shared_ptr<const Fan> from_json(const std::string& text, bool validate = true);

private:
    int rank_ = 0;
    std::vector<Vec> rays_;
    std::vector<std::vector<int>> cones_; // sorted ray-index lists, canonical order
    std::vector<int> dims_;
    std::vector<Cone> materialized_;
    std::vector<std::vector<int>> faces_of_;
    std::vector<std::vector<bool>> is_face_;
    std::vector<int> maximal_;
    int zero_cone_ = -1;
};

// A refinement Delta' -> Delta with the same support; phi maps each cone of
// the source to the smallest cone of the target containing it.
struct SubdivisionMap {
    std::shared_ptr<const Fan> target; // coarse fan
    std::shared_ptr<const Fan> source; // refined fan
    Vec center;
    bool center_is_new_ray = true;
    std::vector<int> cone_map; // source cone index -> target cone index
};

// Star subdivision at a new primitive ray in the support.
SubdivisionMap star_subdivision(std::shared_ptr<const Fan> f, const Vec& v);

// Stellar refinement at an existing ray: non-simplicial cones containing the
// ray are split; simplicial ones are untouched. Used by resolve.
SubdivisionMap stellar_at_existing_ray(std::shared_ptr<const Fan> f, int ray_index);

enum class ResolveOrder { canonical, alternate };

// Chain of star subdivisions ending in a smooth fan: first stellar
// refinements at existing rays until simplicial, then multiplicity reduction
// at fundamental-parallelepiped points.
std::vector<SubdivisionMap> resolve(std::shared_ptr<const Fan> f,
                                    ResolveOrder order = ResolveOrder::canonical);

} // namespace fglfans
