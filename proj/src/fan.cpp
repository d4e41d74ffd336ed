#include "fglfans/fan.hpp"

#include "fglfans/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace fglfans {

namespace {

using intlin::IntMatrix;
using intlin::LatticeSubspace;

enum class SolveOutcome { unique, inconsistent, underdetermined };

// Gauss-Jordan over Q on the system (columns | rhs).
SolveOutcome solve_columns_rational(const std::vector<Vec>& cols, const Vec& rhs,
                                    std::vector<Rational>& x) {
    int rows = static_cast<int>(rhs.size());
    int k = static_cast<int>(cols.size());
    std::vector<std::vector<Rational>> a(rows, std::vector<Rational>(k + 1));
    for (int i = 0; i < rows; ++i) {
        for (int c = 0; c < k; ++c) a[i][c] = Rational(cols[c][i]);
        a[i][k] = Rational(rhs[i]);
    }
    std::vector<int> pivot_row(k, -1);
    int r = 0;
    for (int c = 0; c < k && r < rows; ++c) {
        int p = -1;
        for (int i = r; i < rows; ++i)
            if (a[i][c] != 0) { p = i; break; }
        if (p < 0) continue;
        std::swap(a[r], a[p]);
        for (int i = 0; i < rows; ++i) {
            if (i == r || a[i][c] == 0) continue;
            Rational f = a[i][c] / a[r][c];
            for (int j = c; j <= k; ++j) a[i][j] -= f * a[r][j];
        }
        pivot_row[c] = r;
        ++r;
    }
    for (int i = r; i < rows; ++i)
        if (a[i][k] != 0) return SolveOutcome::inconsistent;
    for (int c = 0; c < k; ++c)
        if (pivot_row[c] < 0) return SolveOutcome::underdetermined;
    x.assign(k, Rational(0));
    for (int c = 0; c < k; ++c) x[c] = a[pivot_row[c]][k] / a[pivot_row[c]][c];
    return SolveOutcome::unique;
}

std::vector<Vec> matrix_rows(const IntMatrix& m) {
    std::vector<Vec> out;
    for (int i = 0; i < m.rows(); ++i) out.push_back(m.row(i));
    return out;
}

bool subsets_next(std::vector<int>& idx, int n) {
    // next k-subset of {0..n-1} in lexicographic order
    int k = static_cast<int>(idx.size());
    for (int i = k - 1; i >= 0; --i) {
        if (idx[i] < n - (k - i)) {
            ++idx[i];
            for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

template <typename F>
void for_each_subset(int n, int k, F&& f) {
    if (k < 0 || k > n) return;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    if (k == 0) {
        f(idx);
        return;
    }
    do {
        f(idx);
    } while (subsets_next(idx, n));
}

// 0 lies in the convex hull of the given nonzero vectors?
bool zero_in_convex_hull(const std::vector<Vec>& vecs, int rank) {
    int n = static_cast<int>(vecs.size());
    bool found = false;
    for (int k = 1; k <= std::min(n, rank + 1) && !found; ++k) {
        for_each_subset(n, k, [&](const std::vector<int>& idx) {
            if (found) return;
            std::vector<Vec> cols;
            for (int i : idx) {
                Vec c = vecs[i];
                c.push_back(1); // affine coordinate
                cols.push_back(std::move(c));
            }
            Vec rhs(rank, Int(0));
            rhs.push_back(1);
            std::vector<Rational> x;
            if (solve_columns_rational(cols, rhs, x) != SolveOutcome::unique) return;
            for (const Rational& c : x)
                if (c < 0) return;
            found = true;
        });
    }
    return found;
}

LatticeSubspace span_lattice(const Cone& c) {
    return intlin::saturate(LatticeSubspace{c.ambient_rank, c.rays});
}

// coordinates of the rays in the saturated span basis, rows per ray
IntMatrix rays_in_span_coords(const Cone& c, const IntMatrix& basis) {
    IntMatrix rho(c.num_rays(), basis.rows());
    IntMatrix bt = basis.transpose();
    for (int i = 0; i < c.num_rays(); ++i) {
        auto sol = intlin::solve(bt, c.rays.row(i));
        if (!sol) throw InternalError("cone ray outside its saturated span");
        for (int j = 0; j < basis.rows(); ++j) rho.at(i, j) = (*sol)[j];
    }
    return rho;
}

// facet data in span coordinates: inward normal and the ray positions on it
struct FacetData {
    Vec normal; // length = dim
    std::vector<int> rays;
};

std::vector<FacetData> facet_data(const Cone& c, const IntMatrix& rho) {
    int m = rho.cols();
    std::vector<FacetData> out;
    std::set<std::vector<int>> seen;
    if (m == 0) return out;
    if (m == 1) {
        // single facet: the origin
        Vec ell{rho.at(0, 0) > 0 ? Int(1) : Int(-1)};
        out.push_back({ell, {}});
        return out;
    }
    for_each_subset(c.num_rays(), m - 1, [&](const std::vector<int>& idx) {
        IntMatrix sub(m - 1, m);
        for (int i = 0; i < m - 1; ++i)
            for (int j = 0; j < m; ++j) sub.at(i, j) = rho.at(idx[i], j);
        LatticeSubspace kern = intlin::integer_kernel(sub);
        if (kern.rank() != 1) return;
        Vec ell = kern.basis.row(0);
        bool nonneg = true, nonpos = true;
        std::vector<Int> vals(c.num_rays());
        for (int i = 0; i < c.num_rays(); ++i) {
            vals[i] = intlin::dot(ell, rho.row(i));
            if (vals[i] > 0) nonpos = false;
            if (vals[i] < 0) nonneg = false;
        }
        if (!nonneg && !nonpos) return;
        if (nonpos)
            for (Int& v : ell) v = -v;
        std::vector<int> on;
        for (int i = 0; i < c.num_rays(); ++i)
            if (vals[i] == 0) on.push_back(i);
        if (seen.insert(on).second) out.push_back({std::move(ell), std::move(on)});
    });
    return out;
}

} // namespace

Cone make_cone(int ambient_rank, std::vector<Vec> rays) {
    for (Vec& r : rays) {
        if (static_cast<int>(r.size()) != ambient_rank)
            throw InputError("cone: ray has wrong length");
        Int g = intlin::content(r);
        if (g == 0) throw InputError("cone: zero ray generator");
        if (g != 1) throw InputError("cone: ray generator is not primitive");
    }
    std::sort(rays.begin(), rays.end());
    for (size_t i = 0; i + 1 < rays.size(); ++i)
        if (rays[i] == rays[i + 1]) throw InputError("cone: duplicate ray generator");

    Cone c;
    c.ambient_rank = ambient_rank;
    c.rays = IntMatrix::from_rows(rays);
    if (rays.empty()) c.rays = IntMatrix(0, ambient_rank);
    c.dim = intlin::rank(c.rays);

    if (zero_in_convex_hull(rays, ambient_rank))
        throw InputError("cone: not strongly convex (contains a line)");
    for (size_t i = 0; i < rays.size(); ++i) {
        std::vector<Vec> others;
        for (size_t j = 0; j < rays.size(); ++j)
            if (j != i) others.push_back(rays[j]);
        Cone rest;
        rest.ambient_rank = ambient_rank;
        rest.rays = IntMatrix::from_rows(others);
        if (others.empty()) rest.rays = IntMatrix(0, ambient_rank);
        rest.dim = intlin::rank(rest.rays);
        if (cone_contains(rest, rays[i]))
            throw InputError("cone: generator is not an extreme ray");
    }
    return c;
}

bool cone_contains(const Cone& c, const Vec& x) {
    if (static_cast<int>(x.size()) != c.ambient_rank)
        throw InternalError("cone_contains: dimension mismatch");
    if (intlin::is_zero_vec(x)) return true;
    if (c.num_rays() == 0) return false;
    IntMatrix stacked = c.rays.stacked(IntMatrix::from_rows({x}));
    if (intlin::rank(stacked) != c.dim) return false;
    std::vector<Vec> rays = matrix_rows(c.rays);
    bool found = false;
    for (int k = 1; k <= c.dim && !found; ++k) {
        for_each_subset(c.num_rays(), k, [&](const std::vector<int>& idx) {
            if (found) return;
            std::vector<Vec> cols;
            for (int i : idx) cols.push_back(rays[i]);
            std::vector<Rational> sol;
            if (solve_columns_rational(cols, x, sol) != SolveOutcome::unique) return;
            for (const Rational& v : sol)
                if (v < 0) return;
            found = true;
        });
    }
    return found;
}

bool in_relative_interior(const Cone& c, const Vec& x) {
    if (c.dim == 0) return intlin::is_zero_vec(x);
    if (!cone_contains(c, x)) return false;
    for (const Vec& f : ambient_facet_normals(c))
        if (intlin::dot(f, x) == 0) return false;
    return true;
}

std::vector<std::vector<int>> face_ray_subsets(const Cone& c) {
    if (c.dim == 0) return {{}};
    LatticeSubspace span = span_lattice(c);
    IntMatrix rho = rays_in_span_coords(c, span.basis);
    std::vector<FacetData> facets = facet_data(c, rho);

    std::set<std::vector<int>> all;
    std::vector<int> full(c.num_rays());
    for (int i = 0; i < c.num_rays(); ++i) full[i] = i;
    all.insert(full);
    for (const FacetData& f : facets) all.insert(f.rays);
    for (;;) {
        bool grew = false;
        std::vector<std::vector<int>> cur(all.begin(), all.end());
        for (const auto& a : cur)
            for (const FacetData& f : facets) {
                std::vector<int> inter;
                std::set_intersection(a.begin(), a.end(), f.rays.begin(), f.rays.end(),
                                      std::back_inserter(inter));
                if (all.insert(inter).second) grew = true;
            }
        if (!grew) break;
    }
    if (!all.count(std::vector<int>{}))
        throw InternalError("face_ray_subsets: pointed cone without zero face");
    return {all.begin(), all.end()};
}

std::vector<Cone> faces(const Cone& c) {
    std::vector<Cone> out;
    for (const auto& subset : face_ray_subsets(c)) {
        std::vector<Vec> rays;
        for (int i : subset) rays.push_back(c.rays.row(i));
        out.push_back(make_cone(c.ambient_rank, rays));
    }
    return out;
}

std::vector<Vec> ambient_facet_normals(const Cone& c) {
    std::vector<Vec> out;
    if (c.dim == 0) return out;
    LatticeSubspace span = span_lattice(c);
    IntMatrix rho = rays_in_span_coords(c, span.basis);
    IntMatrix w = intlin::extend_to_basis(span);
    IntMatrix v = intlin::unimodular_inverse(w);
    int m = span.rank();
    for (const FacetData& f : facet_data(c, rho)) {
        Vec amb(c.ambient_rank, Int(0));
        for (int j = 0; j < c.ambient_rank; ++j)
            for (int k = 0; k < m; ++k) amb[j] += v.at(j, k) * f.normal[k];
        out.push_back(std::move(amb));
    }
    return out;
}

bool is_smooth(const Cone& c) {
    if (c.num_rays() != c.dim) return false;
    if (c.dim == 0) return true;
    intlin::SmithResult s = intlin::smith_normal_form(c.rays);
    for (int i = 0; i < c.dim; ++i)
        if (s.d.at(i, i) != 1) return false;
    return true;
}

Int cone_multiplicity(const Cone& c) {
    if (c.num_rays() != c.dim) throw InternalError("cone_multiplicity: cone is not simplicial");
    if (c.dim == 0) return 1;
    intlin::SmithResult s = intlin::smith_normal_form(c.rays);
    Int m = 1;
    for (int i = 0; i < c.dim; ++i) m *= s.d.at(i, i);
    return m;
}

namespace {

void check_pair(const Cone& a, const Cone& b, int ia, int ib, ValidationReport& rep) {
    IntMatrix eqs(0, a.ambient_rank);
    eqs = eqs.stacked(intlin::integer_kernel(a.rays).basis);
    eqs = eqs.stacked(intlin::integer_kernel(b.rays).basis);
    LatticeSubspace common_span = intlin::integer_kernel(eqs);
    int s = common_span.rank();

    std::vector<Vec> ineqs;
    for (const Vec& f : ambient_facet_normals(a)) ineqs.push_back(f);
    for (const Vec& f : ambient_facet_normals(b)) ineqs.push_back(f);

    auto satisfies_all = [&](const Vec& x) {
        for (const Vec& f : ineqs)
            if (intlin::dot(f, x) < 0) return false;
        return true;
    };

    std::set<Vec> candidates;
    int n_ineq = static_cast<int>(ineqs.size());
    for (int k = 0; k <= std::max(0, s - 1); ++k) {
        for_each_subset(n_ineq, k, [&](const std::vector<int>& idx) {
            IntMatrix sys = eqs;
            std::vector<std::vector<Int>> extra;
            for (int i : idx) extra.push_back(ineqs[i]);
            if (!extra.empty()) sys = sys.stacked(IntMatrix::from_rows(extra));
            LatticeSubspace kern = intlin::integer_kernel(sys);
            if (kern.rank() != 1) return;
            Vec x = kern.basis.row(0);
            if (satisfies_all(x)) {
                candidates.insert(x);
                return;
            }
            for (Int& t : x) t = -t;
            if (satisfies_all(x)) candidates.insert(x);
        });
    }

    std::vector<int> in_a, in_b;
    for (const Vec& x : candidates) {
        int pa = -1, pb = -1;
        for (int i = 0; i < a.num_rays(); ++i)
            if (a.rays.row(i) == x) pa = i;
        for (int i = 0; i < b.num_rays(); ++i)
            if (b.rays.row(i) == x) pb = i;
        if (pa < 0 || pb < 0) {
            std::ostringstream msg;
            msg << "cones " << ia << " and " << ib
                << " intersect outside their common rays (overlapping interiors)";
            rep.valid = false;
            rep.violations.push_back(msg.str());
            return;
        }
        in_a.push_back(pa);
        in_b.push_back(pb);
    }
    std::sort(in_a.begin(), in_a.end());
    std::sort(in_b.begin(), in_b.end());
    auto face_sets_a = face_ray_subsets(a);
    auto face_sets_b = face_ray_subsets(b);
    bool fa = std::find(face_sets_a.begin(), face_sets_a.end(), in_a) != face_sets_a.end();
    bool fb = std::find(face_sets_b.begin(), face_sets_b.end(), in_b) != face_sets_b.end();
    if (!fa || !fb) {
        std::ostringstream msg;
        msg << "intersection of cones " << ia << " and " << ib << " is not a common face";
        rep.valid = false;
        rep.violations.push_back(msg.str());
    }
}

} // namespace

ValidationReport validate_fan(int rank, const std::vector<Vec>& rays,
                              const std::vector<std::vector<int>>& cones) {
    ValidationReport rep;
    auto fail = [&](const std::string& msg) {
        rep.valid = false;
        rep.violations.push_back(msg);
    };

    if (rank < 0) fail("negative rank");
    std::set<Vec> seen;
    for (size_t i = 0; i < rays.size(); ++i) {
        if (static_cast<int>(rays[i].size()) != rank) {
            fail("ray " + std::to_string(i) + " has wrong length");
            continue;
        }
        Int g = intlin::content(rays[i]);
        if (g == 0) fail("ray " + std::to_string(i) + " is zero");
        else if (g != 1) fail("ray " + std::to_string(i) + " is not primitive (content " + g.str() + ")");
        if (!seen.insert(rays[i]).second) fail("duplicate ray " + std::to_string(i));
    }
    if (!rep.valid) return rep;

    std::vector<Cone> mats;
    for (size_t ci = 0; ci < cones.size(); ++ci) {
        std::set<int> uniq;
        std::vector<Vec> gens;
        bool ok = true;
        for (int idx : cones[ci]) {
            if (idx < 0 || idx >= static_cast<int>(rays.size())) {
                fail("cone " + std::to_string(ci) + " references missing ray " + std::to_string(idx));
                ok = false;
                break;
            }
            if (!uniq.insert(idx).second) {
                fail("cone " + std::to_string(ci) + " repeats ray " + std::to_string(idx));
                ok = false;
                break;
            }
            gens.push_back(rays[idx]);
        }
        if (!ok) continue;
        try {
            mats.push_back(make_cone(rank, gens));
        } catch (const InputError& e) {
            fail("cone " + std::to_string(ci) + ": " + e.what());
        }
    }
    if (!rep.valid) return rep;

    for (size_t i = 0; i < mats.size(); ++i)
        for (size_t j = i + 1; j < mats.size(); ++j)
            check_pair(mats[i], mats[j], static_cast<int>(i), static_cast<int>(j), rep);
    return rep;
}

std::shared_ptr<const Fan> Fan::build(int rank, std::vector<Vec> rays,
                                      std::vector<std::vector<int>> cones, bool validate) {
    if (validate) {
        ValidationReport rep = validate_fan(rank, rays, cones);
        if (!rep.valid) {
            std::string msg = "invalid fan:";
            for (const std::string& v : rep.violations) msg += "\n  " + v;
            throw InputError(msg);
        }
    }

    // canonicalize the ray table
    std::vector<int> order(rays.size());
    for (size_t i = 0; i < rays.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return rays[a] < rays[b]; });
    std::vector<int> newpos(rays.size());
    std::vector<Vec> sorted_rays;
    for (size_t p = 0; p < order.size(); ++p) {
        newpos[order[p]] = static_cast<int>(p);
        sorted_rays.push_back(rays[order[p]]);
    }

    auto fan = std::make_shared<Fan>();
    fan->rank_ = rank;
    fan->rays_ = std::move(sorted_rays);

    auto materialize = [&](const std::vector<int>& set) {
        std::vector<Vec> gens;
        for (int idx : set) gens.push_back(fan->rays_[idx]);
        return make_cone(rank, gens);
    };

    // face closure
    std::map<std::vector<int>, std::vector<std::vector<int>>> face_sets;
    std::vector<std::vector<int>> work;
    for (auto& c : cones) {
        std::vector<int> set;
        for (int idx : c) set.push_back(newpos[idx]);
        std::sort(set.begin(), set.end());
        set.erase(std::unique(set.begin(), set.end()), set.end());
        work.push_back(std::move(set));
    }
    work.push_back({}); // the zero cone is always present
    std::map<std::vector<int>, Cone> mat;
    while (!work.empty()) {
        std::vector<int> set = work.back();
        work.pop_back();
        if (face_sets.count(set)) continue;
        Cone c = materialize(set);
        std::vector<std::vector<int>> fsets;
        for (const auto& positions : face_ray_subsets(c)) {
            std::vector<int> global;
            for (int p : positions) global.push_back(set[p]);
            std::sort(global.begin(), global.end());
            fsets.push_back(global);
            work.push_back(global);
        }
        face_sets[set] = std::move(fsets);
        mat.emplace(set, std::move(c));
    }

    std::vector<std::vector<int>> all_sets;
    for (const auto& [set, fs] : face_sets) all_sets.push_back(set);
    std::sort(all_sets.begin(), all_sets.end(), [&](const auto& a, const auto& b) {
        int da = mat.at(a).dim, db = mat.at(b).dim;
        if (da != db) return da < db;
        return a < b;
    });

    std::map<std::vector<int>, int> index_of;
    for (size_t i = 0; i < all_sets.size(); ++i) {
        index_of[all_sets[i]] = static_cast<int>(i);
        fan->cones_.push_back(all_sets[i]);
        fan->materialized_.push_back(mat.at(all_sets[i]));
        fan->dims_.push_back(mat.at(all_sets[i]).dim);
    }
    fan->zero_cone_ = index_of.at({});

    int n = fan->num_cones();
    fan->is_face_.assign(n, std::vector<bool>(n, false));
    fan->faces_of_.assign(n, {});
    for (int big = 0; big < n; ++big)
        for (const auto& fs : face_sets.at(fan->cones_[big])) {
            int small = index_of.at(fs);
            fan->is_face_[small][big] = true;
            fan->faces_of_[big].push_back(small);
        }
    for (int i = 0; i < n; ++i) {
        std::sort(fan->faces_of_[i].begin(), fan->faces_of_[i].end());
        bool maximal = true;
        for (int j = 0; j < n && maximal; ++j)
            if (j != i && fan->is_face_[i][j]) maximal = false;
        if (maximal) fan->maximal_.push_back(i);
    }
    return fan;
}

int Fan::ray_index(const Vec& v) const {
    auto it = std::lower_bound(rays_.begin(), rays_.end(), v);
    if (it != rays_.end() && *it == v) return static_cast<int>(it - rays_.begin());
    return -1;
}

int Fan::cone_index(const std::vector<int>& sorted_rays) const {
    for (int i = 0; i < num_cones(); ++i)
        if (cones_[i] == sorted_rays) return i;
    return -1;
}

bool Fan::is_face(int small, int big) const {
    return is_face_[small][big];
}

bool Fan::is_maximal(int i) const {
    return std::find(maximal_.begin(), maximal_.end(), i) != maximal_.end();
}

int Fan::intersection(int a, int b) const {
    std::vector<int> inter;
    std::set_intersection(cones_[a].begin(), cones_[a].end(), cones_[b].begin(), cones_[b].end(),
                          std::back_inserter(inter));
    int idx = cone_index(inter);
    if (idx < 0) throw InternalError("Fan::intersection: common face missing (invalid fan?)");
    if (!is_face_[idx][a] || !is_face_[idx][b])
        throw InternalError("Fan::intersection: common ray set is not a face");
    return idx;
}

std::vector<int> Fan::star(int rho) const {
    std::vector<int> out;
    for (int i = 0; i < num_cones(); ++i)
        if (is_face_[rho][i]) out.push_back(i);
    return out;
}

int Fan::smallest_containing(const Vec& v) const {
    for (int i = 0; i < num_cones(); ++i)
        if (cone_contains(materialized_[i], v)) return i;
    return -1;
}

int Fan::smallest_containing_cone(const Cone& c) const {
    Vec interior(rank_, Int(0));
    for (int i = 0; i < c.num_rays(); ++i)
        for (int j = 0; j < rank_; ++j) interior[j] += c.rays.at(i, j);
    int idx = smallest_containing(interior);
    if (idx < 0) return -1;
    for (int i = 0; i < c.num_rays(); ++i)
        if (!cone_contains(materialized_[idx], c.rays.row(i)))
            throw InternalError("smallest_containing_cone: cone not contained in its image");
    return idx;
}

bool Fan::all_cones_smooth() const {
    for (int i : maximal_)
        if (!is_smooth(materialized_[i])) return false;
    return true;
}

std::string Fan::to_json() const {
    nlohmann::json j;
    j["rank"] = rank_;
    nlohmann::json jr = nlohmann::json::array();
    for (const Vec& r : rays_) {
        nlohmann::json row = nlohmann::json::array();
        for (const Int& x : r) row.push_back(static_cast<long long>(x));
        jr.push_back(row);
    }
    j["rays"] = jr;
    nlohmann::json jc = nlohmann::json::array();
    for (int i : maximal_) jc.push_back(cones_[i]);
    j["cones"] = jc;
    return j.dump(2) + "\n";
}

std::shared_ptr<const Fan> Fan::from_json(const std::string& text, bool validate) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw InputError(std::string("fan file: invalid JSON: ") + e.what());
    }
    if (!j.contains("rank") || !j.contains("rays") || !j.contains("cones"))
        throw InputError("fan file: missing rank/rays/cones");
    int rank = j["rank"].get<int>();
    std::vector<Vec> rays;
    for (const auto& row : j["rays"]) {
        Vec r;
        for (const auto& x : row) r.push_back(Int(x.get<long long>()));
        rays.push_back(std::move(r));
    }
    std::vector<std::vector<int>> cones;
    for (const auto& c : j["cones"]) cones.push_back(c.get<std::vector<int>>());
    return Fan::build(rank, std::move(rays), std::move(cones), validate);
}

namespace {

std::vector<int> cone_map_into(const Fan& source, const Fan& target) {
    std::vector<int> map(source.num_cones(), -1);
    for (int i = 0; i < source.num_cones(); ++i) {
        map[i] = target.smallest_containing_cone(source.cone(i));
        if (map[i] < 0) throw InternalError("subdivision: source cone escapes the target support");
    }
    return map;
}

SubdivisionMap subdivide_at(std::shared_ptr<const Fan> f, const Vec& v, bool new_ray) {
    std::vector<Vec> rays;
    for (int i = 0; i < f->num_rays(); ++i) rays.push_back(f->ray(i));
    if (new_ray) rays.push_back(v);

    std::vector<std::vector<int>> new_cones; // as ray-vector index lists into `rays`
    auto ray_pos = [&](const Vec& r) {
        for (size_t i = 0; i < rays.size(); ++i)
            if (rays[i] == r) return static_cast<int>(i);
        throw InternalError("subdivision: ray lookup failed");
    };

    for (int mi : f->maximal_cones()) {
        const Cone& sigma = f->cone(mi);
        if (!cone_contains(sigma, v)) {
            new_cones.push_back(f->cone_rays(mi));
            continue;
        }
        // faces of sigma not containing v, joined with v
        int vpos = static_cast<int>(rays.size()) - 1;
        if (!new_ray) vpos = ray_pos(v);
        for (int fi : f->faces_of(mi)) {
            if (f->cone_dim(fi) != f->cone_dim(mi) - 1) continue;
            if (cone_contains(f->cone(fi), v)) continue;
            std::vector<int> set = f->cone_rays(fi);
            set.push_back(vpos);
            std::sort(set.begin(), set.end());
            new_cones.push_back(std::move(set));
        }
    }

    SubdivisionMap out;
    out.target = f;
    out.center = v;
    out.center_is_new_ray = new_ray;
    out.source = Fan::build(f->rank(), rays, new_cones, false);
    out.cone_map = cone_map_into(*out.source, *f);
    return out;
}

} // namespace

SubdivisionMap star_subdivision(std::shared_ptr<const Fan> f, const Vec& v) {
    if (static_cast<int>(v.size()) != f->rank())
        throw InputError("star_subdivision: center has wrong length");
    if (intlin::content(v) != 1)
        throw InputError("star_subdivision: center must be a primitive vector");
    if (f->ray_index(v) >= 0)
        throw InputError("star_subdivision: center is already a ray of the fan");
    if (f->smallest_containing(v) < 0)
        throw InputError("star_subdivision: center lies outside the support");
    return subdivide_at(std::move(f), v, true);
}

SubdivisionMap stellar_at_existing_ray(std::shared_ptr<const Fan> f, int ray_index) {
    if (ray_index < 0 || ray_index >= f->num_rays())
        throw InputError("stellar_at_existing_ray: no such ray");
    return subdivide_at(std::move(f), f->ray(ray_index), false);
}

namespace {

// The nonzero lattice points of the half-open fundamental parallelepiped of a
// simplicial cone, as (ambient point, span coordinates as fractions).
struct ParPoint {
    Vec ambient;
    std::vector<Rational> coords;
};

std::vector<ParPoint> parallelepiped_points(const Cone& c) {
    LatticeSubspace span = span_lattice(c);
    IntMatrix basis = span.basis;
    IntMatrix rho = rays_in_span_coords(c, basis);
    int m = rho.rows();
    intlin::SmithResult s = intlin::smith_normal_form(rho);
    IntMatrix vinv = intlin::unimodular_inverse(s.v);

    std::vector<ParPoint> out;
    std::vector<Int> z(m, Int(0));
    std::vector<Vec> rho_rows = matrix_rows(rho);
    for (;;) {
        // advance the mixed-radix counter over prod [0, d_i)
        int pos = m - 1;
        while (pos >= 0) {
            z[pos] += 1;
            if (z[pos] < s.d.at(pos, pos)) break;
            z[pos] = 0;
            --pos;
        }
        if (pos < 0) break;

        Vec y = intlin::vecmat(z, vinv);
        std::vector<Rational> a;
        {
            std::vector<Vec> cols;
            for (int i = 0; i < m; ++i) cols.push_back(rho.col(i));
            // solve a * rho = y, i.e. rho^T a^T = y^T
            std::vector<Vec> tcols = rho_rows;
            std::vector<Rational> sol;
            if (solve_columns_rational(tcols, y, sol) != SolveOutcome::unique)
                throw InternalError("parallelepiped_points: singular simplicial cone matrix");
            a = std::move(sol);
        }
        Vec x = y;
        std::vector<Rational> frac(m);
        for (int i = 0; i < m; ++i) {
            Int fl = boost::multiprecision::numerator(a[i]) / boost::multiprecision::denominator(a[i]);
            if (a[i] < 0 && a[i] != Rational(fl)) fl -= 1;
            frac[i] = a[i] - Rational(fl);
            if (fl != 0)
                for (int j = 0; j < m; ++j) x[j] -= fl * rho.at(i, j);
        }
        if (intlin::is_zero_vec(x)) continue;
        Vec amb = intlin::vecmat(x, basis);
        out.push_back({std::move(amb), std::move(frac)});
    }
    return out;
}

Vec pick_center(const Cone& c, ResolveOrder order) {
    std::vector<ParPoint> pts = parallelepiped_points(c);
    std::vector<ParPoint> open;
    for (ParPoint& p : pts) {
        bool interior = true;
        for (const Rational& f : p.coords)
            if (f == 0) interior = false;
        if (interior && intlin::content(p.ambient) == 1) open.push_back(std::move(p));
    }
    if (open.empty())
        throw InternalError("resolve: singular cone with no interior parallelepiped point "
                            "(a singular proper face was skipped)");
    auto sum = [](const ParPoint& p) {
        Rational s = 0;
        for (const Rational& f : p.coords) s += f;
        return s;
    };
    auto better = [&](const ParPoint& x, const ParPoint& y) {
        Rational sx = sum(x), sy = sum(y);
        if (order == ResolveOrder::canonical) {
            if (sx != sy) return sx < sy;
            return x.ambient < y.ambient;
        }
        if (sx != sy) return sx > sy;
        return x.ambient > y.ambient;
    };
    const ParPoint* best = &open[0];
    for (const ParPoint& p : open)
        if (better(p, *best)) best = &p;
    return best->ambient;
}

} // namespace

std::vector<SubdivisionMap> resolve(std::shared_ptr<const Fan> f, ResolveOrder order) {
    std::vector<SubdivisionMap> out;
    std::shared_ptr<const Fan> cur = std::move(f);

    // phase 1: stellar refinements at the existing rays make the fan simplicial
    std::vector<int> ray_order(cur->num_rays());
    for (int i = 0; i < cur->num_rays(); ++i) ray_order[i] = i;
    if (order == ResolveOrder::alternate) std::reverse(ray_order.begin(), ray_order.end());
    std::vector<Vec> ray_vectors;
    for (int i : ray_order) ray_vectors.push_back(cur->ray(i));
    for (const Vec& r : ray_vectors) {
        bool needed = false;
        for (int ci = 0; ci < cur->num_cones() && !needed; ++ci) {
            const Cone& c = cur->cone(ci);
            if (c.num_rays() == c.dim) continue;
            for (int k = 0; k < c.num_rays(); ++k)
                if (c.rays.row(k) == r) needed = true;
        }
        if (!needed) continue;
        SubdivisionMap step = stellar_at_existing_ray(cur, cur->ray_index(r));
        cur = step.source;
        out.push_back(std::move(step));
    }
    for (int ci = 0; ci < cur->num_cones(); ++ci) {
        const Cone& c = cur->cone(ci);
        if (c.num_rays() != c.dim)
            throw InternalError("resolve: fan still non-simplicial after stellar pass");
    }

    // phase 2: multiplicity reduction
    for (int guard = 0; guard < 10000; ++guard) {
        std::vector<int> singular;
        for (int ci = 0; ci < cur->num_cones(); ++ci)
            if (!is_smooth(cur->cone(ci))) singular.push_back(ci);
        if (singular.empty()) return out;

        // restrict to the minimal singular dimension so every proper face of
        // the chosen cone is already smooth
        int min_dim = cur->cone_dim(singular.front());
        std::vector<int> low;
        for (int ci : singular)
            if (cur->cone_dim(ci) == min_dim) low.push_back(ci);
        int chosen = (order == ResolveOrder::canonical) ? low.front() : low.back();

        Vec center = pick_center(cur->cone(chosen), order);
        SubdivisionMap step = star_subdivision(cur, center);
        cur = step.source;
        out.push_back(std::move(step));
    }
    throw InternalError("resolve: did not terminate");
}

} // namespace fglfans
