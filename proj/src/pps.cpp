#include "fglfans/pps.hpp"

#include "fglfans/error.hpp"
#include "fglfans/lazard.hpp"

#include <omp.h>

#include <algorithm>

namespace fglfans {

Stalk build_stalk(const Cone& c, std::shared_ptr<const GradedRing> ring) {
    Stalk s;
    s.ring = std::move(ring);
    intlin::LatticeSubspace span =
        intlin::saturate(intlin::LatticeSubspace{c.ambient_rank, c.rays});
    s.lattice_basis = span.basis;
    s.num_vars = span.rank();
    return s;
}

StalkMap stalk_map(const Stalk& source, const Stalk& target) {
    if (source.ring != target.ring) throw InternalError("stalk_map: coefficient rings differ");
    StalkMap m;
    m.source_vars = source.num_vars;
    m.target_vars = target.num_vars;

    // integer change of basis: target basis rows in source basis coordinates
    intlin::IntMatrix alpha(target.num_vars, source.num_vars);
    intlin::IntMatrix st = source.lattice_basis.transpose();
    for (int k = 0; k < target.num_vars; ++k) {
        auto sol = intlin::solve(st, target.lattice_basis.row(k));
        if (!sol)
            throw InternalError("stalk_map: target span is not contained in the source span");
        for (int j = 0; j < source.num_vars; ++j) alpha.at(k, j) = (*sol)[j];
    }

    std::vector<GradedSeries> target_vars;
    for (int k = 0; k < target.num_vars; ++k)
        target_vars.push_back(GradedSeries::variable(source.ring, target.num_vars, k));
    for (int i = 0; i < source.num_vars; ++i) {
        std::vector<Int> coeffs;
        for (int k = 0; k < target.num_vars; ++k) coeffs.push_back(alpha.at(k, i));
        m.variable_images.push_back(
            formal_linear_combination(source.ring, target.num_vars, coeffs, target_vars));
    }
    return m;
}

GradedSeries apply_stalk_map(const StalkMap& m, const GradedSeries& f) {
    if (f.num_vars() != m.source_vars) throw InternalError("apply_stalk_map: arity mismatch");
    return substitute(f, m.variable_images, m.target_vars);
}

intlin::IntMatrix stalk_map_matrix(const StalkMap& m, const SeriesLayout& source,
                                   const SeriesLayout& target) {
    intlin::IntMatrix out(target.dim, source.dim);
    const auto& ring = source.ring;
    std::vector<std::vector<GradedSeries>> powers(m.source_vars);
    for (int v = 0; v < m.source_vars; ++v)
        powers[v].push_back(GradedSeries::unit(ring, m.target_vars));

    for (size_t bi = 0; bi < source.exponents.size(); ++bi) {
        const Monomial& e = source.exponents[bi];
        GradedSeries prod = GradedSeries::unit(ring, m.target_vars);
        for (int v = 0; v < m.source_vars; ++v) {
            while (static_cast<int>(powers[v].size()) <= e[v])
                powers[v].push_back(powers[v].back() * m.variable_images[v]);
            if (e[v] > 0) prod = prod * powers[v][e[v]];
        }
        int w = monomial_total(e) - source.degree;
        int fr = ring->free_rank(w);
        for (int c = 0; c < fr; ++c) {
            std::vector<Int> unit(fr, Int(0));
            unit[c] = 1;
            RingElem elem = ring->element(w, ring->lift_free_coords(w, unit));
            std::vector<Int> coords = target.to_coords(prod.scaled(elem));
            for (int r = 0; r < target.dim; ++r) out.at(r, source.offsets[bi] + c) = coords[r];
        }
    }
    return out;
}

SheafDomain fan_domain(std::shared_ptr<const Fan> fan) {
    SheafDomain d;
    for (int i = 0; i < fan->num_cones(); ++i) d.cones.push_back(i);
    d.maximal = fan->maximal_cones();
    d.fan = std::move(fan);
    return d;
}

SheafDomain star_domain(std::shared_ptr<const Fan> fan, int rho) {
    if (rho < 0 || rho >= fan->num_cones()) throw InputError("star_domain: no such cone");
    SheafDomain d;
    d.cones = fan->star(rho);
    for (int c : d.cones)
        if (fan->is_maximal(c)) d.maximal.push_back(c);
    d.fan = std::move(fan);
    return d;
}

SheafSystem::SheafSystem(std::shared_ptr<const Fan> fan, std::shared_ptr<const GradedRing> ring)
    : fan_(std::move(fan)), ring_(std::move(ring)) {
    for (int i = 0; i < fan_->num_cones(); ++i) stalks_.push_back(build_stalk(fan_->cone(i), ring_));
}

StalkMap SheafSystem::restriction(int sigma, int tau) const {
    if (!fan_->is_face(tau, sigma))
        throw InputError("restriction: second cone is not a face of the first");
    return stalk_map(stalks_[sigma], stalks_[tau]);
}

GradedSeries SheafSystem::value_at(const PiecewiseSeries& p, int cone) const {
    auto it = p.values.find(cone);
    if (it != p.values.end()) return it->second;
    for (int m : p.domain.maximal)
        if (fan_->is_face(cone, m)) {
            auto vm = p.values.find(m);
            GradedSeries fm = (vm != p.values.end())
                                  ? vm->second
                                  : GradedSeries(ring_, stalks_[m].num_vars, p.degree);
            return apply_stalk_map(stalk_map(stalks_[m], stalks_[cone]), fm);
        }
    throw InternalError("value_at: cone is not covered by the domain");
}

namespace {

GradedSeries value_or_zero(const SheafSystem& sys, const PiecewiseSeries& p, int cone) {
    auto it = p.values.find(cone);
    if (it != p.values.end()) return it->second;
    return GradedSeries(sys.ring(), sys.stalk(cone).num_vars, p.degree);
}

} // namespace

bool is_global_section(const SheafSystem& sys, const PiecewiseSeries& p, bool all_faces) {
    const auto& fan = *sys.fan();
    const auto& mx = p.domain.maximal;
    if (!all_faces) {
        for (size_t i = 0; i < mx.size(); ++i)
            for (size_t j = i + 1; j < mx.size(); ++j) {
                int tau = fan.intersection(mx[i], mx[j]);
                GradedSeries a =
                    apply_stalk_map(sys.restriction(mx[i], tau), value_or_zero(sys, p, mx[i]));
                GradedSeries b =
                    apply_stalk_map(sys.restriction(mx[j], tau), value_or_zero(sys, p, mx[j]));
                if (!(a == b)) return false;
            }
        return true;
    }
    for (int tau : p.domain.cones) {
        std::vector<int> containing;
        for (int m : mx)
            if (fan.is_face(tau, m)) containing.push_back(m);
        for (size_t k = 1; k < containing.size(); ++k) {
            GradedSeries a = apply_stalk_map(sys.restriction(containing[0], tau),
                                             value_or_zero(sys, p, containing[0]));
            GradedSeries b = apply_stalk_map(sys.restriction(containing[k], tau),
                                             value_or_zero(sys, p, containing[k]));
            if (!(a == b)) return false;
        }
    }
    return true;
}

PiecewiseSeries unit_section(const SheafSystem& sys, const SheafDomain& domain) {
    PiecewiseSeries p;
    p.domain = domain;
    p.degree = 0;
    for (int m : domain.maximal)
        p.values.emplace(m, GradedSeries::unit(sys.ring(), sys.stalk(m).num_vars));
    return p;
}

PiecewiseSeries pps_multiply(const SheafSystem& sys, const PiecewiseSeries& p,
                             const PiecewiseSeries& q) {
    if (p.domain.fan != q.domain.fan || p.domain.cones != q.domain.cones)
        throw InputError("pps_multiply: domains differ");
    PiecewiseSeries out;
    out.domain = p.domain;
    out.degree = p.degree + q.degree;
    for (int m : p.domain.maximal)
        out.values.emplace(m, value_or_zero(sys, p, m) * value_or_zero(sys, q, m));
    return out;
}

PiecewiseSeries restrict_to_star(const SheafSystem& sys, const PiecewiseSeries& p, int rho) {
    SheafDomain star = star_domain(sys.fan(), rho);
    PiecewiseSeries out;
    out.domain = star;
    out.degree = p.degree;
    for (int m : star.maximal) out.values.emplace(m, value_or_zero(sys, p, m));
    return out;
}

SectionModule section_module_shape(const SheafSystem& sys, const SheafDomain& domain, int degree) {
    SectionModule mod;
    mod.domain = domain;
    mod.degree = degree;
    mod.ring = sys.ring();
    for (int m : domain.maximal) {
        mod.layouts.push_back(series_layout(sys.ring(), sys.stalk(m).num_vars, degree));
        mod.offsets.push_back(mod.total_dim);
        mod.total_dim += mod.layouts.back().dim;
    }
    mod.basis = intlin::IntMatrix(0, mod.total_dim);
    return mod;
}

SectionModule global_sections(const SheafSystem& sys, const SheafDomain& domain, int degree,
                              SolveOptions options) {
    SectionModule mod = section_module_shape(sys, domain, degree);
    const auto& fan = *sys.fan();
    int nb = static_cast<int>(domain.maximal.size());

    // constraint blocks: one per compared pair (maximal cones through a face)
    struct Block {
        int bi, bj; // block positions among domain.maximal
        int tau;    // fan cone index to compare on
    };
    std::vector<Block> blocks;
    if (!options.all_faces) {
        for (int i = 0; i < nb; ++i)
            for (int j = i + 1; j < nb; ++j)
                blocks.push_back({i, j, fan.intersection(domain.maximal[i], domain.maximal[j])});
    } else {
        for (int tau : domain.cones) {
            std::vector<int> containing;
            for (int b = 0; b < nb; ++b)
                if (fan.is_face(tau, domain.maximal[b])) containing.push_back(b);
            for (size_t k = 1; k < containing.size(); ++k)
                blocks.push_back({containing[0], static_cast<int>(containing[k]), tau});
        }
    }

    std::vector<intlin::IntMatrix> left(blocks.size()), right(blocks.size());
    std::vector<SeriesLayout> tau_layout(blocks.size());
    for (size_t k = 0; k < blocks.size(); ++k)
        tau_layout[k] = series_layout(sys.ring(), sys.stalk(blocks[k].tau).num_vars, degree);

#pragma omp parallel for schedule(dynamic) if (options.parallel)
    for (int k = 0; k < static_cast<int>(blocks.size()); ++k) {
        const Block& blk = blocks[k];
        StalkMap mi = sys.restriction(domain.maximal[blk.bi], blk.tau);
        StalkMap mj = sys.restriction(domain.maximal[blk.bj], blk.tau);
        left[k] = stalk_map_matrix(mi, mod.layouts[blk.bi], tau_layout[k]);
        right[k] = stalk_map_matrix(mj, mod.layouts[blk.bj], tau_layout[k]);
    }

    int rows = 0;
    for (size_t k = 0; k < blocks.size(); ++k) rows += tau_layout[k].dim;
    intlin::IntMatrix constraints(rows, mod.total_dim);
    int r0 = 0;
    for (size_t k = 0; k < blocks.size(); ++k) {
        const Block& blk = blocks[k];
        for (int r = 0; r < tau_layout[k].dim; ++r) {
            for (int c = 0; c < mod.layouts[blk.bi].dim; ++c)
                constraints.at(r0 + r, mod.offsets[blk.bi] + c) = left[k].at(r, c);
            for (int c = 0; c < mod.layouts[blk.bj].dim; ++c)
                constraints.at(r0 + r, mod.offsets[blk.bj] + c) -= right[k].at(r, c);
        }
        r0 += tau_layout[k].dim;
    }

    mod.basis = intlin::integer_kernel(constraints).basis;
    return mod;
}

PiecewiseSeries section_from_coords(const SectionModule& mod, const std::vector<Int>& coords) {
    if (static_cast<int>(coords.size()) != mod.total_dim)
        throw InternalError("section_from_coords: wrong length");
    PiecewiseSeries p;
    p.domain = mod.domain;
    p.degree = mod.degree;
    for (size_t b = 0; b < mod.layouts.size(); ++b) {
        std::vector<Int> slice(coords.begin() + mod.offsets[b],
                               coords.begin() + mod.offsets[b] + mod.layouts[b].dim);
        p.values.emplace(mod.domain.maximal[b], mod.layouts[b].from_coords(slice));
    }
    return p;
}

PiecewiseSeries module_basis_section(const SectionModule& mod, int index) {
    return section_from_coords(mod, mod.basis.row(index));
}

std::vector<Int> section_coords(const SectionModule& mod, const PiecewiseSeries& p) {
    std::vector<Int> out(mod.total_dim);
    for (size_t b = 0; b < mod.layouts.size(); ++b) {
        int cone = mod.domain.maximal[b];
        auto it = p.values.find(cone);
        GradedSeries f = (it != p.values.end())
                             ? it->second
                             : GradedSeries(mod.ring, mod.layouts[b].num_vars, mod.degree);
        std::vector<Int> c = mod.layouts[b].to_coords(f);
        for (int i = 0; i < mod.layouts[b].dim; ++i) out[mod.offsets[b] + i] = c[i];
    }
    return out;
}

PiecewiseSeries pullback_subdivision(const SubdivisionMap& sub, const SheafSystem& target_sys,
                                     const SheafSystem& source_sys, const PiecewiseSeries& p) {
    if (p.domain.fan != sub.target)
        throw InputError("pullback_subdivision: section does not live on the target fan");
    PiecewiseSeries out;
    out.domain = fan_domain(sub.source);
    out.degree = p.degree;
    for (int m : out.domain.maximal) {
        int t = sub.cone_map[m];
        GradedSeries ft = target_sys.value_at(p, t);
        out.values.emplace(
            m, apply_stalk_map(stalk_map(target_sys.stalk(t), source_sys.stalk(m)), ft));
    }
    return out;
}

intlin::IntMatrix transfer_matrix(const SheafSystem& from_sys, const SectionModule& from,
                                  const SheafSystem& to_sys, const SectionModule& to,
                                  const std::vector<int>& source_cone_per_block) {
    intlin::IntMatrix out(to.total_dim, from.total_dim);
    for (size_t bi = 0; bi < to.layouts.size(); ++bi) {
        int t = source_cone_per_block[bi];
        int pick = -1, pick_block = -1;
        for (size_t b = 0; b < from.domain.maximal.size(); ++b)
            if (from_sys.fan()->is_face(t, from.domain.maximal[b])) {
                pick = from.domain.maximal[b];
                pick_block = static_cast<int>(b);
                break;
            }
        if (pick < 0) throw InternalError("transfer_matrix: source cone not covered");
        StalkMap m = stalk_map(from_sys.stalk(pick), to_sys.stalk(to.domain.maximal[bi]));
        intlin::IntMatrix block = stalk_map_matrix(m, from.layouts[pick_block], to.layouts[bi]);
        for (int r = 0; r < block.rows(); ++r)
            for (int c = 0; c < block.cols(); ++c)
                out.at(to.offsets[bi] + r, from.offsets[pick_block] + c) = block.at(r, c);
    }
    return out;
}

PiecewiseSeries specialize_section(const Specialization& s, const PiecewiseSeries& p) {
    PiecewiseSeries out;
    out.domain = p.domain;
    out.degree = p.degree;
    for (const auto& [cone, f] : p.values) out.values.emplace(cone, apply_specialization(s, f));
    return out;
}

} // namespace fglfans
