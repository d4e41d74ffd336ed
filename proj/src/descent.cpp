#include "fglfans/descent.hpp"

#include "fglfans/error.hpp"

#include <sstream>

namespace fglfans {

namespace {

std::vector<int> identity_sources(const SectionModule& mod) {
    return mod.domain.maximal;
}

std::vector<int> phi_sources(const SubdivisionMap& sub, const SectionModule& mod) {
    std::vector<int> out;
    for (int m : mod.domain.maximal) out.push_back(sub.cone_map[m]);
    return out;
}

std::string coords_to_string(const std::vector<Int>& v) {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) os << ",";
        os << v[i];
    }
    os << ")";
    return os.str();
}

} // namespace

DescentSquare make_descent_square(SubdivisionMap sub) {
    DescentSquare sq;
    sq.cone_pi = sub.target->smallest_containing(sub.center);
    if (sq.cone_pi < 0) throw InternalError("make_descent_square: center outside the support");
    int ray = sub.source->ray_index(sub.center);
    if (ray < 0) throw InternalError("make_descent_square: center is not a ray of the refinement");
    sq.cone_rho = sub.source->cone_index({ray});
    if (sq.cone_rho < 0) throw InternalError("make_descent_square: center ray cone missing");
    sq.sub = std::move(sub);
    return sq;
}

intlin::IntMatrix star_pullback_matrix(const DescentSquare& sq, const SheafSystem& coarse_sys,
                                       const SheafSystem& fine_sys, const SectionModule& from,
                                       const SectionModule& to) {
    return transfer_matrix(coarse_sys, from, fine_sys, to, phi_sources(sq.sub, to));
}

GluingReport check_cartesian(const DescentSquare& sq, int degree,
                             std::shared_ptr<const GradedRing> ring, SolveOptions options) {
    GluingReport rep;
    rep.degree = degree;

    SheafSystem coarse(sq.sub.target, ring);
    SheafSystem fine(sq.sub.source, ring);

    SectionModule mc = global_sections(coarse, fan_domain(sq.sub.target), degree, options);
    SectionModule mf = global_sections(fine, fan_domain(sq.sub.source), degree, options);
    SectionModule mpi = global_sections(coarse, star_domain(sq.sub.target, sq.cone_pi), degree, options);
    SectionModule mrho = global_sections(fine, star_domain(sq.sub.source, sq.cone_rho), degree, options);
    rep.rank_coarse = mc.rank();
    rep.rank_fine = mf.rank();
    rep.rank_star_pi = mpi.rank();
    rep.rank_star_rho = mrho.rank();

    intlin::IntMatrix pull = transfer_matrix(coarse, mc, fine, mf, phi_sources(sq.sub, mf));
    intlin::IntMatrix res_rho = transfer_matrix(fine, mf, fine, mrho, identity_sources(mrho));
    intlin::IntMatrix res_pi = transfer_matrix(coarse, mc, coarse, mpi, identity_sources(mpi));
    intlin::IntMatrix star_pull = star_pullback_matrix(sq, coarse, fine, mpi, mrho);

    // commutativity on every basis section of the coarse module
    rep.commutes = true;
    for (int r = 0; r < mc.rank(); ++r) {
        std::vector<Int> x = mc.basis.row(r);
        std::vector<Int> via_fine = intlin::matvec(res_rho, intlin::matvec(pull, x));
        std::vector<Int> via_star = intlin::matvec(star_pull, intlin::matvec(res_pi, x));
        if (via_fine != via_star) {
            rep.commutes = false;
            rep.witness = "square does not commute on basis section " + std::to_string(r);
            break;
        }
    }

    // injectivity of the pullback on sections
    intlin::IntMatrix pulled_basis = pull.mul(mc.basis.transpose());
    rep.injective = intlin::rank(pulled_basis) == mc.rank();
    if (!rep.injective && rep.witness.empty())
        rep.witness = "coarse-to-fine pullback has a kernel";

    // exactness: coarse sections = fiber product over the star of the ray
    intlin::IntMatrix a = res_rho.mul(mf.basis.transpose());       // fine coefficients -> star-rho coords
    intlin::IntMatrix b = star_pull.mul(mpi.basis.transpose());    // star-pi coefficients -> star-rho coords
    intlin::IntMatrix paired(a.rows(), mf.rank() + mpi.rank());
    for (int r = 0; r < a.rows(); ++r) {
        for (int c = 0; c < mf.rank(); ++c) paired.at(r, c) = a.at(r, c);
        for (int c = 0; c < mpi.rank(); ++c) paired.at(r, mf.rank() + c) = -b.at(r, c);
    }
    intlin::LatticeSubspace fiber = intlin::integer_kernel(paired);

    bool star_injective = intlin::rank(b) == mpi.rank();
    rep.exact = star_injective && fiber.rank() == mc.rank();
    if (!rep.exact && rep.witness.empty())
        rep.witness = star_injective ? "fiber product rank differs from the coarse rank"
                                     : "star pullback has a kernel";

    if (rep.exact) {
        // surjectivity onto the fiber product: every fiber basis vector is the
        // image of an honest coarse section
        intlin::IntMatrix to_fine_coeff = pull.mul(mc.basis.transpose());
        for (int r = 0; r < fiber.rank() && rep.exact; ++r) {
            std::vector<Int> full = fiber.basis.row(r);
            std::vector<Int> coeff(full.begin(), full.begin() + mf.rank());
            std::vector<Int> y = intlin::vecmat(coeff, mf.basis);
            if (!intlin::solve(to_fine_coeff, y)) {
                rep.exact = false;
                rep.witness = "fiber section " + coords_to_string(coeff) +
                              " does not descend to the coarse fan";
            }
        }
    }
    return rep;
}

ResolutionResult compute_via_resolution(std::shared_ptr<const Fan> fan, int degree,
                                        std::shared_ptr<const GradedRing> ring,
                                        ResolveOrder order, SolveOptions options) {
    std::vector<SubdivisionMap> chain = resolve(fan, order);
    ResolutionResult out;
    out.report.steps = static_cast<int>(chain.size());

    SectionModule direct;
    {
        SheafSystem sys(fan, ring);
        direct = global_sections(sys, fan_domain(fan), degree, options);
    }

    if (chain.empty()) {
        out.sections = direct;
        out.report.match = true;
        out.report.direct_rank = direct.rank();
        out.report.resolution_rank = direct.rank();
        return out;
    }

    // solve only on the terminal smooth fan, then descend square by square
    std::shared_ptr<const Fan> top = chain.back().source;
    SheafSystem top_sys(top, ring);
    SectionModule cur = global_sections(top_sys, fan_domain(top), degree, options);

    for (int step = static_cast<int>(chain.size()) - 1; step >= 0; --step) {
        DescentSquare sq = make_descent_square(chain[step]);
        SheafSystem coarse(sq.sub.target, ring);
        SheafSystem fine(sq.sub.source, ring);

        SectionModule mpi =
            global_sections(coarse, star_domain(sq.sub.target, sq.cone_pi), degree, options);
        SectionModule mrho =
            global_sections(fine, star_domain(sq.sub.source, sq.cone_rho), degree, options);

        SectionModule fine_shape = section_module_shape(fine, fan_domain(sq.sub.source), degree);
        fine_shape.basis = cur.basis;

        intlin::IntMatrix res_rho =
            transfer_matrix(fine, fine_shape, fine, mrho, identity_sources(mrho));
        intlin::IntMatrix star_pull = star_pullback_matrix(sq, coarse, fine, mpi, mrho);

        intlin::IntMatrix a = res_rho.mul(cur.basis.transpose());
        intlin::IntMatrix b = star_pull.mul(mpi.basis.transpose());
        intlin::IntMatrix paired(a.rows(), cur.rank() + mpi.rank());
        for (int r = 0; r < a.rows(); ++r) {
            for (int c = 0; c < cur.rank(); ++c) paired.at(r, c) = a.at(r, c);
            for (int c = 0; c < mpi.rank(); ++c) paired.at(r, cur.rank() + c) = -b.at(r, c);
        }
        intlin::LatticeSubspace fiber = intlin::integer_kernel(paired);

        // coefficients (relative to cur) of the sections that descend
        std::vector<std::vector<Int>> coeff_rows;
        for (int r = 0; r < fiber.rank(); ++r) {
            std::vector<Int> full = fiber.basis.row(r);
            coeff_rows.push_back(std::vector<Int>(full.begin(), full.begin() + cur.rank()));
        }
        intlin::IntMatrix descended_coeffs = intlin::row_lattice_hnf(
            coeff_rows.empty() ? intlin::IntMatrix(0, cur.rank())
                               : intlin::IntMatrix::from_rows(coeff_rows));

        // reconstruct each descended section on the coarse fan: a full-
        // dimensional piece of each coarse maximal cone has the same stalk
        // lattice, so the value transports back through an invertible map
        SectionModule coarse_mod = section_module_shape(coarse, fan_domain(sq.sub.target), degree);
        std::vector<std::vector<Int>> coarse_rows;
        intlin::IntMatrix pull =
            transfer_matrix(coarse, coarse_mod, fine, fine_shape, phi_sources(sq.sub, fine_shape));
        for (int r = 0; r < descended_coeffs.rows(); ++r) {
            std::vector<Int> y = intlin::vecmat(descended_coeffs.row(r), cur.basis);
            PiecewiseSeries fine_section = section_from_coords(fine_shape, y);

            PiecewiseSeries coarse_section;
            coarse_section.domain = coarse_mod.domain;
            coarse_section.degree = degree;
            for (size_t bi = 0; bi < coarse_mod.domain.maximal.size(); ++bi) {
                int sigma = coarse_mod.domain.maximal[bi];
                int piece = -1;
                for (int m : fine_shape.domain.maximal)
                    if (sq.sub.cone_map[m] == sigma &&
                        fine.fan()->cone_dim(m) == coarse.fan()->cone_dim(sigma)) {
                        piece = m;
                        break;
                    }
                if (piece < 0)
                    throw InternalError("compute_via_resolution: no full-dimensional piece");
                GradedSeries fp = fine.value_at(fine_section, piece);
                coarse_section.values.emplace(
                    sigma, apply_stalk_map(stalk_map(fine.stalk(piece), coarse.stalk(sigma)), fp));
            }

            if (!is_global_section(coarse, coarse_section))
                throw InternalError("compute_via_resolution: descended family is not a section");
            std::vector<Int> x = section_coords(coarse_mod, coarse_section);
            if (intlin::matvec(pull, x) != y)
                throw InternalError("compute_via_resolution: descended section does not pull back");
            coarse_rows.push_back(std::move(x));
        }

        coarse_mod.basis = intlin::row_lattice_hnf(
            coarse_rows.empty() ? intlin::IntMatrix(0, coarse_mod.total_dim)
                                : intlin::IntMatrix::from_rows(coarse_rows));
        cur = std::move(coarse_mod);
    }

    out.report.direct_rank = direct.rank();
    out.report.resolution_rank = cur.rank();
    out.report.match = intlin::same_row_lattice(cur.basis, direct.basis);
    out.sections = cur;
    if (!out.report.match)
        throw InternalError("compute_via_resolution: resolution route disagrees with the direct solver");
    return out;
}

} // namespace fglfans
