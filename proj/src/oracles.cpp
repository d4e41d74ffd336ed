#include "fglfans/oracles.hpp"

#include "fglfans/error.hpp"
#include "fglfans/lazard.hpp"
#include "fglfans/pps.hpp"

namespace fglfans::oracles {

namespace {

std::vector<Monomial> degree_monomials(int nvars, int degree) {
    return enumerate_weighted_monomials(std::vector<int>(nvars, 1), degree);
}

PolyMap poly_mul(const PolyMap& a, const PolyMap& b) {
    PolyMap out;
    for (const auto& [ma, ca] : a)
        for (const auto& [mb, cb] : b) {
            Monomial m = ma;
            for (size_t i = 0; i < m.size(); ++i) m[i] += mb[i];
            Int& slot = out[m];
            slot += ca * cb;
            if (slot == 0) out.erase(m);
        }
    return out;
}

} // namespace

Int evaluate_poly(const PolyMap& p, const Vec& point) {
    Int total = 0;
    for (const auto& [m, c] : p) {
        Int term = c;
        for (size_t i = 0; i < m.size(); ++i)
            for (int e = 0; e < m[i]; ++e) term *= point[i];
        total += term;
    }
    return total;
}

PolyMap restrict_poly(const PolyMap& p, const intlin::IntMatrix& basis) {
    int m = basis.rows();
    PolyMap out;
    for (const auto& [mono, coeff] : p) {
        PolyMap term{{Monomial(m, 0), coeff}};
        for (size_t j = 0; j < mono.size(); ++j) {
            if (mono[j] == 0) continue;
            PolyMap linear;
            for (int k = 0; k < m; ++k) {
                if (basis.at(k, static_cast<int>(j)) == 0) continue;
                Monomial e(m, 0);
                e[k] = 1;
                linear[e] = basis.at(k, static_cast<int>(j));
            }
            for (int rep = 0; rep < mono[j]; ++rep) term = poly_mul(term, linear);
        }
        for (const auto& [mm, cc] : term) {
            Int& slot = out[mm];
            slot += cc;
            if (slot == 0) out.erase(mm);
        }
    }
    return out;
}

PolynomialSections pp_global_sections(const Fan& fan, int degree) {
    if (degree < 0) throw ConfigError("pp_global_sections: degree must be non-negative");
    PolynomialSections out;
    out.degree = degree;
    out.cones = fan.maximal_cones();

    int n = fan.rank();
    std::vector<Monomial> monos = degree_monomials(n, degree);
    std::map<Monomial, int> mono_index;
    for (size_t i = 0; i < monos.size(); ++i) mono_index[monos[i]] = static_cast<int>(i);
    int block = static_cast<int>(monos.size());
    int nb = static_cast<int>(out.cones.size());
    int total = block * nb;

    // span bases for the faces we restrict to
    auto span_basis = [&](int cone_idx) {
        const Cone& c = fan.cone(cone_idx);
        return intlin::saturate(intlin::LatticeSubspace{fan.rank(), c.rays}).basis;
    };

    std::vector<std::vector<Int>> rows;
    for (int i = 0; i < nb; ++i)
        for (int j = i + 1; j < nb; ++j) {
            int tau = fan.intersection(out.cones[i], out.cones[j]);
            intlin::IntMatrix basis = span_basis(tau);
            int m = basis.rows();
            std::vector<Monomial> target = degree_monomials(m, degree);
            std::map<Monomial, int> tindex;
            for (size_t t = 0; t < target.size(); ++t) tindex[target[t]] = static_cast<int>(t);

            // restriction of each ambient monomial to the face, per block
            std::vector<std::vector<Int>> restricted(block,
                                                     std::vector<Int>(target.size(), Int(0)));
            for (int b = 0; b < block; ++b) {
                PolyMap r = restrict_poly(PolyMap{{monos[b], Int(1)}}, basis);
                for (const auto& [mm, cc] : r) restricted[b][tindex.at(mm)] = cc;
            }
            for (size_t t = 0; t < target.size(); ++t) {
                std::vector<Int> row(total, Int(0));
                for (int b = 0; b < block; ++b) {
                    row[i * block + b] += restricted[b][t];
                    row[j * block + b] -= restricted[b][t];
                }
                rows.push_back(std::move(row));
            }
        }

    intlin::IntMatrix constraints =
        rows.empty() ? intlin::IntMatrix(0, total) : intlin::IntMatrix::from_rows(rows);
    intlin::LatticeSubspace kernel = intlin::integer_kernel(constraints);
    out.tuple_rank = kernel.rank();

    // quotient out polynomials vanishing on each cone's span
    int vanishing = 0;
    for (int i = 0; i < nb; ++i) {
        int m = intlin::rank(fan.cone(out.cones[i]).rays);
        vanishing += block - static_cast<int>(degree_monomials(m, degree).size());
    }
    out.rank = out.tuple_rank - vanishing;

    for (int r = 0; r < kernel.rank(); ++r) {
        std::vector<PolyMap> tuple(nb);
        for (int i = 0; i < nb; ++i)
            for (int b = 0; b < block; ++b) {
                Int c = kernel.basis.at(r, i * block + b);
                if (c != 0) tuple[i][monos[b]] = c;
            }
        out.basis.push_back(std::move(tuple));
    }
    return out;
}

ChowComparisonReport compare_with_additive_specialization(std::shared_ptr<const Fan> fan,
                                                          int max_degree, int truncation) {
    if (max_degree > truncation)
        throw ConfigError("compare_with_additive_specialization: degree exceeds truncation");
    ChowComparisonReport rep;
    auto ring = make_additive_ring(truncation);
    SheafSystem sys(fan, ring);
    SheafDomain dom = fan_domain(fan);
    for (int d = 0; d <= max_degree; ++d) {
        int pp = pp_global_sections(*fan, d).rank;
        int sp = global_sections(sys, dom, d).rank();
        rep.rows.push_back({d, pp, sp});
        if (pp != sp && rep.match) {
            rep.match = false;
            rep.witness_degree = d;
        }
    }
    return rep;
}

} // namespace fglfans::oracles
