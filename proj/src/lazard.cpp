#include "fglfans/lazard.hpp"

#include "fglfans/error.hpp"

#include <algorithm>
#include <sstream>

namespace fglfans {

namespace {

// Polynomial in the A[i,j] variables, exact integer coefficients.
using APoly = std::map<Monomial, Int>;

void apoly_add(APoly& dst, const APoly& src, const Int& scale) {
    for (const auto& [m, c] : src) {
        Int& slot = dst[m];
        slot += c * scale;
        if (slot == 0) dst.erase(m);
    }
}

APoly apoly_mul(const APoly& a, const APoly& b) {
    APoly out;
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

// Power series in `slots` formal variables with APoly coefficients,
// truncated at total degree `bound`.
struct SymSeries {
    int slots;
    int bound;
    std::map<Monomial, APoly> terms;
};

SymSeries sym_zero(int slots, int bound) {
    return SymSeries{slots, bound, {}};
}

SymSeries sym_variable(int slots, int bound, int idx, int nvars_a) {
    SymSeries s = sym_zero(slots, bound);
    Monomial e(slots, 0);
    e[idx] = 1;
    s.terms[e] = APoly{{Monomial(nvars_a, 0), Int(1)}};
    return s;
}

void sym_add_scaled(SymSeries& dst, const SymSeries& src, const Int& scale) {
    for (const auto& [e, p] : src.terms) {
        apoly_add(dst.terms[e], p, scale);
        if (dst.terms[e].empty()) dst.terms.erase(e);
    }
}

SymSeries sym_mul(const SymSeries& a, const SymSeries& b) {
    SymSeries out = sym_zero(a.slots, a.bound);
    for (const auto& [ea, pa] : a.terms)
        for (const auto& [eb, pb] : b.terms) {
            Monomial e = ea;
            int total = 0;
            for (size_t i = 0; i < e.size(); ++i) {
                e[i] += eb[i];
                total += e[i];
            }
            if (total > a.bound) continue;
            apoly_add(out.terms[e], apoly_mul(pa, pb), Int(1));
            if (out.terms[e].empty()) out.terms.erase(e);
        }
    return out;
}

// F(x, y) = x + y + sum A[i,j] x^i y^j over the symmetric variable set.
SymSeries fgl_apply_sym(const LazardVariables& vars, const SymSeries& x, const SymSeries& y) {
    SymSeries out = sym_zero(x.slots, x.bound);
    sym_add_scaled(out, x, Int(1));
    sym_add_scaled(out, y, Int(1));
    std::vector<SymSeries> xp{x}, yp{y}; // xp[k] = x^(k+1)
    for (int i = 1; i <= x.bound; ++i) {
        while (static_cast<int>(xp.size()) < i) xp.push_back(sym_mul(xp.back(), x));
        if (xp[i - 1].terms.empty()) break;
        for (int j = 1; i + j <= x.bound; ++j) {
            if (vars.index(i, j) < 0) continue;
            while (static_cast<int>(yp.size()) < j) yp.push_back(sym_mul(yp.back(), y));
            if (yp[j - 1].terms.empty()) break;
            SymSeries prod = sym_mul(xp[i - 1], yp[j - 1]);
            APoly coeff{{vars.unit_monomial(i, j), Int(1)}};
            for (const auto& [e, p] : prod.terms) {
                SymSeries tmp = sym_zero(x.slots, x.bound);
                tmp.terms[e] = apoly_mul(coeff, p);
                sym_add_scaled(out, tmp, Int(1));
            }
        }
    }
    return out;
}

SparseRingPoly apoly_to_sparse(const APoly& p) {
    SparseRingPoly out;
    for (const auto& [m, c] : p) out.emplace_back(m, c);
    return out;
}

std::map<Monomial, SparseRingPoly> sym_to_coeff_map(const SymSeries& s) {
    std::map<Monomial, SparseRingPoly> out;
    for (const auto& [e, p] : s.terms)
        if (!p.empty()) out[e] = apoly_to_sparse(p);
    return out;
}

} // namespace

LazardVariables::LazardVariables(int truncation) {
    for (int w = 1; w <= truncation; ++w)
        for (int i = 1; 2 * i <= w + 1; ++i) {
            int j = w + 1 - i;
            labels.emplace_back(i, j);
        }
    std::sort(labels.begin(), labels.end(), [](auto a, auto b) {
        if (a.first + a.second != b.first + b.second) return a.first + a.second < b.first + b.second;
        return a.first < b.first;
    });
}

int LazardVariables::index(int i, int j) const {
    if (i > j) std::swap(i, j);
    for (int k = 0; k < count(); ++k)
        if (labels[k] == std::make_pair(i, j)) return k;
    return -1;
}

Monomial LazardVariables::unit_monomial(int i, int j) const {
    int idx = index(i, j);
    if (idx < 0) throw InternalError("LazardVariables: variable outside truncation");
    Monomial m(count(), 0);
    m[idx] = 1;
    return m;
}

AxiomResiduals fgl_axiom_residuals(int truncation) {
    LazardVariables vars(truncation);
    int na = vars.count();
    int bound = truncation + 1;
    AxiomResiduals out;
    out.truncation = truncation;

    {
        SymSeries u = sym_variable(1, bound, 0, na);
        SymSeries zero = sym_zero(1, bound);
        SymSeries res = fgl_apply_sym(vars, u, zero);
        sym_add_scaled(res, u, Int(-1));
        out.unit = sym_to_coeff_map(res);
    }
    {
        SymSeries u = sym_variable(2, bound, 0, na);
        SymSeries v = sym_variable(2, bound, 1, na);
        SymSeries res = fgl_apply_sym(vars, u, v);
        sym_add_scaled(res, fgl_apply_sym(vars, v, u), Int(-1));
        out.commutativity = sym_to_coeff_map(res);
    }
    {
        SymSeries u = sym_variable(3, bound, 0, na);
        SymSeries v = sym_variable(3, bound, 1, na);
        SymSeries w = sym_variable(3, bound, 2, na);
        SymSeries res = fgl_apply_sym(vars, fgl_apply_sym(vars, u, v), w);
        sym_add_scaled(res, fgl_apply_sym(vars, u, fgl_apply_sym(vars, v, w)), Int(-1));
        out.associativity = sym_to_coeff_map(res);
    }
    return out;
}

std::shared_ptr<const GradedRing> build_lazard_ring(int truncation) {
    LazardVariables vars(truncation);
    std::vector<RingVariable> ring_vars;
    for (auto [i, j] : vars.labels) {
        std::ostringstream name;
        name << "a[" << i << "," << j << "]";
        ring_vars.push_back({name.str(), i + j - 1});
    }

    AxiomResiduals res = fgl_axiom_residuals(truncation);
    std::vector<SparseRingPoly> relations;
    for (const auto& [e, poly] : res.associativity) relations.push_back(poly);
    // unit and commutativity residuals are structurally zero, but feed them
    // through anyway so a regression in the expander surfaces here
    for (const auto& [e, poly] : res.unit) relations.push_back(poly);
    for (const auto& [e, poly] : res.commutativity) relations.push_back(poly);

    std::map<std::pair<int, int>, SparseRingPoly> fgl;
    for (auto [i, j] : vars.labels)
        fgl[{i, j}] = SparseRingPoly{{vars.unit_monomial(i, j), Int(1)}};

    std::ostringstream name;
    name << "Lazard(D=" << truncation << ")";
    return std::make_shared<GradedRing>(name.str(), truncation, ring_vars, relations, fgl);
}

RingElem lazard_normal_form(const std::shared_ptr<const GradedRing>& ring, const SparseRingPoly& p) {
    if (p.empty()) return ring->zero(0);
    std::vector<int> weights;
    for (int i = 0; i < ring->num_variables(); ++i) weights.push_back(ring->variable(i).weight);
    int w = -1;
    for (const auto& [m, c] : p) {
        int mw = 0;
        for (size_t i = 0; i < m.size(); ++i) mw += m[i] * weights[i];
        if (w < 0) w = mw;
        if (mw != w) throw InputError("lazard_normal_form: non-homogeneous input");
    }
    return ring->from_poly(w, p);
}

GradedRankReport graded_rank(const GradedRing& ring, int k) {
    if (k < 0 || k > ring.truncation())
        throw ConfigError("graded_rank: degree outside the truncation range");
    GradedRankReport rep;
    rep.rank = ring.free_rank(k);
    intlin::SmithResult sm = intlin::smith_normal_form(ring.relation_lattice(k).basis);
    int n = std::min(sm.d.rows(), sm.d.cols());
    for (int i = 0; i < n; ++i)
        if (sm.d.at(i, i) > 1) rep.torsion_invariants.push_back(sm.d.at(i, i));
    return rep;
}

Specialization specialize_additive(std::shared_ptr<const GradedRing> lazard) {
    Specialization s;
    s.source = lazard;
    s.target = make_additive_ring(lazard->truncation());
    for (int i = 0; i < lazard->num_variables(); ++i)
        s.variable_images.push_back(s.target->zero(lazard->variable(i).weight));
    return s;
}

Specialization specialize_multiplicative(std::shared_ptr<const GradedRing> lazard) {
    Specialization s;
    s.source = lazard;
    s.target = make_multiplicative_ring(lazard->truncation());
    for (int i = 0; i < lazard->num_variables(); ++i) {
        const RingVariable& v = lazard->variable(i);
        if (v.name == "a[1,1]")
            s.variable_images.push_back(s.target->element(1, {Int(-1)}));
        else
            s.variable_images.push_back(s.target->zero(v.weight));
    }
    return s;
}

RingElem apply_specialization(const Specialization& s, const RingElem& x) {
    if (x.ring() != s.source.get())
        throw InputError("apply_specialization: element not over the source ring");
    if (x.is_zero()) return s.target->zero(x.weight());
    RingElem out = s.target->zero(x.weight());
    const auto& monos = s.source->monomials(x.weight());
    for (size_t m = 0; m < monos.size(); ++m) {
        if (x.coords()[m] == 0) continue;
        RingElem prod = s.target->one();
        for (size_t v = 0; v < monos[m].size() && !prod.is_zero(); ++v)
            for (int e = 0; e < monos[m][v]; ++e) prod = prod * s.variable_images[v];
        out = out + prod.scaled(x.coords()[m]);
    }
    return out;
}

GradedSeries apply_specialization(const Specialization& s, const GradedSeries& f) {
    if (f.ring() != s.source)
        throw InputError("apply_specialization: series not over the source ring");
    GradedSeries out(s.target, f.num_vars(), f.degree());
    for (const auto& [e, c] : f.terms()) out.add_term(e, apply_specialization(s, c));
    return out;
}

std::string dump_ring(const GradedRing& ring) {
    std::ostringstream os;
    os << ring.name() << " truncation=" << ring.truncation() << "\n";
    for (int k = 0; k <= ring.truncation(); ++k) {
        os << "degree -" << k << ": generators";
        for (const Monomial& m : ring.monomials(k)) {
            os << " ";
            bool any = false;
            for (size_t v = 0; v < m.size(); ++v) {
                if (m[v] == 0) continue;
                if (any) os << "*";
                os << ring.variable(static_cast<int>(v)).name;
                if (m[v] > 1) os << "^" << m[v];
                any = true;
            }
            if (!any) os << "1";
        }
        os << "\n";
        const auto& rel = ring.relation_lattice(k);
        os << "  relations " << rel.rank() << " free_rank " << ring.free_rank(k) << "\n";
        for (int r = 0; r < rel.rank(); ++r) {
            os << "   ";
            for (int c = 0; c < rel.basis.cols(); ++c) os << " " << rel.basis.at(r, c);
            os << "\n";
        }
    }
    return os.str();
}

} // namespace fglfans
