#include "fglfans/graded_ring.hpp"

#include "fglfans/error.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace fglfans {

bool GradedLexLess::operator()(const Monomial& a, const Monomial& b) const {
    int ta = monomial_total(a), tb = monomial_total(b);
    if (ta != tb) return ta < tb;
    return a < b;
}

int monomial_total(const Monomial& m) {
    return std::accumulate(m.begin(), m.end(), 0);
}

namespace {

void enumerate_rec(const std::vector<int>& weights, int pos, int remaining, Monomial& cur,
                   std::vector<Monomial>& out) {
    if (pos == static_cast<int>(weights.size())) {
        if (remaining == 0) out.push_back(cur);
        return;
    }
    for (int e = 0; e * weights[pos] <= remaining; ++e) {
        cur[pos] = e;
        enumerate_rec(weights, pos + 1, remaining - e * weights[pos], cur, out);
    }
    cur[pos] = 0;
}

Int floor_div(const Int& v, const Int& p) {
    Int q = v / p;
    if (v % p != 0 && ((v < 0) != (p < 0))) q -= 1;
    return q;
}

} // namespace

std::vector<Monomial> enumerate_weighted_monomials(const std::vector<int>& weights, int target) {
    if (target < 0) return {};
    std::vector<Monomial> out;
    Monomial cur(weights.size(), 0);
    enumerate_rec(weights, 0, target, cur, out);
    std::sort(out.begin(), out.end(), GradedLexLess{});
    return out;
}

RingElem::RingElem(const GradedRing* ring, int weight, std::vector<Int> coords)
    : ring_(ring), weight_(weight), coords_(std::move(coords)) {}

bool RingElem::is_zero() const {
    return intlin::is_zero_vec(coords_);
}

bool RingElem::operator==(const RingElem& other) const {
    if (is_zero() && other.is_zero()) return true;
    return ring_ == other.ring_ && weight_ == other.weight_ && coords_ == other.coords_;
}

RingElem RingElem::operator+(const RingElem& other) const {
    if (is_zero()) return other;
    if (other.is_zero()) return *this;
    if (ring_ != other.ring_ || weight_ != other.weight_)
        throw InputError("RingElem: mismatched ring or weight in addition");
    std::vector<Int> c = coords_;
    for (size_t i = 0; i < c.size(); ++i) c[i] += other.coords_[i];
    return ring_->element(weight_, std::move(c));
}

RingElem RingElem::operator-(const RingElem& other) const {
    return *this + (-other);
}

RingElem RingElem::operator-() const {
    return scaled(Int(-1));
}

RingElem RingElem::operator*(const RingElem& other) const {
    if (ring_ == nullptr) return *this;
    return ring_->mul(*this, other);
}

RingElem RingElem::scaled(const Int& k) const {
    if (ring_ == nullptr) return *this;
    std::vector<Int> c = coords_;
    for (Int& x : c) x *= k;
    return ring_->element(weight_, std::move(c));
}

GradedRing::GradedRing(std::string name,
                       int truncation,
                       std::vector<RingVariable> variables,
                       const std::vector<SparseRingPoly>& relations,
                       const std::map<std::pair<int, int>, SparseRingPoly>& fgl_coefficients)
    : name_(std::move(name)), truncation_(truncation), variables_(std::move(variables)) {
    if (truncation_ < 1) throw ConfigError("GradedRing: truncation bound must be >= 1");
    for (const RingVariable& v : variables_)
        if (v.weight < 1) throw ConfigError("GradedRing: variable weights must be positive");

    std::vector<int> weights;
    for (const RingVariable& v : variables_) weights.push_back(v.weight);

    // Group the primitive relations by weight.
    std::map<int, std::vector<SparseRingPoly>> by_weight;
    for (const SparseRingPoly& rel : relations) {
        if (rel.empty()) continue;
        int w = -1;
        for (const auto& [mono, coeff] : rel) {
            int mw = 0;
            for (size_t i = 0; i < mono.size(); ++i) mw += mono[i] * weights[i];
            if (w < 0) w = mw;
            if (mw != w) throw InternalError("GradedRing: non-homogeneous relation");
        }
        if (w == 0) throw InternalError("GradedRing: relation in degree zero");
        if (w <= truncation_) by_weight[w].push_back(rel);
    }

    pieces_.resize(truncation_ + 1);
    for (int k = 0; k <= truncation_; ++k) {
        Piece& p = pieces_[k];
        p.monomials = enumerate_weighted_monomials(weights, k);
        for (int i = 0; i < static_cast<int>(p.monomials.size()); ++i) p.index[p.monomials[i]] = i;
        int g = static_cast<int>(p.monomials.size());

        // Span of (primitive relation) * (monomial) products landing in weight k.
        std::vector<std::vector<Int>> rows;
        for (const auto& [w, rels] : by_weight) {
            if (w > k) break;
            std::vector<Monomial> mults = enumerate_weighted_monomials(weights, k - w);
            for (const SparseRingPoly& rel : rels)
                for (const Monomial& mu : mults) {
                    std::vector<Int> row(g);
                    for (const auto& [mono, coeff] : rel) {
                        Monomial prod(mono);
                        for (size_t i = 0; i < prod.size(); ++i) prod[i] += mu[i];
                        row[p.index.at(prod)] += coeff;
                    }
                    if (!intlin::is_zero_vec(row)) rows.push_back(std::move(row));
                }
        }
        intlin::IntMatrix span = intlin::IntMatrix::from_rows(rows);
        if (rows.empty()) span = intlin::IntMatrix(0, g);
        p.relations = intlin::LatticeSubspace{g, intlin::row_lattice_hnf(span)};

        // Torsion tripwire: the quotient must be free for the free-coordinate
        // maps below to be well defined.
        intlin::SmithResult sm = intlin::smith_normal_form(p.relations.basis);
        for (int i = 0; i < p.relations.rank(); ++i)
            if (sm.d.at(i, i) != 1) {
                std::ostringstream msg;
                msg << name_ << ": torsion in graded piece " << k << ", invariant factors:";
                for (int t = 0; t < p.relations.rank(); ++t) msg << ' ' << sm.d.at(t, t);
                throw InternalError(msg.str());
            }

        intlin::HermiteResult h = intlin::column_hermite(p.relations.basis.transpose());
        p.reduce_cols = h.h;
        p.reduce_pivots = h.pivots;
        p.free_rank = g - p.relations.rank();

        intlin::IntMatrix w = intlin::extend_to_basis(p.relations);
        intlin::IntMatrix winv = intlin::unimodular_inverse(w);
        // free coords of v are the trailing entries of v * w^-1
        p.proj = winv.transpose().rows_slice(p.relations.rank(), g);
        p.lift = w.rows_slice(p.relations.rank(), g);
    }

    if (static_cast<int>(pieces_[0].monomials.size()) != 1 || pieces_[0].relations.rank() != 0)
        throw InternalError("GradedRing: piece(0) is not Z");

    for (const auto& [ij, poly] : fgl_coefficients) {
        auto [i, j] = ij;
        if (i < 1 || j < 1 || i > j) throw ConfigError("GradedRing: fgl coefficients need 1 <= i <= j");
        if (i + j - 1 > truncation_) continue;
        fgl_[ij] = from_poly(i + j - 1, poly);
    }
}

const GradedRing::Piece& GradedRing::piece(int k) const {
    if (!piece_exists(k)) throw InternalError("GradedRing: piece out of range");
    return pieces_[k];
}

const std::vector<Monomial>& GradedRing::monomials(int k) const {
    return piece(k).monomials;
}

int GradedRing::monomial_index(int k, const Monomial& m) const {
    const auto& idx = piece(k).index;
    auto it = idx.find(m);
    return it == idx.end() ? -1 : it->second;
}

int GradedRing::num_generators(int k) const {
    return static_cast<int>(piece(k).monomials.size());
}

int GradedRing::free_rank(int k) const {
    return piece(k).free_rank;
}

const intlin::LatticeSubspace& GradedRing::relation_lattice(int k) const {
    return piece(k).relations;
}

std::vector<Int> GradedRing::normal_form(int k, std::vector<Int> coords) const {
    const Piece& p = piece(k);
    if (static_cast<int>(coords.size()) != static_cast<int>(p.monomials.size()))
        throw InternalError("GradedRing: coordinate length mismatch");
    for (auto [row, col] : p.reduce_pivots) {
        Int q = floor_div(coords[row], p.reduce_cols.at(row, col));
        if (q == 0) continue;
        for (int i = 0; i < p.reduce_cols.rows(); ++i) coords[i] -= q * p.reduce_cols.at(i, col);
    }
    return coords;
}

std::vector<Int> GradedRing::free_coords(int k, const std::vector<Int>& coords) const {
    return intlin::matvec(piece(k).proj, coords);
}

std::vector<Int> GradedRing::lift_free_coords(int k, const std::vector<Int>& free) const {
    return normal_form(k, intlin::vecmat(free, piece(k).lift));
}

RingElem GradedRing::zero(int weight) const {
    int g = piece_exists(weight) ? num_generators(weight) : 0;
    return RingElem(this, weight, std::vector<Int>(g));
}

RingElem GradedRing::one() const {
    return RingElem(this, 0, {Int(1)});
}

RingElem GradedRing::element(int weight, std::vector<Int> coords) const {
    if (!piece_exists(weight)) {
        if (!intlin::is_zero_vec(coords))
            throw InternalError("GradedRing: nonzero element in missing piece");
        return RingElem(this, weight, {});
    }
    return RingElem(this, weight, normal_form(weight, std::move(coords)));
}

RingElem GradedRing::from_poly(int weight, const SparseRingPoly& poly) const {
    std::vector<Int> coords(num_generators(weight));
    for (const auto& [mono, coeff] : poly) {
        int idx = monomial_index(weight, mono);
        if (idx < 0) throw InternalError("GradedRing: monomial of wrong weight in from_poly");
        coords[idx] += coeff;
    }
    return element(weight, std::move(coords));
}

RingElem GradedRing::fgl_coefficient(int i, int j) const {
    if (i > j) std::swap(i, j);
    auto it = fgl_.find({i, j});
    if (it == fgl_.end()) return zero(i + j - 1);
    return it->second;
}

RingElem GradedRing::add(const RingElem& a, const RingElem& b) const {
    return a + b;
}

RingElem GradedRing::mul(const RingElem& a, const RingElem& b) const {
    if (a.is_zero() || b.is_zero()) return zero(a.weight() + b.weight());
    if (a.ring() != this || b.ring() != this)
        throw InputError("GradedRing: multiplication across rings");
    int k = a.weight() + b.weight();
    if (!piece_exists(k)) return RingElem(this, k, {});
    std::vector<Int> coords(num_generators(k));
    const auto& ma = monomials(a.weight());
    const auto& mb = monomials(b.weight());
    for (size_t i = 0; i < ma.size(); ++i) {
        if (a.coords()[i] == 0) continue;
        for (size_t j = 0; j < mb.size(); ++j) {
            if (b.coords()[j] == 0) continue;
            Monomial prod = ma[i];
            for (size_t t = 0; t < prod.size(); ++t) prod[t] += mb[j][t];
            coords[monomial_index(k, prod)] += a.coords()[i] * b.coords()[j];
        }
    }
    return element(k, std::move(coords));
}

std::shared_ptr<const GradedRing> make_additive_ring(int truncation) {
    return std::make_shared<GradedRing>("Z(additive)", truncation, std::vector<RingVariable>{},
                                        std::vector<SparseRingPoly>{},
                                        std::map<std::pair<int, int>, SparseRingPoly>{});
}

std::shared_ptr<const GradedRing> make_multiplicative_ring(int truncation) {
    std::map<std::pair<int, int>, SparseRingPoly> fgl;
    fgl[{1, 1}] = SparseRingPoly{{Monomial{1}, Int(-1)}}; // a_{1,1} = -b
    return std::make_shared<GradedRing>("Z[b](multiplicative)", truncation,
                                        std::vector<RingVariable>{{"b", 1}},
                                        std::vector<SparseRingPoly>{}, fgl);
}

} // namespace fglfans
