#include "fglfans/series.hpp"

#include "fglfans/error.hpp"

#include <algorithm>
#include <limits>

namespace fglfans {

namespace {

void require_same_shape(const GradedSeries& a, const GradedSeries& b, const char* what) {
    if (a.ring() != b.ring() || a.num_vars() != b.num_vars())
        throw InputError(std::string("GradedSeries: ring or variable mismatch in ") + what);
}

} // namespace

GradedSeries::GradedSeries(std::shared_ptr<const GradedRing> ring, int num_vars, int degree)
    : ring_(std::move(ring)), num_vars_(num_vars), degree_(degree) {}

GradedSeries GradedSeries::variable(std::shared_ptr<const GradedRing> ring, int num_vars, int index) {
    GradedSeries s(ring, num_vars, 1);
    Monomial e(num_vars, 0);
    e[index] = 1;
    s.add_term(e, ring->one());
    return s;
}

GradedSeries GradedSeries::constant(std::shared_ptr<const GradedRing> ring, int num_vars,
                                    const RingElem& value) {
    GradedSeries s(ring, num_vars, -value.weight());
    s.add_term(Monomial(num_vars, 0), value);
    return s;
}

GradedSeries GradedSeries::unit(std::shared_ptr<const GradedRing> ring, int num_vars) {
    RingElem one = ring->one();
    return constant(std::move(ring), num_vars, one);
}

RingElem GradedSeries::coefficient(const Monomial& exponent) const {
    auto it = terms_.find(exponent);
    if (it != terms_.end()) return it->second;
    return ring_->zero(monomial_total(exponent) - degree_);
}

void GradedSeries::add_term(const Monomial& exponent, const RingElem& value) {
    if (static_cast<int>(exponent.size()) != num_vars_)
        throw InternalError("GradedSeries: exponent arity mismatch");
    int total = monomial_total(exponent);
    if (total > ring_->truncation()) return;
    int w = total - degree_;
    if (!ring_->piece_exists(w)) return;
    if (value.is_zero()) return;
    if (value.weight() != w) throw InternalError("GradedSeries: coefficient in wrong piece");
    auto it = terms_.find(exponent);
    if (it == terms_.end()) {
        terms_.emplace(exponent, value);
    } else {
        RingElem sum = it->second + value;
        if (sum.is_zero())
            terms_.erase(it);
        else
            it->second = sum;
    }
}

GradedSeries GradedSeries::operator+(const GradedSeries& other) const {
    require_same_shape(*this, other, "addition");
    // zero series are degree-agnostic
    if (other.is_zero()) return *this;
    if (is_zero()) return other;
    if (degree_ != other.degree_)
        throw InputError("GradedSeries: degree mismatch in addition");
    GradedSeries out = *this;
    for (const auto& [e, c] : other.terms_) out.add_term(e, c);
    return out;
}

GradedSeries GradedSeries::operator-(const GradedSeries& other) const {
    return *this + (-other);
}

GradedSeries GradedSeries::operator-() const {
    return int_scaled(Int(-1));
}

GradedSeries GradedSeries::operator*(const GradedSeries& other) const {
    require_same_shape(*this, other, "multiplication");
    GradedSeries out(ring_, num_vars_, degree_ + other.degree_);
    for (const auto& [ea, ca] : terms_)
        for (const auto& [eb, cb] : other.terms_) {
            Monomial e = ea;
            for (int i = 0; i < num_vars_; ++i) e[i] += eb[i];
            if (monomial_total(e) > ring_->truncation()) continue;
            out.add_term(e, ca * cb);
        }
    return out;
}

GradedSeries GradedSeries::scaled(const RingElem& c) const {
    GradedSeries out(ring_, num_vars_, degree_ - c.weight());
    if (c.is_zero()) return out;
    for (const auto& [e, v] : terms_) out.add_term(e, v * c);
    return out;
}

GradedSeries GradedSeries::int_scaled(const Int& k) const {
    GradedSeries out(ring_, num_vars_, degree_);
    if (k == 0) return out;
    for (const auto& [e, v] : terms_) out.add_term(e, v.scaled(k));
    return out;
}

bool GradedSeries::operator==(const GradedSeries& other) const {
    if (is_zero() && other.is_zero() && ring_ == other.ring_ && num_vars_ == other.num_vars_)
        return true;
    return ring_ == other.ring_ && num_vars_ == other.num_vars_ && degree_ == other.degree_ &&
           terms_ == other.terms_;
}

bool GradedSeries::is_chern() const {
    if (degree_ != 1) return false;
    return terms_.find(Monomial(num_vars_, 0)) == terms_.end();
}

std::vector<Int> GradedSeries::linear_part() const {
    std::vector<Int> out(num_vars_);
    for (int i = 0; i < num_vars_; ++i) {
        Monomial e(num_vars_, 0);
        e[i] = 1;
        auto it = terms_.find(e);
        if (it != terms_.end()) out[i] = it->second.coords().at(0);
    }
    return out;
}

GradedSeries substitute(const GradedSeries& f, const std::vector<GradedSeries>& images,
                        int target_vars) {
    if (static_cast<int>(images.size()) != f.num_vars())
        throw InputError("substitute: one image per variable required");
    std::shared_ptr<const GradedRing> ring = f.ring();
    int nv = target_vars;
    if (!images.empty()) {
        nv = images.front().num_vars();
        for (const GradedSeries& img : images) {
            if (img.ring() != ring || img.num_vars() != nv)
                throw InputError("substitute: images must share the ring and variable count");
            if (!img.is_zero() && !img.is_chern())
                throw InputError("substitute: images must be Chern elements (degree 1, no constant term)");
        }
    }
    if (nv < 0) throw InputError("substitute: target variable count required for empty image list");

    // powers[v][e] = images[v]^e, filled on demand
    std::vector<std::vector<GradedSeries>> powers(images.size());
    for (size_t v = 0; v < images.size(); ++v)
        powers[v].push_back(GradedSeries::constant(ring, nv, ring->one())); // e = 0

    GradedSeries out(ring, nv, f.degree());
    for (const auto& [e, c] : f.terms()) {
        GradedSeries prod = GradedSeries::constant(ring, nv, ring->one());
        for (int v = 0; v < f.num_vars(); ++v) {
            while (static_cast<int>(powers[v].size()) <= e[v])
                powers[v].push_back(powers[v].back() * images[v]);
            if (e[v] > 0) prod = prod * powers[v][e[v]];
        }
        out = out + prod.scaled(c);
    }
    return out;
}

GradedSeries fgl_sum(const GradedSeries& f, const GradedSeries& g) {
    require_same_shape(f, g, "fgl_sum");
    if (!(f.is_zero() || f.is_chern()) || !(g.is_zero() || g.is_chern()))
        throw InputError("fgl_sum: arguments must be Chern elements");
    const auto& ring = f.ring();
    int d = ring->truncation();
    // degree-1 accumulator so that zero inputs keep the right shape
    GradedSeries sum(ring, f.num_vars(), 1);
    sum = sum + f;
    sum = sum + g;
    std::vector<GradedSeries> fpow{GradedSeries::constant(ring, f.num_vars(), ring->one()), f};
    std::vector<GradedSeries> gpow{GradedSeries::constant(ring, f.num_vars(), ring->one()), g};
    for (int i = 1; i + 1 <= d; ++i) {
        while (static_cast<int>(fpow.size()) <= i) fpow.push_back(fpow.back() * f);
        if (fpow[i].is_zero()) break;
        for (int j = 1; i + j <= d; ++j) {
            while (static_cast<int>(gpow.size()) <= j) gpow.push_back(gpow.back() * g);
            if (gpow[j].is_zero()) break;
            RingElem a = ring->fgl_coefficient(i, j);
            if (a.is_zero()) continue;
            sum = sum + (fpow[i] * gpow[j]).scaled(a);
        }
    }
    return sum;
}

GradedSeries inverse_series(std::shared_ptr<const GradedRing> ring) {
    int d = ring->truncation();
    GradedSeries u = GradedSeries::variable(ring, 1, 0);
    GradedSeries chi = -u;
    for (int k = 2; k <= d; ++k) {
        GradedSeries residual = fgl_sum(u, chi);
        if (residual.is_zero()) break;
        const auto& [e, c] = *residual.terms().begin();
        if (monomial_total(e) != k)
            throw InternalError("inverse_series: unexpected residual order");
        GradedSeries corr(ring, 1, 1);
        corr.add_term(e, -c);
        chi = chi + corr;
    }
    if (!fgl_sum(u, chi).is_zero())
        throw InternalError("inverse_series: residual nonzero after solving to truncation");
    return chi;
}

GradedSeries n_series(std::shared_ptr<const GradedRing> ring, long n) {
    GradedSeries u = GradedSeries::variable(ring, 1, 0);
    if (n < 0) return substitute(n_series(ring, -n), {inverse_series(ring)});
    GradedSeries acc(ring, 1, 1);
    for (long i = 0; i < n; ++i) acc = fgl_sum(acc, u);
    return acc;
}

GradedSeries formal_linear_combination(std::shared_ptr<const GradedRing> ring, int num_vars,
                                       const std::vector<Int>& coeffs,
                                       const std::vector<GradedSeries>& vars) {
    if (coeffs.size() != vars.size())
        throw InputError("formal_linear_combination: coefficient/variable count mismatch");
    GradedSeries acc(ring, num_vars, 1);
    for (size_t i = 0; i < coeffs.size(); ++i) {
        if (vars[i].ring() != ring || vars[i].num_vars() != num_vars)
            throw InputError("formal_linear_combination: mismatched term");
        if (coeffs[i] > std::numeric_limits<long>::max() || coeffs[i] < std::numeric_limits<long>::min())
            throw ConfigError("formal_linear_combination: coefficient out of range");
        GradedSeries scaled_term = substitute(n_series(ring, static_cast<long>(coeffs[i])), {vars[i]});
        acc = fgl_sum(acc, scaled_term);
    }
    return acc;
}

std::vector<Int> SeriesLayout::to_coords(const GradedSeries& f) const {
    if (f.ring() != ring || f.num_vars() != num_vars || f.degree() != degree)
        throw InternalError("SeriesLayout: shape mismatch");
    std::vector<Int> out(dim);
    for (size_t i = 0; i < exponents.size(); ++i) {
        int w = monomial_total(exponents[i]) - degree;
        std::vector<Int> fc = ring->free_coords(w, f.coefficient(exponents[i]).coords());
        for (size_t j = 0; j < fc.size(); ++j) out[offsets[i] + j] = fc[j];
    }
    return out;
}

GradedSeries SeriesLayout::from_coords(const std::vector<Int>& coords) const {
    if (static_cast<int>(coords.size()) != dim) throw InternalError("SeriesLayout: bad length");
    GradedSeries f(ring, num_vars, degree);
    for (size_t i = 0; i < exponents.size(); ++i) {
        int w = monomial_total(exponents[i]) - degree;
        int fr = ring->free_rank(w);
        std::vector<Int> fc(coords.begin() + offsets[i], coords.begin() + offsets[i] + fr);
        f.add_term(exponents[i], ring->element(w, ring->lift_free_coords(w, fc)));
    }
    return f;
}

std::vector<std::pair<Monomial, std::vector<Int>>> ordered_terms(const GradedSeries& f) {
    std::vector<std::pair<Monomial, std::vector<Int>>> out;
    for (const auto& [e, c] : f.terms()) out.emplace_back(e, c.coords());
    return out;
}

std::string to_string(const GradedSeries& f) {
    if (f.is_zero()) return "0";
    const auto& ring = *f.ring();
    std::string out;
    for (const auto& [e, c] : f.terms()) {
        int w = monomial_total(e) - f.degree();
        const auto& monos = ring.monomials(w);
        std::string coeff;
        int nonzero = 0;
        for (size_t m = 0; m < monos.size(); ++m) {
            const Int& x = c.coords()[m];
            if (x == 0) continue;
            ++nonzero;
            if (!coeff.empty()) coeff += x > 0 ? " + " : " - ";
            else if (x < 0) coeff += "-";
            Int ax = x < 0 ? Int(-x) : x;
            std::string mono;
            for (size_t v = 0; v < monos[m].size(); ++v) {
                if (monos[m][v] == 0) continue;
                if (!mono.empty()) mono += "*";
                mono += ring.variable(static_cast<int>(v)).name;
                if (monos[m][v] > 1) mono += "^" + std::to_string(monos[m][v]);
            }
            if (ax != 1 || mono.empty()) coeff += ax.str();
            if (ax != 1 && !mono.empty()) coeff += "*";
            coeff += mono;
        }
        std::string tmono;
        for (size_t v = 0; v < e.size(); ++v) {
            if (e[v] == 0) continue;
            if (!tmono.empty()) tmono += "*";
            tmono += "t" + std::to_string(v + 1);
            if (e[v] > 1) tmono += "^" + std::to_string(e[v]);
        }
        std::string term;
        if (nonzero > 1 && !tmono.empty())
            term = "(" + coeff + ")";
        else
            term = coeff;
        if (!tmono.empty()) {
            if (term == "1") term = tmono;
            else if (term == "-1") term = "-" + tmono;
            else term += "*" + tmono;
        }
        if (!out.empty()) out += " + ";
        out += term;
    }
    return out;
}

SeriesLayout series_layout(std::shared_ptr<const GradedRing> ring, int num_vars, int degree) {
    SeriesLayout layout;
    layout.ring = ring;
    layout.num_vars = num_vars;
    layout.degree = degree;
    int d = ring->truncation();
    std::vector<int> ones(num_vars, 1);
    for (int total = std::max(0, degree); total <= d; ++total) {
        if (!ring->piece_exists(total - degree)) continue;
        if (ring->free_rank(total - degree) == 0) continue;
        for (const Monomial& e : enumerate_weighted_monomials(ones, total)) {
            layout.exponents.push_back(e);
            layout.offsets.push_back(layout.dim);
            layout.dim += ring->free_rank(total - degree);
        }
    }
    return layout;
}

} // namespace fglfans
