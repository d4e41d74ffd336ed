#pragma once

#include "fglfans/graded_ring.hpp"

#include <map>
#include <memory>
#include <vector>

namespace fglfans {

// A homogeneous degree-d power series in num_vars degree-1 variables,
// truncated at monomial degree D (the ring truncation). The coefficient of
// t^I lives in the ring piece of weight |I| - d; terms whose piece does not
// exist are identically zero and never stored.
class GradedSeries {
public:
    GradedSeries() = default;
    GradedSeries(std::shared_ptr<const GradedRing> ring, int num_vars, int degree);

    static GradedSeries variable(std::shared_ptr<const GradedRing> ring, int num_vars, int index);
    static GradedSeries constant(std::shared_ptr<const GradedRing> ring, int num_vars, const RingElem& value);
    static GradedSeries unit(std::shared_ptr<const GradedRing> ring, int num_vars);

    const std::shared_ptr<const GradedRing>& ring() const { return ring_; }
    int num_vars() const { return num_vars_; }
    int degree() const { return degree_; }
    const std::map<Monomial, RingElem, GradedLexLess>& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    RingElem coefficient(const Monomial& exponent) const;
    void add_term(const Monomial& exponent, const RingElem& value);

    GradedSeries operator+(const GradedSeries& other) const;
    GradedSeries operator-(const GradedSeries& other) const;
    GradedSeries operator-() const;
    GradedSeries operator*(const GradedSeries& other) const;
    GradedSeries scaled(const RingElem& c) const;       // degree drops by weight(c)
    GradedSeries int_scaled(const Int& k) const;
    bool operator==(const GradedSeries& other) const;

    // Degree-1 series with zero constant term (a first Chern class image).
    bool is_chern() const;
    // Linear part as integer coordinates (coefficient of each variable).
    std::vector<Int> linear_part() const;

private:
    std::shared_ptr<const GradedRing> ring_;
    int num_vars_ = 0;
    int degree_ = 0;
    std::map<Monomial, RingElem, GradedLexLess> terms_;
};

// Ring homomorphism on series: replaces variable i by images[i]. Every image
// must be a Chern element over a common ring; `target_vars` is only consulted
// when `images` is empty.
GradedSeries substitute(const GradedSeries& f, const std::vector<GradedSeries>& images,
                        int target_vars = -1);

// f +_F g = F(f, g) for Chern elements f, g.
GradedSeries fgl_sum(const GradedSeries& f, const GradedSeries& g);

// The inverse series: the unique one-variable Chern element with
// F(u, inverse(u)) = 0 to truncation.
GradedSeries inverse_series(std::shared_ptr<const GradedRing> ring);

// [n]u: the n-fold formal sum of the one-variable identity.
GradedSeries n_series(std::shared_ptr<const GradedRing> ring, long n);

// Left-to-right formal group law fold of [c_i] vars_i. The empty combination
// is the zero Chern element in `num_vars` variables.
GradedSeries formal_linear_combination(std::shared_ptr<const GradedRing> ring, int num_vars,
                                       const std::vector<Int>& coeffs,
                                       const std::vector<GradedSeries>& vars);

// Free-coordinate layout of the degree-d series space: one block per
// admissible exponent, one integer per free coordinate of its piece.
struct SeriesLayout {
    std::shared_ptr<const GradedRing> ring;
    int num_vars = 0;
    int degree = 0;
    std::vector<Monomial> exponents; // graded-lex order
    std::vector<int> offsets;        // per exponent
    int dim = 0;

    std::vector<Int> to_coords(const GradedSeries& f) const;
    GradedSeries from_coords(const std::vector<Int>& coords) const;
};

SeriesLayout series_layout(std::shared_ptr<const GradedRing> ring, int num_vars, int degree);

// Ordered (exponent vector, coefficient coordinate vector) pairs.
std::vector<std::pair<Monomial, std::vector<Int>>> ordered_terms(const GradedSeries& f);

// Human-readable form, graded-lex term order, e.g. "t1*t2 + a[1,1]*t1^2*t2".
std::string to_string(const GradedSeries& f);

} // namespace fglfans
