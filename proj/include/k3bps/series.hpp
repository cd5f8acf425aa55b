#ifndef K3BPS_SERIES_HPP
#define K3BPS_SERIES_HPP

#include <algorithm>
#include <compare>
#include <cstdlib>
#include <map>
#include <numeric>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace k3bps {

// Formal variables of the series ring. q and u are Laurent variables, y2 is
// the half-power y^{1/2}, and T addresses one slot of the curve-class
// multidegree t^beta (effective cone = nonnegative orthant).
enum class Var { Q, U, Y2, T };

struct Monomial {
    int q = 0;
    std::vector<int> t;
    int u = 0;
    int y2 = 0;

    friend auto operator<=>(const Monomial&, const Monomial&) = default;

    Monomial operator+(const Monomial& o) const {
        Monomial r = *this;
        r.q += o.q;
        r.u += o.u;
        r.y2 += o.y2;
        for (std::size_t i = 0; i < r.t.size(); ++i) r.t[i] += o.t[i];
        return r;
    }
    Monomial operator-() const {
        Monomial r = *this;
        r.q = -r.q;
        r.u = -r.u;
        r.y2 = -r.y2;
        for (auto& e : r.t) e = -e;
        return r;
    }
    bool is_zero() const {
        return q == 0 && u == 0 && y2 == 0 &&
               std::all_of(t.begin(), t.end(), [](int e) { return e == 0; });
    }
    int total_degree() const {
        return q + u + y2 + std::accumulate(t.begin(), t.end(), 0);
    }
};

// Per-variable truncation box. t-slots always have lower bound 0.
struct Cutoff {
    int q_min = 0, q_max = 0;
    std::vector<int> t_max;
    int u_min = 0, u_max = 0;
    int y2_min = 0, y2_max = 0;

    std::size_t beta_slots() const { return t_max.size(); }

    bool contains(const Monomial& m) const {
        if (m.t.size() != t_max.size()) return false;
        if (m.q < q_min || m.q > q_max) return false;
        if (m.u < u_min || m.u > u_max) return false;
        if (m.y2 < y2_min || m.y2 > y2_max) return false;
        for (std::size_t i = 0; i < m.t.size(); ++i)
            if (m.t[i] < 0 || m.t[i] > t_max[i]) return false;
        return true;
    }

    // Componentwise intersection: min of upper bounds, max of lower bounds.
    static Cutoff intersect(const Cutoff& a, const Cutoff& b) {
        if (a.t_max.size() != b.t_max.size())
            throw DimensionMismatch("cutoff beta-slot counts differ");
        Cutoff c;
        c.q_min = std::max(a.q_min, b.q_min);
        c.q_max = std::min(a.q_max, b.q_max);
        c.u_min = std::max(a.u_min, b.u_min);
        c.u_max = std::min(a.u_max, b.u_max);
        c.y2_min = std::max(a.y2_min, b.y2_min);
        c.y2_max = std::min(a.y2_max, b.y2_max);
        c.t_max.resize(a.t_max.size());
        for (std::size_t i = 0; i < c.t_max.size(); ++i)
            c.t_max[i] = std::min(a.t_max[i], b.t_max[i]);
        return c;
    }

    // Box translated by d (t lower bounds stay pinned at 0).
    Cutoff shifted(const Monomial& d) const {
        Cutoff c = *this;
        c.q_min += d.q;
        c.q_max += d.q;
        c.u_min += d.u;
        c.u_max += d.u;
        c.y2_min += d.y2;
        c.y2_max += d.y2;
        for (std::size_t i = 0; i < c.t_max.size(); ++i)
            c.t_max[i] = std::max(0, c.t_max[i] + d.t[i]);
        return c;
    }

    friend bool operator==(const Cutoff&, const Cutoff&) = default;
};

// Truncated multivariate Laurent series with exact rational coefficients.
// Immutable in spirit: all operations return fresh values. Zero coefficients
// are never stored; every stored monomial lies inside the cutoff box.
class Series {
public:
    explicit Series(Cutoff cut) : cut_(std::move(cut)) {}

    static Series zero(const Cutoff& c) { return Series(c); }

    static Series one(const Cutoff& c) {
        Series s(c);
        Monomial m;
        m.t.assign(c.beta_slots(), 0);
        s.add_term(m, Rational(1));
        return s;
    }

    static Series monomial(const Cutoff& c, const Monomial& m, const Rational& coef) {
        Series s(c);
        s.add_term(m, coef);
        return s;
    }

    const Cutoff& cutoff() const { return cut_; }
    const std::map<Monomial, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    Monomial zero_monomial() const {
        Monomial m;
        m.t.assign(cut_.beta_slots(), 0);
        return m;
    }

    // Terms sliding outside the box are silently discarded.
    void add_term(const Monomial& m, const Rational& coef) {
        if (m.t.size() != cut_.beta_slots())
            throw DimensionMismatch("monomial beta-slot count differs from cutoff");
        if (!cut_.contains(m)) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            if (coef != 0) terms_.emplace(m, coef);
        } else {
            it->second += coef;
            if (it->second == 0) terms_.erase(it);
        }
    }

    // Stored coefficient or exact 0; OutOfCutoff distinguishes "truncated
    // away" from "zero".
    Rational coefficient(const Monomial& m) const {
        if (!cut_.contains(m))
            throw OutOfCutoff("monomial outside the truncation box");
        auto it = terms_.find(m);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    Rational constant_term() const {
        auto it = terms_.find(zero_monomial());
        return it == terms_.end() ? Rational(0) : it->second;
    }

    Series restricted(const Cutoff& box) const {
        Series r(Cutoff::intersect(cut_, box));
        for (const auto& [m, c] : terms_) r.add_term(m, c);
        return r;
    }

    friend Series operator+(const Series& a, const Series& b) {
        Series r(Cutoff::intersect(a.cut_, b.cut_));
        for (const auto& [m, c] : a.terms_) r.add_term(m, c);
        for (const auto& [m, c] : b.terms_) r.add_term(m, c);
        return r;
    }

    friend Series operator-(const Series& a, const Series& b) {
        Series r(Cutoff::intersect(a.cut_, b.cut_));
        for (const auto& [m, c] : a.terms_) r.add_term(m, c);
        for (const auto& [m, c] : b.terms_) r.add_term(m, -c);
        return r;
    }

    Series operator-() const {
        Series r(cut_);
        for (const auto& [m, c] : terms_) r.add_term(m, -c);
        return r;
    }

    // Cauchy product; terms outside the intersected box are discarded.
    friend Series operator*(const Series& a, const Series& b) {
        Series r(Cutoff::intersect(a.cut_, b.cut_));
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) r.add_term(ma + mb, ca * cb);
        return r;
    }

    friend Series operator*(const Rational& c, const Series& a) {
        Series r(a.cut_);
        if (c == 0) return r;
        for (const auto& [m, coef] : a.terms_) r.add_term(m, c * coef);
        return r;
    }

    friend bool operator==(const Series& a, const Series& b) {
        return a.terms_ == b.terms_;
    }

private:
    Cutoff cut_;
    std::map<Monomial, Rational> terms_;
};

namespace detail {

// Upper bound on how many powers of a zero-constant-term series can stay
// inside a finite box before vanishing, per variable span.
inline long power_loop_cap(const Cutoff& c) {
    long cap = 2;
    cap += c.q_max - c.q_min;
    cap += c.u_max - c.u_min;
    cap += c.y2_max - c.y2_min;
    for (int tm : c.t_max) cap += tm;
    return cap < 4 ? 4 : cap;
}

inline Monomial componentwise_min(const Series& a) {
    Monomial m = a.terms().begin()->first;
    for (const auto& [mm, c] : a.terms()) {
        m.q = std::min(m.q, mm.q);
        m.u = std::min(m.u, mm.u);
        m.y2 = std::min(m.y2, mm.y2);
        for (std::size_t i = 0; i < m.t.size(); ++i)
            m.t[i] = std::min(m.t[i], mm.t[i]);
    }
    return m;
}

inline Series shift_terms(const Series& a, const Monomial& d, const Cutoff& box) {
    Series r(box);
    for (const auto& [m, c] : a.terms()) r.add_term(m + d, c);
    return r;
}

} // namespace detail

namespace detail {

// Neumann inversion of a series with unit constant term c0:
// 1/a = (1/c0) sum_k (-(a/c0 - 1))^k. Powers must escape the box.
inline Series invert_unit(const Series& a, const Rational& c0) {
    Series rem = (Rational(1) / c0) * a;
    rem.add_term(rem.zero_monomial(), Rational(-1));
    Series inv = Series::one(a.cutoff());
    Series pw = -rem;
    const long cap = power_loop_cap(a.cutoff());
    for (long k = 1; !pw.is_zero(); ++k) {
        if (k > cap)
            throw std::domain_error(
                "inverse: powers do not escape the truncation box");
        inv = inv + pw;
        pw = pw * (-rem);
    }
    return (Rational(1) / c0) * inv;
}

} // namespace detail

// Multiplicative inverse. A unit constant term is inverted in place (box
// unchanged). Otherwise a = x^{m0} * p is factored with m0 the componentwise
// minimum exponent, which must carry no curve class since negative t-powers
// leave the effective cone; the result cutoff is the input box intersected
// with the box translated by -2*m0, the region where a*inverse(a) = 1 holds.
inline Series inverse(const Series& a) {
    if (a.is_zero())
        throw ZeroLeadingTerm("inverse of the zero series");
    const Rational c = a.constant_term();
    if (c != 0) return detail::invert_unit(a, c);

    const Monomial m0 = detail::componentwise_min(a);
    for (int e : m0.t)
        if (e > 0)
            throw ZeroLeadingTerm("leading monomial carries a curve class; "
                                  "inverse leaves the effective cone");
    const Cutoff shifted_box = a.cutoff().shifted(-m0);
    Series p = detail::shift_terms(a, -m0, shifted_box);
    const Rational c0 = p.constant_term();
    if (c0 == 0)
        throw ZeroLeadingTerm("no single invertible leading monomial");

    Series inv = detail::invert_unit(p, c0);
    Cutoff result_box =
        Cutoff::intersect(a.cutoff(), a.cutoff().shifted(-(m0 + m0)));
    return detail::shift_terms(inv, -m0, result_box);
}

// Integer powers; negative exponents go through inverse.
inline Series pow_int(const Series& a, long e) {
    if (e < 0) return pow_int(inverse(a), -e);
    Series acc = Series::one(a.cutoff());
    Series b = a;
    while (e > 0) {
        if (e & 1) acc = acc * b;
        b = b * b;
        e >>= 1;
    }
    return acc;
}

// log(1+a) = sum_{k>=1} (-1)^{k-1} a^k / k for a with zero constant term.
inline Series log1p(const Series& a) {
    if (a.constant_term() != 0)
        throw NonzeroConstantTerm("log1p requires zero constant term");
    Series acc = Series::zero(a.cutoff());
    Series pw = a;
    const long cap = detail::power_loop_cap(a.cutoff());
    for (long k = 1; !pw.is_zero(); ++k) {
        if (k > cap)
            throw std::domain_error(
                "log1p: powers do not escape the truncation box");
        Rational c(k % 2 == 1 ? 1 : -1, k);
        c.canonicalize();
        acc = acc + c * pw;
        pw = pw * a;
    }
    return acc;
}

// exp(a) = sum a^k / k! for a with zero constant term.
inline Series exp(const Series& a) {
    if (a.constant_term() != 0)
        throw NonzeroConstantTerm("exp requires zero constant term");
    Series acc = Series::one(a.cutoff());
    Series pw = a;
    Rational fact(1);
    const long cap = detail::power_loop_cap(a.cutoff());
    for (long k = 1; !pw.is_zero(); ++k) {
        if (k > cap)
            throw std::domain_error(
                "exp: powers do not escape the truncation box");
        fact /= k; // fact = 1/k!
        acc = acc + fact * pw;
        pw = pw * a;
    }
    return acc;
}

inline Monomial var_monomial(const Cutoff& box, Var var, int exponent, int slot = 0) {
    Monomial m;
    m.t.assign(box.beta_slots(), 0);
    switch (var) {
        case Var::Q: m.q = exponent; break;
        case Var::U: m.u = exponent; break;
        case Var::Y2: m.y2 = exponent; break;
        case Var::T: m.t.at(static_cast<std::size_t>(slot)) = exponent; break;
    }
    return m;
}

// Pi_{n=1..N} (1 - sign*var^n)^{e(n)} expanded exactly within the box.
template <typename ExponentFn>
Series product_power(ExponentFn&& exponent_fn, Var var, int sign,
                     int N, const Cutoff& box, int slot = 0) {
    Series result = Series::one(box);
    for (int n = 1; n <= N; ++n) {
        long e = exponent_fn(n);
        if (e == 0) continue;
        Series factor = Series::one(box);
        factor.add_term(var_monomial(box, var, n, slot), Rational(-sign));
        result = result * pow_int(factor, e);
    }
    return result;
}

// var -> var^k. The box is unchanged; monomials pushed outside are dropped,
// which keeps every surviving coefficient exact.
inline Series substitute_scale(const Series& a, Var var, int k, int slot = 0) {
    if (k < 1) throw std::invalid_argument("substitute_scale: k must be >= 1");
    Series r(a.cutoff());
    for (const auto& [m, c] : a.terms()) {
        Monomial mm = m;
        switch (var) {
            case Var::Q: mm.q *= k; break;
            case Var::U: mm.u *= k; break;
            case Var::Y2: mm.y2 *= k; break;
            case Var::T: mm.t.at(static_cast<std::size_t>(slot)) *= k; break;
        }
        r.add_term(mm, c);
    }
    return r;
}

// var -> c*var: the coefficient at var-exponent e picks up c^e.
inline Series rescale_variable(const Series& a, Var var, const Rational& c,
                               int slot = 0) {
    if (c == 0) throw ZeroScale("rescale_variable: scale must be nonzero");
    Series r(a.cutoff());
    for (const auto& [m, coef] : a.terms()) {
        int e = 0;
        switch (var) {
            case Var::Q: e = m.q; break;
            case Var::U: e = m.u; break;
            case Var::Y2: e = m.y2; break;
            case Var::T: e = m.t.at(static_cast<std::size_t>(slot)); break;
        }
        r.add_term(m, coef * pow_rational(c, e));
    }
    return r;
}

// (2 sin(ku/2))^{2g-2} as an exact Laurent series in u. The g=0 case has
// leading term k^{-2} u^{-2}; g=1 is the constant 1.
inline Series sin_halfangle_power(int k, int g, const Cutoff& u_box) {
    const int e = 2 * g - 2;
    if (e == 0) return Series::one(u_box);

    // 2 sin(ku/2) = sum_{j>=0} (-1)^j 2 (k/2)^{2j+1} u^{2j+1} / (2j+1)!
    Series s(u_box);
    Rational term(k); // j = 0 term: 2*(k/2) = k
    for (int j = 0; 2 * j + 1 <= u_box.u_max; ++j) {
        if (j > 0) {
            term *= Rational(-k * k);
            term /= Rational(4 * (2 * j) * (2 * j + 1));
        }
        s.add_term(var_monomial(u_box, Var::U, 2 * j + 1), term);
    }
    return pow_int(s, e);
}

} // namespace k3bps

#endif
