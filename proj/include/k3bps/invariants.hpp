#ifndef K3BPS_INVARIANTS_HPP
#define K3BPS_INVARIANTS_HPP

#include <map>
#include <numeric>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "mukai.hpp"
#include "rational.hpp"
#include "series.hpp"

namespace k3bps {

// chi(Hilb^n(S)) for n = 0..N: coefficients of Pi (1-q^n)^{-24}.
struct HilbSeries {
    std::vector<Integer> coefficients;

    int max_n() const { return static_cast<int>(coefficients.size()) - 1; }

    const Integer& at(int n) const {
        if (n < 0 || n > max_n())
            throw CutoffExceeded("HilbSeries: index outside computed range");
        return coefficients[static_cast<std::size_t>(n)];
    }
};

inline HilbSeries hilb_euler_series(int N) {
    if (N < 0) throw CutoffExceeded("hilb_euler_series: negative cutoff");
    Cutoff box;
    box.q_max = N;
    Series s = product_power([](int) { return -24; }, Var::Q, +1, N, box);
    HilbSeries h;
    h.coefficients.resize(static_cast<std::size_t>(N) + 1);
    for (const auto& [m, c] : s.terms())
        h.coefficients[static_cast<std::size_t>(m.q)] = c.get_num();
    return h;
}

// Table of Gopakumar-Vafa invariants n_{g,h}; zero entries are not stored.
struct BPSTable {
    std::map<std::pair<int, int>, Integer> entries; // key (g, h)
    int g_max = 0, h_max = 0;

    Integer at(int g, int h) const {
        auto it = entries.find({g, h});
        return it == entries.end() ? Integer(0) : it->second;
    }
};

// Solves the KKV product
//   sum_{g,h} (-1)^g n_{g,h} (y^{1/2}-y^{-1/2})^{2g} q^h
//     = Pi_n 1/((1-q^n)^20 (1-y q^n)^2 (1-y^{-1} q^n)^2)
// for the n_{g,h}. Each q^h coefficient is a Laurent polynomial in y, written
// in the basis z^{2g} with z = y^{1/2}-y^{-1/2} by a triangular solve from the
// top y-degree downward; the residual must vanish exactly.
inline BPSTable kkv_solve(int g_max, int h_max) {
    if (g_max < 0 || h_max < 0)
        throw CutoffExceeded("kkv_solve: negative cutoff");

    Cutoff box;
    box.q_max = h_max;
    box.y2_min = -2 * h_max;
    box.y2_max = 2 * h_max;

    // y = y2^2: each factor (1 - y^{+-1} q^n)^{-2} lives at y2-exponent +-2n'.
    Series rhs = product_power([](int) { return -20; }, Var::Q, +1, h_max, box);
    for (int n = 1; n <= h_max; ++n) {
        Series f_plus = Series::one(box);
        Monomial yq = var_monomial(box, Var::Q, n);
        yq.y2 = 2;
        f_plus.add_term(yq, Rational(-1));
        Series f_minus = Series::one(box);
        yq.y2 = -2;
        f_minus.add_term(yq, Rational(-1));
        rhs = rhs * pow_int(f_plus, -2) * pow_int(f_minus, -2);
    }

    BPSTable table;
    table.g_max = g_max;
    table.h_max = h_max;

    for (int h = 0; h <= h_max; ++h) {
        // Laurent polynomial in y2 at q^h, indexed by y-degree j (y2 = 2j).
        std::map<int, Rational> row;
        for (const auto& [m, c] : rhs.terms()) {
            if (m.q != h) continue;
            row[m.y2 / 2] = c;
        }
        // z^2 = y - 2 + y^{-1}; peel off the top y-degree g downward.
        for (int g = h; g >= 0; --g) {
            Rational top(0);
            if (auto it = row.find(g); it != row.end()) top = it->second;
            if (top == 0) continue;
            if (!is_integer(top))
                throw NonzeroResidual("kkv_solve: non-integer BPS coefficient");
            // top = (-1)^g n_{g,h}: z^{2g} has leading term y^g with coeff 1.
            Integer n_gh = (g % 2 == 0) ? top.get_num() : Integer(-top.get_num());
            // subtract (-1)^g n_{g,h} (y - 2 + 1/y)^g from the row
            std::map<int, Rational> zpow{{0, Rational(1)}};
            for (int i = 0; i < g; ++i) {
                std::map<int, Rational> next;
                for (const auto& [j, c] : zpow) {
                    next[j + 1] += c;
                    next[j] += -2 * c;
                    next[j - 1] += c;
                }
                zpow = std::move(next);
            }
            for (const auto& [j, c] : zpow) {
                row[j] -= top * c;
                if (row[j] == 0) row.erase(j);
            }
            if (g <= g_max && n_gh != 0) table.entries[{g, h}] = n_gh;
        }
        for (const auto& [j, c] : row)
            if (c != 0)
                throw NonzeroResidual("kkv_solve: q^h coefficient is not a "
                                      "polynomial in z^2");
    }
    return table;
}

// n_0^beta = n_{0,h} = chi(Hilb^h(S)) for h = beta^2/2 + 1; 0 when h < 0.
inline Integer genus0_gv(const Rational& beta_selfint, const HilbSeries& hilb) {
    if (!is_integer(beta_selfint) || beta_selfint.get_num() % 2 != 0)
        throw OddSelfIntersection("genus0_gv: beta^2 must be an even integer");
    Integer h = beta_selfint.get_num() / 2 + 1;
    if (h < 0) return 0;
    if (h > hilb.max_n())
        throw CutoffExceeded("genus0_gv: Hilbert series cutoff exceeded");
    return hilb.at(static_cast<int>(h.get_si()));
}

namespace detail {

inline long gcd_with(long acc, const Integer& x) {
    Integer a = abs(x);
    Integer g = gcd(Integer(acc), a);
    return g.get_si();
}

} // namespace detail

// N_{n,beta} = sum_{k >= 1, k | (beta,n)} (1/k^2) n_0^{beta/k}.
inline Rational multiple_cover_N(long n, const std::vector<long>& beta,
                                 const NSLattice& L, const HilbSeries& hilb) {
    bool beta_zero = true;
    long g = std::abs(n);
    for (long b : beta) {
        if (b < 0)
            throw NonIntegralVector("multiple_cover_N: beta must be effective");
        if (b != 0) beta_zero = false;
        g = detail::gcd_with(g, Integer(b));
    }
    if (beta_zero)
        throw NonIntegralVector("multiple_cover_N: beta must be nonzero");

    Rational total(0);
    for (long k = 1; k <= g; ++k) {
        if (g % k != 0) continue;
        std::vector<Rational> bk(beta.size());
        for (std::size_t i = 0; i < beta.size(); ++i) bk[i] = Rational(beta[i], k);
        const Rational self = L.dot(bk, bk);
        Rational term(genus0_gv(self, hilb));
        term /= Rational(k) * Rational(k);
        total += term;
    }
    return total;
}

enum class ExponentConvention {
    Half,   // e(w) = <w,w>/2 + 1 (consistent with beta^2 = 2h-2 and KKV)
    Literal // e(w) = <w,w> + 1
};

// J(v) = sum_{k >= 1, k | v} (1/k^2) chi(Hilb^{e(v/k)}(S)).
inline Rational multiple_cover_J(const MukaiVector& v, const NSLattice& L,
                                 const HilbSeries& hilb,
                                 ExponentConvention conv = ExponentConvention::Half) {
    if (!v.is_integral())
        throw NonIntegralVector("multiple_cover_J: vector must be integral");
    long g = detail::gcd_with(0, v.rk.get_num());
    g = detail::gcd_with(g, v.s.get_num());
    for (const auto& c : v.l) g = detail::gcd_with(g, c.get_num());
    if (g == 0)
        throw NonIntegralVector("multiple_cover_J: vector must be nonzero");

    Rational total(0);
    for (long k = 1; k <= g; ++k) {
        if (g % k != 0) continue;
        Rational inv_k(1, k);
        inv_k.canonicalize();
        MukaiVector w = scale(v, inv_k);
        const Rational p = pairing(w, w, L);
        Integer e;
        if (conv == ExponentConvention::Half) {
            if (p.get_num() % 2 != 0)
                throw OddPairing("multiple_cover_J: <w,w> odd under the half "
                                 "convention");
            e = p.get_num() / 2 + 1;
        } else {
            e = p.get_num() + 1;
        }
        if (e < 0) continue; // chi(Hilb^m) = 0 for m < 0
        if (e > hilb.max_n())
            throw CutoffExceeded("multiple_cover_J: Hilbert series cutoff exceeded");
        Rational term(hilb.at(static_cast<int>(e.get_si())));
        term /= Rational(k) * Rational(k);
        total += term;
    }
    return total;
}

inline bool isometry_invariance_check(const Isometry& g, const MukaiVector& v,
                                      const NSLattice& L, const HilbSeries& hilb,
                                      ExponentConvention conv = ExponentConvention::Half) {
    return multiple_cover_J(v, L, hilb, conv) ==
           multiple_cover_J(apply_isometry(g, v, L), L, hilb, conv);
}

} // namespace k3bps

#endif
