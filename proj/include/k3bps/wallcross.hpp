#ifndef K3BPS_WALLCROSS_HPP
#define K3BPS_WALLCROSS_HPP

#include <algorithm>
#include <cstdlib>
#include <map>
#include <numeric>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"
#include "series.hpp"

namespace k3bps {

// Charge (n, beta) of a one-dimensional class: integer holomorphic Euler
// characteristic plus an effective multidegree.
struct Charge {
    long n = 0;
    std::vector<int> beta;

    friend auto operator<=>(const Charge&, const Charge&) = default;

    bool beta_positive() const {
        for (int b : beta)
            if (b > 0) return true;
        return false;
    }
};

// The N (rank-zero counting) and L (limit stable) tables of the wall-crossing
// formula. The L-series constant term is pinned to 1 by construction.
struct CountingTable {
    std::map<Charge, Rational> N;
    std::map<Charge, Rational> L;
};

// BPS table keyed by (genus, beta).
using BpsMap = std::map<std::pair<int, std::vector<int>>, long>;

// Z_P^red = -log(1 + Z_P^chi).
inline Series behrend_to_reduced(const Series& z_chi) {
    return -log1p(z_chi);
}

// Independent combinatorial route to the same quantity: the stratified sum
//   sum_{k>=1} (-1)^k (1/k) multinomial(k; k_1..k_l) Pi P_{a_i}^{k_i} Q^{sum k_i a_i}
// over tuples of multiplicities of the distinct charges. Used only as an
// oracle for behrend_to_reduced.
inline Series stratification_oracle(const std::map<Charge, Rational>& P_table,
                                    const Cutoff& box) {
    Series out = Series::zero(box);
    std::vector<std::pair<Charge, Rational>> charges(P_table.begin(), P_table.end());

    // Recursive enumeration of multiplicity vectors (k_1..k_l); each charge's
    // multiplicity is bounded by what still fits in the box.
    struct Walker {
        const std::vector<std::pair<Charge, Rational>>& charges;
        const Cutoff& box;
        Series& out;

        void recurse(std::size_t i, long k, const Monomial& mono,
                     const Rational& weight) {
            if (i == charges.size()) {
                if (k == 0) return;
                // (-1)^k (1/k) k! * prod P^{k_i}/k_i!, with the k!/prod k_i!
                // multinomial already folded into `weight` as 1/prod k_i!.
                Rational c = weight;
                Integer kfact = 1;
                for (long j = 2; j <= k; ++j) kfact *= j;
                c *= Rational(kfact);
                c /= Rational(k);
                if (k % 2 != 0) c = -c;
                out.add_term(mono, c);
                return;
            }
            const auto& [alpha, P] = charges[i];
            Monomial m = mono;
            Rational w = weight;
            for (long ki = 0;; ++ki) {
                if (ki > 0) {
                    m.q += static_cast<int>(alpha.n);
                    for (std::size_t s = 0; s < alpha.beta.size(); ++s)
                        m.t[s] += alpha.beta[s];
                    if (!box_can_reach(m)) break;
                    w *= P;
                    w /= Rational(ki);
                }
                recurse(i + 1, k + ki, m, w);
                if (ki > 64) break; // charges with zero monomial cannot recur forever
            }
        }

        // A partial monomial can still land in the box if its t-coordinates
        // have not overflowed (t only grows) and q is not already past both
        // walls for every continuation; q continuations are bounded, so only
        // prune on t.
        bool box_can_reach(const Monomial& m) const {
            for (std::size_t s = 0; s < m.t.size(); ++s)
                if (m.t[s] > box.t_max[s]) return false;
            return m.q <= box.q_max + q_slack() && m.q >= box.q_min - q_slack();
        }

        long q_slack() const {
            long slack = 0;
            for (const auto& [a, p] : charges)
                slack += std::abs(a.n) * 8; // generous; boxes are small
            return slack;
        }
    };

    Monomial zero;
    zero.t.assign(box.beta_slots(), 0);
    Walker w{charges, box, out};
    w.recurse(0, 0, zero, Rational(1));
    return out;
}

// f_g(q) = q^{1-g} (1+q)^{2g-2}; invariant under q <-> 1/q.
inline Series f_g_series(int g, const Cutoff& box) {
    // expand (1+q)^{2g-2} in the box translated by q^{g-1}, so that nothing
    // is clipped before the shift back by q^{1-g}
    const Cutoff work = box.shifted(var_monomial(box, Var::Q, g - 1));
    Series onep_q = Series::one(work);
    onep_q.add_term(var_monomial(work, Var::Q, 1), Rational(1));
    Series r = pow_int(onep_q, 2 * g - 2);
    return detail::shift_terms(r, var_monomial(box, Var::Q, 1 - g), box);
}

// f_g(-(-q)^a): substitute q -> q^a, then flip the sign of q when a is even
// (-(-q)^a = q^a for odd a, -q^a for even a), handled exactly.
inline Series f_g_at_sign_power(int g, int a, const Cutoff& box) {
    Series f = f_g_series(g, box);
    // flip the sign of q before scaling exponents: (-q)^e -> (-1)^e q^{ae}
    if (a % 2 == 0) f = rescale_variable(f, Var::Q, Rational(-1));
    return substitute_scale(f, Var::Q, a);
}

namespace detail {

inline long beta_gcd(const std::vector<int>& beta) {
    long g = 0;
    for (int b : beta) g = std::gcd(g, static_cast<long>(std::abs(b)));
    return g;
}

inline std::vector<int> beta_div(const std::vector<int>& beta, long a) {
    std::vector<int> r(beta.size());
    for (std::size_t i = 0; i < beta.size(); ++i)
        r[i] = beta[i] / static_cast<int>(a);
    return r;
}

} // namespace detail

// L-series of the wall-crossing product:
//   exp( sum_{beta>0} L_beta(q) t^beta ),
//   L_beta(q) = sum_{g>=1} sum_{a|beta} (n_g^{beta/a}/a) f_g(-(-q)^a).
inline Series L_from_bps(const BpsMap& bps, const Cutoff& box) {
    Series arg = Series::zero(box);
    // enumerate all effective beta in the box
    std::vector<int> beta(box.beta_slots(), 0);
    bool more = true;
    while (more) {
        const long g0 = detail::beta_gcd(beta);
        if (g0 > 0) {
            Series lbeta = Series::zero(box);
            for (long a = 1; a <= g0; ++a) {
                if (g0 % a != 0) continue;
                const std::vector<int> b0 = detail::beta_div(beta, a);
                for (const auto& [key, n] : bps) {
                    if (key.first < 1 || key.second != b0 || n == 0) continue;
                    Rational c(n, a);
                    c.canonicalize();
                    lbeta = lbeta + c * f_g_at_sign_power(key.first, static_cast<int>(a), box);
                }
            }
            if (!lbeta.is_zero()) {
                Monomial tb;
                tb.t.assign(beta.begin(), beta.end());
                arg = arg + lbeta * Series::monomial(box, tb, Rational(1));
            }
        }
        more = false;
        for (std::size_t i = 0; i < beta.size(); ++i) {
            if (beta[i] < box.t_max[i]) {
                ++beta[i];
                for (std::size_t j = 0; j < i; ++j) beta[j] = 0;
                more = true;
                break;
            }
        }
    }
    return exp(arg);
}

// Recovers n_g^beta (g >= 1) from the Laurent polynomials L_beta(q): Moebius
// peel over divisors a | beta, then a triangular solve in the f_g basis,
// whose leading Laurent degree 1-g strictly decreases in g.
inline std::map<std::pair<int, std::vector<int>>, Rational> bps_from_L(
    const std::map<std::vector<int>, Series>& L_beta, const Cutoff& box) {
    std::map<std::pair<int, std::vector<int>>, Rational> result;

    // process beta in an order where all proper divisors come first:
    // increasing gcd works since beta/a has strictly smaller coordinates.
    std::vector<std::vector<int>> betas;
    for (const auto& [b, s] : L_beta) betas.push_back(b);
    std::sort(betas.begin(), betas.end(),
              [](const auto& a, const auto& b) {
                  long sa = std::accumulate(a.begin(), a.end(), 0L);
                  long sb = std::accumulate(b.begin(), b.end(), 0L);
                  return sa != sb ? sa < sb : a < b;
              });

    for (const auto& beta : betas) {
        Series rem = L_beta.at(beta).restricted(box);
        const long g0 = detail::beta_gcd(beta);
        for (long a = 2; a <= g0; ++a) {
            if (g0 % a != 0) continue;
            const std::vector<int> b0 = detail::beta_div(beta, a);
            for (const auto& [key, n] : result) {
                if (key.second != b0 || n == 0) continue;
                Rational c = n / Rational(a);
                rem = rem - c * f_g_at_sign_power(key.first, static_cast<int>(a), box);
            }
        }
        // triangular solve: most negative q-degree -d comes from f_{d+1}
        while (!rem.is_zero()) {
            const Monomial lead = rem.terms().begin()->first;
            Monomial qonly;
            qonly.t.assign(lead.t.size(), 0);
            qonly.q = lead.q;
            if (lead.q > 0 || lead != qonly)
                throw NotInSpan("bps_from_L: residual has no f_g leading term");
            const int g = 1 - lead.q;
            const Rational n = rem.coefficient(lead); // f_g lowest coeff is 1
            rem = rem - n * f_g_series(g, box);
            if (n != 0) result[{g, beta}] = n;
        }
    }
    return result;
}

// RHS of the PT wall-crossing formula (the exp-product times the L-series).
inline Series pt_wallcross_rhs(const CountingTable& table, const Cutoff& box) {
    Series prod = Series::one(box);
    for (const auto& [alpha, N] : table.N) {
        if (alpha.n <= 0 || !alpha.beta_positive() || N == 0) continue;
        Monomial m;
        m.q = static_cast<int>(alpha.n);
        m.t.assign(alpha.beta.begin(), alpha.beta.end());
        Rational c = Rational(alpha.n) * N;
        if (alpha.n % 2 == 0) c = -c; // (-1)^{n-1} n N_{n,beta}
        prod = prod * exp(Series::monomial(box, m, c));
    }
    Series lseries = Series::zero(box);
    for (const auto& [alpha, L] : table.L) {
        Monomial m;
        m.q = static_cast<int>(alpha.n);
        m.t.assign(alpha.beta.begin(), alpha.beta.end());
        lseries.add_term(m, L);
    }
    return prod * lseries;
}

// The BPS product (RHS of the conjectural PT = product formula):
//   Pi_{beta>0} [ Pi_j (1-(-q)^j t^beta)^{j n_0^beta}
//     * Pi_{g>=1} Pi_{k=0}^{2g-2} (1-(-q)^{g-1-k} t^beta)^{(-1)^{k+g} n_g^beta C(2g-2,k)} ].
inline Series bps_product(const BpsMap& bps, const Cutoff& box) {
    Series result = Series::one(box);
    for (const auto& [key, n] : bps) {
        const auto& [g, beta] = key;
        if (n == 0) continue;
        bool positive = false;
        for (int b : beta) positive = positive || b > 0;
        if (!positive) continue;
        Monomial tb;
        tb.t.assign(beta.begin(), beta.end());

        if (g == 0) {
            // genus-0 factors: j runs until (-q)^j t^beta leaves the box
            for (int j = 1; j <= box.q_max; ++j) {
                Series f = Series::one(box);
                Monomial m = tb;
                m.q = j;
                f.add_term(m, Rational(j % 2 == 0 ? -1 : 1)); // 1 - (-q)^j t^b
                result = result * pow_int(f, static_cast<long>(j) * n);
            }
        } else {
            for (int k = 0; k <= 2 * g - 2; ++k) {
                Series f = Series::one(box);
                Monomial m = tb;
                m.q = g - 1 - k;
                Rational base(m.q % 2 == 0 ? -1 : 1); // -(-q)^{g-1-k}
                f.add_term(m, base);
                Integer binom;
                mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(2 * g - 2),
                             static_cast<unsigned long>(k));
                long e = n * binom.get_si();
                if ((k + g) % 2 != 0) e = -e;
                result = result * pow_int(f, e);
            }
        }
    }
    return result;
}

// GW potential F = sum n_g^beta/k (2 sin(ku/2))^{2g-2} t^{k beta}.
// The genus-0 inversion eats two orders of u headroom, so the sum runs in an
// enlarged u-window and is restricted to the requested box at the end.
inline Series gv_resummation(const BpsMap& bps, const Cutoff& requested) {
    Cutoff box = requested;
    box.u_max += 2;
    Series out = Series::zero(box);
    for (const auto& [key, n] : bps) {
        const auto& [g, beta] = key;
        if (n == 0) continue;
        bool positive = false;
        for (int b : beta) positive = positive || b > 0;
        if (!positive) continue;
        int kmax = 0;
        for (std::size_t i = 0; i < beta.size(); ++i)
            if (beta[i] > 0) {
                int cap = box.t_max[i] / beta[i];
                kmax = kmax == 0 ? cap : std::min(kmax, cap);
            }
        for (int k = 1; k <= kmax; ++k) {
            Monomial tb;
            tb.t.resize(beta.size());
            for (std::size_t i = 0; i < beta.size(); ++i) tb.t[i] = k * beta[i];
            Rational c(n, k);
            c.canonicalize();
            out = out + c * (sin_halfangle_power(k, g, box) *
                             Series::monomial(box, tb, Rational(1)));
        }
    }
    return out.restricted(requested);
}

// F(u) -> r * F(ru): the u^{2g-2} t^beta coefficient picks up r^{2g-1}.
inline Series gerbe_rescale(const Series& F, long r) {
    if (r < 1) throw std::invalid_argument("gerbe_rescale: r must be >= 1");
    return Rational(r) * rescale_variable(F, Var::U, Rational(r));
}

// Z(u) -> Z(ru)^r for a partition function with constant term 1.
inline Series gerbe_partition_power(const Series& Z, long r) {
    if (Z.constant_term() != 1)
        throw NonzeroConstantTerm("gerbe_partition_power: constant term must be 1");
    if (r < 1) throw std::invalid_argument("gerbe_partition_power: r must be >= 1");
    return pow_int(rescale_variable(Z, Var::U, Rational(r)), r);
}

} // namespace k3bps

#endif
