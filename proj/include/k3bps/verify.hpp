#ifndef K3BPS_VERIFY_HPP
#define K3BPS_VERIFY_HPP

#include <random>
#include <vector>

#include "invariants.hpp"
#include "mukai.hpp"
#include "series.hpp"
#include "stability.hpp"
#include "wallcross.hpp"

// Identity-verification pipelines. Each check computes both sides in an
// internally enlarged q-window (products of Laurent factors can pass through
// exponents outside the requested window before landing back inside it) and
// compares exactly on the requested box.

namespace k3bps {

struct VerifyReport {
    bool pass = true;
    Cutoff verified_box;
    Monomial first_mismatch;
    Rational lhs{0}, rhs{0};
};

inline VerifyReport compare_series(const Series& a, const Series& b) {
    VerifyReport r;
    r.verified_box = Cutoff::intersect(a.cutoff(), b.cutoff());
    Series diff = a - b;
    if (!diff.is_zero()) {
        r.pass = false;
        r.first_mismatch = diff.terms().begin()->first;
        r.lhs = a.coefficient(r.first_mismatch);
        r.rhs = b.coefficient(r.first_mismatch);
    }
    return r;
}

// N_{n,beta} from a synthetic genus-0 table: sum_{k|(beta,n)} n_0^{beta/k}/k^2.
inline Rational multiple_cover_from_bps(const BpsMap& bps, long n,
                                        const std::vector<int>& beta) {
    long g = std::abs(n);
    for (int b : beta) g = std::gcd(g, static_cast<long>(b));
    Rational total(0);
    for (long k = 1; k <= g; ++k) {
        if (g % k != 0) continue;
        auto it = bps.find({0, detail::beta_div(beta, k)});
        if (it == bps.end() || it->second == 0) continue;
        Rational term(it->second, k * k);
        term.canonicalize();
        total += term;
    }
    return total;
}

// Assembles the (N, L) tables the wall-crossing product consumes from a BPS
// table: N by the multiple cover formula, L by expanding the f_g sum.
inline CountingTable counting_from_bps(const BpsMap& bps, const Cutoff& box) {
    CountingTable table;
    std::vector<int> beta(box.beta_slots(), 0);
    bool more = true;
    while (more) {
        if (detail::beta_gcd(beta) > 0) {
            for (long n = 1; n <= box.q_max; ++n) {
                Rational N = multiple_cover_from_bps(bps, n, beta);
                if (N != 0) table.N[{n, beta}] = N;
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
    Series lseries = L_from_bps(bps, box);
    for (const auto& [m, c] : lseries.terms()) {
        Charge alpha;
        alpha.n = m.q;
        alpha.beta.assign(m.t.begin(), m.t.end());
        table.L[alpha] = c;
    }
    return table;
}

namespace detail {

inline Cutoff enlarged_q_window(const Cutoff& requested, int down, int up) {
    Cutoff c = requested;
    c.q_min = std::min(c.q_min, -down);
    c.q_max += up;
    return c;
}

inline int bps_gmax(const BpsMap& bps) {
    int g = 0;
    for (const auto& [key, n] : bps)
        if (n != 0) g = std::max(g, key.first);
    return g;
}

inline int t_budget(const Cutoff& box) {
    int b = 0;
    for (int tm : box.t_max) b += tm;
    return b;
}

} // namespace detail

// Wall-crossing equivalence: pt_wallcross_rhs(N from multiple cover,
// L from f_g expansion) against the BPS double product, coefficientwise.
inline VerifyReport verify_pt_bps(const BpsMap& bps, const Cutoff& requested) {
    const int gmax = detail::bps_gmax(bps);
    const int budget = detail::t_budget(requested);
    // Laurent factors reach q-exponents down to -(g-1) per unit of t-degree.
    const int depth = std::max(1, (gmax - 1)) * budget;
    Cutoff inner = detail::enlarged_q_window(requested, depth, depth);

    Series lhs = pt_wallcross_rhs(counting_from_bps(bps, inner), inner);
    Series rhs = bps_product(bps, inner);
    return compare_series(lhs.restricted(requested), rhs.restricted(requested));
}

// Behrend/reduced identity: -log(1+Z) against the direct stratification sum.
inline VerifyReport verify_behrend(const std::map<Charge, Rational>& P_table,
                                   const Cutoff& requested) {
    int nmax = 0, nmin = 0;
    for (const auto& [a, p] : P_table) {
        nmax = std::max(nmax, static_cast<int>(a.n));
        nmin = std::min(nmin, static_cast<int>(a.n));
    }
    const int budget = detail::t_budget(requested);
    Cutoff inner = detail::enlarged_q_window(requested, -nmin * budget + 1,
                                             nmax * budget + 1);

    Series z_chi = Series::zero(inner);
    for (const auto& [alpha, p] : P_table) {
        Monomial m;
        m.q = static_cast<int>(alpha.n);
        m.t.assign(alpha.beta.begin(), alpha.beta.end());
        z_chi.add_term(m, p);
    }
    Series lhs = behrend_to_reduced(z_chi);
    Series rhs = stratification_oracle(P_table, inner);
    return compare_series(lhs.restricted(requested), rhs.restricted(requested));
}

// Gerbe rescaling: coefficientwise r^{2g-1}, plus the partition-function
// route against exp(r * rescale(log Z)).
inline bool verify_gerbe_rescale(const Series& F, const std::vector<long>& rs,
                                 VerifyReport* report = nullptr) {
    for (long r : rs) {
        Series G = gerbe_rescale(F, r);
        for (const auto& [m, c] : F.terms()) {
            // u^{2g-2}: coefficient must pick up r^{2g-1}
            const long e = m.u + 1; // 2g-1
            if (G.coefficient(m) != c * pow_rational(Rational(r), e)) {
                if (report) {
                    report->pass = false;
                    report->first_mismatch = m;
                    report->lhs = G.coefficient(m);
                    report->rhs = c * pow_rational(Rational(r), e);
                }
                return false;
            }
        }
        // The exp/log route is only truncation-exact when u-exponents stay
        // nonnegative: a u^{-2} factor can pull clipped terms back into the
        // window. Genus-0 terms are still covered by the coefficient check.
        bool u_nonneg = true;
        for (const auto& [m, c] : F.terms()) u_nonneg = u_nonneg && m.u >= 0;
        if (u_nonneg) {
            Series Z = exp(F);
            Series direct = gerbe_partition_power(Z, r);
            Series viaLog =
                exp(gerbe_rescale(log1p(Z - Series::one(Z.cutoff())), r));
            VerifyReport cmp = compare_series(direct, viaLog);
            if (!cmp.pass) {
                if (report) *report = cmp;
                return false;
            }
        }
    }
    if (report) report->pass = true;
    return true;
}

// ---- randomized inputs ----------------------------------------------------

inline BpsMap random_bps_table(std::mt19937_64& rng, int g_max, int t_max,
                               std::size_t slots = 1) {
    std::uniform_int_distribution<long> val(-3, 3);
    BpsMap bps;
    std::vector<int> beta(slots, 0);
    bool more = true;
    while (more) {
        if (detail::beta_gcd(beta) > 0)
            for (int g = 0; g <= g_max; ++g) {
                long n = val(rng);
                if (n != 0) bps[{g, beta}] = n;
            }
        more = false;
        for (std::size_t i = 0; i < slots; ++i) {
            if (beta[i] < t_max) {
                ++beta[i];
                for (std::size_t j = 0; j < i; ++j) beta[j] = 0;
                more = true;
                break;
            }
        }
    }
    return bps;
}

inline std::map<Charge, Rational> random_charge_table(std::mt19937_64& rng,
                                                      int count, int t_max,
                                                      std::size_t slots = 1) {
    std::uniform_int_distribution<long> nd(-2, 3);
    std::uniform_int_distribution<int> td(1, std::max(1, t_max));
    std::uniform_int_distribution<long> num(-4, 4);
    std::uniform_int_distribution<long> den(1, 3);
    std::map<Charge, Rational> table;
    while (static_cast<int>(table.size()) < count) {
        Charge a;
        a.n = nd(rng);
        a.beta.assign(slots, 0);
        a.beta[0] = td(rng); // beta > 0 keeps all log expansions finite
        Rational c(num(rng), den(rng));
        c.canonicalize();
        if (c != 0) table[a] = c;
    }
    return table;
}

// Random rank-0 Mukai vector and rational stability data on the given
// lattice; omega is resampled until omega^2 > 0 and l.omega != 0.
inline bool verify_lemma46_random(std::mt19937_64& rng, int count,
                                  const NSLattice& L) {
    std::uniform_int_distribution<long> num(-6, 6);
    std::uniform_int_distribution<long> den(1, 4);
    auto rat = [&] {
        Rational r(num(rng), den(rng));
        r.canonicalize();
        return r;
    };
    for (int i = 0; i < count; ++i) {
        StabilityParam p;
        p.B.resize(L.rank);
        p.omega.resize(L.rank);
        for (auto& b : p.B) b = rat();
        MukaiVector v;
        v.rk = 0;
        v.l.resize(L.rank);
        do {
            for (auto& w : p.omega) w = rat();
        } while (L.dot(p.omega, p.omega) <= 0);
        do {
            for (auto& c : v.l) c = rat();
        } while (L.dot(v.l, p.omega) == 0);
        v.s = rat();
        p.k = abs(rat()) + Rational(1); // positive rational scale
        if (!lemma46_check(v, p, L)) return false;
    }
    return true;
}

// Random spherical (-2)-reflections: J(gv) = J(v).
inline bool verify_isometry_random(std::mt19937_64& rng, int count,
                                   const NSLattice& L, const HilbSeries& hilb) {
    // collect small (-2)-classes to reflect by
    std::vector<MukaiVector> deltas;
    SearchBox sb{-2, 2, -2, 2, -2, 2};
    std::vector<Rational> zero(L.rank, Rational(0));
    for (const auto& v : enumerate_bounded(L, zero, zero, Rational(1000), sb))
        if (pairing(v, v, L) == -2) deltas.push_back(v);
    if (deltas.empty()) return false;

    std::uniform_int_distribution<std::size_t> pick(0, deltas.size() - 1);
    std::uniform_int_distribution<long> comp(-2, 2);
    int done = 0;
    while (done < count) {
        Isometry g = spherical_reflection(deltas[pick(rng)], L);
        MukaiVector v;
        v.rk = Rational(comp(rng));
        v.l.resize(L.rank);
        for (auto& c : v.l) c = Rational(comp(rng));
        v.s = Rational(comp(rng));
        bool zero_v = v.rk == 0 && v.s == 0;
        for (const auto& c : v.l) zero_v = zero_v && c == 0;
        if (zero_v) continue;
        if (!isometry_invariance_check(g, v, L, hilb)) return false;
        ++done;
    }
    return true;
}

} // namespace k3bps

#endif
