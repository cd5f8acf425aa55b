#ifndef K3BPS_MUKAI_HPP
#define K3BPS_MUKAI_HPP

#include <cstdlib>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace k3bps {

// Rank-rho integral Neron-Severi lattice, given by its symmetric Gram matrix.
struct NSLattice {
    int rank = 1;
    std::vector<std::vector<long>> gram;

    NSLattice() : gram{{0}} {}
    NSLattice(int r, std::vector<std::vector<long>> g)
        : rank(r), gram(std::move(g)) {
        if (static_cast<int>(gram.size()) != rank)
            throw DimensionMismatch("gram matrix size differs from rank");
        for (const auto& row : gram)
            if (static_cast<int>(row.size()) != rank)
                throw DimensionMismatch("gram matrix is not square");
        for (int i = 0; i < rank; ++i)
            for (int j = 0; j < rank; ++j)
                if (gram[i][j] != gram[j][i])
                    throw DimensionMismatch("gram matrix is not symmetric");
    }

    bool is_even() const {
        for (int i = 0; i < rank; ++i)
            if (gram[i][i] % 2 != 0) return false;
        return true;
    }

    Rational dot(const std::vector<Rational>& a,
                 const std::vector<Rational>& b) const {
        if (static_cast<int>(a.size()) != rank ||
            static_cast<int>(b.size()) != rank)
            throw DimensionMismatch("vector dimension differs from lattice rank");
        Rational acc(0);
        for (int i = 0; i < rank; ++i)
            for (int j = 0; j < rank; ++j) acc += a[i] * Rational(gram[i][j]) * b[j];
        return acc;
    }
};

// Mukai vector (rk, l, s) with l in NS tensor Q. Twisted vectors are
// genuinely rational, so integrality is a predicate, not an invariant.
struct MukaiVector {
    Rational rk;
    std::vector<Rational> l;
    Rational s;

    MukaiVector() : rk(0), s(0) {}
    MukaiVector(Rational r, std::vector<Rational> lv, Rational sv)
        : rk(std::move(r)), l(std::move(lv)), s(std::move(sv)) {}

    bool is_integral() const {
        if (!is_integer(rk) || !is_integer(s)) return false;
        for (const auto& c : l)
            if (!is_integer(c)) return false;
        return true;
    }

    friend bool operator==(const MukaiVector&, const MukaiVector&) = default;
};

// Mukai pairing <(r,l,s),(r',l',s')> = l.l' - r s' - r' s.
inline Rational pairing(const MukaiVector& v, const MukaiVector& w,
                        const NSLattice& L) {
    return L.dot(v.l, w.l) - v.rk * w.s - w.rk * v.s;
}

// Multiplication by e^D: (rk, l + rk D, s + D.l + rk D.D/2). Preserves the
// Mukai pairing and gives a group action e^{D1} e^{D2} = e^{D1+D2}.
inline MukaiVector divisor_twist(const MukaiVector& v,
                                 const std::vector<Rational>& D,
                                 const NSLattice& L) {
    if (static_cast<int>(D.size()) != L.rank ||
        static_cast<int>(v.l.size()) != L.rank)
        throw DimensionMismatch("divisor_twist: dimension mismatch");
    MukaiVector r = v;
    for (int i = 0; i < L.rank; ++i) r.l[i] += v.rk * D[i];
    r.s += L.dot(D, v.l) + v.rk * L.dot(D, D) / 2;
    return r;
}

struct IntegralityResult {
    bool integral = false;
    std::vector<Integer> residue; // l mod r of the twisted vector (gerby weight)
};

// True iff e^{xi/r} * v is integral; also reports l mod r.
inline IntegralityResult integrality_check(const MukaiVector& v,
                                           const std::vector<long>& xi, long r,
                                           const NSLattice& L) {
    std::vector<Rational> D(xi.size());
    for (std::size_t i = 0; i < xi.size(); ++i) {
        D[i] = Rational(xi[i], r);
        D[i].canonicalize();
    }
    MukaiVector w = divisor_twist(v, D, L);
    IntegralityResult res;
    res.integral = w.is_integral();
    if (res.integral) {
        res.residue.reserve(w.l.size());
        for (const auto& c : w.l) {
            Integer m = c.get_num() % r;
            if (m < 0) m += r;
            res.residue.push_back(m);
        }
    }
    return res;
}

// Unique square root of a unit class in the ring where
// (1,a,b)*(1,a',b') = (1, a+a', b+b'+a.a').
inline MukaiVector sqrt_unit_class(const MukaiVector& c, const NSLattice& L) {
    if (c.rk != 1) throw NonUnitClass("sqrt_unit_class: rank must be 1");
    MukaiVector w;
    w.rk = 1;
    w.l.resize(c.l.size());
    for (std::size_t i = 0; i < c.l.size(); ++i) w.l[i] = c.l[i] / 2;
    w.s = c.s / 2 - L.dot(c.l, c.l) / 8;
    return w;
}

inline MukaiVector mul_unit_class(const MukaiVector& a, const MukaiVector& b,
                                  const NSLattice& L) {
    if (a.rk != 1 || b.rk != 1)
        throw NonUnitClass("mul_unit_class: both ranks must be 1");
    MukaiVector r;
    r.rk = 1;
    r.l.resize(a.l.size());
    for (std::size_t i = 0; i < a.l.size(); ++i) r.l[i] = a.l[i] + b.l[i];
    r.s = a.s + b.s + L.dot(a.l, b.l);
    return r;
}

// Integer matrix acting on (rk, l, s) coordinates that preserves the Mukai
// pairing.
struct Isometry {
    std::vector<std::vector<long>> matrix; // (rho+2) x (rho+2)

    // g^T Q g = Q for Q the Gram matrix of the Mukai pairing in
    // (rk, l_1..l_rho, s) coordinates.
    bool is_isometry(const NSLattice& L) const {
        const int n = L.rank + 2;
        if (static_cast<int>(matrix.size()) != n) return false;
        for (const auto& row : matrix)
            if (static_cast<int>(row.size()) != n) return false;

        std::vector<std::vector<long>> Q(n, std::vector<long>(n, 0));
        Q[0][n - 1] = -1;
        Q[n - 1][0] = -1;
        for (int i = 0; i < L.rank; ++i)
            for (int j = 0; j < L.rank; ++j) Q[1 + i][1 + j] = L.gram[i][j];

        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Integer acc = 0;
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b)
                        acc += Integer(matrix[a][i]) * Q[a][b] * matrix[b][j];
                if (acc != Q[i][j]) return false;
            }
        return true;
    }
};

inline MukaiVector apply_isometry(const Isometry& g, const MukaiVector& v,
                                  const NSLattice& L) {
    if (!g.is_isometry(L))
        throw NotAnIsometry("matrix does not preserve the Mukai pairing");
    const int n = L.rank + 2;
    std::vector<Rational> x(n), y(n, Rational(0));
    x[0] = v.rk;
    for (int i = 0; i < L.rank; ++i) x[1 + i] = v.l[i];
    x[n - 1] = v.s;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) y[i] += Rational(g.matrix[i][j]) * x[j];
    MukaiVector r;
    r.rk = y[0];
    r.l.assign(y.begin() + 1, y.begin() + 1 + L.rank);
    r.s = y[n - 1];
    return r;
}

// Spherical reflection s_delta(x) = x + <x,delta> delta for <delta,delta> = -2,
// assembled as an explicit integer matrix. Handy isometry generator for tests.
inline Isometry spherical_reflection(const MukaiVector& delta, const NSLattice& L) {
    if (!delta.is_integral() || pairing(delta, delta, L) != -2)
        throw NotAnIsometry("spherical reflection needs an integral (-2)-class");
    const int n = L.rank + 2;
    Isometry g;
    g.matrix.assign(n, std::vector<long>(n, 0));
    // <e_j, delta> in (rk,l,s) coordinates: e_0 -> -s_delta, e_{1+i} -> (Gl)_i,
    // e_{n-1} -> -rk_delta.
    std::vector<Integer> pair_with(n);
    pair_with[0] = -delta.s.get_num();
    for (int i = 0; i < L.rank; ++i) {
        Integer acc = 0;
        for (int j = 0; j < L.rank; ++j)
            acc += Integer(L.gram[i][j]) * delta.l[j].get_num();
        pair_with[1 + i] = acc;
    }
    pair_with[n - 1] = -delta.rk.get_num();

    std::vector<Integer> d(n);
    d[0] = delta.rk.get_num();
    for (int i = 0; i < L.rank; ++i) d[1 + i] = delta.l[i].get_num();
    d[n - 1] = delta.s.get_num();

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Integer e = (i == j) ? 1 : 0;
            e += pair_with[j] * d[i];
            g.matrix[i][j] = static_cast<long>(e.get_si());
        }
    return g;
}

// k | v componentwise, for integral v.
inline bool divides(long k, const MukaiVector& v) {
    if (!v.is_integral())
        throw NonIntegralVector("divides: vector must be integral");
    if (k <= 0) return false;
    if (v.rk.get_num() % k != 0) return false;
    if (v.s.get_num() % k != 0) return false;
    for (const auto& c : v.l)
        if (c.get_num() % k != 0) return false;
    return true;
}

inline MukaiVector scale(const MukaiVector& v, const Rational& c) {
    MukaiVector r = v;
    r.rk *= c;
    r.s *= c;
    for (auto& x : r.l) x *= c;
    return r;
}

struct SearchBox {
    long rk_min = 0, rk_max = 0;
    long l_min = 0, l_max = 0; // applied to every l-coordinate
    long s_min = 0, s_max = 0;
};

// All integral vectors v in the box with <v,v> >= -2 and
// |<exp(B+i omega), v>| <= m, comparing squared moduli exactly.
// exp(B+i omega) = (1, B, (B^2 - omega^2)/2) + i (0, omega, B.omega).
inline std::vector<MukaiVector> enumerate_bounded(
    const NSLattice& L, const std::vector<Rational>& B,
    const std::vector<Rational>& omega, const Rational& m,
    const SearchBox& box) {
    const Rational BB = L.dot(B, B), WW = L.dot(omega, omega), BW = L.dot(B, omega);
    const Rational m2 = m * m;

    std::vector<MukaiVector> found;
    std::vector<long> lcoord(L.rank, box.l_min);
    for (long rk = box.rk_min; rk <= box.rk_max; ++rk) {
        std::fill(lcoord.begin(), lcoord.end(), box.l_min);
        bool more = true;
        while (more) {
            std::vector<Rational> l(L.rank);
            for (int i = 0; i < L.rank; ++i) l[i] = Rational(lcoord[i]);
            const Rational lB = L.dot(l, B), lW = L.dot(l, omega),
                           ll = L.dot(l, l);
            for (long s = box.s_min; s <= box.s_max; ++s) {
                MukaiVector v(Rational(rk), l, Rational(s));
                if (ll - 2 * v.rk * v.s < -2) continue;
                Rational re = lB - v.s - v.rk * (BB - WW) / 2;
                Rational im = lW - v.rk * BW;
                if (re * re + im * im > m2) continue;
                found.push_back(std::move(v));
            }
            // odometer over the l-coordinates
            more = false;
            for (int i = 0; i < L.rank; ++i) {
                if (lcoord[i] < box.l_max) {
                    ++lcoord[i];
                    for (int j = 0; j < i; ++j) lcoord[j] = box.l_min;
                    more = true;
                    break;
                }
            }
        }
    }
    return found;
}

} // namespace k3bps

#endif
