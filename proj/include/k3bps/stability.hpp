#ifndef K3BPS_STABILITY_HPP
#define K3BPS_STABILITY_HPP

#include <algorithm>
#include <vector>

#include "errors.hpp"
#include "mukai.hpp"
#include "rational.hpp"

namespace k3bps {

// Exact complex value; both parts are rational for all in-scope inputs.
struct ExactComplex {
    Rational re, im;

    ExactComplex() : re(0), im(0) {}
    ExactComplex(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    friend bool operator==(const ExactComplex&, const ExactComplex&) = default;
};

// Parameters of the central charge Z_phi for phi = B + i k omega, plus the
// theta of the weak stability pair.
struct StabilityParam {
    std::vector<Rational> B;
    std::vector<Rational> omega;
    Rational k{1};
    Rational theta{1, 2};

    void validate(const NSLattice& L) const {
        if (L.dot(omega, omega) <= 0)
            throw DegenerateClass("StabilityParam: omega^2 must be positive");
        if (k <= 0)
            throw DegenerateClass("StabilityParam: k must be positive");
    }
};

// Z_phi(E) for v_G(E) = (rk, l, s), with omega scaled by k:
//   rk > 0: (1/2rk)((l^2 - 2 rk s) + rk^2 w^2 - (l - rk B)^2) + (w.l - rk(w.B)) i
//   rk = 0: (-s + l.B) + (l.w) i
inline ExactComplex central_charge(const MukaiVector& v, const StabilityParam& p,
                                   const NSLattice& L) {
    p.validate(L);
    std::vector<Rational> w(p.omega.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = p.k * p.omega[i];

    if (v.rk == 0) {
        return {-v.s + L.dot(v.l, p.B), L.dot(v.l, w)};
    }
    std::vector<Rational> lmb(v.l.size());
    for (std::size_t i = 0; i < lmb.size(); ++i) lmb[i] = v.l[i] - v.rk * p.B[i];
    Rational re = L.dot(v.l, v.l) - 2 * v.rk * v.s + v.rk * v.rk * L.dot(w, w) -
                  L.dot(lmb, lmb);
    re /= 2 * v.rk;
    Rational im = L.dot(w, v.l) - v.rk * L.dot(w, p.B);
    return {re, im};
}

// Weak stability charge on the filtration pieces:
//   Z_0(n, beta) = n - (omega.beta) i,
//   Z_1(rk) = rk * e^{pi i theta}, kept as the exact (magnitude, phase) pair.
struct WeakCharge {
    bool polar = false;       // false: (re, im) exact; true: (magnitude, phase)
    ExactComplex value;       // when !polar
    Rational magnitude{0};    // when polar
    Rational phase{0};        // multiples of pi, in (0,1)
};

inline WeakCharge weak_charge(long n, const std::vector<Rational>& beta, long rk,
                              const StabilityParam& p, const NSLattice& L) {
    const bool nb_zero =
        n == 0 && std::all_of(beta.begin(), beta.end(),
                              [](const Rational& b) { return b == 0; });
    if (rk == 0) {
        return {false, {Rational(n), -L.dot(p.omega, beta)}, Rational(0), Rational(0)};
    }
    if (nb_zero) {
        WeakCharge c;
        c.polar = true;
        c.magnitude = Rational(rk);
        c.phase = p.theta;
        return c;
    }
    throw MixedClass("weak_charge: class is pure in neither filtration piece");
}

// Slope mu = (c1.omega)/rk with the gerbe integration factor 1/r.
inline Rational slope(const Rational& rk, const std::vector<Rational>& c1,
                      const std::vector<Rational>& omega, long gerbe_r,
                      const NSLattice& L) {
    if (rk <= 0) throw ZeroRank("slope: rank must be positive");
    Rational num = L.dot(c1, omega) / gerbe_r;
    return num / rk;
}

// Polynomial in n, lowest degree first.
using Polynomial = std::vector<Rational>;

// Reduced twisted Hilbert polynomial, including the gerbe prefactor r:
//   rk > 0: r [ n^2 + 2 w(l - rk b)/(rk w^2) n - (l^2 - 2 rk s - (l - rk b)^2)/(rk w^2) ]
//   rk = 0: r [ n + (s - b.l)/(l.w) ]
inline Polynomial reduced_hilbert(const MukaiVector& v,
                                  const std::vector<Rational>& beta_twist,
                                  const std::vector<Rational>& omega, long gerbe_r,
                                  const NSLattice& L) {
    const Rational R(gerbe_r);
    if (v.rk > 0) {
        std::vector<Rational> lmb(v.l.size());
        for (std::size_t i = 0; i < lmb.size(); ++i)
            lmb[i] = v.l[i] - v.rk * beta_twist[i];
        const Rational ww = v.rk * L.dot(omega, omega);
        Rational c1 = 2 * L.dot(omega, lmb) / ww;
        Rational c0 = -(L.dot(v.l, v.l) - 2 * v.rk * v.s - L.dot(lmb, lmb)) / ww;
        return {R * c0, R * c1, R};
    }
    if (v.rk == 0) {
        const Rational lw = L.dot(v.l, omega);
        if (lw == 0)
            throw DegenerateClass("reduced_hilbert: rank 0 with l.omega = 0");
        Rational c0 = (v.s - L.dot(beta_twist, v.l)) / lw;
        return {R * c0, R};
    }
    throw DegenerateClass("reduced_hilbert: negative rank");
}

// Lemma-style identity for rank-0 classes: the normalized linear reduced
// Hilbert polynomial equals n - Re Z_phi / Im Z_phi, exactly. The B-field of
// the stability parameter plays the role of the twist divisor.
inline bool lemma46_check(const MukaiVector& v, const StabilityParam& p,
                          const NSLattice& L) {
    if (v.rk != 0)
        throw DegenerateClass("lemma46_check: rank must be 0");
    Polynomial h = reduced_hilbert(v, p.B, p.omega, 1, L);
    // normalize (leading coefficient is the gerbe factor r = 1 here)
    Rational c0 = h[0] / h[1];
    // Z_phi with omega scaled by k affects Im only; the Hilbert side must use
    // the same scaled omega, so scale c0 consistently.
    StabilityParam pk = p;
    ExactComplex z = central_charge(v, pk, L);
    if (z.im == 0)
        throw DegenerateClass("lemma46_check: l.omega = 0");
    // reduced_hilbert used unscaled omega; rescale its constant term by 1/k
    Rational lhs_c0 = c0 / p.k;
    return lhs_c0 == -z.re / z.im;
}

// Geometric Hilbert polynomial of a 1-dimensional class: r (beta_deg m + n_const).
inline Polynomial geometric_hilbert_1dim(const Rational& beta_deg,
                                         const Rational& n_const, long gerbe_r) {
    return {Rational(gerbe_r) * n_const, Rational(gerbe_r) * beta_deg};
}

struct PhaseSample {
    Rational k;
    Rational re, im;
};

// Exact Re/Im of Z_{phi_k} along a list of k samples; the caller asserts the
// trend (rk > 0: Re ~ k^2; rk = 0: Re constant, Im ~ k).
inline std::vector<PhaseSample> phase_trend(const MukaiVector& v,
                                            const StabilityParam& p,
                                            const std::vector<Rational>& k_samples,
                                            const NSLattice& L) {
    std::vector<PhaseSample> out;
    out.reserve(k_samples.size());
    for (const auto& k : k_samples) {
        StabilityParam pk = p;
        pk.k = k;
        ExactComplex z = central_charge(v, pk, L);
        out.push_back({k, z.re, z.im});
    }
    return out;
}

} // namespace k3bps

#endif
