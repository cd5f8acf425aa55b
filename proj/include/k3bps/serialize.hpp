#ifndef K3BPS_SERIALIZE_HPP
#define K3BPS_SERIALIZE_HPP

#include <json.hpp>

#include "invariants.hpp"
#include "mukai.hpp"
#include "series.hpp"
#include "stability.hpp"
#include "verify.hpp"
#include "wallcross.hpp"

// JSON interchange formats. Rationals travel as decimal strings "p" / "p/q".

namespace k3bps {

using nlohmann::json;

inline json to_json(const Cutoff& c) {
    return json{{"q_min", c.q_min},   {"q_max", c.q_max},
                {"t_max", c.t_max},   {"u_min", c.u_min},
                {"u_max", c.u_max},   {"y2_min", c.y2_min},
                {"y2_max", c.y2_max}};
}

inline Cutoff cutoff_from_json(const json& j) {
    Cutoff c;
    c.q_min = j.value("q_min", 0);
    c.q_max = j.value("q_max", 0);
    c.u_min = j.value("u_min", 0);
    c.u_max = j.value("u_max", 0);
    c.y2_min = j.value("y2_min", 0);
    c.y2_max = j.value("y2_max", 0);
    if (j.contains("t_max")) c.t_max = j["t_max"].get<std::vector<int>>();
    return c;
}

inline json to_json(const Monomial& m) {
    return json{{"q", m.q}, {"t", m.t}, {"u", m.u}, {"y2", m.y2}};
}

inline json to_json(const Series& s) {
    json terms = json::array();
    for (const auto& [m, c] : s.terms()) {
        json jt = to_json(m);
        jt["c"] = to_string(c);
        terms.push_back(std::move(jt));
    }
    return json{{"cutoff", to_json(s.cutoff())}, {"terms", std::move(terms)}};
}

inline Series series_from_json(const json& j) {
    Series s(cutoff_from_json(j.at("cutoff")));
    for (const auto& jt : j.at("terms")) {
        Monomial m;
        m.q = jt.value("q", 0);
        m.u = jt.value("u", 0);
        m.y2 = jt.value("y2", 0);
        if (jt.contains("t")) m.t = jt["t"].get<std::vector<int>>();
        m.t.resize(s.cutoff().beta_slots(), 0);
        s.add_term(m, parse_rational(jt.at("c").get<std::string>()));
    }
    return s;
}

inline json to_json(const NSLattice& L) {
    return json{{"rank", L.rank}, {"gram", L.gram}};
}

inline NSLattice lattice_from_json(const json& j) {
    return NSLattice(j.at("rank").get<int>(),
                     j.at("gram").get<std::vector<std::vector<long>>>());
}

inline json to_json(const MukaiVector& v) {
    json l = json::array();
    for (const auto& c : v.l) l.push_back(to_string(c));
    return json{{"rk", to_string(v.rk)}, {"l", std::move(l)}, {"s", to_string(v.s)}};
}

inline MukaiVector mukai_from_json(const json& j) {
    MukaiVector v;
    v.rk = parse_rational(j.at("rk").get<std::string>());
    v.s = parse_rational(j.at("s").get<std::string>());
    for (const auto& c : j.at("l")) v.l.push_back(parse_rational(c.get<std::string>()));
    return v;
}

inline json to_json(const Isometry& g) { return json{{"matrix", g.matrix}}; }

inline Isometry isometry_from_json(const json& j) {
    return Isometry{j.at("matrix").get<std::vector<std::vector<long>>>()};
}

inline json to_json(const HilbSeries& h) {
    json a = json::array();
    for (const auto& c : h.coefficients) a.push_back(c.get_str());
    return a;
}

inline json to_json(const BPSTable& t) {
    json rows = json::array();
    for (int g = 0; g <= t.g_max; ++g) {
        json row = json::array();
        for (int h = 0; h <= t.h_max; ++h) row.push_back(t.at(g, h).get_str());
        rows.push_back(std::move(row));
    }
    return json{{"g_max", t.g_max}, {"h_max", t.h_max}, {"n_gh", std::move(rows)}};
}

inline json to_json(const CountingTable& t) {
    auto dump = [](const std::map<Charge, Rational>& m) {
        json a = json::array();
        for (const auto& [alpha, c] : m)
            a.push_back(json{{"n", alpha.n}, {"beta", alpha.beta}, {"c", to_string(c)}});
        return a;
    };
    return json{{"N", dump(t.N)}, {"L", dump(t.L)}};
}

inline CountingTable counting_table_from_json(const json& j) {
    CountingTable t;
    auto load = [](const json& a, std::map<Charge, Rational>& m) {
        for (const auto& e : a) {
            Charge alpha;
            alpha.n = e.at("n").get<long>();
            alpha.beta = e.at("beta").get<std::vector<int>>();
            m[alpha] = parse_rational(e.at("c").get<std::string>());
        }
    };
    if (j.contains("N")) load(j["N"], t.N);
    if (j.contains("L")) load(j["L"], t.L);
    return t;
}

inline json to_json(const Polynomial& p) {
    json a = json::array();
    for (const auto& c : p) a.push_back(to_string(c));
    return a;
}

// Identity-check report: the verified box plus the first mismatching monomial
// (null on pass) with both exact coefficients.
inline json to_json(const VerifyReport& r) {
    json j{{"pass", r.pass}, {"verified_box", to_json(r.verified_box)}};
    if (r.pass) {
        j["first_mismatch"] = nullptr;
    } else {
        j["first_mismatch"] = to_json(r.first_mismatch);
        j["lhs"] = to_string(r.lhs);
        j["rhs"] = to_string(r.rhs);
    }
    return j;
}

} // namespace k3bps

#endif
