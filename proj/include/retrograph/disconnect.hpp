#pragma once

// Disconnection rules: electron detachment E, ionic bond breaking I, covalent
// bond breaking C, and their inverses. Each is a partial injective
// endofunction on chemical graphs; applicability checks the literal domain
// (or, for the barred kinds, image) conditions and additionally that the
// constructed output is chemical, which the raw conditions do not guarantee
// when a minus vertex with an ionic partner loses its atom anchor.

#include <retrograph/chemgraph.hpp>

namespace retrograph {

enum class RuleKind : std::uint8_t { E, Ebar, I, Ibar, C, Cbar };

inline const char* to_string(RuleKind k) {
    switch (k) {
        case RuleKind::E: return "E";
        case RuleKind::Ebar: return "Ebar";
        case RuleKind::I: return "I";
        case RuleKind::Ibar: return "Ibar";
        case RuleKind::C: return "C";
        case RuleKind::Cbar: return "Cbar";
    }
    return "?";
}

inline bool is_barred(RuleKind k) {
    return k == RuleKind::Ebar || k == RuleKind::Ibar || k == RuleKind::Cbar;
}

inline bool needs_ab(RuleKind k) { return k != RuleKind::I && k != RuleKind::Ibar; }

struct DisconnectionRule {
    RuleKind kind = RuleKind::C;
    std::string u, v;
    std::string a, b;  // empty for I and Ibar

    static DisconnectionRule make(RuleKind k, std::string u, std::string v, std::string a = "",
                                  std::string b = "") {
        DisconnectionRule r{k, std::move(u), std::move(v), std::move(a), std::move(b)};
        if (r.u.empty() || r.v.empty()) fail("SchemaError", "rule needs vertex names u and v");
        if (needs_ab(k) == (r.a.empty() || r.b.empty()))
            fail("SchemaError", std::string("rule kind ") + to_string(k) +
                                    (needs_ab(k) ? " needs" : " does not take") + " names a and b");
        std::vector<std::string> names{r.u, r.v};
        if (!r.a.empty()) names.push_back(r.a);
        if (!r.b.empty()) names.push_back(r.b);
        std::sort(names.begin(), names.end());
        if (std::adjacent_find(names.begin(), names.end()) != names.end())
            fail("RepeatedElement", "rule vertex names must be pairwise distinct");
        return r;
    }

    std::string str() const {
        std::string s = to_string(kind);
        s += "{" + u + "," + v;
        if (!a.empty()) s += ";" + a + "," + b;
        return s + "}";
    }

    friend bool operator==(const DisconnectionRule&, const DisconnectionRule&) = default;
    friend auto operator<=>(const DisconnectionRule&, const DisconnectionRule&) = default;
};

inline DisconnectionRule inverse(const DisconnectionRule& r) {
    DisconnectionRule out = r;
    switch (r.kind) {
        case RuleKind::E: out.kind = RuleKind::Ebar; break;
        case RuleKind::Ebar: out.kind = RuleKind::E; break;
        case RuleKind::I: out.kind = RuleKind::Ibar; break;
        case RuleKind::Ibar: out.kind = RuleKind::I; break;
        case RuleKind::C: out.kind = RuleKind::Cbar; break;
        case RuleKind::Cbar: out.kind = RuleKind::C; break;
    }
    return out;
}

struct Applicability {
    bool ok = false;
    std::string reason;  // empty when ok
};

namespace detail {

// Builds the output graph assuming the structural side conditions hold.
inline PreChemGraph rule_output(const DisconnectionRule& r, const PreChemGraph& g) {
    PreChemGraph out = g;
    switch (r.kind) {
        case RuleKind::E:
            out.add_vertex(r.a, VertexLabel::plus());
            out.add_vertex(r.b, VertexLabel::minus());
            out.set_edge(r.u, r.v, EdgeLabel::cov(0));
            out.set_edge(r.u, r.a, EdgeLabel::cov(1));
            out.set_edge(r.v, r.b, EdgeLabel::cov(1));
            break;
        case RuleKind::Ebar:
            out.erase_vertex(r.a);
            out.erase_vertex(r.b);
            out.set_edge(r.u, r.v, EdgeLabel::cov(1));
            break;
        case RuleKind::I:
            out.set_edge(r.u, r.v, EdgeLabel::cov(0));
            break;
        case RuleKind::Ibar:
            out.set_edge(r.u, r.v, EdgeLabel::ionic());
            break;
        case RuleKind::C:
            out.add_vertex(r.a, VertexLabel::alpha());
            out.add_vertex(r.b, VertexLabel::alpha());
            out.set_edge(r.u, r.v, EdgeLabel::cov(g.edge(r.u, r.v).cov() - 1));
            out.set_edge(r.u, r.a, EdgeLabel::cov(1));
            out.set_edge(r.v, r.b, EdgeLabel::cov(1));
            break;
        case RuleKind::Cbar:
            out.erase_vertex(r.a);
            out.erase_vertex(r.b);
            out.set_edge(r.u, r.v, EdgeLabel::cov(g.edge(r.u, r.v).cov() + 1));
            break;
    }
    return out;
}

inline bool lone_stub(const PreChemGraph& g, const std::string& x, const std::string& anchor) {
    auto ns = g.neighbors(x);
    return ns.size() == 1 && ns.front().first == anchor && ns.front().second == EdgeLabel::cov(1);
}

}  // namespace detail

inline Applicability applicable(const DisconnectionRule& r, const PreChemGraph& g,
                                const ValenceTable& vt = ValenceTable::active()) {
    auto no = [](std::string why) { return Applicability{false, std::move(why)}; };
    for (const auto& n : {r.u, r.v})
        if (!g.has_vertex(n)) return no("u,v not in V: " + n);
    const auto& lu = g.label(r.u);
    const auto& lv = g.label(r.v);

    switch (r.kind) {
        case RuleKind::E:
            for (const auto& n : {r.a, r.b})
                if (g.has_vertex(n)) return no("a,b already in V: " + n);
            if (!lu.is_atom()) return no("tau(u) not an atom");
            if (!lv.is_alpha()) return no("tau(v) != alpha");
            if (g.edge(r.u, r.v) != EdgeLabel::cov(1)) return no("m(u,v) != 1");
            break;
        case RuleKind::I:
            if (lu.kind != VertexKind::Plus) return no("tau(u) != +");
            if (lv.kind != VertexKind::Minus) return no("tau(v) != -");
            if (!g.edge(r.u, r.v).is_ionic()) return no("m(u,v) != ib");
            break;
        case RuleKind::C:
            for (const auto& n : {r.a, r.b})
                if (g.has_vertex(n)) return no("a,b already in V: " + n);
            if (!(lu.is_atom() || lu.kind == VertexKind::Minus)) return no("tau(u) not in At+{-}");
            if (!(lv.is_atom() || lv.kind == VertexKind::Minus)) return no("tau(v) not in At+{-}");
            if (g.edge(r.u, r.v).cov() < 1) return no("m(u,v) not in {1,2,3,4}");
            break;
        case RuleKind::Ebar: {
            for (const auto& n : {r.a, r.b})
                if (!g.has_vertex(n)) return no("a,b not in V: " + n);
            if (!lu.is_atom()) return no("tau(u) not an atom");
            if (!lv.is_alpha()) return no("tau(v) != alpha");
            if (g.label(r.a).kind != VertexKind::Plus) return no("tau(a) != +");
            if (g.label(r.b).kind != VertexKind::Minus) return no("tau(b) != -");
            if (!g.edge(r.u, r.v).is_zero()) return no("m(u,v) != 0");
            if (!g.edge(r.a, r.b).is_zero()) return no("m(a,b) != 0");
            if (!detail::lone_stub(g, r.a, r.u)) return no("a is not a lone charge on u");
            if (!detail::lone_stub(g, r.b, r.v)) return no("b is not a lone charge on v");
            break;
        }
        case RuleKind::Ibar:
            if (lu.kind != VertexKind::Plus) return no("tau(u) != +");
            if (lv.kind != VertexKind::Minus) return no("tau(v) != -");
            if (!g.edge(r.u, r.v).is_zero()) return no("m(u,v) != 0");
            if (!g.ionic_partners(r.u).empty()) return no("u already ionically bonded");
            if (!g.ionic_partners(r.v).empty()) return no("v already ionically bonded");
            break;
        case RuleKind::Cbar: {
            for (const auto& n : {r.a, r.b})
                if (!g.has_vertex(n)) return no("a,b not in V: " + n);
            if (!(lu.is_atom() || lu.kind == VertexKind::Minus)) return no("tau(u) not in At+{-}");
            if (!(lv.is_atom() || lv.kind == VertexKind::Minus)) return no("tau(v) not in At+{-}");
            if (!g.label(r.a).is_alpha()) return no("tau(a) != alpha");
            if (!g.label(r.b).is_alpha()) return no("tau(b) != alpha");
            if (g.edge(r.u, r.v).is_ionic()) return no("m(u,v) is ionic");
            if (g.edge(r.u, r.v).cov() > 3) return no("m(u,v) already at order 4");
            if (!detail::lone_stub(g, r.a, r.u)) return no("a is not a lone stub on u");
            if (!detail::lone_stub(g, r.b, r.v)) return no("b is not a lone stub on v");
            break;
        }
    }
    auto vs = validate_chemical(detail::rule_output(r, g), vt);
    if (!vs.empty()) return no("output not chemical: " + vs.front().code + ": " + vs.front().detail);
    return {true, ""};
}

inline PreChemGraph apply_rule(const DisconnectionRule& r, const PreChemGraph& g,
                               const ValenceTable& vt = ValenceTable::active()) {
    auto res = applicable(r, g, vt);
    if (!res.ok) fail("NotApplicable", r.str() + ": " + res.reason);
    return detail::rule_output(r, g);
}

using DiscSequence = std::vector<DisconnectionRule>;

struct SequenceOutcome {
    std::optional<PreChemGraph> result;
    std::size_t failed_index = 0;  // meaningful when !result
    std::string reason;
};

inline SequenceOutcome apply_sequence_checked(const DiscSequence& seq, const PreChemGraph& g,
                                              const ValenceTable& vt = ValenceTable::active()) {
    PreChemGraph cur = g;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        auto res = applicable(seq[i], cur, vt);
        if (!res.ok) return {std::nullopt, i, seq[i].str() + ": " + res.reason};
        cur = detail::rule_output(seq[i], cur);
    }
    return {std::move(cur), 0, ""};
}

inline PreChemGraph apply_sequence(const DiscSequence& seq, const PreChemGraph& g,
                                   const ValenceTable& vt = ValenceTable::active()) {
    auto out = apply_sequence_checked(seq, g, vt);
    if (!out.result)
        fail("NotApplicableAtIndex", "index " + std::to_string(out.failed_index) + ": " + out.reason);
    return *std::move(out.result);
}

// Removes adjacent inverse pairs, using one-step commutations (swap two
// neighbouring rules when both orders are defined and agree) to expose more.
inline DiscSequence simplify_sequence(DiscSequence seq, const PreChemGraph& src,
                                      const ValenceTable& vt = ValenceTable::active()) {
    const PreChemGraph target = apply_sequence(seq, src, vt);  // also checks applicability

    auto cancels = [](const DisconnectionRule& x, const DisconnectionRule& y) {
        return y == inverse(x);
    };

    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
            if (cancels(seq[i], seq[i + 1])) {
                seq.erase(seq.begin() + static_cast<std::ptrdiff_t>(i), seq.begin() + static_cast<std::ptrdiff_t>(i) + 2);
                changed = true;
                break;
            }
        }
        if (changed) continue;

        // prefix graphs for swap checks
        std::vector<PreChemGraph> at{src};
        for (const auto& r : seq) at.push_back(detail::rule_output(r, at.back()));
        for (std::size_t i = 0; i + 1 < seq.size() && !changed; ++i) {
            bool exposes = (i > 0 && cancels(seq[i - 1], seq[i + 1])) ||
                           (i + 2 < seq.size() && cancels(seq[i], seq[i + 2]));
            if (!exposes) continue;
            if (!applicable(seq[i + 1], at[i], vt).ok) continue;
            PreChemGraph swapped = detail::rule_output(seq[i + 1], at[i]);
            if (!applicable(seq[i], swapped, vt).ok) continue;
            if (detail::rule_output(seq[i], swapped) != at[i + 2]) continue;
            std::swap(seq[i], seq[i + 1]);
            changed = true;
        }
    }
    if (apply_sequence(seq, src, vt) != target)
        fail("InvariantViolation", "sequence simplification changed the result");
    return seq;
}

// All rule instances of the given kinds applicable to g, sorted by
// (kind, u, v, a, b). Fresh a/b names for E and C instances are allocated
// deterministically above g's name space; every instance in one enumeration
// shares them, since instances are alternatives rather than a sequence.
inline std::vector<DisconnectionRule> enumerate_rule_instances(
    const PreChemGraph& g, const std::vector<RuleKind>& kinds,
    const ValenceTable& vt = ValenceTable::active()) {
    NameSupply supply = NameSupply::above(g);
    const std::string fa = supply.fresh(), fb = supply.fresh();
    std::vector<DisconnectionRule> out;
    auto names = g.vertex_names();
    auto consider = [&](DisconnectionRule r) {
        if (applicable(r, g, vt).ok) out.push_back(std::move(r));
    };
    for (RuleKind k : kinds) {
        switch (k) {
            case RuleKind::E:
                for (const auto& u : names)
                    for (const auto& v : names)
                        if (u != v && g.label(u).is_atom() && g.label(v).is_alpha() &&
                            g.edge(u, v) == EdgeLabel::cov(1))
                            consider(DisconnectionRule::make(k, u, v, fa, fb));
                break;
            case RuleKind::I:
            case RuleKind::Ibar:
                for (const auto& u : names)
                    for (const auto& v : names)
                        if (u != v && g.label(u).kind == VertexKind::Plus &&
                            g.label(v).kind == VertexKind::Minus)
                            consider(DisconnectionRule::make(k, u, v));
                break;
            case RuleKind::C:
                for (const auto& u : names)
                    for (const auto& v : names)
                        if (u != v && g.edge(u, v).cov() >= 1)
                            consider(DisconnectionRule::make(k, u, v, fa, fb));
                break;
            case RuleKind::Ebar:
                for (const auto& u : names) {
                    if (!g.label(u).is_atom()) continue;
                    for (const auto& [a, la] : g.neighbors(u)) {
                        if (g.label(a).kind != VertexKind::Plus) continue;
                        for (const auto& v : names) {
                            if (!g.label(v).is_alpha()) continue;
                            for (const auto& [b, lb] : g.neighbors(v))
                                if (g.label(b).kind == VertexKind::Minus)
                                    consider(DisconnectionRule::make(k, u, v, a, b));
                        }
                    }
                }
                break;
            case RuleKind::Cbar:
                for (const auto& u : names)
                    for (const auto& [a, la] : g.neighbors(u)) {
                        if (!g.label(a).is_alpha()) continue;
                        for (const auto& v : names) {
                            if (v == u) continue;
                            for (const auto& [b, lb] : g.neighbors(v))
                                if (b != a && g.label(b).is_alpha())
                                    consider(DisconnectionRule::make(k, u, v, a, b));
                        }
                    }
                break;
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace retrograph
