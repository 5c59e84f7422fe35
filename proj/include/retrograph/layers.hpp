#pragma once

// Environment-parameterised layers on top of matchings, disconnection rule
// sequences and reactions, plus the two translations between them. A fixed
// finite set of molecular entities M acts as a free resource: a morphism may
// consume any number of disjoint copies of the entries, and composition adds
// the consumption counts.

#include <retrograph/disconnect.hpp>
#include <retrograph/rewrite.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace retrograph {

// ------------------------------------------------------------- environments

struct Environment {
    std::vector<PreChemGraph> entries;  // pairwise non-isomorphic molecular entities
};

inline std::vector<Violation> validate_environment(const Environment& env,
                                                   const ValenceTable& vt = ValenceTable::active()) {
    std::vector<Violation> out;
    for (std::size_t i = 0; i < env.entries.size(); ++i) {
        const auto& g = env.entries[i];
        std::string who = "entry " + std::to_string(i + 1);
        if (classify(g) != GraphClass::MolecularEntity || !is_chemical(g, vt))
            out.push_back({"NotMolecular", who + " is not a molecular entity"});
        for (std::size_t j = 0; j < i; ++j)
            if (is_isomorphic(env.entries[j], g))
                out.push_back({"RepeatedElement",
                               who + " repeats entry " + std::to_string(j + 1)});
    }
    return out;
}

// Copies adjoined for a morphism out of src are numbered past any copies src
// already holds, so evaluation results can feed further morphisms.
inline AssemblyResult env_assemble_above(const Environment& env, const std::vector<int>& counts,
                                         const PreChemGraph& src) {
    if (counts.size() != env.entries.size())
        fail("SchemaError", "counts arity differs from the environment");
    std::vector<std::pair<int, PreChemGraph>> zip;
    zip.reserve(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) zip.emplace_back(counts[i], env.entries[i]);
    std::vector<int> first = copy_floors(src, counts.size());
    for (int& f : first) ++f;
    return assemble(zip, first);
}

inline AssemblyResult env_assemble(const Environment& env, const std::vector<int>& counts) {
    return env_assemble_above(env, counts, PreChemGraph{});
}

// Core graph extended by already-assembled copies; names must not collide.
inline PreChemGraph adjoin_copies(const PreChemGraph& core, const AssemblyResult& asmres) {
    PreChemGraph full = core;
    for (const auto& [v, l] : asmres.graph.vertices) {
        if (full.has_vertex(v))
            fail("RepeatedElement", "copy name collides with the core: " + v);
        full.add_vertex(v, l);
    }
    for (const auto& [p, l] : asmres.graph.edges) full.edges[p] = l;
    return full;
}

inline std::vector<int> add_counts(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) fail("SchemaError", "counts arities differ");
    std::vector<int> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

inline bool same_oriented(const OrientedGraph& x, const OrientedGraph& y) {
    return x.graph == y.graph && x.p == y.p && x.t == y.t;
}

// ------------------------------------------------------------------- M-Match

// A matching m : A -> B together with a labelled injection b of counted
// environment copies into B. Together they cover B, overlapping exactly on
// the non-alpha images of A's alpha vertices.
struct MMatchMorphism {
    OrientedGraph source, target;
    VertexMap m;
    std::vector<int> counts;
    VertexMap b;  // copy vertex names -> target vertices
};

inline std::vector<Violation> validate_mmatch(const Environment& env, const MMatchMorphism& f,
                                              const ValenceTable& vt = ValenceTable::active()) {
    std::vector<Violation> out = validate_environment(env, vt);
    if (!out.empty()) return out;
    if (f.counts.size() != env.entries.size())
        return {{"SchemaError", "counts arity differs from the environment"}};
    for (int n : f.counts)
        if (n < 0) return {{"SchemaError", "negative multiplicity"}};
    AssemblyResult asmres = env_assemble_above(env, f.counts, f.source.graph);
    for (const auto& [v, l] : asmres.graph.vertices) {
        (void)l;
        if (f.source.graph.has_vertex(v))
            return {{"RepeatedElement", "copy name collides with the source: " + v}};
    }

    auto mv = check_matching(f.m, f.source, f.target);
    if (!mv.ok) out.push_back({"NotAMatching", mv.reason});

    const PreChemGraph& tg = f.target.graph;
    bool b_ok = f.b.size() == asmres.graph.vertices.size();
    std::set<std::string> im_b;
    for (const auto& [x, y] : f.b) {
        if (!b_ok) break;
        b_ok = asmres.graph.has_vertex(x) && tg.has_vertex(y) && im_b.insert(y).second &&
               asmres.graph.label(x) == tg.label(y);
    }
    if (!b_ok) {
        out.push_back({"BadInjection", "copy map is not a labelled injection into the target"});
        return out;
    }
    if (!mv.ok) return out;

    std::set<std::string> im_m;
    for (const auto& [x, y] : f.m) {
        (void)x;
        im_m.insert(y);
    }
    std::set<std::string> covered = im_m;
    covered.insert(im_b.begin(), im_b.end());
    if (covered.size() != tg.vertices.size())
        out.push_back({"BadCover", "images of m and b do not cover the target"});

    std::set<std::string> overlap;
    std::set_intersection(im_m.begin(), im_m.end(), im_b.begin(), im_b.end(),
                          std::inserter(overlap, overlap.begin()));
    std::set<std::string> folded;  // non-alpha images of A's alpha vertices
    for (const auto& s : f.source.graph.alpha_set())
        if (!tg.label(f.m.at(s)).is_alpha()) folded.insert(f.m.at(s));
    if (overlap != folded)
        out.push_back({"BadOverlap", "m and b overlap away from the folded stubs"});
    return out;
}

inline MMatchMorphism mmatch_identity(const Environment& env, const OrientedGraph& a) {
    MMatchMorphism f{a, a, {}, std::vector<int>(env.entries.size(), 0), {}};
    for (const auto& [v, l] : a.graph.vertices) {
        (void)l;
        f.m[v] = v;
    }
    return f;
}

inline MMatchMorphism mmatch_compose(const Environment& env, const MMatchMorphism& f,
                                     const MMatchMorphism& g,
                                     const ValenceTable& vt = ValenceTable::active()) {
    for (const auto* h : {&f, &g}) {
        auto vs = validate_mmatch(env, *h, vt);
        if (!vs.empty()) fail(vs.front().code.c_str(), vs.front().detail);
    }
    if (!same_oriented(f.target, g.source))
        fail("BoundaryMismatch", "the second factor does not start at the first factor's target");

    MMatchMorphism out{f.source, g.target, {}, add_counts(f.counts, g.counts), {}};
    for (const auto& [x, y] : f.m) out.m[x] = g.m.at(y);

    AssemblyResult asm_f = env_assemble_above(env, f.counts, f.source.graph);
    AssemblyResult asm_g = env_assemble_above(env, g.counts, g.source.graph);
    AssemblyResult asm_c = env_assemble_above(env, out.counts, f.source.graph);
    for (std::size_t i = 0; i < env.entries.size(); ++i) {
        for (int j = 0; j < f.counts[i]; ++j)
            for (const auto& [x, nm] : asm_f.copies[i][j])
                out.b[asm_c.copies[i][j].at(x)] = g.m.at(f.b.at(nm));
        for (int j = 0; j < g.counts[i]; ++j)
            for (const auto& [x, nm] : asm_g.copies[i][j])
                out.b[asm_c.copies[i][f.counts[i] + j].at(x)] = g.b.at(nm);
    }
    auto vs = validate_mmatch(env, out, vt);
    if (!vs.empty())
        fail("InvariantViolation", "composite is not a matching morphism: " + vs.front().detail);
    return out;
}

// -------------------------------------------------------------------- M-Disc

// A chain of disconnection rules from the source extended by counted
// environment copies. The reached graph is stored so that composition can
// insist on exact boundary agreement.
struct MDiscMorphism {
    PreChemGraph source;
    std::vector<int> counts;
    DiscSequence rules;
    PreChemGraph target;
};

inline PreChemGraph mdisc_evaluate(const Environment& env, const PreChemGraph& source,
                                   const std::vector<int>& counts, const DiscSequence& rules,
                                   const ValenceTable& vt = ValenceTable::active()) {
    PreChemGraph full = adjoin_copies(source, env_assemble_above(env, counts, source));
    return apply_sequence(rules, full, vt);
}

inline std::vector<Violation> validate_mdisc(const Environment& env, const MDiscMorphism& d,
                                             const ValenceTable& vt = ValenceTable::active()) {
    std::vector<Violation> out = validate_environment(env, vt);
    if (!out.empty()) return out;
    if (d.counts.size() != env.entries.size())
        return {{"SchemaError", "counts arity differs from the environment"}};
    for (int n : d.counts)
        if (n < 0) return {{"SchemaError", "negative multiplicity"}};
    for (auto& v : validate_chemical(d.source, vt))
        out.push_back({v.code, "source: " + v.detail});
    if (!out.empty()) return out;
    try {
        if (mdisc_evaluate(env, d.source, d.counts, d.rules, vt) != d.target)
            out.push_back({"BoundaryMismatch", "stored target differs from the evaluation"});
    } catch (const RgError& e) {
        out.push_back({e.code(), e.what()});
    }
    return out;
}

inline MDiscMorphism mdisc_identity(const Environment& env, const PreChemGraph& a) {
    return {a, std::vector<int>(env.entries.size(), 0), {}, a};
}

namespace detail {

inline DisconnectionRule rename_rule(DisconnectionRule r, const VertexMap& f) {
    auto img = [&](std::string& s) {
        if (s.empty()) return;
        auto it = f.find(s);
        if (it != f.end()) s = it->second;
    };
    img(r.u);
    img(r.v);
    img(r.a);
    img(r.b);
    return r;
}

}  // namespace detail

// Concatenation; the second factor's copies are renumbered behind the
// first's, and the result is normalised by cancelling inverse pairs.
inline MDiscMorphism mdisc_compose(const Environment& env, const MDiscMorphism& d1,
                                   const MDiscMorphism& d2,
                                   const ValenceTable& vt = ValenceTable::active()) {
    for (const auto* d : {&d1, &d2}) {
        auto vs = validate_mdisc(env, *d, vt);
        if (!vs.empty()) fail(vs.front().code.c_str(), vs.front().detail);
    }
    if (d2.source != d1.target)
        fail("BoundaryMismatch", "the second factor does not start at the first factor's result");

    std::vector<int> sums = add_counts(d1.counts, d2.counts);
    AssemblyResult asm1 = env_assemble_above(env, d1.counts, d1.source);
    AssemblyResult asm2 = env_assemble_above(env, d2.counts, d2.source);
    AssemblyResult asmc = env_assemble_above(env, sums, d1.source);
    VertexMap rho1, rho2;
    for (std::size_t i = 0; i < env.entries.size(); ++i) {
        for (int j = 0; j < d1.counts[i]; ++j)
            for (const auto& [x, nm] : asm1.copies[i][j]) rho1[nm] = asmc.copies[i][j].at(x);
        for (int j = 0; j < d2.counts[i]; ++j)
            for (const auto& [x, nm] : asm2.copies[i][j])
                rho2[nm] = asmc.copies[i][d1.counts[i] + j].at(x);
    }
    // the first factor's surviving copy names reappear inside the second
    // factor's rules and must follow the same renumbering
    for (const auto& [old_nm, new_nm] : rho1)
        if (d2.source.has_vertex(old_nm)) rho2[old_nm] = new_nm;

    MDiscMorphism out{d1.source, sums, {}, {}};
    out.rules.reserve(d1.rules.size() + d2.rules.size());
    for (const auto& r : d1.rules) out.rules.push_back(detail::rename_rule(r, rho1));
    for (const auto& r : d2.rules) out.rules.push_back(detail::rename_rule(r, rho2));
    PreChemGraph start = adjoin_copies(out.source, asmc);
    out.rules = simplify_sequence(out.rules, start, vt);
    out.target = apply_sequence(out.rules, start, vt);
    return out;
}

// ------------------------------------------------------------------- M-React

// A reaction from the source extended by counted environment copies.
struct MReactMorphism {
    PreChemGraph source, target;
    std::vector<int> counts;
    ReactionTuple tuple;
};

inline std::vector<Violation> validate_mreact(const Environment& env, const MReactMorphism& r,
                                              const ValenceTable& vt = ValenceTable::active()) {
    std::vector<Violation> out = validate_environment(env, vt);
    if (!out.empty()) return out;
    if (r.counts.size() != env.entries.size())
        return {{"SchemaError", "counts arity differs from the environment"}};
    for (int n : r.counts)
        if (n < 0) return {{"SchemaError", "negative multiplicity"}};
    for (const auto& [side, g] : {std::pair{"source", &r.source}, std::pair{"target", &r.target}})
        if (!is_molecular(*g) || !is_chemical(*g, vt))
            out.push_back({"NotMolecular", std::string(side) + " is not a molecular graph"});
    if (!out.empty()) return out;
    try {
        PreChemGraph full = adjoin_copies(r.source, env_assemble_above(env, r.counts, r.source));
        for (auto& v : validate_reaction_tuple(r.tuple, full, r.target)) out.push_back(v);
    } catch (const RgError& e) {
        out.push_back({e.code(), e.what()});
    }
    return out;
}

inline MReactMorphism mreact_identity(const Environment& env, const PreChemGraph& a) {
    return {a, a, std::vector<int>(env.entries.size(), 0), reaction_identity(a)};
}

namespace detail {

inline ReactionTuple rename_tuple_domain(const ReactionTuple& t, const VertexMap& f) {
    auto img = [&](const std::string& x) {
        auto it = f.find(x);
        return it == f.end() ? x : it->second;
    };
    ReactionTuple out;
    for (const auto& x : t.u_c) out.u_c.insert(img(x));
    out.u_e = t.u_e;
    for (const auto& [k, v] : t.b) out.b[img(k)] = v;
    for (const auto& [k, v] : t.i) out.i[img(k)] = v;
    return out;
}

}  // namespace detail

// Composition r ; s. The factors may meet up to isomorphism: s's source is
// matched onto r's target, exact name agreement first.
inline MReactMorphism mreact_compose(const Environment& env, const MReactMorphism& r,
                                     const MReactMorphism& s,
                                     const ValenceTable& vt = ValenceTable::active()) {
    for (const auto* h : {&r, &s}) {
        auto vs = validate_mreact(env, *h, vt);
        if (!vs.empty()) fail(vs.front().code.c_str(), vs.front().detail);
    }
    VertexMap sigma;
    if (s.source == r.target) {
        for (const auto& [v, l] : s.source.vertices) {
            (void)l;
            sigma[v] = v;
        }
    } else if (auto iso = find_isomorphism(s.source, r.target)) {
        sigma = *std::move(iso);
    } else {
        fail("BoundaryMismatch", "factors do not meet: no isomorphism onto the middle graph");
    }

    std::vector<int> sums = add_counts(r.counts, s.counts);
    AssemblyResult asm_r = env_assemble_above(env, r.counts, r.source);
    AssemblyResult asm_s = env_assemble_above(env, s.counts, s.source);
    AssemblyResult asm_c = env_assemble_above(env, sums, r.source);
    // the second factor's copies sit in the middle graph under their own
    // numbering, past whatever the first factor's target already holds
    AssemblyResult asm_mid = env_assemble_above(env, s.counts, r.target);
    VertexMap rho_r, rho_s;
    for (std::size_t i = 0; i < env.entries.size(); ++i) {
        for (int j = 0; j < r.counts[i]; ++j)
            for (const auto& [x, nm] : asm_r.copies[i][j]) rho_r[nm] = asm_c.copies[i][j].at(x);
        for (int j = 0; j < s.counts[i]; ++j)
            for (const auto& [x, nm] : asm_s.copies[i][j])
                rho_s[nm] = asm_mid.copies[i][j].at(x);
    }

    PreChemGraph dom_full = adjoin_copies(r.source, asm_c);
    PreChemGraph mid = adjoin_copies(r.target, asm_mid);

    // the first factor acts as r on its own portion and carries the second
    // factor's untouched copies into the middle graph
    ReactionTuple first = detail::rename_tuple_domain(r.tuple, rho_r);
    for (std::size_t i = 0; i < env.entries.size(); ++i)
        for (int j = 0; j < s.counts[i]; ++j)
            for (const auto& [x, nm] : asm_s.copies[i][j]) {
                (void)nm;
                first.i[asm_c.copies[i][r.counts[i] + j].at(x)] = asm_mid.copies[i][j].at(x);
            }
    for (const auto& [k, v] : sigma) rho_s.emplace(k, v);
    ReactionTuple second = detail::rename_tuple_domain(s.tuple, rho_s);
    ReactionTuple composite = compose_reactions(first, second, dom_full, mid, s.target);
    return {r.source, s.target, sums, composite};
}

// ------------------------------------------------------------ translation D

// Turns a matching morphism into the disconnection chain that dissolves the
// environment copies into stubs, walks each copy charge over to the atom
// anchoring its image, rebuilds every covalent bond the target prescribes
// from pairs of stubs, and finally ties the prescribed ionic bonds.
inline MDiscMorphism functor_D(const Environment& env, const MMatchMorphism& f,
                               const ValenceTable& vt = ValenceTable::active()) {
    auto vs = validate_mmatch(env, f, vt);
    if (!vs.empty())
        fail("InvariantViolation",
             "not a matching morphism: " + vs.front().code + ": " + vs.front().detail);

    AssemblyResult asmres = env_assemble_above(env, f.counts, f.source.graph);
    const PreChemGraph& mb = asmres.graph;
    const PreChemGraph& a = f.source.graph;
    const PreChemGraph& bg = f.target.graph;
    auto star = [&](const std::string& x) -> const std::string& {
        auto it = f.m.find(x);
        return it != f.m.end() ? it->second : f.b.at(x);
    };

    PreChemGraph cur = adjoin_copies(a, asmres);
    NameSupply supply = NameSupply::above(cur);
    DiscSequence rules;
    auto emit = [&](RuleKind k, const std::string& u, const std::string& v,
                    const std::string& ra = "", const std::string& rb = "") {
        DisconnectionRule r = DisconnectionRule::make(k, u, v, ra, rb);
        cur = apply_rule(r, cur, vt);
        rules.push_back(std::move(r));
    };
    auto find_stub = [&](const std::string& x) -> std::string {
        for (const auto& [n, l] : cur.neighbors(x))  // sorted, so the least name wins
            if (l == EdgeLabel::cov(1) && cur.label(n).is_alpha()) return n;
        return {};
    };
    auto spare_stub = [&](const std::string& x) -> std::string {
        std::string n = find_stub(x);
        if (n.empty()) fail("InvariantViolation", "no spare stub available at " + x);
        return n;
    };

    std::vector<std::string> mb_plus, mb_minus;
    for (const auto& [v, l] : mb.vertices) {
        if (l.kind == VertexKind::Plus) mb_plus.push_back(v);
        if (l.kind == VertexKind::Minus) mb_minus.push_back(v);
    }

    // ionic bonds inside the copies dissolve first
    for (const auto& p : mb_plus)
        for (const auto& q : mb_minus)
            if (mb.edge(p, q).is_ionic()) emit(RuleKind::I, p, q);

    // the covalent skeleton of the copies comes apart into stubs; charges
    // keep their anchors
    auto mb_names = mb.vertex_names();
    auto in_skeleton = [](const VertexLabel& l) {
        return l.is_atom() || l.kind == VertexKind::Minus;
    };
    for (std::size_t i = 0; i < mb_names.size(); ++i)
        for (std::size_t j = i + 1; j < mb_names.size(); ++j) {
            if (!in_skeleton(mb.label(mb_names[i])) || !in_skeleton(mb.label(mb_names[j])))
                continue;
            int k = mb.edge(mb_names[i], mb_names[j]).cov();
            for (int t = 0; t < k; ++t) {
                std::string ra = supply.fresh(), rb = supply.fresh();
                emit(RuleKind::C, mb_names[i], mb_names[j], ra, rb);
            }
        }

    // each copy plus whose image anchors on a different atom is re-created
    // there, paying with one stub at the destination and recovering it on the
    // old anchor; pluses that stay put are left alone. Walks run smallest
    // charge name first among the ones whose destination has a stub, since an
    // earlier departure can free the stub a later arrival needs.
    std::map<std::string, std::string> plus_now;
    struct PlusWalk {
        std::string p, v, w;
    };
    std::vector<PlusWalk> walks;
    for (const auto& p : mb_plus) {
        std::string anchor_img;
        for (const auto& [n, l] : bg.neighbors(f.b.at(p)))
            if (l.cov() == 1 && bg.label(n).is_atom()) anchor_img = n;
        std::string v;
        for (const auto& w : mb_names)
            if (mb.label(w).is_atom() && f.b.at(w) == anchor_img) v = w;
        if (v.empty())
            fail("InvariantViolation", "image of charge " + p + " is not anchored in the copies");
        auto w = mb.unique_single_neighbor(p);
        if (!w) fail("InvariantViolation", "charge " + p + " has no anchor in the copies");
        if (v != *w) walks.push_back({p, v, *w});
    }
    while (!walks.empty()) {
        std::size_t pick = walks.size();
        for (std::size_t i = 0; i < walks.size(); ++i)
            if (!find_stub(walks[i].v).empty()) {
                pick = i;
                break;
            }
        if (pick == walks.size())
            fail("InvariantViolation", "charge walk is stuck: no stub at any destination");
        PlusWalk walk = walks[pick];
        walks.erase(walks.begin() + pick);
        std::string c = spare_stub(walk.v);
        std::string ra = supply.fresh(), rb = supply.fresh();
        emit(RuleKind::E, walk.v, c, ra, rb);
        emit(RuleKind::Ebar, walk.w, c, walk.p, rb);
        plus_now[walk.p] = ra;
    }

    // every covalent bond the target prescribes is rebuilt from a stub pair;
    // bonds already present (between source vertices) are left alone
    std::vector<std::string> skel;
    for (const auto& g : {&a, &mb})
        for (const auto& [v, l] : g->vertices)
            if (in_skeleton(l)) skel.push_back(v);
    std::sort(skel.begin(), skel.end());
    for (std::size_t i = 0; i < skel.size(); ++i)
        for (std::size_t j = i + 1; j < skel.size(); ++j) {
            int want = bg.edge(star(skel[i]), star(skel[j])).cov();
            int have = cur.edge(skel[i], skel[j]).cov();
            if (have > want)
                fail("InvariantViolation",
                     "bond surplus between " + skel[i] + " and " + skel[j]);
            for (int t = have; t < want; ++t)
                emit(RuleKind::Cbar, skel[i], skel[j], spare_stub(skel[i]), spare_stub(skel[j]));
        }

    // prescribed ionic bonds are tied last, through the re-created pluses
    std::vector<std::string> all_plus = mb_plus, all_minus = mb_minus;
    for (const auto& [v, l] : a.vertices) {
        if (l.kind == VertexKind::Plus) all_plus.push_back(v);
        if (l.kind == VertexKind::Minus) all_minus.push_back(v);
    }
    std::sort(all_plus.begin(), all_plus.end());
    std::sort(all_minus.begin(), all_minus.end());
    for (const auto& p : all_plus)
        for (const auto& q : all_minus) {
            bool want = bg.edge(star(p), star(q)).is_ionic();
            auto it = plus_now.find(p);
            const std::string& pc = it != plus_now.end() ? it->second : p;
            bool have = cur.edge(pc, q).is_ionic();
            if (want && !have) emit(RuleKind::Ibar, pc, q);
            if (have && !want)
                fail("InvariantViolation", "unexpected ionic bond between " + p + " and " + q);
        }

    return {a, f.counts, std::move(rules), std::move(cur)};
}

// ------------------------------------------------------------ translation R

namespace detail {

// Vertices of a that are missing from b or carry a different neighbourhood.
inline std::set<std::string> changed_vertices(const PreChemGraph& a, const PreChemGraph& b) {
    std::set<std::string> s;
    for (const auto& [v, l] : a.vertices) {
        if (!b.has_vertex(v) || !(b.label(v) == l)) {
            s.insert(v);
            continue;
        }
        std::set<std::string> nbrs;
        for (const auto& [w, e] : a.neighbors(v)) {
            (void)e;
            nbrs.insert(w);
        }
        for (const auto& [w, e] : b.neighbors(v)) {
            (void)e;
            nbrs.insert(w);
        }
        for (const auto& w : nbrs) {
            EdgeLabel ea = a.has_vertex(w) ? a.edge(v, w) : EdgeLabel::cov(0);
            EdgeLabel eb = b.has_vertex(w) ? b.edge(v, w) : EdgeLabel::cov(0);
            if (ea != eb) {
                s.insert(v);
                break;
            }
        }
    }
    return s;
}

}  // namespace detail

// Collapses a disconnection chain between molecular graphs into a single
// reaction: the cores are the chemical closures of everything the rules
// touched, and atoms keep their names throughout, so both the core bijection
// and the context isomorphism are identities.
inline MReactMorphism functor_R(const Environment& env, const MDiscMorphism& d,
                                const ValenceTable& vt = ValenceTable::active()) {
    auto vs = validate_mdisc(env, d, vt);
    if (!vs.empty())
        fail("InvariantViolation",
             "not a disconnection morphism: " + vs.front().code + ": " + vs.front().detail);
    if (!is_molecular(d.source) || !is_molecular(d.target))
        fail("NotMolecularEndpoints", "translation needs alpha-free endpoints");

    PreChemGraph full = adjoin_copies(d.source, env_assemble_above(env, d.counts, d.source));
    const PreChemGraph& tg = d.target;
    std::set<std::string> seed = detail::changed_vertices(full, tg);
    ReactionTuple t;
    for (;;) {
        t.u_c = smallest_chemical_subgraph(full, seed);
        std::set<std::string> seed_e;
        for (const auto& x : t.u_c)
            if (tg.has_vertex(x)) seed_e.insert(x);
        for (const auto& [v, l] : tg.vertices) {
            (void)l;
            if (!full.has_vertex(v)) seed_e.insert(v);
        }
        t.u_e = smallest_chemical_subgraph(tg, seed_e);
        std::set<std::string> grow;
        for (const auto& x : t.u_e)
            if (full.has_vertex(x) && !t.u_c.count(x)) grow.insert(x);
        if (grow.empty()) break;
        seed.insert(grow.begin(), grow.end());
    }
    for (const auto& x : neutral_members(full, t.u_c)) t.b[x] = x;
    for (const auto& [v, l] : full.vertices) {
        (void)l;
        if (!t.u_c.count(v)) t.i[v] = v;
    }
    auto errs = validate_reaction_tuple(t, full, tg);
    if (!errs.empty())
        fail("InvariantViolation",
             "derived reaction invalid: " + errs.front().code + ": " + errs.front().detail);
    return {d.source, d.target, d.counts, t};
}

// -------------------------------------------------------- environment growth

namespace detail {

struct EnvEmbedding {
    std::vector<std::size_t> entry_at;  // small entry index -> large entry index
    std::vector<VertexMap> entry_iso;   // small entry names -> large entry names
};

inline EnvEmbedding embed_environment(const Environment& small, const Environment& big,
                                      const ValenceTable& vt) {
    for (const auto* e : {&small, &big}) {
        auto vs = validate_environment(*e, vt);
        if (!vs.empty()) fail(vs.front().code.c_str(), vs.front().detail);
    }
    EnvEmbedding out;
    for (std::size_t i = 0; i < small.entries.size(); ++i) {
        bool found = false;
        for (std::size_t j = 0; j < big.entries.size() && !found; ++j)
            if (auto iso = find_isomorphism(small.entries[i], big.entries[j])) {
                out.entry_at.push_back(j);
                out.entry_iso.push_back(*std::move(iso));
                found = true;
            }
        if (!found)
            fail("NotASuperset",
                 "entry " + std::to_string(i + 1) + " does not appear in the larger environment");
    }
    return out;
}

inline std::vector<int> reindex_counts(const EnvEmbedding& em, const std::vector<int>& counts,
                                       std::size_t big_arity) {
    std::vector<int> out(big_arity, 0);
    for (std::size_t i = 0; i < counts.size(); ++i) out[em.entry_at[i]] = counts[i];
    return out;
}

// Copy vertex names under the small environment -> the same copies assembled
// under the large one, threading each entry's isomorphism. src is the graph
// the copies are adjoined to, which fixes the numbering on both sides.
inline VertexMap reindex_copies(const Environment& small, const Environment& big,
                                const EnvEmbedding& em, const std::vector<int>& counts,
                                const PreChemGraph& src) {
    AssemblyResult asm_s = env_assemble_above(small, counts, src);
    AssemblyResult asm_b =
        env_assemble_above(big, reindex_counts(em, counts, big.entries.size()), src);
    VertexMap rho;
    for (std::size_t i = 0; i < counts.size(); ++i)
        for (int j = 0; j < counts[i]; ++j)
            for (const auto& [x, nm] : asm_s.copies[i][j])
                rho[nm] = asm_b.copies[em.entry_at[i]][j].at(em.entry_iso[i].at(x));
    return rho;
}

}  // namespace detail

inline MMatchMorphism include_environment(const Environment& small, const MMatchMorphism& f,
                                          const Environment& big,
                                          const ValenceTable& vt = ValenceTable::active()) {
    auto em = detail::embed_environment(small, big, vt);
    VertexMap rho = detail::reindex_copies(small, big, em, f.counts, f.source.graph);
    MMatchMorphism out{f.source, f.target, f.m,
                       detail::reindex_counts(em, f.counts, big.entries.size()), {}};
    for (const auto& [k, v] : f.b) out.b[rho.at(k)] = v;
    auto vs = validate_mmatch(big, out, vt);
    if (!vs.empty()) fail("InvariantViolation", "inclusion broke the morphism: " + vs.front().detail);
    return out;
}

inline MDiscMorphism include_environment(const Environment& small, const MDiscMorphism& d,
                                         const Environment& big,
                                         const ValenceTable& vt = ValenceTable::active()) {
    auto em = detail::embed_environment(small, big, vt);
    VertexMap rho = detail::reindex_copies(small, big, em, d.counts, d.source);
    MDiscMorphism out{d.source, detail::reindex_counts(em, d.counts, big.entries.size()), {}, {}};
    out.rules.reserve(d.rules.size());
    for (const auto& r : d.rules) out.rules.push_back(detail::rename_rule(r, rho));
    out.target = mdisc_evaluate(big, out.source, out.counts, out.rules, vt);
    return out;
}

inline MReactMorphism include_environment(const Environment& small, const MReactMorphism& r,
                                          const Environment& big,
                                          const ValenceTable& vt = ValenceTable::active()) {
    auto em = detail::embed_environment(small, big, vt);
    VertexMap rho = detail::reindex_copies(small, big, em, r.counts, r.source);
    MReactMorphism out{r.source, r.target,
                       detail::reindex_counts(em, r.counts, big.entries.size()),
                       detail::rename_tuple_domain(r.tuple, rho)};
    auto vs = validate_mreact(big, out, vt);
    if (!vs.empty()) fail("InvariantViolation", "inclusion broke the morphism: " + vs.front().detail);
    return out;
}

}  // namespace retrograph
