#pragma once

// Structure-preserving maps between chemical graphs, reaction schemes as
// neutral-vertex bijections, the double-pushout rewrite they induce on a
// matched context, and the equivalent concrete presentation of a reaction as
// a tuple (U_C, U_E, b, i) with its category structure.

#include <retrograph/orientation.hpp>

#include <future>

namespace retrograph {

struct Verdict {
    bool ok = true;
    std::string reason;
};

inline OrientedGraph induced_oriented(const OrientedGraph& g, const std::set<std::string>& names) {
    OrientedGraph out{induced_subgraph(g.graph, names), {}, {}};
    auto keep = [&](const auto& tuple) {
        for (const auto& v : tuple)
            if (!names.count(v)) return false;
        return true;
    };
    for (const auto& t : g.p.orbits())
        if (keep(t)) out.p.insert(t);
    for (const auto& q : g.t.orbits())
        if (keep(q)) out.t.insert(q);
    return out;
}

inline std::set<std::string> neutral_members(const PreChemGraph& g,
                                             const std::set<std::string>& u) {
    std::set<std::string> out;
    for (const auto& x : u)
        if (!g.label(x).is_charge()) out.insert(x);
    return out;
}

// ---------------------------------------------------------------- morphisms

// A map f : A -> B of oriented pre-chemical graphs. Checked conditions, in
// order: totality, injectivity on non-alpha vertices, label preservation on
// them, alpha vertices landing on atoms or alphas, nonzero edges between
// non-alpha vertices preserved exactly, the covalent sum rule at alpha
// vertices (summing over preimage classes), and forward preservation of the
// triangle and tetrahedron relations.
inline Verdict check_morphism(const VertexMap& f, const OrientedGraph& ga,
                              const OrientedGraph& gb) {
    const PreChemGraph& a = ga.graph;
    const PreChemGraph& b = gb.graph;
    for (const auto& [v, l] : a.vertices) {
        (void)l;
        auto it = f.find(v);
        if (it == f.end()) return {false, "map is not total: " + v + " unassigned"};
        if (!b.has_vertex(it->second))
            return {false, "map hits a vertex outside the codomain: " + it->second};
    }
    auto chem = a.chem_set();
    std::map<std::string, std::string> hit;
    for (const auto& v : chem) {
        const auto& w = f.at(v);
        auto [it, fresh] = hit.emplace(w, v);
        if (!fresh)
            return {false, "not injective on non-alpha vertices: " + it->second + " and " + v};
        if (b.label(w) != a.label(v))
            return {false, "label changed at " + v + ": " + a.label(v).str() + " to " +
                               b.label(w).str()};
    }
    for (const auto& v : a.alpha_set()) {
        const auto& lw = b.label(f.at(v));
        if (!(lw.is_atom() || lw.is_alpha()))
            return {false, "alpha vertex " + v + " mapped to " + lw.str()};
    }
    for (const auto& u : chem)
        for (const auto& v : chem) {
            if (u >= v) continue;
            auto e = a.edge(u, v);
            if (!e.is_zero() && b.edge(f.at(u), f.at(v)) != e)
                return {false, "edge " + u + "," + v + " not preserved"};
        }
    // preimage classes, for the covalent sum rule
    std::map<std::string, std::vector<std::string>> fiber;
    for (const auto& [v, w] : f)
        if (a.has_vertex(v)) fiber[w].push_back(v);
    for (const auto& v : a.alpha_set())
        for (const auto& [u, e] : a.neighbors(v)) {
            if (e.cov() == 0) continue;
            int want = 0;
            for (const auto& w : fiber.at(f.at(v)))
                for (const auto& z : fiber.at(f.at(u))) want += a.edge(w, z).cov();
            if (b.edge(f.at(v), f.at(u)).cov() != want)
                return {false, "covalent sum rule fails at " + v + "," + u};
        }
    for (const auto& t : ga.p.orbits())
        if (!gb.p.contains({f.at(t[0]), f.at(t[1]), f.at(t[2])}))
            return {false, "triangle " + t[0] + "," + t[1] + "," + t[2] + " not preserved"};
    for (const auto& q : ga.t.orbits())
        if (!gb.t.contains({f.at(q[0]), f.at(q[1]), f.at(q[2]), f.at(q[3])}))
            return {false, "tetrahedron " + q[0] + "," + q[1] + "," + q[2] + "," + q[3] +
                               " not preserved"};
    return {true, ""};
}

inline bool is_morphism(const VertexMap& f, const OrientedGraph& a, const OrientedGraph& b) {
    return check_morphism(f, a, b).ok;
}

// A matching additionally forbids new edges between images of non-alpha
// vertices: the edge labels there agree exactly, zero included.
inline Verdict check_matching(const VertexMap& f, const OrientedGraph& ga,
                              const OrientedGraph& gb) {
    auto base = check_morphism(f, ga, gb);
    if (!base.ok) return base;
    auto chem = ga.graph.chem_set();
    for (const auto& u : chem)
        for (const auto& v : chem) {
            if (u >= v) continue;
            if (gb.graph.edge(f.at(u), f.at(v)) != ga.graph.edge(u, v))
                return {false, "new edge between images of " + u + " and " + v};
        }
    return {true, ""};
}

inline bool is_matching(const VertexMap& f, const OrientedGraph& a, const OrientedGraph& b) {
    return check_matching(f, a, b).ok;
}

namespace detail {

struct MatchSearch {
    const OrientedGraph& a;
    const OrientedGraph& c;
    std::vector<std::string> order;  // non-alpha vertices of a
    std::map<std::string, std::vector<std::string>> cand;
    std::map<std::string, std::vector<std::string>> stubs;  // anchor -> its alpha vertices
    std::size_t limit = 0;
    std::vector<VertexMap> found;

    bool consistent(const VertexMap& f, const std::string& v, const std::string& w) const {
        for (const auto& [av, cw] : f)
            if (c.graph.edge(w, cw) != a.graph.edge(v, av)) return false;
        return true;
    }

    bool oriented_ok(const VertexMap& f) const {
        for (const auto& t : a.p.orbits())
            if (!c.p.contains({f.at(t[0]), f.at(t[1]), f.at(t[2])})) return false;
        for (const auto& q : a.t.orbits())
            if (!c.t.contains({f.at(q[0]), f.at(q[1]), f.at(q[2]), f.at(q[3])})) return false;
        return true;
    }

    bool emit(VertexMap f) {
        if (!oriented_ok(f)) return false;
        found.push_back(std::move(f));
        return limit != 0 && found.size() >= limit;
    }

    // Distribute each anchor's stubs over eligible neighbours of the anchor
    // image; a used target must receive exactly its covalent order.
    bool assign_alphas(std::size_t anchor_idx, const std::vector<std::string>& anchors,
                       VertexMap& f, const std::set<std::string>& chem_image) {
        if (anchor_idx == anchors.size()) return emit(f);
        const auto& u = anchors[anchor_idx];
        const auto& fu = f.at(u);
        std::vector<std::pair<std::string, int>> targets;  // name, capacity
        for (const auto& [x, e] : c.graph.neighbors(fu)) {
            if (e.cov() == 0 || chem_image.count(x)) continue;
            const auto& lx = c.graph.label(x);
            if (lx.is_atom() || lx.is_alpha()) targets.push_back({x, e.cov()});
        }
        const auto& ss = stubs.at(u);
        std::vector<int> load(targets.size(), 0);
        bool stop = false;
        auto rec = [&](auto&& self, std::size_t si) -> void {
            if (stop) return;
            if (si == ss.size()) {
                for (std::size_t t = 0; t < targets.size(); ++t)
                    if (load[t] != 0 && load[t] != targets[t].second) return;
                stop = assign_alphas(anchor_idx + 1, anchors, f, chem_image);
                return;
            }
            for (std::size_t t = 0; t < targets.size() && !stop; ++t) {
                if (load[t] >= targets[t].second) continue;
                ++load[t];
                f[ss[si]] = targets[t].first;
                self(self, si + 1);
                f.erase(ss[si]);
                --load[t];
            }
        };
        rec(rec, 0);
        return stop;
    }

    bool alphas_then_emit(VertexMap& f) {
        std::vector<std::string> anchors;
        for (const auto& [u, ss] : stubs) {
            (void)ss;
            anchors.push_back(u);
        }
        std::set<std::string> chem_image;
        for (const auto& [v, w] : f) chem_image.insert(w);
        return assign_alphas(0, anchors, f, chem_image);
    }

    bool rec(std::size_t i, VertexMap& f, std::set<std::string>& used) {
        if (i == order.size()) return alphas_then_emit(f);
        const std::string& v = order[i];
        for (const auto& w : cand.at(v)) {
            if (used.count(w)) continue;
            if (!consistent(f, v, w)) continue;
            f[v] = w;
            used.insert(w);
            bool stop = rec(i + 1, f, used);
            used.erase(w);
            f.erase(v);
            if (stop) return true;
        }
        return false;
    }
};

inline std::optional<MatchSearch> prepare_match(const OrientedGraph& a, const OrientedGraph& c) {
    MatchSearch s{a, c, {}, {}, {}, 0, {}};
    for (const auto& v : a.graph.chem_set()) {
        std::vector<std::string> ws;
        for (const auto& [w, l] : c.graph.vertices)
            if (l == a.graph.label(v)) ws.push_back(w);
        if (ws.empty()) return std::nullopt;
        s.cand[v] = std::move(ws);
        s.order.push_back(v);
    }
    for (const auto& v : a.graph.alpha_set())
        for (const auto& [u, e] : a.graph.neighbors(v))
            if (e.cov() == 1) s.stubs[u].push_back(v);
    std::stable_sort(s.order.begin(), s.order.end(), [&](const auto& x, const auto& y) {
        return s.cand.at(x).size() < s.cand.at(y).size();
    });
    return s;
}

}  // namespace detail

// All matchings of a into c, deterministically ordered. With jobs > 1 the
// branches under the most constrained vertex run concurrently and results are
// concatenated in candidate order.
inline std::vector<VertexMap> enumerate_matchings(const OrientedGraph& a, const OrientedGraph& c,
                                                  std::size_t limit = 0, unsigned jobs = 1) {
    auto s = detail::prepare_match(a, c);
    if (!s) return {};
    std::vector<VertexMap> out;
    if (s->order.empty()) {
        VertexMap f;
        s->alphas_then_emit(f);
        out = std::move(s->found);
    } else if (jobs <= 1 || s->cand.at(s->order.front()).size() <= 1) {
        s->limit = limit;
        VertexMap f;
        std::set<std::string> used;
        s->rec(0, f, used);
        out = std::move(s->found);
    } else {
        const std::string root = s->order.front();
        std::vector<std::future<std::vector<VertexMap>>> parts;
        for (const auto& w : s->cand.at(root)) {
            parts.push_back(std::async(std::launch::async, [&, w]() {
                detail::MatchSearch local = *s;
                local.limit = limit;
                VertexMap f{{root, w}};
                std::set<std::string> used{w};
                local.rec(1, f, used);
                return std::move(local.found);
            }));
        }
        for (auto& p : parts) {
            auto part = p.get();
            for (auto& f : part) {
                out.push_back(std::move(f));
                if (limit != 0 && out.size() >= limit) break;
            }
            if (limit != 0 && out.size() >= limit) break;
        }
    }
    for (const auto& f : out) {
        auto v = check_matching(f, a, c);
        if (!v.ok) fail("InvariantViolation", "enumerated map is not a matching: " + v.reason);
    }
    if (limit != 0 && out.size() > limit) out.resize(limit);
    return out;
}

// --------------------------------------------------------------- schemes

inline OrientedGraph intersection_along_bijection(const OrientedGraph& a, const OrientedGraph& c,
                                                  const VertexMap& b) {
    PreChemGraph g;
    for (const auto& [v, l] : a.graph.vertices) {
        if (!b.count(v)) fail("DanglingName", "bijection undefined at " + v);
        if (!c.graph.has_vertex(b.at(v))) fail("DanglingName", "bijection hits unknown vertex " + b.at(v));
        g.add_vertex(v, l);
    }
    for (const auto& [p, l] : a.graph.edges)
        if (c.graph.edge(b.at(p.first), b.at(p.second)) == l) g.add_edge(p.first, p.second, l);
    OrientedGraph out{std::move(g), {}, {}};
    for (const auto& t : a.p.orbits())
        if (c.p.contains({b.at(t[0]), b.at(t[1]), b.at(t[2])})) out.p.insert(t);
    for (const auto& q : a.t.orbits())
        if (c.t.contains({b.at(q[0]), b.at(q[1]), b.at(q[2]), b.at(q[3])})) out.t.insert(q);
    return out;
}

struct ReactionScheme {
    OrientedGraph left, right;
    VertexMap bij;  // neutral vertices of left -> neutral vertices of right

    static ReactionScheme make(OrientedGraph l, OrientedGraph r, VertexMap b);
};

inline Verdict check_scheme(const OrientedGraph& l, const OrientedGraph& r, const VertexMap& b) {
    for (const auto* side : {&l, &r}) {
        auto vs = validate_chemical(side->graph);
        if (!vs.empty()) return {false, "boundary not chemical: " + vs.front().detail};
        auto os = validate_oriented(*side);
        if (!os.empty()) return {false, "boundary not oriented: " + os.front().detail};
    }
    if (net_charge(l.graph) != net_charge(r.graph)) return {false, "net charges differ"};
    auto nl = l.graph.neutral_set();
    auto nr = r.graph.neutral_set();
    if (b.size() != nl.size() || nl.size() != nr.size())
        return {false, "bijection does not cover the neutral vertices"};
    std::set<std::string> hit;
    for (const auto& [x, y] : b) {
        if (!nl.count(x)) return {false, "bijection key " + x + " is not neutral in the source"};
        if (!nr.count(y)) return {false, "bijection value " + y + " is not neutral in the target"};
        if (!hit.insert(y).second) return {false, "bijection repeats value " + y};
        if (l.graph.label(x) != r.graph.label(y))
            return {false, "bijection changes label at " + x};
    }
    return {true, ""};
}

inline ReactionScheme ReactionScheme::make(OrientedGraph l, OrientedGraph r, VertexMap b) {
    auto v = check_scheme(l, r, b);
    if (!v.ok) fail("NotAScheme", v.reason);
    return ReactionScheme{std::move(l), std::move(r), std::move(b)};
}

struct SchemeSpan {
    OrientedGraph apex;
    VertexMap to_left, to_right;
};

inline SchemeSpan scheme_to_span(const ReactionScheme& s) {
    auto nl = induced_oriented(s.left, s.left.graph.neutral_set());
    auto nr = induced_oriented(s.right, s.right.graph.neutral_set());
    SchemeSpan span{intersection_along_bijection(nl, nr, s.bij), {}, s.bij};
    for (const auto& [v, l] : span.apex.graph.vertices) {
        (void)l;
        span.to_left[v] = v;
    }
    return span;
}

inline ReactionScheme scheme_from_span(const OrientedGraph& left, const OrientedGraph& apex,
                                       const OrientedGraph& right, const VertexMap& f,
                                       const VertexMap& g) {
    auto bad = [](const std::string& why) { fail("NotAScheme", why); };
    for (const auto& [v, l] : apex.graph.vertices)
        if (l.is_charge()) bad("apex vertex " + v + " is charged");
    for (const auto* leg : {&f, &g}) {
        const OrientedGraph& side = leg == &f ? left : right;
        std::set<std::string> hit;
        for (const auto& [v, l] : apex.graph.vertices) {
            auto it = leg->find(v);
            if (it == leg->end()) bad("leg undefined at " + v);
            if (!side.graph.has_vertex(it->second)) bad("leg hits unknown vertex " + it->second);
            if (!hit.insert(it->second).second) bad("leg not injective at " + v);
            if (side.graph.label(it->second) != l) bad("leg changes label at " + v);
        }
        std::size_t neutral = side.graph.neutral_set().size();
        std::size_t covered = 0;
        for (const auto& w : hit)
            if (!side.graph.label(w).is_charge()) ++covered;
        if (covered != neutral) bad("leg is not surjective on neutral vertices");
        for (const auto& [p, l] : apex.graph.edges)
            if (side.graph.edge(leg->at(p.first), leg->at(p.second)) != l)
                bad("leg drops the edge " + p.first + "," + p.second);
    }
    VertexMap bij;
    for (const auto& [v, l] : apex.graph.vertices) {
        (void)l;
        bij[f.at(v)] = g.at(v);
    }
    auto scheme = ReactionScheme::make(left, right, bij);  // validates the boundaries
    // terminality: the apex must be the full intersection along the bijection
    auto span = scheme_to_span(scheme);
    PreChemGraph renamed;
    VertexMap to_names;
    for (const auto& [v, l] : apex.graph.vertices) {
        renamed.add_vertex(f.at(v), l);
        to_names[v] = f.at(v);
    }
    for (const auto& [p, l] : apex.graph.edges)
        renamed.add_edge(f.at(p.first), f.at(p.second), l);
    if (renamed != span.apex.graph) bad("span is not terminal: apex edges differ");
    if (apex.p.mapped(to_names) != span.apex.p || apex.t.mapped(to_names) != span.apex.t)
        bad("span is not terminal: apex orientation differs");
    return scheme;
}

// ------------------------------------------------------------------- dpo

struct DpoResult {
    OrientedGraph context;  // C with the replaced part cut back to the scheme apex
    OrientedGraph result;
    VertexMap apex_to_context;
    VertexMap right_to_result;
    VertexMap charge_names;  // right-side charge -> its vertex name in the result
    std::set<std::string> image_chem, image_alpha;
};

inline DpoResult dpo_apply(const ReactionScheme& s, const VertexMap& m, const OrientedGraph& c) {
    {
        auto v = check_scheme(s.left, s.right, s.bij);
        if (!v.ok) fail("NotAScheme", v.reason);
        auto w = check_matching(m, s.left, c);
        if (!w.ok) fail("NotAMatching", w.reason);
    }
    const PreChemGraph& ga = s.left.graph;
    const PreChemGraph& gb = s.right.graph;
    const PreChemGraph& gc = c.graph;

    std::map<std::string, std::string> chem_pre;                // image -> its non-alpha preimage
    std::map<std::string, std::vector<std::string>> alpha_pre;  // image -> its alpha preimages
    std::set<std::string> im_chem, im_alpha;
    for (const auto& v : ga.chem_set()) {
        im_chem.insert(m.at(v));
        chem_pre[m.at(v)] = v;
    }
    for (const auto& v : ga.alpha_set()) {
        im_alpha.insert(m.at(v));
        alpha_pre[m.at(v)].push_back(v);
    }
    for (const auto& x : im_alpha)
        if (im_chem.count(x))
            fail("InvariantViolation", "alpha image meets the non-alpha image at " + x);

    std::set<std::string> x2 = neutral_members(gc, im_chem);
    std::set<std::string> removed;
    for (const auto& x : im_chem)
        if (!x2.count(x)) removed.insert(x);

    VertexMap inv_bij = invert_bijection(s.bij);
    auto star2 = [&](const std::string& u) { return s.bij.at(chem_pre.at(u)); };

    // fresh names for the incoming charges
    NameSupply supply = NameSupply::above(gc);
    VertexMap rho;
    std::set<std::string> taken;
    for (const auto& q : gb.charge_set()) {
        rho[q] = (gc.has_vertex(q) || taken.count(q)) ? supply.fresh() : q;
        taken.insert(rho[q]);
    }

    auto span = scheme_to_span(s);

    // the cut-back context D
    PreChemGraph gd;
    for (const auto& [v, l] : gc.vertices)
        if (!removed.count(v)) gd.add_vertex(v, l);
    for (const auto& [p, l] : gc.edges) {
        if (removed.count(p.first) || removed.count(p.second)) continue;
        if (x2.count(p.first) && x2.count(p.second)) continue;
        gd.add_edge(p.first, p.second, l);
    }
    for (const auto& u : x2)
        for (const auto& v : x2) {
            if (u >= v) continue;
            auto e = span.apex.graph.edge(chem_pre.at(u), chem_pre.at(v));
            if (!e.is_zero()) gd.add_edge(u, v, e);
        }
    OrientedGraph d{std::move(gd), {}, {}};
    auto in_image = [&](const std::string& v) { return x2.count(v) || im_alpha.count(v); };
    auto transport = [&](auto& rel_out, const auto& c_orbits, const auto& lift_orbits,
                         const auto& host) {
        for (const auto& t : c_orbits) {
            bool in_d = true, all_img = true;
            for (const auto& v : t) {
                if (removed.count(v)) in_d = false;
                if (!in_image(v)) all_img = false;
            }
            if (in_d && !all_img) rel_out.insert(t);
        }
        for (const auto& t : lift_orbits) {
            auto h = t;
            bool ok = true;
            std::set<std::string> seen;
            for (auto& v : h) {
                v = host(v);
                if (v.empty() || !seen.insert(v).second) ok = false;
            }
            if (ok) rel_out.insert(h);
        }
    };
    auto host_k = [&](const std::string& v) { return m.count(v) ? m.at(v) : std::string{}; };
    transport(d.p, c.p.orbits(), span.apex.p.orbits(), host_k);
    transport(d.t, c.t.orbits(), span.apex.t.orbits(), host_k);

    // the result E
    PreChemGraph ge;
    for (const auto& [v, l] : d.graph.vertices) ge.add_vertex(v, l);
    for (const auto& q : gb.charge_set()) ge.add_vertex(rho.at(q), gb.label(q));
    for (const auto& [p, l] : gc.edges) {
        bool r1 = removed.count(p.first), r2 = removed.count(p.second);
        if (r1 || r2) continue;
        bool t1 = x2.count(p.first), t2 = x2.count(p.second);
        if (t1 || t2) {
            // cells with a replaced vertex come from the scheme target; a bond
            // from strictly outside the image into the replaced part is impossible
            const std::string& other = t1 ? p.second : p.first;
            if (!t1 || !t2) {
                if (!x2.count(other) && !im_alpha.count(other))
                    fail("InvariantViolation", "context vertex keeps a bond into the replaced part: " +
                                                   p.first + "," + p.second);
            }
            continue;
        }
        ge.add_edge(p.first, p.second, l);
    }
    auto alpha_sum = [&](const std::string& bname, const std::string& alpha_img) {
        int total = 0;
        for (const auto& a : alpha_pre.at(alpha_img)) {
            auto e = gb.edge(bname, s.bij.at(a));
            if (e.is_ionic()) fail("InvariantViolation", "ionic bond in a covalent sum cell");
            total += e.cov();
        }
        if (total > 4) fail("InvariantViolation", "covalent sum exceeds the largest bond order");
        return EdgeLabel::cov(total);
    };
    for (auto iu = x2.begin(); iu != x2.end(); ++iu) {
        for (auto iv = std::next(iu); iv != x2.end(); ++iv) {
            auto e = gb.edge(star2(*iu), star2(*iv));
            if (!e.is_zero()) ge.add_edge(*iu, *iv, e);
        }
        for (const auto& v : im_alpha) {
            auto e = alpha_sum(star2(*iu), v);
            if (!e.is_zero()) ge.add_edge(*iu, v, e);
        }
        for (const auto& q : gb.charge_set()) {
            auto e = gb.edge(star2(*iu), q);
            if (!e.is_zero()) ge.add_edge(*iu, rho.at(q), e);
        }
    }
    for (const auto& v : im_alpha)
        for (const auto& q : gb.charge_set()) {
            auto e = alpha_sum(q, v);
            if (!e.is_zero()) ge.add_edge(v, rho.at(q), e);
        }
    for (const auto& q1 : gb.charge_set())
        for (const auto& q2 : gb.charge_set()) {
            if (q1 >= q2) continue;
            auto e = gb.edge(q1, q2);
            if (!e.is_zero()) ge.add_edge(rho.at(q1), rho.at(q2), e);
        }
    OrientedGraph e{std::move(ge), {}, {}};
    auto host_b = [&](const std::string& w) -> std::string {
        if (gb.label(w).is_charge()) return rho.at(w);
        auto it = inv_bij.find(w);
        return it == inv_bij.end() ? std::string{} : m.at(it->second);
    };
    transport(e.p, c.p.orbits(), s.right.p.orbits(), host_b);
    transport(e.t, c.t.orbits(), s.right.t.orbits(), host_b);

    auto ev = validate_chemical(e.graph);
    if (!ev.empty())
        fail("InvariantViolation", "rewrite produced a non-chemical graph: " + ev.front().detail);
    if (gc.alpha_set().empty() && !e.graph.alpha_set().empty())
        fail("InvariantViolation", "rewrite introduced alpha vertices into an alpha-free graph");
    auto eo = validate_oriented(e);
    if (!eo.empty()) fail("ProjectionFailure", "result orientation invalid: " + eo.front().detail);

    DpoResult out{std::move(d), std::move(e), {}, {}, std::move(rho),
                  std::move(im_chem), std::move(im_alpha)};
    for (const auto& [v, l] : span.apex.graph.vertices) {
        (void)l;
        out.apex_to_context[v] = m.at(v);
    }
    for (const auto& [w, l] : gb.vertices)
        out.right_to_result[w] = l.is_charge() ? out.charge_names.at(w) : m.at(inv_bij.at(w));
    for (const auto& [x, y] : s.bij)
        if (out.right_to_result.at(y) != m.at(x))
            fail("InvariantViolation", "rewrite squares do not commute at " + x);
    return out;
}

// -------------------------------------------------------- chemical subgraphs

// The two closure conditions: a + or alpha vertex pulls in its single-bond
// partner, and any vertex pulls in charges it is single-bonded to.
inline Verdict check_chemical_subgraph(const PreChemGraph& g, const std::set<std::string>& u) {
    for (const auto& x : u) {
        if (!g.has_vertex(x)) return {false, "unknown vertex " + x};
        const auto& lx = g.label(x);
        if (lx.kind == VertexKind::Plus || lx.is_alpha()) {
            auto y = g.unique_single_neighbor(x);
            if (y && !u.count(*y)) return {false, x + " needs its partner " + *y};
        }
        for (const auto& [y, e] : g.neighbors(x))
            if (e == EdgeLabel::cov(1) && g.label(y).is_charge() && !u.count(y))
                return {false, x + " needs the charge " + y};
    }
    return {true, ""};
}

inline bool is_chemical_subgraph(const PreChemGraph& g, const std::set<std::string>& u) {
    return check_chemical_subgraph(g, u).ok;
}

// Closure of a seed under the subgraph conditions, strengthened so that the
// result always extends to a standalone chemical graph: minus vertices pull
// their covalent partner, and charges pull their ionic partners.
inline std::set<std::string> smallest_chemical_subgraph(const PreChemGraph& g,
                                                        const std::set<std::string>& seed) {
    std::set<std::string> u = seed;
    std::vector<std::string> work(u.begin(), u.end());
    while (!work.empty()) {
        std::string x = work.back();
        work.pop_back();
        if (!g.has_vertex(x)) fail("DanglingName", "unknown seed vertex " + x);
        auto pull = [&](const std::string& y) {
            if (u.insert(y).second) work.push_back(y);
        };
        const auto& lx = g.label(x);
        if (lx.kind == VertexKind::Plus || lx.kind == VertexKind::Minus || lx.is_alpha()) {
            if (auto y = g.unique_single_neighbor(x)) pull(*y);
        }
        for (const auto& [y, e] : g.neighbors(x)) {
            if (e == EdgeLabel::cov(1) && g.label(y).is_charge()) pull(y);
            if (e.is_ionic() && lx.is_charge()) pull(y);
        }
    }
    return u;
}

// -------------------------------------------------------- reaction tuples

struct ReactionTuple {
    std::set<std::string> u_c, u_e;
    VertexMap b;  // neutral members of u_c -> neutral members of u_e
    VertexMap i;  // the untouched remainder, an exact edge-preserving bijection

    friend bool operator==(const ReactionTuple&, const ReactionTuple&) = default;
};

inline std::vector<Violation> validate_reaction_tuple(const ReactionTuple& t,
                                                      const PreChemGraph& c,
                                                      const PreChemGraph& e) {
    std::vector<Violation> out;
    for (const auto& [side, g] : {std::pair{&t.u_c, &c}, std::pair{&t.u_e, &e}}) {
        for (const auto& x : *side)
            if (!g->has_vertex(x)) out.push_back({"DanglingName", "unknown vertex " + x});
        if (!out.empty()) return out;
        auto v = check_chemical_subgraph(*g, *side);
        if (!v.ok) out.push_back({"NotChemicalSubgraph", v.reason});
    }
    int charge = 0;
    for (const auto& x : t.u_c)
        charge += c.label(x).kind == VertexKind::Plus ? 1
                  : c.label(x).kind == VertexKind::Minus ? -1 : 0;
    for (const auto& x : t.u_e)
        charge -= e.label(x).kind == VertexKind::Plus ? 1
                  : e.label(x).kind == VertexKind::Minus ? -1 : 0;
    if (charge != 0) out.push_back({"ChargeMismatch", "subgraph net charges differ"});

    auto nc = neutral_members(c, t.u_c);
    auto ne = neutral_members(e, t.u_e);
    std::set<std::string> hit;
    bool b_ok = t.b.size() == nc.size() && nc.size() == ne.size();
    for (const auto& [x, y] : t.b) {
        if (!b_ok) break;
        b_ok = nc.count(x) && ne.count(y) && hit.insert(y).second &&
               c.label(x) == e.label(y);
    }
    if (!b_ok) out.push_back({"BadBijection", "core map is not a labelled bijection"});

    std::set<std::string> rc, re;
    for (const auto& [v, l] : c.vertices) {
        (void)l;
        if (!t.u_c.count(v)) rc.insert(v);
    }
    for (const auto& [v, l] : e.vertices) {
        (void)l;
        if (!t.u_e.count(v)) re.insert(v);
    }
    bool i_ok = t.i.size() == rc.size() && rc.size() == re.size();
    std::set<std::string> ihit;
    for (const auto& [x, y] : t.i) {
        if (!i_ok) break;
        i_ok = rc.count(x) && re.count(y) && ihit.insert(y).second && c.label(x) == e.label(y);
    }
    if (i_ok)
        for (const auto& x : rc) {
            if (!i_ok) break;
            for (const auto& y : rc) {
                if (x >= y) continue;
                if (e.edge(t.i.at(x), t.i.at(y)) != c.edge(x, y)) {
                    i_ok = false;
                    break;
                }
            }
        }
    if (!i_ok) out.push_back({"BadContextIso", "remainder map is not an isomorphism"});
    return out;
}

inline ReactionTuple reaction_from_dpo(const DpoResult& d) {
    ReactionTuple t;
    t.u_c = d.image_chem;
    // neutral image vertices survive under their own names; charge images
    // are the removed part and never reach the result
    for (const auto& x : d.image_chem) {
        if (!d.result.graph.has_vertex(x)) continue;
        t.u_e.insert(x);
        t.b[x] = x;
    }
    for (const auto& [q, name] : d.charge_names) {
        (void)q;
        t.u_e.insert(name);
    }
    for (const auto& [v, l] : d.result.graph.vertices) {
        (void)l;
        if (!t.u_e.count(v) && !t.u_c.count(v)) t.i[v] = v;
    }
    return t;
}

struct ReactionDpo {
    ReactionScheme scheme;
    VertexMap match_left;   // scheme source into the reactant graph
    VertexMap match_right;  // scheme target into the product graph
};

inline ReactionDpo reaction_to_dpo(const ReactionTuple& t, const OrientedGraph& c,
                                   const OrientedGraph& e) {
    {
        auto vs = validate_reaction_tuple(t, c.graph, e.graph);
        if (!vs.empty()) fail(vs.front().code.c_str(), vs.front().detail);
    }
    // one alpha stub per unit of covalent order crossing the boundary
    auto augment = [](const PreChemGraph& g, const std::set<std::string>& u) {
        PreChemGraph out;
        VertexMap anchor_of;                                        // stub -> outside vertex
        std::map<std::string, std::vector<std::string>> by_outside; // outside vertex -> stubs
        for (const auto& x : u) out.add_vertex(x, g.label(x));
        for (const auto& x : u) {
            for (const auto& [y, lab] : g.neighbors(x)) {
                if (u.count(y)) {
                    if (x < y) out.add_edge(x, y, lab);
                    continue;
                }
                for (int j = 1; j <= lab.cov(); ++j) {
                    std::string stub = "~" + y + "^" + x + "_" + std::to_string(j);
                    out.add_vertex(stub, VertexLabel::alpha());
                    out.add_edge(x, stub, EdgeLabel::cov(1));
                    anchor_of[stub] = y;
                    by_outside[y].push_back(stub);
                }
            }
        }
        return std::tuple{out, anchor_of, by_outside};
    };
    auto [ua, ua_anchor, ua_out] = augment(c.graph, t.u_c);
    auto [ue, ue_anchor, ue_out] = augment(e.graph, t.u_e);
    for (const auto* side : {&ua, &ue}) {
        auto vs = validate_chemical(*side);
        if (!vs.empty())
            fail("NotChemicalSubgraph", "augmented subgraph is not chemical: " + vs.front().detail);
    }
    VertexMap ba = t.b;
    for (const auto& [v, stubs] : ua_out) {
        auto it = ue_out.find(t.i.at(v));
        std::size_t n = it == ue_out.end() ? 0 : it->second.size();
        if (n != stubs.size())
            fail("InvariantViolation", "boundary degrees disagree at " + v);
        for (std::size_t k = 0; k < n; ++k) ba[stubs[k]] = it->second[k];
    }
    ReactionDpo out{ReactionScheme::make(std::move(ua), std::move(ue), std::move(ba)), {}, {}};
    for (const auto& x : t.u_c) out.match_left[x] = x;
    for (const auto& [stub, y] : ua_anchor) out.match_left[stub] = y;
    for (const auto& x : t.u_e) out.match_right[x] = x;
    for (const auto& [stub, y] : ue_anchor) out.match_right[stub] = y;
    for (const auto& [f, side, tgt] :
         {std::tuple{&out.match_left, &out.scheme.left, &c},
          std::tuple{&out.match_right, &out.scheme.right, &e}}) {
        auto v = check_matching(*f, *side, *tgt);
        if (!v.ok) fail("InvariantViolation", "reconstructed map is not a matching: " + v.reason);
    }
    return out;
}

// --------------------------------------------------------- category React

inline ReactionTuple reaction_identity(const PreChemGraph& a) {
    ReactionTuple t;
    for (const auto& [v, l] : a.vertices) {
        (void)l;
        t.i[v] = v;
    }
    return t;
}

inline ReactionTuple compose_reactions(const ReactionTuple& r, const ReactionTuple& s,
                                       const PreChemGraph& a, const PreChemGraph& b,
                                       const PreChemGraph& c) {
    for (const auto& [tuple, src, dst] : {std::tuple{&r, &a, &b}, std::tuple{&s, &b, &c}}) {
        auto vs = validate_reaction_tuple(*tuple, *src, *dst);
        if (!vs.empty()) fail("BoundaryMismatch", vs.front().detail);
    }
    ReactionTuple out;
    out.u_c = r.u_c;
    for (const auto& [x, y] : r.i)
        if (s.u_c.count(y)) out.u_c.insert(x);
    out.u_e = s.u_e;
    for (const auto& [y, z] : s.i)
        if (r.u_e.count(y)) out.u_e.insert(z);
    for (const auto& x : neutral_members(a, out.u_c)) {
        std::string y = r.u_c.count(x) ? r.b.at(x) : r.i.at(x);
        out.b[x] = s.u_c.count(y) ? s.b.at(y) : s.i.at(y);
    }
    for (const auto& [v, l] : a.vertices) {
        (void)l;
        if (!out.u_c.count(v)) out.i[v] = s.i.at(r.i.at(v));
    }
    auto vs = validate_reaction_tuple(out, a, c);
    if (!vs.empty()) fail("InvariantViolation", "composite tuple invalid: " + vs.front().detail);
    return out;
}

// Extends a reaction to a larger context: the added vertices ride along
// untouched on both sides.
inline ReactionTuple extend_reaction(const ReactionTuple& t, const std::set<std::string>& extra) {
    ReactionTuple out = t;
    for (const auto& v : extra) {
        if (out.i.count(v) || out.u_c.count(v) || out.u_e.count(v))
            fail("RepeatedElement", "context extension collides at " + v);
        out.i[v] = v;
    }
    return out;
}

}  // namespace retrograph
