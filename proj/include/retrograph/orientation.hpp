#pragma once

// Triangle and tetrahedron relations, oriented graphs, and the chirality
// decision procedure (reflecting-but-not-preserving isomorphisms).

#include <retrograph/chemgraph.hpp>

#include <array>
#include <set>

namespace retrograph {

using Triple = std::array<std::string, 3>;
using Quad = std::array<std::string, 4>;

namespace detail {

inline bool distinct(const Triple& t) {
    return t[0] != t[1] && t[0] != t[2] && t[1] != t[2];
}
inline bool distinct(const Quad& q) {
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (q[i] == q[j]) return false;
    return true;
}

// The twelve even position-permutations of a quadruple.
inline const std::vector<std::array<int, 4>>& even_perms4() {
    static const std::vector<std::array<int, 4>> ps = [] {
        std::vector<std::array<int, 4>> out;
        std::array<int, 4> p{0, 1, 2, 3};
        do {
            int inv = 0;
            for (int i = 0; i < 4; ++i)
                for (int j = i + 1; j < 4; ++j)
                    if (p[i] > p[j]) ++inv;
            if (inv % 2 == 0) out.push_back(p);
        } while (std::next_permutation(p.begin(), p.end()));
        return out;
    }();
    return ps;
}

}  // namespace detail

// Unordered triples: membership is invariant under all six orderings.
class TriangleRel {
public:
    void insert(Triple t) {
        if (!detail::distinct(t)) fail("RepeatedElement", "triple has a repeated vertex");
        std::sort(t.begin(), t.end());
        triples_.insert(std::move(t));
    }

    bool contains(Triple t) const {
        if (!detail::distinct(t)) return false;
        std::sort(t.begin(), t.end());
        return triples_.count(t) != 0;
    }

    std::size_t size() const { return triples_.size(); }          // orbit count
    std::size_t closed_size() const { return triples_.size() * 6; }
    bool empty() const { return triples_.empty(); }
    const std::set<Triple>& orbits() const { return triples_; }

    TriangleRel mapped(const VertexMap& f) const {
        TriangleRel out;
        for (const auto& t : triples_) out.insert({f.at(t[0]), f.at(t[1]), f.at(t[2])});
        return out;
    }

    friend bool operator==(const TriangleRel&, const TriangleRel&) = default;

private:
    std::set<Triple> triples_;
};

// Ordered quadruples up to even permutation; one orbit is stored as its
// lexicographically least even rearrangement.
class TetrahedronRel {
public:
    static Quad canonical(const Quad& q) {
        Quad best = q;
        for (const auto& p : detail::even_perms4()) {
            Quad cand{q[p[0]], q[p[1]], q[p[2]], q[p[3]]};
            if (cand < best) best = cand;
        }
        return best;
    }

    void insert(const Quad& q) {
        if (!detail::distinct(q)) fail("RepeatedElement", "quadruple has a repeated vertex");
        reps_.insert(canonical(q));
    }

    bool contains(const Quad& q) const {
        if (!detail::distinct(q)) return false;
        return reps_.count(canonical(q)) != 0;
    }

    std::size_t size() const { return reps_.size(); }  // orbit count
    std::size_t closed_size() const { return reps_.size() * 12; }
    bool empty() const { return reps_.empty(); }
    const std::set<Quad>& orbits() const { return reps_; }

    TetrahedronRel mapped(const VertexMap& f) const {
        TetrahedronRel out;
        for (const auto& q : reps_) out.insert({f.at(q[0]), f.at(q[1]), f.at(q[2]), f.at(q[3])});
        return out;
    }

    friend bool operator==(const TetrahedronRel&, const TetrahedronRel&) = default;

private:
    std::set<Quad> reps_;
};

struct OrientedGraph {
    PreChemGraph graph;
    TriangleRel p;
    TetrahedronRel t;

    OrientedGraph() = default;
    OrientedGraph(PreChemGraph g) : graph(std::move(g)) {}
    OrientedGraph(PreChemGraph g, TriangleRel pp, TetrahedronRel tt)
        : graph(std::move(g)), p(std::move(pp)), t(std::move(tt)) {}

    bool oriented() const { return !p.empty() || !t.empty(); }
};

// S3-closure of the triple generators plus all 3-subsets of each quadruple;
// A4-closure of the quadruple generators.
inline std::pair<TriangleRel, TetrahedronRel> close_relations(const std::vector<Triple>& p_gen,
                                                              const std::vector<Quad>& t_gen) {
    TriangleRel p;
    TetrahedronRel t;
    for (const auto& g : p_gen) p.insert(g);
    for (const auto& g : t_gen) {
        t.insert(g);
        p.insert({g[0], g[1], g[2]});
        p.insert({g[0], g[1], g[3]});
        p.insert({g[0], g[2], g[3]});
        p.insert({g[1], g[2], g[3]});
    }
    return {std::move(p), std::move(t)};
}

inline std::vector<Violation> validate_oriented(const OrientedGraph& m) {
    std::vector<Violation> out;
    auto neu = m.graph.neutral_set();
    auto check_vertex = [&](const std::string& v, const char* where) {
        if (!m.graph.has_vertex(v))
            out.push_back({"DanglingName", std::string(where) + " names missing vertex " + v});
        else if (!neu.count(v))
            out.push_back({"TripleCharged", std::string(where) + " contains charge vertex " + v});
    };
    for (const auto& t : m.p.orbits()) {
        int alphas = 0;
        for (const auto& v : t) {
            check_vertex(v, "triangle relation");
            if (m.graph.has_vertex(v) && m.graph.label(v).is_alpha()) ++alphas;
        }
        if (alphas > 1)
            out.push_back({"TripleAlpha", "triple " + t[0] + "," + t[1] + "," + t[2] +
                                              " has more than one alpha vertex"});
    }
    for (const auto& q : m.t.orbits()) {
        for (const auto& v : q) check_vertex(v, "tetrahedron relation");
        for (const Triple& sub : {Triple{q[0], q[1], q[2]}, Triple{q[0], q[1], q[3]},
                                  Triple{q[0], q[2], q[3]}, Triple{q[1], q[2], q[3]}})
            if (!m.p.contains(sub))
                out.push_back({"ProjectionFailure", "quadruple " + q[0] + "," + q[1] + "," + q[2] +
                                                        "," + q[3] + " lacks its triangle " +
                                                        sub[0] + "," + sub[1] + "," + sub[2]});
    }
    return out;
}

inline OrientedGraph make_oriented(PreChemGraph g, const std::vector<Triple>& p_gen,
                                   const std::vector<Quad>& t_gen) {
    auto [p, t] = close_relations(p_gen, t_gen);
    OrientedGraph m{std::move(g), std::move(p), std::move(t)};
    auto vs = validate_oriented(m);
    if (!vs.empty()) fail(vs.front().code.c_str(), vs.front().detail);
    return m;
}

enum class OrientationClass { Preserving, Reflecting, Both, Neither };

inline const char* to_string(OrientationClass c) {
    switch (c) {
        case OrientationClass::Preserving: return "preserving";
        case OrientationClass::Reflecting: return "reflecting";
        case OrientationClass::Both: return "both";
        case OrientationClass::Neither: return "neither";
    }
    return "?";
}

inline bool is_labelled_isomorphism(const VertexMap& f, const PreChemGraph& a,
                                    const PreChemGraph& b) {
    if (f.size() != a.vertices.size() || a.vertices.size() != b.vertices.size()) return false;
    std::set<std::string> image;
    for (const auto& [v, w] : f) {
        if (!a.has_vertex(v) || !b.has_vertex(w)) return false;
        if (a.label(v) != b.label(w)) return false;
        image.insert(w);
    }
    if (image.size() != f.size()) return false;
    for (const auto& [v1, l1] : a.vertices)
        for (const auto& [v2, l2] : a.vertices) {
            if (v2 <= v1) continue;
            if (a.edge(v1, v2) != b.edge(f.at(v1), f.at(v2))) return false;
        }
    return true;
}

// Classifies a labelled isomorphism against the two biconditionals: preserving
// compares T_M(ABCD) with T_N(fA,fB,fC,fD), reflecting with T_N(fD,fA,fB,fC).
// Since f is bijective, forward inclusion plus equal orbit counts decides each.
inline OrientationClass check_orientation_map(const VertexMap& f, const OrientedGraph& m,
                                              const OrientedGraph& n) {
    if (!is_labelled_isomorphism(f, m.graph, n.graph))
        fail("NotIsomorphism", "map is not a labelled graph isomorphism");
    bool p_ok = m.p.size() == n.p.size();
    for (const auto& t : m.p.orbits()) {
        if (!p_ok) break;
        p_ok = n.p.contains({f.at(t[0]), f.at(t[1]), f.at(t[2])});
    }
    bool pres = p_ok && m.t.size() == n.t.size();
    bool refl = pres;
    for (const auto& q : m.t.orbits()) {
        if (!pres && !refl) break;
        Quad fq{f.at(q[0]), f.at(q[1]), f.at(q[2]), f.at(q[3])};
        if (pres) pres = n.t.contains(fq);
        if (refl) refl = n.t.contains({fq[3], fq[0], fq[1], fq[2]});
    }
    if (pres && refl) return OrientationClass::Both;
    if (pres) return OrientationClass::Preserving;
    if (refl) return OrientationClass::Reflecting;
    return OrientationClass::Neither;
}

struct ChiralityResult {
    bool chiral = false;
    bool isomorphic = false;
    std::optional<VertexMap> reflecting;  // first reflecting iso, if any
    std::optional<VertexMap> preserving;  // first preserving iso, if any
};

// Chiral: some labelled isomorphism reflects orientation and none preserves
// it. Every isomorphism is enumerated and classified.
inline ChiralityResult are_chiral(const OrientedGraph& m, const OrientedGraph& n,
                                  unsigned jobs = 1) {
    ChiralityResult r;
    for (const auto& f : enumerate_isomorphisms(m.graph, n.graph, 0, jobs)) {
        r.isomorphic = true;
        auto c = check_orientation_map(f, m, n);
        if ((c == OrientationClass::Reflecting || c == OrientationClass::Both) && !r.reflecting)
            r.reflecting = f;
        if ((c == OrientationClass::Preserving || c == OrientationClass::Both) && !r.preserving)
            r.preserving = f;
    }
    r.chiral = r.reflecting.has_value() && !r.preserving.has_value();
    return r;
}

}  // namespace retrograph
