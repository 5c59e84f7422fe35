#pragma once

// Pre-chemical and chemical graphs: vertex/edge labels, the valence table,
// validation, classification, assembly, and labelled-graph isomorphism.

#include <algorithm>
#include <cstdint>
#include <future>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace retrograph {

// Every failure carries a stable machine-readable code next to the message.
class RgError : public std::runtime_error {
public:
    RgError(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

[[noreturn]] inline void fail(const char* code, const std::string& msg) {
    throw RgError(code, msg);
}

enum class VertexKind : std::uint8_t { Atom, Plus, Minus, Alpha };

struct VertexLabel {
    VertexKind kind = VertexKind::Alpha;
    std::string symbol;  // element symbol, empty unless kind == Atom

    static VertexLabel atom(std::string sym) {
        if (sym.empty()) fail("SchemaError", "empty element symbol");
        return VertexLabel{VertexKind::Atom, std::move(sym)};
    }
    static VertexLabel plus() { return VertexLabel{VertexKind::Plus, {}}; }
    static VertexLabel minus() { return VertexLabel{VertexKind::Minus, {}}; }
    static VertexLabel alpha() { return VertexLabel{VertexKind::Alpha, {}}; }

    bool is_atom() const { return kind == VertexKind::Atom; }
    bool is_charge() const { return kind == VertexKind::Plus || kind == VertexKind::Minus; }
    bool is_alpha() const { return kind == VertexKind::Alpha; }

    std::string str() const {
        switch (kind) {
            case VertexKind::Atom: return symbol;
            case VertexKind::Plus: return "+";
            case VertexKind::Minus: return "-";
            case VertexKind::Alpha: return "*";
        }
        return "?";
    }

    friend bool operator==(const VertexLabel&, const VertexLabel&) = default;
    friend auto operator<=>(const VertexLabel&, const VertexLabel&) = default;
};

// Edge alphabet {0,1,2,3,4,ib}. Cov(0) is "no edge" and is never stored.
class EdgeLabel {
public:
    EdgeLabel() = default;
    static EdgeLabel cov(int n) {
        if (n < 0 || n > 4) fail("SchemaError", "covalent order out of range: " + std::to_string(n));
        EdgeLabel e;
        e.order_ = static_cast<std::uint8_t>(n);
        return e;
    }
    static EdgeLabel ionic() {
        EdgeLabel e;
        e.ionic_ = true;
        return e;
    }

    int cov() const { return ionic_ ? 0 : order_; }
    int ion() const { return ionic_ ? 1 : 0; }
    bool is_ionic() const { return ionic_; }
    bool is_zero() const { return !ionic_ && order_ == 0; }

    std::string str() const { return ionic_ ? "ib" : std::to_string(order_); }

    friend bool operator==(const EdgeLabel&, const EdgeLabel&) = default;
    friend auto operator<=>(const EdgeLabel&, const EdgeLabel&) = default;

private:
    std::uint8_t order_ = 0;
    bool ionic_ = false;
};

using NamePair = std::pair<std::string, std::string>;

inline NamePair norm_pair(std::string a, std::string b) {
    if (b < a) std::swap(a, b);
    return {std::move(a), std::move(b)};
}

using VertexMap = std::map<std::string, std::string>;

inline VertexMap invert_bijection(const VertexMap& f) {
    VertexMap inv;
    for (const auto& [k, v] : f)
        if (!inv.emplace(v, k).second) fail("InvariantViolation", "map is not injective at " + v);
    return inv;
}

// Valences: atom entries from the element table, every +/-/alpha counts 1.
class ValenceTable {
public:
    ValenceTable() = default;

    static ValenceTable builtin() {
        ValenceTable t;
        auto put = [&](std::initializer_list<const char*> syms, int v) {
            for (const char* s : syms) t.units_[s] = v;
        };
        put({"H", "Li", "Na", "K", "Rb", "Cs", "Fr"}, 1);
        put({"Be", "Mg", "Ca", "Sr", "Ba", "Ra"}, 2);
        put({"B", "Al", "Ga", "In", "Tl"}, 3);
        put({"C", "Si", "Ge", "Sn", "Pb"}, 4);
        put({"N", "As", "Sb", "Bi"}, 3);
        put({"P"}, 5);
        put({"O", "Se", "Te", "Po"}, 2);
        put({"S"}, 6);
        put({"F", "Cl", "Br", "I", "At"}, 1);
        return t;
    }

    // Process-wide table; the CLI/test entry points may overlay it from a file.
    static ValenceTable& active() {
        static ValenceTable t = builtin();
        return t;
    }

    void set(const std::string& symbol, int units) {
        if (units <= 0) fail("ConfigInvalid", "valence for " + symbol + " must be positive");
        units_[symbol] = units;
    }
    bool has(const std::string& symbol) const { return units_.count(symbol) != 0; }

    int operator()(const VertexLabel& l) const {
        if (!l.is_atom()) return 1;
        auto it = units_.find(l.symbol);
        if (it == units_.end()) fail("SchemaError", "unknown element symbol: " + l.symbol);
        return it->second;
    }

private:
    std::map<std::string, int> units_;
};

struct PreChemGraph {
    std::map<std::string, VertexLabel> vertices;
    std::map<NamePair, EdgeLabel> edges;  // normalized pairs; never Cov(0), never loops

    bool has_vertex(const std::string& v) const { return vertices.count(v) != 0; }

    const VertexLabel& label(const std::string& v) const {
        auto it = vertices.find(v);
        if (it == vertices.end()) fail("DanglingName", "no vertex named " + v);
        return it->second;
    }

    void add_vertex(const std::string& v, VertexLabel l) {
        if (!vertices.emplace(v, std::move(l)).second)
            fail("RepeatedElement", "vertex " + v + " already present");
    }

    EdgeLabel edge(const std::string& u, const std::string& v) const {
        if (!has_vertex(u)) fail("DanglingName", "no vertex named " + u);
        if (!has_vertex(v)) fail("DanglingName", "no vertex named " + v);
        if (u == v) return EdgeLabel::cov(0);
        auto it = edges.find(norm_pair(u, v));
        return it == edges.end() ? EdgeLabel::cov(0) : it->second;
    }

    void set_edge(const std::string& u, const std::string& v, EdgeLabel l) {
        if (!has_vertex(u)) fail("DanglingName", "no vertex named " + u);
        if (!has_vertex(v)) fail("DanglingName", "no vertex named " + v);
        if (u == v) fail("SchemaError", "loop edge at " + u);
        auto key = norm_pair(u, v);
        if (l.is_zero())
            edges.erase(key);
        else
            edges[key] = l;
    }

    void add_edge(const std::string& u, const std::string& v, EdgeLabel l) {
        if (!edge(u, v).is_zero()) fail("RepeatedElement", "edge " + u + "," + v + " already present");
        set_edge(u, v, l);
    }

    void erase_vertex(const std::string& v) {
        if (!has_vertex(v)) fail("DanglingName", "no vertex named " + v);
        vertices.erase(v);
        for (auto it = edges.begin(); it != edges.end();)
            it = (it->first.first == v || it->first.second == v) ? edges.erase(it) : std::next(it);
    }

    std::vector<std::string> vertex_names() const {
        std::vector<std::string> out;
        out.reserve(vertices.size());
        for (const auto& [n, l] : vertices) out.push_back(n);
        return out;
    }

    std::set<std::string> alpha_set() const {
        std::set<std::string> s;
        for (const auto& [n, l] : vertices)
            if (l.is_alpha()) s.insert(n);
        return s;
    }
    std::set<std::string> chem_set() const {  // V minus alpha
        std::set<std::string> s;
        for (const auto& [n, l] : vertices)
            if (!l.is_alpha()) s.insert(n);
        return s;
    }
    std::set<std::string> charge_set() const {
        std::set<std::string> s;
        for (const auto& [n, l] : vertices)
            if (l.is_charge()) s.insert(n);
        return s;
    }
    std::set<std::string> neutral_set() const {  // V minus charges (atoms and alphas)
        std::set<std::string> s;
        for (const auto& [n, l] : vertices)
            if (!l.is_charge()) s.insert(n);
        return s;
    }
    std::set<std::string> atom_set() const {
        std::set<std::string> s;
        for (const auto& [n, l] : vertices)
            if (l.is_atom()) s.insert(n);
        return s;
    }

    std::vector<std::pair<std::string, EdgeLabel>> neighbors(const std::string& v) const {
        std::vector<std::pair<std::string, EdgeLabel>> out;
        for (const auto& [p, l] : edges) {
            if (p.first == v) out.emplace_back(p.second, l);
            else if (p.second == v) out.emplace_back(p.first, l);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    int cov_degree(const std::string& v) const {
        int d = 0;
        for (const auto& [p, l] : edges)
            if (p.first == v || p.second == v) d += l.cov();
        return d;
    }

    std::vector<std::string> covalent_neighbors(const std::string& v) const {
        std::vector<std::string> out;
        for (const auto& [n, l] : neighbors(v))
            if (l.cov() > 0) out.push_back(n);
        return out;
    }

    std::vector<std::string> ionic_partners(const std::string& v) const {
        std::vector<std::string> out;
        for (const auto& [n, l] : neighbors(v))
            if (l.is_ionic()) out.push_back(n);
        return out;
    }

    // The single neighbor joined by a Cov(1) edge, when there is exactly one.
    std::optional<std::string> unique_single_neighbor(const std::string& v) const {
        std::optional<std::string> found;
        for (const auto& [n, l] : neighbors(v)) {
            if (l.cov() != 1) continue;
            if (found) return std::nullopt;
            found = n;
        }
        return found;
    }

    friend bool operator==(const PreChemGraph&, const PreChemGraph&) = default;
};

inline int net_charge(const PreChemGraph& g) {
    int c = 0;
    for (const auto& [n, l] : g.vertices) {
        if (l.kind == VertexKind::Plus) ++c;
        if (l.kind == VertexKind::Minus) --c;
    }
    return c;
}

inline std::vector<std::set<std::string>> components(const PreChemGraph& g) {
    std::map<std::string, int> comp;
    int k = 0;
    for (const auto& [n, l] : g.vertices) {
        if (comp.count(n)) continue;
        std::vector<std::string> stack{n};
        comp[n] = k;
        while (!stack.empty()) {
            std::string v = stack.back();
            stack.pop_back();
            for (const auto& [w, el] : g.neighbors(v)) {
                (void)el;
                if (!comp.count(w)) {
                    comp[w] = k;
                    stack.push_back(w);
                }
            }
        }
        ++k;
    }
    std::vector<std::set<std::string>> out(k);
    for (const auto& [n, i] : comp) out[i].insert(n);
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return *a.begin() < *b.begin(); });
    return out;
}

inline bool is_connected(const PreChemGraph& g) { return components(g).size() == 1; }

inline PreChemGraph induced_subgraph(const PreChemGraph& g, const std::set<std::string>& names) {
    PreChemGraph out;
    for (const auto& n : names) out.add_vertex(n, g.label(n));
    for (const auto& [p, l] : g.edges)
        if (names.count(p.first) && names.count(p.second)) out.edges[p] = l;
    return out;
}

struct Violation {
    std::string code;
    std::string detail;
};

// The four conditions a pre-chemical graph must satisfy to be chemical.
inline std::vector<Violation> validate_chemical(const PreChemGraph& g,
                                                const ValenceTable& vt = ValenceTable::active()) {
    std::vector<Violation> out;
    for (const auto& [v, l] : g.vertices) {
        if (l.is_atom() && !vt.has(l.symbol)) {
            out.push_back({"UnknownElement", v + " has symbol " + l.symbol});
            continue;
        }
        int want = vt(l);
        int have = g.cov_degree(v);
        if (have != want)
            out.push_back({"Valence", v + " (" + l.str() + ") has covalent degree " +
                                          std::to_string(have) + ", needs " + std::to_string(want)});
    }
    for (const auto& [p, l] : g.edges) {
        const auto& lu = g.label(p.first);
        const auto& lv = g.label(p.second);
        if (l.cov() == 1) {
            if (lu.is_alpha() && !(lv.is_atom() || lv.kind == VertexKind::Minus))
                out.push_back({"AlphaBond", p.first + " bonds to " + lv.str()});
            if (lv.is_alpha() && !(lu.is_atom() || lu.kind == VertexKind::Minus))
                out.push_back({"AlphaBond", p.second + " bonds to " + lu.str()});
            if (lu.is_charge() && !(lv.is_atom() || lv.is_alpha()))
                out.push_back({"ChargeBond", p.first + " bonds to " + lv.str()});
            if (lv.is_charge() && !(lu.is_atom() || lu.is_alpha()))
                out.push_back({"ChargeBond", p.second + " bonds to " + lu.str()});
        }
        if (l.is_ionic()) {
            bool opposite = (lu.kind == VertexKind::Plus && lv.kind == VertexKind::Minus) ||
                            (lu.kind == VertexKind::Minus && lv.kind == VertexKind::Plus);
            if (!opposite)
                out.push_back({"IonicEnds", p.first + "," + p.second + " is not a +/- pair"});
            else {
                for (const auto& end : {p.first, p.second})
                    for (const auto& n : g.covalent_neighbors(end))
                        if (!g.label(n).is_atom())
                            out.push_back({"IonicAnchor",
                                           end + " is ionically bound but attached to " + g.label(n).str()});
            }
        }
    }
    for (const auto& [v, l] : g.vertices)
        if (l.is_charge() && g.ionic_partners(v).size() > 1)
            out.push_back({"IonicUnique", v + " has " + std::to_string(g.ionic_partners(v).size()) +
                                              " ionic partners"});
    return out;
}

inline bool is_chemical(const PreChemGraph& g, const ValenceTable& vt = ValenceTable::active()) {
    return validate_chemical(g, vt).empty();
}

inline void require_chemical(const PreChemGraph& g, const std::string& context,
                             const ValenceTable& vt = ValenceTable::active()) {
    auto vs = validate_chemical(g, vt);
    if (!vs.empty())
        fail("InvariantViolation", context + ": " + vs.front().code + ": " + vs.front().detail);
}

enum class GraphClass { MolecularEntity, Synthon, MolecularGraph, General };

inline const char* to_string(GraphClass c) {
    switch (c) {
        case GraphClass::MolecularEntity: return "molecular-entity";
        case GraphClass::Synthon: return "synthon";
        case GraphClass::MolecularGraph: return "molecular-graph";
        case GraphClass::General: return "general";
    }
    return "?";
}

inline GraphClass classify(const PreChemGraph& g) {
    bool alpha_free = g.alpha_set().empty();
    bool conn = is_connected(g);
    if (conn && alpha_free) return GraphClass::MolecularEntity;
    if (conn) return GraphClass::Synthon;
    if (alpha_free) return GraphClass::MolecularGraph;
    return GraphClass::General;
}

inline bool is_molecular(const PreChemGraph& g) { return g.alpha_set().empty(); }

// Deterministic fresh names under the reserved "~" prefix.
class NameSupply {
public:
    std::string fresh() { return "~" + std::to_string(next_++); }

    void note(const std::string& name) {
        if (name.size() < 2 || name[0] != '~') return;
        std::uint64_t n = 0;
        for (std::size_t i = 1; i < name.size(); ++i) {
            if (name[i] < '0' || name[i] > '9') return;
            n = n * 10 + static_cast<std::uint64_t>(name[i] - '0');
        }
        if (n >= next_) next_ = n + 1;
    }

    static NameSupply above(const PreChemGraph& g) {
        NameSupply s;
        for (const auto& [n, l] : g.vertices) s.note(n);
        return s;
    }

private:
    std::uint64_t next_ = 1;
};

// Rename along a partial map (identity elsewhere); must stay injective.
inline PreChemGraph rename(const PreChemGraph& g, const VertexMap& f) {
    auto img = [&](const std::string& v) {
        auto it = f.find(v);
        return it == f.end() ? v : it->second;
    };
    PreChemGraph out;
    for (const auto& [n, l] : g.vertices) out.add_vertex(img(n), l);
    for (const auto& [p, l] : g.edges) out.edges[norm_pair(img(p.first), img(p.second))] = l;
    return out;
}

struct UnionResult {
    PreChemGraph graph;
    VertexMap left;   // injection of the first argument
    VertexMap right;  // injection of the second argument
};

// Disjoint union; the right copy is renamed where names collide.
inline UnionResult disjoint_union(const PreChemGraph& a, const PreChemGraph& b) {
    UnionResult r;
    r.graph = a;
    for (const auto& [n, l] : a.vertices) r.left[n] = n;
    NameSupply fresh = NameSupply::above(a);
    for (const auto& [n, l] : b.vertices) fresh.note(n);
    for (const auto& [n, l] : b.vertices) {
        std::string target = a.has_vertex(n) ? fresh.fresh() : n;
        r.right[n] = target;
        r.graph.add_vertex(target, l);
    }
    for (const auto& [p, l] : b.edges)
        r.graph.edges[norm_pair(r.right.at(p.first), r.right.at(p.second))] = l;
    return r;
}

struct AssemblyResult {
    PreChemGraph graph;
    // copies[i][j] maps entry i's vertex names into the j-th copy.
    std::vector<std::vector<VertexMap>> copies;
};

// n1*M1 + ... + nk*Mk with canonical copy names "~c{i}.{j}:{original}" for
// the j-th copy of entry i (both 1-based). first[i], when given, starts
// entry i's numbering there instead of at 1, so fresh copies can be adjoined
// to a graph that already holds earlier ones under the same scheme.
inline AssemblyResult assemble(const std::vector<std::pair<int, PreChemGraph>>& counts,
                               const std::vector<int>& first = {}) {
    AssemblyResult r;
    for (std::size_t e = 0; e < counts.size(); ++e) {
        const auto& [n, g] = counts[e];
        if (n < 0) fail("SchemaError", "negative multiplicity");
        int base = e < first.size() ? first[e] : 1;
        r.copies.emplace_back();
        for (int j = 0; j < n; ++j) {
            VertexMap f;
            std::string pre =
                "~c" + std::to_string(e + 1) + "." + std::to_string(base + j) + ":";
            for (const auto& [v, l] : g.vertices) f[v] = pre + v;
            PreChemGraph copy = rename(g, f);
            for (const auto& [v, l] : copy.vertices) r.graph.add_vertex(v, l);
            for (const auto& [p, l] : copy.edges) r.graph.edges[p] = l;
            r.copies.back().push_back(std::move(f));
        }
    }
    return r;
}

// Highest copy number "~c{i}.{j}:..." present in g, per 1-based entry index
// i up to arity. Names that merely resemble the scheme are ignored.
inline std::vector<int> copy_floors(const PreChemGraph& g, std::size_t arity) {
    std::vector<int> out(arity, 0);
    auto digits = [](const std::string& s, std::size_t& i) -> int {
        std::size_t start = i;
        int n = 0;
        while (i < s.size() && s[i] >= '0' && s[i] <= '9' && i - start < 9)
            n = n * 10 + (s[i++] - '0');
        return i > start && (i == s.size() || s[i] < '0' || s[i] > '9') ? n : -1;
    };
    for (const auto& [v, l] : g.vertices) {
        (void)l;
        if (v.size() < 6 || v[0] != '~' || v[1] != 'c') continue;
        std::size_t i = 2;
        int entry = digits(v, i);
        if (entry < 1 || i >= v.size() || v[i] != '.') continue;
        ++i;
        int no = digits(v, i);
        if (no < 1 || i >= v.size() || v[i] != ':') continue;
        if (static_cast<std::size_t>(entry) <= arity && no > out[entry - 1]) out[entry - 1] = no;
    }
    return out;
}

// Core graph plus environment copies; core names are kept verbatim.
inline AssemblyResult assemble_with(const PreChemGraph& core,
                                    const std::vector<std::pair<int, PreChemGraph>>& counts) {
    AssemblyResult r = assemble(counts);
    for (const auto& [v, l] : core.vertices) r.graph.add_vertex(v, l);
    for (const auto& [p, l] : core.edges) r.graph.edges[p] = l;
    return r;
}

namespace detail {

inline std::string degree_signature(const PreChemGraph& g, const std::string& v) {
    std::vector<std::string> parts;
    for (const auto& [w, l] : g.neighbors(v)) parts.push_back(l.str() + "|" + g.label(w).str());
    std::sort(parts.begin(), parts.end());
    std::string sig = g.label(v).str() + "#";
    for (const auto& p : parts) sig += p + ";";
    return sig;
}

struct IsoSearch {
    const PreChemGraph& a;
    const PreChemGraph& b;
    std::vector<std::string> order;                       // a's vertices, most constrained first
    std::map<std::string, std::vector<std::string>> cand; // signature-compatible b-vertices
    std::size_t limit = 0;                                // 0 = unbounded
    std::vector<VertexMap> found;

    bool consistent(const VertexMap& f, const VertexMap& used, const std::string& v,
                    const std::string& w) const {
        (void)used;
        for (const auto& [av, bv] : f)
            if (a.edge(v, av) != b.edge(w, bv)) return false;
        return true;
    }

    bool rec(std::size_t i, VertexMap& f, std::set<std::string>& used) {
        if (i == order.size()) {
            found.push_back(f);
            return limit != 0 && found.size() >= limit;
        }
        const std::string& v = order[i];
        for (const auto& w : cand.at(v)) {
            if (used.count(w)) continue;
            if (!consistent(f, {}, v, w)) continue;
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

inline std::optional<IsoSearch> prepare_iso(const PreChemGraph& a, const PreChemGraph& b) {
    if (a.vertices.size() != b.vertices.size() || a.edges.size() != b.edges.size())
        return std::nullopt;
    std::map<std::string, std::vector<std::string>> by_sig;
    for (const auto& [w, l] : b.vertices) by_sig[degree_signature(b, w)].push_back(w);
    IsoSearch s{a, b, {}, {}, 0, {}};
    for (const auto& [v, l] : a.vertices) {
        auto it = by_sig.find(degree_signature(a, v));
        if (it == by_sig.end()) return std::nullopt;
        s.cand[v] = it->second;
        s.order.push_back(v);
    }
    std::stable_sort(s.order.begin(), s.order.end(), [&](const auto& x, const auto& y) {
        return s.cand.at(x).size() < s.cand.at(y).size();
    });
    return s;
}

}  // namespace detail

inline std::optional<VertexMap> find_isomorphism(const PreChemGraph& a, const PreChemGraph& b) {
    auto s = detail::prepare_iso(a, b);
    if (!s) return std::nullopt;
    s->limit = 1;
    VertexMap f;
    std::set<std::string> used;
    s->rec(0, f, used);
    if (s->found.empty()) return std::nullopt;
    return s->found.front();
}

// All label- and edge-preserving bijections, in deterministic order. With
// jobs > 1 the branches under the first vertex run concurrently; results are
// concatenated in candidate order, so the output does not depend on timing.
inline std::vector<VertexMap> enumerate_isomorphisms(const PreChemGraph& a, const PreChemGraph& b,
                                                     std::size_t limit = 0, unsigned jobs = 1) {
    auto s = detail::prepare_iso(a, b);
    if (!s) return {};
    if (s->order.empty()) return {VertexMap{}};
    s->limit = limit;
    if (jobs <= 1 || s->cand.at(s->order.front()).size() <= 1) {
        VertexMap f;
        std::set<std::string> used;
        s->rec(0, f, used);
        return std::move(s->found);
    }
    const std::string root = s->order.front();
    std::vector<std::future<std::vector<VertexMap>>> parts;
    for (const auto& w : s->cand.at(root)) {
        parts.push_back(std::async(std::launch::async, [&, w]() {
            detail::IsoSearch local = *s;
            local.limit = limit;
            VertexMap f{{root, w}};
            std::set<std::string> used{w};
            if (!local.consistent(f, {}, root, w)) return std::vector<VertexMap>{};
            f[root] = w;
            local.rec(1, f, used);
            return std::move(local.found);
        }));
    }
    std::vector<VertexMap> out;
    for (auto& p : parts) {
        auto part = p.get();
        for (auto& f : part) {
            out.push_back(std::move(f));
            if (limit != 0 && out.size() >= limit) return out;
        }
    }
    return out;
}

inline bool is_isomorphic(const PreChemGraph& a, const PreChemGraph& b) {
    return find_isomorphism(a, b).has_value();
}

// Cheap isomorphism-invariant fingerprint used to prefilter iso searches.
inline std::string invariant_key(const PreChemGraph& g) {
    std::vector<std::string> sigs;
    for (const auto& [v, l] : g.vertices) sigs.push_back(detail::degree_signature(g, v));
    std::sort(sigs.begin(), sigs.end());
    std::string key = "n" + std::to_string(g.vertices.size()) + "e" +
                      std::to_string(g.edges.size()) + "c" + std::to_string(net_charge(g)) + ":";
    for (const auto& s : sigs) key += s + "&";
    return key;
}

inline std::string render_text(const PreChemGraph& g) {
    if (g.vertices.empty()) return "(empty)\n";
    std::ostringstream os;
    std::set<std::string> touched;
    for (const auto& [p, l] : g.edges) {
        touched.insert(p.first);
        touched.insert(p.second);
        std::string conn;
        if (l.is_ionic()) conn = "~~";
        else if (l.cov() == 1) conn = "-1-";
        else if (l.cov() == 2) conn = "=2=";
        else if (l.cov() == 3) conn = "≡3≡";
        else conn = "≣4≣";
        os << g.label(p.first).str() << " " << conn << " " << g.label(p.second).str() << "  ["
           << p.first << " " << p.second << "]\n";
    }
    for (const auto& [v, l] : g.vertices)
        if (!touched.count(v)) os << l.str() << "  [" << v << "]\n";
    return os.str();
}

}  // namespace retrograph
