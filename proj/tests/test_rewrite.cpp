#include <catch2/catch_amalgamated.hpp>

#include <retrograph/rewrite.hpp>

#include <algorithm>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "generators.hpp"

using namespace retrograph;
using rgtest::Rng;

namespace {

template <typename F>
std::string thrown_code(F&& fn) {
    try {
        fn();
    } catch (const RgError& e) {
        return e.code();
    }
    return "none";
}

bool has_code(const std::vector<Violation>& vs, const std::string& code) {
    return std::any_of(vs.begin(), vs.end(), [&](const Violation& v) { return v.code == code; });
}

// Odometer over every function dom -> cod.
template <typename CB>
void all_functions(const std::vector<std::string>& dom, const std::vector<std::string>& cod,
                   CB&& cb) {
    if (dom.empty()) {
        cb(VertexMap{});
        return;
    }
    if (cod.empty()) return;
    std::vector<std::size_t> idx(dom.size(), 0);
    for (;;) {
        VertexMap f;
        for (std::size_t i = 0; i < dom.size(); ++i) f[dom[i]] = cod[idx[i]];
        cb(f);
        std::size_t i = 0;
        while (i < idx.size() && ++idx[i] == cod.size()) idx[i++] = 0;
        if (i == idx.size()) break;
    }
}

std::vector<VertexMap> brute_matchings(const OrientedGraph& a, const OrientedGraph& c) {
    std::vector<VertexMap> out;
    all_functions(a.graph.vertex_names(), c.graph.vertex_names(), [&](const VertexMap& f) {
        if (is_matching(f, a, c)) out.push_back(f);
    });
    return out;
}

std::vector<VertexMap> all_morphisms(const OrientedGraph& a, const OrientedGraph& c) {
    std::vector<VertexMap> out;
    all_functions(a.graph.vertex_names(), c.graph.vertex_names(), [&](const VertexMap& f) {
        if (is_morphism(f, a, c)) out.push_back(f);
    });
    return out;
}

std::vector<VertexMap> sorted(std::vector<VertexMap> v) {
    std::sort(v.begin(), v.end());
    return v;
}

VertexMap identity_map(const PreChemGraph& g) {
    VertexMap f;
    for (const auto& [n, l] : g.vertices) {
        (void)l;
        f[n] = n;
    }
    return f;
}

VertexMap compose_maps(const VertexMap& f, const VertexMap& g) {  // g after f
    VertexMap out;
    for (const auto& [x, y] : f) out[x] = g.at(y);
    return out;
}

PreChemGraph alpha_to_h(PreChemGraph g) {
    for (auto& [n, l] : g.vertices) {
        (void)n;
        if (l.is_alpha()) l = VertexLabel::atom("H");
    }
    return g;
}

// ---- radical halogenation: C-Cl + C-H -> C-C + Cl-H, methyl stubs abstract

PreChemGraph chlorination_left() {
    PreChemGraph g;
    g.add_vertex("c", VertexLabel::atom("C"));
    g.add_vertex("cl", VertexLabel::atom("Cl"));
    g.add_vertex("c2", VertexLabel::atom("C"));
    g.add_vertex("h", VertexLabel::atom("H"));
    for (int i = 1; i <= 6; ++i) g.add_vertex("t" + std::to_string(i), VertexLabel::alpha());
    g.add_edge("c", "cl", EdgeLabel::cov(1));
    g.add_edge("c2", "h", EdgeLabel::cov(1));
    for (int i = 1; i <= 3; ++i) g.add_edge("c", "t" + std::to_string(i), EdgeLabel::cov(1));
    for (int i = 4; i <= 6; ++i) g.add_edge("c2", "t" + std::to_string(i), EdgeLabel::cov(1));
    return g;
}

PreChemGraph chlorination_right() {
    PreChemGraph g = chlorination_left();
    g.set_edge("c", "cl", EdgeLabel::cov(0));
    g.set_edge("c2", "h", EdgeLabel::cov(0));
    g.add_edge("c", "c2", EdgeLabel::cov(1));
    g.add_edge("cl", "h", EdgeLabel::cov(1));
    return g;
}

ReactionScheme chlorination_scheme() {
    return ReactionScheme::make(chlorination_left(), chlorination_right(),
                                identity_map(chlorination_left()));
}

PreChemGraph chlorination_host() {
    return disjoint_union(rgtest::chloromethane(), rgtest::methane("m")).graph;
}

VertexMap chlorination_match() {
    return {{"c", "c"},   {"cl", "cl"},  {"t1", "h1"},  {"t2", "h2"},  {"t3", "h3"},
            {"c2", "mc"}, {"h", "mh4"},  {"t4", "mh1"}, {"t5", "mh2"}, {"t6", "mh3"}};
}

PreChemGraph chlorination_product() {
    PreChemGraph g = chlorination_host();
    g.set_edge("c", "cl", EdgeLabel::cov(0));
    g.set_edge("mc", "mh4", EdgeLabel::cov(0));
    g.add_edge("c", "mc", EdgeLabel::cov(1));
    g.add_edge("cl", "mh4", EdgeLabel::cov(1));
    return g;
}

// ---- heterolysis of a single bond: X-Y -> X-(+) ... (-)-Y

PreChemGraph bond_left() {
    PreChemGraph g;
    g.add_vertex("h", VertexLabel::atom("H"));
    g.add_vertex("s", VertexLabel::alpha());
    g.add_edge("h", "s", EdgeLabel::cov(1));
    return g;
}

PreChemGraph ions_right() {
    PreChemGraph g = bond_left();
    g.set_edge("h", "s", EdgeLabel::cov(0));
    g.add_vertex("p", VertexLabel::plus());
    g.add_vertex("q", VertexLabel::minus());
    g.add_edge("h", "p", EdgeLabel::cov(1));
    g.add_edge("s", "q", EdgeLabel::cov(1));
    return g;
}

ReactionScheme heterolysis_scheme() {
    return ReactionScheme::make(bond_left(), ions_right(), {{"h", "h"}, {"s", "s"}});
}

PreChemGraph nacl_covalent() {
    PreChemGraph g;
    g.add_vertex("na", VertexLabel::atom("Na"));
    g.add_vertex("cl", VertexLabel::atom("Cl"));
    g.add_edge("na", "cl", EdgeLabel::cov(1));
    return g;
}

PreChemGraph co2() {
    PreChemGraph g;
    g.add_vertex("c", VertexLabel::atom("C"));
    g.add_vertex("o1", VertexLabel::atom("O"));
    g.add_vertex("o2", VertexLabel::atom("O"));
    g.add_edge("c", "o1", EdgeLabel::cov(2));
    g.add_edge("c", "o2", EdgeLabel::cov(2));
    return g;
}

PreChemGraph formyl_synthon() {  // O=C< with two stubs
    PreChemGraph g;
    g.add_vertex("c", VertexLabel::atom("C"));
    g.add_vertex("o", VertexLabel::atom("O"));
    g.add_vertex("s1", VertexLabel::alpha());
    g.add_vertex("s2", VertexLabel::alpha());
    g.add_edge("c", "o", EdgeLabel::cov(2));
    g.add_edge("c", "s1", EdgeLabel::cov(1));
    g.add_edge("c", "s2", EdgeLabel::cov(1));
    return g;
}

// Checks one commuting square for the pushout property against the given
// probe graphs: every cocone must factor through exactly one mediator.
void require_pushout_square(const OrientedGraph& k, const OrientedGraph& b,
                            const OrientedGraph& d, const OrientedGraph& e, const VertexMap& kb,
                            const VertexMap& kd, const VertexMap& be, const VertexMap& de,
                            const std::vector<OrientedGraph>& probes) {
    REQUIRE(is_morphism(kb, k, b));
    REQUIRE(is_morphism(kd, k, d));
    REQUIRE(is_morphism(be, b, e));
    REQUIRE(is_morphism(de, d, e));
    REQUIRE(compose_maps(kb, be) == compose_maps(kd, de));
    for (const auto& z : probes) {
        int cocones = 0;
        for (const auto& u : all_morphisms(b, z))
            for (const auto& w : all_morphisms(d, z)) {
                if (compose_maps(kb, u) != compose_maps(kd, w)) continue;
                ++cocones;
                int mediators = 0;
                all_functions(e.graph.vertex_names(), z.graph.vertex_names(),
                              [&](const VertexMap& th) {
                                  if (!is_morphism(th, e, z)) return;
                                  if (compose_maps(be, th) == u && compose_maps(de, th) == w)
                                      ++mediators;
                              });
                REQUIRE(mediators == 1);
            }
        REQUIRE(cocones >= 1);
    }
}

}  // namespace

TEST_CASE("morphism verdicts", "[rewrite]") {
    auto hh = rgtest::h2();
    REQUIRE(is_morphism(identity_map(hh), hh, hh));

    // dropping a nonzero edge between non-alpha vertices is not allowed
    auto w = rgtest::water();
    auto v = check_morphism({{"h1", "h1"}, {"h2", "h2"}}, hh, w);
    REQUIRE_FALSE(v.ok);
    REQUIRE(v.reason.find("edge") != std::string::npos);

    // partial map
    REQUIRE_FALSE(check_morphism({{"h1", "h1"}}, hh, hh).ok);
    // collapsing two non-alpha vertices
    REQUIRE_FALSE(check_morphism({{"h1", "h1"}, {"h2", "h1"}}, hh, hh).ok);
    // label change
    REQUIRE_FALSE(check_morphism({{"h1", "o"}, {"h2", "h1"}}, hh, w).ok);

    // an alpha vertex may land on an atom, not on a charge
    auto syn = rgtest::ch3_synthon();
    auto carb = rgtest::carbonate();
    REQUIRE_FALSE(
        check_morphism({{"c", "c"}, {"h1", "o1"}, {"h2", "o2"}, {"h3", "o3"}, {"s", "q2"}}, syn,
                       carb)
            .ok);

    // covalent sum rule: folding the stub onto an occupied hydrogen
    auto met = rgtest::methane();
    auto bad = check_morphism(
        {{"c", "c"}, {"h1", "h1"}, {"h2", "h2"}, {"h3", "h3"}, {"s", "h1"}}, syn, met);
    REQUIRE_FALSE(bad.ok);
    REQUIRE(bad.reason.find("sum") != std::string::npos);
}

TEST_CASE("matching is stricter than morphism", "[rewrite]") {
    // two loose hydrogens map into dihydrogen as a morphism, but the zero
    // edge between their images must stay zero for a matching
    PreChemGraph loose;
    loose.add_vertex("x", VertexLabel::atom("H"));
    loose.add_vertex("y", VertexLabel::atom("H"));
    auto hh = rgtest::h2();
    VertexMap f{{"x", "h1"}, {"y", "h2"}};
    REQUIRE(is_morphism(f, loose, hh));
    REQUIRE_FALSE(is_matching(f, loose, hh));

    // consequently two bond halves never match into the bonded molecule
    auto halves = disjoint_union(bond_left(), rename(bond_left(), {{"h", "h'"}, {"s", "s'"}}));
    REQUIRE(enumerate_matchings(halves.graph, hh).empty());
}

TEST_CASE("matching enumeration agrees with brute force", "[rewrite]") {
    struct Case {
        OrientedGraph a, c;
        std::size_t count;
    };
    auto ethene_o = make_oriented(rgtest::ethene(), {{"c1", "h11", "h12"}}, {});
    auto methane_o = make_oriented(rgtest::methane(), {}, {{"h1", "h2", "h3", "h4"}});
    std::vector<Case> cases;
    cases.push_back({rgtest::ch3_synthon(), rgtest::methane(), 24});
    cases.push_back({bond_left(), rgtest::h2(), 2});
    cases.push_back({formyl_synthon(), co2(), 2});
    cases.push_back({rgtest::sodium_chloride(), rgtest::sodium_chloride(), 1});
    cases.push_back({ethene_o, ethene_o, 4});
    cases.push_back({methane_o, methane_o, 12});
    for (const auto& kase : cases) {
        auto fast = enumerate_matchings(kase.a, kase.c);
        REQUIRE(fast.size() == kase.count);
        REQUIRE(sorted(fast) == sorted(brute_matchings(kase.a, kase.c)));
    }

    // orientation pruning at work: without the triangle the count doubles
    REQUIRE(enumerate_matchings(rgtest::ethene(), rgtest::ethene()).size() == 8);
    REQUIRE(enumerate_matchings(rgtest::methane(), rgtest::methane()).size() == 24);
}

TEST_CASE("matching enumeration is deterministic and bounded", "[rewrite]") {
    auto scheme = chlorination_scheme();
    auto host = chlorination_host();
    auto ms = enumerate_matchings(scheme.left, host);
    REQUIRE(ms.size() == 144);
    REQUIRE(std::find(ms.begin(), ms.end(), chlorination_match()) != ms.end());
    // image neighbourhoods equal mapped pattern neighbourhoods
    for (const auto& m : ms)
        for (const auto& v : scheme.left.graph.chem_set()) {
            std::set<std::string> want;
            for (const auto& x : scheme.left.graph.covalent_neighbors(v)) want.insert(m.at(x));
            std::set<std::string> got;
            for (const auto& x : host.covalent_neighbors(m.at(v))) got.insert(x);
            REQUIRE(want == got);
            REQUIRE(is_chemical_subgraph(host, [&] {
                std::set<std::string> img;
                for (const auto& u : scheme.left.graph.chem_set()) img.insert(m.at(u));
                return img;
            }()));
        }
    REQUIRE(enumerate_matchings(scheme.left, host) == ms);
    REQUIRE(enumerate_matchings(scheme.left, host, 0, 4) == ms);
    auto first = enumerate_matchings(scheme.left, host, 10);
    REQUIRE(first.size() == 10);
    REQUIRE(std::equal(first.begin(), first.end(), ms.begin()));
}

TEST_CASE("intersection along a bijection keeps only agreements", "[rewrite]") {
    // two loose bond halves against a bonded pair with two loose stubs:
    // nothing agrees, so everything goes quiet
    PreChemGraph a;
    a.add_vertex("h1", VertexLabel::atom("H"));
    a.add_vertex("h2", VertexLabel::atom("H"));
    a.add_vertex("s1", VertexLabel::alpha());
    a.add_vertex("s2", VertexLabel::alpha());
    a.add_edge("h1", "s1", EdgeLabel::cov(1));
    a.add_edge("h2", "s2", EdgeLabel::cov(1));
    PreChemGraph c;
    for (const auto& [n, l] : a.vertices) c.add_vertex(n, l);
    c.add_edge("h1", "h2", EdgeLabel::cov(1));
    c.add_edge("s1", "s2", EdgeLabel::cov(1));

    auto k = intersection_along_bijection(a, c, identity_map(a));
    REQUIRE(k.graph.vertices.size() == 4);
    REQUIRE(k.graph.edges.empty());
    REQUIRE_FALSE(is_chemical(k.graph));

    REQUIRE(thrown_code([&] { intersection_along_bijection(a, c, VertexMap{}); }) ==
            "DanglingName");
}

TEST_CASE("scheme construction and span round trip", "[rewrite]") {
    auto s = chlorination_scheme();
    REQUIRE(check_scheme(s.left, s.right, s.bij).ok);

    auto span = scheme_to_span(s);
    REQUIRE(span.apex.graph.vertices.size() == 10);
    REQUIRE(span.apex.graph.edges.size() == 6);  // the six stub anchors survive
    REQUIRE(span.apex.graph.edge("c", "cl").is_zero());
    REQUIRE(span.apex.graph.edge("c", "t1") == EdgeLabel::cov(1));

    auto back = scheme_from_span(s.left, span.apex, s.right, span.to_left, span.to_right);
    REQUIRE(back.bij == s.bij);

    // a spanning but smaller apex is rejected: the span must be terminal
    auto smaller = span.apex;
    smaller.graph.set_edge("c", "t1", EdgeLabel::cov(0));
    REQUIRE(thrown_code([&] {
                scheme_from_span(s.left, smaller, s.right, span.to_left, span.to_right);
            }) == "NotAScheme");
    // a leg that misses a neutral vertex is rejected
    auto missing = induced_oriented(span.apex, [&] {
        auto names = span.apex.graph.neutral_set();
        names.erase("t1");
        return names;
    }());
    REQUIRE(thrown_code([&] {
                scheme_from_span(s.left, missing, s.right, span.to_left, span.to_right);
            }) == "NotAScheme");

    // sides with different net charge never form a scheme
    PreChemGraph hydron;
    hydron.add_vertex("h", VertexLabel::atom("H"));
    hydron.add_vertex("p", VertexLabel::plus());
    hydron.add_edge("h", "p", EdgeLabel::cov(1));
    PreChemGraph hydride;
    hydride.add_vertex("h", VertexLabel::atom("H"));
    hydride.add_vertex("q", VertexLabel::minus());
    hydride.add_edge("h", "q", EdgeLabel::cov(1));
    REQUIRE(thrown_code([&] { ReactionScheme::make(hydron, hydride, {{"h", "h"}}); }) ==
            "NotAScheme");
    // mislabelled boundary bijection
    REQUIRE(thrown_code([&] {
                ReactionScheme::make(rgtest::h2(), rgtest::hydrogen_chloride(),
                                     {{"h1", "h"}, {"h2", "cl"}});
            }) == "NotAScheme");
}

TEST_CASE("rewrite swaps chlorine for a carbon bond", "[rewrite]") {
    auto s = chlorination_scheme();
    auto host = chlorination_host();
    auto d = dpo_apply(s, chlorination_match(), host);

    REQUIRE(d.result.graph == chlorination_product());
    REQUIRE(d.result.p.orbits().empty());
    REQUIRE(d.charge_names.empty());

    // the cut-back context drops exactly the two broken bonds
    PreChemGraph want_d = host;
    want_d.set_edge("c", "cl", EdgeLabel::cov(0));
    want_d.set_edge("mc", "mh4", EdgeLabel::cov(0));
    REQUIRE(d.context.graph == want_d);

    // the context includes into the result as a morphism here
    REQUIRE(is_morphism(identity_map(d.context.graph), d.context, d.result));
    // and the right side maps onto the rewritten part
    REQUIRE(is_matching(d.right_to_result, s.right, d.result));
    REQUIRE(d.right_to_result.at("h") == "mh4");

    // the extracted reaction: four touched vertices, six spectators
    auto t = reaction_from_dpo(d);
    REQUIRE(t.u_c == std::set<std::string>{"c", "cl", "mc", "mh4"});
    REQUIRE(t.u_e == t.u_c);
    REQUIRE(t.b == VertexMap{{"c", "c"}, {"cl", "cl"}, {"mc", "mc"}, {"mh4", "mh4"}});
    REQUIRE(t.i.size() == 6);
    REQUIRE(validate_reaction_tuple(t, host, d.result.graph).empty());

    // rebuild the span from the tuple and re-apply: same product
    auto rebuilt = reaction_to_dpo(t, host, d.result);
    REQUIRE(rebuilt.scheme.left.graph.alpha_set().size() == 6);
    auto again = dpo_apply(rebuilt.scheme, rebuilt.match_left, host);
    REQUIRE(again.result.graph == d.result.graph);
    REQUIRE(reaction_from_dpo(again) == t);

    // the transformation is its own reverse
    auto s_back = ReactionScheme::make(s.right, s.left, s.bij);
    auto back = dpo_apply(s_back, chlorination_match(), d.result);
    REQUIRE(back.result.graph == host);
    REQUIRE(reaction_from_dpo(back) == t);

    // composing there and back touches the same core and moves nothing
    auto there_back =
        compose_reactions(t, reaction_from_dpo(back), host, d.result.graph, host);
    REQUIRE(there_back.u_c == t.u_c);
    REQUIRE(there_back.u_e == t.u_c);
    for (const auto& [x, y] : there_back.b) REQUIRE(x == y);
    for (const auto& [x, y] : there_back.i) REQUIRE(x == y);
}

TEST_CASE("identity fold leaves the molecule alone", "[rewrite]") {
    auto s = ReactionScheme::make(bond_left(), bond_left(), {{"h", "h"}, {"s", "s"}});
    auto hh = rgtest::h2();
    auto ms = enumerate_matchings(s.left, hh);
    REQUIRE(ms.size() == 2);
    for (const auto& m : ms) {
        auto d = dpo_apply(s, m, hh);
        REQUIRE(d.result.graph == hh);
        REQUIRE(d.context.graph == hh);
    }
}

TEST_CASE("empty scheme is the identity rewrite", "[rewrite]") {
    auto s = ReactionScheme::make(PreChemGraph{}, PreChemGraph{}, {});
    auto w = rgtest::water();
    auto ms = enumerate_matchings(s.left, w);
    REQUIRE(ms.size() == 1);
    REQUIRE(ms.front().empty());
    auto d = dpo_apply(s, ms.front(), w);
    REQUIRE(d.result.graph == w);
    REQUIRE(reaction_from_dpo(d) == reaction_identity(w));
}

TEST_CASE("heterolysis creates a charge pair", "[rewrite]") {
    auto s = heterolysis_scheme();
    auto hh = rgtest::h2();
    VertexMap m{{"h", "h1"}, {"s", "h2"}};
    auto d = dpo_apply(s, m, hh);

    PreChemGraph want;
    want.add_vertex("h1", VertexLabel::atom("H"));
    want.add_vertex("h2", VertexLabel::atom("H"));
    want.add_vertex("p", VertexLabel::plus());
    want.add_vertex("q", VertexLabel::minus());
    want.add_edge("h1", "p", EdgeLabel::cov(1));
    want.add_edge("h2", "q", EdgeLabel::cov(1));
    REQUIRE(d.result.graph == want);
    REQUIRE(d.charge_names == VertexMap{{"p", "p"}, {"q", "q"}});
    REQUIRE(net_charge(d.result.graph) == 0);

    // the cut-back context keeps the matched bond (it reads it off the
    // host), so it does not include into the result as a morphism: the
    // bottom-right leg of the square is an inclusion of vertex sets only
    REQUIRE(d.context.graph == hh);
    auto v = check_morphism(identity_map(d.context.graph), d.context, d.result);
    REQUIRE_FALSE(v.ok);
    REQUIRE(v.reason.find("edge") != std::string::npos);

    auto t = reaction_from_dpo(d);
    REQUIRE(t.u_c == std::set<std::string>{"h1"});
    REQUIRE(t.u_e == std::set<std::string>{"h1", "p", "q"});
    REQUIRE(t.b == VertexMap{{"h1", "h1"}});
    REQUIRE(t.i == VertexMap{{"h2", "h2"}});
    REQUIRE(validate_reaction_tuple(t, hh, d.result.graph).empty());

    // the right side of the reaction is a valid reaction core even though
    // the anchor of its minus stays outside
    REQUIRE(is_chemical_subgraph(d.result.graph, {"h1", "p", "q"}));
    REQUIRE_FALSE(is_chemical_subgraph(d.result.graph, {"p", "q"}));

    // tuple -> span -> apply round trip, stub anchored on the minus
    auto rebuilt = reaction_to_dpo(t, hh, d.result);
    REQUIRE(rebuilt.scheme.right.graph.has_vertex("~h2^q_1"));
    auto again = dpo_apply(rebuilt.scheme, rebuilt.match_left, hh);
    REQUIRE(again.result.graph == d.result.graph);
    REQUIRE(reaction_from_dpo(again) == t);

    // recombination: the reverse scheme consumes the charges again
    auto s_back = ReactionScheme::make(ions_right(), bond_left(), {{"h", "h"}, {"s", "s"}});
    auto mb = enumerate_matchings(s_back.left, d.result);
    REQUIRE(mb.size() == 1);
    auto back = dpo_apply(s_back, mb.front(), d.result);
    REQUIRE(back.result.graph == hh);
    auto tb = reaction_from_dpo(back);
    REQUIRE(tb.u_c == std::set<std::string>{"h1", "p", "q"});
    REQUIRE(tb.u_e == std::set<std::string>{"h1"});

    // composing split and recombination touches only the kept atom
    auto round = compose_reactions(t, tb, hh, d.result.graph, hh);
    ReactionTuple want_round{{"h1"}, {"h1"}, {{"h1", "h1"}}, {{"h2", "h2"}}};
    REQUIRE(round == want_round);
}

TEST_CASE("ionic association and dissociation", "[rewrite]") {
    auto forward =
        ReactionScheme::make(rgtest::sodium_chloride(), nacl_covalent(), {{"na", "na"}, {"cl", "cl"}});
    auto host = rgtest::sodium_chloride();
    auto ms = enumerate_matchings(forward.left, host);
    REQUIRE(ms.size() == 1);
    auto d = dpo_apply(forward, ms.front(), host);
    REQUIRE(d.result.graph == nacl_covalent());
    // the replaced charges leave two isolated atoms behind in the context
    REQUIRE(d.context.graph.vertices.size() == 2);
    REQUIRE(d.context.graph.edges.empty());

    auto t = reaction_from_dpo(d);
    REQUIRE(t.u_c == std::set<std::string>{"cl", "na", "p", "q"});
    REQUIRE(t.u_e == std::set<std::string>{"cl", "na"});
    REQUIRE(t.i.empty());
    auto rebuilt = reaction_to_dpo(t, host, d.result);
    REQUIRE(rebuilt.scheme.left.graph == host);  // no boundary, no stubs
    REQUIRE(dpo_apply(rebuilt.scheme, rebuilt.match_left, host).result.graph == d.result.graph);

    // reverse: the ion pair is rebuilt, ionic edge included
    auto reverse =
        ReactionScheme::make(nacl_covalent(), rgtest::sodium_chloride(), {{"na", "na"}, {"cl", "cl"}});
    auto back = dpo_apply(reverse, identity_map(nacl_covalent()), nacl_covalent());
    REQUIRE(back.result.graph == rgtest::sodium_chloride());
    REQUIRE(back.result.graph.edge("p", "q").is_ionic());
}

TEST_CASE("incoming charges avoid colliding names", "[rewrite]") {
    auto reverse =
        ReactionScheme::make(nacl_covalent(), rgtest::sodium_chloride(), {{"na", "na"}, {"cl", "cl"}});
    // a bystander already owns the names p and q
    PreChemGraph bystander;
    bystander.add_vertex("p", VertexLabel::atom("H"));
    bystander.add_vertex("q", VertexLabel::atom("H"));
    bystander.add_edge("p", "q", EdgeLabel::cov(1));
    auto host = disjoint_union(nacl_covalent(), bystander).graph;

    auto d = dpo_apply(reverse, {{"na", "na"}, {"cl", "cl"}}, host);
    REQUIRE(d.charge_names == VertexMap{{"p", "~1"}, {"q", "~2"}});
    PreChemGraph want = bystander;
    want.add_vertex("na", VertexLabel::atom("Na"));
    want.add_vertex("cl", VertexLabel::atom("Cl"));
    want.add_vertex("~1", VertexLabel::plus());
    want.add_vertex("~2", VertexLabel::minus());
    want.add_edge("na", "~1", EdgeLabel::cov(1));
    want.add_edge("cl", "~2", EdgeLabel::cov(1));
    want.add_edge("~1", "~2", EdgeLabel::ionic());
    REQUIRE(d.result.graph == want);
    REQUIRE(is_isomorphic(d.result.graph,
                          disjoint_union(rgtest::sodium_chloride(), rgtest::h2()).graph));
}

TEST_CASE("ionic bond into the replaced part is severed", "[rewrite]") {
    // rewrite only the cation half of an ion pair: the anion keeps its
    // anchor but loses its ionic partner
    PreChemGraph half;
    half.add_vertex("na", VertexLabel::atom("Na"));
    half.add_vertex("p", VertexLabel::plus());
    half.add_edge("na", "p", EdgeLabel::cov(1));
    auto s = ReactionScheme::make(half, half, {{"na", "na"}});
    auto host = rgtest::sodium_chloride();
    auto d = dpo_apply(s, {{"na", "na"}, {"p", "p"}}, host);

    PreChemGraph want;
    want.add_vertex("na", VertexLabel::atom("Na"));
    want.add_vertex("cl", VertexLabel::atom("Cl"));
    want.add_vertex("q", VertexLabel::minus());
    want.add_vertex("~1", VertexLabel::plus());
    want.add_edge("na", "~1", EdgeLabel::cov(1));
    want.add_edge("cl", "q", EdgeLabel::cov(1));
    REQUIRE(d.result.graph == want);
    REQUIRE(d.charge_names == VertexMap{{"p", "~1"}});

    auto t = reaction_from_dpo(d);
    REQUIRE(validate_reaction_tuple(t, host, d.result.graph).empty());
    REQUIRE(t.u_e == std::set<std::string>{"na", "~1"});
}

TEST_CASE("pushout property on anchor-coherent rewrites", "[rewrite]") {
    struct Case {
        ReactionScheme s;
        VertexMap m;
        OrientedGraph host;
    };
    std::vector<Case> cases;
    cases.push_back({ReactionScheme::make(bond_left(), bond_left(), {{"h", "h"}, {"s", "s"}}),
                     {{"h", "h1"}, {"s", "h2"}},
                     rgtest::h2()});
    cases.push_back({ReactionScheme::make(rgtest::sodium_chloride(), nacl_covalent(),
                                          {{"na", "na"}, {"cl", "cl"}}),
                     identity_map(rgtest::sodium_chloride()),
                     rgtest::sodium_chloride()});
    cases.push_back({ReactionScheme::make(nacl_covalent(), rgtest::sodium_chloride(),
                                          {{"na", "na"}, {"cl", "cl"}}),
                     identity_map(nacl_covalent()),
                     nacl_covalent()});
    // recombination of an ion pair into a covalent bond
    {
        auto s = ReactionScheme::make(ions_right(), bond_left(), {{"h", "h"}, {"s", "s"}});
        PreChemGraph ions;
        ions.add_vertex("h1", VertexLabel::atom("H"));
        ions.add_vertex("h2", VertexLabel::atom("H"));
        ions.add_vertex("p'", VertexLabel::plus());
        ions.add_vertex("q'", VertexLabel::minus());
        ions.add_edge("h1", "p'", EdgeLabel::cov(1));
        ions.add_edge("h2", "q'", EdgeLabel::cov(1));
        cases.push_back({s, {{"h", "h1"}, {"s", "h2"}, {"p", "p'"}, {"q", "q'"}}, ions});
    }

    for (const auto& kase : cases) {
        auto d = dpo_apply(kase.s, kase.m, kase.host);
        auto span = scheme_to_span(kase.s);
        VertexMap incl_d = identity_map(d.context.graph);
        VertexMap incl_e;
        for (const auto& [v, l] : d.context.graph.vertices) {
            (void)l;
            incl_e[v] = v;
        }
        std::vector<OrientedGraph> probes{d.result,
                                          disjoint_union(d.result.graph, rgtest::water("w")).graph};
        // right square: scheme target against the cut-back context
        require_pushout_square(span.apex, kase.s.right, d.context, d.result, span.to_right,
                               d.apex_to_context, d.right_to_result, incl_e, probes);
        // left square: scheme source against the cut-back context
        std::vector<OrientedGraph> host_probes{
            kase.host, disjoint_union(kase.host.graph, rgtest::water("w")).graph};
        require_pushout_square(span.apex, kase.s.left, d.context, kase.host, span.to_left,
                               d.apex_to_context, kase.m, incl_d, host_probes);
    }
}

TEST_CASE("orientation rides through a rewrite", "[rewrite]") {
    auto s = chlorination_scheme();
    auto m = chlorination_match();

    // a bystander triangle survives into context and result
    auto host_w = disjoint_union(chlorination_host(), rgtest::water("w")).graph;
    auto host_o = make_oriented(host_w, {{"wo", "wh1", "wh2"}}, {});
    auto d = dpo_apply(s, m, host_o);
    REQUIRE(d.context.p.contains({"wo", "wh1", "wh2"}));
    REQUIRE(d.result.p.contains({"wo", "wh1", "wh2"}));

    // a triangle wholly inside the replaced region is forgotten
    auto host_c = make_oriented(chlorination_host(), {{"h1", "h2", "h3"}}, {});
    auto d2 = dpo_apply(s, m, host_c);
    REQUIRE(d2.result.p.orbits().empty());

    // a triangle on the scheme target is stamped onto the result
    auto right_o = make_oriented(chlorination_right(), {{"cl", "h", "c2"}}, {});
    auto s2 = ReactionScheme::make(s.left, right_o, s.bij);
    auto d3 = dpo_apply(s2, m, chlorination_host());
    REQUIRE(d3.result.p.contains({"cl", "mh4", "mc"}));
    REQUIRE(d3.result.p.orbits().size() == 1);

    // a tetrahedron whose triangles die with the rewrite is a hard error
    auto host_q = make_oriented(disjoint_union(chlorination_host(), rgtest::water("w")).graph, {},
                                {{"c", "cl", "h1", "wo"}});
    REQUIRE(thrown_code([&] { dpo_apply(s, m, host_q); }) == "ProjectionFailure");
}

TEST_CASE("rewrite rejects malformed inputs", "[rewrite]") {
    auto s = chlorination_scheme();
    auto host = chlorination_host();
    auto bad = chlorination_match();
    bad["cl"] = "mh1";  // no chlorine there
    REQUIRE(thrown_code([&] { dpo_apply(s, bad, host); }) == "NotAMatching");
}

TEST_CASE("chemical subgraph closure", "[rewrite]") {
    auto nacl = rgtest::sodium_chloride();
    REQUIRE(is_chemical_subgraph(nacl, {"na", "cl", "p", "q"}));
    REQUIRE(is_chemical_subgraph(nacl, {"na", "p"}));  // ionic partners are not pulled
    REQUIRE_FALSE(is_chemical_subgraph(nacl, {"p"}));  // a plus pulls its anchor
    REQUIRE_FALSE(is_chemical_subgraph(nacl, {"na"}));  // an anchor pulls its charge

    REQUIRE(smallest_chemical_subgraph(nacl, {"p"}) ==
            std::set<std::string>{"cl", "na", "p", "q"});
    REQUIRE(smallest_chemical_subgraph(rgtest::water(), {"o"}) == std::set<std::string>{"o"});
    REQUIRE(smallest_chemical_subgraph(rgtest::carbonate(), {"q2"}) ==
            std::set<std::string>{"o2", "q2"});
    REQUIRE(smallest_chemical_subgraph(rgtest::ch3_synthon(), {"s"}) ==
            std::set<std::string>{"c", "s"});
    REQUIRE(thrown_code([&] { smallest_chemical_subgraph(nacl, {"zz"}); }) == "DanglingName");
}

TEST_CASE("reaction tuple validation", "[rewrite]") {
    auto w = rgtest::water();
    REQUIRE(validate_reaction_tuple(reaction_identity(w), w, w).empty());

    ReactionTuple dangling{{"zz"}, {}, {}, {}};
    REQUIRE(has_code(validate_reaction_tuple(dangling, w, w), "DanglingName"));

    auto nacl = rgtest::sodium_chloride();
    ReactionTuple loose{{"p"}, {"p"}, {}, identity_map(nacl)};
    loose.i.erase("p");
    REQUIRE(has_code(validate_reaction_tuple(loose, nacl, nacl), "NotChemicalSubgraph"));

    ReactionTuple skewed{{"na", "p"}, {"na"}, {{"na", "na"}}, {}};
    REQUIRE(has_code(validate_reaction_tuple(skewed, nacl, nacl), "ChargeMismatch"));

    auto hh = rgtest::h2();
    ReactionTuple crossed{{"h1"}, {"h1"}, {{"h1", "h2"}}, {{"h2", "h2"}}};
    REQUIRE(has_code(validate_reaction_tuple(crossed, hh, hh), "BadBijection"));

    ReactionTuple folded{{}, {}, {}, {{"o", "o"}, {"h1", "h2"}, {"h2", "h2"}}};
    REQUIRE(has_code(validate_reaction_tuple(folded, w, w), "BadContextIso"));
}

TEST_CASE("reaction composition laws on random cut schemes", "[rewrite]") {
    int tried = 0;
    for (std::uint64_t seed = 1; seed <= 30 && tried < 12; ++seed) {
        Rng rng(seed);
        auto mol = rgtest::gen_molecular_entity(rng, 6);
        int cuts = 1 + static_cast<int>(seed % 2);
        auto left = rgtest::cut_bonds(rng, mol, cuts, "s");
        auto right = rgtest::cut_bonds(rng, mol, cuts, "z");
        auto sa = left.alpha_set();
        auto za = right.alpha_set();
        if (sa.size() != za.size() || sa.empty()) continue;
        ++tried;

        VertexMap bij;
        for (const auto& v : mol.vertex_names()) bij[v] = v;
        VertexMap stub_pair;  // left stub -> right stub, in index order
        {
            auto is = sa.begin();
            auto iz = za.begin();
            for (; is != sa.end(); ++is, ++iz) {
                bij[*is] = *iz;
                stub_pair[*is] = *iz;
            }
        }
        auto scheme = ReactionScheme::make(left, right, bij);

        // the host replaces every left stub by a hydrogen of the same name
        auto host = alpha_to_h(left);
        auto m = identity_map(left);
        REQUIRE(is_matching(m, scheme.left, host));
        auto d = dpo_apply(scheme, m, host);
        auto expect = alpha_to_h(rename(right, invert_bijection(stub_pair)));
        REQUIRE(d.result.graph == expect);

        auto t = reaction_from_dpo(d);
        REQUIRE(validate_reaction_tuple(t, host, d.result.graph).empty());
        auto rebuilt = reaction_to_dpo(t, host, d.result);
        auto again = dpo_apply(rebuilt.scheme, rebuilt.match_left, host);
        REQUIRE(again.result.graph == d.result.graph);
        REQUIRE(reaction_from_dpo(again) == t);

        // run the reverse scheme on the product: back to the host
        auto reverse = ReactionScheme::make(right, left, invert_bijection(bij));
        VertexMap m2 = identity_map(mol);
        for (const auto& [ls, rs] : stub_pair) m2[rs] = ls;
        auto back = dpo_apply(reverse, m2, d.result);
        REQUIRE(back.result.graph == host);
        auto tb = reaction_from_dpo(back);

        const auto& e = d.result.graph;
        auto r_then_b = compose_reactions(t, tb, host, e, host);
        ReactionTuple want;
        for (const auto& v : mol.vertex_names()) {
            want.u_c.insert(v);
            want.u_e.insert(v);
            want.b[v] = v;
        }
        for (const auto& [ls, rs] : stub_pair) {
            (void)rs;
            want.i[ls] = ls;
        }
        REQUIRE(r_then_b == want);

        // unit and associativity laws
        REQUIRE(compose_reactions(reaction_identity(host), t, host, host, e) == t);
        REQUIRE(compose_reactions(t, reaction_identity(e), host, e, e) == t);
        auto lhs = compose_reactions(compose_reactions(t, tb, host, e, host), t, host, host, e);
        auto rhs = compose_reactions(t, compose_reactions(tb, t, e, host, e), host, e, e);
        REQUIRE(lhs == rhs);
    }
    REQUIRE(tried >= 8);
}

TEST_CASE("composition rejects mismatched boundaries", "[rewrite]") {
    auto hh = rgtest::h2();
    auto s = heterolysis_scheme();
    auto d = dpo_apply(s, {{"h", "h1"}, {"s", "h2"}}, hh);
    auto t = reaction_from_dpo(d);
    REQUIRE(thrown_code([&] {
                compose_reactions(t, t, hh, d.result.graph, d.result.graph);
            }) == "BoundaryMismatch");

    auto wide = extend_reaction(t, {"x"});
    REQUIRE(wide.i.at("x") == "x");
    REQUIRE(thrown_code([&] { extend_reaction(t, {"h2"}); }) == "RepeatedElement");
}
