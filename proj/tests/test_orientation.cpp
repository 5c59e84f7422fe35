#include <catch2/catch_amalgamated.hpp>

#include <retrograph/orientation.hpp>

#include "fixtures.hpp"
#include "generators.hpp"

#include <array>

using namespace retrograph;
using namespace rgtest;

namespace {

// Euclidean reference model: triples are oriented when non-collinear, and a
// quadruple is in the relation when its signed volume is positive. Both come
// out correctly closed by construction, which makes them an independent
// source of valid relations.
using Point = std::array<long long, 3>;

long long det3(const Point& a, const Point& b, const Point& c) {
    return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) +
           a[2] * (b[0] * c[1] - b[1] * c[0]);
}

Point sub(const Point& a, const Point& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

bool collinear(const Point& a, const Point& b, const Point& c) {
    Point u = sub(b, a), v = sub(c, a);
    return u[1] * v[2] - u[2] * v[1] == 0 && u[2] * v[0] - u[0] * v[2] == 0 &&
           u[0] * v[1] - u[1] * v[0] == 0;
}

std::pair<TriangleRel, TetrahedronRel> euclid_relations(
    const std::map<std::string, Point>& pts) {
    TriangleRel p;
    TetrahedronRel t;
    std::vector<std::string> names;
    for (const auto& [n, q] : pts) names.push_back(n);
    for (std::size_t i = 0; i < names.size(); ++i)
        for (std::size_t j = 0; j < names.size(); ++j)
            for (std::size_t k = 0; k < names.size(); ++k) {
                if (i == j || i == k || j == k) continue;
                if (!collinear(pts.at(names[i]), pts.at(names[j]), pts.at(names[k])))
                    p.insert({names[i], names[j], names[k]});
                for (std::size_t l = 0; l < names.size(); ++l) {
                    if (l == i || l == j || l == k) continue;
                    const Point& a = pts.at(names[i]);
                    if (det3(sub(pts.at(names[j]), a), sub(pts.at(names[k]), a),
                             sub(pts.at(names[l]), a)) > 0)
                        t.insert({names[i], names[j], names[k], names[l]});
                }
            }
    return {p, t};
}

std::map<std::string, Point> mirror(const std::map<std::string, Point>& pts) {
    std::map<std::string, Point> out;
    for (const auto& [n, q] : pts) out[n] = {-q[0], q[1], q[2]};
    return out;
}

VertexMap identity_on(const PreChemGraph& g) {
    VertexMap f;
    for (const auto& n : g.vertex_names()) f[n] = n;
    return f;
}

VertexMap compose(const VertexMap& f, const VertexMap& g) {  // g after f
    VertexMap h;
    for (const auto& [v, w] : f) h[v] = g.at(w);
    return h;
}

// Oriented copy of m along f whose tetrahedron relation is the
// reflect-transport of m's, so that f reflects by construction.
OrientedGraph reflect_transport(const OrientedGraph& m, const VertexMap& f) {
    OrientedGraph n{rename(m.graph, f)};
    n.p = m.p.mapped(f);
    for (const auto& q : m.t.orbits())
        n.t.insert({f.at(q[3]), f.at(q[0]), f.at(q[1]), f.at(q[2])});
    return n;
}

}  // namespace

TEST_CASE("closing a single quadruple yields 12 quadruples and 4 triangles") {
    auto [p, t] = close_relations({}, {Quad{"1", "2", "3", "4"}});
    CHECK(t.size() == 1);
    CHECK(t.closed_size() == 12);
    CHECK(p.size() == 4);
    CHECK(p.closed_size() == 24);
    CHECK(t.contains({"1", "2", "3", "4"}));
    CHECK(t.contains({"2", "1", "4", "3"}));       // even rearrangement
    CHECK_FALSE(t.contains({"4", "1", "2", "3"})); // odd rearrangement
    CHECK(p.contains({"3", "1", "2"}));
}

TEST_CASE("empty generators close to empty relations") {
    auto [p, t] = close_relations({}, {});
    CHECK(p.empty());
    CHECK(t.empty());
}

TEST_CASE("generators with repeated vertices are rejected") {
    CHECK_THROWS_AS(close_relations({Triple{"a", "a", "b"}}, {}), RgError);
    CHECK_THROWS_AS(close_relations({}, {Quad{"a", "b", "c", "a"}}), RgError);
    TriangleRel p;
    CHECK_FALSE(p.contains({"a", "a", "b"}));
}

TEST_CASE("closure is idempotent") {
    auto [p, t] = close_relations({Triple{"x", "y", "z"}}, {Quad{"1", "2", "3", "4"}});
    std::vector<Triple> p_gen(p.orbits().begin(), p.orbits().end());
    std::vector<Quad> t_gen(t.orbits().begin(), t.orbits().end());
    auto [p2, t2] = close_relations(p_gen, t_gen);
    CHECK(p2 == p);
    CHECK(t2 == t);
}

TEST_CASE("oriented graph validity") {
    auto [m, n] = butanol_pair();
    CHECK(validate_oriented(m).empty());
    CHECK(validate_oriented(n).empty());

    SECTION("charged vertices cannot enter the triangle relation") {
        OrientedGraph g{carbonate()};
        g.p.insert({"c", "o1", "q2"});
        auto vs = validate_oriented(g);
        REQUIRE_FALSE(vs.empty());
        CHECK(vs.front().code == "TripleCharged");
    }
    SECTION("at most one alpha per triple") {
        PreChemGraph g;
        g.add_vertex("a", VertexLabel::atom("C"));
        g.add_vertex("s1", VertexLabel::alpha());
        g.add_vertex("s2", VertexLabel::alpha());
        OrientedGraph og{g};
        og.p.insert({"a", "s1", "s2"});
        auto vs = validate_oriented(og);
        REQUIRE_FALSE(vs.empty());
        CHECK(vs.front().code == "TripleAlpha");
    }
    SECTION("quadruples must project to triangles") {
        OrientedGraph g{butanol_graph()};
        g.t.insert({"1", "2", "3", "4"});
        auto vs = validate_oriented(g);
        REQUIRE_FALSE(vs.empty());
        CHECK(vs.front().code == "ProjectionFailure");
    }
    SECTION("make_oriented throws on invalid relations") {
        CHECK_THROWS_AS(make_oriented(carbonate(), {Triple{"c", "o1", "q2"}}, {}), RgError);
    }
}

TEST_CASE("identity reflects the two butanol encodings") {
    auto [m, n] = butanol_pair();
    CHECK(check_orientation_map(identity_on(m.graph), m, n) == OrientationClass::Reflecting);
}

TEST_CASE("identity on a graph with itself") {
    auto [m, n] = butanol_pair();
    CHECK(check_orientation_map(identity_on(m.graph), m, m) == OrientationClass::Preserving);
    OrientedGraph bare{butanol_graph()};
    CHECK(check_orientation_map(identity_on(bare.graph), bare, bare) == OrientationClass::Both);
}

TEST_CASE("the 4-6 swap reflects the two dichloroallene encodings") {
    auto [m, n] = dichloroallene_pair();
    VertexMap f = identity_on(m.graph);
    f["4"] = "6";
    f["6"] = "4";
    CHECK(check_orientation_map(f, m, n) == OrientationClass::Reflecting);
}

TEST_CASE("maps that break labels or edges are rejected") {
    auto [m, n] = butanol_pair();
    VertexMap f = identity_on(m.graph);
    f["2"] = "3";
    f["3"] = "2";
    CHECK_THROWS_AS(check_orientation_map(f, m, n), RgError);
}

TEST_CASE("butanol encodings are chiral") {
    auto [m, n] = butanol_pair();
    auto r = are_chiral(m, n);
    CHECK(r.chiral);
    REQUIRE(r.reflecting.has_value());
    CHECK_FALSE(r.preserving.has_value());
    CHECK(check_orientation_map(*r.reflecting, m, n) == OrientationClass::Reflecting);
}

TEST_CASE("isopentane encodings are not chiral") {
    auto [m, n] = isopentane_pair();
    auto r = are_chiral(m, n);
    CHECK_FALSE(r.chiral);
    CHECK(r.isomorphic);
    CHECK(r.reflecting.has_value());   // the identity still reflects
    CHECK(r.preserving.has_value());   // the methyl swap preserves
}

TEST_CASE("dichloroallene encodings are chiral") {
    auto [m, n] = dichloroallene_pair();
    auto r = are_chiral(m, n);
    CHECK(r.chiral);
}

TEST_CASE("a graph without orientation is never chiral against itself") {
    OrientedGraph bare{ethenone()};
    auto r = are_chiral(bare, bare);
    CHECK_FALSE(r.chiral);
    CHECK(r.preserving.has_value());
}

TEST_CASE("chirality is symmetric with inverse witnesses") {
    auto [m, n] = butanol_pair();
    auto fwd = are_chiral(m, n);
    auto bwd = are_chiral(n, m);
    CHECK(fwd.chiral == bwd.chiral);
    REQUIRE(fwd.reflecting.has_value());
    auto inv = invert_bijection(*fwd.reflecting);
    CHECK(check_orientation_map(inv, n, m) == OrientationClass::Reflecting);
}

TEST_CASE("euclidean point sets generate valid relations") {
    std::map<std::string, Point> pts{
        {"a", {0, 0, 0}}, {"b", {3, 0, 0}}, {"c", {0, 3, 0}}, {"d", {0, 0, 3}}, {"e", {1, 1, 2}}};
    auto [p, t] = euclid_relations(pts);
    CHECK_FALSE(t.empty());
    PreChemGraph g;
    g.add_vertex("a", VertexLabel::atom("C"));
    g.add_vertex("b", VertexLabel::atom("N"));
    g.add_vertex("c", VertexLabel::atom("O"));
    g.add_vertex("d", VertexLabel::atom("S"));
    g.add_vertex("e", VertexLabel::atom("P"));
    OrientedGraph m{g, p, t};
    CHECK(validate_oriented(m).empty());

    SECTION("mirroring the points reflects under the identity") {
        auto [p2, t2] = euclid_relations(mirror(pts));
        OrientedGraph n{g, p2, t2};
        CHECK(validate_oriented(n).empty());
        CHECK(check_orientation_map(identity_on(g), m, n) == OrientationClass::Reflecting);
        auto r = are_chiral(m, n);
        CHECK(r.chiral);  // all five labels are distinct, so only the identity maps
    }
    SECTION("the point set against itself is not chiral") {
        CHECK_FALSE(are_chiral(m, m).chiral);
    }
}

TEST_CASE("two reflections compose to a preservation") {
    Rng rng(23);
    int done = 0;
    for (int trial = 0; trial < 60 && done < 25; ++trial) {
        PreChemGraph g = gen_molecular_entity(rng, 6);
        auto atom_names = g.atom_set();
        std::vector<std::string> atoms(atom_names.begin(), atom_names.end());
        if (atoms.size() < 4) continue;
        OrientedGraph m{g};
        for (int i = 0; i < rng.range(1, 3); ++i) {
            rng.shuffle(atoms);
            m.t.insert({atoms[0], atoms[1], atoms[2], atoms[3]});
        }
        std::vector<Quad> t_gen(m.t.orbits().begin(), m.t.orbits().end());
        m = make_oriented(g, {}, t_gen);

        VertexMap f, gmap;
        int i = 0;
        for (const auto& v : g.vertex_names()) f[v] = "n" + std::to_string(++i);
        OrientedGraph n = reflect_transport(m, f);
        i = 0;
        for (const auto& v : n.graph.vertex_names()) gmap[v] = "k" + std::to_string(++i);
        OrientedGraph k = reflect_transport(n, gmap);

        auto cf = check_orientation_map(f, m, n);
        auto cg = check_orientation_map(gmap, n, k);
        auto ch = check_orientation_map(compose(f, gmap), m, k);
        CHECK((cf == OrientationClass::Reflecting || cf == OrientationClass::Both));
        CHECK((cg == OrientationClass::Reflecting || cg == OrientationClass::Both));
        CHECK((ch == OrientationClass::Preserving || ch == OrientationClass::Both));
        ++done;
    }
    CHECK(done >= 25);
}
