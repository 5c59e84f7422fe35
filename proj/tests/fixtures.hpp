#pragma once

// Hand-encoded molecules shared across the suites.

#include <retrograph/chemgraph.hpp>
#include <retrograph/orientation.hpp>

namespace rgtest {

using namespace retrograph;

inline PreChemGraph h2() {
    PreChemGraph g;
    g.add_vertex("h1", VertexLabel::atom("H"));
    g.add_vertex("h2", VertexLabel::atom("H"));
    g.add_edge("h1", "h2", EdgeLabel::cov(1));
    return g;
}

inline PreChemGraph ethenone() {  // H2C=C=O
    PreChemGraph g;
    g.add_vertex("c1", VertexLabel::atom("C"));
    g.add_vertex("c2", VertexLabel::atom("C"));
    g.add_vertex("o", VertexLabel::atom("O"));
    g.add_vertex("h1", VertexLabel::atom("H"));
    g.add_vertex("h2", VertexLabel::atom("H"));
    g.add_edge("h1", "c1", EdgeLabel::cov(1));
    g.add_edge("h2", "c1", EdgeLabel::cov(1));
    g.add_edge("c1", "c2", EdgeLabel::cov(2));
    g.add_edge("c2", "o", EdgeLabel::cov(2));
    return g;
}

inline PreChemGraph carbonate() {  // CO3^2-: one C=O, two C-O(-)
    PreChemGraph g;
    g.add_vertex("c", VertexLabel::atom("C"));
    g.add_vertex("o1", VertexLabel::atom("O"));
    g.add_vertex("o2", VertexLabel::atom("O"));
    g.add_vertex("o3", VertexLabel::atom("O"));
    g.add_vertex("q2", VertexLabel::minus());
    g.add_vertex("q3", VertexLabel::minus());
    g.add_edge("c", "o1", EdgeLabel::cov(2));
    g.add_edge("c", "o2", EdgeLabel::cov(1));
    g.add_edge("c", "o3", EdgeLabel::cov(1));
    g.add_edge("o2", "q2", EdgeLabel::cov(1));
    g.add_edge("o3", "q3", EdgeLabel::cov(1));
    return g;
}

inline PreChemGraph methane(const std::string& prefix = "") {
    PreChemGraph g;
    g.add_vertex(prefix + "c", VertexLabel::atom("C"));
    for (int i = 1; i <= 4; ++i) {
        g.add_vertex(prefix + "h" + std::to_string(i), VertexLabel::atom("H"));
        g.add_edge(prefix + "c", prefix + "h" + std::to_string(i), EdgeLabel::cov(1));
    }
    return g;
}

inline PreChemGraph ethane() {
    PreChemGraph g;
    g.add_vertex("c1", VertexLabel::atom("C"));
    g.add_vertex("c2", VertexLabel::atom("C"));
    g.add_edge("c1", "c2", EdgeLabel::cov(1));
    for (int i = 1; i <= 3; ++i) {
        g.add_vertex("h1" + std::to_string(i), VertexLabel::atom("H"));
        g.add_edge("c1", "h1" + std::to_string(i), EdgeLabel::cov(1));
        g.add_vertex("h2" + std::to_string(i), VertexLabel::atom("H"));
        g.add_edge("c2", "h2" + std::to_string(i), EdgeLabel::cov(1));
    }
    return g;
}

inline PreChemGraph ethene() {
    PreChemGraph g;
    g.add_vertex("c1", VertexLabel::atom("C"));
    g.add_vertex("c2", VertexLabel::atom("C"));
    g.add_edge("c1", "c2", EdgeLabel::cov(2));
    for (int i = 1; i <= 2; ++i) {
        g.add_vertex("h1" + std::to_string(i), VertexLabel::atom("H"));
        g.add_edge("c1", "h1" + std::to_string(i), EdgeLabel::cov(1));
        g.add_vertex("h2" + std::to_string(i), VertexLabel::atom("H"));
        g.add_edge("c2", "h2" + std::to_string(i), EdgeLabel::cov(1));
    }
    return g;
}

inline PreChemGraph ch3_synthon(const std::string& prefix = "") {  // CH3-*
    PreChemGraph g;
    g.add_vertex(prefix + "c", VertexLabel::atom("C"));
    g.add_vertex(prefix + "s", VertexLabel::alpha());
    g.add_edge(prefix + "c", prefix + "s", EdgeLabel::cov(1));
    for (int i = 1; i <= 3; ++i) {
        g.add_vertex(prefix + "h" + std::to_string(i), VertexLabel::atom("H"));
        g.add_edge(prefix + "c", prefix + "h" + std::to_string(i), EdgeLabel::cov(1));
    }
    return g;
}

inline PreChemGraph chloromethane() {
    PreChemGraph g = methane();
    g.erase_vertex("h4");
    g.add_vertex("cl", VertexLabel::atom("Cl"));
    g.add_edge("c", "cl", EdgeLabel::cov(1));
    return g;
}

inline PreChemGraph hydrogen_chloride(const std::string& prefix = "") {
    PreChemGraph g;
    g.add_vertex(prefix + "h", VertexLabel::atom("H"));
    g.add_vertex(prefix + "cl", VertexLabel::atom("Cl"));
    g.add_edge(prefix + "h", prefix + "cl", EdgeLabel::cov(1));
    return g;
}

inline PreChemGraph water(const std::string& prefix = "") {
    PreChemGraph g;
    g.add_vertex(prefix + "o", VertexLabel::atom("O"));
    g.add_vertex(prefix + "h1", VertexLabel::atom("H"));
    g.add_vertex(prefix + "h2", VertexLabel::atom("H"));
    g.add_edge(prefix + "o", prefix + "h1", EdgeLabel::cov(1));
    g.add_edge(prefix + "o", prefix + "h2", EdgeLabel::cov(1));
    return g;
}

// 2-butanol, all hydrogens explicit; the four stereocenter neighbours are
// named 1 (methyl C), 2 (hydroxyl O), 3 (H), 4 (methylene C of the ethyl arm).
inline PreChemGraph butanol_graph() {
    PreChemGraph g;
    g.add_vertex("c", VertexLabel::atom("C"));
    g.add_vertex("1", VertexLabel::atom("C"));
    g.add_vertex("2", VertexLabel::atom("O"));
    g.add_vertex("3", VertexLabel::atom("H"));
    g.add_vertex("4", VertexLabel::atom("C"));
    g.add_vertex("c5", VertexLabel::atom("C"));
    for (const char* h : {"h11", "h12", "h13", "ho", "h41", "h42", "h51", "h52", "h53"})
        g.add_vertex(h, VertexLabel::atom("H"));
    for (const char* n : {"1", "2", "3", "4"}) g.add_edge("c", n, EdgeLabel::cov(1));
    for (const char* h : {"h11", "h12", "h13"}) g.add_edge("1", h, EdgeLabel::cov(1));
    g.add_edge("2", "ho", EdgeLabel::cov(1));
    for (const char* h : {"h41", "h42"}) g.add_edge("4", h, EdgeLabel::cov(1));
    g.add_edge("4", "c5", EdgeLabel::cov(1));
    for (const char* h : {"h51", "h52", "h53"}) g.add_edge("c5", h, EdgeLabel::cov(1));
    return g;
}

inline std::pair<OrientedGraph, OrientedGraph> butanol_pair() {
    auto m = make_oriented(butanol_graph(), {}, {Quad{"1", "2", "3", "4"}});
    auto n = make_oriented(butanol_graph(), {}, {Quad{"4", "1", "2", "3"}});
    return {m, n};
}

// Isopentane with the two methyl carbons at positions 2 and 4; swapping them
// is a graph automorphism.
inline PreChemGraph isopentane_graph() {
    PreChemGraph g;
    g.add_vertex("c", VertexLabel::atom("C"));
    g.add_vertex("1", VertexLabel::atom("C"));
    g.add_vertex("2", VertexLabel::atom("C"));
    g.add_vertex("3", VertexLabel::atom("H"));
    g.add_vertex("4", VertexLabel::atom("C"));
    g.add_vertex("c6", VertexLabel::atom("C"));
    for (const char* h : {"h11", "h12", "h61", "h62", "h63", "h21", "h22", "h23", "h41", "h42", "h43"})
        g.add_vertex(h, VertexLabel::atom("H"));
    for (const char* n : {"1", "2", "3", "4"}) g.add_edge("c", n, EdgeLabel::cov(1));
    for (const char* h : {"h11", "h12"}) g.add_edge("1", h, EdgeLabel::cov(1));
    g.add_edge("1", "c6", EdgeLabel::cov(1));
    for (const char* h : {"h61", "h62", "h63"}) g.add_edge("c6", h, EdgeLabel::cov(1));
    for (const char* h : {"h21", "h22", "h23"}) g.add_edge("2", h, EdgeLabel::cov(1));
    for (const char* h : {"h41", "h42", "h43"}) g.add_edge("4", h, EdgeLabel::cov(1));
    return g;
}

inline std::pair<OrientedGraph, OrientedGraph> isopentane_pair() {
    auto m = make_oriented(isopentane_graph(), {}, {Quad{"1", "2", "3", "4"}});
    auto n = make_oriented(isopentane_graph(), {}, {Quad{"4", "1", "2", "3"}});
    return {m, n};
}

// 1,3-dichloroallene: Cl(H)C=C=C(H)Cl with the variable substituents at
// vertices 4 and 6; the two encodings swap which of them is the chlorine.
inline PreChemGraph dichloroallene_graph(bool four_is_chlorine) {
    PreChemGraph g;
    g.add_vertex("1", VertexLabel::atom("H"));
    g.add_vertex("2", VertexLabel::atom("C"));
    g.add_vertex("3", VertexLabel::atom("Cl"));
    g.add_vertex("c0", VertexLabel::atom("C"));
    g.add_vertex("5", VertexLabel::atom("C"));
    g.add_vertex("4", four_is_chlorine ? VertexLabel::atom("Cl") : VertexLabel::atom("H"));
    g.add_vertex("6", four_is_chlorine ? VertexLabel::atom("H") : VertexLabel::atom("Cl"));
    g.add_edge("1", "2", EdgeLabel::cov(1));
    g.add_edge("3", "2", EdgeLabel::cov(1));
    g.add_edge("2", "c0", EdgeLabel::cov(2));
    g.add_edge("c0", "5", EdgeLabel::cov(2));
    g.add_edge("4", "5", EdgeLabel::cov(1));
    g.add_edge("6", "5", EdgeLabel::cov(1));
    return g;
}

inline std::pair<OrientedGraph, OrientedGraph> dichloroallene_pair() {
    std::vector<Quad> gens{Quad{"1", "2", "3", "4"}, Quad{"6", "1", "2", "3"}};
    auto m = make_oriented(dichloroallene_graph(true), {}, gens);
    auto n = make_oriented(dichloroallene_graph(false), {}, gens);
    return {m, n};
}

// Sodium chloride as an ion pair: Na-(+) ~~ (-)-Cl.
inline PreChemGraph sodium_chloride() {
    PreChemGraph g;
    g.add_vertex("na", VertexLabel::atom("Na"));
    g.add_vertex("cl", VertexLabel::atom("Cl"));
    g.add_vertex("p", VertexLabel::plus());
    g.add_vertex("q", VertexLabel::minus());
    g.add_edge("na", "p", EdgeLabel::cov(1));
    g.add_edge("cl", "q", EdgeLabel::cov(1));
    g.add_edge("p", "q", EdgeLabel::ionic());
    return g;
}

}  // namespace rgtest
