#pragma once

// JSON documents and text rendering for the command line tool. One document
// per file. Serialisation is canonical: object keys come out alphabetically,
// arrays are sorted wherever order carries no meaning, numbers are plain
// integers, output ends in a newline. parse -> serialise -> parse == parse.

#include <retrograph/retro.hpp>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace retrograph {

using Json = nlohmann::json;

namespace detail {

inline const Json& need(const Json& j, const char* key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) fail("SchemaError", where + ": missing key \"" + key + "\"");
    return *it;
}

inline void expect_object(const Json& j, const std::string& where) {
    if (!j.is_object()) fail("SchemaError", where + ": expected an object");
}

inline void expect_array(const Json& j, const std::string& where) {
    if (!j.is_array()) fail("SchemaError", where + ": expected an array");
}

inline std::string expect_string(const Json& j, const std::string& where) {
    if (!j.is_string()) fail("SchemaError", where + ": expected a string");
    return j.get<std::string>();
}

inline int expect_int(const Json& j, const std::string& where) {
    if (!j.is_number_integer()) fail("SchemaError", where + ": expected an integer");
    return j.get<int>();
}

inline void only_keys(const Json& j, std::initializer_list<const char*> keys,
                      const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : keys)
            if (it.key() == k) known = true;
        if (!known) fail("SchemaError", where + ": unknown key \"" + it.key() + "\"");
    }
}

}  // namespace detail

inline Json parse_json_text(const std::string& text, const std::string& where) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        fail("SchemaError", where + ": " + e.what());
    }
}

inline Json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("ConfigInvalid", "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_json_text(ss.str(), path);
}

inline std::string dump_canonical(const Json& j) { return j.dump(2) + "\n"; }

inline void write_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("ConfigInvalid", "cannot write " + path);
    out << dump_canonical(j);
}

// Inline-or-path: a string entry names a JSON file, resolved against the
// directory of the document that mentioned it; anything else is the document.
inline Json resolve_entry(const Json& entry, const std::string& base_dir) {
    if (!entry.is_string()) return entry;
    std::filesystem::path p = entry.get<std::string>();
    if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
    return read_json_file(p.string());
}

// ---------------------------------------------------------------- labels

inline Json label_to_json(const VertexLabel& l) {
    switch (l.kind) {
        case VertexKind::Atom: return l.symbol;
        case VertexKind::Plus: return "+";
        case VertexKind::Minus: return "-";
        case VertexKind::Alpha: return "alpha";
    }
    return "alpha";
}

inline VertexLabel label_from_json(const Json& j, const std::string& where) {
    std::string s = detail::expect_string(j, where);
    if (s == "+") return VertexLabel::plus();
    if (s == "-") return VertexLabel::minus();
    if (s == "alpha") return VertexLabel::alpha();
    if (s.empty()) fail("SchemaError", where + ": empty vertex label");
    return VertexLabel::atom(s);
}

inline Json edge_label_to_json(const EdgeLabel& l) {
    if (l.is_ionic()) return "ionic";
    return l.cov();
}

inline EdgeLabel edge_label_from_json(const Json& j, const std::string& where) {
    if (j.is_string()) {
        if (j.get<std::string>() == "ionic") return EdgeLabel::ionic();
    } else if (j.is_number_integer()) {
        int n = j.get<int>();
        if (n >= 1 && n <= 4) return EdgeLabel::cov(n);
    }
    fail("SchemaError", where + ": edge label must be 1..4 or \"ionic\"");
}

// ---------------------------------------------------------------- graphs

inline Json graph_to_json(const PreChemGraph& g) {
    Json vs = Json::array();
    for (const auto& [v, l] : g.vertices)
        vs.push_back(Json{{"label", label_to_json(l)}, {"name", v}});
    Json es = Json::array();
    for (const auto& [p, l] : g.edges)
        es.push_back(Json{{"label", edge_label_to_json(l)}, {"u", p.first}, {"v", p.second}});
    return Json{{"edges", std::move(es)}, {"vertices", std::move(vs)}};
}

inline Json oriented_to_json(const OrientedGraph& g) {
    Json out = graph_to_json(g.graph);
    if (!g.p.empty()) {
        Json ts = Json::array();
        for (const auto& t : g.p.orbits()) ts.push_back(Json::array({t[0], t[1], t[2]}));
        out["triangles"] = std::move(ts);
    }
    if (!g.t.empty()) {
        Json qs = Json::array();
        for (const auto& q : g.t.orbits()) qs.push_back(Json::array({q[0], q[1], q[2], q[3]}));
        out["tetrahedra"] = std::move(qs);
    }
    return out;
}

// Accepts the full graph document, orientation keys included; the stored
// triangle/tetrahedron lists are generators and are closed on load.
inline OrientedGraph oriented_from_json(const Json& j, const std::string& where = "graph") {
    detail::expect_object(j, where);
    detail::only_keys(j, {"edges", "tetrahedra", "triangles", "vertices"}, where);
    PreChemGraph g;
    const Json& vs = detail::need(j, "vertices", where);
    detail::expect_array(vs, where + ".vertices");
    for (std::size_t i = 0; i < vs.size(); ++i) {
        std::string at = where + ".vertices[" + std::to_string(i) + "]";
        const Json& v = vs[i];
        detail::expect_object(v, at);
        detail::only_keys(v, {"label", "name"}, at);
        std::string name = detail::expect_string(detail::need(v, "name", at), at + ".name");
        if (name.empty()) fail("SchemaError", at + ": empty vertex name");
        g.add_vertex(name, label_from_json(detail::need(v, "label", at), at + ".label"));
    }
    const Json& es = detail::need(j, "edges", where);
    detail::expect_array(es, where + ".edges");
    for (std::size_t i = 0; i < es.size(); ++i) {
        std::string at = where + ".edges[" + std::to_string(i) + "]";
        const Json& e = es[i];
        detail::expect_object(e, at);
        detail::only_keys(e, {"label", "u", "v"}, at);
        std::string u = detail::expect_string(detail::need(e, "u", at), at + ".u");
        std::string v = detail::expect_string(detail::need(e, "v", at), at + ".v");
        for (const auto& x : {u, v})
            if (!g.has_vertex(x)) fail("DanglingName", at + ": no vertex named " + x);
        g.add_edge(u, v, edge_label_from_json(detail::need(e, "label", at), at + ".label"));
    }
    auto read_tuple = [&](const Json& arr, std::size_t n, const std::string& at) {
        if (!arr.is_array() || arr.size() != n)
            fail("SchemaError", at + ": expected " + std::to_string(n) + " vertex names");
        std::vector<std::string> out;
        for (std::size_t k = 0; k < n; ++k) {
            out.push_back(detail::expect_string(arr[k], at));
            if (!g.has_vertex(out.back()))
                fail("DanglingName", at + ": no vertex named " + out.back());
        }
        return out;
    };
    std::vector<Triple> pg;
    if (j.contains("triangles")) {
        const Json& ts = j["triangles"];
        detail::expect_array(ts, where + ".triangles");
        for (std::size_t i = 0; i < ts.size(); ++i) {
            auto t = read_tuple(ts[i], 3, where + ".triangles[" + std::to_string(i) + "]");
            pg.push_back({t[0], t[1], t[2]});
        }
    }
    std::vector<Quad> tg;
    if (j.contains("tetrahedra")) {
        const Json& qs = j["tetrahedra"];
        detail::expect_array(qs, where + ".tetrahedra");
        for (std::size_t i = 0; i < qs.size(); ++i) {
            auto q = read_tuple(qs[i], 4, where + ".tetrahedra[" + std::to_string(i) + "]");
            tg.push_back({q[0], q[1], q[2], q[3]});
        }
    }
    return make_oriented(std::move(g), pg, tg);
}

inline PreChemGraph graph_from_json(const Json& j, const std::string& where = "graph") {
    return oriented_from_json(j, where).graph;
}

// ------------------------------------------------------- maps and lists

inline Json map_to_json(const VertexMap& m) {
    Json out = Json::array();
    for (const auto& [a, b] : m) out.push_back(Json::array({a, b}));
    return out;
}

inline VertexMap map_from_json(const Json& j, const std::string& where) {
    detail::expect_array(j, where);
    VertexMap out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        std::string at = where + "[" + std::to_string(i) + "]";
        const Json& p = j[i];
        if (!p.is_array() || p.size() != 2)
            fail("SchemaError", at + ": expected a [from, to] pair");
        std::string a = detail::expect_string(p[0], at);
        std::string b = detail::expect_string(p[1], at);
        if (!out.emplace(a, b).second) fail("SchemaError", at + ": repeated key " + a);
    }
    return out;
}

inline Json names_to_json(const std::set<std::string>& s) {
    Json out = Json::array();
    for (const auto& x : s) out.push_back(x);
    return out;
}

inline std::set<std::string> names_from_json(const Json& j, const std::string& where) {
    detail::expect_array(j, where);
    std::set<std::string> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        std::string at = where + "[" + std::to_string(i) + "]";
        if (!out.insert(detail::expect_string(j[i], at)).second)
            fail("SchemaError", at + ": repeated name");
    }
    return out;
}

inline Json counts_to_json(const std::vector<int>& c) {
    Json out = Json::array();
    for (int x : c) out.push_back(x);
    return out;
}

inline std::vector<int> counts_from_json(const Json& j, const std::string& where) {
    detail::expect_array(j, where);
    std::vector<int> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        int x = detail::expect_int(j[i], where + "[" + std::to_string(i) + "]");
        if (x < 0) fail("SchemaError", where + "[" + std::to_string(i) + "]: negative count");
        out.push_back(x);
    }
    return out;
}

// ----------------------------------------------------------------- rules

inline RuleKind rule_kind_from_string(const std::string& s, const std::string& where) {
    for (RuleKind k : {RuleKind::E, RuleKind::Ebar, RuleKind::I, RuleKind::Ibar, RuleKind::C,
                       RuleKind::Cbar})
        if (s == to_string(k)) return k;
    fail("SchemaError", where + ": unknown rule kind \"" + s + "\"");
}

inline Json rule_to_json(const DisconnectionRule& r) {
    Json out{{"kind", to_string(r.kind)}, {"u", r.u}, {"v", r.v}};
    if (!r.a.empty()) out["a"] = r.a;
    if (!r.b.empty()) out["b"] = r.b;
    return out;
}

inline DisconnectionRule rule_from_json(const Json& j, const std::string& where = "rule") {
    detail::expect_object(j, where);
    detail::only_keys(j, {"a", "b", "kind", "u", "v"}, where);
    RuleKind k = rule_kind_from_string(
        detail::expect_string(detail::need(j, "kind", where), where + ".kind"), where + ".kind");
    std::string u = detail::expect_string(detail::need(j, "u", where), where + ".u");
    std::string v = detail::expect_string(detail::need(j, "v", where), where + ".v");
    std::string a = j.contains("a") ? detail::expect_string(j["a"], where + ".a") : "";
    std::string b = j.contains("b") ? detail::expect_string(j["b"], where + ".b") : "";
    return DisconnectionRule::make(k, u, v, a, b);
}

inline Json rules_to_json(const DiscSequence& seq) {
    Json out = Json::array();
    for (const auto& r : seq) out.push_back(rule_to_json(r));
    return out;
}

inline DiscSequence rules_from_json(const Json& j, const std::string& where = "rules") {
    detail::expect_array(j, where);
    DiscSequence out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(rule_from_json(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

// --------------------------------------------------------------- schemes

inline Json scheme_to_json(const ReactionScheme& s) {
    return Json{{"bijection", map_to_json(s.bij)},
                {"left", oriented_to_json(s.left)},
                {"right", oriented_to_json(s.right)}};
}

inline ReactionScheme scheme_from_json(const Json& j, const std::string& where = "scheme") {
    detail::expect_object(j, where);
    detail::only_keys(j, {"bijection", "left", "right"}, where);
    return ReactionScheme::make(
        oriented_from_json(detail::need(j, "left", where), where + ".left"),
        oriented_from_json(detail::need(j, "right", where), where + ".right"),
        map_from_json(detail::need(j, "bijection", where), where + ".bijection"));
}

// ---------------------------------------------------------- environments

inline Json environment_to_json(const Environment& env) {
    Json out = Json::array();
    for (const auto& g : env.entries) out.push_back(graph_to_json(g));
    return out;
}

inline Environment environment_from_json(const Json& j, const std::string& base_dir = "",
                                         const std::string& where = "environment") {
    detail::expect_array(j, where);
    Environment env;
    for (std::size_t i = 0; i < j.size(); ++i) {
        std::string at = where + "[" + std::to_string(i) + "]";
        env.entries.push_back(graph_from_json(resolve_entry(j[i], base_dir), at));
    }
    return env;
}

// ------------------------------------------------------ layer morphisms

inline Json tuple_to_json(const ReactionTuple& t) {
    return Json{{"b", map_to_json(t.b)},
                {"i", map_to_json(t.i)},
                {"u_c", names_to_json(t.u_c)},
                {"u_e", names_to_json(t.u_e)}};
}

inline ReactionTuple tuple_from_json(const Json& j, const std::string& where) {
    detail::expect_object(j, where);
    detail::only_keys(j, {"b", "i", "u_c", "u_e"}, where);
    ReactionTuple t;
    t.u_c = names_from_json(detail::need(j, "u_c", where), where + ".u_c");
    t.u_e = names_from_json(detail::need(j, "u_e", where), where + ".u_e");
    t.b = map_from_json(detail::need(j, "b", where), where + ".b");
    t.i = map_from_json(detail::need(j, "i", where), where + ".i");
    return t;
}

struct MMatchDoc {
    Environment environment;
    MMatchMorphism morphism;
};

struct MDiscDoc {
    Environment environment;
    MDiscMorphism morphism;
};

struct MReactDoc {
    Environment environment;
    MReactMorphism morphism;
};

inline Json mmatch_to_json(const Environment& env, const MMatchMorphism& f) {
    return Json{{"b", map_to_json(f.b)},
                {"counts", counts_to_json(f.counts)},
                {"environment", environment_to_json(env)},
                {"m", map_to_json(f.m)},
                {"source", oriented_to_json(f.source)},
                {"target", oriented_to_json(f.target)}};
}

inline MMatchDoc mmatch_from_json(const Json& j, const std::string& base_dir = "",
                                  const std::string& where = "morphism") {
    detail::expect_object(j, where);
    detail::only_keys(j, {"b", "counts", "environment", "m", "source", "target"}, where);
    MMatchDoc d;
    d.environment = environment_from_json(detail::need(j, "environment", where), base_dir,
                                          where + ".environment");
    d.morphism.source = oriented_from_json(detail::need(j, "source", where), where + ".source");
    d.morphism.target = oriented_from_json(detail::need(j, "target", where), where + ".target");
    d.morphism.m = map_from_json(detail::need(j, "m", where), where + ".m");
    d.morphism.counts = counts_from_json(detail::need(j, "counts", where), where + ".counts");
    d.morphism.b = map_from_json(detail::need(j, "b", where), where + ".b");
    return d;
}

inline Json mdisc_to_json(const Environment& env, const MDiscMorphism& d) {
    return Json{{"counts", counts_to_json(d.counts)},
                {"environment", environment_to_json(env)},
                {"rules", rules_to_json(d.rules)},
                {"source", graph_to_json(d.source)},
                {"target", graph_to_json(d.target)}};
}

inline MDiscDoc mdisc_from_json(const Json& j, const std::string& base_dir = "",
                                const std::string& where = "morphism") {
    detail::expect_object(j, where);
    detail::only_keys(j, {"counts", "environment", "rules", "source", "target"}, where);
    MDiscDoc d;
    d.environment = environment_from_json(detail::need(j, "environment", where), base_dir,
                                          where + ".environment");
    d.morphism.source = graph_from_json(detail::need(j, "source", where), where + ".source");
    d.morphism.counts = counts_from_json(detail::need(j, "counts", where), where + ".counts");
    d.morphism.rules = rules_from_json(detail::need(j, "rules", where), where + ".rules");
    d.morphism.target = graph_from_json(detail::need(j, "target", where), where + ".target");
    return d;
}

inline Json mreact_body_to_json(const MReactMorphism& r) {
    return Json{{"counts", counts_to_json(r.counts)},
                {"source", graph_to_json(r.source)},
                {"target", graph_to_json(r.target)},
                {"tuple", tuple_to_json(r.tuple)}};
}

inline MReactMorphism mreact_body_from_json(const Json& j, const std::string& where) {
    detail::expect_object(j, where);
    detail::only_keys(j, {"counts", "source", "target", "tuple"}, where);
    MReactMorphism r;
    r.source = graph_from_json(detail::need(j, "source", where), where + ".source");
    r.target = graph_from_json(detail::need(j, "target", where), where + ".target");
    r.counts = counts_from_json(detail::need(j, "counts", where), where + ".counts");
    r.tuple = tuple_from_json(detail::need(j, "tuple", where), where + ".tuple");
    return r;
}

inline Json mreact_to_json(const Environment& env, const MReactMorphism& r) {
    Json out = mreact_body_to_json(r);
    out["environment"] = environment_to_json(env);
    return out;
}

inline MReactDoc mreact_from_json(const Json& j, const std::string& base_dir = "",
                                  const std::string& where = "morphism") {
    detail::expect_object(j, where);
    detail::only_keys(j, {"counts", "environment", "source", "target", "tuple"}, where);
    MReactDoc d;
    d.environment = environment_from_json(detail::need(j, "environment", where), base_dir,
                                          where + ".environment");
    Json body = j;
    body.erase("environment");
    d.morphism = mreact_body_from_json(body, where);
    return d;
}

// --------------------------------------------------------------- config

// The oracle stays a command line here; the caller wires it to a process.
struct ParsedConfig {
    SearchConfig search;
    std::string oracle_command;
};

inline ParsedConfig config_from_json(const Json& j, const std::string& base_dir = "",
                                     const std::string& where = "config") {
    detail::expect_object(j, where);
    detail::only_keys(j,
                      {"beam", "environments", "families", "jobs", "known", "max_candidates",
                       "max_cuts", "max_copies", "max_depth", "max_matchings", "oracle",
                       "schemes"},
                      where);
    ParsedConfig out;
    SearchConfig& c = out.search;
    if (j.contains("families")) {
        const Json& fs = j["families"];
        detail::expect_array(fs, where + ".families");
        c.families.clear();
        for (std::size_t i = 0; i < fs.size(); ++i) {
            std::string at = where + ".families[" + std::to_string(i) + "]";
            c.families.push_back(rule_kind_from_string(detail::expect_string(fs[i], at), at));
        }
    }
    if (j.contains("schemes")) {
        const Json& ss = j["schemes"];
        detail::expect_array(ss, where + ".schemes");
        for (std::size_t i = 0; i < ss.size(); ++i) {
            std::string at = where + ".schemes[" + std::to_string(i) + "]";
            c.schemes.push_back(scheme_from_json(resolve_entry(ss[i], base_dir), at));
        }
    }
    if (j.contains("environments")) {
        const Json& es = j["environments"];
        detail::expect_array(es, where + ".environments");
        for (std::size_t i = 0; i < es.size(); ++i) {
            std::string at = where + ".environments[" + std::to_string(i) + "]";
            c.environments.push_back(
                environment_from_json(resolve_entry(es[i], base_dir), base_dir, at));
        }
    }
    if (j.contains("known")) {
        const Json& ks = j["known"];
        detail::expect_array(ks, where + ".known");
        for (std::size_t i = 0; i < ks.size(); ++i) {
            std::string at = where + ".known[" + std::to_string(i) + "]";
            c.known.push_back(graph_from_json(resolve_entry(ks[i], base_dir), at));
        }
    }
    if (j.contains("oracle"))
        out.oracle_command = detail::expect_string(j["oracle"], where + ".oracle");
    auto whole = [&](const char* key, auto& slot) {
        if (!j.contains(key)) return;
        int x = detail::expect_int(j[key], where + "." + key);
        if (x < 0) fail("SchemaError", where + "." + key + ": negative value");
        slot = static_cast<std::remove_reference_t<decltype(slot)>>(x);
    };
    whole("max_depth", c.max_depth);
    whole("max_cuts", c.max_cuts);
    whole("max_copies", c.max_copies);
    whole("beam", c.beam);
    whole("max_candidates", c.max_candidates);
    whole("max_matchings", c.max_matchings);
    whole("jobs", c.jobs);
    return out;
}

inline Json config_to_json(const ParsedConfig& pc) {
    const SearchConfig& c = pc.search;
    Json fams = Json::array();
    for (RuleKind k : c.families) fams.push_back(to_string(k));
    Json schemes = Json::array();
    for (const auto& s : c.schemes) schemes.push_back(scheme_to_json(s));
    Json envs = Json::array();
    for (const auto& e : c.environments) envs.push_back(environment_to_json(e));
    Json known = Json::array();
    for (const auto& g : c.known) known.push_back(graph_to_json(g));
    Json out{{"beam", c.beam},
             {"environments", std::move(envs)},
             {"families", std::move(fams)},
             {"jobs", c.jobs},
             {"known", std::move(known)},
             {"max_candidates", c.max_candidates},
             {"max_cuts", c.max_cuts},
             {"max_copies", c.max_copies},
             {"max_depth", c.max_depth},
             {"max_matchings", c.max_matchings},
             {"schemes", std::move(schemes)}};
    if (!pc.oracle_command.empty()) out["oracle"] = pc.oracle_command;
    return out;
}

// ---------------------------------------------------------------- routes

struct RouteDoc {
    bool solved = false;
    std::string outcome;
    RetroSequence stages;
};

inline Json route_to_json(const RouteDoc& r) {
    Json stages = Json::array();
    for (const auto& st : r.stages)
        stages.push_back(Json{{"environment", environment_to_json(st.environment)},
                              {"reaction", mreact_body_to_json(st.reaction)}});
    return Json{{"outcome", r.outcome}, {"solved", r.solved}, {"stages", std::move(stages)}};
}

inline Json route_to_json(const RetroResult& r) {
    return route_to_json(RouteDoc{r.solved, r.outcome, r.sequence});
}

inline RouteDoc route_from_json(const Json& j, const std::string& where = "route") {
    detail::expect_object(j, where);
    detail::only_keys(j, {"outcome", "solved", "stages"}, where);
    RouteDoc r;
    const Json& solved = detail::need(j, "solved", where);
    if (!solved.is_boolean()) fail("SchemaError", where + ".solved: expected a boolean");
    r.solved = solved.get<bool>();
    r.outcome = detail::expect_string(detail::need(j, "outcome", where), where + ".outcome");
    const Json& stages = detail::need(j, "stages", where);
    detail::expect_array(stages, where + ".stages");
    for (std::size_t i = 0; i < stages.size(); ++i) {
        std::string at = where + ".stages[" + std::to_string(i) + "]";
        const Json& st = stages[i];
        detail::expect_object(st, at);
        detail::only_keys(st, {"environment", "reaction"}, at);
        RetroStage stage;
        stage.environment = environment_from_json(detail::need(st, "environment", at), "",
                                                  at + ".environment");
        stage.reaction = mreact_body_from_json(detail::need(st, "reaction", at), at + ".reaction");
        r.stages.push_back(std::move(stage));
    }
    return r;
}

// -------------------------------------------------------------- rendering

// One vertex per line as "name label", then one line per bond written with
// the endpoint labels, the mark giving the order, and the names after it.
inline std::string render(const PreChemGraph& g) {
    if (g.vertices.empty()) return "(empty)\n";
    std::ostringstream out;
    for (const auto& [v, l] : g.vertices) out << v << ' ' << l.str() << '\n';
    for (const auto& [p, l] : g.edges) {
        std::string mark = "~";
        if (!l.is_ionic()) {
            static const char* marks[] = {"", "-1-", "=2=", "≡3≡", "#4#"};
            mark = marks[l.cov()];
        }
        out << g.label(p.first).str() << ' ' << mark << ' ' << g.label(p.second).str() << "  ("
            << p.first << ", " << p.second << ")\n";
    }
    return out.str();
}

inline std::string render(const OrientedGraph& g) {
    std::string out = render(g.graph);
    std::ostringstream extra;
    for (const auto& t : g.p.orbits())
        extra << "triangle (" << t[0] << ", " << t[1] << ", " << t[2] << ")\n";
    for (const auto& q : g.t.orbits())
        extra << "tetrahedron (" << q[0] << ", " << q[1] << ", " << q[2] << ", " << q[3] << ")\n";
    return out + extra.str();
}

// ------------------------------------------------------- valence overlay

inline void load_valence_overlay(const std::string& path,
                                 ValenceTable& table = ValenceTable::active()) {
    Json j = read_json_file(path);
    if (!j.is_object())
        fail("ConfigInvalid", path + ": valence table must map element symbols to units");
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!it.value().is_number_integer())
            fail("ConfigInvalid", path + ": valence for " + it.key() + " must be an integer");
        table.set(it.key(), it.value().get<int>());
    }
}

// Honours RETROGRAPH_VALENCE_TABLE when set; a no-op otherwise.
inline void apply_valence_overlay_from_env() {
    const char* p = std::getenv("RETROGRAPH_VALENCE_TABLE");
    if (p != nullptr && *p != '\0') load_valence_overlay(p);
}

}  // namespace retrograph
