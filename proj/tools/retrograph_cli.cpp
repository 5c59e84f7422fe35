// Command line front end. Every subcommand is a thin wrapper: load the
// documents, make one library call, render or serialise the answer.
//
// Exit codes: 0 success; 1 negative verdict (invalid graph, achiral pair,
// not isomorphic); 2 nothing found (no matching, rule not applicable, no
// route); 3 bad input or configuration (any library error).

#include <retrograph/retrograph.hpp>

#include <CLI11.hpp>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <unistd.h>

using namespace retrograph;

namespace {

OrientedGraph load_graph(const std::string& path) {
    return oriented_from_json(read_json_file(path), path);
}

std::string base_dir_of(const std::string& path) {
    return std::filesystem::path(path).parent_path().string();
}

void print_map(const VertexMap& f) {
    for (const auto& [a, b] : f) std::cout << a << " -> " << b << "\n";
}

// The oracle is an external process: one molecular graph as JSON on stdin,
// a JSON list of molecular graphs on stdout. Each call gets its own pair of
// temp files, so the wrapper stays safe under parallel candidate evaluation.
std::function<std::vector<PreChemGraph>(const PreChemGraph&)> make_oracle(std::string command) {
    auto serial = std::make_shared<std::atomic<unsigned>>(0);
    return [command, serial](const PreChemGraph& g) {
        unsigned n = serial->fetch_add(1);
        auto stem = std::filesystem::temp_directory_path() /
                    ("retrograph-oracle-" + std::to_string(::getpid()) + "-" + std::to_string(n));
        std::string in = stem.string() + "-in.json", out = stem.string() + "-out.json";
        write_json_file(in, graph_to_json(g));
        int rc = std::system((command + " < '" + in + "' > '" + out + "'").c_str());
        if (rc != 0) {
            std::filesystem::remove(in);
            std::filesystem::remove(out);
            fail("ConfigInvalid", "oracle command failed: " + command);
        }
        Json j = read_json_file(out);
        std::filesystem::remove(in);
        std::filesystem::remove(out);
        if (!j.is_array()) fail("SchemaError", "oracle output: expected a list of graphs");
        std::vector<PreChemGraph> offers;
        for (std::size_t i = 0; i < j.size(); ++i)
            offers.push_back(graph_from_json(j[i], "oracle output[" + std::to_string(i) + "]"));
        return offers;
    };
}

int run_validate(const std::string& file) {
    auto g = load_graph(file);
    std::cout << render(g);
    std::cout << "class: " << to_string(classify(g.graph)) << "\n";
    auto vs = validate_chemical(g.graph);
    for (const auto& v : vs) std::cout << v.code << ": " << v.detail << "\n";
    std::cout << (vs.empty() ? "valid" : "invalid") << "\n";
    return vs.empty() ? 0 : 1;
}

int run_iso(const std::string& a, const std::string& b) {
    auto ga = load_graph(a).graph;
    auto gb = load_graph(b).graph;
    if (auto f = find_isomorphism(ga, gb)) {
        std::cout << "isomorphic\n";
        print_map(*f);
        return 0;
    }
    std::cout << "not-isomorphic\n";
    return 1;
}

int run_chiral(const std::string& a, const std::string& b, unsigned jobs) {
    auto r = are_chiral(load_graph(a), load_graph(b), jobs);
    if (!r.isomorphic) {
        std::cout << "not-isomorphic\n";
        return 1;
    }
    if (r.chiral) {
        std::cout << "chiral\n";
        print_map(*r.reflecting);
        return 0;
    }
    std::cout << "achiral\n";
    if (r.preserving) print_map(*r.preserving);
    return 1;
}

int run_disconnect(const std::string& gfile, const std::string& rfile) {
    auto g = load_graph(gfile).graph;  // orientation does not survive disconnection
    auto seq = rules_from_json(read_json_file(rfile), rfile);
    auto out = apply_sequence_checked(seq, g);
    if (!out.result) {
        std::cout << "not applicable at index " << out.failed_index << ": " << out.reason << "\n";
        return 2;
    }
    std::cout << dump_canonical(graph_to_json(*out.result));
    return 0;
}

int run_match(const std::string& pfile, const std::string& hfile, std::size_t limit,
              unsigned jobs) {
    auto ms = enumerate_matchings(load_graph(pfile), load_graph(hfile), limit, jobs);
    std::cout << "matchings: " << ms.size() << "\n";
    Json arr = Json::array();
    for (const auto& m : ms) arr.push_back(map_to_json(m));
    std::cout << dump_canonical(arr);
    return ms.empty() ? 2 : 0;
}

int run_react(const std::string& sfile, const std::string& gfile, const std::string& mfile,
              std::size_t limit, unsigned jobs) {
    auto s = scheme_from_json(read_json_file(sfile), sfile);
    auto host = load_graph(gfile);
    VertexMap m;
    if (!mfile.empty()) {
        m = map_from_json(read_json_file(mfile), mfile);
    } else {
        auto ms = enumerate_matchings(s.left, host, limit, jobs);
        std::cout << "matchings: " << ms.size() << "\n";
        if (ms.empty()) return 2;
        m = ms.front();
    }
    auto d = dpo_apply(s, m, host);
    std::cout << dump_canonical(oriented_to_json(d.result));
    return 0;
}

int run_compose(const std::string& first, const std::string& second) {
    auto a = mreact_from_json(read_json_file(first), base_dir_of(first), first);
    auto b = mreact_from_json(read_json_file(second), base_dir_of(second), second);
    if (a.environment.entries != b.environment.entries)
        fail("BoundaryMismatch", "the two documents use different environments");
    auto out = mreact_compose(a.environment, a.morphism, b.morphism);
    std::cout << dump_canonical(mreact_to_json(a.environment, out));
    return 0;
}

int run_translate(const std::string& functor, const std::string& input) {
    Json j = read_json_file(input);
    std::string base = base_dir_of(input);
    if (functor == "D") {
        auto doc = mmatch_from_json(j, base, input);
        auto d = functor_D(doc.environment, doc.morphism);
        std::cout << dump_canonical(mdisc_to_json(doc.environment, d));
        return 0;
    }
    if (functor == "R") {
        auto doc = mdisc_from_json(j, base, input);
        auto r = functor_R(doc.environment, doc.morphism);
        std::cout << dump_canonical(mreact_to_json(doc.environment, r));
        return 0;
    }
    fail("ConfigInvalid", "functor must be D or R");
}

int run_retro(const std::string& tfile, const std::string& cfile, const std::string& known_dir,
              int max_depth, long long max_candidates, unsigned jobs, bool jobs_given,
              const std::string& out_file) {
    auto target = load_graph(tfile).graph;
    auto pc = config_from_json(read_json_file(cfile), base_dir_of(cfile), cfile);
    if (!known_dir.empty()) {
        std::vector<std::filesystem::path> files;
        for (const auto& e : std::filesystem::directory_iterator(known_dir))
            if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
        std::sort(files.begin(), files.end());
        for (const auto& p : files)
            pc.search.known.push_back(graph_from_json(read_json_file(p.string()), p.string()));
    }
    if (max_depth >= 0) pc.search.max_depth = max_depth;
    if (max_candidates >= 0) pc.search.max_candidates = static_cast<std::size_t>(max_candidates);
    if (jobs_given) pc.search.jobs = jobs;
    if (!pc.oracle_command.empty()) pc.search.oracle = make_oracle(pc.oracle_command);

    auto r = run_retrosynthesis(target, pc.search);
    std::cout << "outcome: " << r.outcome << "\n";
    std::cout << "stages: " << r.sequence.size() << "\n";
    for (std::size_t i = 0; i < r.steps.size(); ++i) {
        const auto& s = r.steps[i];
        std::cout << "stage " << i + 1 << ": " << component_graphs(s.equivalents).size()
                  << " equivalents, environment of " << s.environment.entries.size()
                  << ", rules";
        for (const auto& rule : s.d.rules) std::cout << ' ' << to_string(rule.kind);
        std::cout << "\n";
    }
    Json route = route_to_json(r);
    if (!out_file.empty())
        write_json_file(out_file, route);
    else
        std::cout << dump_canonical(route);
    return r.solved ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"chemical graphs, disconnection rules, reactions and retrosynthetic search"};
    app.require_subcommand(1);

    long long seed = 0;  // recorded for reproducibility; the library is deterministic
    unsigned jobs = 1;
    long long max_candidates = -1;
    app.add_option("--seed", seed, "seed recorded in logs; all core operations are deterministic");
    auto* jobs_opt = app.add_option("--jobs", jobs, "parallel workers for enumeration and search")
                         ->check(CLI::PositiveNumber);
    app.add_option("--max-candidates", max_candidates,
                   "cap on dissolution candidates per search step");

    std::string file_a, file_b, graph_file, rules_file, scheme_file, match_file;
    std::string functor, target_file, config_file, known_dir, out_file;
    long long match_limit = 0;
    int max_depth = -1;

    auto* validate = app.add_subcommand("validate", "check a graph document chemically");
    validate->add_option("graph", file_a, "graph JSON file")->required();

    auto* iso = app.add_subcommand("iso", "find a labelled isomorphism between two graphs");
    iso->add_option("first", file_a, "graph JSON file")->required();
    iso->add_option("second", file_b, "graph JSON file")->required();

    auto* chiral = app.add_subcommand("chiral", "compare two oriented encodings");
    chiral->add_option("first", file_a, "graph JSON file")->required();
    chiral->add_option("second", file_b, "graph JSON file")->required();

    auto* disconnect = app.add_subcommand("disconnect", "apply a disconnection sequence");
    disconnect->add_option("--graph", graph_file, "graph JSON file")->required();
    disconnect->add_option("--rules", rules_file, "rule list JSON file")->required();

    auto* match = app.add_subcommand("match", "enumerate matchings of a pattern into a host");
    match->add_option("--pattern", file_a, "pattern graph JSON file")->required();
    match->add_option("--host", file_b, "host graph JSON file")->required();
    match->add_option("--limit", match_limit, "stop after this many matchings (0: all)");

    auto* react = app.add_subcommand("react", "apply a reaction scheme to a graph");
    react->add_option("--scheme", scheme_file, "scheme JSON file")->required();
    react->add_option("--graph", graph_file, "host graph JSON file")->required();
    react->add_option("--match", match_file, "matching JSON file (default: first enumerated)");
    react->add_option("--limit", match_limit, "matching enumeration cap (0: all)");

    auto* compose = app.add_subcommand("compose", "compose two reaction documents");
    compose->add_option("first", file_a, "reaction JSON file")->required();
    compose->add_option("second", file_b, "reaction JSON file")->required();

    auto* translate = app.add_subcommand("translate", "translate a morphism between layers");
    translate->add_option("--functor", functor, "D (matching to disconnection) or R (to reaction)")
        ->required();
    translate->add_option("--input", file_a, "morphism JSON file")->required();

    auto* retro = app.add_subcommand("retro", "search a retrosynthetic route");
    retro->add_option("--target", target_file, "target graph JSON file")->required();
    retro->add_option("--config", config_file, "search configuration JSON file")->required();
    retro->add_option("--known", known_dir, "directory of known-entity graph JSON files");
    retro->add_option("--max-depth", max_depth, "override the configured depth bound");
    retro->add_option("--out", out_file, "write the route JSON here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 3;
    }

    try {
        apply_valence_overlay_from_env();
        if (app.got_subcommand(validate)) return run_validate(file_a);
        if (app.got_subcommand(iso)) return run_iso(file_a, file_b);
        if (app.got_subcommand(chiral)) return run_chiral(file_a, file_b, jobs);
        if (app.got_subcommand(disconnect)) return run_disconnect(graph_file, rules_file);
        if (app.got_subcommand(match))
            return run_match(file_a, file_b, static_cast<std::size_t>(match_limit), jobs);
        if (app.got_subcommand(react))
            return run_react(scheme_file, graph_file, match_file,
                             static_cast<std::size_t>(match_limit), jobs);
        if (app.got_subcommand(compose)) return run_compose(file_a, file_b);
        if (app.got_subcommand(translate)) return run_translate(functor, file_a);
        if (app.got_subcommand(retro))
            return run_retro(target_file, config_file, known_dir, max_depth, max_candidates, jobs,
                             jobs_opt->count() > 0, out_file);
    } catch (const std::exception& e) {  // RgError::what() already carries its code
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 3;
}
