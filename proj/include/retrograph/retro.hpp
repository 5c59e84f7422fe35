#pragma once

// Generic retrosynthetic search over the layered reaction categories.
//
// A step disconnects a target T into synthons S (a chain of rules over the
// empty environment), dissolves the synthons into synthetic equivalents E by
// folding their stubs into bond units of adjoined environment copies (a
// matching S -> E), and derives the justifying reaction r : E -> T + B by
// translating the reversed chain. Candidate reactions are accepted against a
// scheme library, an external oracle, or the union of both.

#include <retrograph/layers.hpp>

#include <algorithm>
#include <functional>
#include <future>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace retrograph {

// A rule kind and its inverse form one family; search filters admit whole
// families, so a chain and its reversal are always expressible together.
inline RuleKind rule_family(RuleKind k) {
    switch (k) {
        case RuleKind::Ebar: return RuleKind::E;
        case RuleKind::Ibar: return RuleKind::I;
        case RuleKind::Cbar: return RuleKind::C;
        default: return k;
    }
}

inline std::vector<PreChemGraph> component_graphs(const PreChemGraph& g) {
    std::vector<PreChemGraph> out;
    for (const auto& c : components(g)) out.push_back(induced_subgraph(g, c));
    return out;
}

// Does haystack hold a sub-collection of components isomorphic to needle's
// components, respecting multiplicity? Greedy pairing is sound because
// isomorphic components are interchangeable.
inline bool contains_components(const PreChemGraph& haystack, const PreChemGraph& needle) {
    auto hs = component_graphs(haystack);
    std::vector<bool> used(hs.size(), false);
    for (const auto& n : component_graphs(needle)) {
        bool hit = false;
        for (std::size_t j = 0; j < hs.size() && !hit; ++j)
            if (!used[j] && is_isomorphic(hs[j], n)) used[j] = hit = true;
        if (!hit) return false;
    }
    return true;
}

// Coarse distance between what a candidate produced and what was wanted: the
// number of wanted vertices left without a like-labelled partner.
inline int label_deficit(const PreChemGraph& produced, const PreChemGraph& wanted) {
    std::map<std::string, int> have;
    for (const auto& [v, l] : produced.vertices) ++have[l.str()];
    int missing = 0;
    for (const auto& [v, l] : wanted.vertices) {
        auto it = have.find(l.str());
        if (it != have.end() && it->second > 0)
            --it->second;
        else
            ++missing;
    }
    return missing;
}

// ---------------------------------------------------------------- retro step

// One retrosynthetic step. The target T is disconnected into synthons S over
// the empty environment, S dissolves into the synthetic equivalents E against
// the environment M, and r justifies the reversal as a reaction from E to the
// target plus the byproduct B.
struct RetroStep {
    PreChemGraph target;       // T
    PreChemGraph byproduct;    // B
    Environment environment;   // M
    PreChemGraph synthons;     // S, components are the synthons
    PreChemGraph equivalents;  // E, components are the synthetic equivalents
    MDiscMorphism d;           // T -> S over the empty environment
    MMatchMorphism m;          // S -> E over M
    MReactMorphism r;          // E -> T + B over M
};

inline std::vector<Violation> validate_step(const RetroStep& s,
                                            const ValenceTable& vt = ValenceTable::active()) {
    std::vector<Violation> out;
    auto molecular = [&](const PreChemGraph& g, const std::string& who) {
        if (!is_molecular(g))
            out.push_back({"NotMolecular", who + " contains alpha vertices"});
        else if (!is_chemical(g, vt))
            out.push_back({"NotChemical", who + " breaks the valence bound"});
    };
    molecular(s.target, "the target");
    molecular(s.byproduct, "the byproduct");
    molecular(s.equivalents, "the equivalents graph");
    for (auto& v : validate_environment(s.environment, vt))
        out.push_back({v.code, "environment: " + v.detail});
    for (auto& v : validate_chemical(s.synthons, vt))
        out.push_back({v.code, "synthons: " + v.detail});

    if (!s.d.counts.empty())
        out.push_back({"SchemaError", "d must live over the empty environment"});
    else
        for (auto& v : validate_mdisc(Environment{}, s.d, vt))
            out.push_back({v.code, "d: " + v.detail});
    if (s.d.source != s.target) out.push_back({"BoundaryMismatch", "d does not start at the target"});
    if (s.d.target != s.synthons)
        out.push_back({"BoundaryMismatch", "d does not end at the synthons"});

    if (!same_oriented(s.m.source, OrientedGraph(s.synthons)))
        out.push_back({"BoundaryMismatch", "m does not start at the synthons"});
    if (!same_oriented(s.m.target, OrientedGraph(s.equivalents)))
        out.push_back({"BoundaryMismatch", "m does not end at the equivalents"});
    for (auto& v : validate_mmatch(s.environment, s.m, vt))
        out.push_back({v.code, "m: " + v.detail});

    if (s.r.source != s.equivalents)
        out.push_back({"BoundaryMismatch", "r does not start at the equivalents"});
    bool disjoint = true;
    for (const auto& [v, l] : s.byproduct.vertices)
        if (s.target.has_vertex(v)) disjoint = false;
    if (!disjoint) {
        out.push_back({"RepeatedElement", "target and byproduct share vertex names"});
    } else {
        PreChemGraph tb = s.target;
        for (const auto& [v, l] : s.byproduct.vertices) tb.add_vertex(v, l);
        for (const auto& [p, l] : s.byproduct.edges) tb.edges[p] = l;
        if (s.r.target != tb)
            out.push_back({"BoundaryMismatch", "r does not end at the target plus the byproduct"});
    }
    for (auto& v : validate_mreact(s.environment, s.r, vt))
        out.push_back({v.code, "r: " + v.detail});
    return out;
}

// ------------------------------------------------------------ retro sequence

// Stage i holds the reaction r_i turning the stage's equivalents into the
// previous stage's input plus byproducts, over the stage's own environment.
struct RetroStage {
    Environment environment;
    MReactMorphism reaction;
};

using RetroSequence = std::vector<RetroStage>;

// Stages chain: what stage i consumes must be produced by stage i+1,
// component for component up to isomorphism.
inline std::vector<Violation> validate_sequence(const RetroSequence& seq,
                                                const ValenceTable& vt = ValenceTable::active()) {
    std::vector<Violation> out;
    for (std::size_t i = 0; i < seq.size(); ++i)
        for (auto& v : validate_mreact(seq[i].environment, seq[i].reaction, vt))
            out.push_back({v.code, "stage " + std::to_string(i + 1) + ": " + v.detail});
    for (std::size_t i = 0; i + 1 < seq.size(); ++i)
        if (!contains_components(seq[i + 1].reaction.target, seq[i].reaction.source))
            out.push_back({"BrokenChain", "stage " + std::to_string(i + 1) +
                                              " consumes entities that stage " +
                                              std::to_string(i + 2) + " does not produce"});
    return out;
}

// Forward reading of a sequence: starting from the deepest equivalents, each
// stage reproduces the input of the stage before it, ending at the first
// stage's products. Fails when the chaining is broken.
inline PreChemGraph forward_replay(const RetroSequence& seq,
                                   const ValenceTable& vt = ValenceTable::active()) {
    if (seq.empty()) fail("SchemaError", "cannot replay an empty sequence");
    auto vs = validate_sequence(seq, vt);
    if (!vs.empty()) fail(vs.front().code.c_str(), vs.front().detail);
    return seq.front().reaction.target;
}

// --------------------------------------------------------------- step search

// How steps are searched for.
//  - families: disconnection rule families admitted in the chain and in the
//    translated matching; a family covers a kind together with its inverse.
//  - schemes / oracle: at least one must be given. A candidate is accepted
//    when some scheme instance on its equivalents produces a graph containing
//    the step input, or when the oracle, asked about the equivalents, offers
//    a product collection isomorphic to the derived reaction's codomain.
//    With both given, acceptance is their union. The oracle must be safe to
//    call from several threads when jobs exceeds one.
//  - environments: tried in order, fewer copies first.
//  - known: molecular entities needing no further disconnection.
struct SearchConfig {
    std::vector<RuleKind> families = {RuleKind::E, RuleKind::I, RuleKind::C};
    std::vector<ReactionScheme> schemes;
    std::function<std::vector<PreChemGraph>(const PreChemGraph&)> oracle;
    std::vector<Environment> environments;
    std::vector<PreChemGraph> known;
    int max_depth = 8;                 // sequence length bound
    int max_cuts = 1;                  // disconnection rules per step
    int max_copies = 1;                // copies of one environment entry per step
    std::size_t beam = 32;             // synthon graphs kept per step
    std::size_t max_candidates = 256;  // dissolution candidates tried per step
    std::size_t max_matchings = 64;    // scheme matchings examined per candidate
    unsigned jobs = 1;                 // parallel candidate evaluation
};

// One examined candidate. Failed candidates keep the nearest product graph
// and how far it fell short, so callers can see what almost worked.
struct StepAttempt {
    std::string what;       // candidate description
    PreChemGraph produced;  // product graph reached, when one was derived
    int deficit = -1;       // label_deficit against the wanted graph, -1 when none was derived
    bool accepted = false;
};

struct StepOutcome {
    std::optional<RetroStep> step;  // first accepted candidate in search order
    std::vector<StepAttempt> attempts;
};

namespace detail {

inline void check_search_config(const SearchConfig& cfg, const ValenceTable& vt) {
    if (cfg.schemes.empty() && !cfg.oracle)
        fail("ConfigInvalid", "a scheme library or an oracle is required");
    if (cfg.max_depth < 0) fail("ConfigInvalid", "max_depth must be nonnegative");
    if (cfg.max_cuts < 1) fail("ConfigInvalid", "max_cuts must be at least one");
    if (cfg.max_copies < 0) fail("ConfigInvalid", "max_copies must be nonnegative");
    if (cfg.beam == 0 || cfg.max_candidates == 0 || cfg.max_matchings == 0)
        fail("ConfigInvalid", "beam, max_candidates and max_matchings must be positive");
    for (std::size_t i = 0; i < cfg.environments.size(); ++i) {
        auto vs = validate_environment(cfg.environments[i], vt);
        if (!vs.empty())
            fail("ConfigInvalid",
                 "environment " + std::to_string(i + 1) + ": " + vs.front().detail);
    }
    for (std::size_t i = 0; i < cfg.known.size(); ++i)
        if (classify(cfg.known[i]) != GraphClass::MolecularEntity ||
            !is_chemical(cfg.known[i], vt))
            fail("ConfigInvalid",
                 "known entry " + std::to_string(i + 1) + " is not a molecular entity");
    for (const auto& s : cfg.schemes) {
        auto v = check_scheme(s.left, s.right, s.bij);
        if (!v.ok) fail("ConfigInvalid", "scheme: " + v.reason);
    }
}

struct CutChain {
    DiscSequence rules;
    PreChemGraph reached;
};

inline std::string describe_rules(const DiscSequence& rules) {
    std::string out;
    for (const auto& r : rules) {
        if (!out.empty()) out += " ";
        out += to_string(r.kind);
        out += "{" + r.u + "," + r.v + "}";
    }
    return out.empty() ? "none" : out;
}

// Bounded breadth-first enumeration of disconnection chains over the allowed
// kinds, deduplicated up to isomorphism of the reached graph.
inline std::vector<CutChain> enumerate_cut_chains(const PreChemGraph& target,
                                                  const std::vector<RuleKind>& kinds, int max_cuts,
                                                  std::size_t beam, const ValenceTable& vt) {
    std::vector<CutChain> kept;
    std::vector<PreChemGraph> seen{target};
    std::vector<CutChain> frontier{{DiscSequence{}, target}};
    for (int depth = 0; depth < max_cuts && kept.size() < beam; ++depth) {
        std::vector<CutChain> next;
        for (const auto& ch : frontier) {
            if (kept.size() >= beam) break;
            for (const auto& inst : enumerate_rule_instances(ch.reached, kinds, vt)) {
                CutChain ext{ch.rules, apply_rule(inst, ch.reached, vt)};
                ext.rules.push_back(inst);
                bool dup = std::any_of(seen.begin(), seen.end(), [&](const PreChemGraph& g) {
                    return is_isomorphic(g, ext.reached);
                });
                if (dup) continue;
                seen.push_back(ext.reached);
                kept.push_back(ext);
                next.push_back(kept.back());
                if (kept.size() >= beam) break;
            }
        }
        frontier = std::move(next);
    }
    return kept;
}

// How the stubs of a synthon graph fold into copy bond units: fold sends each
// alpha vertex to a copy vertex, spent says how many units each copy edge
// gave up. Each spent unit feeds exactly two stubs, one per endpoint.
struct FoldPlan {
    VertexMap fold;
    std::map<std::pair<std::string, std::string>, int> spent;
};

inline void fold_plans(const std::vector<std::string>& pool,
                       const std::vector<std::pair<std::string, std::string>>& units,
                       std::map<std::pair<std::string, std::string>, int>& room, FoldPlan& cur,
                       std::vector<FoldPlan>& out, std::size_t cap) {
    if (out.size() >= cap) return;
    if (pool.empty()) {
        out.push_back(cur);
        return;
    }
    const std::string a = pool.front();
    for (const auto& unit : units) {
        if (room[unit] <= 0) continue;
        --room[unit];
        ++cur.spent[unit];
        for (std::size_t i = 1; i < pool.size(); ++i) {
            std::vector<std::string> rest;
            rest.reserve(pool.size() - 2);
            for (std::size_t j = 1; j < pool.size(); ++j)
                if (j != i) rest.push_back(pool[j]);
            for (int flip = 0; flip < 2; ++flip) {
                cur.fold[a] = flip ? unit.second : unit.first;
                cur.fold[pool[i]] = flip ? unit.first : unit.second;
                fold_plans(rest, units, room, cur, out, cap);
            }
            cur.fold.erase(a);
            cur.fold.erase(pool[i]);
        }
        ++room[unit];
        if (--cur.spent[unit] == 0) cur.spent.erase(unit);
    }
}

// Copy counts ordered by total first, then lexicographically.
inline std::vector<std::vector<int>> count_vectors(std::size_t arity, int max_copies) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(arity, 0);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == arity) {
            out.push_back(cur);
            return;
        }
        for (int c = 0; c <= max_copies; ++c) {
            cur[i] = c;
            rec(i + 1);
            cur[i] = 0;
        }
    };
    rec(0);
    std::sort(out.begin(), out.end(), [](const std::vector<int>& a, const std::vector<int>& b) {
        int sa = std::accumulate(a.begin(), a.end(), 0);
        int sb = std::accumulate(b.begin(), b.end(), 0);
        if (sa != sb) return sa < sb;
        return a < b;
    });
    return out;
}

struct CandidateVerdict {
    std::optional<RetroStep> step;
    std::vector<StepAttempt> attempts;
};

// Evaluates one dissolution candidate end to end: build the equivalents,
// validate the matching, translate, derive the reaction, and test acceptance.
inline CandidateVerdict evaluate_dissolution(const PreChemGraph& target, const CutChain& chain,
                                             const Environment& env,
                                             const std::vector<int>& counts, const FoldPlan& plan,
                                             const std::string& label, const SearchConfig& cfg,
                                             const std::set<RuleKind>& fam,
                                             const ValenceTable& vt) {
    CandidateVerdict out;
    auto reject = [&](const std::string& why) {
        out.attempts.push_back({label + ": " + why, PreChemGraph{}, -1, false});
    };

    const PreChemGraph& s = chain.reached;
    AssemblyResult copies = env_assemble_above(env, counts, s);

    // equivalents: drop the stubs, adjoin the copies minus the spent units,
    // and anchor each stub's neighbour to the fold image
    PreChemGraph e;
    for (const auto& [v, l] : s.vertices)
        if (!l.is_alpha()) e.add_vertex(v, l);
    for (const auto& [p, l] : s.edges)
        if (e.has_vertex(p.first) && e.has_vertex(p.second)) e.edges[p] = l;
    for (const auto& [v, l] : copies.graph.vertices) e.add_vertex(v, l);
    for (const auto& [p, l] : copies.graph.edges) {
        if (l.is_ionic()) {
            e.edges[p] = l;
            continue;
        }
        auto it = plan.spent.find(p);
        int left = l.cov() - (it == plan.spent.end() ? 0 : it->second);
        if (left > 0) e.edges[p] = EdgeLabel::cov(left);
    }
    for (const auto& [a, x] : plan.fold) {
        auto u = s.unique_single_neighbor(a);
        if (!u) {
            reject("stub " + a + " has no anchor");
            return out;
        }
        if (e.edge(*u, x).cov() != 0 || e.edge(*u, x).is_ionic()) {
            reject("fold of " + a + " doubles an existing bond");
            return out;
        }
        e.set_edge(*u, x, EdgeLabel::cov(1));
    }
    if (!is_molecular(e) || !is_chemical(e, vt)) {
        reject("equivalents are not molecular");
        return out;
    }

    VertexMap mm;
    for (const auto& [v, l] : s.vertices) mm[v] = l.is_alpha() ? plan.fold.at(v) : v;
    VertexMap bb;
    for (const auto& [v, l] : copies.graph.vertices) bb[v] = v;
    MMatchMorphism match{OrientedGraph(s), OrientedGraph(e), mm, counts, bb};
    {
        auto vs = validate_mmatch(env, match, vt);
        if (!vs.empty()) {
            reject("matching rejected: " + vs.front().detail);
            return out;
        }
    }

    MDiscMorphism dissolved;
    try {
        dissolved = functor_D(env, match, vt);
    } catch (const RgError& ex) {
        reject(std::string("dissolution not expressible: ") + ex.what());
        return out;
    }
    for (const auto& r : dissolved.rules)
        if (!fam.count(rule_family(r.kind))) {
            reject("translated matching leaves the allowed rule families");
            return out;
        }

    // the reaction: undo the dissolution, then undo the cuts
    DiscSequence undo;
    {
        DiscSequence full = chain.rules;
        full.insert(full.end(), dissolved.rules.begin(), dissolved.rules.end());
        for (auto it = full.rbegin(); it != full.rend(); ++it) undo.push_back(inverse(*it));
    }
    PreChemGraph tb = adjoin_copies(target, copies);
    MDiscMorphism back{e, std::vector<int>(counts.size(), 0), undo, tb};
    {
        auto vs = validate_mdisc(env, back, vt);
        if (!vs.empty()) {
            reject("reversal rejected: " + vs.front().detail);
            return out;
        }
    }
    MReactMorphism rm = functor_R(env, back, vt);

    bool accepted = false;
    std::string how;
    for (std::size_t si = 0; si < cfg.schemes.size() && !accepted; ++si) {
        const auto& scheme = cfg.schemes[si];
        auto ms = enumerate_matchings(scheme.left, OrientedGraph(e), cfg.max_matchings);
        for (std::size_t k = 0; k < ms.size() && !accepted; ++k) {
            PreChemGraph got = dpo_apply(scheme, ms[k], OrientedGraph(e)).result.graph;
            if (contains_components(got, target)) {
                accepted = true;
                how = "scheme " + std::to_string(si + 1) + " instance " + std::to_string(k + 1);
            } else {
                out.attempts.push_back({label + ": scheme " + std::to_string(si + 1) +
                                            " instance " + std::to_string(k + 1) +
                                            " misses the step input",
                                        got, label_deficit(got, target), false});
            }
        }
    }
    if (!accepted && cfg.oracle) {
        auto offers = cfg.oracle(e);
        if (offers.empty()) reject("oracle offered nothing");
        for (std::size_t k = 0; k < offers.size() && !accepted; ++k) {
            if (is_isomorphic(offers[k], tb)) {
                accepted = true;
                how = "oracle offer " + std::to_string(k + 1);
            } else {
                out.attempts.push_back({label + ": oracle offer " + std::to_string(k + 1) +
                                            " differs from the codomain",
                                        offers[k], label_deficit(offers[k], tb), false});
            }
        }
    }
    if (!accepted) {
        if (out.attempts.empty()) reject("no scheme instance applies");
        return out;
    }

    RetroStep step;
    step.target = target;
    step.byproduct = copies.graph;
    step.environment = env;
    step.synthons = s;
    step.equivalents = e;
    step.d = MDiscMorphism{target, {}, chain.rules, s};
    step.m = match;
    step.r = rm;
    auto vs = validate_step(step, vt);
    if (!vs.empty())
        fail("InvariantViolation",
             "search built an invalid step: " + vs.front().code + ": " + vs.front().detail);
    out.attempts.push_back({label + ": accepted via " + how, rm.target, 0, true});
    out.step = std::move(step);
    return out;
}

}  // namespace detail

// Searches for one retrosynthetic step on the given molecular graph. Returns
// the first accepted candidate in deterministic search order, along with a
// record of every candidate examined before acceptance.
inline StepOutcome search_step(const PreChemGraph& target, const SearchConfig& cfg,
                               const ValenceTable& vt = ValenceTable::active()) {
    detail::check_search_config(cfg, vt);
    if (!is_molecular(target) || !is_chemical(target, vt))
        fail("ConfigInvalid", "the step input must be a molecular graph");

    std::set<RuleKind> fam;
    for (RuleKind k : cfg.families) fam.insert(rule_family(k));
    std::vector<RuleKind> cut_kinds;
    for (RuleKind k : {RuleKind::E, RuleKind::I, RuleKind::C})
        if (fam.count(k)) cut_kinds.push_back(k);

    auto chains = detail::enumerate_cut_chains(target, cut_kinds, cfg.max_cuts, cfg.beam, vt);

    struct Cand {
        const detail::CutChain* chain;
        Environment env;
        std::vector<int> counts;
        detail::FoldPlan plan;
        std::string label;
    };
    std::vector<Cand> cands;
    for (std::size_t ci = 0; ci < chains.size() && cands.size() < cfg.max_candidates; ++ci) {
        const auto& ch = chains[ci];
        auto aset = ch.reached.alpha_set();
        std::vector<std::string> alphas(aset.begin(), aset.end());
        std::string head = "cut " + detail::describe_rules(ch.rules);
        if (alphas.empty()) {
            // nothing to dissolve; the step lives over the empty environment
            cands.push_back({&ch, Environment{}, {}, {}, head + "; no dissolution"});
            continue;
        }
        if (alphas.size() % 2) continue;  // stubs pair up; an odd count cannot dissolve
        for (std::size_t ei = 0; ei < cfg.environments.size() && cands.size() < cfg.max_candidates;
             ++ei) {
            const Environment& env = cfg.environments[ei];
            for (const auto& counts : detail::count_vectors(env.entries.size(), cfg.max_copies)) {
                if (cands.size() >= cfg.max_candidates) break;
                if (std::accumulate(counts.begin(), counts.end(), 0) == 0) continue;
                AssemblyResult copies = env_assemble_above(env, counts, ch.reached);
                std::vector<std::pair<std::string, std::string>> units;
                std::map<std::pair<std::string, std::string>, int> room;
                int capacity = 0;
                for (const auto& [p, l] : copies.graph.edges)
                    if (l.cov() > 0) {
                        units.push_back(p);
                        room[p] = l.cov();
                        capacity += l.cov();
                    }
                if (2 * capacity < static_cast<int>(alphas.size())) continue;
                std::vector<detail::FoldPlan> plans;
                detail::FoldPlan seedp;
                detail::fold_plans(alphas, units, room, seedp, plans,
                                   cfg.max_candidates - cands.size());
                for (auto& plan : plans) {
                    std::string cs;
                    for (std::size_t i = 0; i < counts.size(); ++i)
                        cs += (i ? "," : "") + std::to_string(counts[i]);
                    std::string fs;
                    for (const auto& [a, x] : plan.fold) fs += " " + a + ">" + x;
                    cands.push_back({&ch, env, counts, std::move(plan),
                                     head + "; env " + std::to_string(ei + 1) + " x" + cs +
                                         "; fold" + fs});
                }
            }
        }
    }

    StepOutcome out;
    auto evaluate = [&](const Cand& c) {
        return detail::evaluate_dissolution(target, *c.chain, c.env, c.counts, c.plan, c.label,
                                            cfg, fam, vt);
    };
    if (cfg.jobs <= 1) {
        for (const auto& c : cands) {
            auto v = evaluate(c);
            for (auto& a : v.attempts) out.attempts.push_back(std::move(a));
            if (v.step) {
                out.step = std::move(v.step);
                break;
            }
        }
        return out;
    }
    // parallel evaluation in blocks, merged in enumeration order so the
    // outcome matches the sequential one
    for (std::size_t base = 0; base < cands.size() && !out.step; base += cfg.jobs) {
        std::size_t hi = std::min(cands.size(), base + static_cast<std::size_t>(cfg.jobs));
        std::vector<std::future<detail::CandidateVerdict>> part;
        for (std::size_t i = base; i < hi; ++i)
            part.push_back(
                std::async(std::launch::async, [&, i] { return evaluate(cands[i]); }));
        for (auto& f : part) {
            auto v = f.get();
            if (out.step) continue;  // past the first acceptance, drop the rest
            for (auto& a : v.attempts) out.attempts.push_back(std::move(a));
            if (v.step) out.step = std::move(v.step);
        }
    }
    return out;
}

// ------------------------------------------------------------ full procedure

struct RetroResult {
    RetroSequence sequence;        // first stage reproduces the target
    std::vector<RetroStep> steps;  // steps[i] produced sequence[i]
    bool solved = false;
    std::string outcome;           // "known", "no-step" or "depth-bound"
    std::vector<StepAttempt> trace;
};

// Iterates step search from the target until every synthetic equivalent is a
// known entity, no step is found, or the depth bound is hit. The returned
// sequence always validates; a partial one is returned on failure.
inline RetroResult run_retrosynthesis(const PreChemGraph& target, const SearchConfig& cfg,
                                      const ValenceTable& vt = ValenceTable::active()) {
    detail::check_search_config(cfg, vt);
    if (classify(target) != GraphClass::MolecularEntity || !is_chemical(target, vt))
        fail("ConfigInvalid", "the target must be a molecular entity");

    auto all_known = [&](const PreChemGraph& g) {
        for (const auto& part : component_graphs(g)) {
            bool hit = std::any_of(cfg.known.begin(), cfg.known.end(), [&](const PreChemGraph& k) {
                return is_isomorphic(part, k);
            });
            if (!hit) return false;
        }
        return true;
    };
    auto finish = [&](RetroResult r) {
        auto vs = validate_sequence(r.sequence, vt);
        if (!vs.empty())
            fail("InvariantViolation", "search produced a broken sequence: " + vs.front().detail);
        return r;
    };

    RetroResult res;
    PreChemGraph cur = target;
    if (all_known(cur)) {
        res.solved = true;
        res.outcome = "known";
        return finish(res);
    }
    for (int depth = 0; depth < cfg.max_depth; ++depth) {
        StepOutcome so = search_step(cur, cfg, vt);
        for (auto& a : so.attempts) res.trace.push_back(std::move(a));
        if (!so.step) {
            res.outcome = "no-step";
            return finish(res);
        }
        res.sequence.push_back({so.step->environment, so.step->r});
        cur = so.step->equivalents;
        res.steps.push_back(std::move(*so.step));
        if (all_known(cur)) {
            res.solved = true;
            res.outcome = "known";
            return finish(res);
        }
    }
    res.outcome = "depth-bound";
    return finish(res);
}

}  // namespace retrograph
