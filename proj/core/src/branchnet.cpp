#include "tempus/branchnet.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <queue>
#include <sstream>

#include <json.hpp>

#include "tempus/errors.hpp"
#include "tempus/rng.hpp"

namespace tempus::branch {

const char* to_string(NodeKind k) {
    switch (k) {
        case NodeKind::InitialInstability: return "initial_instability";
        case NodeKind::Branch: return "branch";
        default: return "degraded_sink";
    }
}

const char* to_string(FluxTag t) {
    return t == FluxTag::Driving ? "driving" : "degraded";
}

std::optional<std::size_t> BranchGraph::index_of(const std::string& id) const {
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].id == id) return i;
    return std::nullopt;
}

bool ValidationReport::has(ViolationCode code) const {
    return std::any_of(violations.begin(), violations.end(),
                       [code](const Violation& v) { return v.code == code; });
}

namespace {

struct AdjacencyView {
    std::map<std::string, std::size_t> index;
    std::vector<std::vector<std::size_t>> out_edges;  // node -> edge ids
    std::vector<std::vector<std::size_t>> in_edges;
    bool ok = true;
};

AdjacencyView build_adjacency(const BranchGraph& g, ValidationReport* report) {
    AdjacencyView adj;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        auto [it, inserted] = adj.index.emplace(g.nodes[i].id, i);
        if (!inserted && report) {
            report->violations.push_back(
                {ViolationCode::DuplicateId, "duplicate node id: " + g.nodes[i].id});
            adj.ok = false;
        }
    }
    adj.out_edges.resize(g.nodes.size());
    adj.in_edges.resize(g.nodes.size());
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        auto si = adj.index.find(g.edges[e].source);
        auto ti = adj.index.find(g.edges[e].target);
        if (si == adj.index.end() || ti == adj.index.end()) {
            if (report)
                report->violations.push_back({ViolationCode::UnknownEndpoint,
                                              "edge references unknown node: " +
                                                  g.edges[e].source + " -> " +
                                                  g.edges[e].target});
            adj.ok = false;
            continue;
        }
        adj.out_edges[si->second].push_back(e);
        adj.in_edges[ti->second].push_back(e);
    }
    return adj;
}

}  // namespace

ValidationReport validate_graph(const BranchGraph& g) {
    ValidationReport report;
    AdjacencyView adj = build_adjacency(g, &report);

    for (const auto& e : g.edges) {
        if (e.amount <= 0.0)
            report.violations.push_back(
                {ViolationCode::NonPositiveAmount,
                 "edge " + e.source + " -> " + e.target + " has non-positive amount"});
    }

    // Kahn acyclicity on well-formed edges.
    if (adj.ok) {
        std::vector<std::size_t> indeg(g.nodes.size(), 0);
        for (std::size_t i = 0; i < g.nodes.size(); ++i) indeg[i] = adj.in_edges[i].size();
        std::queue<std::size_t> ready;
        for (std::size_t i = 0; i < g.nodes.size(); ++i)
            if (indeg[i] == 0) ready.push(i);
        std::size_t seen = 0;
        while (!ready.empty()) {
            std::size_t u = ready.front();
            ready.pop();
            ++seen;
            for (std::size_t e : adj.out_edges[u]) {
                std::size_t v = adj.index.at(g.edges[e].target);
                if (--indeg[v] == 0) ready.push(v);
            }
        }
        if (seen != g.nodes.size())
            report.violations.push_back({ViolationCode::Cycle, "graph contains a cycle"});
    }

    std::size_t sources = 0;
    for (const auto& n : g.nodes)
        if (n.kind == NodeKind::InitialInstability) ++sources;
    if (sources == 0)
        report.violations.push_back({ViolationCode::NoSource, "no initial instability"});
    else if (sources > 1)
        report.violations.push_back(
            {ViolationCode::MultipleSources, "more than one initial instability"});

    if (adj.ok) {
        for (std::size_t i = 0; i < g.nodes.size(); ++i) {
            const auto& node = g.nodes[i];
            if (node.kind == NodeKind::Branch) {
                bool has_driving_in = false;
                double in_sum = 0.0, out_sum = 0.0;
                for (std::size_t e : adj.in_edges[i]) {
                    in_sum += g.edges[e].amount;
                    if (g.edges[e].tag == FluxTag::Driving) has_driving_in = true;
                }
                for (std::size_t e : adj.out_edges[i]) out_sum += g.edges[e].amount;
                if (!has_driving_in)
                    report.violations.push_back({ViolationCode::MissingDrivingInput,
                                                 "branch without driving input: " + node.id});
                double imbalance = in_sum - node.stored_energy - out_sum;
                if (std::abs(imbalance) > 1e-9)
                    report.violations.push_back(
                        {ViolationCode::EnergyImbalance,
                         "energy imbalance at " + node.id + ": " + std::to_string(imbalance)});
                if (node.entropy_out < node.entropy_in)
                    report.violations.push_back(
                        {ViolationCode::EntropyDecrease,
                         "entropy decreases across branch " + node.id});
            }
            if (node.kind == NodeKind::DegradedSink && !adj.out_edges[i].empty())
                report.violations.push_back(
                    {ViolationCode::SinkWithOutput, "sink has outgoing edges: " + node.id});
        }
        for (const auto& e : g.edges) {
            if (e.tag == FluxTag::Degraded) {
                const auto& src = g.nodes[adj.index.at(e.source)];
                const auto& dst = g.nodes[adj.index.at(e.target)];
                if (dst.kind != NodeKind::DegradedSink || src.kind != NodeKind::Branch)
                    report.violations.push_back(
                        {ViolationCode::DegradedPlacement,
                         "degraded edge must run branch -> sink: " + e.source + " -> " +
                             e.target});
            }
        }
    }
    return report;
}

namespace {

// Reachability over driving edges only.
bool reaches(const BranchGraph& g, const AdjacencyView& adj, std::size_t from,
             std::size_t to) {
    std::vector<char> seen(g.nodes.size(), 0);
    std::queue<std::size_t> frontier;
    frontier.push(from);
    seen[from] = 1;
    while (!frontier.empty()) {
        std::size_t u = frontier.front();
        frontier.pop();
        for (std::size_t e : adj.out_edges[u]) {
            if (g.edges[e].tag != FluxTag::Driving) continue;
            std::size_t v = adj.index.at(g.edges[e].target);
            if (v == to) return true;
            if (!seen[v]) {
                seen[v] = 1;
                frontier.push(v);
            }
        }
    }
    return false;
}

}  // namespace

CausalRelation causally_related(const BranchGraph& graph, const std::string& a,
                                const std::string& b) {
    auto ia = graph.index_of(a);
    auto ib = graph.index_of(b);
    if (!ia || !ib) throw UnknownNode("causally_related: unknown node");
    if (*ia == *ib) return CausalRelation::Unrelated;  // no self-causation
    AdjacencyView adj = build_adjacency(graph, nullptr);
    if (!adj.ok) throw UnknownNode("causally_related: malformed graph");
    if (reaches(graph, adj, *ia, *ib)) return CausalRelation::CauseOf;
    if (reaches(graph, adj, *ib, *ia)) return CausalRelation::EffectOf;
    return CausalRelation::Unrelated;
}

GlobalArrowReport global_arrow(const BranchGraph& graph) {
    std::vector<std::size_t> sources;
    for (std::size_t i = 0; i < graph.nodes.size(); ++i)
        if (graph.nodes[i].kind == NodeKind::InitialInstability) sources.push_back(i);
    if (sources.size() != 1)
        throw NoUniqueSource("global_arrow: graph does not define a unique instability");

    AdjacencyView adj = build_adjacency(graph, nullptr);
    if (!adj.ok) throw UnknownNode("global_arrow: malformed graph");

    auto edges_covered = [&](bool flipped) {
        // Every driving edge must lie on a directed path from the source,
        // i.e. its (possibly flipped) source node is reachable.
        std::vector<char> seen(graph.nodes.size(), 0);
        std::queue<std::size_t> frontier;
        frontier.push(sources[0]);
        seen[sources[0]] = 1;
        while (!frontier.empty()) {
            std::size_t u = frontier.front();
            frontier.pop();
            const auto& ids = flipped ? adj.in_edges[u] : adj.out_edges[u];
            for (std::size_t e : ids) {
                if (graph.edges[e].tag != FluxTag::Driving) continue;
                const auto& next_id =
                    flipped ? graph.edges[e].source : graph.edges[e].target;
                std::size_t v = adj.index.at(next_id);
                if (!seen[v]) {
                    seen[v] = 1;
                    frontier.push(v);
                }
            }
        }
        for (const auto& e : graph.edges) {
            if (e.tag != FluxTag::Driving) continue;
            std::size_t tail = adj.index.at(flipped ? e.target : e.source);
            if (!seen[tail]) return false;
        }
        return true;
    };

    GlobalArrowReport rep;
    rep.source_id = graph.nodes[sources[0]].id;
    if (edges_covered(false)) {
        rep.orientation = Orientation::Forward;
        rep.well_oriented = true;
    } else if (edges_covered(true)) {
        rep.orientation = Orientation::Reversed;
        rep.well_oriented = true;
    } else {
        rep.orientation = graph.orientation;
        rep.well_oriented = false;
    }
    return rep;
}

std::vector<std::size_t> observer_information(const BranchGraph& graph,
                                              const std::vector<std::string>& path) {
    std::vector<std::size_t> series;
    if (path.empty()) return series;
    AdjacencyView adj = build_adjacency(graph, nullptr);
    if (!adj.ok) throw UnknownNode("observer_information: malformed graph");

    std::vector<std::size_t> idx;
    for (const auto& id : path) {
        auto i = graph.index_of(id);
        if (!i) throw UnknownNode("observer_information: unknown node " + id);
        idx.push_back(*i);
    }
    for (std::size_t s = 0; s + 1 < idx.size(); ++s) {
        bool linked = false;
        for (std::size_t e : adj.out_edges[idx[s]]) {
            if (graph.edges[e].tag == FluxTag::Driving &&
                adj.index.at(graph.edges[e].target) == idx[s + 1]) {
                linked = true;
                break;
            }
        }
        if (!linked)
            throw PathViolatesOrder("observer_information: path does not follow edges");
    }

    std::vector<char> on_path(graph.nodes.size(), 0);
    for (std::size_t i : idx) on_path[i] = 1;
    std::size_t cumulative = 0;
    for (std::size_t i : idx) {
        for (std::size_t e : adj.in_edges[i]) {
            if (graph.edges[e].tag != FluxTag::Driving) continue;
            if (!on_path[adj.index.at(graph.edges[e].source)]) ++cumulative;
        }
        series.push_back(cumulative);
    }
    return series;
}

BranchGraph time_reverse_graph(const BranchGraph& graph) {
    BranchGraph out = graph;
    for (auto& n : out.nodes) std::swap(n.entropy_in, n.entropy_out);
    for (auto& e : out.edges) std::swap(e.source, e.target);
    out.orientation = (graph.orientation == Orientation::Forward) ? Orientation::Reversed
                                                                  : Orientation::Forward;
    return out;
}

namespace {

struct NodeSignature {
    NodeKind kind;
    double stored;
    double s_in;
    double s_out;
    std::size_t deg_in_driving, deg_in_degraded, deg_out_driving, deg_out_degraded;

    bool operator==(const NodeSignature& o) const {
        return kind == o.kind && stored == o.stored && s_in == o.s_in && s_out == o.s_out &&
               deg_in_driving == o.deg_in_driving && deg_in_degraded == o.deg_in_degraded &&
               deg_out_driving == o.deg_out_driving && deg_out_degraded == o.deg_out_degraded;
    }
    bool operator<(const NodeSignature& o) const {
        auto key = [](const NodeSignature& s) {
            return std::make_tuple(static_cast<int>(s.kind), s.stored, s.s_in, s.s_out,
                                   s.deg_in_driving, s.deg_in_degraded, s.deg_out_driving,
                                   s.deg_out_degraded);
        };
        return key(*this) < key(o);
    }
};

std::vector<NodeSignature> signatures(const BranchGraph& g) {
    AdjacencyView adj = build_adjacency(g, nullptr);
    std::vector<NodeSignature> sigs(g.nodes.size());
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        NodeSignature s{};
        s.kind = g.nodes[i].kind;
        s.stored = g.nodes[i].stored_energy;
        s.s_in = g.nodes[i].entropy_in;
        s.s_out = g.nodes[i].entropy_out;
        for (std::size_t e : adj.in_edges[i])
            (g.edges[e].tag == FluxTag::Driving ? s.deg_in_driving : s.deg_in_degraded)++;
        for (std::size_t e : adj.out_edges[i])
            (g.edges[e].tag == FluxTag::Driving ? s.deg_out_driving : s.deg_out_degraded)++;
        sigs[i] = s;
    }
    return sigs;
}

// Backtracking isomorphism between two graphs with equal node counts.
bool isomorphic(const BranchGraph& a, const BranchGraph& b) {
    const std::size_t n = a.nodes.size();
    if (b.nodes.size() != n || a.edges.size() != b.edges.size()) return false;

    auto sig_a = signatures(a);
    auto sig_b = signatures(b);
    {
        auto sa = sig_a;
        auto sb = sig_b;
        std::sort(sa.begin(), sa.end());
        std::sort(sb.begin(), sb.end());
        if (!(sa == sb)) return false;
    }

    // Edge lookup for b: (source, target) -> (tag, amount) list.
    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::pair<FluxTag, double>>>
        b_edges;
    AdjacencyView adj_b = build_adjacency(b, nullptr);
    for (const auto& e : b.edges) {
        b_edges[{adj_b.index.at(e.source), adj_b.index.at(e.target)}].push_back(
            {e.tag, e.amount});
    }
    AdjacencyView adj_a = build_adjacency(a, nullptr);

    std::vector<long> mapping(n, -1);
    std::vector<char> used(n, 0);

    std::function<bool(std::size_t)> extend = [&](std::size_t u) -> bool {
        if (u == n) return true;
        for (std::size_t v = 0; v < n; ++v) {
            if (used[v] || !(sig_a[u] == sig_b[v])) continue;
            // Check consistency with already-mapped neighbors.
            bool ok = true;
            for (std::size_t e : adj_a.out_edges[u]) {
                std::size_t w = adj_a.index.at(a.edges[e].target);
                if (mapping[w] < 0) continue;
                auto it = b_edges.find({v, static_cast<std::size_t>(mapping[w])});
                if (it == b_edges.end() ||
                    std::none_of(it->second.begin(), it->second.end(),
                                 [&](const auto& te) {
                                     return te.first == a.edges[e].tag &&
                                            te.second == a.edges[e].amount;
                                 })) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            for (std::size_t e : adj_a.in_edges[u]) {
                std::size_t w = adj_a.index.at(a.edges[e].source);
                if (mapping[w] < 0) continue;
                auto it = b_edges.find({static_cast<std::size_t>(mapping[w]), v});
                if (it == b_edges.end() ||
                    std::none_of(it->second.begin(), it->second.end(),
                                 [&](const auto& te) {
                                     return te.first == a.edges[e].tag &&
                                            te.second == a.edges[e].amount;
                                 })) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            used[v] = 1;
            mapping[u] = static_cast<long>(v);
            if (extend(u + 1)) return true;
            used[v] = 0;
            mapping[u] = -1;
        }
        return false;
    };
    return extend(0);
}

}  // namespace

MirrorReport is_mirror_symmetric(const BranchGraph& graph) {
    MirrorReport rep;
    BranchGraph rev = time_reverse_graph(graph);
    if (graph.nodes.size() > 24) {
        // Invariant multiset comparison only; flagged as non-exact.
        auto sa = signatures(graph);
        auto sb = signatures(rev);
        std::sort(sa.begin(), sa.end());
        std::sort(sb.begin(), sb.end());
        rep.symmetric = (sa == sb);
        rep.exact = false;
        return rep;
    }
    rep.symmetric = isomorphic(graph, rev);
    rep.exact = true;
    return rep;
}

// --- JSON ---------------------------------------------------------------

namespace {

NodeKind kind_from_string(const std::string& s) {
    if (s == "initial_instability") return NodeKind::InitialInstability;
    if (s == "branch") return NodeKind::Branch;
    if (s == "degraded_sink") return NodeKind::DegradedSink;
    throw ConfigInvalid("unknown node kind: " + s);
}

FluxTag tag_from_string(const std::string& s) {
    if (s == "driving") return FluxTag::Driving;
    if (s == "degraded") return FluxTag::Degraded;
    throw ConfigInvalid("unknown flux tag: " + s);
}

}  // namespace

BranchGraph graph_from_json_string(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    BranchGraph g;
    for (const auto& jn : j.at("nodes")) {
        BranchSystem node;
        node.id = jn.at("id").get<std::string>();
        node.kind = kind_from_string(jn.at("kind").get<std::string>());
        node.stored_energy = jn.value("stored_energy", 0.0);
        node.entropy_in = jn.value("entropy_in", 0.0);
        node.entropy_out = jn.value("entropy_out", 0.0);
        g.nodes.push_back(std::move(node));
    }
    for (const auto& je : j.at("edges")) {
        EnergyFlux e;
        e.source = je.at("source").get<std::string>();
        e.target = je.at("target").get<std::string>();
        e.amount = je.at("amount").get<double>();
        e.tag = tag_from_string(je.value("tag", std::string{"driving"}));
        g.edges.push_back(std::move(e));
    }
    if (j.contains("orientation"))
        g.orientation = (j["orientation"] == "reversed") ? Orientation::Reversed
                                                         : Orientation::Forward;
    return g;
}

BranchGraph graph_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigInvalid("cannot open graph file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return graph_from_json_string(buf.str());
}

std::string graph_to_json_string(const BranchGraph& graph) {
    nlohmann::json j;
    j["nodes"] = nlohmann::json::array();
    for (const auto& n : graph.nodes) {
        j["nodes"].push_back({{"id", n.id},
                              {"kind", to_string(n.kind)},
                              {"stored_energy", n.stored_energy},
                              {"entropy_in", n.entropy_in},
                              {"entropy_out", n.entropy_out}});
    }
    j["edges"] = nlohmann::json::array();
    for (const auto& e : graph.edges) {
        j["edges"].push_back({{"source", e.source},
                              {"target", e.target},
                              {"amount", e.amount},
                              {"tag", to_string(e.tag)}});
    }
    j["orientation"] = graph.orientation == Orientation::Forward ? "forward" : "reversed";
    return j.dump(2);
}

BranchGraph reference_cascade() {
    // Source drives the unrelated pair A, B; A drives C, which drives D and
    // E; every branch sheds degraded energy into a shared sink on its output
    // side.
    BranchGraph g;
    auto add_node = [&](const std::string& id, NodeKind kind, double stored, double s_in,
                        double s_out) {
        g.nodes.push_back(BranchSystem{id, kind, stored, s_in, s_out});
    };
    auto add_edge = [&](const std::string& s, const std::string& t, double amount,
                        FluxTag tag) {
        g.edges.push_back(EnergyFlux{s, t, amount, tag});
    };
    add_node("source", NodeKind::InitialInstability, 0.0, 0.0, 0.0);
    add_node("A", NodeKind::Branch, 1.0, 0.1, 0.8);
    add_node("B", NodeKind::Branch, 2.0, 0.2, 0.9);
    add_node("C", NodeKind::Branch, 0.5, 0.0, 1.2);
    add_node("D", NodeKind::Branch, 0.5, 0.3, 0.7);
    add_node("E", NodeKind::Branch, 1.0, 0.1, 0.4);
    add_node("sink", NodeKind::DegradedSink, 0.0, 0.0, 0.0);

    add_edge("source", "A", 10.0, FluxTag::Driving);
    add_edge("source", "B", 6.0, FluxTag::Driving);
    add_edge("A", "C", 7.0, FluxTag::Driving);
    add_edge("A", "sink", 2.0, FluxTag::Degraded);
    add_edge("B", "sink", 4.0, FluxTag::Degraded);
    add_edge("C", "D", 2.5, FluxTag::Driving);
    add_edge("C", "E", 2.5, FluxTag::Driving);
    add_edge("C", "sink", 1.5, FluxTag::Degraded);
    add_edge("D", "sink", 2.0, FluxTag::Degraded);
    add_edge("E", "sink", 1.5, FluxTag::Degraded);
    return g;
}

BranchGraph random_valid_graph(std::uint64_t seed, std::size_t n_branches) {
    Rng rng(seed);
    BranchGraph g;
    g.nodes.push_back(BranchSystem{"source", NodeKind::InitialInstability, 0.0, 0.0, 0.0});
    g.nodes.push_back(BranchSystem{"sink", NodeKind::DegradedSink, 0.0, 0.0, 0.0});

    // Layered topology: each branch picks 1-2 upstream drivers.
    const std::size_t n_layers = 2 + rng.uniform_index(3);
    std::vector<std::vector<std::size_t>> layers(n_layers + 1);
    layers[0].push_back(0);  // the source
    for (std::size_t b = 0; b < n_branches; ++b) {
        std::size_t layer = 1 + rng.uniform_index(n_layers);
        BranchSystem node;
        node.id = "b" + std::to_string(b);
        node.kind = NodeKind::Branch;
        double s_in = rng.uniform(0.0, 1.0);
        node.entropy_in = s_in;
        node.entropy_out = s_in + rng.uniform(0.0, 2.0);
        g.nodes.push_back(node);
        layers[layer].push_back(g.nodes.size() - 1);
    }
    // Ensure no empty intermediate layer breaks connectivity: compact layers.
    std::vector<std::vector<std::size_t>> compact;
    compact.push_back(layers[0]);
    for (std::size_t l = 1; l <= n_layers; ++l)
        if (!layers[l].empty()) compact.push_back(layers[l]);

    struct PendingEdge {
        std::size_t src, dst;
    };
    std::vector<PendingEdge> driving;
    for (std::size_t l = 1; l < compact.size(); ++l) {
        for (std::size_t node : compact[l]) {
            std::size_t n_in = 1 + rng.uniform_index(2);
            for (std::size_t k = 0; k < n_in; ++k) {
                const auto& upstream = compact[l - 1 - rng.uniform_index(l) % l];
                std::size_t src = upstream[rng.uniform_index(upstream.size())];
                driving.push_back({src, node});
            }
        }
    }

    // Flow energy through the topology in layer order: every branch keeps a
    // share, degrades a share, and forwards the rest along its driving edges.
    std::vector<double> incoming(g.nodes.size(), 0.0);
    std::vector<std::vector<std::size_t>> out_of(g.nodes.size());
    for (std::size_t e = 0; e < driving.size(); ++e) out_of[driving[e].src].push_back(e);
    std::vector<double> edge_amount(driving.size(), 0.0);

    // Source budget.
    double budget = rng.uniform(5.0, 50.0);
    {
        const auto& ids = out_of[0];
        if (ids.empty()) {
            // No branches at all: emit a trivial valid graph.
            return g;
        }
        for (std::size_t e : ids) edge_amount[e] = budget / static_cast<double>(ids.size());
        for (std::size_t e : ids) incoming[driving[e].dst] += edge_amount[e];
    }
    for (std::size_t l = 1; l < compact.size(); ++l) {
        for (std::size_t node : compact[l]) {
            double in = incoming[node];
            if (in <= 0.0) continue;
            double stored = rng.uniform(0.05, 0.3) * in;
            double degraded = rng.uniform(0.1, 0.4) * in;
            double forward = in - stored - degraded;
            const auto& ids = out_of[node];
            if (ids.empty()) {
                degraded = in - stored;
                forward = 0.0;
            }
            g.nodes[node].stored_energy = stored;
            g.edges.push_back(
                EnergyFlux{g.nodes[node].id, "sink", degraded, FluxTag::Degraded});
            for (std::size_t e : ids) {
                edge_amount[e] = forward / static_cast<double>(ids.size());
                incoming[driving[e].dst] += edge_amount[e];
            }
        }
    }
    for (std::size_t e = 0; e < driving.size(); ++e) {
        if (edge_amount[e] <= 0.0) edge_amount[e] = 1e-6;  // degenerate forward share
        g.edges.push_back(EnergyFlux{g.nodes[driving[e].src].id, g.nodes[driving[e].dst].id,
                                     edge_amount[e], FluxTag::Driving});
    }

    // Fix balance exactly: recompute stored as in - out for each branch.
    AdjacencyView adj = build_adjacency(g, nullptr);
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        if (g.nodes[i].kind != NodeKind::Branch) continue;
        double in = 0.0, out = 0.0;
        for (std::size_t e : adj.in_edges[i]) in += g.edges[e].amount;
        for (std::size_t e : adj.out_edges[i]) out += g.edges[e].amount;
        g.nodes[i].stored_energy = in - out;
    }
    return g;
}

}  // namespace tempus::branch
