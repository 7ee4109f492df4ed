#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tempus::branch {

enum class NodeKind { InitialInstability, Branch, DegradedSink };
enum class FluxTag { Driving, Degraded };
enum class Orientation { Forward, Reversed };

const char* to_string(NodeKind k);
const char* to_string(FluxTag t);

struct BranchSystem {
    std::string id;
    NodeKind kind = NodeKind::Branch;
    double stored_energy = 0.0;
    double entropy_in = 0.0;
    double entropy_out = 0.0;
};

struct EnergyFlux {
    std::string source;
    std::string target;
    double amount = 0.0;
    FluxTag tag = FluxTag::Driving;
};

struct BranchGraph {
    std::vector<BranchSystem> nodes;
    std::vector<EnergyFlux> edges;
    Orientation orientation = Orientation::Forward;

    std::optional<std::size_t> index_of(const std::string& id) const;
};

// --- validation ----------------------------------------------------------

enum class ViolationCode {
    DuplicateId,
    UnknownEndpoint,
    NonPositiveAmount,
    Cycle,
    NoSource,
    MultipleSources,
    MissingDrivingInput,
    EnergyImbalance,
    DegradedPlacement,
    SinkWithOutput,
    EntropyDecrease,
};

struct Violation {
    ViolationCode code;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool valid() const { return violations.empty(); }
    bool has(ViolationCode code) const;
};

// Checks acyclicity, unique initial instability, driving inputs on every
// branch, energy balance (in = stored + out within 1e-9 at branches),
// degraded-edge placement (branch -> sink only), and entropy monotonicity
// per branch.
ValidationReport validate_graph(const BranchGraph& graph);

// --- causal structure ------------------------------------------------------

enum class CausalRelation { CauseOf, EffectOf, Unrelated };

// Reachability along driving edges; a node is never its own cause.
CausalRelation causally_related(const BranchGraph& graph, const std::string& a,
                                const std::string& b);

struct GlobalArrowReport {
    Orientation orientation = Orientation::Forward;
    std::string source_id;
    bool well_oriented = false;  // every driving edge on a path from the source
};

GlobalArrowReport global_arrow(const BranchGraph& graph);

// Cumulative count of messages (incoming driving edges from nodes off the
// path) along an observer worldline; always nondecreasing.
std::vector<std::size_t> observer_information(const BranchGraph& graph,
                                              const std::vector<std::string>& path);

// Edge directions flipped, entropy_in/out swapped, orientation tag flipped.
BranchGraph time_reverse_graph(const BranchGraph& graph);

struct MirrorReport {
    bool symmetric = false;
    bool exact = false;  // false beyond 24 nodes: invariant-based heuristic only
};

// Isomorphism between the graph and its time reversal (exact backtracking
// search with invariant pruning up to 24 nodes).
MirrorReport is_mirror_symmetric(const BranchGraph& graph);

// --- JSON ------------------------------------------------------------------

BranchGraph graph_from_json_string(const std::string& text);
BranchGraph graph_from_json_file(const std::string& path);
std::string graph_to_json_string(const BranchGraph& graph);

// Six-box reference cascade mirroring the usual diagram: an initial
// instability driving a chain of branches, degraded energy leaving each box
// to the right into sinks.
BranchGraph reference_cascade();

// Valid-by-construction random layered DAG; used by the property suites.
BranchGraph random_valid_graph(std::uint64_t seed, std::size_t n_branches);

}  // namespace tempus::branch
