#include <doctest.h>

#include "tempus/branchnet.hpp"
#include "tempus/errors.hpp"

using namespace tempus;
using namespace tempus::branch;

namespace {

BranchGraph palindromic_chain() {
    // source -> A -> B -> A' -> source', with attributes arranged so that the
    // reversal is isomorphic to the original. Not a valid causal graph (two
    // instabilities) but a legitimate mirror-symmetry input.
    BranchGraph g;
    g.nodes = {
        {"s0", NodeKind::InitialInstability, 0.0, 0.0, 0.0},
        {"A", NodeKind::Branch, 1.0, 0.2, 0.5},
        {"B", NodeKind::Branch, 2.0, 0.3, 0.3},
        {"A2", NodeKind::Branch, 1.0, 0.5, 0.2},
        {"s1", NodeKind::InitialInstability, 0.0, 0.0, 0.0},
    };
    g.edges = {
        {"s0", "A", 1.0, FluxTag::Driving},
        {"A", "B", 1.0, FluxTag::Driving},
        {"B", "A2", 1.0, FluxTag::Driving},
        {"A2", "s1", 1.0, FluxTag::Driving},
    };
    return g;
}

}  // namespace

TEST_SUITE("branchnet") {

TEST_CASE("the reference cascade validates cleanly") {
    auto g = reference_cascade();
    auto report = validate_graph(g);
    CHECK(report.valid());
}

TEST_CASE("degraded edges may only run branch -> sink") {
    auto g = reference_cascade();
    for (auto& e : g.edges) {
        if (e.tag == FluxTag::Degraded) {
            e.target = "C";  // feed a branch with degraded energy
            break;
        }
    }
    auto report = validate_graph(g);
    CHECK_FALSE(report.valid());
    CHECK(report.has(ViolationCode::DegradedPlacement));
}

TEST_CASE("cycles are detected") {
    auto g = reference_cascade();
    g.edges.push_back({"E", "A", 0.1, FluxTag::Driving});
    auto report = validate_graph(g);
    CHECK(report.has(ViolationCode::Cycle));
}

TEST_CASE("energy imbalance is reported per node") {
    auto g = reference_cascade();
    g.nodes[1].stored_energy += 0.5;  // node A no longer balances
    auto report = validate_graph(g);
    CHECK(report.has(ViolationCode::EnergyImbalance));
}

TEST_CASE("entropy decreasing across a branch is flagged") {
    auto g = reference_cascade();
    g.nodes[1].entropy_out = g.nodes[1].entropy_in - 0.1;
    CHECK(validate_graph(g).has(ViolationCode::EntropyDecrease));
}

TEST_CASE("causal queries follow driving edges") {
    auto g = reference_cascade();
    CHECK(causally_related(g, "C", "D") == CausalRelation::CauseOf);
    CHECK(causally_related(g, "D", "C") == CausalRelation::EffectOf);
    CHECK(causally_related(g, "A", "B") == CausalRelation::Unrelated);
    CHECK(causally_related(g, "source", "E") == CausalRelation::CauseOf);
    CHECK(causally_related(g, "E", "source") == CausalRelation::EffectOf);
    CHECK(causally_related(g, "A", "A") == CausalRelation::Unrelated);
    CHECK_THROWS_AS(causally_related(g, "A", "nope"), UnknownNode);
}

TEST_CASE("global arrow identifies the source and flips under reversal") {
    auto g = reference_cascade();
    auto fwd = global_arrow(g);
    CHECK(fwd.well_oriented);
    CHECK(fwd.orientation == Orientation::Forward);
    CHECK(fwd.source_id == "source");

    auto rev = time_reverse_graph(g);
    auto back = global_arrow(rev);
    CHECK(back.well_oriented);
    CHECK(back.orientation == Orientation::Reversed);
    CHECK(back.source_id == "source");
}

TEST_CASE("graphs without a unique instability have no arrow") {
    auto g = reference_cascade();
    g.nodes[1].kind = NodeKind::InitialInstability;
    CHECK_THROWS_AS(global_arrow(g), NoUniqueSource);
}

TEST_CASE("observer information counts off-path messages") {
    // Worldline o1 -> o2 -> o3 with three message boxes feeding it.
    BranchGraph g;
    g.nodes = {
        {"src", NodeKind::InitialInstability, 0.0, 0.0, 0.0},
        {"o1", NodeKind::Branch, 0.0, 0.0, 0.1},
        {"o2", NodeKind::Branch, 0.0, 0.0, 0.1},
        {"o3", NodeKind::Branch, 0.0, 0.0, 0.1},
        {"m1", NodeKind::Branch, 0.0, 0.0, 0.1},
        {"m2", NodeKind::Branch, 0.0, 0.0, 0.1},
    };
    g.edges = {
        {"src", "o1", 3.0, FluxTag::Driving}, {"o1", "o2", 2.0, FluxTag::Driving},
        {"o2", "o3", 1.0, FluxTag::Driving},  {"src", "m1", 2.0, FluxTag::Driving},
        {"src", "m2", 2.0, FluxTag::Driving}, {"m1", "o2", 1.0, FluxTag::Driving},
        {"m2", "o3", 1.0, FluxTag::Driving},
    };
    auto series = observer_information(g, {"o1", "o2", "o3"});
    REQUIRE(series.size() == 3);
    CHECK(series[0] == 1);  // src -> o1
    CHECK(series[1] == 2);  // + m1 -> o2
    CHECK(series[2] == 3);  // + m2 -> o3
    for (std::size_t i = 1; i < series.size(); ++i) CHECK(series[i] >= series[i - 1]);

    CHECK(observer_information(g, {}).empty());
    CHECK_THROWS_AS(observer_information(g, {"o1", "o3"}), PathViolatesOrder);
}

TEST_CASE("time reversal is an involution that swaps entropies") {
    auto g = reference_cascade();
    auto rev = time_reverse_graph(g);
    CHECK(rev.orientation == Orientation::Reversed);
    CHECK(rev.nodes[1].entropy_in == g.nodes[1].entropy_out);
    CHECK(rev.edges[0].source == g.edges[0].target);
    auto twice = time_reverse_graph(rev);
    CHECK(twice.orientation == g.orientation);
    CHECK(twice.edges[0].source == g.edges[0].source);
    CHECK(twice.nodes[1].entropy_in == g.nodes[1].entropy_in);
}

TEST_CASE("mirror symmetry: palindrome yes, cascade no, single node yes") {
    auto mirror = is_mirror_symmetric(palindromic_chain());
    CHECK(mirror.exact);
    CHECK(mirror.symmetric);

    auto cascade = is_mirror_symmetric(reference_cascade());
    CHECK(cascade.exact);
    CHECK_FALSE(cascade.symmetric);

    BranchGraph single;
    single.nodes = {{"n", NodeKind::Branch, 0.0, 0.0, 0.0}};
    auto rep = is_mirror_symmetric(single);
    CHECK(rep.exact);
    CHECK(rep.symmetric);
}

TEST_CASE("mirror verdict is invariant under reversal") {
    auto g = palindromic_chain();
    CHECK(is_mirror_symmetric(g).symmetric ==
          is_mirror_symmetric(time_reverse_graph(g)).symmetric);
    auto c = reference_cascade();
    CHECK(is_mirror_symmetric(c).symmetric ==
          is_mirror_symmetric(time_reverse_graph(c)).symmetric);
}

TEST_CASE("oversized graphs fall back to the flagged heuristic") {
    BranchGraph g;
    g.nodes.push_back({"src", NodeKind::InitialInstability, 0.0, 0.0, 0.0});
    for (int i = 0; i < 30; ++i)
        g.nodes.push_back({"b" + std::to_string(i), NodeKind::Branch, 1.0, 0.0, 1.0});
    auto rep = is_mirror_symmetric(g);
    CHECK_FALSE(rep.exact);
}

TEST_CASE("random valid graphs validate by construction") {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        auto g = random_valid_graph(seed, 2 + seed % 9);
        auto report = validate_graph(g);
        if (!report.valid()) {
            for (const auto& v : report.violations) MESSAGE(v.message);
        }
        CHECK(report.valid());
    }
}

TEST_CASE("json round trip preserves the structure") {
    auto g = reference_cascade();
    auto text = graph_to_json_string(g);
    auto back = graph_from_json_string(text);
    REQUIRE(back.nodes.size() == g.nodes.size());
    REQUIRE(back.edges.size() == g.edges.size());
    CHECK(back.nodes[1].id == g.nodes[1].id);
    CHECK(back.nodes[1].stored_energy == g.nodes[1].stored_energy);
    CHECK(back.edges[4].tag == g.edges[4].tag);
    CHECK(validate_graph(back).valid());
}

TEST_CASE("missing graph files are reported") {
    CHECK_THROWS_AS(graph_from_json_file("/nonexistent/graph.json"), ConfigInvalid);
}

}  // TEST_SUITE
