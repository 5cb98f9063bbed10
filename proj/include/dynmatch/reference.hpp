#ifndef DYNMATCH_REFERENCE_HPP
#define DYNMATCH_REFERENCE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "dynmatch/graph_core.hpp"
#include "dynmatch/matcher.hpp"

namespace dynmatch {

/// Recompute-from-scratch dynamic matcher: after every update the whole
/// local matching is erased and greedy runs over the full graph. O(m) per
/// update; the baseline the lookahead matcher is measured against.
struct OracleState {
    EdgeList graph;
    MateStore store;
    Matching matching;
    OpCounters counters;

    explicit OracleState(MateStore s) : store(std::move(s)) {}

    static OracleState dense(std::size_t n) { return OracleState(MateStore::dense(n)); }
    static OracleState sparse() { return OracleState(MateStore::ordered_map()); }

    /// Counters with the store's work folded in.
    OpCounters totals() const;
};

void baseline_step(OracleState& state, const UpdateOp& update);

enum class ViolationKind { symmetry, edge_not_in_graph, expandable_edge };

struct Violation {
    ViolationKind kind;
    VertexId vertex = kNoVertex;
    Edge edge;

    std::string describe() const;
};

/// Passes iff mates are symmetric and every mated pair is an edge of `graph`.
/// O(|graph| + matched vertices) on success.
std::optional<Violation> check_valid(const EdgeList& graph, const MateStore& store);

/// Passes iff no edge of `graph` has two free endpoints. Assumes check_valid
/// passed.
std::optional<Violation> check_maximal(const EdgeList& graph, const MateStore& store);

/// Independent edge-set tracker used to verify that the graphs maintained by
/// an algorithm match a direct replay of the stream. Dense universes use an
/// n*n byte table, sparse ones a hash set.
class EdgeSetOracle {
public:
    explicit EdgeSetOracle(std::optional<std::size_t> vertex_count);

    void apply(const UpdateOp& update);
    std::size_t size() const noexcept { return size_; }
    bool contains(const Edge& e) const;

    /// Empty when `graph` holds exactly the tracked edges, each once;
    /// otherwise a description of the first mismatch.
    std::optional<std::string> compare(const EdgeList& graph);

private:
    std::optional<std::size_t> n_;
    std::vector<unsigned char> table_;
    std::unordered_set<Edge, EdgeHash> edges_;
    std::size_t size_ = 0;
};

/// Lockstep checker: replays each update into a recompute baseline and an
/// edge-set oracle, then verifies a candidate (graph, mates) pair.
class DifferentialVerifier {
public:
    explicit DifferentialVerifier(std::optional<std::size_t> vertex_count);

    void apply(const UpdateOp& update);

    /// Empty on success; otherwise the first violation found.
    std::optional<std::string> check(const EdgeList& graph, const MateStore& store);

    const OracleState& baseline() const noexcept { return baseline_; }

private:
    OracleState baseline_;
    EdgeSetOracle oracle_;
};

}  // namespace dynmatch

#endif  // DYNMATCH_REFERENCE_HPP
