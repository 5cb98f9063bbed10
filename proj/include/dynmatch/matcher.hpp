#ifndef DYNMATCH_MATCHER_HPP
#define DYNMATCH_MATCHER_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "dynmatch/graph_core.hpp"

namespace dynmatch {

enum class UpdateKind { insert, remove };

struct UpdateOp {
    UpdateKind kind = UpdateKind::insert;
    Edge edge;

    friend bool operator==(const UpdateOp&, const UpdateOp&) = default;
};

inline UpdateOp insert_op(VertexId u, VertexId v) { return {UpdateKind::insert, make_edge(u, v)}; }
inline UpdateOp remove_op(VertexId u, VertexId v) { return {UpdateKind::remove, make_edge(u, v)}; }

enum class PhaseMode { single, batch };

struct PhasePlan {
    std::size_t batch_length = 1;
    PhaseMode mode = PhaseMode::single;
    std::size_t m0 = 0;

    friend bool operator==(const PhasePlan&, const PhasePlan&) = default;
};

/// Work counters. Every field is monotone over a run.
///
/// `list_writes` charges every list element read or written by list updates,
/// splits and merges. `indicator_ops` and `mate_ops` charge one unit per
/// access plus one per key comparison in the tree-backed strategies.
struct OpCounters {
    std::uint64_t updates_processed = 0;
    std::uint64_t greedy_edge_visits = 0;
    std::uint64_t list_writes = 0;
    std::uint64_t indicator_ops = 0;
    std::uint64_t mate_ops = 0;
    std::uint64_t recursion_depth_max = 0;
    std::uint64_t setup_ops = 0;
    std::uint64_t batch_phases = 0;
    std::uint64_t single_phases = 0;

    /// Sum of the four per-operation work counters.
    std::uint64_t total_work() const noexcept {
        return greedy_edge_visits + list_writes + indicator_ops + mate_ops;
    }
};

/// Graphs with fewer edges than this are handled one update at a time.
inline constexpr std::size_t kDefaultThreshold = 42;

/// Decides how the next phase of one recursion level runs.
///
/// `m0` is the level's current edge count and `remaining` the number of
/// updates still owed by the level (for the unbounded top level, at most
/// m0 + 1 are peeked). A batch always has fewer than m0 updates, which is what
/// makes every recursive call strictly smaller; this is also why thresholds
/// below 2 behave like 2.
///
/// Throws std::invalid_argument when remaining == 0.
PhasePlan plan_phase(std::size_t m0, std::size_t remaining, std::size_t threshold,
                     std::optional<std::size_t> phase_override = std::nullopt);

/// Distinct edges named by `batch`, in first-occurrence order. `scratch` is
/// used for deduplication and is left all-zero on return.
EdgeList collect_batch_edges(std::span<const UpdateOp> batch, EdgeIndicator& scratch);

struct SplitResult {
    EdgeList difference;    // G - G'
    EdgeList intersection;  // G ∩ G'
};

/// Partitions `graph` by membership in `batch_edges`, preserving order.
/// Requires `indicator` all-zero on entry and restores that state.
SplitResult split_graph(const EdgeList& graph, const EdgeList& batch_edges,
                        EdgeIndicator& indicator);

/// Graph and local matching owned by one recursion level.
struct LevelState {
    EdgeList graph;
    Matching matching;
};

/// Unmates every edge of the level's local matching and empties it.
void erase_local_matching(LevelState& level, MateStore& store, OpCounters& counters);

/// Small-graph path: erase the local matching, apply `update` to the level
/// graph, rerun greedy. Returns the change in edge count (-1, 0 or +1).
int handle_single_update(LevelState& level, const UpdateOp& update, MateStore& store,
                         OpCounters& counters);

struct MatcherConfig {
    /// Declared vertex universe; required by the dense and matrix strategies.
    std::optional<std::size_t> vertex_count;
    IndicatorStrategy indicator = IndicatorStrategy::lazy_matrix;
    MateStrategy mate = MateStrategy::dense;
    IndicatorSetup indicator_setup = IndicatorSetup::lazy;
    std::size_t threshold = kDefaultThreshold;
    /// Fixed batch length, used only to replay hand-traced examples.
    std::optional<std::size_t> phase_override;
};

struct PhaseEvent {
    std::size_t depth = 0;
    PhasePlan plan;
};

/// Optional instrumentation. Hooks run synchronously inside
/// run_until_buffer_consumed() and must not push updates or run the matcher.
struct MatcherHooks {
    /// After each update is fully applied; the matcher state is consistent.
    std::function<void(std::uint64_t index, const UpdateOp&)> after_update;
    /// At both indicator phase boundaries of a batch phase. `batch_edges` is
    /// null before the indicator is first used and points at G' once it has
    /// been reset.
    std::function<void(const PhaseEvent&, const EdgeIndicator&, const EdgeList* batch_edges)>
        phase_boundary;
    /// After greedy ran on G - G', before the recursive call.
    std::function<void(const PhaseEvent&, const EdgeList& difference)> phase_split;
    /// After the recursive call returned, before G - G' is merged with G*.
    std::function<void(const PhaseEvent&, const EdgeList& difference)> phase_merge;
};

class LookaheadError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Maximal matching over a fully dynamic graph, processed with lookahead.
///
/// Updates are pushed into a buffer and consumed by
/// run_until_buffer_consumed(), which looks ahead into the buffer to form
/// batches. Each level of the recursion works in phases: a small graph takes
/// one update at a time and recomputes its local matching; a large graph
/// takes a batch, matches the part the batch cannot touch, and hands the
/// touched part to a recursive call together with the batch. All levels share
/// one MateStore and one EdgeIndicator.
class Matcher {
public:
    explicit Matcher(MatcherConfig config);

    Matcher(Matcher&&) noexcept = default;
    Matcher& operator=(Matcher&&) noexcept = default;

    /// Installs an initial graph (only while the matcher holds no edges) and
    /// matches it greedily.
    void load_graph(const EdgeList& initial);

    void push_update(const UpdateOp& update);
    void push_updates(std::span<const UpdateOp> updates);
    std::size_t pending() const noexcept { return buffer_.size(); }

    void run_until_buffer_consumed();

    std::optional<VertexId> mate_query(VertexId u) const { return store_.get(u); }

    /// Current graph (union of all active levels) and current matching.
    EdgeList snapshot_graph() const;
    Matching snapshot_matching() const;

    std::size_t edge_count() const noexcept { return edge_count_; }
    std::size_t max_edge_count() const noexcept { return max_edge_count_; }

    OpCounters counters() const;

    const MateStore& mates() const noexcept { return store_; }
    const EdgeIndicator& indicator() const noexcept { return indicator_; }
    const MatcherConfig& config() const noexcept { return config_; }

    void set_hooks(MatcherHooks hooks) { hooks_ = std::move(hooks); }

private:
    void process_level(LevelState& level, std::span<const UpdateOp> updates, bool bounded,
                       std::size_t depth);
    void run_batch_phase(LevelState& level, std::span<const UpdateOp> batch, const PhaseEvent& ev);
    void apply_single(LevelState& level, const UpdateOp& update);
    void check_update(const UpdateOp& update) const;

    MatcherConfig config_;
    MateStore store_;
    EdgeIndicator indicator_;
    LevelState top_;
    std::vector<const LevelState*> stack_;
    std::vector<UpdateOp> buffer_;
    OpCounters counters_;
    std::size_t edge_count_ = 0;
    std::size_t max_edge_count_ = 0;
    MatcherHooks hooks_;
};

}  // namespace dynmatch

#endif  // DYNMATCH_MATCHER_HPP
