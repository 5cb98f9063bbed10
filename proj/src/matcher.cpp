#include "dynmatch/matcher.hpp"

#include <algorithm>
#include <string>

#include "dynmatch/greedy.hpp"

namespace dynmatch {

PhasePlan plan_phase(std::size_t m0, std::size_t remaining, std::size_t threshold,
                     std::optional<std::size_t> phase_override) {
    if (remaining == 0) {
        throw std::invalid_argument("plan_phase: no updates remaining");
    }
    const std::size_t small_graph = std::max<std::size_t>(threshold, 2);
    if (m0 < small_graph) {
        return {1, PhaseMode::single, m0};
    }
    if (phase_override) {
        const std::size_t t = std::min({*phase_override, remaining, m0 - 1});
        return {std::max<std::size_t>(t, 1), PhaseMode::batch, m0};
    }
    if (remaining > m0) {
        return {std::max<std::size_t>(m0 / 2, 1), PhaseMode::batch, m0};
    }
    if (remaining >= 2) {
        // Two-phase finish: this phase takes the larger half.
        return {(remaining + 1) / 2, PhaseMode::batch, m0};
    }
    return {1, PhaseMode::single, m0};
}

EdgeList collect_batch_edges(std::span<const UpdateOp> batch, EdgeIndicator& scratch) {
    EdgeList out;
    out.reserve(batch.size());
    for (const UpdateOp& q : batch) {
        if (!scratch.test(q.edge)) {
            scratch.set(q.edge);
            out.append(q.edge);
        }
    }
    for (const Edge& e : out) {
        scratch.clear(e);
    }
    return out;
}

SplitResult split_graph(const EdgeList& graph, const EdgeList& batch_edges,
                        EdgeIndicator& indicator) {
    for (const Edge& e : batch_edges) {
        indicator.set(e);
    }
    SplitResult parts;
    parts.difference.reserve(graph.size());
    for (const Edge& e : graph) {
        if (indicator.test(e)) {
            parts.intersection.append(e);
        } else {
            parts.difference.append(e);
        }
    }
    for (const Edge& e : batch_edges) {
        indicator.clear(e);
    }
    return parts;
}

void erase_local_matching(LevelState& level, MateStore& store, OpCounters& counters) {
    for (const Edge& e : level.matching) {
        store.clear(e);
    }
    counters.list_writes += level.matching.size();
    level.matching.clear();
}

int handle_single_update(LevelState& level, const UpdateOp& update, MateStore& store,
                         OpCounters& counters) {
    erase_local_matching(level, store, counters);
    const EdgeList::ScanResult r = update.kind == UpdateKind::insert
                                       ? level.graph.insert(update.edge)
                                       : level.graph.erase(update.edge);
    counters.list_writes += r.touched;
    level.matching = greedy(level.graph, store, &counters.greedy_edge_visits);
    counters.list_writes += level.matching.size();
    if (!r.changed) {
        return 0;
    }
    return update.kind == UpdateKind::insert ? 1 : -1;
}

namespace {

MateStore make_store(const MatcherConfig& cfg) {
    if (cfg.mate == MateStrategy::dense) {
        if (!cfg.vertex_count) {
            throw std::invalid_argument("dense mate store needs a declared vertex count");
        }
        return MateStore::dense(*cfg.vertex_count);
    }
    return MateStore::ordered_map(cfg.vertex_count);
}

EdgeIndicator make_indicator(const MatcherConfig& cfg) {
    if (cfg.indicator == IndicatorStrategy::lazy_matrix) {
        if (!cfg.vertex_count) {
            throw std::invalid_argument("matrix indicator needs a declared vertex count");
        }
        return EdgeIndicator::lazy_matrix(*cfg.vertex_count, cfg.indicator_setup);
    }
    return EdgeIndicator::ordered_set();
}

// Keeps the active-level stack balanced if a hook throws mid-phase.
class StackFrame {
public:
    StackFrame(std::vector<const LevelState*>& stack, const LevelState* level) : stack_(stack) {
        stack_.push_back(level);
    }
    ~StackFrame() { stack_.pop_back(); }
    StackFrame(const StackFrame&) = delete;
    StackFrame& operator=(const StackFrame&) = delete;

private:
    std::vector<const LevelState*>& stack_;
};

}  // namespace

Matcher::Matcher(MatcherConfig config)
    : config_(config), store_(make_store(config_)), indicator_(make_indicator(config_)) {
    if (config_.threshold == 0) {
        throw std::invalid_argument("threshold must be positive");
    }
    if (config_.phase_override && *config_.phase_override == 0) {
        throw std::invalid_argument("phase override must be positive");
    }
}

void Matcher::check_update(const UpdateOp& update) const {
    if (update.edge.a >= update.edge.b) {
        throw std::invalid_argument("update edge is not normalized");
    }
    if (config_.vertex_count && update.edge.b >= *config_.vertex_count) {
        throw VertexRangeError(update.edge.b, *config_.vertex_count);
    }
}

void Matcher::load_graph(const EdgeList& initial) {
    if (edge_count_ != 0 || !stack_.empty()) {
        throw std::logic_error("load_graph on a matcher that already holds edges");
    }
    for (const Edge& e : initial) {
        check_update({UpdateKind::insert, e});
    }
    top_.graph = initial;
    top_.matching = greedy(top_.graph, store_, &counters_.greedy_edge_visits);
    counters_.list_writes += top_.graph.size() + top_.matching.size();
    edge_count_ = top_.graph.size();
    max_edge_count_ = std::max(max_edge_count_, edge_count_);
}

void Matcher::push_update(const UpdateOp& update) {
    check_update(update);
    buffer_.push_back(update);
}

void Matcher::push_updates(std::span<const UpdateOp> updates) {
    buffer_.reserve(buffer_.size() + updates.size());
    for (const UpdateOp& q : updates) {
        push_update(q);
    }
}

void Matcher::run_until_buffer_consumed() {
    if (!stack_.empty()) {
        throw std::logic_error("run_until_buffer_consumed is not re-entrant");
    }
    std::vector<UpdateOp> updates;
    updates.swap(buffer_);
    StackFrame frame(stack_, &top_);
    process_level(top_, updates, /*bounded=*/false, 1);
}

void Matcher::process_level(LevelState& level, std::span<const UpdateOp> updates, bool bounded,
                            std::size_t depth) {
    counters_.recursion_depth_max = std::max<std::uint64_t>(counters_.recursion_depth_max, depth);
    std::size_t pos = 0;
    while (pos < updates.size()) {
        const std::size_t m0 = level.graph.size();
        std::size_t remaining = updates.size() - pos;
        if (!bounded) {
            // The top level never looks further than m0 + 1 updates ahead.
            remaining = std::min(remaining, m0 + 1);
        }
        const PhasePlan plan = plan_phase(m0, remaining, config_.threshold, config_.phase_override);
        if (plan.mode == PhaseMode::single) {
            ++counters_.single_phases;
            apply_single(level, updates[pos]);
            ++pos;
            continue;
        }
        ++counters_.batch_phases;
        run_batch_phase(level, updates.subspan(pos, plan.batch_length), PhaseEvent{depth, plan});
        pos += plan.batch_length;
    }
}

void Matcher::run_batch_phase(LevelState& level, std::span<const UpdateOp> batch,
                              const PhaseEvent& ev) {
    if (hooks_.phase_boundary) {
        hooks_.phase_boundary(ev, indicator_, nullptr);
    }
    EdgeList batch_edges = collect_batch_edges(batch, indicator_);
    counters_.list_writes += batch.size() + batch_edges.size();

    erase_local_matching(level, store_, counters_);

    SplitResult parts = split_graph(level.graph, batch_edges, indicator_);
    counters_.list_writes += level.graph.size();
    if (hooks_.phase_boundary) {
        hooks_.phase_boundary(ev, indicator_, &batch_edges);
    }

    level.graph = std::move(parts.difference);
#ifndef DYNMATCH_FAULT_SKIP_DIFFERENCE_GREEDY
    level.matching = greedy(level.graph, store_, &counters_.greedy_edge_visits);
    counters_.list_writes += level.matching.size();
#endif
    if (hooks_.phase_split) {
        hooks_.phase_split(ev, level.graph);
    }

    LevelState child{std::move(parts.intersection), {}};
    {
        StackFrame frame(stack_, &child);
        process_level(child, batch, /*bounded=*/true, ev.depth + 1);
    }

    if (hooks_.phase_merge) {
        hooks_.phase_merge(ev, level.graph);
    }
    level.graph.append(child.graph);
    level.matching.append(child.matching);
    counters_.list_writes += child.graph.size() + child.matching.size();
}

void Matcher::apply_single(LevelState& level, const UpdateOp& update) {
    const int delta = handle_single_update(level, update, store_, counters_);
    edge_count_ = static_cast<std::size_t>(static_cast<long long>(edge_count_) + delta);
    max_edge_count_ = std::max(max_edge_count_, edge_count_);
    const std::uint64_t index = counters_.updates_processed++;
    if (hooks_.after_update) {
        hooks_.after_update(index, update);
    }
}

EdgeList Matcher::snapshot_graph() const {
    if (stack_.empty()) {
        return top_.graph;
    }
    EdgeList out;
    out.reserve(edge_count_);
    for (const LevelState* level : stack_) {
        out.append(level->graph);
    }
    return out;
}

Matching Matcher::snapshot_matching() const {
    if (stack_.empty()) {
        return top_.matching;
    }
    Matching out;
    for (const LevelState* level : stack_) {
        out.append(level->matching);
    }
    return out;
}

OpCounters Matcher::counters() const {
    OpCounters c = counters_;
    c.indicator_ops = indicator_.work();
    c.mate_ops = store_.work();
    c.setup_ops = store_.setup_ops() + indicator_.setup_ops();
    return c;
}

}  // namespace dynmatch
