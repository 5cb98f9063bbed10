#include "dynmatch/reference.hpp"

#include "dynmatch/greedy.hpp"

namespace dynmatch {

namespace {

std::string edge_text(const Edge& e) {
    return "(" + std::to_string(e.a) + "," + std::to_string(e.b) + ")";
}

}  // namespace

OpCounters OracleState::totals() const {
    OpCounters c = counters;
    c.mate_ops = store.work();
    c.setup_ops = store.setup_ops();
    c.recursion_depth_max = 1;
    return c;
}

void baseline_step(OracleState& state, const UpdateOp& update) {
    const EdgeList::ScanResult r = update.kind == UpdateKind::insert
                                       ? state.graph.insert(update.edge)
                                       : state.graph.erase(update.edge);
    state.counters.list_writes += r.touched;
    for (const Edge& e : state.matching) {
        state.store.clear(e);
    }
    state.counters.list_writes += state.matching.size();
    state.matching = greedy(state.graph, state.store, &state.counters.greedy_edge_visits);
    state.counters.list_writes += state.matching.size();
    ++state.counters.updates_processed;
}

std::string Violation::describe() const {
    switch (kind) {
    case ViolationKind::symmetry:
        return "mate symmetry broken at vertex " + std::to_string(vertex);
    case ViolationKind::edge_not_in_graph:
        return "mated pair " + edge_text(edge) + " is not an edge of the graph";
    case ViolationKind::expandable_edge:
        return "edge " + edge_text(edge) + " has two unmatched endpoints";
    }
    return "unknown violation";
}

std::optional<Violation> check_valid(const EdgeList& graph, const MateStore& store) {
    std::optional<Violation> found;
    store.for_each_mated([&](VertexId u, VertexId v) {
        if (found) {
            return;
        }
        if (u == v || store.peek(v) != u) {
            found = Violation{ViolationKind::symmetry, u, {}};
        }
    });
    if (found) {
        return found;
    }
    // With symmetric mates the matched vertices form pairs; all of them are
    // graph edges exactly when the graph contains mated_count / 2 such pairs.
    std::size_t pairs_in_graph = 0;
    for (const Edge& e : graph) {
        if (store.peek(e.a) == e.b) {
            ++pairs_in_graph;
        }
    }
    if (2 * pairs_in_graph == store.mated_count()) {
        return std::nullopt;
    }
    std::unordered_set<Edge, EdgeHash> present(graph.begin(), graph.end());
    store.for_each_mated([&](VertexId u, VertexId v) {
        if (!found && u < v && !present.contains(Edge{u, v})) {
            found = Violation{ViolationKind::edge_not_in_graph, u, Edge{u, v}};
        }
    });
    if (!found) {
        found = Violation{ViolationKind::edge_not_in_graph, kNoVertex, {}};
    }
    return found;
}

std::optional<Violation> check_maximal(const EdgeList& graph, const MateStore& store) {
    for (const Edge& e : graph) {
        if (!store.peek(e.a) && !store.peek(e.b)) {
            return Violation{ViolationKind::expandable_edge, e.a, e};
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------

namespace {
constexpr std::size_t kDenseOracleLimit = 4096;
}

EdgeSetOracle::EdgeSetOracle(std::optional<std::size_t> vertex_count) {
    if (vertex_count && *vertex_count <= kDenseOracleLimit) {
        n_ = vertex_count;
        table_.assign(*n_ * *n_, 0);
    }
}

bool EdgeSetOracle::contains(const Edge& e) const {
    if (n_) {
        return e.b < *n_ && table_[e.a * *n_ + e.b] != 0;
    }
    return edges_.contains(e);
}

void EdgeSetOracle::apply(const UpdateOp& update) {
    const Edge& e = update.edge;
    const bool present = contains(e);
    if (update.kind == UpdateKind::insert && !present) {
        if (n_) {
            table_[e.a * *n_ + e.b] = 1;
        } else {
            edges_.insert(e);
        }
        ++size_;
    } else if (update.kind == UpdateKind::remove && present) {
        if (n_) {
            table_[e.a * *n_ + e.b] = 0;
        } else {
            edges_.erase(e);
        }
        --size_;
    }
}

std::optional<std::string> EdgeSetOracle::compare(const EdgeList& graph) {
    if (graph.size() != size_) {
        return "graph has " + std::to_string(graph.size()) + " edges, expected " +
               std::to_string(size_);
    }
    std::optional<std::string> mismatch;
    if (n_) {
        // Mark visited entries with 2 to catch duplicates, then restore.
        std::size_t marked = 0;
        for (const Edge& e : graph) {
            unsigned char* cell = e.b < *n_ ? &table_[e.a * *n_ + e.b] : nullptr;
            if (cell == nullptr || *cell == 0) {
                mismatch = "graph holds unexpected edge " + edge_text(e);
                break;
            }
            if (*cell == 2) {
                mismatch = "graph holds edge " + edge_text(e) + " twice";
                break;
            }
            *cell = 2;
            ++marked;
        }
        for (std::size_t i = 0; i < marked; ++i) {
            const Edge& e = graph[i];
            table_[e.a * *n_ + e.b] = 1;
        }
        return mismatch;
    }
    std::unordered_set<Edge, EdgeHash> seen;
    seen.reserve(graph.size());
    for (const Edge& e : graph) {
        if (!edges_.contains(e)) {
            return "graph holds unexpected edge " + edge_text(e);
        }
        if (!seen.insert(e).second) {
            return "graph holds edge " + edge_text(e) + " twice";
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------

DifferentialVerifier::DifferentialVerifier(std::optional<std::size_t> vertex_count)
    : baseline_(vertex_count ? MateStore::dense(*vertex_count) : MateStore::ordered_map()),
      oracle_(vertex_count) {}

void DifferentialVerifier::apply(const UpdateOp& update) {
    baseline_step(baseline_, update);
    oracle_.apply(update);
}

std::optional<std::string> DifferentialVerifier::check(const EdgeList& graph,
                                                       const MateStore& store) {
    if (auto v = check_valid(graph, store)) {
        return "invalid matching: " + v->describe();
    }
    if (auto v = check_maximal(graph, store)) {
        return "matching not maximal: " + v->describe();
    }
    if (auto v = check_valid(baseline_.graph, baseline_.store)) {
        return "baseline invalid: " + v->describe();
    }
    if (auto v = check_maximal(baseline_.graph, baseline_.store)) {
        return "baseline not maximal: " + v->describe();
    }
    if (auto diff = oracle_.compare(graph)) {
        return "edge set differs from replay: " + *diff;
    }
    if (auto diff = oracle_.compare(baseline_.graph)) {
        return "baseline edge set differs from replay: " + *diff;
    }
    return std::nullopt;
}

}  // namespace dynmatch
