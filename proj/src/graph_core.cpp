#include "dynmatch/graph_core.hpp"

#include <algorithm>
#include <cstring>
#include <new>

namespace dynmatch {

Edge make_edge(VertexId u, VertexId v) {
    if (u == v) {
        throw SelfLoopError(u);
    }
    return u < v ? Edge{u, v} : Edge{v, u};
}

EdgeList::EdgeList(std::initializer_list<Edge> edges) {
    for (const Edge& e : edges) {
        insert(e);
    }
}

EdgeList::ScanResult EdgeList::insert(const Edge& e) {
    auto it = std::find(edges_.begin(), edges_.end(), e);
    ScanResult r;
    r.touched = static_cast<std::size_t>(it - edges_.begin()) + (it == edges_.end() ? 0 : 1);
    if (it == edges_.end()) {
        edges_.push_back(e);
        r.changed = true;
        ++r.touched;
    }
    return r;
}

EdgeList::ScanResult EdgeList::erase(const Edge& e) {
    auto it = std::find(edges_.begin(), edges_.end(), e);
    ScanResult r;
    r.touched = static_cast<std::size_t>(it - edges_.begin());
    if (it != edges_.end()) {
        // Shifting the tail keeps relative order; the scan plus the shift is
        // one pass over the list.
        r.touched = edges_.size();
        edges_.erase(it);
        r.changed = true;
    }
    return r;
}

bool EdgeList::contains(const Edge& e) const {
    return std::find(edges_.begin(), edges_.end(), e) != edges_.end();
}

void EdgeList::append(const EdgeList& other) {
    edges_.insert(edges_.end(), other.edges_.begin(), other.edges_.end());
}

EdgeList edgelist_insert(EdgeList g, const Edge& e) {
    g.insert(e);
    return g;
}

EdgeList edgelist_delete(EdgeList g, const Edge& e) {
    g.erase(e);
    return g;
}

std::vector<Edge> sorted_edges(const EdgeList& g) {
    std::vector<Edge> out(g.begin(), g.end());
    std::sort(out.begin(), out.end());
    return out;
}

std::string to_string(MateStrategy s) {
    return s == MateStrategy::dense ? "dense" : "map";
}

std::string to_string(IndicatorStrategy s) {
    return s == IndicatorStrategy::lazy_matrix ? "matrix" : "set";
}

std::string to_string(IndicatorSetup s) {
    return s == IndicatorSetup::lazy ? "lazy" : "eager-n2";
}

// ---------------------------------------------------------------------------
// MateStore

MateStore::MateStore(MateStrategy s, std::optional<std::size_t> universe)
    : strategy_(s),
      universe_(universe),
      accesses_(std::make_unique<std::uint64_t>(0)),
      comparisons_(std::make_unique<std::uint64_t>(0)) {}

MateStore MateStore::dense(std::size_t n) {
    MateStore store(MateStrategy::dense, n);
    store.slots_.assign(n, kNoVertex);
    store.setup_ops_ = n;
    return store;
}

MateStore MateStore::ordered_map(std::optional<std::size_t> universe) {
    MateStore store(MateStrategy::ordered_map, universe);
    store.tree_ = std::make_unique<TreeMap>(CountingLess{store.comparisons_.get()});
    return store;
}

void MateStore::check_range(VertexId u) const {
    if (universe_ && u >= *universe_) {
        throw VertexRangeError(u, *universe_);
    }
}

VertexId MateStore::raw(VertexId u) const {
    if (strategy_ == MateStrategy::dense) {
        return slots_[u];
    }
    auto it = tree_->find(u);
    return it == tree_->end() ? kNoVertex : it->second;
}

void MateStore::assign(VertexId u, VertexId v) {
    if (strategy_ == MateStrategy::dense) {
        slots_[u] = v;
        return;
    }
    if (v == kNoVertex) {
        tree_->erase(u);
    } else {
        tree_->insert_or_assign(u, v);
    }
}

std::optional<VertexId> MateStore::get(VertexId u) const {
    check_range(u);
    ++*accesses_;
    VertexId v = raw(u);
    if (v == kNoVertex) {
        return std::nullopt;
    }
    return v;
}

std::optional<VertexId> MateStore::peek(VertexId u) const {
    check_range(u);
    const std::uint64_t saved = *comparisons_;
    VertexId v = raw(u);
    *comparisons_ = saved;
    if (v == kNoVertex) {
        return std::nullopt;
    }
    return v;
}

void MateStore::set(const Edge& e) {
    check_range(e.a);
    check_range(e.b);
    if (raw(e.a) != kNoVertex || raw(e.b) != kNoVertex) {
        throw MateStoreLogicError("mate_set on an already matched vertex of edge (" +
                                  std::to_string(e.a) + "," + std::to_string(e.b) + ")");
    }
    *accesses_ += 2;
    assign(e.a, e.b);
    assign(e.b, e.a);
    mated_ += 2;
}

void MateStore::clear(const Edge& e) {
    check_range(e.a);
    check_range(e.b);
    if (raw(e.a) != e.b || raw(e.b) != e.a) {
        throw MateStoreLogicError("mate_clear on unmatched edge (" + std::to_string(e.a) + "," +
                                  std::to_string(e.b) + ")");
    }
    *accesses_ += 2;
    assign(e.a, kNoVertex);
    assign(e.b, kNoVertex);
    mated_ -= 2;
}

void MateStore::unchecked_assign(VertexId u, std::optional<VertexId> v) {
    check_range(u);
    const bool was = raw(u) != kNoVertex;
    assign(u, v.value_or(kNoVertex));
    if (was && !v) {
        --mated_;
    } else if (!was && v) {
        ++mated_;
    }
}

void MateStore::for_each_mated(const std::function<void(VertexId, VertexId)>& fn) const {
    if (strategy_ == MateStrategy::dense) {
        for (VertexId u = 0; u < slots_.size(); ++u) {
            if (slots_[u] != kNoVertex) {
                fn(u, slots_[u]);
            }
        }
        return;
    }
    for (const auto& [u, v] : *tree_) {
        fn(u, v);
    }
}

std::size_t MateStore::mated_count() const noexcept {
    return mated_;
}

// ---------------------------------------------------------------------------
// EdgeIndicator

EdgeIndicator::EdgeIndicator(IndicatorStrategy s, std::size_t n, IndicatorSetup setup)
    : strategy_(s),
      setup_kind_(setup),
      n_(n),
      accesses_(std::make_unique<std::uint64_t>(0)),
      comparisons_(std::make_unique<std::uint64_t>(0)) {}

EdgeIndicator EdgeIndicator::lazy_matrix(std::size_t n, IndicatorSetup setup) {
    EdgeIndicator ind(IndicatorStrategy::lazy_matrix, n, setup);
    const std::size_t cells = std::max<std::size_t>(n * n, 1);
    unsigned char* p = nullptr;
    if (setup == IndicatorSetup::lazy) {
        // Large zero-filled requests are served from fresh zero pages, so no
        // clearing pass is observable here.
        p = static_cast<unsigned char*>(std::calloc(cells, 1));
    } else {
        p = static_cast<unsigned char*>(std::malloc(cells));
        if (p != nullptr) {
            std::memset(p, 0, cells);
            ind.setup_ops_ = n * n;
        }
    }
    if (p == nullptr) {
        throw std::bad_alloc();
    }
    ind.cells_.reset(p);
    return ind;
}

EdgeIndicator EdgeIndicator::ordered_set() {
    EdgeIndicator ind(IndicatorStrategy::ordered_set, 0, IndicatorSetup::lazy);
    ind.tree_ = std::make_unique<TreeSet>(CountingEdgeLess{ind.comparisons_.get()});
    return ind;
}

std::size_t EdgeIndicator::index(const Edge& e) const {
    if (e.b >= n_) {
        throw VertexRangeError(e.b, n_);
    }
    return static_cast<std::size_t>(e.a) * n_ + static_cast<std::size_t>(e.b);
}

void EdgeIndicator::set(const Edge& e) {
    ++*accesses_;
    if (strategy_ == IndicatorStrategy::lazy_matrix) {
        unsigned char& cell = cells_[index(e)];
        population_ += cell == 0 ? 1 : 0;
        cell = 1;
        return;
    }
    population_ += tree_->insert(e).second ? 1 : 0;
}

bool EdgeIndicator::test(const Edge& e) const {
    ++*accesses_;
    if (strategy_ == IndicatorStrategy::lazy_matrix) {
        return cells_[index(e)] != 0;
    }
    return tree_->find(e) != tree_->end();
}

void EdgeIndicator::clear(const Edge& e) {
    ++*accesses_;
    if (strategy_ == IndicatorStrategy::lazy_matrix) {
        unsigned char& cell = cells_[index(e)];
        population_ -= cell != 0 ? 1 : 0;
        cell = 0;
        return;
    }
    population_ -= tree_->erase(e);
}

bool EdgeIndicator::peek(const Edge& e) const {
    if (strategy_ == IndicatorStrategy::lazy_matrix) {
        if (e.b >= n_) {
            return false;
        }
        return cells_[index(e)] != 0;
    }
    const std::uint64_t saved = *comparisons_;
    const bool hit = tree_->find(e) != tree_->end();
    *comparisons_ = saved;
    return hit;
}

}  // namespace dynmatch
