#include "dynmatch/greedy.hpp"

namespace dynmatch {

Matching greedy(const EdgeList& graph, MateStore& store, std::uint64_t* edge_visits) {
    Matching m;
    for (const Edge& e : graph) {
        if (edge_visits != nullptr) {
            ++*edge_visits;
        }
        if (store.is_free(e.a) && store.is_free(e.b)) {
            store.set(e);
            m.append(e);
        }
    }
    return m;
}

}  // namespace dynmatch
