#ifndef DYNMATCH_GREEDY_HPP
#define DYNMATCH_GREEDY_HPP

#include <cstdint>

#include "dynmatch/graph_core.hpp"

namespace dynmatch {

/// Greedy maximal matching over `graph` in list order.
///
/// An edge is taken when both endpoints are free in `store` at the moment it
/// is inspected; taken edges are mated in `store` and returned in order.
/// Entries that were already non-null are never modified, so the result is
/// maximal within the subgraph spanned by the initially free vertices.
/// `edge_visits`, when given, is incremented once per inspected edge.
Matching greedy(const EdgeList& graph, MateStore& store, std::uint64_t* edge_visits = nullptr);

}  // namespace dynmatch

#endif  // DYNMATCH_GREEDY_HPP
