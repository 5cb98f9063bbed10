#ifndef DYNMATCH_GRAPH_CORE_HPP
#define DYNMATCH_GRAPH_CORE_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dynmatch {

using VertexId = std::uint64_t;

inline constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();

class SelfLoopError : public std::invalid_argument {
public:
    explicit SelfLoopError(VertexId v)
        : std::invalid_argument("self-loop on vertex " + std::to_string(v)), vertex_(v) {}
    VertexId vertex() const noexcept { return vertex_; }

private:
    VertexId vertex_;
};

class VertexRangeError : public std::out_of_range {
public:
    VertexRangeError(VertexId v, std::size_t n)
        : std::out_of_range("vertex " + std::to_string(v) + " outside universe of size " +
                            std::to_string(n)) {}
};

/// Raised when a mate-store precondition is broken. Always a matcher bug,
/// never a consequence of user input.
class MateStoreLogicError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Unordered vertex pair, stored normalized (a < b).
struct Edge {
    VertexId a = 0;
    VertexId b = 0;

    friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

/// Builds the normalized edge {u, v}. Throws SelfLoopError when u == v.
Edge make_edge(VertexId u, VertexId v);

struct EdgeHash {
    std::size_t operator()(const Edge& e) const noexcept {
        std::uint64_t h = e.a * 0x9E3779B97F4A7C15ULL;
        h ^= e.b + 0x7F4A7C159E3779B9ULL + (h << 6) + (h >> 2);
        return static_cast<std::size_t>(h);
    }
};

/// Ordered sequence of pairwise distinct edges.
///
/// `insert` and `erase` are the set-semantics updates used on graphs; each
/// scans the list once and reports how many elements it touched so callers
/// can charge the linear cost. `append` skips the distinctness scan and is
/// for callers that already know the edge is absent (split/merge steps).
class EdgeList {
public:
    using const_iterator = std::vector<Edge>::const_iterator;

    EdgeList() = default;
    EdgeList(std::initializer_list<Edge> edges);

    struct ScanResult {
        bool changed = false;
        std::size_t touched = 0;
    };

    ScanResult insert(const Edge& e);
    ScanResult erase(const Edge& e);
    bool contains(const Edge& e) const;

    void append(const Edge& e) { edges_.push_back(e); }
    void append(const EdgeList& other);
    void reserve(std::size_t n) { edges_.reserve(n); }
    void clear() noexcept { edges_.clear(); }

    std::size_t size() const noexcept { return edges_.size(); }
    bool empty() const noexcept { return edges_.empty(); }
    const Edge& operator[](std::size_t i) const { return edges_[i]; }
    const_iterator begin() const noexcept { return edges_.begin(); }
    const_iterator end() const noexcept { return edges_.end(); }
    std::span<const Edge> view() const noexcept { return edges_; }

    friend bool operator==(const EdgeList&, const EdgeList&) = default;

private:
    std::vector<Edge> edges_;
};

EdgeList edgelist_insert(EdgeList g, const Edge& e);
EdgeList edgelist_delete(EdgeList g, const Edge& e);

/// Sorted copy; handy for set-equality comparisons in checks and tests.
std::vector<Edge> sorted_edges(const EdgeList& g);

using Matching = EdgeList;

enum class MateStrategy { dense, ordered_map };
enum class IndicatorStrategy { lazy_matrix, ordered_set };
/// How the lazy-matrix backing was zeroed: by a zero-filled allocation
/// (no observable clearing pass) or by an explicit n*n pass.
enum class IndicatorSetup { lazy, eager_n2 };

std::string to_string(MateStrategy s);
std::string to_string(IndicatorStrategy s);
std::string to_string(IndicatorSetup s);

/// Global vertex -> mate mapping shared by every recursion level.
///
/// Dense mode is an array of n slots initialised in one O(n) pass. Ordered-map
/// mode keeps only matched vertices as keys of a balanced tree, so setup is
/// O(1) and lookups cost O(log m) key comparisons.
///
/// Work counters: `accesses()` counts get/set/clear calls on individual
/// vertices, `comparisons()` counts key comparisons inside the tree (always 0
/// in dense mode). `peek` and `for_each_mated` are uncounted and exist for
/// verification.
class MateStore {
public:
    /// Dense store over vertices [0, n).
    static MateStore dense(std::size_t n);
    /// Tree-backed store; `universe` bounds vertex ids when given.
    static MateStore ordered_map(std::optional<std::size_t> universe = std::nullopt);

    MateStore(MateStore&&) noexcept = default;
    MateStore& operator=(MateStore&&) noexcept = default;
    MateStore(const MateStore&) = delete;
    MateStore& operator=(const MateStore&) = delete;

    std::optional<VertexId> get(VertexId u) const;
    bool is_free(VertexId u) const { return !get(u).has_value(); }

    /// Pairs e.a with e.b. Both must be unmatched.
    void set(const Edge& e);
    /// Unpairs e.a and e.b. They must currently be mates of each other.
    void clear(const Edge& e);

    /// Writes one direction of the mapping with no precondition checks. For
    /// building corrupted states in verification tests only.
    void unchecked_assign(VertexId u, std::optional<VertexId> v);

    std::optional<VertexId> peek(VertexId u) const;
    void for_each_mated(const std::function<void(VertexId, VertexId)>& fn) const;
    std::size_t mated_count() const noexcept;

    MateStrategy strategy() const noexcept { return strategy_; }
    std::optional<std::size_t> universe() const noexcept { return universe_; }

    std::uint64_t accesses() const noexcept { return *accesses_; }
    std::uint64_t comparisons() const noexcept { return *comparisons_; }
    std::uint64_t setup_ops() const noexcept { return setup_ops_; }
    /// accesses + comparisons
    std::uint64_t work() const noexcept { return *accesses_ + *comparisons_; }

private:
    struct CountingLess {
        std::uint64_t* count = nullptr;
        bool operator()(VertexId x, VertexId y) const {
            ++*count;
            return x < y;
        }
    };
    using TreeMap = std::map<VertexId, VertexId, CountingLess>;

    MateStore(MateStrategy s, std::optional<std::size_t> universe);

    void check_range(VertexId u) const;
    VertexId raw(VertexId u) const;
    void assign(VertexId u, VertexId v);

    MateStrategy strategy_;
    std::optional<std::size_t> universe_;
    std::vector<VertexId> slots_;
    std::size_t mated_ = 0;
    // Heap-held so the tree comparator keeps a valid pointer across moves.
    std::unique_ptr<std::uint64_t> accesses_;
    std::unique_ptr<std::uint64_t> comparisons_;
    std::unique_ptr<TreeMap> tree_;
    std::uint64_t setup_ops_ = 0;
};

/// Phase-local edge membership tester (set / test / clear over edges).
///
/// Lazy-matrix mode indexes an n*n byte array by the normalized pair; the
/// array is never swept after setup, entries are cleared one by one by the
/// caller. Ordered-set mode keeps the set edges in a balanced tree.
class EdgeIndicator {
public:
    static EdgeIndicator lazy_matrix(std::size_t n, IndicatorSetup setup = IndicatorSetup::lazy);
    static EdgeIndicator ordered_set();

    EdgeIndicator(EdgeIndicator&&) noexcept = default;
    EdgeIndicator& operator=(EdgeIndicator&&) noexcept = default;
    EdgeIndicator(const EdgeIndicator&) = delete;
    EdgeIndicator& operator=(const EdgeIndicator&) = delete;

    void set(const Edge& e);
    bool test(const Edge& e) const;
    void clear(const Edge& e);

    /// Uncounted membership test for instrumentation.
    bool peek(const Edge& e) const;
    /// Number of edges currently set (0 at every phase boundary).
    std::size_t population() const noexcept { return population_; }

    IndicatorStrategy strategy() const noexcept { return strategy_; }
    IndicatorSetup setup_kind() const noexcept { return setup_kind_; }
    std::size_t universe() const noexcept { return n_; }

    std::uint64_t accesses() const noexcept { return *accesses_; }
    std::uint64_t comparisons() const noexcept { return *comparisons_; }
    std::uint64_t setup_ops() const noexcept { return setup_ops_; }
    std::uint64_t work() const noexcept { return *accesses_ + *comparisons_; }

private:
    struct FreeDeleter {
        void operator()(unsigned char* p) const noexcept { std::free(p); }
    };
    struct CountingEdgeLess {
        std::uint64_t* count = nullptr;
        bool operator()(const Edge& x, const Edge& y) const {
            ++*count;
            return x < y;
        }
    };
    using TreeSet = std::set<Edge, CountingEdgeLess>;

    EdgeIndicator(IndicatorStrategy s, std::size_t n, IndicatorSetup setup);

    std::size_t index(const Edge& e) const;

    IndicatorStrategy strategy_;
    IndicatorSetup setup_kind_;
    std::size_t n_ = 0;
    std::unique_ptr<unsigned char[], FreeDeleter> cells_;
    std::unique_ptr<TreeSet> tree_;
    std::size_t population_ = 0;
    std::unique_ptr<std::uint64_t> accesses_;
    std::unique_ptr<std::uint64_t> comparisons_;
    std::uint64_t setup_ops_ = 0;
};

}  // namespace dynmatch

#endif  // DYNMATCH_GRAPH_CORE_HPP
