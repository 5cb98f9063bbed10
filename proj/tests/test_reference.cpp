#include <doctest.h>

#include "dynmatch/reference.hpp"
#include "test_support.hpp"

using namespace dynmatch;
using namespace dynmatch::test;

TEST_CASE("baseline_step examples") {
    OracleState s = OracleState::dense(4);
    baseline_step(s, insert_op(1, 2));
    CHECK(s.matching == list_of({{1, 2}}));
    baseline_step(s, remove_op(1, 2));
    CHECK(s.matching.empty());
    CHECK(s.graph.empty());
    CHECK_FALSE(s.store.get(1));
}

TEST_CASE("baseline replays the worked example to the same edge set") {
    OracleState s = OracleState::dense(7);
    for (const Edge& e : example_graph()) {
        baseline_step(s, {UpdateKind::insert, e});
    }
    baseline_step(s, insert_op(f, g));
    baseline_step(s, remove_op(a, f));
    baseline_step(s, insert_op(d, c));
    CHECK(as_set(s.graph) == as_set({{a, b}, {b, g}, {c, g}, {e, g}, {d, e}, {f, g}, {c, d}}));
    CHECK_FALSE(check_valid(s.graph, s.store));
    CHECK_FALSE(check_maximal(s.graph, s.store));
}

TEST_CASE("baseline work grows with the graph") {
    OracleState s = OracleState::dense(200);
    std::uint64_t previous = 0;
    std::vector<std::uint64_t> per_update;
    for (VertexId v = 1; v < 200; ++v) {
        baseline_step(s, insert_op(0, v));
        const std::uint64_t now = s.totals().total_work();
        per_update.push_back(now - previous);
        previous = now;
    }
    // A star: every update rescans the whole list.
    CHECK(per_update.back() > 150);
    CHECK(per_update.back() > 10 * per_update.front());
}

TEST_CASE("check_valid examples") {
    MateStore store = MateStore::dense(5);
    store.set(Edge{1, 2});
    CHECK_FALSE(check_valid(list_of({{1, 2}}), store));

    const auto missing = check_valid({}, store);
    REQUIRE(missing);
    CHECK(missing->kind == ViolationKind::edge_not_in_graph);
    CHECK(missing->edge == Edge{1, 2});

    MateStore skewed = MateStore::ordered_map(5);
    skewed.unchecked_assign(1, 2);
    skewed.unchecked_assign(2, 3);
    const auto asym = check_valid(list_of({{1, 2}, {2, 3}}), skewed);
    REQUIRE(asym);
    CHECK(asym->kind == ViolationKind::symmetry);
    CHECK(asym->vertex == 1);
}

TEST_CASE("check_maximal examples") {
    MateStore empty = MateStore::dense(4);
    const auto open = check_maximal(list_of({{1, 2}}), empty);
    REQUIRE(open);
    CHECK(open->kind == ViolationKind::expandable_edge);
    CHECK(open->edge == Edge{1, 2});

    MateStore store = MateStore::dense(4);
    store.set(Edge{1, 2});
    CHECK_FALSE(check_maximal(list_of({{1, 2}, {2, 3}}), store));

    MateStore fig = MateStore::dense(7);
    fig.set(Edge{a, b});
    fig.set(make_edge(e, g));
    CHECK_FALSE(check_maximal(list_of({{a, b}, {b, g}, {c, g}, {g, e}, {d, e}}), fig));
}

TEST_CASE("edge set oracle detects mismatches") {
    for (std::optional<std::size_t> n : {std::optional<std::size_t>{8}, std::optional<std::size_t>{}}) {
        EdgeSetOracle oracle(n);
        oracle.apply(insert_op(1, 2));
        oracle.apply(insert_op(2, 3));
        oracle.apply(remove_op(1, 2));
        oracle.apply(remove_op(4, 5));
        CHECK(oracle.size() == 1);
        CHECK_FALSE(oracle.compare(list_of({{2, 3}})));
        CHECK(oracle.compare(list_of({{1, 2}})));
        CHECK(oracle.compare({}));
        EdgeList dup;
        dup.append(Edge{2, 3});
        dup.append(Edge{2, 3});
        oracle.apply(insert_op(5, 6));
        CHECK(oracle.compare(dup));
        CHECK_FALSE(oracle.compare(list_of({{5, 6}, {2, 3}})));
    }
}

TEST_CASE("differential verifier flags a non-maximal candidate") {
    DifferentialVerifier v(6);
    v.apply(insert_op(1, 2));
    MateStore candidate = MateStore::dense(6);
    const auto failure = v.check(list_of({{1, 2}}), candidate);
    REQUIRE(failure);
    CHECK(failure->find("not maximal") != std::string::npos);
    candidate.set(Edge{1, 2});
    CHECK_FALSE(v.check(list_of({{1, 2}}), candidate));
}
