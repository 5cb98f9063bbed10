#include <doctest.h>

#include <random>
#include <set>
#include <sstream>

#include "dynmatch/stream.hpp"

using namespace dynmatch;

namespace {

// Independent of replay_max_edges: ordered pairs in a std::set.
std::size_t max_edges_by_set_replay(const Stream& s) {
    std::set<std::pair<VertexId, VertexId>> present;
    std::size_t best = 0;
    for (const StreamEvent& ev : s.events) {
        if (ev.kind == EventKind::query) {
            continue;
        }
        const std::pair<VertexId, VertexId> key = std::minmax(ev.u, ev.v);
        if (ev.kind == EventKind::insert) {
            present.insert(key);
        } else {
            present.erase(key);
        }
        best = std::max(best, present.size());
    }
    return best;
}

}  // namespace

TEST_CASE("parse a small stream") {
    const Stream s = parse_stream_text("n 7\n+ 0 1\n? 0\n- 0 1\n");
    CHECK(s.header.vertex_count == std::size_t{7});
    REQUIRE(s.events.size() == 3);
    CHECK(s.events[0] == insert_event(0, 1));
    CHECK(s.events[1] == query_event(0));
    CHECK(s.events[2] == remove_event(0, 1));
    CHECK(s.update_count() == 2);
}

TEST_CASE("parse rejects self-loops") {
    try {
        parse_stream_text("+ 3 3");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.kind() == ParseError::Kind::self_loop);
        CHECK(e.line() == 1);
    }
}

TEST_CASE("header-only stream has no events") {
    const Stream s = parse_stream_text("n 5\n");
    CHECK(s.header.vertex_count == std::size_t{5});
    CHECK(s.events.empty());
}

TEST_CASE("comments, blank lines and sparse streams") {
    const Stream s = parse_stream_text("# hello\n\n+ 10 900000\n# mid\n? 10\n");
    CHECK_FALSE(s.header.vertex_count);
    REQUIRE(s.events.size() == 2);
    CHECK(s.events[0] == insert_event(10, 900000));
}

TEST_CASE("parse errors carry line numbers") {
    const auto line_of = [](const char* text) {
        try {
            parse_stream_text(text);
        } catch (const ParseError& e) {
            return std::pair{e.line(), e.kind()};
        }
        return std::pair{std::size_t{0}, ParseError::Kind::syntax};
    };
    CHECK(line_of("n 4\n+ 1 2\n+ 1 4\n") == std::pair{std::size_t{3}, ParseError::Kind::range});
    CHECK(line_of("n 4\n? 9\n") == std::pair{std::size_t{2}, ParseError::Kind::range});
    CHECK(line_of("+ 1\n").first == 1);
    CHECK(line_of("+ 1 2 3\n").first == 1);
    CHECK(line_of("+ 1 x\n").first == 1);
    CHECK(line_of("+ -1 2\n").first == 1);
    CHECK(line_of("* 1 2\n").first == 1);
    CHECK(line_of("+ 1 2\nn 5\n").first == 2);
    CHECK(line_of("# c\nn 5\n+ 1 2\n").first == 0);
}

TEST_CASE("parse from an istream matches the text parser") {
    const std::string text = "n 9\n+ 1 2\r\n- 2 1\n? 3\n";
    std::istringstream in(text);
    CHECK(parse_stream(in) == parse_stream_text(text));
}

TEST_CASE("serialize then parse is the identity") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        Stream s;
        if (trial % 2 == 0) {
            s.header.vertex_count = 1000;
        }
        const int k = static_cast<int>(rng() % 50);
        for (int i = 0; i < k; ++i) {
            const VertexId u = rng() % 1000;
            const VertexId v = (u + 1 + rng() % 999) % 1000;
            switch (rng() % 3) {
            case 0: s.events.push_back(insert_event(u, v)); break;
            case 1: s.events.push_back(remove_event(u, v)); break;
            default: s.events.push_back(query_event(u)); break;
            }
        }
        const std::string text = serialize_stream_text(s);
        REQUIRE(parse_stream_text(text) == s);
        REQUIRE(serialize_stream_text(parse_stream_text(text)) == text);
    }
}

TEST_CASE("serializer emits the documented grammar") {
    Stream s;
    s.header.vertex_count = 3;
    s.events = {insert_event(0, 1), query_event(2), remove_event(1, 0)};
    CHECK(serialize_stream_text(s) == "n 3\n+ 0 1\n? 2\n- 1 0\n");
}

TEST_CASE("generator with zero updates") {
    WorkloadConfig cfg;
    cfg.n = 4;
    cfg.updates = 0;
    const Stream s = generate(cfg);
    CHECK(s.events.empty());
    CHECK(serialize_stream_text(s) == "n 4\n");
}

TEST_CASE("generator on two vertices repeats the only edge") {
    WorkloadConfig cfg;
    cfg.n = 2;
    cfg.updates = 3;
    cfg.seed = 5;
    const Stream s = generate(cfg);
    REQUIRE(s.events.size() == 3);
    for (const StreamEvent& ev : s.events) {
        CHECK(ev.kind == EventKind::insert);
        CHECK(std::min(ev.u, ev.v) == 0);
        CHECK(std::max(ev.u, ev.v) == 1);
    }
}

TEST_CASE("generator output is pinned") {
    WorkloadConfig cfg;
    cfg.n = 100;
    cfg.updates = 1000;
    cfg.seed = 7;
    const std::string text = serialize_stream_text(generate(cfg));
    CHECK(text.rfind("n 100\n+ 15 52\n+ 57 78\n+ 21 88\n+ 9 20\n", 0) == 0);
    CHECK(serialize_stream_text(generate(cfg)) == text);
}

TEST_CASE("generator peak edge counts recorded by direct replay") {
    WorkloadConfig a;
    a.n = 100;
    a.updates = 10000;
    a.p_delete = 0.3;
    a.seed = 1;
    const Stream sa = generate(a);
    CHECK(max_edges_by_set_replay(sa) == 4192);
    CHECK(replay_max_edges(sa) == 4192);

    WorkloadConfig b;
    b.n = 50;
    b.updates = 5000;
    b.p_delete = 0.4;
    b.seed = 3;
    const Stream sb = generate(b);
    CHECK(max_edges_by_set_replay(sb) == 1018);
    CHECK(replay_max_edges(sb) == 1018);
}

TEST_CASE("generator respects its contract") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 40; ++trial) {
        WorkloadConfig cfg;
        cfg.n = 2 + rng() % 40;
        cfg.updates = rng() % 2000;
        cfg.seed = rng();
        cfg.p_delete = static_cast<double>(rng() % 11) / 10.0;
        cfg.query_rate = static_cast<double>(rng() % 30) / 10.0;
        cfg.noop_rate = trial % 2 ? 0.15 : 0.0;
        const Stream s = generate(cfg);
        CHECK(s.update_count() == cfg.updates);
        std::set<std::pair<VertexId, VertexId>> present;
        std::size_t noops = 0;
        for (const StreamEvent& ev : s.events) {
            REQUIRE(ev.u < cfg.n);
            if (ev.kind == EventKind::query) {
                continue;
            }
            REQUIRE(ev.v < cfg.n);
            REQUIRE(ev.u != ev.v);
            const std::pair<VertexId, VertexId> key = std::minmax(ev.u, ev.v);
            if (ev.kind == EventKind::remove) {
                REQUIRE_FALSE(present.empty());
                noops += present.erase(key) == 0 ? 1 : 0;
            } else {
                noops += present.insert(key).second ? 0 : 1;
            }
        }
        const std::size_t pairs = cfg.n * (cfg.n - 1) / 2;
        if (cfg.noop_rate == 0.0 && cfg.updates < pairs) {
            // Inserts only repeat once every pair is present.
            CHECK(noops == 0);
        }
    }
}

TEST_CASE("generator validates its configuration") {
    WorkloadConfig cfg;
    cfg.n = 1;
    CHECK_THROWS_AS(generate(cfg), std::invalid_argument);
    cfg.n = 10;
    cfg.p_delete = 1.5;
    CHECK_THROWS_AS(generate(cfg), std::invalid_argument);
    cfg.p_delete = 0.5;
    cfg.query_rate = 11;
    CHECK_THROWS_AS(generate(cfg), std::invalid_argument);
}
