#include "dynmatch/stream.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace dynmatch {

UpdateOp to_update(const StreamEvent& ev) {
    if (ev.kind == EventKind::query) {
        throw std::invalid_argument("a query event is not an update");
    }
    return {ev.kind == EventKind::insert ? UpdateKind::insert : UpdateKind::remove,
            make_edge(ev.u, ev.v)};
}

std::size_t Stream::update_count() const {
    return static_cast<std::size_t>(std::count_if(events.begin(), events.end(), [](const auto& e) {
        return e.kind != EventKind::query;
    }));
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) {
            ++i;
        }
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') {
            ++i;
        }
        if (i > start) {
            out.push_back(line.substr(start, i - start));
        }
    }
    return out;
}

std::uint64_t parse_id(std::string_view field, std::size_t line) {
    std::uint64_t value = 0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || field.empty()) {
        throw ParseError(ParseError::Kind::syntax, line,
                         "expected a non-negative integer, got '" + std::string(field) + "'");
    }
    return value;
}

class StreamParser {
public:
    void feed(std::string_view raw, std::size_t line) {
        const auto fields = split_fields(raw);
        if (fields.empty() || fields[0].front() == '#') {
            return;
        }
        const std::string_view tag = fields[0];
        if (tag == "n") {
            if (seen_record_) {
                throw ParseError(ParseError::Kind::syntax, line,
                                 "header must be the first non-comment line");
            }
            expect_arity(fields, 2, line);
            out_.header.vertex_count = parse_id(fields[1], line);
            seen_record_ = true;
            return;
        }
        seen_record_ = true;
        if (tag == "+" || tag == "-") {
            expect_arity(fields, 3, line);
            const VertexId u = parse_id(fields[1], line);
            const VertexId v = parse_id(fields[2], line);
            if (u == v) {
                throw ParseError(ParseError::Kind::self_loop, line,
                                 "self-loop on vertex " + std::to_string(u));
            }
            check_range(u, line);
            check_range(v, line);
            out_.events.push_back({tag == "+" ? EventKind::insert : EventKind::remove, u, v});
            return;
        }
        if (tag == "?") {
            expect_arity(fields, 2, line);
            const VertexId u = parse_id(fields[1], line);
            check_range(u, line);
            out_.events.push_back(query_event(u));
            return;
        }
        throw ParseError(ParseError::Kind::syntax, line,
                         "unknown record '" + std::string(tag) + "'");
    }

    Stream take() { return std::move(out_); }

private:
    static void expect_arity(const std::vector<std::string_view>& fields, std::size_t n,
                             std::size_t line) {
        if (fields.size() != n) {
            throw ParseError(ParseError::Kind::syntax, line,
                             "expected " + std::to_string(n) + " fields, got " +
                                 std::to_string(fields.size()));
        }
    }

    void check_range(VertexId u, std::size_t line) const {
        if (out_.header.vertex_count && u >= *out_.header.vertex_count) {
            throw ParseError(ParseError::Kind::range, line,
                             "vertex " + std::to_string(u) + " outside declared n=" +
                                 std::to_string(*out_.header.vertex_count));
        }
    }

    Stream out_;
    bool seen_record_ = false;
};

}  // namespace

Stream parse_stream(std::istream& in) {
    StreamParser parser;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        parser.feed(line, ++lineno);
    }
    return parser.take();
}

Stream parse_stream_text(std::string_view text) {
    StreamParser parser;
    std::size_t lineno = 0;
    while (!text.empty()) {
        const std::size_t nl = text.find('\n');
        parser.feed(text.substr(0, nl), ++lineno);
        if (nl == std::string_view::npos) {
            break;
        }
        text.remove_prefix(nl + 1);
    }
    return parser.take();
}

void serialize_stream(std::ostream& out, const Stream& stream) {
    if (stream.header.vertex_count) {
        out << "n " << *stream.header.vertex_count << '\n';
    }
    for (const StreamEvent& ev : stream.events) {
        switch (ev.kind) {
        case EventKind::insert:
            out << "+ " << ev.u << ' ' << ev.v << '\n';
            break;
        case EventKind::remove:
            out << "- " << ev.u << ' ' << ev.v << '\n';
            break;
        case EventKind::query:
            out << "? " << ev.u << '\n';
            break;
        }
    }
}

std::string serialize_stream_text(const Stream& stream) {
    std::ostringstream out;
    serialize_stream(out, stream);
    return out.str();
}

// ---------------------------------------------------------------------------
// Generation

namespace {

class PinnedRandom {
public:
    explicit PinnedRandom(std::uint64_t seed) : engine_(seed) {}

    /// Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % bound;
        std::uint64_t r = engine_();
        while (r >= limit) {
            r = engine_();
        }
        return r % bound;
    }

    /// Uniform double in [0, 1).
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool chance(double p) { return p > 0.0 && unit() < p; }

private:
    std::mt19937_64 engine_;
};

class TrackedGraph {
public:
    TrackedGraph(std::size_t n, PinnedRandom& rng) : n_(n), rng_(rng) {}

    std::uint64_t pair_count() const { return static_cast<std::uint64_t>(n_) * (n_ - 1) / 2; }
    bool empty() const { return edges_.empty(); }
    bool complete() const { return edges_.size() == pair_count(); }
    bool contains(const Edge& e) const { return index_.contains(e); }

    Edge random_pair() {
        const VertexId u = rng_.below(n_);
        VertexId v = rng_.below(n_ - 1);
        if (v >= u) {
            ++v;
        }
        return make_edge(u, v);
    }

    Edge random_absent() {
        Edge e = random_pair();
        while (contains(e)) {
            e = random_pair();
        }
        return e;
    }

    Edge random_present() { return edges_[rng_.below(edges_.size())]; }

    void add(const Edge& e) {
        if (index_.emplace(e, edges_.size()).second) {
            edges_.push_back(e);
        }
    }

    void remove(const Edge& e) {
        auto it = index_.find(e);
        if (it == index_.end()) {
            return;
        }
        const std::size_t slot = it->second;
        index_.erase(it);
        if (slot + 1 != edges_.size()) {
            edges_[slot] = edges_.back();
            index_[edges_[slot]] = slot;
        }
        edges_.pop_back();
    }

private:
    std::size_t n_;
    PinnedRandom& rng_;
    std::vector<Edge> edges_;
    std::unordered_map<Edge, std::size_t, EdgeHash> index_;
};

}  // namespace

void validate(const WorkloadConfig& cfg) {
    if (cfg.n < 2) {
        throw std::invalid_argument("workload needs n >= 2");
    }
    if (!(cfg.p_delete >= 0.0 && cfg.p_delete <= 1.0)) {
        throw std::invalid_argument("p_delete must lie in [0, 1]");
    }
    if (!(cfg.query_rate >= 0.0 && cfg.query_rate <= 10.0)) {
        throw std::invalid_argument("query_rate must lie in [0, 10]");
    }
    if (!(cfg.noop_rate >= 0.0 && cfg.noop_rate <= 1.0)) {
        throw std::invalid_argument("noop_rate must lie in [0, 1]");
    }
}

Stream generate(const WorkloadConfig& cfg) {
    validate(cfg);
    PinnedRandom rng(cfg.seed);
    TrackedGraph graph(cfg.n, rng);
    Stream out;
    out.header.vertex_count = cfg.n;

    const double whole_queries = std::floor(cfg.query_rate);
    const double extra_query = cfg.query_rate - whole_queries;

    for (std::size_t i = 0; i < cfg.updates; ++i) {
        if (!graph.empty() && rng.chance(cfg.noop_rate)) {
            // Half the no-ops re-insert a present edge, half delete an absent one.
            const bool reinsert = rng.chance(0.5);
            if (reinsert || graph.complete()) {
                const Edge e = graph.random_present();
                out.events.push_back(insert_event(e.a, e.b));
            } else {
                const Edge e = graph.random_absent();
                out.events.push_back(remove_event(e.a, e.b));
            }
        } else if (!graph.empty() && rng.chance(cfg.p_delete)) {
            const Edge e = graph.random_present();
            graph.remove(e);
            out.events.push_back(remove_event(e.a, e.b));
        } else {
            const Edge e = graph.complete() ? graph.random_pair() : graph.random_absent();
            graph.add(e);
            out.events.push_back(insert_event(e.a, e.b));
        }
        auto queries = static_cast<std::size_t>(whole_queries);
        if (rng.chance(extra_query)) {
            ++queries;
        }
        for (std::size_t q = 0; q < queries; ++q) {
            out.events.push_back(query_event(rng.below(cfg.n)));
        }
    }
    return out;
}

std::size_t replay_max_edges(const Stream& stream) {
    std::unordered_set<Edge, EdgeHash> present;
    std::size_t best = 0;
    for (const StreamEvent& ev : stream.events) {
        if (ev.kind == EventKind::query) {
            continue;
        }
        const Edge e = make_edge(ev.u, ev.v);
        if (ev.kind == EventKind::insert) {
            present.insert(e);
        } else {
            present.erase(e);
        }
        best = std::max(best, present.size());
    }
    return best;
}

}  // namespace dynmatch
