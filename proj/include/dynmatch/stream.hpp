#ifndef DYNMATCH_STREAM_HPP
#define DYNMATCH_STREAM_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dynmatch/graph_core.hpp"
#include "dynmatch/matcher.hpp"

namespace dynmatch {

enum class EventKind { insert, remove, query };

/// One record of an update stream. `v` is unused (0) for queries.
struct StreamEvent {
    EventKind kind = EventKind::insert;
    VertexId u = 0;
    VertexId v = 0;

    friend bool operator==(const StreamEvent&, const StreamEvent&) = default;
};

inline StreamEvent insert_event(VertexId u, VertexId v) { return {EventKind::insert, u, v}; }
inline StreamEvent remove_event(VertexId u, VertexId v) { return {EventKind::remove, u, v}; }
inline StreamEvent query_event(VertexId u) { return {EventKind::query, u, 0}; }

/// Converts an insert/remove event into a normalized update.
UpdateOp to_update(const StreamEvent& ev);

struct StreamHeader {
    /// Declared dense vertex universe; absent means sparse ids.
    std::optional<std::size_t> vertex_count;

    friend bool operator==(const StreamHeader&, const StreamHeader&) = default;
};

struct Stream {
    StreamHeader header;
    std::vector<StreamEvent> events;

    std::size_t update_count() const;

    friend bool operator==(const Stream&, const Stream&) = default;
};

class ParseError : public std::runtime_error {
public:
    enum class Kind { syntax, self_loop, range };

    ParseError(Kind kind, std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what),
          kind_(kind),
          line_(line) {}

    Kind kind() const noexcept { return kind_; }
    std::size_t line() const noexcept { return line_; }

private:
    Kind kind_;
    std::size_t line_;
};

/// Line-oriented text format:
///
///   # comment
///   n <int>        optional header, first non-comment line; dense universe
///   + <u> <v>      insert
///   - <u> <v>      delete
///   ? <u>          mate query
///
/// Blank lines are ignored. Throws ParseError with a 1-based line number.
Stream parse_stream(std::istream& in);
Stream parse_stream_text(std::string_view text);

void serialize_stream(std::ostream& out, const Stream& stream);
std::string serialize_stream_text(const Stream& stream);

/// Parameters of the seeded workload generator.
struct WorkloadConfig {
    std::size_t n = 100;
    std::size_t updates = 1000;
    std::uint64_t seed = 1;
    double p_delete = 0.0;
    /// Expected queries emitted after each update, in [0, 10].
    double query_rate = 0.0;
    /// Probability that an update is a deliberate no-op (insert of a present
    /// edge or delete of an absent one).
    double noop_rate = 0.0;
};

/// Throws std::invalid_argument for out-of-range parameters or n < 2.
void validate(const WorkloadConfig& cfg);

/// Deterministic workload: exactly `cfg.updates` insert/delete events, with
/// queries interleaved. Randomness comes from std::mt19937_64 seeded with
/// `cfg.seed`; bounded integers use rejection sampling and probabilities use
/// the top 53 bits, so the output is identical on every conforming platform.
Stream generate(const WorkloadConfig& cfg);

/// Largest edge count reached when replaying the stream's updates from an
/// empty graph.
std::size_t replay_max_edges(const Stream& stream);

}  // namespace dynmatch

#endif  // DYNMATCH_STREAM_HPP
