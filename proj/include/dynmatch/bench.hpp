#ifndef DYNMATCH_BENCH_HPP
#define DYNMATCH_BENCH_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dynmatch/graph_core.hpp"
#include "dynmatch/matcher.hpp"
#include "dynmatch/stream.hpp"

namespace dynmatch {

enum class Algorithm { lookahead, recompute };

std::string to_string(Algorithm a);

struct RunOptions {
    Algorithm algorithm = Algorithm::lookahead;
    IndicatorStrategy indicator = IndicatorStrategy::lazy_matrix;
    MateStrategy mate = MateStrategy::dense;
    IndicatorSetup indicator_setup = IndicatorSetup::lazy;
    std::size_t threshold = kDefaultThreshold;
    std::optional<std::size_t> phase_override;
    /// Cross-check against the recompute baseline after every update.
    bool verify = false;
    /// Receives one "mate <u> <v|null>" line per query when set.
    std::ostream* query_out = nullptr;
};

/// One CSV row.
struct BenchRecord {
    std::string stream_id;
    std::string algorithm;
    std::string indicator;
    std::string mate;
    std::optional<std::size_t> n;
    std::size_t m_max = 0;
    std::size_t updates = 0;
    std::uint64_t wall_ns = 0;
    double amortized_ns = 0.0;
    OpCounters counters;
    std::string setup_kind;

    double amortized_work() const {
        return updates == 0 ? 0.0
                            : static_cast<double>(counters.total_work()) /
                                  static_cast<double>(updates);
    }
};

inline constexpr std::string_view kCsvHeader =
    "stream_id,algorithm,indicator,mate,n,m_max,updates,wall_ns,amortized_ns,"
    "greedy_edge_visits,list_writes,indicator_ops,mate_ops,depth_max,setup_kind";

void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const BenchRecord& record);

struct VerificationFailure {
    /// 0-based index of the update after which the check failed.
    std::uint64_t update_index = 0;
    std::string message;
};

struct RunResult {
    BenchRecord record;
    std::optional<VerificationFailure> failure;
    EdgeList final_graph;
    Matching final_matching;
};

/// Drives one stream through one algorithm. Queries are answered at their
/// position in the stream; in lookahead mode they never take lookahead slots.
/// With `verify`, stops at the first failing update and reports it.
RunResult run_stream(const Stream& stream, const std::string& stream_id, const RunOptions& opts);

/// Insert-heavy workload whose edge count peaks near `target_edges`.
WorkloadConfig scaling_workload(std::size_t target_edges, std::uint64_t seed, double p_delete);

struct ScalingOptions {
    std::vector<std::size_t> target_edges;
    std::uint64_t seed = 1;
    double p_delete = 0.1;
    std::size_t threshold = kDefaultThreshold;
    /// Adds a lookahead run with the tree-backed mate store and indicator.
    bool include_tree_variant = false;
};

struct ScalingSeries {
    std::string label;
    std::vector<double> m_max;
    std::vector<double> amortized_work;
    /// ratio[i] = amortized_work[i + 1] / amortized_work[i]
    std::vector<double> doubling_ratio;
};

struct ScalingReport {
    std::vector<BenchRecord> records;
    std::vector<ScalingSeries> series;
};

ScalingReport run_scaling(const ScalingOptions& opts);

/// Least-squares fit y = slope * log2(m) + intercept.
struct LogFit {
    double slope = 0.0;
    double intercept = 0.0;
    /// max_i |fit(m_i) - y_i| / y_i
    double max_relative_residual = 0.0;
};

LogFit fit_log2(std::span<const double> m, std::span<const double> y);

void write_scaling_summary(std::ostream& out, const ScalingReport& report);

}  // namespace dynmatch

#endif  // DYNMATCH_BENCH_HPP
