#include "dynmatch/bench.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "dynmatch/reference.hpp"

namespace dynmatch {

std::string to_string(Algorithm a) {
    return a == Algorithm::lookahead ? "lookahead" : "recompute";
}

void write_csv_header(std::ostream& out) {
    out << kCsvHeader << '\n';
}

void write_csv_row(std::ostream& out, const BenchRecord& r) {
    out << r.stream_id << ',' << r.algorithm << ',' << r.indicator << ',' << r.mate << ',';
    if (r.n) {
        out << *r.n;
    } else {
        out << "sparse";
    }
    out << ',' << r.m_max << ',' << r.updates << ',' << r.wall_ns << ',' << std::fixed
        << std::setprecision(3) << r.amortized_ns << std::defaultfloat << ','
        << r.counters.greedy_edge_visits << ',' << r.counters.list_writes << ','
        << r.counters.indicator_ops << ',' << r.counters.mate_ops << ','
        << r.counters.recursion_depth_max << ',' << r.setup_kind << '\n';
}

namespace {

using Clock = std::chrono::steady_clock;

struct VerificationAbort {
    VerificationFailure failure;
};

// Queries grouped by how many updates precede them in the stream.
struct StreamPlan {
    std::vector<UpdateOp> updates;
    std::vector<std::vector<VertexId>> queries_after;
};

StreamPlan plan_stream(const Stream& stream) {
    StreamPlan plan;
    plan.queries_after.emplace_back();
    for (const StreamEvent& ev : stream.events) {
        if (ev.kind == EventKind::query) {
            plan.queries_after.back().push_back(ev.u);
        } else {
            plan.updates.push_back(to_update(ev));
            plan.queries_after.emplace_back();
        }
    }
    return plan;
}

void answer_queries(const std::vector<VertexId>& queries, const MateStore& store,
                    std::ostream* out) {
    for (VertexId u : queries) {
        const std::optional<VertexId> mate = store.get(u);
        if (out != nullptr) {
            *out << "mate " << u << ' ';
            if (mate) {
                *out << *mate;
            } else {
                *out << "null";
            }
            *out << '\n';
        }
    }
}

BenchRecord base_record(const Stream& stream, const std::string& id, const RunOptions& opts) {
    BenchRecord r;
    r.stream_id = id;
    r.algorithm = to_string(opts.algorithm);
    r.indicator = opts.algorithm == Algorithm::lookahead ? to_string(opts.indicator) : "none";
    r.mate = to_string(opts.mate);
    r.n = stream.header.vertex_count;
    r.setup_kind = opts.algorithm == Algorithm::lookahead &&
                           opts.indicator == IndicatorStrategy::lazy_matrix
                       ? to_string(opts.indicator_setup)
                       : to_string(IndicatorSetup::lazy);
    return r;
}

void finish_record(BenchRecord& r, std::size_t updates, Clock::duration elapsed) {
    r.updates = updates;
    r.wall_ns = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(elapsed).count());
    r.amortized_ns = updates == 0 ? 0.0 : static_cast<double>(r.wall_ns) / updates;
}

RunResult run_lookahead(const Stream& stream, const std::string& id, const RunOptions& opts) {
    const StreamPlan plan = plan_stream(stream);
    MatcherConfig cfg;
    cfg.vertex_count = stream.header.vertex_count;
    cfg.indicator = opts.indicator;
    cfg.mate = opts.mate;
    cfg.indicator_setup = opts.indicator_setup;
    cfg.threshold = opts.threshold;
    cfg.phase_override = opts.phase_override;

    RunResult result;
    result.record = base_record(stream, id, opts);
    const auto start = Clock::now();
    Matcher matcher(cfg);
    std::optional<DifferentialVerifier> verifier;
    if (opts.verify) {
        verifier.emplace(stream.header.vertex_count);
    }

    MatcherHooks hooks;
    hooks.after_update = [&](std::uint64_t index, const UpdateOp& q) {
        if (verifier) {
            verifier->apply(q);
            if (auto failure = verifier->check(matcher.snapshot_graph(), matcher.mates())) {
                throw VerificationAbort{{index, *failure}};
            }
        }
        answer_queries(plan.queries_after[index + 1], matcher.mates(), opts.query_out);
    };
    matcher.set_hooks(std::move(hooks));

    answer_queries(plan.queries_after[0], matcher.mates(), opts.query_out);
    matcher.push_updates(plan.updates);
    try {
        matcher.run_until_buffer_consumed();
    } catch (const VerificationAbort& abort) {
        result.failure = abort.failure;
    }
    finish_record(result.record, plan.updates.size(), Clock::now() - start);
    result.record.m_max = matcher.max_edge_count();
    result.record.counters = matcher.counters();
    result.final_graph = matcher.snapshot_graph();
    result.final_matching = matcher.snapshot_matching();
    return result;
}

RunResult run_recompute(const Stream& stream, const std::string& id, const RunOptions& opts) {
    const StreamPlan plan = plan_stream(stream);
    RunResult result;
    result.record = base_record(stream, id, opts);
    if (opts.mate == MateStrategy::dense && !stream.header.vertex_count) {
        throw std::invalid_argument("dense mate store needs a declared vertex count");
    }
    const auto start = Clock::now();
    MateStore store = opts.mate == MateStrategy::dense
                          ? MateStore::dense(*stream.header.vertex_count)
                          : MateStore::ordered_map(stream.header.vertex_count);
    OracleState state(std::move(store));
    std::optional<DifferentialVerifier> verifier;
    if (opts.verify) {
        verifier.emplace(stream.header.vertex_count);
    }
    std::size_t m_max = 0;
    answer_queries(plan.queries_after[0], state.store, opts.query_out);
    for (std::size_t i = 0; i < plan.updates.size(); ++i) {
        baseline_step(state, plan.updates[i]);
        m_max = std::max(m_max, state.graph.size());
        if (verifier) {
            verifier->apply(plan.updates[i]);
            if (auto failure = verifier->check(state.graph, state.store)) {
                result.failure = VerificationFailure{i, *failure};
                break;
            }
        }
        answer_queries(plan.queries_after[i + 1], state.store, opts.query_out);
    }
    finish_record(result.record, plan.updates.size(), Clock::now() - start);
    result.record.m_max = m_max;
    result.record.counters = state.totals();
    result.final_graph = state.graph;
    result.final_matching = state.matching;
    return result;
}

}  // namespace

RunResult run_stream(const Stream& stream, const std::string& stream_id, const RunOptions& opts) {
    return opts.algorithm == Algorithm::lookahead ? run_lookahead(stream, stream_id, opts)
                                                  : run_recompute(stream, stream_id, opts);
}

WorkloadConfig scaling_workload(std::size_t target_edges, std::uint64_t seed, double p_delete) {
    WorkloadConfig cfg;
    // Keep the pair space at least 4x the peak edge count so inserts rarely
    // collide.
    cfg.n = static_cast<std::size_t>(std::ceil(std::sqrt(8.0 * static_cast<double>(target_edges)))) + 2;
    const double growth = std::max(1.0 - 2.0 * p_delete, 0.05);
    cfg.updates = static_cast<std::size_t>(std::ceil(static_cast<double>(target_edges) / growth));
    cfg.seed = seed;
    cfg.p_delete = p_delete;
    return cfg;
}

ScalingReport run_scaling(const ScalingOptions& opts) {
    struct Variant {
        std::string label;
        RunOptions run;
    };
    std::vector<Variant> variants;
    RunOptions lookahead;
    lookahead.threshold = opts.threshold;
    variants.push_back({"lookahead/matrix/dense", lookahead});
    RunOptions recompute;
    recompute.algorithm = Algorithm::recompute;
    variants.push_back({"recompute/dense", recompute});
    if (opts.include_tree_variant) {
        RunOptions tree = lookahead;
        tree.indicator = IndicatorStrategy::ordered_set;
        tree.mate = MateStrategy::ordered_map;
        variants.push_back({"lookahead/set/map", tree});
    }

    ScalingReport report;
    for (const Variant& v : variants) {
        report.series.push_back({v.label, {}, {}, {}});
    }
    for (std::size_t target : opts.target_edges) {
        const WorkloadConfig cfg = scaling_workload(target, opts.seed, opts.p_delete);
        const Stream stream = generate(cfg);
        const std::string id = "scale-" + std::to_string(target);
        for (std::size_t i = 0; i < variants.size(); ++i) {
            RunResult r = run_stream(stream, id, variants[i].run);
            ScalingSeries& s = report.series[i];
            s.m_max.push_back(static_cast<double>(r.record.m_max));
            s.amortized_work.push_back(r.record.amortized_work());
            report.records.push_back(std::move(r.record));
        }
    }
    for (ScalingSeries& s : report.series) {
        for (std::size_t i = 1; i < s.amortized_work.size(); ++i) {
            s.doubling_ratio.push_back(s.amortized_work[i] / s.amortized_work[i - 1]);
        }
    }
    return report;
}

LogFit fit_log2(std::span<const double> m, std::span<const double> y) {
    LogFit fit;
    const std::size_t k = std::min(m.size(), y.size());
    if (k == 0) {
        return fit;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < k; ++i) {
        const double x = std::log2(m[i]);
        sx += x;
        sy += y[i];
        sxx += x * x;
        sxy += x * y[i];
    }
    const double denom = static_cast<double>(k) * sxx - sx * sx;
    if (k == 1 || denom == 0.0) {
        fit.intercept = sy / static_cast<double>(k);
    } else {
        fit.slope = (static_cast<double>(k) * sxy - sx * sy) / denom;
        fit.intercept = (sy - fit.slope * sx) / static_cast<double>(k);
    }
    for (std::size_t i = 0; i < k; ++i) {
        const double predicted = fit.slope * std::log2(m[i]) + fit.intercept;
        fit.max_relative_residual =
            std::max(fit.max_relative_residual, std::abs(predicted - y[i]) / y[i]);
    }
    return fit;
}

void write_scaling_summary(std::ostream& out, const ScalingReport& report) {
    out << "series,m_max,amortized_work,doubling_ratio\n";
    for (const ScalingSeries& s : report.series) {
        for (std::size_t i = 0; i < s.m_max.size(); ++i) {
            out << s.label << ',' << static_cast<std::uint64_t>(s.m_max[i]) << ',' << std::fixed
                << std::setprecision(3) << s.amortized_work[i] << ',';
            if (i > 0) {
                out << s.doubling_ratio[i - 1];
            }
            out << std::defaultfloat << '\n';
        }
    }
}

}  // namespace dynmatch
