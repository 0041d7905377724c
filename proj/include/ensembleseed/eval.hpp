#pragma once

#include "ensembleseed/decode.hpp"
#include "ensembleseed/seeding.hpp"
#include "ensembleseed/simulate.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ensembleseed {

/// Viterbi base call and posterior samples of one read, all with event spans.
struct ReadEnsemble {
    std::string read_id;
    BaseCall viterbi;
    std::vector<BaseCall> samples;
};

/// A fixed number of consecutive events of one read, with every base call padded
/// so that each event occupies the same columns in every row.
struct Window {
    std::string window_id;
    std::string read_id;
    std::size_t first_event = 0;
    std::size_t num_events = 0;
    /// rows[0] is the Viterbi call, rows[1..] the samples in draw order.
    std::vector<std::string> rows;
    /// First column of each event, plus the total width at the end.
    std::vector<std::uint32_t> event_columns;
    TruthInterval truth;

    std::span<const std::string> viterbi_row() const { return {rows.data(), 1}; }
    std::size_t num_samples() const { return rows.size() - 1; }
    std::span<const std::string> samples(std::size_t n) const { return {rows.data() + 1, n}; }
};

/// Splits a read into consecutive disjoint windows of `window_size` events; the
/// trailing partial window is dropped. With `offsets` (the true walk offset of
/// every event) each window's truth is narrowed to the bases its events covered;
/// otherwise every window inherits the whole read's truth interval.
std::vector<Window> build_windows(const ReadEnsemble& ensemble, const TruthInterval& read_truth,
                                  const std::vector<std::uint32_t>* offsets, int model_k,
                                  std::size_t window_size = 500);

/// Degapped substring of `call` covering events [first, first + count).
std::string call_substring(const BaseCall& call, std::size_t first, std::size_t count);

/// A hit (or a chain's leftmost hit) is valid if its reference left endpoint lies
/// inside the truth interval and it is on the truth strand.
bool classify_hit(const SeedHit& hit, const TruthInterval& truth);

/// Greedy cluster representatives: hits are scanned in (query_col, ref_pos) order
/// and kept unless a kept hit is within `radius` in both coordinates.
std::vector<SeedHit> greedy_dedup(std::vector<SeedHit> hits, std::uint32_t radius = 10);

enum class SeedStrategy { SingleKmer, Chain };
enum class QuerySource { Viterbi, Samples };

struct StrategyConfig {
    SeedStrategy kind = SeedStrategy::SingleKmer;
    int k = 13;
    ChainParams chain;

    static StrategyConfig single_kmer(int k = 13) { return {SeedStrategy::SingleKmer, k, {}}; }
    static StrategyConfig chained(int k = 10, ChainParams params = {}) {
        return {SeedStrategy::Chain, k, params};
    }
};

struct EvalRow {
    std::string strategy;
    int k = 0;
    int t = 0;
    int n = 0;
    std::uint64_t tp = 0;
    std::uint64_t windows = 0;
    double sn = 0.0;
    std::uint64_t fp = 0;

    bool operator==(const EvalRow&) const = default;
};

/// Report name of a strategy: "single-kmer" / "chain", prefixed "viterbi-" when the
/// query is the Viterbi call alone.
std::string strategy_name(const StrategyConfig& strategy, QuerySource source);

struct WindowOutcome {
    bool true_positive = false;
    std::uint64_t false_positives = 0;
    std::uint64_t raw_invalid = 0;
};

/// Seeds (hits or chain leftmost points) of one window for a query source. With
/// the sample source, the first `n` samples are used with support threshold `t`;
/// n = 0 or t > n yields no seeds.
std::vector<SeedHit> window_seeds(const Window& window, const KmerIndex& index,
                                  const StrategyConfig& strategy, QuerySource source, int t,
                                  int n);

WindowOutcome evaluate_window(const Window& window, const KmerIndex& index,
                              const StrategyConfig& strategy, QuerySource source, int t, int n,
                              std::uint32_t dedup_radius = 10);

EvalRow evaluate(std::span<const Window> windows, const KmerIndex& index,
                 const StrategyConfig& strategy, QuerySource source, int t, int n,
                 std::uint32_t dedup_radius = 10, unsigned threads = 1);

struct SweepConfig {
    std::vector<int> t_values{1, 2, 3};
    std::vector<int> n_values{1, 2, 4, 8, 16};
    bool include_viterbi = true;
    std::uint32_t dedup_radius = 10;
    unsigned threads = 1;
};

/// Rows per strategy: the Viterbi row first (if requested), then every (t, n)
/// with t ascending and n ascending within t.
std::vector<EvalRow> sweep(std::span<const Window> windows, const KmerIndex& index,
                           const StrategyConfig& strategy, const SweepConfig& config);

// Report TSV: "strategy\tk\tt\tn\tTP\twindows\tSn\tFP", Sn with 3 decimals.
void write_report(std::ostream& out, std::span<const EvalRow> rows);
std::vector<EvalRow> read_report(std::istream& in);

/// One FP/TP curve per (strategy, t), points sorted by FP then TP.
struct Curve {
    std::string strategy;
    int t = 0;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> points;  // (FP, TP)
};
std::vector<Curve> report_curves(std::span<const EvalRow> rows);
void write_curve(std::ostream& out, const Curve& curve);

/// Fraction of alignment columns that are matches in a unit-cost global alignment.
double alignment_identity(std::string_view a, std::string_view b);

}  // namespace ensembleseed
