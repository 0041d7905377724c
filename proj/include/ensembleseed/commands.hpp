#pragma once

#include "ensembleseed/eval.hpp"
#include "ensembleseed/simulate.hpp"
#include "ensembleseed/transitions.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ensembleseed {

enum class TrainSource { Truth, Viterbi };

/// Everything a subcommand needs. Input paths left empty resolve to the
/// conventional file names inside `in_dir` (or `out_dir` when in_dir is empty).
struct RunConfig {
    std::string subcommand;
    std::filesystem::path out_dir = ".";
    std::filesystem::path in_dir;

    // Model
    int model_k = 5;
    int max_shift = 2;
    std::filesystem::path pore_model;
    std::filesystem::path transitions;
    std::uint64_t pore_seed = 1;

    // Simulation
    CorpusConfig corpus;

    // Base calling
    int samples = 250;

    // Training
    TrainSource train_source = TrainSource::Truth;
    TransitionModel::Mode train_mode = TransitionModel::Mode::PerOrder;
    std::int64_t pseudocount = 1;

    // Seeding / evaluation
    int seed_k = 13;
    int chain_seed_k = 10;
    int chain_len = 3;
    int min_gap = 10;
    int max_gap = 50;
    std::size_t window = 500;
    std::vector<int> t_values{1, 2, 3};
    std::vector<int> n_values{1, 2, 4, 8, 16};
    std::vector<SeedStrategy> strategies{SeedStrategy::SingleKmer, SeedStrategy::Chain};
    bool viterbi_rows = true;
    std::uint32_t dedup_radius = 10;

    std::uint64_t seed = 20161016;
    unsigned threads = 1;

    // Explicit input overrides
    std::filesystem::path reference;
    std::filesystem::path events;
    std::filesystem::path truth;
    std::filesystem::path offsets;
    std::filesystem::path calls;
    std::filesystem::path spans;
    std::filesystem::path report;

    /// Throws ArgumentError describing the first invalid setting.
    void validate() const;

    std::filesystem::path input(const std::filesystem::path& explicit_path,
                                std::string_view default_name) const;
};

// Conventional file names.
inline constexpr std::string_view kReferenceFile = "reference.fa";
inline constexpr std::string_view kEventsFile = "events.jsonl";
inline constexpr std::string_view kTruthFile = "truth.tsv";
inline constexpr std::string_view kOffsetsFile = "offsets.jsonl";
inline constexpr std::string_view kPoreModelFile = "pore_model.tsv";
inline constexpr std::string_view kTransitionsFile = "transitions.tsv";
inline constexpr std::string_view kCallsFile = "calls.fa";
inline constexpr std::string_view kSpansFile = "spans.jsonl";
inline constexpr std::string_view kReportFile = "report.tsv";
inline constexpr std::string_view kPointsDir = "points";

std::string config_json(const RunConfig& config);

/// Parses "1,2,5" or "1-16" or a mix such as "1-4,8,16".
std::vector<int> parse_int_list(std::string_view text);

/// Loads the pore model (or builds the synthetic one) and transitions per config.
Hmm load_hmm(const RunConfig& config);

void cmd_simulate(const RunConfig& config);
void cmd_basecall(const RunConfig& config);
void cmd_train(const RunConfig& config);
void cmd_eval(const RunConfig& config);
void cmd_report(const RunConfig& config);

/// Base calls of one read: Viterbi plus `samples` posterior draws on the
/// read's own RNG stream.
ReadEnsemble basecall_read(const Hmm& hmm, const EventSequence& events, int samples,
                           std::uint64_t seed);

/// Windows for every read in the base-call set, matched to truth by read id.
std::vector<Window> load_windows(const RunConfig& config);

void run_subcommand(const RunConfig& config);

}  // namespace ensembleseed
