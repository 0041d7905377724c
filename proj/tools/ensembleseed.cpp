// ensembleseed: simulate nanopore event streams, base call them with a k-mer HMM
// plus posterior samples, and evaluate seeding strategies against the truth.

#include "ensembleseed/commands.hpp"
#include "ensembleseed/error.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <iostream>
#include <thread>

using namespace ensembleseed;

namespace {

void setup_logging() {
    auto logger = spdlog::stderr_color_mt("ensembleseed");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%H:%M:%S] [%l] %v");
    if (const char* level = std::getenv("ENSEMBLESEED_LOG")) {
        spdlog::set_level(spdlog::level::from_str(level));
    } else {
        spdlog::set_level(spdlog::level::info);
    }
}

}  // namespace

int main(int argc, char** argv) {
    setup_logging();
    RunConfig cfg;
    cfg.threads = std::max(1u, std::thread::hardware_concurrency());

    CLI::App app{"Ensemble base calling and seeding evaluation for nanopore reads"};
    app.require_subcommand(1);

    std::string t_text = "1-3";
    std::string n_text = "1,2,4,8,16";
    std::string strategies_text = "single,chain";
    std::string train_source = "truth";
    std::string train_mode = "per-order";
    bool no_viterbi_rows = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out-dir", cfg.out_dir, "Output directory")->capture_default_str();
        sub->add_option("--in-dir", cfg.in_dir, "Directory holding inputs (default: out-dir)");
        sub->add_option("--model-k", cfg.model_k, "k-mer length of the HMM")->capture_default_str();
        sub->add_option("--max-shift", cfg.max_shift, "Largest k-mer shift per event")
            ->capture_default_str();
        sub->add_option("--pore-model", cfg.pore_model, "Pore model TSV");
        sub->add_option("--transitions", cfg.transitions, "Trained transition model TSV");
        sub->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
        sub->add_option("--threads", cfg.threads, "Worker threads");
    };

    auto* sim = app.add_subcommand("simulate", "Simulate a reference, reads and truth");
    add_common(sim);
    sim->add_option("--reference-length", cfg.corpus.reference_length, "Reference length in bases")->capture_default_str();
    sim->add_option("--reads", cfg.corpus.num_reads, "Number of reads")->capture_default_str();
    sim->add_option("--events", cfg.corpus.events_per_read, "Events per read")
        ->capture_default_str();
    sim->add_option("--noise", cfg.corpus.noise, "Per-read var scaling of pore sigmas")
        ->capture_default_str();
    sim->add_option("--pore-seed", cfg.pore_seed, "Seed of the synthetic pore model")
        ->capture_default_str();

    auto* call = app.add_subcommand("basecall", "Viterbi base calls plus posterior samples");
    add_common(call);
    call->add_option("--n", cfg.samples, "Posterior samples per read")->capture_default_str();
    call->add_option("--events-file", cfg.events, "Events JSON lines");

    auto* train = app.add_subcommand("train", "Estimate transition probabilities");
    add_common(train);
    train->add_option("--source", train_source, "Paths to count: truth | viterbi")
        ->check(CLI::IsMember({"truth", "viterbi"}))
        ->capture_default_str();
    train->add_option("--mode", train_mode, "per-order | per-transition")
        ->check(CLI::IsMember({"per-order", "per-transition"}))
        ->capture_default_str();
    train->add_option("--pseudocount", cfg.pseudocount, "Pseudocount per out-edge")->capture_default_str();
    train->add_option("--events-file", cfg.events, "Events JSON lines");
    train->add_option("--reference", cfg.reference, "Reference FASTA");
    train->add_option("--truth", cfg.truth, "Truth TSV");
    train->add_option("--offsets", cfg.offsets, "Per-event truth offsets");

    auto* eval = app.add_subcommand("eval", "Sweep seeding strategies over windows");
    add_common(eval);
    eval->add_option("--seed-k", cfg.seed_k, "Single seed length")->capture_default_str();
    eval->add_option("--chain-seed-k", cfg.chain_seed_k, "Seed length inside chains")
        ->capture_default_str();
    eval->add_option("--chain-len", cfg.chain_len, "Seeds per chain")->capture_default_str();
    eval->add_option("--min-gap", cfg.min_gap, "Smallest seed distance inside a chain")->capture_default_str();
    eval->add_option("--max-gap", cfg.max_gap, "Largest seed distance inside a chain")->capture_default_str();
    eval->add_option("--window", cfg.window, "Events per window")->capture_default_str();
    eval->add_option("--t", t_text, "Support thresholds, e.g. 1-3")->capture_default_str();
    eval->add_option("--n", n_text, "Sample counts, e.g. 1-16")->capture_default_str();
    eval->add_option("--strategies", strategies_text, "Comma list of single and chain")->capture_default_str();
    eval->add_flag("--no-viterbi-rows", no_viterbi_rows, "Omit Viterbi-only rows");
    eval->add_option("--dedup-radius", cfg.dedup_radius, "False-positive cluster radius")->capture_default_str();
    eval->add_option("--reference", cfg.reference, "Reference FASTA");
    eval->add_option("--truth", cfg.truth, "Truth TSV");
    eval->add_option("--offsets", cfg.offsets, "Per-event truth offsets");
    eval->add_option("--calls", cfg.calls, "Base-call FASTA");
    eval->add_option("--spans", cfg.spans, "Base-call event spans");

    auto* report = app.add_subcommand("report", "Write FP/TP points per strategy and t");
    add_common(report);
    report->add_option("--report", cfg.report, "Report TSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        cfg.subcommand = app.get_subcommands().front()->get_name();
        cfg.t_values = parse_int_list(t_text);
        cfg.n_values = parse_int_list(n_text);
        cfg.strategies.clear();
        std::string_view rest = strategies_text;
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            const auto item = rest.substr(0, comma);
            if (item == "single") {
                cfg.strategies.push_back(SeedStrategy::SingleKmer);
            } else if (item == "chain") {
                cfg.strategies.push_back(SeedStrategy::Chain);
            } else {
                throw ArgumentError("unknown strategy '" + std::string(item) + "'");
            }
            rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        }
        cfg.viterbi_rows = !no_viterbi_rows;
        cfg.train_source = train_source == "truth" ? TrainSource::Truth : TrainSource::Viterbi;
        cfg.train_mode = train_mode == "per-order" ? TransitionModel::Mode::PerOrder
                                                   : TransitionModel::Mode::PerTransition;
        run_subcommand(cfg);
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return 1;
    }
    return 0;
}
