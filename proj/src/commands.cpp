#include "ensembleseed/commands.hpp"

#include "ensembleseed/error.hpp"
#include "ensembleseed/io.hpp"
#include "ensembleseed/parallel.hpp"
#include "ensembleseed/rng.hpp"
#include "ensembleseed/train.hpp"

#include <json.hpp>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace ensembleseed {

namespace fs = std::filesystem;

namespace {

const char* mode_name(TransitionModel::Mode m) {
    return m == TransitionModel::Mode::PerOrder ? "per-order" : "per-transition";
}

void write_config(RunConfig config, const std::string& name) {
    config.subcommand = name;
    write_file_atomic(config.out_dir / (name + ".config.json"),
                      [&](std::ostream& out) { out << config_json(config) << '\n'; });
}

std::uint64_t read_stream(std::uint64_t seed, std::size_t read_index) {
    return stream_seed(seed, 0x200000 + read_index);
}

}  // namespace

void RunConfig::validate() const {
    auto fail = [](const std::string& msg) { throw ArgumentError(msg); };
    if (model_k < 1 || model_k > kMaxModelK) fail("--model-k must be in [1, 8]");
    if (max_shift < 1 || max_shift > model_k) fail("--max-shift must be in [1, model-k]");
    if (samples < 0) fail("--n-samples must be non-negative");
    if (pseudocount < 0) fail("--pseudocount must be non-negative");
    if (seed_k < 1 || seed_k > kMaxKmerLength) fail("--seed-k must be in [1, 16]");
    if (chain_seed_k < 1 || chain_seed_k > kMaxKmerLength) fail("--chain-seed-k must be in [1, 16]");
    if (chain_len < 1) fail("--chain-len must be positive");
    if (min_gap < 0 || max_gap < min_gap) fail("need 0 <= --min-gap <= --max-gap");
    if (window == 0) fail("--window must be positive");
    if (t_values.empty() || n_values.empty()) fail("--t and --n need at least one value");
    for (int t : t_values) {
        if (t < 1) fail("--t values must be >= 1");
    }
    for (int n : n_values) {
        if (n < 0) fail("--n values must be >= 0");
    }
    if (strategies.empty()) fail("--strategies needs at least one strategy");
    if (threads < 1) fail("--threads must be positive");
    if (!(corpus.noise > 0.0)) fail("--noise must be positive");
    if (corpus.events_per_read < 1) fail("--events must be positive");
}

fs::path RunConfig::input(const fs::path& explicit_path, std::string_view default_name) const {
    if (!explicit_path.empty()) {
        return explicit_path;
    }
    return (in_dir.empty() ? out_dir : in_dir) / default_name;
}

std::string config_json(const RunConfig& c) {
    nlohmann::ordered_json j;
    j["subcommand"] = c.subcommand;
    j["out_dir"] = c.out_dir.string();
    j["in_dir"] = c.in_dir.string();
    j["model_k"] = c.model_k;
    j["max_shift"] = c.max_shift;
    j["pore_model"] = c.pore_model.string();
    j["transitions"] = c.transitions.string();
    j["pore_seed"] = c.pore_seed;
    j["reference_length"] = c.corpus.reference_length;
    j["reads"] = c.corpus.num_reads;
    j["events_per_read"] = c.corpus.events_per_read;
    j["noise"] = c.corpus.noise;
    j["samples"] = c.samples;
    j["train_source"] = c.train_source == TrainSource::Truth ? "truth" : "viterbi";
    j["train_mode"] = mode_name(c.train_mode);
    j["pseudocount"] = c.pseudocount;
    j["seed_k"] = c.seed_k;
    j["chain_seed_k"] = c.chain_seed_k;
    j["chain_len"] = c.chain_len;
    j["min_gap"] = c.min_gap;
    j["max_gap"] = c.max_gap;
    j["window"] = c.window;
    j["t"] = c.t_values;
    j["n"] = c.n_values;
    auto& s = j["strategies"] = nlohmann::ordered_json::array();
    for (auto st : c.strategies) {
        s.push_back(st == SeedStrategy::SingleKmer ? "single" : "chain");
    }
    j["viterbi_rows"] = c.viterbi_rows;
    j["dedup_radius"] = c.dedup_radius;
    j["seed"] = c.seed;
    // Thread count is omitted: it never changes outputs.
    return j.dump(2);
}

std::vector<int> parse_int_list(std::string_view text) {
    std::vector<int> out;
    auto parse_one = [&](std::string_view s) {
        int v = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
            throw ArgumentError("bad integer '" + std::string(s) + "' in list '" +
                                std::string(text) + "'");
        }
        return v;
    };
    while (!text.empty()) {
        const auto comma = text.find(',');
        const auto item = text.substr(0, comma);
        const auto dash = item.find('-', 1);
        if (dash == std::string_view::npos) {
            out.push_back(parse_one(item));
        } else {
            const int lo = parse_one(item.substr(0, dash));
            const int hi = parse_one(item.substr(dash + 1));
            if (hi < lo) {
                throw ArgumentError("empty range '" + std::string(item) + "'");
            }
            for (int v = lo; v <= hi; ++v) {
                out.push_back(v);
            }
        }
        if (comma == std::string_view::npos) {
            break;
        }
        text.remove_prefix(comma + 1);
    }
    if (out.empty()) {
        throw ArgumentError("empty integer list");
    }
    return out;
}

Hmm load_hmm(const RunConfig& config) {
    PoreModel pore = config.pore_model.empty()
                         ? synthetic_pore_model(config.model_k, config.pore_seed)
                         : load_pore_model(config.pore_model);
    if (pore.k() != config.model_k) {
        throw ArgumentError("pore model has k=" + std::to_string(pore.k()) +
                            " but --model-k is " + std::to_string(config.model_k));
    }
    TransitionModel tm = config.transitions.empty()
                             ? TransitionModel::defaults(config.model_k, config.max_shift)
                             : load_transition_model(config.transitions);
    return Hmm(std::move(pore), std::move(tm));
}

void cmd_simulate(const RunConfig& config) {
    config.validate();
    fs::create_directories(config.out_dir);
    const Hmm hmm = load_hmm(config);
    spdlog::info("simulating {} reads x {} events on a {} bp reference",
                 config.corpus.num_reads, config.corpus.events_per_read,
                 config.corpus.reference_length);
    const Corpus corpus = simulate_corpus(hmm, config.corpus);

    std::vector<EventSequence> events;
    std::vector<TruthInterval> truth;
    std::vector<ReadOffsets> offsets;
    for (const auto& r : corpus.reads) {
        events.push_back(r.events);
        truth.push_back(r.truth);
        offsets.push_back({r.events.read_id, r.offsets});
    }
    const auto& d = config.out_dir;
    write_file_atomic(d / kReferenceFile, [&](std::ostream& out) {
        const FastaRecord rec{corpus.contig, corpus.reference};
        write_fasta(out, std::span(&rec, 1));
    });
    write_file_atomic(d / kPoreModelFile,
                      [&](std::ostream& out) { write_pore_model(out, hmm.pore()); });
    write_file_atomic(d / kEventsFile, [&](std::ostream& out) { write_events(out, events); });
    write_file_atomic(d / kTruthFile, [&](std::ostream& out) { write_truth(out, truth); });
    write_file_atomic(d / kOffsetsFile, [&](std::ostream& out) { write_offsets(out, offsets); });
    write_config(config, "simulate");
}

ReadEnsemble basecall_read(const Hmm& hmm, const EventSequence& events, int samples,
                           std::uint64_t seed) {
    ReadEnsemble ens;
    ens.read_id = events.read_id;
    const int k = hmm.k();
    const int max_shift = hmm.transitions().max_shift();
    ens.viterbi = path_to_sequence(viterbi(hmm, events).states, k, max_shift);
    if (samples > 0) {
        const auto fwd = forward(hmm, events);
        for (const auto& p : sample_paths(hmm, events, fwd, samples, seed)) {
            ens.samples.push_back(path_to_sequence(p.states, k, max_shift));
        }
    }
    return ens;
}

void cmd_basecall(const RunConfig& config) {
    config.validate();
    fs::create_directories(config.out_dir);
    RunConfig resolved = config;
    if (resolved.pore_model.empty()) {
        resolved.pore_model = config.input({}, kPoreModelFile);
    }
    const Hmm hmm = load_hmm(resolved);
    const auto reads = load_events(config.input(config.events, kEventsFile));
    spdlog::info("base calling {} reads with {} samples each", reads.size(), config.samples);
    std::vector<ReadEnsemble> out(reads.size());
    parallel_for(reads.size(), config.threads, [&](std::size_t i) {
        out[i] = basecall_read(hmm, reads[i], config.samples, read_stream(config.seed, i));
    });
    std::ostringstream fasta, spans;
    write_basecalls(fasta, spans, out);
    write_file_atomic(config.out_dir / kCallsFile, [&](std::ostream& o) { o << fasta.str(); });
    write_file_atomic(config.out_dir / kSpansFile, [&](std::ostream& o) { o << spans.str(); });
    write_config(resolved, "basecall");
}

namespace {

std::map<std::string, TruthInterval> truth_by_read(const fs::path& path) {
    std::map<std::string, TruthInterval> out;
    for (auto& t : load_truth(path)) {
        const auto id = t.read_id;
        if (!out.emplace(id, std::move(t)).second) {
            throw ParseError("truth: duplicate read id " + id);
        }
    }
    return out;
}

std::map<std::string, std::vector<std::uint32_t>> offsets_by_read(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open offsets file " + path.string());
    }
    std::map<std::string, std::vector<std::uint32_t>> out;
    for (auto& r : read_offsets(in)) {
        out[r.read_id] = std::move(r.offsets);
    }
    return out;
}

std::string load_reference(const fs::path& path) {
    auto recs = load_fasta(path);
    if (recs.size() != 1) {
        throw ParseError("reference FASTA must hold exactly one contig, found " +
                         std::to_string(recs.size()));
    }
    return std::move(recs.front().sequence);
}

}  // namespace

void cmd_train(const RunConfig& config) {
    config.validate();
    fs::create_directories(config.out_dir);
    std::vector<StatePath> paths;
    if (config.train_source == TrainSource::Truth) {
        const auto reference = load_reference(config.input(config.reference, kReferenceFile));
        const auto offsets = offsets_by_read(config.input(config.offsets, kOffsetsFile));
        for (const auto& t : load_truth(config.input(config.truth, kTruthFile))) {
            const auto it = offsets.find(t.read_id);
            if (it == offsets.end()) {
                throw ParseError("no offsets for read " + t.read_id);
            }
            if (t.end > reference.size()) {
                throw ParseError("truth interval of " + t.read_id + " exceeds the reference");
            }
            std::string walked = reference.substr(t.start, t.end - t.start);
            if (t.strand == Strand::Reverse) {
                walked = reverse_complement(walked);
            }
            StatePath p;
            for (auto off : it->second) {
                if (off + static_cast<std::size_t>(config.model_k) > walked.size()) {
                    throw ParseError("offset beyond truth interval for read " + t.read_id);
                }
                p.states.push_back(encode_kmer_or_throw(
                    std::string_view(walked).substr(off, static_cast<std::size_t>(config.model_k))));
            }
            paths.push_back(std::move(p));
        }
    } else {
        RunConfig resolved = config;
        if (resolved.pore_model.empty()) {
            resolved.pore_model = config.input({}, kPoreModelFile);
        }
        const Hmm hmm = load_hmm(resolved);
        const auto reads = load_events(config.input(config.events, kEventsFile));
        paths.resize(reads.size());
        parallel_for(reads.size(), config.threads,
                     [&](std::size_t i) { paths[i] = viterbi(hmm, reads[i]); });
    }
    spdlog::info("training {} transitions from {} paths", mode_name(config.train_mode),
                 paths.size());
    const auto counts = count_transitions(paths, config.model_k, config.max_shift);
    const auto model = estimate_transitions(counts, config.pseudocount, config.train_mode);
    write_file_atomic(config.out_dir / kTransitionsFile, [&](std::ostream& out) {
        write_transition_model(out, model, config.pseudocount);
    });
    write_config(config, "train");
}

std::vector<Window> load_windows(const RunConfig& config) {
    std::ifstream fasta(config.input(config.calls, kCallsFile));
    std::ifstream spans(config.input(config.spans, kSpansFile));
    if (!fasta || !spans) {
        throw ParseError("cannot open base calls (" + config.input(config.calls, kCallsFile).string() +
                         ", " + config.input(config.spans, kSpansFile).string() + ")");
    }
    const auto ensembles = read_basecalls(fasta, spans);
    const auto truth = truth_by_read(config.input(config.truth, kTruthFile));
    const auto offsets_path = config.input(config.offsets, kOffsetsFile);
    std::map<std::string, std::vector<std::uint32_t>> offsets;
    const bool have_offsets = fs::exists(offsets_path);
    if (have_offsets) {
        offsets = offsets_by_read(offsets_path);
    }
    std::vector<Window> windows;
    for (const auto& e : ensembles) {
        const auto t = truth.find(e.read_id);
        if (t == truth.end()) {
            throw ParseError("no truth interval for read " + e.read_id);
        }
        const std::vector<std::uint32_t>* offs = nullptr;
        if (have_offsets) {
            const auto o = offsets.find(e.read_id);
            if (o == offsets.end()) {
                throw ParseError("no truth offsets for read " + e.read_id);
            }
            offs = &o->second;
        }
        auto w = build_windows(e, t->second, offs, config.model_k, config.window);
        std::move(w.begin(), w.end(), std::back_inserter(windows));
    }
    return windows;
}

void cmd_eval(const RunConfig& config) {
    config.validate();
    fs::create_directories(config.out_dir);
    const auto reference = load_reference(config.input(config.reference, kReferenceFile));
    const auto windows = load_windows(config);
    const int max_n = *std::max_element(config.n_values.begin(), config.n_values.end());
    for (const auto& w : windows) {
        if (static_cast<std::size_t>(max_n) > w.num_samples()) {
            throw ArgumentError("n=" + std::to_string(max_n) + " exceeds the " +
                                std::to_string(w.num_samples()) + " samples of read " +
                                w.read_id);
        }
    }
    spdlog::info("evaluating {} windows", windows.size());
    SweepConfig sc;
    sc.t_values = config.t_values;
    sc.n_values = config.n_values;
    sc.include_viterbi = config.viterbi_rows;
    sc.dedup_radius = config.dedup_radius;
    sc.threads = config.threads;
    std::vector<EvalRow> rows;
    for (auto kind : config.strategies) {
        const auto strategy =
            kind == SeedStrategy::SingleKmer
                ? StrategyConfig::single_kmer(config.seed_k)
                : StrategyConfig::chained(config.chain_seed_k,
                                          {config.chain_len, config.min_gap, config.max_gap});
        const KmerIndex index(reference, strategy.k);
        auto part = sweep(windows, index, strategy, sc);
        std::move(part.begin(), part.end(), std::back_inserter(rows));
    }
    write_file_atomic(config.out_dir / kReportFile,
                      [&](std::ostream& out) { write_report(out, rows); });
    write_config(config, "eval");
}

void cmd_report(const RunConfig& config) {
    config.validate();
    const auto path = config.input(config.report, kReportFile);
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open report " + path.string());
    }
    const auto rows = read_report(in);
    const auto dir = config.out_dir / kPointsDir;
    fs::create_directories(dir);
    for (const auto& c : report_curves(rows)) {
        write_file_atomic(dir / ("points_" + c.strategy + "_t" + std::to_string(c.t) + ".tsv"),
                          [&](std::ostream& out) { write_curve(out, c); });
    }
    write_config(config, "report");
}

void run_subcommand(const RunConfig& config) {
    if (config.subcommand == "simulate") {
        cmd_simulate(config);
    } else if (config.subcommand == "basecall") {
        cmd_basecall(config);
    } else if (config.subcommand == "train") {
        cmd_train(config);
    } else if (config.subcommand == "eval") {
        cmd_eval(config);
    } else if (config.subcommand == "report") {
        cmd_report(config);
    } else {
        throw ArgumentError("unknown subcommand '" + config.subcommand + "'");
    }
}

}  // namespace ensembleseed
