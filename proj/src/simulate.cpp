#include "ensembleseed/simulate.hpp"

#include "ensembleseed/error.hpp"
#include "ensembleseed/rng.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace ensembleseed {

namespace {

constexpr int kMaxStartAttempts = 1000;

}  // namespace

Strand parse_strand(std::string_view s) {
    if (s == "+") {
        return Strand::Forward;
    }
    if (s == "-") {
        return Strand::Reverse;
    }
    throw ParseError("bad strand '" + std::string(s) + "'");
}

std::string generate_reference(std::size_t length, std::uint64_t seed) {
    Rng rng(seed, 0x7ef);
    std::string out(length, 'A');
    for (auto& c : out) {
        c = code_base(static_cast<int>(rng.below(4)));
    }
    return out;
}

SimulatedRead simulate_read(const Hmm& hmm, std::string_view reference, std::size_t num_events,
                            Strand strand, std::uint64_t seed, const ReadScaling& scaling,
                            std::string read_id, std::string contig) {
    scaling.validate();
    if (num_events == 0) {
        throw ArgumentError("simulate_read: need at least one event");
    }
    const int k = hmm.k();
    const std::string walked =
        strand == Strand::Forward ? std::string(reference) : reverse_complement(reference);
    const std::size_t len = walked.size();
    if (len < static_cast<std::size_t>(k)) {
        throw ArgumentError("simulate_read: reference shorter than k");
    }
    const auto& tm = hmm.transitions();
    Rng rng(seed);

    for (int attempt = 0; attempt < kMaxStartAttempts; ++attempt) {
        const std::size_t start = rng.below(len - static_cast<std::size_t>(k) + 1);
        std::vector<std::uint32_t> offsets;
        std::vector<KmerCode> states;
        offsets.reserve(num_events);
        states.reserve(num_events);
        std::size_t pos = start;
        bool ok = true;
        for (std::size_t i = 0; i < num_events; ++i) {
            if (i > 0) {
                const KmerCode cur = states.back();
                double u = rng.uniform();
                int shift = tm.max_shift();
                for (int j = 0; j <= tm.max_shift(); ++j) {
                    u -= tm.shift_prob(cur, j);
                    if (u < 0.0) {
                        shift = j;
                        break;
                    }
                }
                pos += static_cast<std::size_t>(shift);
            }
            if (pos + static_cast<std::size_t>(k) > len) {
                ok = false;
                break;
            }
            const auto code = encode_kmer(std::string_view(walked).substr(pos, k));
            if (!code) {
                ok = false;
                break;
            }
            states.push_back(*code);
            offsets.push_back(static_cast<std::uint32_t>(pos - start));
        }
        if (!ok) {
            continue;
        }
        SimulatedRead read;
        read.events.read_id = read_id;
        read.events.scaling = scaling;
        read.events.events.reserve(num_events);
        for (KmerCode s : states) {
            const auto& lv = hmm.pore().level(s);
            read.events.events.push_back(
                {rng.normal(scaling.scale * lv.mu + scaling.shift, lv.sigma * scaling.var)});
        }
        const std::size_t span = offsets.back() + static_cast<std::size_t>(k);
        read.true_sequence = walked.substr(start, span);
        read.offsets = std::move(offsets);
        read.true_path.states = std::move(states);
        read.true_path.log_joint = path_log_joint(hmm, read.events, read.true_path.states);
        read.truth.contig = std::move(contig);
        read.truth.strand = strand;
        read.truth.read_id = std::move(read_id);
        if (strand == Strand::Forward) {
            read.truth.start = start;
            read.truth.end = start + span;
        } else {
            read.truth.start = len - start - span;
            read.truth.end = len - start;
        }
        return read;
    }
    throw Error("simulate_read: no valid start found after " +
                std::to_string(kMaxStartAttempts) + " attempts");
}

Corpus simulate_corpus(const Hmm& hmm, const CorpusConfig& config) {
    Corpus corpus;
    corpus.contig = config.contig;
    corpus.reference = generate_reference(config.reference_length, config.seed);
    corpus.reads.reserve(config.num_reads);
    for (std::size_t r = 0; r < config.num_reads; ++r) {
        Rng rng(config.seed, 0x100000 + r);
        const Strand strand = rng.below(2) == 0 ? Strand::Forward : Strand::Reverse;
        ReadScaling scaling;
        scaling.scale = rng.uniform(0.9, 1.1);
        scaling.shift = rng.uniform(-3.0, 3.0);
        scaling.var = config.noise * rng.uniform(0.95, 1.05);
        corpus.reads.push_back(simulate_read(hmm, corpus.reference, config.events_per_read,
                                             strand, rng.next_u64(), scaling,
                                             "read_" + std::to_string(r), config.contig));
    }
    return corpus;
}

void write_truth(std::ostream& out, const std::vector<TruthInterval>& truth) {
    out << "contig\tstart\tend\tstrand\tread_id\n";
    for (const auto& t : truth) {
        out << t.contig << '\t' << t.start << '\t' << t.end << '\t' << strand_symbol(t.strand)
            << '\t' << t.read_id << '\n';
    }
}

std::vector<TruthInterval> read_truth(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError("truth: empty input");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != "contig\tstart\tend\tstrand\tread_id") {
        throw ParseError("truth: bad header '" + line + "'");
    }
    std::vector<TruthInterval> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        std::istringstream ss(line);
        std::string contig, start, end, strand, id;
        if (!std::getline(ss, contig, '\t') || !std::getline(ss, start, '\t') ||
            !std::getline(ss, end, '\t') || !std::getline(ss, strand, '\t') ||
            !std::getline(ss, id)) {
            throw ParseError("truth line " + std::to_string(line_no) + ": expected 5 fields");
        }
        TruthInterval t;
        t.contig = contig;
        try {
            std::size_t used = 0;
            t.start = std::stoull(start, &used);
            if (used != start.size()) throw std::invalid_argument(start);
            t.end = std::stoull(end, &used);
            if (used != end.size()) throw std::invalid_argument(end);
        } catch (const std::logic_error&) {
            throw ParseError("truth line " + std::to_string(line_no) + ": bad coordinates");
        }
        if (t.end <= t.start) {
            throw ParseError("truth line " + std::to_string(line_no) + ": end must exceed start");
        }
        t.strand = parse_strand(strand);
        t.read_id = id;
        out.push_back(std::move(t));
    }
    return out;
}

std::vector<TruthInterval> load_truth(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open truth file " + path.string());
    }
    return read_truth(in);
}

void write_offsets(std::ostream& out, const std::vector<ReadOffsets>& offsets) {
    for (const auto& r : offsets) {
        nlohmann::ordered_json j;
        j["read_id"] = r.read_id;
        j["offsets"] = r.offsets;
        out << j.dump() << '\n';
    }
}

std::vector<ReadOffsets> read_offsets(std::istream& in) {
    std::vector<ReadOffsets> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        try {
            const auto j = nlohmann::json::parse(line);
            out.push_back({j.at("read_id").get<std::string>(),
                           j.at("offsets").get<std::vector<std::uint32_t>>()});
        } catch (const nlohmann::json::exception& e) {
            throw ParseError("offsets line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace ensembleseed
