#pragma once

#include "ensembleseed/decode.hpp"
#include "ensembleseed/hmm.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace ensembleseed {

enum class Strand : std::uint8_t { Forward = 0, Reverse = 1 };

constexpr char strand_symbol(Strand s) { return s == Strand::Forward ? '+' : '-'; }
Strand parse_strand(std::string_view s);

/// Reference interval a read (or window) truly came from, in forward coordinates.
struct TruthInterval {
    std::string contig;
    std::uint64_t start = 0;
    std::uint64_t end = 0;
    Strand strand = Strand::Forward;
    std::string read_id;
};

struct SimulatedRead {
    EventSequence events;
    StatePath true_path;
    TruthInterval truth;
    /// Bases consumed by the walk, read along the read's strand.
    std::string true_sequence;
    /// Offset of each event's k-mer within true_sequence.
    std::vector<std::uint32_t> offsets;
};

/// I.i.d. uniform bases.
std::string generate_reference(std::size_t length, std::uint64_t seed);

/// Walks `reference` (or its reverse complement) from a uniform random start,
/// emitting one event per HMM step. Retries a bounded number of times if the
/// walk runs off the end of the sequence.
SimulatedRead simulate_read(const Hmm& hmm, std::string_view reference, std::size_t num_events,
                            Strand strand, std::uint64_t seed, const ReadScaling& scaling = {},
                            std::string read_id = "read", std::string contig = "ref");

struct CorpusConfig {
    std::size_t reference_length = 100000;
    std::size_t num_reads = 200;
    std::size_t events_per_read = 1500;
    /// Multiplier on every pore-model sigma; the per-read `var` scaling.
    double noise = 1.75;
    std::uint64_t seed = 20161016;
    std::string contig = "synthetic";
};

struct Corpus {
    std::string contig;
    std::string reference;
    std::vector<SimulatedRead> reads;
};

/// Reference plus reads, each read on its own RNG stream.
Corpus simulate_corpus(const Hmm& hmm, const CorpusConfig& config);

// Truth TSV: header "contig\tstart\tend\tstrand\tread_id".
void write_truth(std::ostream& out, const std::vector<TruthInterval>& truth);
std::vector<TruthInterval> read_truth(std::istream& in);
std::vector<TruthInterval> load_truth(const std::filesystem::path& path);

/// Per-read event offsets along the true walk: {"read_id": ..., "offsets": [...]}.
struct ReadOffsets {
    std::string read_id;
    std::vector<std::uint32_t> offsets;
};
void write_offsets(std::ostream& out, const std::vector<ReadOffsets>& offsets);
std::vector<ReadOffsets> read_offsets(std::istream& in);

}  // namespace ensembleseed
