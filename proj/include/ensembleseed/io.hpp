#pragma once

#include "ensembleseed/eval.hpp"

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace ensembleseed {

struct FastaRecord {
    std::string name;
    std::string sequence;
};

std::vector<FastaRecord> read_fasta(std::istream& in);
std::vector<FastaRecord> load_fasta(const std::filesystem::path& path);
void write_fasta(std::ostream& out, std::span<const FastaRecord> records,
                 std::size_t line_width = 80);

/// Writes `path` through a temporary sibling file that is renamed into place only
/// after `writer` finished and the stream flushed cleanly.
void write_file_atomic(const std::filesystem::path& path,
                       const std::function<void(std::ostream&)>& writer);

std::string read_file(const std::filesystem::path& path);

/// FASTA record names used for base calls.
std::string viterbi_call_name(const std::string& read_id);
std::string sample_call_name(const std::string& read_id, std::size_t index);

// Base-call output: a FASTA of every call plus a JSON-lines sidecar with one line
// per call, {"name", "read_id", "call": "viterbi"|"sample", "span_lengths": [...]}.
void write_basecalls(std::ostream& fasta, std::ostream& spans,
                     std::span<const ReadEnsemble> ensembles);
std::vector<ReadEnsemble> read_basecalls(std::istream& fasta, std::istream& spans);

}  // namespace ensembleseed
