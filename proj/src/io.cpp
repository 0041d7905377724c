#include "ensembleseed/io.hpp"

#include "ensembleseed/error.hpp"

#include <json.hpp>

#include <fstream>
#include <map>
#include <sstream>
#include <unistd.h>

namespace ensembleseed {

std::vector<FastaRecord> read_fasta(std::istream& in) {
    std::vector<FastaRecord> records;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        if (line[0] == '>') {
            const auto end = line.find_first_of(" \t");
            records.push_back({line.substr(1, end == std::string::npos ? end : end - 1), {}});
            continue;
        }
        if (records.empty()) {
            throw ParseError("FASTA: sequence data before the first header");
        }
        records.back().sequence += line;
    }
    return records;
}

std::vector<FastaRecord> load_fasta(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open FASTA " + path.string());
    }
    return read_fasta(in);
}

void write_fasta(std::ostream& out, std::span<const FastaRecord> records, std::size_t line_width) {
    for (const auto& r : records) {
        out << '>' << r.name << '\n';
        for (std::size_t i = 0; i < r.sequence.size(); i += line_width) {
            out.write(r.sequence.data() + i,
                      static_cast<std::streamsize>(std::min(line_width, r.sequence.size() - i)));
            out << '\n';
        }
    }
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::function<void(std::ostream&)>& writer) {
    auto tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error("cannot write " + tmp.string());
        }
        try {
            writer(out);
            out.flush();
        } catch (...) {
            out.close();
            std::filesystem::remove(tmp);
            throw;
        }
        if (!out) {
            out.close();
            std::filesystem::remove(tmp);
            throw Error("write failed for " + path.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string viterbi_call_name(const std::string& read_id) { return read_id + "/viterbi"; }

std::string sample_call_name(const std::string& read_id, std::size_t index) {
    return read_id + "/sample_" + std::to_string(index);
}

namespace {

void write_span_line(std::ostream& out, const std::string& name, const std::string& read_id,
                     const char* kind, const BaseCall& call) {
    nlohmann::ordered_json j;
    j["name"] = name;
    j["read_id"] = read_id;
    j["call"] = kind;
    auto& lens = j["span_lengths"] = nlohmann::ordered_json::array();
    for (const auto& s : call.event_spans) {
        lens.push_back(s.length);
    }
    out << j.dump() << '\n';
}

}  // namespace

void write_basecalls(std::ostream& fasta, std::ostream& spans,
                     std::span<const ReadEnsemble> ensembles) {
    std::vector<FastaRecord> records;
    for (const auto& e : ensembles) {
        records.push_back({viterbi_call_name(e.read_id), e.viterbi.sequence});
        write_span_line(spans, records.back().name, e.read_id, "viterbi", e.viterbi);
        for (std::size_t i = 0; i < e.samples.size(); ++i) {
            records.push_back({sample_call_name(e.read_id, i + 1), e.samples[i].sequence});
            write_span_line(spans, records.back().name, e.read_id, "sample", e.samples[i]);
        }
    }
    write_fasta(fasta, records);
}

std::vector<ReadEnsemble> read_basecalls(std::istream& fasta, std::istream& spans) {
    std::map<std::string, std::string> sequences;
    for (auto& r : read_fasta(fasta)) {
        sequences[r.name] = std::move(r.sequence);
    }
    std::vector<ReadEnsemble> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(spans, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        std::string name, read_id, kind;
        std::vector<std::uint32_t> lengths;
        try {
            const auto j = nlohmann::json::parse(line);
            name = j.at("name").get<std::string>();
            read_id = j.at("read_id").get<std::string>();
            kind = j.at("call").get<std::string>();
            lengths = j.at("span_lengths").get<std::vector<std::uint32_t>>();
        } catch (const nlohmann::json::exception& e) {
            throw ParseError("spans line " + std::to_string(line_no) + ": " + e.what());
        }
        const auto seq = sequences.find(name);
        if (seq == sequences.end()) {
            throw ParseError("spans line " + std::to_string(line_no) + ": no FASTA record " + name);
        }
        BaseCall call;
        call.sequence = seq->second;
        std::uint32_t offset = 0;
        for (auto len : lengths) {
            call.event_spans.push_back({offset, len});
            offset += len;
        }
        if (offset != call.sequence.size()) {
            throw ParseError("spans line " + std::to_string(line_no) + ": spans cover " +
                             std::to_string(offset) + " bases but " + name + " has " +
                             std::to_string(call.sequence.size()));
        }
        if (kind == "viterbi") {
            out.push_back({read_id, std::move(call), {}});
        } else if (kind == "sample") {
            if (out.empty() || out.back().read_id != read_id) {
                throw ParseError("spans line " + std::to_string(line_no) +
                                 ": sample before its read's Viterbi call");
            }
            out.back().samples.push_back(std::move(call));
        } else {
            throw ParseError("spans line " + std::to_string(line_no) + ": unknown call kind " +
                             kind);
        }
    }
    return out;
}

}  // namespace ensembleseed
