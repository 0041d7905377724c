#include "ensembleseed/pore_model.hpp"

#include "ensembleseed/error.hpp"
#include "ensembleseed/rng.hpp"

#include <json.hpp>

#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace ensembleseed {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, '\t')) {
        fields.push_back(field);
    }
    return fields;
}

double parse_double(const std::string& s, const std::string& what, std::size_t line_no) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size() || !std::isfinite(v)) {
            throw std::invalid_argument(s);
        }
        return v;
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line_no) + ": bad " + what + " '" + s + "'");
    }
}

}  // namespace

KmerStateSpace::KmerStateSpace(int k) : k_(k) {
    if (k < 1 || k > kMaxModelK) {
        throw ArgumentError("model k must be in [1, " + std::to_string(kMaxModelK) + "], got " +
                            std::to_string(k));
    }
    size_ = kmer_count(k);
}

void ReadScaling::validate() const {
    if (!(scale > 0.0) || !(var > 0.0) || !std::isfinite(shift) || !std::isfinite(scale) ||
        !std::isfinite(var)) {
        throw ArgumentError("read scaling requires scale > 0, var > 0 and finite shift");
    }
}

PoreModel::PoreModel(int k, std::vector<KmerLevel> levels) : k_(k), levels_(std::move(levels)) {
    const KmerStateSpace space(k);
    if (levels_.size() != space.size()) {
        throw ArgumentError("pore model for k=" + std::to_string(k) + " needs " +
                            std::to_string(space.size()) + " levels, got " +
                            std::to_string(levels_.size()));
    }
    for (std::size_t i = 0; i < levels_.size(); ++i) {
        if (!(levels_[i].sigma > 0.0) || !std::isfinite(levels_[i].mu)) {
            throw ArgumentError("pore model level for " +
                                decode_kmer(static_cast<KmerCode>(i), k) +
                                " has non-positive sigma or non-finite mu");
        }
    }
}

const KmerLevel& PoreModel::level(KmerCode kmer) const {
    if (kmer >= levels_.size()) {
        throw ArgumentError("k-mer code " + std::to_string(kmer) + " outside the state space");
    }
    return levels_[kmer];
}

double emission_log_density(const PoreModel& pore, KmerCode kmer, const Event& event,
                            const ReadScaling& scaling) {
    const KmerLevel& lv = pore.level(kmer);
    const double mean = scaling.scale * lv.mu + scaling.shift;
    const double sd = lv.sigma * scaling.var;
    const double z = (event.mean - mean) / sd;
    return -0.5 * z * z - std::log(sd) - 0.5 * std::log(2.0 * std::numbers::pi);
}

PoreModel synthetic_pore_model(int k, std::uint64_t seed) {
    const KmerStateSpace space(k);
    Rng rng(seed, 0x90e);
    // Middle positions of the k-mer dominate the current, as in real pores.
    std::vector<std::array<double, 4>> effect(static_cast<std::size_t>(k));
    for (int p = 0; p < k; ++p) {
        const double centre = (k - 1) / 2.0;
        const double weight = 9.0 / (1.0 + std::abs(p - centre));
        for (auto& e : effect[static_cast<std::size_t>(p)]) {
            e = rng.normal(0.0, weight);
        }
    }
    std::vector<KmerLevel> levels(space.size());
    for (KmerCode code = 0; code < space.size(); ++code) {
        double mu = 65.0;
        for (int p = 0; p < k; ++p) {
            const int b = static_cast<int>((code >> (2 * (k - 1 - p))) & 3);
            mu += effect[static_cast<std::size_t>(p)][static_cast<std::size_t>(b)];
        }
        mu += rng.normal(0.0, 3.0);
        levels[code] = {mu, rng.uniform(0.8, 2.0)};
    }
    return PoreModel(k, std::move(levels));
}

PoreModel read_pore_model(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) {
        throw ParseError("pore model: empty input");
    }
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (split_tabs(line) != std::vector<std::string>{"kmer", "mu", "sigma"}) {
        throw ParseError("pore model: expected header 'kmer\\tmu\\tsigma'");
    }
    int k = 0;
    std::vector<KmerLevel> levels;
    std::vector<bool> seen;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const auto fields = split_tabs(line);
        if (fields.size() != 3) {
            throw ParseError("pore model line " + std::to_string(line_no) + ": expected 3 fields");
        }
        const auto code = encode_kmer(fields[0]);
        if (!code) {
            throw ParseError("pore model line " + std::to_string(line_no) + ": bad k-mer '" +
                             fields[0] + "'");
        }
        if (k == 0) {
            k = static_cast<int>(fields[0].size());
            if (k > kMaxModelK) {
                throw ParseError("pore model: k=" + std::to_string(k) + " exceeds maximum " +
                                 std::to_string(kMaxModelK));
            }
            levels.resize(kmer_count(k));
            seen.assign(kmer_count(k), false);
        } else if (static_cast<int>(fields[0].size()) != k) {
            throw ParseError("pore model line " + std::to_string(line_no) +
                             ": inconsistent k-mer length");
        }
        if (seen[*code]) {
            throw ParseError("pore model line " + std::to_string(line_no) + ": duplicate k-mer " +
                             fields[0]);
        }
        const double mu = parse_double(fields[1], "mu", line_no);
        const double sigma = parse_double(fields[2], "sigma", line_no);
        if (!(sigma > 0.0)) {
            throw ParseError("pore model line " + std::to_string(line_no) +
                             ": sigma must be positive");
        }
        seen[*code] = true;
        levels[*code] = {mu, sigma};
        ++rows;
    }
    if (k == 0) {
        throw ParseError("pore model: no rows");
    }
    if (rows != levels.size()) {
        for (std::size_t i = 0; i < seen.size(); ++i) {
            if (!seen[i]) {
                throw ParseError("pore model: missing k-mer " +
                                 decode_kmer(static_cast<KmerCode>(i), k));
            }
        }
    }
    return PoreModel(k, std::move(levels));
}

PoreModel load_pore_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open pore model " + path.string());
    }
    return read_pore_model(in);
}

void write_pore_model(std::ostream& out, const PoreModel& pore) {
    out << "kmer\tmu\tsigma\n";
    out << std::setprecision(17);
    for (std::size_t i = 0; i < pore.size(); ++i) {
        const auto& lv = pore.levels()[i];
        out << decode_kmer(static_cast<KmerCode>(i), pore.k()) << '\t' << lv.mu << '\t'
            << lv.sigma << '\n';
    }
}

std::vector<EventSequence> read_events(std::istream& in) {
    std::vector<EventSequence> reads;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        EventSequence seq;
        try {
            const auto j = nlohmann::json::parse(line);
            seq.read_id = j.at("read_id").get<std::string>();
            seq.scaling.scale = j.at("scale").get<double>();
            seq.scaling.shift = j.at("shift").get<double>();
            seq.scaling.var = j.at("var").get<double>();
            for (const auto& v : j.at("events")) {
                seq.events.push_back({v.get<double>()});
            }
        } catch (const nlohmann::json::exception& e) {
            throw ParseError("events line " + std::to_string(line_no) + ": " + e.what());
        }
        if (seq.events.empty()) {
            throw ParseError("events line " + std::to_string(line_no) + ": read " + seq.read_id +
                             " has no events");
        }
        for (const auto& ev : seq.events) {
            if (!std::isfinite(ev.mean)) {
                throw ParseError("events line " + std::to_string(line_no) +
                                 ": non-finite event mean");
            }
        }
        try {
            seq.scaling.validate();
        } catch (const ArgumentError& e) {
            throw ParseError("events line " + std::to_string(line_no) + ": " + e.what());
        }
        reads.push_back(std::move(seq));
    }
    return reads;
}

std::vector<EventSequence> load_events(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open events file " + path.string());
    }
    return read_events(in);
}

void write_events(std::ostream& out, const std::vector<EventSequence>& reads) {
    for (const auto& r : reads) {
        nlohmann::ordered_json j;
        j["read_id"] = r.read_id;
        j["scale"] = r.scaling.scale;
        j["shift"] = r.scaling.shift;
        j["var"] = r.scaling.var;
        auto& arr = j["events"] = nlohmann::ordered_json::array();
        for (const auto& e : r.events) {
            arr.push_back(e.mean);
        }
        out << j.dump() << '\n';
    }
}

}  // namespace ensembleseed
