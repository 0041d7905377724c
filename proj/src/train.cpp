#include "ensembleseed/train.hpp"

#include "ensembleseed/error.hpp"
#include "ensembleseed/pore_model.hpp"

#include <fstream>
#include <iomanip>
#include <numeric>
#include <regex>
#include <sstream>
#include <string>

namespace ensembleseed {

TransitionCounts::TransitionCounts(int k, int max_shift) : k_(k), max_shift_(max_shift) {
    const KmerStateSpace space(k);
    if (max_shift < 1 || max_shift > k) {
        throw ArgumentError("max_shift must be in [1, k]");
    }
    out_degree_ = TransitionModel::shift_offset(max_shift + 1);
    counts_.assign(space.size() * out_degree_, 0);
}

std::uint64_t TransitionCounts::edge_count(KmerCode source, int shift, KmerCode appended) const {
    return counts_[source * out_degree_ + TransitionModel::shift_offset(shift) + appended];
}

std::uint64_t TransitionCounts::count(KmerCode source, KmerCode target) const {
    const int j = smallest_shift(source, target, k_);
    if (j > max_shift_) {
        return 0;
    }
    return edge_count(source, j, kmer_suffix(target, j));
}

std::uint64_t TransitionCounts::order_count(int shift) const {
    const std::size_t first = TransitionModel::shift_offset(shift);
    const std::size_t width = kmer_count(shift);
    std::uint64_t total = 0;
    for (std::size_t s = 0; s < counts_.size() / out_degree_; ++s) {
        const auto* row = counts_.data() + s * out_degree_ + first;
        total = std::accumulate(row, row + width, total);
    }
    return total;
}

std::uint64_t TransitionCounts::total() const {
    return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

void TransitionCounts::add(KmerCode source, KmerCode target) {
    const int j = smallest_shift(source, target, k_);
    if (j > max_shift_) {
        throw ArgumentError("transition " + decode_kmer(source, k_) + " -> " +
                            decode_kmer(target, k_) + " needs shift " + std::to_string(j));
    }
    ++counts_[source * out_degree_ + TransitionModel::shift_offset(j) + kmer_suffix(target, j)];
}

TransitionCounts& TransitionCounts::operator+=(const TransitionCounts& other) {
    if (other.k_ != k_ || other.max_shift_ != max_shift_) {
        throw ArgumentError("cannot merge transition counts of different shape");
    }
    for (std::size_t i = 0; i < counts_.size(); ++i) {
        counts_[i] += other.counts_[i];
    }
    return *this;
}

TransitionCounts count_transitions(std::span<const StatePath> paths, int k, int max_shift) {
    TransitionCounts counts(k, max_shift);
    for (std::size_t p = 0; p < paths.size(); ++p) {
        const auto& states = paths[p].states;
        for (std::size_t i = 1; i < states.size(); ++i) {
            try {
                counts.add(states[i - 1], states[i]);
            } catch (const ArgumentError& e) {
                throw ArgumentError("path " + std::to_string(p) + " position " +
                                    std::to_string(i) + ": " + e.what());
            }
        }
    }
    return counts;
}

TransitionModel estimate_transitions(const TransitionCounts& counts, std::int64_t pseudocount,
                                     TransitionModel::Mode mode) {
    if (pseudocount < 0) {
        throw ArgumentError("pseudocount must be non-negative");
    }
    const auto pc = static_cast<double>(pseudocount);
    const std::size_t degree = counts.out_degree();
    if (mode == TransitionModel::Mode::PerOrder) {
        const double total =
            static_cast<double>(counts.total()) + pc * static_cast<double>(degree);
        if (!(total > 0.0)) {
            throw ArgumentError("no observed transitions and zero pseudocount");
        }
        std::vector<double> probs;
        for (int j = 0; j <= counts.max_shift(); ++j) {
            probs.push_back((static_cast<double>(counts.order_count(j)) +
                             pc * static_cast<double>(kmer_count(j))) /
                            total);
        }
        return TransitionModel::per_order(counts.k(), std::move(probs));
    }
    const auto& raw = counts.edge_counts();
    std::vector<double> probs(raw.size());
    for (std::size_t s = 0; s < raw.size() / degree; ++s) {
        double row_total = 0.0;
        for (std::size_t e = 0; e < degree; ++e) {
            row_total += static_cast<double>(raw[s * degree + e]) + pc;
        }
        if (!(row_total > 0.0)) {
            throw ArgumentError("state " + decode_kmer(static_cast<KmerCode>(s), counts.k()) +
                                " has no observations and pseudocount is zero");
        }
        for (std::size_t e = 0; e < degree; ++e) {
            probs[s * degree + e] = (static_cast<double>(raw[s * degree + e]) + pc) / row_total;
        }
    }
    return TransitionModel::per_transition(counts.k(), counts.max_shift(), std::move(probs));
}

void write_transition_model(std::ostream& out, const TransitionModel& model,
                            std::int64_t pseudocount) {
    const bool per_order = model.mode() == TransitionModel::Mode::PerOrder;
    out << "# k=" << model.k() << " max_shift=" << model.max_shift()
        << " mode=" << (per_order ? "per-order" : "per-transition")
        << " pseudocount=" << pseudocount << '\n';
    out << std::setprecision(17);
    if (per_order) {
        out << "order\tprob\n";
        for (std::size_t j = 0; j < model.order_probs().size(); ++j) {
            out << j << '\t' << model.order_probs()[j] << '\n';
        }
        return;
    }
    out << "source_kmer\ttarget_kmer\tprob\n";
    const int k = model.k();
    for (KmerCode s = 0; s < kmer_count(k); ++s) {
        const std::string src = decode_kmer(s, k);
        for (int j = 0; j <= model.max_shift(); ++j) {
            for (KmerCode a = 0; a < kmer_count(j); ++a) {
                out << src << '\t' << decode_kmer(TransitionModel::edge_target(s, j, a, k), k)
                    << '\t' << model.edge_prob(s, j, a) << '\n';
            }
        }
    }
}

TransitionModel read_transition_model(std::istream& in, TrainedModelHeader* header_out) {
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError("transition model: empty input");
    }
    static const std::regex header_re(
        R"(^# k=(\d+) max_shift=(\d+) mode=(per-order|per-transition) pseudocount=(\d+)\r?$)");
    std::smatch m;
    if (!std::regex_match(line, m, header_re)) {
        throw ParseError("transition model: bad header line '" + line + "'");
    }
    TrainedModelHeader header;
    header.k = std::stoi(m[1]);
    header.max_shift = std::stoi(m[2]);
    header.mode = m[3] == "per-order" ? TransitionModel::Mode::PerOrder
                                      : TransitionModel::Mode::PerTransition;
    header.pseudocount = std::stoll(m[4]);
    if (header_out) {
        *header_out = header;
    }
    const bool per_order = header.mode == TransitionModel::Mode::PerOrder;
    std::getline(in, line);
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != (per_order ? "order\tprob" : "source_kmer\ttarget_kmer\tprob")) {
        throw ParseError("transition model: bad column header '" + line + "'");
    }
    std::vector<double> probs;
    std::size_t row = 0;
    const std::size_t degree = header.k >= 1 && header.max_shift >= 0
                                   ? TransitionModel::shift_offset(header.max_shift + 1)
                                   : 0;
    while (std::getline(in, line)) try {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        std::istringstream ss(line);
        std::string a, b, c;
        if (per_order) {
            if (!std::getline(ss, a, '\t') || !std::getline(ss, b) || std::stoul(a) != row) {
                throw ParseError("transition model: bad order row '" + line + "'");
            }
            probs.push_back(std::stod(b));
        } else {
            if (!std::getline(ss, a, '\t') || !std::getline(ss, b, '\t') ||
                !std::getline(ss, c)) {
                throw ParseError("transition model: bad row '" + line + "'");
            }
            // Rows follow the canonical edge order; verify the k-mers agree with it.
            const auto src = encode_kmer(a);
            const auto dst = encode_kmer(b);
            const std::size_t s = degree ? row / degree : 0;
            const std::size_t e = degree ? row % degree : 0;
            int shift = 0;
            while (shift < header.max_shift && TransitionModel::shift_offset(shift + 1) <= e) {
                ++shift;
            }
            const auto app = static_cast<KmerCode>(e - TransitionModel::shift_offset(shift));
            if (!src || !dst || *src != s ||
                *dst != TransitionModel::edge_target(*src, shift, app, header.k)) {
                throw ParseError("transition model: row " + std::to_string(row + 3) +
                                 " out of canonical order");
            }
            probs.push_back(std::stod(c));
        }
        ++row;
    } catch (const std::logic_error&) {
        throw ParseError("transition model: unparsable row '" + line + "'");
    }
    if (per_order && probs.size() != static_cast<std::size_t>(header.max_shift) + 1) {
        throw ParseError("transition model: expected " + std::to_string(header.max_shift + 1) +
                         " order rows");
    }
    try {
        return per_order ? TransitionModel::per_order(header.k, std::move(probs))
                         : TransitionModel::per_transition(header.k, header.max_shift,
                                                           std::move(probs));
    } catch (const ArgumentError& e) {
        throw ParseError(std::string("transition model: ") + e.what());
    }
}

TransitionModel load_transition_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open transition model " + path.string());
    }
    return read_transition_model(in);
}

}  // namespace ensembleseed
