#include "ensembleseed/eval.hpp"

#include "ensembleseed/error.hpp"
#include "ensembleseed/parallel.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

namespace ensembleseed {

namespace {

void check_spans(const BaseCall& call, std::size_t events, const std::string& read_id) {
    if (call.event_spans.size() != events) {
        throw ArgumentError("read " + read_id + ": base call has " +
                            std::to_string(call.event_spans.size()) + " event spans, expected " +
                            std::to_string(events));
    }
}

}  // namespace

std::string call_substring(const BaseCall& call, std::size_t first, std::size_t count) {
    if (count == 0) {
        return {};
    }
    const auto& a = call.event_spans.at(first);
    const auto& b = call.event_spans.at(first + count - 1);
    return call.sequence.substr(a.offset, b.offset + b.length - a.offset);
}

std::vector<Window> build_windows(const ReadEnsemble& ensemble, const TruthInterval& read_truth,
                                  const std::vector<std::uint32_t>* offsets, int model_k,
                                  std::size_t window_size) {
    if (window_size == 0) {
        throw ArgumentError("window size must be positive");
    }
    const std::size_t events = ensemble.viterbi.event_spans.size();
    if (events == 0) {
        throw ArgumentError("read " + ensemble.read_id + ": missing event spans");
    }
    for (const auto& s : ensemble.samples) {
        check_spans(s, events, ensemble.read_id);
    }
    if (offsets && offsets->size() != events) {
        throw ArgumentError("read " + ensemble.read_id + ": " + std::to_string(offsets->size()) +
                            " truth offsets for " + std::to_string(events) + " events");
    }
    std::vector<const BaseCall*> calls{&ensemble.viterbi};
    for (const auto& s : ensemble.samples) {
        calls.push_back(&s);
    }

    std::vector<Window> windows;
    for (std::size_t w = 0; (w + 1) * window_size <= events; ++w) {
        Window win;
        win.window_id = ensemble.read_id + ":" + std::to_string(w);
        win.read_id = ensemble.read_id;
        win.first_event = w * window_size;
        win.num_events = window_size;
        win.rows.assign(calls.size(), std::string());

        std::uint32_t column = 0;
        for (std::size_t e = win.first_event; e < win.first_event + window_size; ++e) {
            std::uint32_t width = 0;
            for (const auto* c : calls) {
                width = std::max(width, c->event_spans[e].length);
            }
            win.event_columns.push_back(column);
            for (std::size_t r = 0; r < calls.size(); ++r) {
                const auto& span = calls[r]->event_spans[e];
                win.rows[r].append(calls[r]->sequence, span.offset, span.length);
                win.rows[r].append(width - span.length, kGap);
            }
            column += width;
        }
        win.event_columns.push_back(column);

        win.truth = read_truth;
        if (offsets) {
            const auto first = static_cast<std::uint64_t>((*offsets)[win.first_event]);
            const auto last = static_cast<std::uint64_t>((*offsets)[win.first_event + window_size - 1]) +
                              static_cast<std::uint64_t>(model_k);
            if (read_truth.strand == Strand::Forward) {
                win.truth.start = read_truth.start + first;
                win.truth.end = read_truth.start + last;
            } else {
                win.truth.start = read_truth.end - last;
                win.truth.end = read_truth.end - first;
            }
        }
        windows.push_back(std::move(win));
    }
    return windows;
}

bool classify_hit(const SeedHit& hit, const TruthInterval& truth) {
    return hit.strand == truth.strand && hit.ref_pos >= truth.start && hit.ref_pos < truth.end;
}

std::vector<SeedHit> greedy_dedup(std::vector<SeedHit> hits, std::uint32_t radius) {
    std::sort(hits.begin(), hits.end(), [](const SeedHit& a, const SeedHit& b) {
        if (a.query_col != b.query_col) return a.query_col < b.query_col;
        if (a.ref_pos != b.ref_pos) return a.ref_pos < b.ref_pos;
        return a.strand < b.strand;
    });
    std::vector<SeedHit> selected;
    for (const auto& h : hits) {
        bool covered = false;
        // Selected hits are in ascending query_col order.
        for (auto it = selected.rbegin(); it != selected.rend(); ++it) {
            if (h.query_col - it->query_col > radius) {
                break;
            }
            const auto dr = h.ref_pos > it->ref_pos ? h.ref_pos - it->ref_pos
                                                    : it->ref_pos - h.ref_pos;
            if (dr <= radius) {
                covered = true;
                break;
            }
        }
        if (!covered) {
            selected.push_back(h);
        }
    }
    return selected;
}

std::string strategy_name(const StrategyConfig& strategy, QuerySource source) {
    std::string name = strategy.kind == SeedStrategy::SingleKmer ? "single-kmer" : "chain";
    return source == QuerySource::Viterbi ? "viterbi-" + name : name;
}

std::vector<SeedHit> window_seeds(const Window& window, const KmerIndex& index,
                                  const StrategyConfig& strategy, QuerySource source, int t,
                                  int n) {
    std::span<const std::string> rows;
    int threshold = 1;
    if (source == QuerySource::Viterbi) {
        rows = window.viterbi_row();
    } else {
        if (n < 0 || static_cast<std::size_t>(n) > window.num_samples()) {
            throw ArgumentError("window " + window.window_id + " has " +
                                std::to_string(window.num_samples()) + " samples, n=" +
                                std::to_string(n) + " requested");
        }
        if (t < 1) {
            throw ArgumentError("threshold t must be at least 1");
        }
        if (n == 0 || t > n) {
            return {};
        }
        rows = window.samples(static_cast<std::size_t>(n));
        threshold = t;
    }
    const auto kmers = collect_ensemble_kmers(rows, strategy.k, threshold);
    auto hits = find_hits(index, kmers);
    if (strategy.kind == SeedStrategy::SingleKmer) {
        return hits;
    }
    std::vector<SeedHit> left;
    for (const auto& c : chain_hits(hits, strategy.chain)) {
        left.push_back(c.leftmost());
    }
    return left;
}

WindowOutcome evaluate_window(const Window& window, const KmerIndex& index,
                              const StrategyConfig& strategy, QuerySource source, int t, int n,
                              std::uint32_t dedup_radius) {
    WindowOutcome out;
    std::vector<SeedHit> invalid;
    for (const auto& s : window_seeds(window, index, strategy, source, t, n)) {
        if (classify_hit(s, window.truth)) {
            out.true_positive = true;
        } else {
            invalid.push_back(s);
        }
    }
    out.raw_invalid = invalid.size();
    out.false_positives = greedy_dedup(std::move(invalid), dedup_radius).size();
    return out;
}

EvalRow evaluate(std::span<const Window> windows, const KmerIndex& index,
                 const StrategyConfig& strategy, QuerySource source, int t, int n,
                 std::uint32_t dedup_radius, unsigned threads) {
    std::vector<WindowOutcome> outcomes(windows.size());
    parallel_for(windows.size(), threads, [&](std::size_t i) {
        outcomes[i] = evaluate_window(windows[i], index, strategy, source, t, n, dedup_radius);
    });
    EvalRow row;
    row.strategy = strategy_name(strategy, source);
    row.k = strategy.k;
    row.t = source == QuerySource::Viterbi ? 1 : t;
    row.n = source == QuerySource::Viterbi ? 1 : n;
    row.windows = windows.size();
    for (const auto& o : outcomes) {
        row.tp += o.true_positive ? 1 : 0;
        row.fp += o.false_positives;
    }
    row.sn = row.windows ? static_cast<double>(row.tp) / static_cast<double>(row.windows) : 0.0;
    return row;
}

std::vector<EvalRow> sweep(std::span<const Window> windows, const KmerIndex& index,
                           const StrategyConfig& strategy, const SweepConfig& config) {
    std::vector<EvalRow> rows;
    if (config.include_viterbi) {
        rows.push_back(evaluate(windows, index, strategy, QuerySource::Viterbi, 1, 1,
                                config.dedup_radius, config.threads));
    }
    for (int t : config.t_values) {
        for (int n : config.n_values) {
            rows.push_back(evaluate(windows, index, strategy, QuerySource::Samples, t, n,
                                    config.dedup_radius, config.threads));
        }
    }
    return rows;
}

void write_report(std::ostream& out, std::span<const EvalRow> rows) {
    out << "strategy\tk\tt\tn\tTP\twindows\tSn\tFP\n";
    char sn[32];
    for (const auto& r : rows) {
        std::snprintf(sn, sizeof sn, "%.3f", r.sn);
        out << r.strategy << '\t' << r.k << '\t' << r.t << '\t' << r.n << '\t' << r.tp << '\t'
            << r.windows << '\t' << sn << '\t' << r.fp << '\n';
    }
}

std::vector<EvalRow> read_report(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "strategy\tk\tt\tn\tTP\twindows\tSn\tFP") {
        throw ParseError("report: bad or missing header");
    }
    std::vector<EvalRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        std::istringstream ss(line);
        EvalRow r;
        std::string sn;
        if (!std::getline(ss, r.strategy, '\t') || !(ss >> r.k >> r.t >> r.n >> r.tp >> r.windows >> sn >> r.fp)) {
            throw ParseError("report line " + std::to_string(line_no) + ": malformed");
        }
        try {
            r.sn = std::stod(sn);
        } catch (const std::logic_error&) {
            throw ParseError("report line " + std::to_string(line_no) + ": bad Sn");
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<Curve> report_curves(std::span<const EvalRow> rows) {
    std::map<std::pair<std::string, int>, Curve> curves;
    for (const auto& r : rows) {
        auto& c = curves[{r.strategy, r.t}];
        c.strategy = r.strategy;
        c.t = r.t;
        c.points.emplace_back(r.fp, r.tp);
    }
    std::vector<Curve> out;
    for (auto& [key, c] : curves) {
        std::sort(c.points.begin(), c.points.end());
        out.push_back(std::move(c));
    }
    return out;
}

void write_curve(std::ostream& out, const Curve& curve) {
    out << "FP\tTP\n";
    for (const auto& [fp, tp] : curve.points) {
        out << fp << '\t' << tp << '\n';
    }
}

double alignment_identity(std::string_view a, std::string_view b) {
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    if (n == 0 && m == 0) {
        return 1.0;
    }
    // Unit-cost edit distance with a traceback matrix: 0 diag, 1 up (gap in b), 2 left.
    std::vector<std::uint32_t> prev(m + 1), cur(m + 1);
    std::vector<std::uint8_t> move((n + 1) * (m + 1));
    for (std::size_t j = 0; j <= m; ++j) {
        prev[j] = static_cast<std::uint32_t>(j);
        move[j] = 2;
    }
    for (std::size_t i = 1; i <= n; ++i) {
        cur[0] = static_cast<std::uint32_t>(i);
        move[i * (m + 1)] = 1;
        for (std::size_t j = 1; j <= m; ++j) {
            const std::uint32_t diag = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            const std::uint32_t up = prev[j] + 1;
            const std::uint32_t left = cur[j - 1] + 1;
            std::uint8_t mv = 0;
            std::uint32_t best = diag;
            if (up < best) {
                best = up;
                mv = 1;
            }
            if (left < best) {
                best = left;
                mv = 2;
            }
            cur[j] = best;
            move[i * (m + 1) + j] = mv;
        }
        std::swap(prev, cur);
    }
    std::size_t i = n, j = m, matches = 0, columns = 0;
    while (i > 0 || j > 0) {
        const auto mv = move[i * (m + 1) + j];
        ++columns;
        if (i > 0 && j > 0 && mv == 0) {
            matches += a[i - 1] == b[j - 1] ? 1 : 0;
            --i;
            --j;
        } else if (i > 0 && (mv == 1 || j == 0)) {
            --i;
        } else {
            --j;
        }
    }
    return static_cast<double>(matches) / static_cast<double>(columns);
}

}  // namespace ensembleseed
