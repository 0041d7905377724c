#include "ensembleseed/decode.hpp"

#include "ensembleseed/error.hpp"
#include "ensembleseed/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace ensembleseed {

double ForwardMatrix::log_likelihood() const {
    double total = 0.0;
    for (double v : log_scale_) {
        total += v;
    }
    return total;
}

std::vector<double> emission_table(const Hmm& hmm, const EventSequence& events) {
    const std::size_t m = hmm.num_states();
    const auto& levels = hmm.pore().levels();
    const auto& sc = events.scaling;
    sc.validate();
    // Per-state mean, 1/sd and normalising constant are shared by all events.
    std::vector<double> mean(m), inv_sd(m), norm(m);
    const double half_log_2pi = 0.5 * std::log(2.0 * std::numbers::pi);
    for (std::size_t s = 0; s < m; ++s) {
        const double sd = levels[s].sigma * sc.var;
        mean[s] = sc.scale * levels[s].mu + sc.shift;
        inv_sd[s] = 1.0 / sd;
        norm[s] = -std::log(sd) - half_log_2pi;
    }
    std::vector<double> table(events.size() * m);
    for (std::size_t i = 0; i < events.size(); ++i) {
        const double e = events.events[i].mean;
        double* row = table.data() + i * m;
        for (std::size_t s = 0; s < m; ++s) {
            const double z = (e - mean[s]) * inv_sd[s];
            row[s] = norm[s] - 0.5 * z * z;
        }
    }
    return table;
}

ForwardMatrix forward(const Hmm& hmm, const EventSequence& events) {
    if (events.events.empty()) {
        throw ArgumentError("forward: empty event sequence");
    }
    const std::size_t n = events.size();
    const std::size_t m = hmm.num_states();
    const auto emit = emission_table(hmm, events);
    ForwardMatrix fwd(n, m);

    for (std::size_t i = 0; i < n; ++i) {
        const double* le = emit.data() + i * m;
        const double peak = *std::max_element(le, le + m);
        auto col = fwd.column(i);
        double sum = 0.0;
        if (i == 0) {
            for (std::size_t s = 0; s < m; ++s) {
                col[s] = hmm.start_prob() * std::exp(le[s] - peak);
                sum += col[s];
            }
        } else {
            const auto prev = fwd.column(i - 1);
            for (std::size_t s = 0; s < m; ++s) {
                double acc = 0.0;
                for (const auto& p : hmm.predecessors(static_cast<KmerCode>(s))) {
                    acc += prev[p.source] * p.prob;
                }
                col[s] = acc * std::exp(le[s] - peak);
                sum += col[s];
            }
        }
        if (!(sum > 0.0) || !std::isfinite(sum)) {
            throw Error("forward: column " + std::to_string(i) + " underflowed");
        }
        const double inv = 1.0 / sum;
        for (auto& v : col) {
            v *= inv;
        }
        fwd.set_log_scale(i, std::log(sum) + peak);
    }
    return fwd;
}

StatePath viterbi(const Hmm& hmm, const EventSequence& events) {
    if (events.events.empty()) {
        throw ArgumentError("viterbi: empty event sequence");
    }
    const std::size_t n = events.size();
    const std::size_t m = hmm.num_states();
    const auto emit = emission_table(hmm, events);
    constexpr double kNegInf = -std::numeric_limits<double>::infinity();

    std::vector<double> prev(m), cur(m);
    std::vector<KmerCode> back(n * m);
    const double log_start = std::log(hmm.start_prob());
    for (std::size_t s = 0; s < m; ++s) {
        prev[s] = log_start + emit[s];
    }
    for (std::size_t i = 1; i < n; ++i) {
        const double* le = emit.data() + i * m;
        KmerCode* bp = back.data() + i * m;
        for (std::size_t s = 0; s < m; ++s) {
            double best = kNegInf;
            KmerCode arg = 0;
            // Ascending sources with strict improvement keeps the lowest id on ties.
            for (const auto& p : hmm.predecessors(static_cast<KmerCode>(s))) {
                const double v = prev[p.source] + p.log_prob;
                if (v > best) {
                    best = v;
                    arg = p.source;
                }
            }
            cur[s] = best + le[s];
            bp[s] = arg;
        }
        std::swap(prev, cur);
    }
    StatePath path;
    path.states.resize(n);
    const auto last = std::max_element(prev.begin(), prev.end());
    path.log_joint = *last;
    path.states[n - 1] = static_cast<KmerCode>(last - prev.begin());
    for (std::size_t i = n - 1; i > 0; --i) {
        path.states[i - 1] = back[i * m + path.states[i]];
    }
    return path;
}

std::vector<StatePath> sample_paths(const Hmm& hmm, const EventSequence& events,
                                    const ForwardMatrix& fwd, std::int64_t count,
                                    std::uint64_t seed) {
    if (count < 0) {
        throw ArgumentError("sample_paths: negative sample count");
    }
    const std::size_t n = events.size();
    const std::size_t m = hmm.num_states();
    if (fwd.num_events() != n || fwd.num_states() != m) {
        throw ArgumentError("sample_paths: forward matrix does not match the input");
    }
    std::vector<StatePath> out;
    if (count == 0) {
        return out;
    }
    out.reserve(static_cast<std::size_t>(count));

    std::vector<double> last_cdf(m);
    {
        const auto col = fwd.column(n - 1);
        double acc = 0.0;
        for (std::size_t s = 0; s < m; ++s) {
            acc += col[s];
            last_cdf[s] = acc;
        }
    }
    const auto emit = emission_table(hmm, events);
    Rng rng(seed);
    std::vector<double> weights;
    for (std::int64_t draw = 0; draw < count; ++draw) {
        StatePath path;
        path.states.resize(n);
        const double u = rng.uniform() * last_cdf.back();
        auto it = std::upper_bound(last_cdf.begin(), last_cdf.end(), u);
        if (it == last_cdf.end()) {
            --it;
        }
        KmerCode state = static_cast<KmerCode>(it - last_cdf.begin());
        path.states[n - 1] = state;
        double log_joint = emit[(n - 1) * m + state];
        for (std::size_t i = n - 1; i > 0; --i) {
            const auto prev = fwd.column(i - 1);
            const auto preds = hmm.predecessors(state);
            weights.resize(preds.size());
            double total = 0.0;
            for (std::size_t p = 0; p < preds.size(); ++p) {
                total += prev[preds[p].source] * preds[p].prob;
                weights[p] = total;
            }
            const double r = rng.uniform() * total;
            std::size_t pick = static_cast<std::size_t>(
                std::upper_bound(weights.begin(), weights.end(), r) - weights.begin());
            pick = std::min(pick, preds.size() - 1);
            // Skip zero-weight entries that upper_bound can land on at the boundary.
            while (pick > 0 && weights[pick] == weights[pick - 1]) {
                --pick;
            }
            log_joint += preds[pick].log_prob;
            state = preds[pick].source;
            path.states[i - 1] = state;
            log_joint += emit[(i - 1) * m + state];
        }
        path.log_joint = log_joint + std::log(hmm.start_prob());
        out.push_back(std::move(path));
    }
    return out;
}

double path_log_joint(const Hmm& hmm, const EventSequence& events,
                      std::span<const KmerCode> states) {
    if (states.size() != events.size() || states.empty()) {
        throw ArgumentError("path_log_joint: path length does not match event count");
    }
    double total = std::log(hmm.start_prob());
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (i > 0) {
            total += std::log(hmm.transition_prob(states[i - 1], states[i]));
        }
        total += emission_log_density(hmm.pore(), states[i], events.events[i], events.scaling);
    }
    return total;
}

BaseCall path_to_sequence(std::span<const KmerCode> states, int k, int max_shift) {
    BaseCall call;
    if (states.empty()) {
        return call;
    }
    call.event_spans.reserve(states.size());
    call.sequence = decode_kmer(states[0], k);
    call.event_spans.push_back({0, static_cast<std::uint32_t>(k)});
    for (std::size_t i = 1; i < states.size(); ++i) {
        const int j = smallest_shift(states[i - 1], states[i], k);
        if (j > max_shift) {
            throw ArgumentError("illegal transition at event " + std::to_string(i) + ": " +
                                decode_kmer(states[i - 1], k) + " -> " +
                                decode_kmer(states[i], k));
        }
        const auto offset = static_cast<std::uint32_t>(call.sequence.size());
        const std::string kmer = decode_kmer(states[i], k);
        call.sequence.append(kmer, static_cast<std::size_t>(k - j), static_cast<std::size_t>(j));
        call.event_spans.push_back({offset, static_cast<std::uint32_t>(j)});
    }
    return call;
}

}  // namespace ensembleseed
