#pragma once

#include "ensembleseed/hmm.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ensembleseed {

/// One emitting state per event, with ln P(path, events).
struct StatePath {
    std::vector<KmerCode> states;
    double log_joint = 0.0;

    std::size_t size() const { return states.size(); }
};

/// Forward probabilities with per-column rescaling. The true forward value is
/// F(i, s) = column(i)[s] * exp(log_scale[0] + ... + log_scale[i]).
class ForwardMatrix {
public:
    ForwardMatrix(std::size_t num_events, std::size_t num_states)
        : num_states_(num_states), values_(num_events * num_states), log_scale_(num_events) {}

    std::size_t num_events() const { return log_scale_.size(); }
    std::size_t num_states() const { return num_states_; }

    std::span<const double> column(std::size_t i) const {
        return {values_.data() + i * num_states_, num_states_};
    }
    std::span<double> column(std::size_t i) {
        return {values_.data() + i * num_states_, num_states_};
    }

    /// ln of the rescaling factor applied to column i.
    double log_scale(std::size_t i) const { return log_scale_[i]; }
    void set_log_scale(std::size_t i, double v) { log_scale_[i] = v; }

    /// ln P(e_1..e_n), the sum of all column log scales.
    double log_likelihood() const;

private:
    std::size_t num_states_;
    std::vector<double> values_;
    std::vector<double> log_scale_;
};

/// Per-event base span: event i contributed sequence[offset, offset + length).
struct EventSpan {
    std::uint32_t offset = 0;
    std::uint32_t length = 0;
};

struct BaseCall {
    std::string sequence;
    std::vector<EventSpan> event_spans;
};

/// Row-major n x m table of ln emission densities.
std::vector<double> emission_table(const Hmm& hmm, const EventSequence& events);

ForwardMatrix forward(const Hmm& hmm, const EventSequence& events);

/// Most probable state path. Ties go to the lowest state id.
StatePath viterbi(const Hmm& hmm, const EventSequence& events);

/// `count` independent draws from P(path | events) by stochastic traceback over
/// `fwd`, which must come from the same hmm and events. Deterministic in `seed`.
std::vector<StatePath> sample_paths(const Hmm& hmm, const EventSequence& events,
                                    const ForwardMatrix& fwd, std::int64_t count,
                                    std::uint64_t seed);

/// ln P(path, events); -inf if the path uses a missing transition.
double path_log_joint(const Hmm& hmm, const EventSequence& events,
                      std::span<const KmerCode> states);

/// Translates a state path to DNA using the shortest interpretation: each event
/// after the first adds the bases implied by the smallest shift between
/// consecutive k-mers. Throws if that shift exceeds `max_shift`.
BaseCall path_to_sequence(std::span<const KmerCode> states, int k, int max_shift);

inline BaseCall path_to_sequence(const StatePath& path, int k) {
    return path_to_sequence(path.states, k, k);
}

}  // namespace ensembleseed
