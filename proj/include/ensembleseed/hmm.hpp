#pragma once

#include "ensembleseed/pore_model.hpp"
#include "ensembleseed/transitions.hpp"

#include <span>
#include <vector>

namespace ensembleseed {

/// One outgoing edge as listed by transitions_from.
struct Transition {
    KmerCode target = 0;
    int shift = 0;  // 0 for edges out of the start state
    double prob = 0.0;
};

/// Incoming transition with probabilities of parallel edges summed.
struct Predecessor {
    KmerCode source = 0;
    double prob = 0.0;
    double log_prob = 0.0;
};

/// The k-mer HMM: state space, emissions and transitions. Immutable once built,
/// so a single instance can be shared by concurrent decoders.
class Hmm {
public:
    Hmm(PoreModel pore, TransitionModel transitions);

    const KmerStateSpace& space() const { return space_; }
    const PoreModel& pore() const { return pore_; }
    const TransitionModel& transitions() const { return transitions_; }
    int k() const { return space_.k(); }
    std::size_t num_states() const { return space_.size(); }

    /// Probability of the silent start state entering any given k-mer, 1/4^k.
    double start_prob() const { return 1.0 / static_cast<double>(space_.size()); }

    /// Distinct sources that can reach `target`, ascending by source id.
    std::span<const Predecessor> predecessors(KmerCode target) const {
        return {pred_.data() + pred_offset_[target], pred_.data() + pred_offset_[target + 1]};
    }

    /// t(source, target): sum over every edge from source to target. Zero if none.
    double transition_prob(KmerCode source, KmerCode target) const;

private:
    KmerStateSpace space_;
    PoreModel pore_;
    TransitionModel transitions_;
    std::vector<std::size_t> pred_offset_;
    std::vector<Predecessor> pred_;
};

/// Complete outgoing distribution of `state` (an emitting state or
/// KmerStateSpace::kStart), one entry per edge in canonical order.
std::vector<Transition> transitions_from(const Hmm& hmm, KmerCode state);

}  // namespace ensembleseed
