#pragma once

#include "ensembleseed/dna.hpp"

#include <cstddef>
#include <vector>

namespace ensembleseed {

/// Transition structure of the k-mer HMM.
///
/// From state x, a transition of shift j (0 <= j <= max_shift) moves to a k-mer
/// whose first k-j bases are the last k-j bases of x. Shift 0 is the split
/// self-transition, shift 1 an ordinary move, larger shifts are skips. The edges
/// of one state are laid out in a canonical order: the self edge, then the 4
/// shift-1 edges, then the 16 shift-2 edges, ..., each block ordered by the code
/// of the appended bases.
///
/// Two parameterisations are supported. Per-order: one total probability per
/// shift, shared by all states and split uniformly over the 4^j edges of that
/// shift. Per-transition: an explicit probability for every edge of every state.
class TransitionModel {
public:
    enum class Mode { PerOrder, PerTransition };

    /// `order_probs[j]` is the total probability of shift j; must sum to 1.
    static TransitionModel per_order(int k, std::vector<double> order_probs);

    /// `edge_probs` holds out_degree() entries per state in canonical order.
    static TransitionModel per_transition(int k, int max_shift, std::vector<double> edge_probs);

    /// Untrained defaults: stay 0.1, move 0.8, and 0.1 split evenly over skip
    /// orders (move takes 0.9 when there are no skips).
    static TransitionModel defaults(int k, int max_shift = 2);

    int k() const { return k_; }
    int max_shift() const { return max_shift_; }
    Mode mode() const { return mode_; }

    /// Number of outgoing edges of each emitting state: 1 + 4 + ... + 4^max_shift.
    std::size_t out_degree() const { return out_degree_; }

    /// Index of the first edge of shift j in the canonical layout.
    static std::size_t shift_offset(int shift);

    static KmerCode edge_target(KmerCode source, int shift, KmerCode appended, int k) {
        return static_cast<KmerCode>(((static_cast<std::uint64_t>(source) << (2 * shift)) |
                                      appended) &
                                     kmer_mask(k));
    }

    double edge_prob(KmerCode source, int shift, KmerCode appended) const;

    /// Total probability of taking a shift-j transition out of `source`.
    double shift_prob(KmerCode source, int shift) const;

    /// Per-order totals; only meaningful in per-order mode.
    const std::vector<double>& order_probs() const { return order_probs_; }

    /// Per-edge table; empty in per-order mode.
    const std::vector<double>& edge_probs() const { return edge_probs_; }

private:
    TransitionModel() = default;

    int k_ = 1;
    int max_shift_ = 1;
    Mode mode_ = Mode::PerOrder;
    std::size_t out_degree_ = 0;
    std::vector<double> order_probs_;
    std::vector<double> edge_probs_;
};

}  // namespace ensembleseed
