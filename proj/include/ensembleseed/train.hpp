#pragma once

#include "ensembleseed/decode.hpp"
#include "ensembleseed/transitions.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace ensembleseed {

/// Observed transition tallies, kept per edge in the canonical layout of
/// TransitionModel. Per-order totals are derived by summing over states.
class TransitionCounts {
public:
    TransitionCounts(int k, int max_shift);

    int k() const { return k_; }
    int max_shift() const { return max_shift_; }
    std::size_t out_degree() const { return out_degree_; }

    std::uint64_t edge_count(KmerCode source, int shift, KmerCode appended) const;
    std::uint64_t count(KmerCode source, KmerCode target) const;
    std::uint64_t order_count(int shift) const;
    std::uint64_t total() const;

    /// Records one observed pair; the shift is the smallest consistent one.
    void add(KmerCode source, KmerCode target);

    TransitionCounts& operator+=(const TransitionCounts& other);

    const std::vector<std::uint64_t>& edge_counts() const { return counts_; }

private:
    int k_;
    int max_shift_;
    std::size_t out_degree_;
    std::vector<std::uint64_t> counts_;
};

/// Tallies every consecutive pair of every path. Throws naming the path index and
/// position if a pair needs a shift beyond `max_shift`.
TransitionCounts count_transitions(std::span<const StatePath> paths, int k, int max_shift);

/// Probability of each edge proportional to (count + pseudocount) over the
/// state's legal out-edges. PerOrder pools the counts of all states by shift
/// first, so p_j = (C_j + pseudocount * 4^j) / (N + pseudocount * out_degree).
TransitionModel estimate_transitions(const TransitionCounts& counts, std::int64_t pseudocount,
                                     TransitionModel::Mode mode);

struct TrainedModelHeader {
    int k = 0;
    int max_shift = 0;
    TransitionModel::Mode mode = TransitionModel::Mode::PerOrder;
    std::int64_t pseudocount = 1;
};

// Trained model TSV: "# k=5 max_shift=2 mode=per-order pseudocount=1", then either
// "order\tprob" rows or "source_kmer\ttarget_kmer\tprob" rows in canonical edge order.
void write_transition_model(std::ostream& out, const TransitionModel& model,
                            std::int64_t pseudocount);
TransitionModel read_transition_model(std::istream& in, TrainedModelHeader* header = nullptr);
TransitionModel load_transition_model(const std::filesystem::path& path);

}  // namespace ensembleseed
