#include "ensembleseed/transitions.hpp"

#include "ensembleseed/error.hpp"
#include "ensembleseed/pore_model.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace ensembleseed {

namespace {

constexpr double kSumTolerance = 1e-6;

void check_shift_range(int k, int max_shift) {
    if (max_shift < 1 || max_shift > k) {
        throw ArgumentError("max_shift must be in [1, k=" + std::to_string(k) + "], got " +
                            std::to_string(max_shift));
    }
}

// Validates non-negativity and sum ~ 1, then rescales to sum exactly.
void normalise(std::vector<double>::iterator first, std::vector<double>::iterator last,
               const char* what) {
    double sum = 0.0;
    for (auto it = first; it != last; ++it) {
        if (!(*it >= 0.0) || !std::isfinite(*it)) {
            throw ArgumentError(std::string(what) + ": probabilities must be finite and >= 0");
        }
        sum += *it;
    }
    if (std::abs(sum - 1.0) > kSumTolerance) {
        throw ArgumentError(std::string(what) + ": probabilities sum to " + std::to_string(sum));
    }
    for (auto it = first; it != last; ++it) {
        *it /= sum;
    }
}

}  // namespace

std::size_t TransitionModel::shift_offset(int shift) {
    if (shift == 0) {
        return 0;
    }
    // 1 + 4 + ... + 4^(shift-1)
    std::size_t offset = 1;
    std::size_t block = 4;
    for (int j = 1; j < shift; ++j) {
        offset += block;
        block *= 4;
    }
    return offset;
}

TransitionModel TransitionModel::per_order(int k, std::vector<double> order_probs) {
    KmerStateSpace{k};
    TransitionModel m;
    m.k_ = k;
    m.max_shift_ = static_cast<int>(order_probs.size()) - 1;
    check_shift_range(k, m.max_shift_);
    m.mode_ = Mode::PerOrder;
    m.out_degree_ = shift_offset(m.max_shift_ + 1);
    normalise(order_probs.begin(), order_probs.end(), "per-order transitions");
    m.order_probs_ = std::move(order_probs);
    return m;
}

TransitionModel TransitionModel::per_transition(int k, int max_shift,
                                                std::vector<double> edge_probs) {
    const KmerStateSpace space(k);
    check_shift_range(k, max_shift);
    TransitionModel m;
    m.k_ = k;
    m.max_shift_ = max_shift;
    m.mode_ = Mode::PerTransition;
    m.out_degree_ = shift_offset(max_shift + 1);
    if (edge_probs.size() != space.size() * m.out_degree_) {
        throw ArgumentError("per-transition table needs " +
                            std::to_string(space.size() * m.out_degree_) + " entries, got " +
                            std::to_string(edge_probs.size()));
    }
    for (std::size_t s = 0; s < space.size(); ++s) {
        auto first = edge_probs.begin() + static_cast<std::ptrdiff_t>(s * m.out_degree_);
        normalise(first, first + static_cast<std::ptrdiff_t>(m.out_degree_),
                  "per-transition row");
    }
    m.edge_probs_ = std::move(edge_probs);
    return m;
}

TransitionModel TransitionModel::defaults(int k, int max_shift) {
    check_shift_range(k, max_shift);
    std::vector<double> probs(static_cast<std::size_t>(max_shift) + 1, 0.0);
    probs[0] = 0.1;
    if (max_shift == 1) {
        probs[1] = 0.9;
    } else {
        probs[1] = 0.8;
        for (int j = 2; j <= max_shift; ++j) {
            probs[static_cast<std::size_t>(j)] = 0.1 / (max_shift - 1);
        }
    }
    return per_order(k, std::move(probs));
}

double TransitionModel::edge_prob(KmerCode source, int shift, KmerCode appended) const {
    if (mode_ == Mode::PerOrder) {
        return order_probs_[static_cast<std::size_t>(shift)] /
               static_cast<double>(kmer_count(shift));
    }
    return edge_probs_[static_cast<std::size_t>(source) * out_degree_ + shift_offset(shift) +
                       appended];
}

double TransitionModel::shift_prob(KmerCode source, int shift) const {
    if (mode_ == Mode::PerOrder) {
        return order_probs_[static_cast<std::size_t>(shift)];
    }
    const auto first = static_cast<std::size_t>(source) * out_degree_ + shift_offset(shift);
    const auto count = static_cast<std::size_t>(kmer_count(shift));
    return std::accumulate(edge_probs_.begin() + static_cast<std::ptrdiff_t>(first),
                           edge_probs_.begin() + static_cast<std::ptrdiff_t>(first + count), 0.0);
}

}  // namespace ensembleseed
