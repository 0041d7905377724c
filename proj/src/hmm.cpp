#include "ensembleseed/hmm.hpp"

#include "ensembleseed/error.hpp"

#include <algorithm>
#include <cmath>

namespace ensembleseed {

Hmm::Hmm(PoreModel pore, TransitionModel transitions)
    : space_(pore.k()), pore_(std::move(pore)), transitions_(std::move(transitions)) {
    if (transitions_.k() != space_.k()) {
        throw ArgumentError("pore model k=" + std::to_string(space_.k()) +
                            " does not match transition model k=" +
                            std::to_string(transitions_.k()));
    }
    const int k = space_.k();
    const std::size_t m = space_.size();

    // Gather every edge as (target, source, prob), then merge parallel edges.
    struct Edge {
        KmerCode target;
        KmerCode source;
        double prob;
    };
    std::vector<Edge> edges;
    edges.reserve(m * transitions_.out_degree());
    for (KmerCode src = 0; src < m; ++src) {
        for (int j = 0; j <= transitions_.max_shift(); ++j) {
            const auto n_app = static_cast<KmerCode>(kmer_count(j));
            for (KmerCode a = 0; a < n_app; ++a) {
                const KmerCode dst = TransitionModel::edge_target(src, j, a, k);
                edges.push_back({dst, src, transitions_.edge_prob(src, j, a)});
            }
        }
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return a.target != b.target ? a.target < b.target : a.source < b.source;
    });
    pred_offset_.assign(m + 1, 0);
    for (std::size_t i = 0; i < edges.size();) {
        std::size_t j = i;
        double prob = 0.0;
        while (j < edges.size() && edges[j].target == edges[i].target &&
               edges[j].source == edges[i].source) {
            prob += edges[j].prob;
            ++j;
        }
        pred_.push_back({edges[i].source, prob, std::log(prob)});
        ++pred_offset_[edges[i].target + 1];
        i = j;
    }
    for (std::size_t s = 0; s < m; ++s) {
        pred_offset_[s + 1] += pred_offset_[s];
    }
}

double Hmm::transition_prob(KmerCode source, KmerCode target) const {
    if (source == KmerStateSpace::kStart) {
        return space_.is_emitting(target) ? start_prob() : 0.0;
    }
    const auto preds = predecessors(target);
    const auto it = std::lower_bound(
        preds.begin(), preds.end(), source,
        [](const Predecessor& p, KmerCode s) { return p.source < s; });
    return (it != preds.end() && it->source == source) ? it->prob : 0.0;
}

std::vector<Transition> transitions_from(const Hmm& hmm, KmerCode state) {
    std::vector<Transition> out;
    if (state == KmerStateSpace::kStart) {
        out.reserve(hmm.num_states());
        for (KmerCode s = 0; s < hmm.num_states(); ++s) {
            out.push_back({s, 0, hmm.start_prob()});
        }
        return out;
    }
    if (!hmm.space().is_emitting(state)) {
        throw ArgumentError("state " + std::to_string(state) + " is not in the state space");
    }
    const auto& tm = hmm.transitions();
    out.reserve(tm.out_degree());
    for (int j = 0; j <= tm.max_shift(); ++j) {
        const auto n_app = static_cast<KmerCode>(kmer_count(j));
        for (KmerCode a = 0; a < n_app; ++a) {
            out.push_back({TransitionModel::edge_target(state, j, a, hmm.k()), j,
                           tm.edge_prob(state, j, a)});
        }
    }
    return out;
}

}  // namespace ensembleseed
