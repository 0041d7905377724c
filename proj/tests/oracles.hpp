#pragma once

// Brute-force references for the decoders. Everything here works from strings and
// closed-form densities, not from the library's predecessor tables or DP code.

#include "ensembleseed/dna.hpp"
#include "ensembleseed/hmm.hpp"
#include "ensembleseed/rng.hpp"
#include "ensembleseed/seeding.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <algorithm>
#include <string>
#include <vector>

namespace oracle {

using namespace ensembleseed;

inline double normal_pdf(double x, double mean, double sd) {
    const double z = (x - mean) / sd;
    return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * std::numbers::pi));
}

/// Per-order transition probability from string overlap, summed over every
/// shift that explains the pair.
inline double transition(const std::vector<double>& order_probs, int k, KmerCode x,
                         KmerCode y) {
    const std::string xs = decode_kmer(x, k);
    const std::string ys = decode_kmer(y, k);
    double p = 0.0;
    for (int j = 0; j < static_cast<int>(order_probs.size()); ++j) {
        const bool fits = j == 0 ? xs == ys : xs.substr(j) == ys.substr(0, k - j);
        if (fits) {
            p += order_probs[j] / std::pow(4.0, j);
        }
    }
    return p;
}

struct Instance {
    int k = 1;
    std::vector<double> order_probs;
    std::vector<KmerLevel> levels;
    EventSequence events;

    Hmm hmm() const {
        return Hmm(PoreModel(k, levels), TransitionModel::per_order(k, order_probs));
    }
};

/// Random small instance whose events are drawn from the instance's own model,
/// so the posterior is informative but not degenerate.
inline Instance random_instance(std::uint64_t seed, int k, std::size_t num_events,
                                int max_shift = 1) {
    Rng rng(seed);
    Instance inst;
    inst.k = k;
    const std::size_t m = kmer_count(k);
    for (std::size_t s = 0; s < m; ++s) {
        inst.levels.push_back({40.0 + 10.0 * static_cast<double>(s) + rng.uniform(-4.0, 4.0),
                               rng.uniform(2.0, 5.0)});
    }
    double rest = 1.0;
    inst.order_probs.assign(static_cast<std::size_t>(max_shift) + 1, 0.0);
    inst.order_probs[0] = rng.uniform(0.05, 0.3);
    rest -= inst.order_probs[0];
    for (int j = 2; j <= max_shift; ++j) {
        inst.order_probs[j] = rest * rng.uniform(0.05, 0.2);
    }
    double skips = 0.0;
    for (int j = 2; j <= max_shift; ++j) {
        skips += inst.order_probs[j];
    }
    inst.order_probs[1] = rest - skips;
    inst.events.read_id = "toy";
    inst.events.scaling = {rng.uniform(0.9, 1.1), rng.uniform(-2.0, 2.0), rng.uniform(0.9, 1.2)};
    KmerCode state = static_cast<KmerCode>(rng.below(m));
    for (std::size_t i = 0; i < num_events; ++i) {
        if (i > 0) {
            state = static_cast<KmerCode>(rng.below(m));
        }
        const auto& lv = inst.levels[state];
        inst.events.events.push_back(
            {rng.normal(inst.events.scaling.scale * lv.mu + inst.events.scaling.shift,
                        lv.sigma * inst.events.scaling.var)});
    }
    return inst;
}

/// Joint probability of every state path, indexed by the base-m number of the path.
inline std::vector<double> path_joint_table(const Instance& inst) {
    const std::size_t m = kmer_count(inst.k);
    const std::size_t n = inst.events.size();
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) {
        total *= m;
    }
    const auto& sc = inst.events.scaling;
    std::vector<double> joint(total);
    std::vector<KmerCode> path(n);
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t c = code;
        for (std::size_t i = n; i-- > 0;) {
            path[i] = static_cast<KmerCode>(c % m);
            c /= m;
        }
        double p = 1.0 / static_cast<double>(m);
        for (std::size_t i = 0; i < n; ++i) {
            if (i > 0) {
                p *= transition(inst.order_probs, inst.k, path[i - 1], path[i]);
            }
            const auto& lv = inst.levels[path[i]];
            p *= normal_pdf(inst.events.events[i].mean, sc.scale * lv.mu + sc.shift,
                            lv.sigma * sc.var);
        }
        joint[code] = p;
    }
    return joint;
}

inline std::size_t path_index(const std::vector<KmerCode>& states, std::size_t m) {
    std::size_t code = 0;
    for (auto s : states) {
        code = code * m + s;
    }
    return code;
}

/// Every (pos, strand) whose forward or reverse-complement k-mer equals `kmer`.
inline std::vector<Occurrence> naive_occurrences(const std::string& ref, const std::string& kmer) {
    std::vector<Occurrence> out;
    const auto k = kmer.size();
    for (std::size_t p = 0; p + k <= ref.size(); ++p) {
        const auto sub = ref.substr(p, k);
        if (sub == kmer) out.push_back({static_cast<std::uint32_t>(p), Strand::Forward});
        if (reverse_complement(sub) == kmer) {
            out.push_back({static_cast<std::uint32_t>(p), Strand::Reverse});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline bool gap_ok(std::int64_t d, const ChainParams& p) { return d >= p.min_gap && d <= p.max_gap; }

inline std::int64_t oriented(const SeedHit& h) {
    return h.strand == Strand::Forward ? std::int64_t{h.ref_pos} : -std::int64_t{h.ref_pos};
}

inline bool linked(const SeedHit& a, const SeedHit& b, const ChainParams& p) {
    return a.strand == b.strand &&
           gap_ok(std::int64_t{b.query_col} - std::int64_t{a.query_col}, p) &&
           gap_ok(oriented(b) - oriented(a), p);
}

/// Leftmost hits of every chain of three, by enumerating all ordered triples.
inline std::set<SeedHit> brute_force_chain_starts(const std::vector<SeedHit>& hits,
                                           const ChainParams& p) {
    std::set<SeedHit> out;
    for (const auto& a : hits)
        for (const auto& b : hits)
            if (linked(a, b, p))
                for (const auto& c : hits)
                    if (linked(b, c, p)) out.insert(a);
    return out;
}

inline std::vector<SeedHit> random_hits(Rng& rng, std::size_t count) {
    std::set<SeedHit> hits;
    while (hits.size() < count) {
        hits.insert({static_cast<std::uint32_t>(rng.below(400)),
                     static_cast<std::uint32_t>(1000 + rng.below(400)),
                     rng.below(2) ? Strand::Reverse : Strand::Forward});
    }
    return {hits.begin(), hits.end()};
}

}  // namespace oracle
