#include "ensembleseed/seeding.hpp"

#include "ensembleseed/error.hpp"

#include <algorithm>

namespace ensembleseed {

KmerIndex::KmerIndex(std::string_view reference, int k, AmbiguousBases policy)
    : k_(k), reference_length_(reference.size()) {
    if (k < 1 || k > kMaxKmerLength) {
        throw ArgumentError("index k must be in [1, 16], got " + std::to_string(k));
    }
    struct Entry {
        KmerCode kmer;
        Occurrence occ;
    };
    std::vector<Entry> entries;
    const auto uk = static_cast<std::size_t>(k);
    if (reference.size() >= uk) {
        entries.reserve(2 * (reference.size() - uk + 1));
    }
    const KmerCode mask = kmer_mask(k);
    const int high_shift = 2 * (k - 1);
    KmerCode fwd = 0;
    KmerCode rev = 0;
    std::size_t valid = 0;  // length of the current run of ACGT bases
    for (std::size_t i = 0; i < reference.size(); ++i) {
        const int b = base_code(reference[i]);
        if (b < 0) {
            if (policy == AmbiguousBases::Error) {
                throw ArgumentError("non-ACGT base '" + std::string(1, reference[i]) +
                                    "' at reference offset " + std::to_string(i));
            }
            valid = 0;
            continue;
        }
        fwd = ((fwd << 2) | static_cast<KmerCode>(b)) & mask;
        rev = (rev >> 2) | (static_cast<KmerCode>(3 - b) << high_shift);
        if (++valid >= uk) {
            const auto pos = static_cast<std::uint32_t>(i + 1 - uk);
            entries.push_back({fwd, {pos, Strand::Forward}});
            entries.push_back({rev, {pos, Strand::Reverse}});
        }
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return a.kmer != b.kmer ? a.kmer < b.kmer : a.occ < b.occ;
    });
    occurrences_.reserve(entries.size());
    for (const auto& e : entries) {
        if (keys_.empty() || keys_.back() != e.kmer) {
            keys_.push_back(e.kmer);
            starts_.push_back(static_cast<std::uint32_t>(occurrences_.size()));
        }
        occurrences_.push_back(e.occ);
    }
    starts_.push_back(static_cast<std::uint32_t>(occurrences_.size()));
}

std::span<const Occurrence> KmerIndex::lookup(KmerCode kmer) const {
    const auto it = std::lower_bound(keys_.begin(), keys_.end(), kmer);
    if (it == keys_.end() || *it != kmer) {
        return {};
    }
    const auto i = static_cast<std::size_t>(it - keys_.begin());
    return {occurrences_.data() + starts_[i], occurrences_.data() + starts_[i + 1]};
}

EnsembleKmers collect_ensemble_kmers(std::span<const std::string> rows, int k, int min_support) {
    if (k < 1 || k > kMaxKmerLength) {
        throw ArgumentError("seed k must be in [1, 16]");
    }
    if (min_support < 1 || static_cast<std::size_t>(min_support) > rows.size()) {
        throw ArgumentError("threshold t=" + std::to_string(min_support) +
                            " must be in [1, n=" + std::to_string(rows.size()) + "]");
    }
    EnsembleKmers out;
    out.k = k;
    const auto uk = static_cast<std::size_t>(k);
    const KmerCode mask = kmer_mask(k);

    std::vector<AnchoredKmer> all;
    std::vector<std::uint32_t> columns;
    for (const auto& row : rows) {
        columns.clear();
        KmerCode code = 0;
        std::size_t valid = 0;
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (row[c] == kGap) {
                continue;
            }
            columns.push_back(static_cast<std::uint32_t>(c));
            const int b = base_code(row[c]);
            if (b < 0) {
                valid = 0;
                continue;
            }
            code = ((code << 2) | static_cast<KmerCode>(b)) & mask;
            if (++valid >= uk) {
                all.push_back({columns[columns.size() - uk], code, 1});
            }
        }
    }
    std::sort(all.begin(), all.end(), [](const AnchoredKmer& a, const AnchoredKmer& b) {
        return a.column != b.column ? a.column < b.column : a.kmer < b.kmer;
    });
    for (std::size_t i = 0; i < all.size();) {
        std::size_t j = i;
        while (j < all.size() && all[j].column == all[i].column && all[j].kmer == all[i].kmer) {
            ++j;
        }
        const auto support = static_cast<std::uint32_t>(j - i);
        if (support >= static_cast<std::uint32_t>(min_support)) {
            out.entries.push_back({all[i].column, all[i].kmer, support});
        }
        i = j;
    }
    return out;
}

std::vector<SeedHit> find_hits(const KmerIndex& index, const EnsembleKmers& kmers) {
    if (index.k() != kmers.k) {
        throw ArgumentError("index k=" + std::to_string(index.k()) +
                            " differs from query k=" + std::to_string(kmers.k));
    }
    std::vector<SeedHit> hits;
    for (const auto& e : kmers.entries) {
        for (const auto& occ : index.lookup(e.kmer)) {
            hits.push_back({e.column, occ.pos, occ.strand});
        }
    }
    std::sort(hits.begin(), hits.end());
    hits.erase(std::unique(hits.begin(), hits.end()), hits.end());
    return hits;
}

std::vector<Chain> chain_hits(std::span<const SeedHit> hits, const ChainParams& params) {
    if (params.length < 1 || params.min_gap < 0 || params.max_gap < params.min_gap) {
        throw ArgumentError("chain parameters need length >= 1 and 0 <= min_gap <= max_gap");
    }
    struct Node {
        std::int64_t col;
        std::int64_t ref;  // oriented along the strand
        SeedHit hit;
    };
    std::vector<Chain> chains;
    for (Strand strand : {Strand::Forward, Strand::Reverse}) {
        std::vector<Node> nodes;
        for (const auto& h : hits) {
            if (h.strand == strand) {
                const auto pos = static_cast<std::int64_t>(h.ref_pos);
                nodes.push_back({h.query_col, strand == Strand::Forward ? pos : -pos, h});
            }
        }
        std::sort(nodes.begin(), nodes.end(), [](const Node& a, const Node& b) {
            return a.col != b.col ? a.col < b.col : a.ref < b.ref;
        });
        nodes.erase(std::unique(nodes.begin(), nodes.end(),
                                [](const Node& a, const Node& b) {
                                    return a.col == b.col && a.ref == b.ref;
                                }),
                    nodes.end());

        // reach[i]: longest chain (capped at length) starting at node i.
        std::vector<int> reach(nodes.size(), 1);
        const auto successors = [&](std::size_t i) {
            const auto lo = std::lower_bound(
                nodes.begin() + static_cast<std::ptrdiff_t>(i) + 1, nodes.end(),
                nodes[i].col + params.min_gap,
                [](const Node& n, std::int64_t c) { return n.col < c; });
            return static_cast<std::size_t>(lo - nodes.begin());
        };
        const auto compatible = [&](std::size_t i, std::size_t j) {
            const std::int64_t dr = nodes[j].ref - nodes[i].ref;
            return dr >= params.min_gap && dr <= params.max_gap;
        };
        for (std::size_t i = nodes.size(); i-- > 0;) {
            if (params.length == 1) {
                break;
            }
            for (std::size_t j = successors(i);
                 j < nodes.size() && nodes[j].col - nodes[i].col <= params.max_gap; ++j) {
                if (compatible(i, j)) {
                    reach[i] = std::max(reach[i], std::min(params.length, reach[j] + 1));
                }
            }
        }
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (reach[i] < params.length) {
                continue;
            }
            Chain chain;
            std::size_t cur = i;
            chain.hits.push_back(nodes[cur].hit);
            for (int need = params.length - 1; need > 0; --need) {
                for (std::size_t j = successors(cur);
                     j < nodes.size() && nodes[j].col - nodes[cur].col <= params.max_gap; ++j) {
                    if (compatible(cur, j) && reach[j] >= need) {
                        cur = j;
                        break;
                    }
                }
                chain.hits.push_back(nodes[cur].hit);
            }
            chains.push_back(std::move(chain));
        }
    }
    std::sort(chains.begin(), chains.end(), [](const Chain& a, const Chain& b) {
        return a.leftmost() < b.leftmost();
    });
    return chains;
}

}  // namespace ensembleseed
