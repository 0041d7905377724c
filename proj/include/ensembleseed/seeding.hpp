#pragma once

#include "ensembleseed/dna.hpp"
#include "ensembleseed/simulate.hpp"

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ensembleseed {

inline constexpr char kGap = '-';

struct Occurrence {
    std::uint32_t pos = 0;  // forward-strand left endpoint
    Strand strand = Strand::Forward;

    auto operator<=>(const Occurrence&) const = default;
};

enum class AmbiguousBases { Skip, Error };

/// Exact-match index of every k-mer of a reference on both strands. A
/// reverse-strand occurrence at `pos` means the reverse complement of
/// reference[pos, pos + k) equals the k-mer.
class KmerIndex {
public:
    KmerIndex(std::string_view reference, int k, AmbiguousBases policy = AmbiguousBases::Skip);

    int k() const { return k_; }
    std::size_t reference_length() const { return reference_length_; }
    std::size_t total_positions() const { return occurrences_.size(); }
    std::size_t distinct_kmers() const { return keys_.size(); }

    /// Occurrences of `kmer`, sorted by (pos, strand).
    std::span<const Occurrence> lookup(KmerCode kmer) const;

private:
    int k_;
    std::size_t reference_length_;
    std::vector<KmerCode> keys_;
    std::vector<std::uint32_t> starts_;
    std::vector<Occurrence> occurrences_;
};

inline KmerIndex build_index(std::string_view reference, int k,
                             AmbiguousBases policy = AmbiguousBases::Skip) {
    return KmerIndex(reference, k, policy);
}

/// A k-mer anchored at a column of the event-aligned window.
struct AnchoredKmer {
    std::uint32_t column = 0;
    KmerCode kmer = 0;
    std::uint32_t support = 0;  // number of rows containing this k-mer at this column

    bool operator==(const AnchoredKmer&) const = default;
};

struct EnsembleKmers {
    int k = 0;
    std::vector<AnchoredKmer> entries;  // sorted by (column, kmer)
};

/// Groups the k-mers of gapped rows by their anchor column and keeps those present
/// in at least `min_support` rows. A row contributes, at every column holding one
/// of its bases, the k-mer starting at that base and read gap-free to the right.
/// K-mers that would run past the end of the row are dropped.
EnsembleKmers collect_ensemble_kmers(std::span<const std::string> rows, int k, int min_support);

struct SeedHit {
    std::uint32_t query_col = 0;
    std::uint32_t ref_pos = 0;
    Strand strand = Strand::Forward;

    auto operator<=>(const SeedHit&) const = default;
};

/// One hit per (column, reference occurrence); sorted, without duplicates.
std::vector<SeedHit> find_hits(const KmerIndex& index, const EnsembleKmers& kmers);

struct Chain {
    std::vector<SeedHit> hits;
    const SeedHit& leftmost() const { return hits.front(); }
};

struct ChainParams {
    int length = 3;
    int min_gap = 10;
    int max_gap = 50;
};

/// Reports, once per distinct leftmost hit, a chain of `length` same-strand hits
/// whose start distances between neighbours lie in [min_gap, max_gap] in both the
/// query and the reference. Reference distances are measured along the hit's
/// strand, so reverse-strand chains run towards lower forward coordinates.
std::vector<Chain> chain_hits(std::span<const SeedHit> hits, const ChainParams& params = {});

}  // namespace ensembleseed
