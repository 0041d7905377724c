#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace ensembleseed {

/// Integer id of a k-mer: base-4, A=0 C=1 G=2 T=3, first base most significant.
using KmerCode = std::uint32_t;

inline constexpr int kMaxKmerLength = 16;

/// Two-bit code of a nucleotide, or -1 for anything outside ACGT (case-insensitive).
constexpr int base_code(char c) {
    switch (c) {
        case 'A': case 'a': return 0;
        case 'C': case 'c': return 1;
        case 'G': case 'g': return 2;
        case 'T': case 't': return 3;
        default: return -1;
    }
}

constexpr char code_base(int code) { return "ACGT"[code & 3]; }

constexpr char complement(char c) {
    switch (c) {
        case 'A': return 'T';
        case 'C': return 'G';
        case 'G': return 'C';
        case 'T': return 'A';
        case 'a': return 't';
        case 'c': return 'g';
        case 'g': return 'c';
        case 't': return 'a';
        default: return 'N';
    }
}

constexpr std::uint64_t kmer_count(int k) { return std::uint64_t{1} << (2 * k); }

constexpr KmerCode kmer_mask(int k) {
    return k >= 16 ? ~KmerCode{0} : static_cast<KmerCode>((KmerCode{1} << (2 * k)) - 1);
}

/// Encodes `kmer` (length 1..16). Returns nullopt if it contains a non-ACGT symbol.
std::optional<KmerCode> encode_kmer(std::string_view kmer);

/// Same as encode_kmer but throws ArgumentError on bad input.
KmerCode encode_kmer_or_throw(std::string_view kmer);

std::string decode_kmer(KmerCode code, int k);

/// Code of the reverse complement of the k-mer with code `code`.
KmerCode reverse_complement_code(KmerCode code, int k);

std::string reverse_complement(std::string_view seq);

/// First `len` bases of a k-mer, as a code.
constexpr KmerCode kmer_prefix(KmerCode code, int k, int len) {
    return code >> (2 * (k - len));
}

/// Last `len` bases of a k-mer, as a code.
constexpr KmerCode kmer_suffix(KmerCode code, int len) { return code & kmer_mask(len); }

/// Smallest shift j in [0, k] such that the last k-j bases of `from` equal the first
/// k-j bases of `to`. Shift 0 means the k-mers are identical; shift k always fits.
int smallest_shift(KmerCode from, KmerCode to, int k);

}  // namespace ensembleseed
