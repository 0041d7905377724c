#include "ensembleseed/dna.hpp"

#include "ensembleseed/error.hpp"

#include <algorithm>

namespace ensembleseed {

std::optional<KmerCode> encode_kmer(std::string_view kmer) {
    if (kmer.empty() || kmer.size() > static_cast<std::size_t>(kMaxKmerLength)) {
        return std::nullopt;
    }
    KmerCode code = 0;
    for (char c : kmer) {
        const int b = base_code(c);
        if (b < 0) {
            return std::nullopt;
        }
        code = (code << 2) | static_cast<KmerCode>(b);
    }
    return code;
}

KmerCode encode_kmer_or_throw(std::string_view kmer) {
    auto code = encode_kmer(kmer);
    if (!code) {
        throw ArgumentError("invalid k-mer '" + std::string(kmer) + "'");
    }
    return *code;
}

std::string decode_kmer(KmerCode code, int k) {
    std::string out(static_cast<std::size_t>(k), 'A');
    for (int i = k - 1; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = code_base(static_cast<int>(code & 3));
        code >>= 2;
    }
    return out;
}

KmerCode reverse_complement_code(KmerCode code, int k) {
    KmerCode out = 0;
    for (int i = 0; i < k; ++i) {
        out = (out << 2) | (3 - (code & 3));
        code >>= 2;
    }
    return out;
}

std::string reverse_complement(std::string_view seq) {
    std::string out(seq.rbegin(), seq.rend());
    std::transform(out.begin(), out.end(), out.begin(), complement);
    return out;
}

int smallest_shift(KmerCode from, KmerCode to, int k) {
    for (int j = 0; j < k; ++j) {
        const int overlap = k - j;
        if (kmer_suffix(from, overlap) == kmer_prefix(to, k, overlap)) {
            return j;
        }
    }
    return k;
}

}  // namespace ensembleseed
