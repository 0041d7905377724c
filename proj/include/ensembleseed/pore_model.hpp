#pragma once

#include "ensembleseed/dna.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace ensembleseed {

inline constexpr int kMaxModelK = 8;

/// All 4^k k-mer states plus the silent start state.
class KmerStateSpace {
public:
    static constexpr KmerCode kStart = std::numeric_limits<KmerCode>::max();

    explicit KmerStateSpace(int k);

    int k() const { return k_; }
    /// Number of emitting states, 4^k.
    std::size_t size() const { return size_; }
    bool is_emitting(KmerCode state) const { return state < size_; }

private:
    int k_;
    std::size_t size_;
};

/// Gaussian current level of one k-mer, in picoamps.
struct KmerLevel {
    double mu = 0.0;
    double sigma = 1.0;
};

/// Per-read scaling applied to the pore model: the emission for k-mer x is
/// N(scale * mu_x + shift, sigma_x * var).
struct ReadScaling {
    double scale = 1.0;
    double shift = 0.0;
    double var = 1.0;

    void validate() const;
};

struct Event {
    double mean = 0.0;
};

struct EventSequence {
    std::string read_id;
    ReadScaling scaling;
    std::vector<Event> events;

    std::size_t size() const { return events.size(); }
};

class PoreModel {
public:
    /// `levels` is indexed by k-mer code and must hold exactly 4^k entries.
    PoreModel(int k, std::vector<KmerLevel> levels);

    int k() const { return k_; }
    std::size_t size() const { return levels_.size(); }
    const KmerLevel& level(KmerCode kmer) const;
    const std::vector<KmerLevel>& levels() const { return levels_; }

private:
    int k_;
    std::vector<KmerLevel> levels_;
};

/// ln of the emission density of `event` in state `kmer`.
double emission_log_density(const PoreModel& pore, KmerCode kmer, const Event& event,
                            const ReadScaling& scaling);

/// Deterministic synthetic pore model used in place of vendor-supplied tables.
/// Levels are an additive per-position base effect plus k-mer specific noise, so
/// k-mers sharing most bases tend to have similar currents.
PoreModel synthetic_pore_model(int k, std::uint64_t seed);

// Pore model TSV: header "kmer\tmu\tsigma", one row per k-mer in any order.
PoreModel read_pore_model(std::istream& in);
PoreModel load_pore_model(const std::filesystem::path& path);
void write_pore_model(std::ostream& out, const PoreModel& pore);

// Events file: JSON lines {"read_id", "scale", "shift", "var", "events": [...]}.
std::vector<EventSequence> read_events(std::istream& in);
std::vector<EventSequence> load_events(const std::filesystem::path& path);
void write_events(std::ostream& out, const std::vector<EventSequence>& reads);

}  // namespace ensembleseed
