#include "ensembleseed/error.hpp"
#include "ensembleseed/simulate.hpp"
#include "ensembleseed/train.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace ensembleseed;

namespace {

StatePath path_of(std::initializer_list<const char*> kmers) {
    StatePath p;
    for (const char* s : kmers) p.states.push_back(encode_kmer_or_throw(s));
    return p;
}

std::vector<StatePath> simulated_paths(const std::vector<double>& probs, std::size_t reads,
                                       std::size_t events, std::uint64_t seed) {
    const Hmm hmm(synthetic_pore_model(5, 2), TransitionModel::per_order(5, probs));
    const auto reference = generate_reference(200000, seed);
    std::vector<StatePath> paths;
    for (std::size_t r = 0; r < reads; ++r) {
        paths.push_back(simulate_read(hmm, reference, events,
                                      r % 2 ? Strand::Reverse : Strand::Forward, seed * 1000 + r)
                            .true_path);
    }
    return paths;
}

}  // namespace

TEST_CASE("count_transitions tallies consecutive pairs") {
    const std::vector<StatePath> paths{path_of({"A", "C", "C", "G"})};
    const auto counts = count_transitions(paths, 1, 1);
    const auto A = 0u, C = 1u, G = 2u;
    CHECK(counts.count(A, C) == 1);
    CHECK(counts.count(C, C) == 1);
    CHECK(counts.count(C, G) == 1);
    CHECK(counts.total() == 3);
    CHECK(counts.order_count(0) == 1);
    CHECK(counts.order_count(1) == 2);
}

TEST_CASE("empty path list gives all-zero counts") {
    const auto counts = count_transitions({}, 3, 2);
    CHECK(counts.total() == 0);
}

TEST_CASE("illegal pairs name the path and position") {
    const std::vector<StatePath> paths{path_of({"AAC", "ACG"}), path_of({"AAC", "ACG", "TTT"})};
    CHECK_THROWS_WITH_AS(count_transitions(paths, 3, 2),
                         doctest::Contains("path 1 position 2"), ArgumentError);
}

TEST_CASE("pseudocount worked example") {
    // k=1, max shift 1: out-edges of A are {stay, ->A, ->C, ->G, ->T}.
    TransitionCounts counts(1, 1);
    for (int i = 0; i < 3; ++i) counts.add(0, 1);
    const auto model = estimate_transitions(counts, 1, TransitionModel::Mode::PerTransition);
    CHECK(model.edge_prob(0, 0, 0) == doctest::Approx(1.0 / 8));
    CHECK(model.edge_prob(0, 1, 0) == doctest::Approx(1.0 / 8));
    CHECK(model.edge_prob(0, 1, 1) == doctest::Approx(4.0 / 8));
    CHECK(model.edge_prob(0, 1, 2) == doctest::Approx(1.0 / 8));
    CHECK(model.edge_prob(0, 1, 3) == doctest::Approx(1.0 / 8));
    // C was never observed: uniform over its five edges.
    for (KmerCode a = 0; a < 4; ++a) CHECK(model.edge_prob(1, 1, a) == doctest::Approx(0.2));
}

TEST_CASE("no observations with pseudocount 1 is uniform over out-edges") {
    const TransitionCounts counts(3, 2);
    const auto per_order = estimate_transitions(counts, 1, TransitionModel::Mode::PerOrder);
    const auto per_edge = estimate_transitions(counts, 1, TransitionModel::Mode::PerTransition);
    for (KmerCode s = 0; s < 64; s += 7) {
        for (int j = 0; j <= 2; ++j) {
            for (KmerCode a = 0; a < kmer_count(j); ++a) {
                REQUIRE(per_order.edge_prob(s, j, a) == doctest::Approx(1.0 / 21));
                REQUIRE(per_edge.edge_prob(s, j, a) == doctest::Approx(1.0 / 21));
            }
        }
    }
}

TEST_CASE("zero pseudocount with an unobserved state is an error") {
    TransitionCounts counts(1, 1);
    counts.add(0, 1);
    CHECK_THROWS_AS(estimate_transitions(counts, 0, TransitionModel::Mode::PerTransition),
                    ArgumentError);
    CHECK_THROWS_AS(estimate_transitions(TransitionCounts(1, 1), 0,
                                         TransitionModel::Mode::PerOrder),
                    ArgumentError);
    CHECK_THROWS_AS(estimate_transitions(counts, -1, TransitionModel::Mode::PerOrder),
                    ArgumentError);
}

TEST_CASE("estimated models are row-stochastic") {
    const auto paths = simulated_paths({0.1, 0.8, 0.1}, 4, 500, 3);
    const auto counts = count_transitions(paths, 5, 2);
    for (auto mode : {TransitionModel::Mode::PerOrder, TransitionModel::Mode::PerTransition}) {
        const auto model = estimate_transitions(counts, 1, mode);
        for (KmerCode s = 0; s < 1024; ++s) {
            double sum = 0.0;
            for (int j = 0; j <= 2; ++j) sum += model.shift_prob(s, j);
            REQUIRE(std::abs(sum - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("move fraction of simulated counts is near the generating value") {
    const auto paths = simulated_paths({0.1, 0.8, 0.1}, 10, 1001, 17);
    const auto counts = count_transitions(paths, 5, 2);
    REQUIRE(counts.total() == 10000);
    const double move = static_cast<double>(counts.order_count(1)) / counts.total();
    CHECK(std::abs(move - 0.8) < 0.05);
}

TEST_CASE("simulate -> count -> estimate recovers per-order probabilities") {
    const std::vector<double> truth{0.10, 0.80, 0.10};
    const auto paths = simulated_paths(truth, 100, 1001, 29);
    const auto counts = count_transitions(paths, 5, 2);
    REQUIRE(counts.total() >= 100000);
    const auto model = estimate_transitions(counts, 1, TransitionModel::Mode::PerOrder);
    for (int j = 0; j <= 2; ++j) {
        CHECK(std::abs(model.order_probs()[j] - truth[j]) < 0.02);
    }
}

TEST_CASE("estimation ignores path order and count tables add") {
    auto paths = simulated_paths({0.15, 0.7, 0.15}, 6, 300, 5);
    const auto all = count_transitions(paths, 5, 2);
    auto merged = count_transitions(std::span(paths).first(2), 5, 2);
    merged += count_transitions(std::span(paths).subspan(2), 5, 2);
    CHECK(merged.edge_counts() == all.edge_counts());
    std::reverse(paths.begin(), paths.end());
    CHECK(count_transitions(paths, 5, 2).edge_counts() == all.edge_counts());
    for (auto mode : {TransitionModel::Mode::PerOrder, TransitionModel::Mode::PerTransition}) {
        const auto a = estimate_transitions(all, 1, mode);
        const auto b = estimate_transitions(merged, 1, mode);
        CHECK(a.order_probs() == b.order_probs());
        CHECK(a.edge_probs() == b.edge_probs());
    }
}

TEST_CASE("trained model files round-trip") {
    const auto paths = simulated_paths({0.1, 0.8, 0.1}, 2, 300, 9);
    const auto counts = count_transitions(paths, 5, 2);
    for (auto mode : {TransitionModel::Mode::PerOrder, TransitionModel::Mode::PerTransition}) {
        const auto model = estimate_transitions(counts, 1, mode);
        std::ostringstream out;
        write_transition_model(out, model, 1);
        std::istringstream in(out.str());
        TrainedModelHeader header;
        const auto back = read_transition_model(in, &header);
        CHECK(header.k == 5);
        CHECK(header.max_shift == 2);
        CHECK(header.mode == mode);
        CHECK(header.pseudocount == 1);
        CHECK(back.mode() == mode);
        for (KmerCode s = 0; s < 1024; s += 31) {
            for (int j = 0; j <= 2; ++j) {
                for (KmerCode a = 0; a < kmer_count(j); ++a) {
                    REQUIRE(back.edge_prob(s, j, a) ==
                            doctest::Approx(model.edge_prob(s, j, a)).epsilon(1e-15));
                }
            }
        }
    }
}

TEST_CASE("trained model parser rejects malformed files") {
    std::istringstream bad_header("k=5\norder\tprob\n0\t1\n");
    CHECK_THROWS_AS(read_transition_model(bad_header), ParseError);
    std::istringstream short_rows("# k=3 max_shift=2 mode=per-order pseudocount=1\norder\tprob\n0\t0.5\n1\t0.5\n");
    CHECK_THROWS_AS(read_transition_model(short_rows), ParseError);
    std::istringstream wrong_order(
        "# k=1 max_shift=1 mode=per-transition pseudocount=1\nsource_kmer\ttarget_kmer\tprob\n"
        "A\tC\t0.2\n");
    CHECK_THROWS_AS(read_transition_model(wrong_order), ParseError);
}
