#include "ensembleseed/decode.hpp"
#include "ensembleseed/error.hpp"
#include "ensembleseed/simulate.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

using namespace ensembleseed;

TEST_CASE("forward likelihood equals the sum over all paths") {
    SUBCASE("k=1, 3 events") {
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            const auto inst = oracle::random_instance(seed, 1, 3);
            const auto hmm = inst.hmm();
            const auto fwd = forward(hmm, inst.events);
            double total = 0.0;
            for (double p : oracle::path_joint_table(inst)) total += p;
            CHECK(std::abs(fwd.log_likelihood() - std::log(total)) / std::abs(std::log(total)) <
                  1e-9);
            CHECK(std::abs(std::exp(fwd.log_likelihood()) - total) / total < 1e-9);
        }
    }
    SUBCASE("k=2 with skips, 3 events") {
        const auto inst = oracle::random_instance(11, 2, 3, 2);
        const auto fwd = forward(inst.hmm(), inst.events);
        double total = 0.0;
        for (double p : oracle::path_joint_table(inst)) total += p;
        CHECK(std::abs(std::exp(fwd.log_likelihood()) - total) / total < 1e-9);
    }
}

TEST_CASE("forward columns are normalised") {
    const auto inst = oracle::random_instance(3, 3, 40, 2);
    const auto fwd = forward(inst.hmm(), inst.events);
    for (std::size_t i = 0; i < fwd.num_events(); ++i) {
        double s = 0.0;
        for (double v : fwd.column(i)) s += v;
        REQUIRE(std::abs(s - 1.0) < 1e-9);
    }
    CHECK(std::isfinite(fwd.log_likelihood()));
}

TEST_CASE("a single event gives start probability times emission") {
    const auto inst = oracle::random_instance(8, 1, 1);
    const auto fwd = forward(inst.hmm(), inst.events);
    const auto& sc = inst.events.scaling;
    std::vector<double> expect(4);
    double total = 0.0;
    for (int s = 0; s < 4; ++s) {
        expect[s] = 0.25 * oracle::normal_pdf(inst.events.events[0].mean,
                                              sc.scale * inst.levels[s].mu + sc.shift,
                                              inst.levels[s].sigma * sc.var);
        total += expect[s];
    }
    for (int s = 0; s < 4; ++s) {
        CHECK(fwd.column(0)[s] == doctest::Approx(expect[s] / total).epsilon(1e-12));
    }
    CHECK(fwd.log_likelihood() == doctest::Approx(std::log(total)).epsilon(1e-12));
}

TEST_CASE("viterbi matches the brute-force argmax") {
    for (std::uint64_t seed = 100; seed < 120; ++seed) {
        const auto inst = oracle::random_instance(seed, 1, 4);
        const auto table = oracle::path_joint_table(inst);
        const auto best = static_cast<std::size_t>(
            std::max_element(table.begin(), table.end()) - table.begin());
        const auto path = viterbi(inst.hmm(), inst.events);
        REQUIRE(oracle::path_index(path.states, 4) == best);
        REQUIRE(std::abs(path.log_joint - std::log(table[best])) < 1e-9);
    }
}

TEST_CASE("viterbi recovers a noiseless move-only walk") {
    const int k = 5;
    const Hmm hmm(synthetic_pore_model(k, 9), TransitionModel::per_order(k, {0.0, 1.0}));
    const auto reference = generate_reference(400, 4);
    const auto read = simulate_read(hmm, reference, 200, Strand::Forward, 6, {1.0, 0.0, 0.01});
    EventSequence exact = read.events;
    for (std::size_t i = 0; i < exact.size(); ++i) {
        exact.events[i].mean = hmm.pore().level(read.true_path.states[i]).mu;
    }
    CHECK(viterbi(hmm, exact).states == read.true_path.states);
    CHECK(viterbi(hmm, read.events).states == read.true_path.states);
}

TEST_CASE("viterbi ties resolve to the lowest state id") {
    const Hmm hmm(PoreModel(1, std::vector<KmerLevel>(4, KmerLevel{50.0, 1.0})),
                  TransitionModel::per_order(1, {0.0, 1.0}));
    EventSequence ev{"tie", {}, {{50.0}, {50.0}, {50.0}}};
    CHECK(viterbi(hmm, ev).states == std::vector<KmerCode>{0, 0, 0});
}

TEST_CASE("sampled paths never beat viterbi and are legal") {
    const auto inst = oracle::random_instance(21, 3, 60, 2);
    const auto hmm = inst.hmm();
    const auto best = viterbi(hmm, inst.events);
    const auto fwd = forward(hmm, inst.events);
    CHECK(fwd.log_likelihood() >= best.log_joint);
    const auto samples = sample_paths(hmm, inst.events, fwd, 1000, 77);
    REQUIRE(samples.size() == 1000);
    for (const auto& s : samples) {
        REQUIRE(s.size() == inst.events.size());
        REQUIRE(s.log_joint <= best.log_joint + 1e-9);
        REQUIRE(std::abs(s.log_joint - path_log_joint(hmm, inst.events, s.states)) < 1e-8);
        for (std::size_t i = 1; i < s.size(); ++i) {
            REQUIRE(smallest_shift(s.states[i - 1], s.states[i], 3) <= 2);
        }
    }
}

TEST_CASE("sample_paths argument handling and determinism") {
    const auto inst = oracle::random_instance(5, 2, 30, 2);
    const auto hmm = inst.hmm();
    const auto fwd = forward(hmm, inst.events);
    CHECK(sample_paths(hmm, inst.events, fwd, 0, 1).empty());
    CHECK_THROWS_AS(sample_paths(hmm, inst.events, fwd, -1, 1), ArgumentError);
    const auto a = sample_paths(hmm, inst.events, fwd, 50, 1234);
    const auto b = sample_paths(hmm, inst.events, fwd, 50, 1234);
    const auto c = sample_paths(hmm, inst.events, fwd, 50, 1235);
    bool all_equal = true;
    bool any_diff = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        all_equal = all_equal && a[i].states == b[i].states && a[i].log_joint == b[i].log_joint;
        any_diff = any_diff || a[i].states != c[i].states;
    }
    CHECK(all_equal);
    CHECK(any_diff);
}

TEST_CASE("stochastic traceback draws from the exact posterior") {
    for (std::uint64_t seed = 300; seed < 303; ++seed) {
        const auto inst = oracle::random_instance(seed, 1, 5);
        const auto hmm = inst.hmm();
        const auto table = oracle::path_joint_table(inst);
        double total = 0.0;
        for (double p : table) total += p;
        const auto fwd = forward(hmm, inst.events);
        const std::size_t draws = 100000;
        std::vector<double> freq(table.size(), 0.0);
        for (const auto& s : sample_paths(hmm, inst.events, fwd, draws, seed)) {
            freq[oracle::path_index(s.states, 4)] += 1.0 / draws;
        }
        double tv = 0.0;
        for (std::size_t i = 0; i < table.size(); ++i) tv += std::abs(freq[i] - table[i] / total);
        CHECK(tv / 2 < 0.02);
    }
}

TEST_CASE("path_to_sequence uses the shortest interpretation") {
    auto code = [](const char* s) { return encode_kmer_or_throw(s); };
    SUBCASE("one-base overlap example") {
        const std::vector<KmerCode> path{code("ACTCTC"), code("CTCTCA")};
        const auto call = path_to_sequence(path, 6, 6);
        CHECK(call.sequence == "ACTCTCA");
        CHECK(call.event_spans[1].length == 1);
    }
    SUBCASE("split adds nothing") {
        const std::vector<KmerCode> path{code("AACTG"), code("AACTG")};
        const auto call = path_to_sequence(path, 5, 2);
        CHECK(call.sequence == "AACTG");
        CHECK(call.event_spans[0].length == 5);
        CHECK(call.event_spans[1].length == 0);
        CHECK(call.event_spans[1].offset == 5);
    }
    SUBCASE("skip of two") {
        const std::vector<KmerCode> path{code("AACTG"), code("CTGAC")};
        CHECK(path_to_sequence(path, 5, 2).sequence == "AACTGAC");
    }
    SUBCASE("illegal shift is rejected") {
        const std::vector<KmerCode> path{code("AACTG"), code("GACCA")};
        CHECK_THROWS_AS(path_to_sequence(path, 5, 2), ArgumentError);
        CHECK(path_to_sequence(path, 5, 5).sequence == "AACTGACCA");
    }
}

TEST_CASE("spans are contiguous and cover the sequence") {
    const auto inst = oracle::random_instance(41, 4, 200, 2);
    const auto hmm = inst.hmm();
    const auto fwd = forward(hmm, inst.events);
    for (const auto& s : sample_paths(hmm, inst.events, fwd, 20, 3)) {
        const auto call = path_to_sequence(s.states, 4, 2);
        REQUIRE(call.event_spans.size() == s.size());
        REQUIRE(call.event_spans[0].length == 4);
        std::uint32_t next = 0;
        for (const auto& sp : call.event_spans) {
            REQUIRE(sp.offset == next);
            next += sp.length;
        }
        REQUIRE(next == call.sequence.size());
    }
}
