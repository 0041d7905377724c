#include "ensembleseed/error.hpp"
#include "ensembleseed/pore_model.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace ensembleseed;

namespace {

PoreModel flat_model(int k, double mu, double sigma) {
    return PoreModel(k, std::vector<KmerLevel>(kmer_count(k), KmerLevel{mu, sigma}));
}

std::string pore_tsv(int k, std::size_t skip = ~std::size_t{0}, bool duplicate = false) {
    std::ostringstream ss;
    ss << "kmer\tmu\tsigma\n";
    for (std::size_t i = 0; i < kmer_count(k); ++i) {
        if (i == skip) continue;
        ss << decode_kmer(static_cast<KmerCode>(i), k) << '\t' << 50.0 + i * 0.1 << "\t1.5\n";
    }
    if (duplicate) {
        ss << decode_kmer(3, k) << "\t60\t1\n";
    }
    return ss.str();
}

}  // namespace

TEST_CASE("emission density matches the closed-form Gaussian") {
    const auto pore = flat_model(1, 100.0, 2.0);
    const ReadScaling unit{1.0, 0.0, 1.0};
    // 1 / (2 sqrt(2 pi)) evaluated at the mean
    CHECK(emission_log_density(pore, 0, {100.0}, unit) ==
          doctest::Approx(std::log(1.0 / (2.0 * std::sqrt(2.0 * std::numbers::pi)))));
    CHECK(emission_log_density(pore, 0, {100.0}, unit) == doctest::Approx(-1.61209).epsilon(1e-5));
    CHECK(emission_log_density(pore, 0, {102.0}, unit) ==
          emission_log_density(pore, 0, {98.0}, unit));

    const auto pore2 = flat_model(1, 50.0, 1.0);
    const ReadScaling scaled{2.0, 5.0, 3.0};
    CHECK(emission_log_density(pore2, 2, {105.0}, scaled) ==
          doctest::Approx(std::log(1.0 / (3.0 * std::sqrt(2.0 * std::numbers::pi)))));
    CHECK(emission_log_density(pore2, 2, {105.0}, scaled) ==
          doctest::Approx(-2.01755).epsilon(1e-5));
}

TEST_CASE("emission density peaks at scale * mu + shift") {
    const auto pore = synthetic_pore_model(3, 7);
    const ReadScaling sc{1.05, -2.0, 1.3};
    for (KmerCode s = 0; s < pore.size(); s += 5) {
        const double peak = sc.scale * pore.level(s).mu + sc.shift;
        const double at_peak = emission_log_density(pore, s, {peak}, sc);
        for (double d = -5.0; d <= 5.0; d += 0.25) {
            if (d == 0.0) continue;
            REQUIRE(emission_log_density(pore, s, {peak + d}, sc) < at_peak);
        }
    }
}

TEST_CASE("unknown k-mer lookup fails") {
    const auto pore = flat_model(2, 60.0, 1.0);
    CHECK_THROWS_AS(emission_log_density(pore, 16, {60.0}, {}), ArgumentError);
}

TEST_CASE("pore model construction validates the table") {
    CHECK_THROWS_AS(PoreModel(2, std::vector<KmerLevel>(15)), ArgumentError);
    std::vector<KmerLevel> levels(16, KmerLevel{60.0, 1.0});
    levels[4].sigma = 0.0;
    CHECK_THROWS_AS(PoreModel(2, levels), ArgumentError);
    CHECK_THROWS_AS(KmerStateSpace(0), ArgumentError);
    CHECK(KmerStateSpace(5).size() == 1024);
}

TEST_CASE("pore model TSV loads a complete k=5 table") {
    std::istringstream in(pore_tsv(5));
    const auto pore = read_pore_model(in);
    CHECK(pore.k() == 5);
    CHECK(pore.size() == 1024);
    CHECK(pore.level(10).mu == doctest::Approx(51.0));

    std::ostringstream out;
    write_pore_model(out, pore);
    std::istringstream back(out.str());
    const auto again = read_pore_model(back);
    for (std::size_t i = 0; i < pore.size(); ++i) {
        REQUIRE(again.levels()[i].mu == pore.levels()[i].mu);
        REQUIRE(again.levels()[i].sigma == pore.levels()[i].sigma);
    }
}

TEST_CASE("pore model TSV errors") {
    SUBCASE("missing AAAAA") {
        std::istringstream in(pore_tsv(5, 0));
        CHECK_THROWS_WITH_AS(read_pore_model(in), doctest::Contains("AAAAA"), ParseError);
    }
    SUBCASE("duplicate row") {
        std::istringstream in(pore_tsv(5, ~std::size_t{0}, true));
        CHECK_THROWS_WITH_AS(read_pore_model(in), doctest::Contains("duplicate"), ParseError);
    }
    SUBCASE("non-positive sigma") {
        std::istringstream in("kmer\tmu\tsigma\nA\t1\t1\nC\t1\t0\nG\t1\t1\nT\t1\t1\n");
        CHECK_THROWS_AS(read_pore_model(in), ParseError);
    }
    SUBCASE("bad header") {
        std::istringstream in("kmer\tmean\tsd\nA\t1\t1\n");
        CHECK_THROWS_AS(read_pore_model(in), ParseError);
    }
}

TEST_CASE("events JSON lines") {
    SUBCASE("one read with three events") {
        std::istringstream in(
            R"({"read_id": "r1", "scale": 1.1, "shift": -2, "var": 1.3, "events": [50.5, 61, 70.25]})"
            "\n");
        const auto reads = read_events(in);
        REQUIRE(reads.size() == 1);
        CHECK(reads[0].read_id == "r1");
        CHECK(reads[0].size() == 3);
        CHECK(reads[0].events[2].mean == 70.25);
        CHECK(reads[0].scaling.var == 1.3);
    }
    SUBCASE("empty events array is rejected") {
        std::istringstream in(
            R"({"read_id": "r1", "scale": 1, "shift": 0, "var": 1, "events": []})"
            "\n");
        CHECK_THROWS_AS(read_events(in), ParseError);
    }
    SUBCASE("malformed line") {
        std::istringstream in("{\"read_id\": \"r1\", \"scale\": \n");
        CHECK_THROWS_AS(read_events(in), ParseError);
    }
    SUBCASE("non-positive var") {
        std::istringstream in(
            R"({"read_id": "r1", "scale": 1, "shift": 0, "var": 0, "events": [1]})"
            "\n");
        CHECK_THROWS_AS(read_events(in), ParseError);
    }
    SUBCASE("write then read preserves everything") {
        std::vector<EventSequence> reads(2);
        reads[0] = {"a", {0.93, 1.5, 1.01}, {{1.0 / 3.0}, {65.125}}};
        reads[1] = {"b", {1.0, 0.0, 1.0}, {{-0.1}}};
        std::ostringstream out;
        write_events(out, reads);
        std::istringstream in(out.str());
        const auto back = read_events(in);
        REQUIRE(back.size() == 2);
        for (std::size_t r = 0; r < 2; ++r) {
            CHECK(back[r].read_id == reads[r].read_id);
            CHECK(back[r].scaling.scale == reads[r].scaling.scale);
            CHECK(back[r].scaling.shift == reads[r].scaling.shift);
            CHECK(back[r].scaling.var == reads[r].scaling.var);
            REQUIRE(back[r].size() == reads[r].size());
            for (std::size_t i = 0; i < back[r].size(); ++i) {
                CHECK(back[r].events[i].mean == reads[r].events[i].mean);
            }
        }
    }
}
