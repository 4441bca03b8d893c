#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>

#include "doctest.h"

#include "clubsim/config.hpp"
#include "clubsim/scenarios.hpp"

using namespace clubsim;

namespace {

const std::string kHeader =
    "region,tfp_initial,tfp_growth_initial,tfp_growth_decline,capital_initial,labor_initial,"
    "labor_asymptote,labor_convergence,carbon_intensity_initial,carbon_intensity_decline,"
    "abatement_cost_coeff,emissions_initial\n";

std::string row(const std::string& name, const std::string& capital = "10") {
    return name + ",1.0,0.01,0.01," + capital + ",100,150,0.1,0.2,-0.01,0.07,1.5\n";
}

std::string error_text(const std::string& csv) {
    try {
        parse_calibration(csv);
    } catch (const ValidationError& e) {
        return e.what();
    }
    return {};
}

RegionParams region(double emissions, double tfp) {
    RegionParams r;
    r.name = "r";
    r.tfp_initial = tfp;
    r.capital_initial = 1.0;
    r.labor_initial = 1.0;
    r.labor_asymptote = 1.0;
    r.emissions_initial = emissions;
    return r;
}

std::vector<AgentId> identity_ranking(std::size_t n) {
    std::vector<AgentId> ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = i;
    return ids;
}

}  // namespace

TEST_SUITE("scenarios") {

TEST_CASE("scenario names round-trip") {
    for (const auto s : {Scenario::none, Scenario::hc, Scenario::hc_lc}) CHECK(parse_scenario(to_string(s)) == s);
    CHECK_THROWS_AS(parse_scenario("HC"), ValidationError);
}

TEST_CASE("calibration loader") {
    SUBCASE("three rows") {
        const auto regions = parse_calibration(kHeader + row("a") + row("b") + row("c"));
        REQUIRE(regions.size() == 3);
        CHECK(regions[1].name == "b");
        CHECK(regions[2].capital_initial == 10.0);
        CHECK(regions[0].carbon_intensity_decline == -0.01);
    }

    SUBCASE("bundled file has 27 valid regions") {
        const auto regions = load_calibration(default_calibration_path());
        CHECK(regions.size() == 27);
        CHECK(validate(regions).ok());
    }

    SUBCASE("empty cell names the row and column") {
        const std::string csv = kHeader + row("a") + row("b") + row("c") + row("d") + row("e", "");
        CHECK(error_text(csv).find("row 5, column capital_initial") != std::string::npos);
    }

    SUBCASE("non-numeric cell") {
        CHECK(error_text(kHeader + row("a", "ten")).find("row 1, column capital_initial") != std::string::npos);
    }

    SUBCASE("duplicate region") {
        CHECK(error_text(kHeader + row("a") + row("a")).find("row 2, column region") != std::string::npos);
    }

    SUBCASE("missing column") {
        std::string header = kHeader;
        header.erase(header.find(",emissions_initial"));
        std::string body = row("a");
        body.erase(body.rfind(','));
        const std::string msg = error_text(header + "\n" + body + "\n");
        CHECK(msg.find("emissions_initial") != std::string::npos);
    }

    SUBCASE("columns may come in any order") {
        const auto regions = parse_calibration(
            "capital_initial,region,tfp_initial,tfp_growth_initial,tfp_growth_decline,labor_initial,"
            "labor_asymptote,labor_convergence,carbon_intensity_initial,carbon_intensity_decline,"
            "abatement_cost_coeff,emissions_initial\n"
            "7,a,1.0,0.01,0.01,100,150,0.1,0.2,-0.01,0.07,1.5\n");
        CHECK(regions.at(0).capital_initial == 7.0);
    }

    SUBCASE("out-of-range values") {
        CHECK_THROWS_AS(parse_calibration(kHeader + row("a", "-1")), ValidationError);
    }

    SUBCASE("unreadable file") {
        CHECK_THROWS(load_calibration("/nonexistent/regions.csv"));
    }
}

TEST_CASE("ranking") {
    SUBCASE("identical agents keep id order") {
        const std::vector<RegionParams> same(6, region(1.0, 1.0));
        CHECK(rank_regions(same) == identity_ranking(6));
    }

    SUBCASE("dominant agent first") {
        std::vector<RegionParams> r{region(1, 1), region(2, 2), region(9, 9), region(0.5, 3)};
        CHECK(rank_regions(r).front() == 2);
    }

    SUBCASE("balanced scores tie") {
        // Output of region(_, tfp) is tfp * 1^0.3 * 1^0.7 = tfp.
        std::vector<RegionParams> r{region(10, 0), region(5, 5), region(0, 10)};
        const auto scores = ranking_scores(r);
        for (const auto& s : scores) CHECK(s.composite_score == doctest::Approx(0.5));
        CHECK(rank_regions(r) == std::vector<AgentId>{0, 1, 2});
    }

    SUBCASE("affine rescaling of emissions leaves the ranking unchanged") {
        auto regions = load_calibration(default_calibration_path());
        const auto before = rank_regions(regions);
        for (auto& r : regions) r.emissions_initial = 3.7 * r.emissions_initial + 10.0;
        CHECK(rank_regions(regions) == before);
    }

    SUBCASE("ranking is a permutation") {
        std::mt19937_64 rng(1);
        std::uniform_real_distribution<double> u(0.0, 5.0);
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<RegionParams> r;
            for (int i = 0; i < 1 + trial % 30; ++i) r.push_back(region(u(rng), u(rng)));
            auto ranking = rank_regions(r);
            std::sort(ranking.begin(), ranking.end());
            CHECK(ranking == identity_ranking(r.size()));
        }
    }

    SUBCASE("bundled top five") {
        const auto regions = load_calibration(default_calibration_path());
        const auto ranking = rank_regions(regions);
        std::set<std::string> top;
        for (std::size_t k = 0; k < 5; ++k) top.insert(regions[ranking[k]].name);
        CHECK(top == std::set<std::string>{"china", "united_states", "european_union", "india", "japan"});
    }
}

TEST_CASE("high-carbon initializer") {
    std::vector<AgentId> ranking = identity_ranking(27);
    std::mt19937_64 shuffler(99);
    std::shuffle(ranking.begin(), ranking.end(), shuffler);

    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        std::mt19937_64 rng(seed);
        const auto groups = init_hc(ranking, rng);
        REQUIRE(groups.size() == 27);
        for (std::size_t k = 0; k < 5; ++k) CHECK(groups[ranking[k]] == 1);
        for (std::size_t k = 5; k < 27; ++k) {
            CHECK(groups[ranking[k]] >= 2);
            CHECK(groups[ranking[k]] <= 5);
        }
    }

    std::mt19937_64 a(7), b(7), c(8);
    const auto ga = init_hc(ranking, a);
    CHECK(ga == init_hc(ranking, b));
    CHECK(ga != init_hc(ranking, c));

    std::mt19937_64 rng(0);
    CHECK_THROWS_AS(init_hc(identity_ranking(8), rng), ValidationError);
    CHECK_NOTHROW(init_hc(identity_ranking(9), rng));
}

TEST_CASE("mixed initializer") {
    std::vector<AgentId> ranking = identity_ranking(27);
    std::mt19937_64 shuffler(3);
    std::shuffle(ranking.begin(), ranking.end(), shuffler);

    const auto groups = init_hc_lc(ranking);
    std::map<GroupId, int> sizes;
    for (const auto g : groups) ++sizes[g];
    CHECK(sizes == std::map<GroupId, int>{{1, 6}, {2, 6}, {3, 5}, {4, 5}, {5, 5}});

    std::set<GroupId> top_groups;
    for (std::size_t k = 0; k < 5; ++k) {
        CHECK(groups[ranking[k]] == static_cast<GroupId>(k + 1));
        top_groups.insert(groups[ranking[k]]);
    }
    CHECK(top_groups.size() == 5);
    CHECK(groups[ranking[5]] == 1);
    CHECK(groups[ranking[6]] == 2);
    CHECK(init_hc_lc(ranking) == groups);

    CHECK(init_hc_lc(identity_ranking(5)) == std::vector<GroupId>{1, 2, 3, 4, 5});
    CHECK_THROWS_AS(init_hc_lc(identity_ranking(4)), ValidationError);

    SUBCASE("sizes stay balanced for any N") {
        for (std::size_t n = 5; n < 60; ++n) {
            std::map<GroupId, int> s;
            for (const auto g : init_hc_lc(identity_ranking(n))) ++s[g];
            int lo = 1 << 30, hi = 0;
            for (const auto& [g, c] : s) {
                lo = std::min(lo, c);
                hi = std::max(hi, c);
            }
            CHECK(hi - lo <= 1);
        }
    }
}

}
