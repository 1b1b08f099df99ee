#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>

#include "oracles.hpp"
#include "test_support.hpp"

using namespace geosocial;
using namespace oracles;
using namespace testing_support;

TEST(BuildGazetteer, AricaExampleEntries) {
    const auto g = build_gazetteer(arica_units());
    for (const char* key : {"arica", "arica, chile", "arica de chile", "arica y parinacota", "chile"})
        EXPECT_TRUE(g.find(key)) << key;
    EXPECT_EQ(g.find("arica")->level, AdminLevel::commune);
    EXPECT_EQ(g.find("arica")->unit_id, 15101);
    EXPECT_EQ(g.find("arica, arica y parinacota")->level, AdminLevel::province);
    EXPECT_EQ(g.find("chile")->level, AdminLevel::country);
}

TEST(BuildGazetteer, CountryOnly) {
    const auto g = build_gazetteer({{1, "Chile", AdminLevel::country, std::nullopt, std::nullopt}});
    ASSERT_EQ(g.entries().size(), 1u);
    EXPECT_EQ(g.entries().begin()->first, "chile");
    EXPECT_EQ(g.entries().begin()->second.level, AdminLevel::country);
}

TEST(BuildGazetteer, RejectsMalformedTrees) {
    EXPECT_THROW(build_gazetteer({}), BuildError);
    EXPECT_THROW(build_gazetteer({{1, "Chile", AdminLevel::country, std::nullopt, std::nullopt},
                                  {2, "Peru", AdminLevel::country, std::nullopt, std::nullopt}}),
                 BuildError);
    EXPECT_THROW(build_gazetteer({{1, "Chile", AdminLevel::country, std::nullopt, std::nullopt},
                                  {15, "Arica y Parinacota", AdminLevel::region, 99, std::nullopt}}),
                 BuildError);
    EXPECT_THROW(build_gazetteer({{1, "Chile", AdminLevel::country, std::nullopt, std::nullopt},
                                  {15101, "Arica", AdminLevel::commune, 1, std::nullopt}}),
                 BuildError);
    EXPECT_THROW(build_gazetteer({{1, "", AdminLevel::country, std::nullopt, std::nullopt}}), BuildError);
}

TEST(BuildGazetteer, FullHierarchyIsOnTheExpectedScale) {
    const auto units = chile_units();
    std::size_t regions = 0, communes = 0;
    for (const auto& u : units) {
        regions += u.level == AdminLevel::region;
        communes += u.level == AdminLevel::commune;
    }
    EXPECT_EQ(regions, 15u);
    EXPECT_GE(communes, 300u);
    const auto g = build_gazetteer(units);
    EXPECT_GT(g.entries().size(), 1000u);
    EXPECT_LT(g.entries().size(), 4000u);
}

TEST(BuildGazetteer, CollisionPrefersMostSpecificThenPopulationThenId) {
    const std::vector<AdminUnit> units = {
        {1, "Chile", AdminLevel::country, std::nullopt, std::nullopt},
        {10, "Valle", AdminLevel::region, 1, 500},
        {100, "Valle", AdminLevel::province, 10, std::nullopt},
        {1000, "Rio", AdminLevel::commune, 100, 10},
        {1001, "Rio", AdminLevel::commune, 100, 20},
        {1002, "Lago", AdminLevel::commune, 100, std::nullopt},
        {1003, "Lago", AdminLevel::commune, 100, std::nullopt},
    };
    const auto g = build_gazetteer(units);
    EXPECT_EQ(g.find("valle")->unit_id, 100);      // province beats region
    EXPECT_EQ(g.find("valle, chile")->unit_id, 100);
    EXPECT_EQ(g.find("rio")->unit_id, 1001);       // larger population
    EXPECT_EQ(g.find("lago")->unit_id, 1002);      // lower id
}

TEST(BuildGazetteer, AliasesOverrideTemplates) {
    const auto g = build_gazetteer(arica_units(), {{"Arica", 15}, {"  AYP  ", 15}});
    EXPECT_EQ(g.find("arica")->unit_id, 15);
    EXPECT_EQ(g.find("arica")->level, AdminLevel::region);
    EXPECT_EQ(g.find("ayp")->unit_id, 15);
    EXPECT_THROW(build_gazetteer(arica_units(), {{"x", 999}}), BuildError);
}

TEST(BuildGazetteer, FixtureAliasFileLoads) {
    const auto g = build_gazetteer(chile_units(), load_aliases_csv(data_file("aliases.csv")));
    const auto hit = resolve_location(g, "Stgo");
    ASSERT_EQ(hit.outcome, LocationOutcome::resolved);
    EXPECT_EQ(g.unit(hit.entry->unit_id).name, "Santiago");
}

TEST(ResolveLocation, Examples) {
    const auto g = build_gazetteer(chile_units());
    EXPECT_EQ(resolve_location(g, "").outcome, LocationOutcome::empty_location);
    EXPECT_EQ(resolve_location(g, "   \t").outcome, LocationOutcome::empty_location);
    const auto santiago = resolve_location(g, "Santiago, Chile");
    ASSERT_EQ(santiago.outcome, LocationOutcome::resolved);
    EXPECT_EQ(santiago.entry->level, AdminLevel::commune);
    EXPECT_EQ(g.unit(santiago.entry->unit_id).name, "Santiago");
    EXPECT_EQ(resolve_location(g, "mi casa 😀").outcome, LocationOutcome::undetermined);
}

TEST(ResolveLocation, NormalizesCaseAccentsAndWhitespace) {
    const auto g = build_gazetteer(chile_units());
    const auto a = resolve_location(g, "  VALPARAÍSO,   chile ");
    const auto b = resolve_location(g, "valparaiso, chile");
    EXPECT_EQ(a.outcome, LocationOutcome::resolved);
    EXPECT_EQ(a, b);
}

TEST(ResolveLocation, NoSubstringMatching) {
    const auto g = build_gazetteer(chile_units());
    EXPECT_EQ(resolve_location(g, "vivo en santiago").outcome, LocationOutcome::undetermined);
}

TEST(GazetteerProperties, EveryKeyRoundTrips) {
    const auto g = build_gazetteer(chile_units(), load_aliases_csv(data_file("aliases.csv")));
    for (const auto& [key, entry] : g.entries()) {
        const auto r = resolve_location(g, key);
        ASSERT_EQ(r.outcome, LocationOutcome::resolved) << key;
        EXPECT_EQ(*r.entry, entry);
    }
}

TEST(GazetteerProperties, TemplateStringsResolveToMostSpecificParticipant) {
    const auto units = chile_units();
    std::map<UnitId, AdminUnit> by_id;
    for (const auto& u : units) by_id[u.unit_id] = u;
    const auto g = build_gazetteer(units);

    std::map<std::string, std::vector<UnitId>> generators;
    for (const auto& s : template_strings(units)) generators[toponym_key(s.text)].push_back(s.unit);

    for (const auto& [key, ids] : generators) {
        const auto r = resolve_location(g, key);
        ASSERT_EQ(r.outcome, LocationOutcome::resolved) << key;
        AdminLevel best = AdminLevel::country;
        for (const auto id : ids) best = std::min(best, by_id.at(id).level);
        EXPECT_EQ(r.entry->level, best) << key;
        EXPECT_NE(std::find(ids.begin(), ids.end(), r.entry->unit_id), ids.end()) << key;
        const std::string name = toponym_key(by_id.at(r.entry->unit_id).name);
        EXPECT_NE(key.find(name), std::string::npos) << key;
    }
}

TEST(GazetteerProperties, StableAcrossRebuilds) {
    const auto a = build_gazetteer(chile_units());
    const auto b = build_gazetteer(chile_units());
    EXPECT_EQ(a.entries(), b.entries());
}

TEST(RegionAssignment, RollsUpToRegion) {
    const auto g = build_gazetteer(arica_units());
    const std::vector<GeoResolution> rs = {resolve_location(g, "Arica", 1), resolve_location(g, "Arica, Arica y Parinacota", 2),
                                           resolve_location(g, "Chile", 3), resolve_location(g, "", 4),
                                           resolve_location(g, "lejos", 5)};
    EXPECT_EQ(region_assignment(g, rs), (RegionAssignment{{1, 15}, {2, 15}}));
}

TEST(CoverageTable, HandCountedFixture) {
    Corpus c;
    add_tweet(c, 1, 1, 0, "a");
    add_tweet(c, 2, 1, 1, "b");
    add_tweet(c, 3, 2, 2, "c");
    add_tweet(c, 4, 3, 3, "d");
    c.users[4] = UserProfile{4, "u4", "", "", "", {}};
    const std::vector<GeoResolution> rs = {{1, LocationOutcome::resolved, GazetteerEntry{15101, AdminLevel::commune}},
                                           {2, LocationOutcome::resolved, GazetteerEntry{15101, AdminLevel::commune}},
                                           {3, LocationOutcome::undetermined, std::nullopt},
                                           {4, LocationOutcome::empty_location, std::nullopt}};
    const auto rows = coverage_table(rs, c);
    ASSERT_EQ(rows.size(), 5u);
    EXPECT_EQ(rows[0].label, "commune");
    EXPECT_EQ(rows[0].users, 2u);
    EXPECT_DOUBLE_EQ(rows[0].user_share, 0.5);
    EXPECT_EQ(rows[0].tweets, 3u);
    EXPECT_DOUBLE_EQ(rows[0].tweet_share, 0.75);
    EXPECT_EQ(rows[4].label, "undetermined");
    EXPECT_EQ(rows[4].users, 2u);
    EXPECT_EQ(rows[4].tweets, 1u);
}

TEST(CoverageTable, AllCountryAndSharesSumToOne) {
    Corpus c;
    std::vector<GeoResolution> rs;
    for (UserId u = 1; u <= 7; ++u) {
        add_tweet(c, u, u, u, "x");
        rs.push_back({u, LocationOutcome::resolved, GazetteerEntry{1, AdminLevel::country}});
    }
    const auto rows = coverage_table(rs, c);
    EXPECT_DOUBLE_EQ(rows[3].user_share, 1.0);
    double total = 0.0;
    for (const auto& r : rows) total += r.user_share;
    EXPECT_NEAR(total, 1.0, 1e-9);
}

TEST(Pearson, ExactLogLinearRelations) {
    std::vector<std::pair<double, double>> sq, inv;
    for (double a : {2.0, 4.0, 8.0, 16.0}) {
        sq.emplace_back(a, a * a);
        inv.emplace_back(a, 1.0 / a);
    }
    EXPECT_NEAR(pearson_log_correlation(sq), 1.0, 1e-12);
    EXPECT_NEAR(pearson_log_correlation(inv), -1.0, 1e-12);
}

TEST(Pearson, MatchesIndependentFormulaOnNoisyFixture) {
    std::mt19937_64 rng(2012);
    std::uniform_real_distribution<double> noise(0.5, 1.5);
    std::vector<std::pair<double, double>> pairs;
    for (const auto& u : chile_units())
        if (u.level == AdminLevel::region) pairs.emplace_back(double(*u.population), *u.population * 0.01 * noise(rng));
    ASSERT_EQ(pairs.size(), 15u);
    EXPECT_NEAR(pearson_log_correlation(pairs), pearson_oracle(pairs), 1e-12);
}

TEST(Pearson, Errors) {
    EXPECT_THROW(pearson_log_correlation({{1.0, 2.0}}), DomainError);
    EXPECT_THROW(pearson_log_correlation({{1.0, 2.0}, {0.0, 3.0}}), DomainError);
    EXPECT_THROW(pearson_log_correlation({{1.0, 2.0}, {3.0, -1.0}}), DomainError);
    EXPECT_THROW(pearson_log_correlation({{5.0, 2.0}, {5.0, 3.0}}), DomainError);
}
