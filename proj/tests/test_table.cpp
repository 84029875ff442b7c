#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "lvct/datasets.hpp"
#include "lvct/table.hpp"
#include "oracles.hpp"

using namespace lvct;

namespace {

TableSet parse(const std::string& text)
{
    std::istringstream in(text);
    return parse_table_set(in, "t");
}

TableSet bundled(std::string_view name)
{
    std::istringstream in(std::string(find_dataset(name)->contents));
    return parse_table_set(in, std::string(name));
}

std::string error_of(const std::string& text)
{
    try {
        parse(text);
    } catch (const input_error& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("parse lidocaine rows")
{
    const auto s = bundled("lidocaine");
    REQUIRE(s.tables.size() == 5);
    CHECK(s.tables[0] == ContingencyTable{2, 39, 1, 43, "1"});
    CHECK(s.tables[4].y1 == 7);
    CHECK(s.tables[4].n1 == 110);
    CHECK(s.tables[4].y2 == 3);
    CHECK(s.tables[4].n2 == 106);
    CHECK(bundled("multicenter").tables.size() == 21);
}

TEST_CASE("parse errors carry row numbers")
{
    CHECK(error_of("trial,y1,n1,y2,n2\n") == "empty table set");
    CHECK(error_of("") == "empty table set");
    CHECK(error_of("trial,y1,n1,y2,n2\n1,5,3,0,4\n") == "y1 exceeds n1 at row 1");
    CHECK(error_of("trial,y1,n1,y2,n2\n1,1,3,0,4\n2,0,0,1,1\n") == "n1 is zero at row 2");
    CHECK(error_of("trial,y1,n1,y2,n2\n1,1,3,x,4\n").find("malformed row at row 1") == 0);
    CHECK(error_of("trial,y1,n1,y2,n2\n1,1,3,0\n").find("malformed row at row 1") == 0);
    CHECK(error_of("trial,y1,n1,y2,n2\n1,-1,3,0,4\n").find("at row 1") != std::string::npos);
    CHECK_FALSE(error_of("a,b,c,d,e\n1,1,3,0,4\n").empty());
    CHECK_FALSE(error_of("trial,y1,n1,y2,n2\n1,1,3,0,4\n1,1,3,0,4\n").empty());
}

TEST_CASE("parse tolerates CRLF and blank lines")
{
    const auto s = parse("trial,y1,n1,y2,n2\r\n1,1,3,0,4\r\n\r\n2,2,2,2,2\r\n");
    REQUIRE(s.tables.size() == 2);
    CHECK(s.tables[1] == ContingencyTable{2, 2, 2, 2, "2"});
}

TEST_CASE("write then parse round-trips")
{
    std::mt19937_64 gen(11);
    for (int rep = 0; rep < 50; ++rep) {
        TableSet s{"r", {}};
        const int k = 1 + int(gen() % 8);
        for (int i = 0; i < k; ++i) {
            ContingencyTable t;
            t.n1 = 1 + Count(gen() % 200);
            t.n2 = 1 + Count(gen() % 200);
            t.y1 = Count(gen() % (t.n1 + 1));
            t.y2 = Count(gen() % (t.n2 + 1));
            if (gen() % 2)
                t.label = "trial" + std::to_string(i);
            s.tables.push_back(t);
        }
        std::ostringstream out;
        write_table_set(out, s);
        const auto back = parse(out.str());
        REQUIRE(back.tables.size() == s.tables.size());
        for (std::size_t i = 0; i < s.tables.size(); ++i) {
            auto expect = s.tables[i];
            if (!expect.label)
                expect.label = std::to_string(i + 1);
            CHECK(back.tables[i] == expect);
        }
    }
}

TEST_CASE("table validation")
{
    CHECK_NOTHROW(validate(ContingencyTable{0, 1, 1, 1}));
    CHECK_THROWS_AS(validate(ContingencyTable{2, 1, 0, 1}), input_error);
    CHECK_THROWS_AS(validate(ContingencyTable{0, 0, 0, 1}), input_error);
    CHECK_THROWS_AS(validate(ContingencyTable{-1, 3, 0, 1}), input_error);
    CHECK_THROWS_AS(validate(TableSet{"e", {}}), input_error);
    CHECK(swap_arms(ContingencyTable{1, 2, 3, 4, "x"}) == ContingencyTable{3, 4, 1, 2, "x"});
}

TEST_CASE("correct_counts")
{
    CHECK(correct_counts(0, 2, 0.1) == 0.1);
    CHECK(correct_counts(3, 3, 0.1) == doctest::Approx(2.9));
    CHECK(correct_counts(1, 3, 0.1) == 1.0);
    CHECK(std::log(correct_counts(0, 2, 0.1) / 1.9) == doctest::Approx(-2.9444).epsilon(1e-4));
    CHECK(std::log(2.9 / (3 - correct_counts(3, 3, 0.1))) == doctest::Approx(3.3673).epsilon(1e-4));
}

TEST_CASE("empirical rates")
{
    auto r = empirical_rates({2, 39, 1, 43});
    CHECK(r.first == doctest::Approx(0.0512820513));
    CHECK(r.second == doctest::Approx(0.0232558140));
    r = empirical_rates({0, 2, 2, 2});
    CHECK(r.first == 0.0);
    CHECK(r.second == 1.0);
    r = empirical_rates({10, 20, 5, 10});
    CHECK(r.first == 0.5);
    CHECK(r.second == 0.5);
}

TEST_CASE("rate correlation on bundled data")
{
    CHECK(std::abs(rate_correlation(bundled("lidocaine")) - 0.9565) < 0.0005);
    CHECK(std::abs(rate_correlation(bundled("multicenter"), 0.1) - 0.0562) < 0.005);
}

TEST_CASE("rate correlation errors")
{
    TableSet one{"o", {{1, 2, 1, 2}}};
    CHECK_THROWS_AS(rate_correlation(one), std::invalid_argument);
    TableSet dup{"d", {{1, 2, 1, 3}, {1, 2, 1, 3}}};
    CHECK_THROWS_WITH_AS(rate_correlation(dup), "correlation undefined", std::domain_error);
    TableSet flat{"f", {{1, 2, 1, 3}, {2, 4, 2, 3}, {3, 6, 0, 5}}};
    CHECK_THROWS_AS(rate_correlation(flat), std::domain_error);
}

TEST_CASE("rate correlation matches a direct formula and is order and swap invariant")
{
    std::mt19937_64 gen(5);
    int checked = 0;
    for (int rep = 0; rep < 300; ++rep) {
        TableSet s{"g", {}};
        const int k = 2 + int(gen() % 10);
        std::vector<double> x, y;
        for (int i = 0; i < k; ++i) {
            ContingencyTable t;
            t.n1 = 1 + Count(gen() % 50);
            t.n2 = 1 + Count(gen() % 50);
            t.y1 = Count(gen() % (t.n1 + 1));
            t.y2 = Count(gen() % (t.n2 + 1));
            s.tables.push_back(t);
            x.push_back(double(t.y1) / double(t.n1));
            y.push_back(double(t.y2) / double(t.n2));
        }
        double r;
        try {
            r = rate_correlation(s);
        } catch (const std::domain_error&) {
            continue;
        }
        ++checked;
        CHECK(r == doctest::Approx(oracle::pearson(x, y)).epsilon(1e-9));
        CHECK(r >= -1.0);
        CHECK(r <= 1.0);

        auto shuffled = s;
        std::shuffle(shuffled.tables.begin(), shuffled.tables.end(), gen);
        CHECK(rate_correlation(shuffled) == doctest::Approx(r).epsilon(1e-12));

        auto swapped = s;
        for (auto& t : swapped.tables)
            t = swap_arms(t);
        CHECK(rate_correlation(swapped) == doctest::Approx(r).epsilon(1e-12));
    }
    CHECK(checked > 200);
}
