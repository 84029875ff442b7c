#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "lvct/datasets.hpp"
#include "lvct/report.hpp"

using namespace lvct;

TEST_CASE("format_fixed")
{
    CHECK(format_fixed(-2.68649) == "-2.6865");
    CHECK(format_fixed(-0.00001) == "0.0000");
    CHECK(format_fixed(0.5, 2) == "0.50");
}

TEST_CASE("sha256")
{
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("fit report layouts")
{
    std::istringstream in(std::string(find_dataset("lidocaine")->contents));
    const auto s = parse_table_set(in, "lidocaine");
    FitConfig c;
    c.estimator = Estimator::quadrature;
    const auto fits = fit_table_set(s, c, 1);
    const auto pooled = pool_fits(fits, s);

    const auto j = fit_report_json(s.name, fits, &pooled);
    CHECK(j["dataset"] == "lidocaine");
    REQUIRE(j["tables"].size() == 5);
    for (const char* key : {"label", "alpha1_hat", "alpha2_hat", "sigma2_hat", "pi1_hat", "pi2_hat",
                            "se_alpha1", "se_alpha2", "log_or", "se_log_or", "t_stat", "reject",
                            "iters", "delta_bar", "diagnostics"})
        CHECK(j["tables"][0].contains(key));
    CHECK(j["tables"][0]["diagnostics"].is_null());
    CHECK(j["combined"]["k"] == 5);
    CHECK(fit_report_json(s.name, fits, nullptr)["combined"].is_null());

    const auto table = fit_report_table(fits, &pooled);
    std::istringstream lines(table);
    std::string line;
    std::vector<std::string> rows;
    while (std::getline(lines, line))
        rows.push_back(line);
    REQUIRE(rows.size() == 7);
    CHECK(rows[0].rfind("Trial", 0) == 0);
    CHECK(rows[6].rfind("Combined", 0) == 0);
    CHECK(rows[6].find("-2.6865") != std::string::npos);
    for (const auto& r : rows)
        CHECK(r.size() == rows[0].size());

    const auto csv = fit_report_csv(fits, &pooled);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
    CHECK(csv.find("\ncombined,") != std::string::npos);
}

TEST_CASE("manifest")
{
    const auto m = run_manifest("lvct fit x.csv", {{"a", 1}}, 9, "abc");
    CHECK(m["seed"] == 9);
    CHECK(m["input_sha256"] == sha256_hex("abc"));
    CHECK(m["tool_version"] == kToolVersion);
    CHECK(run_manifest("lvct simulate", {}, 0, {})["input_sha256"].is_null());
}

TEST_CASE("bundled datasets")
{
    CHECK(bundled_datasets().size() == 2);
    CHECK(find_dataset("lidocaine") != nullptr);
    CHECK(find_dataset("nope") == nullptr);
    CHECK(find_dataset("multicenter")->contents.rfind("trial,y1,n1,y2,n2\n", 0) == 0);
}
