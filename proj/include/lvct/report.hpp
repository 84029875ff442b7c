#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lvct/gem.hpp"
#include "lvct/inference.hpp"
#include "lvct/simulation.hpp"

namespace lvct {

inline constexpr const char* kToolVersion = "1.0.0";

nlohmann::ordered_json to_json(const FitResult& r);
nlohmann::ordered_json to_json(const PooledResult& r);
nlohmann::ordered_json to_json(const FitConfig& c);
nlohmann::ordered_json to_json(const GeneratorConfig& c);

/// {"dataset", "tables": [FitResult...], "combined": PooledResult | null}.
nlohmann::ordered_json fit_report_json(const std::string& dataset, const std::vector<FitResult>& fits,
                                       const PooledResult* combined);

/// Aligned columns in the layout alpha1(se) alpha2(se) pi1 pi2 logOR(se) T result,
/// numbers rounded to 4 decimals.
std::string fit_report_table(const std::vector<FitResult>& fits, const PooledResult* combined);

/// One row per table plus a `combined` row, full precision.
std::string fit_report_csv(const std::vector<FitResult>& fits, const PooledResult* combined);

nlohmann::ordered_json correlation_summary_json(const GeneratorConfig& c,
                                                const CorrelationStudyResult& r);
/// replication,correlation; undefined replications leave the value empty.
std::string correlation_data_csv(const GeneratorConfig& c, const CorrelationStudyResult& r);

nlohmann::ordered_json performance_summary_json(const GeneratorConfig& c, const FitConfig& f,
                                                const PerformanceStudyResult& r);
/// One row per replication with the pooled estimates.
std::string performance_data_csv(const PerformanceStudyResult& r);

/// Lower-case hex SHA-256 of the bytes.
std::string sha256_hex(std::string_view bytes);

/// Everything needed to replay a run.
nlohmann::ordered_json run_manifest(const std::string& command, const nlohmann::ordered_json& config,
                                    std::uint64_t seed, std::string_view input_bytes);

/// Fixed-point rendering with `digits` decimals, without a negative zero.
std::string format_fixed(double v, int digits = 4);

}  // namespace lvct
