#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lvct {

using Count = std::int64_t;

/// Raised for malformed or invariant-violating input data.
class input_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One 2x2 table summarized as successes and totals for two arms.
struct ContingencyTable {
    Count y1 = 0;
    Count n1 = 1;
    Count y2 = 0;
    Count n2 = 1;
    std::optional<std::string> label;

    friend bool operator==(const ContingencyTable&, const ContingencyTable&) = default;
};

/// Throws input_error unless 0 <= y <= n and n >= 1 in both arms.
void validate(const ContingencyTable& t);

/// Swaps arm 1 and arm 2, keeping the label.
ContingencyTable swap_arms(const ContingencyTable& t);

struct TableSet {
    std::string name;
    std::vector<ContingencyTable> tables;
};

/// Non-empty, every table valid, labels unique where present.
void validate(const TableSet& s);

/// Reads `trial,y1,n1,y2,n2` text. Errors carry the 1-based data row number.
TableSet parse_table_set(std::istream& in, std::string name);
TableSet load_table_set(const std::string& path);

/// Writes the same format parse_table_set reads. Unlabelled tables are
/// written with their 1-based position as the trial column.
void write_table_set(std::ostream& out, const TableSet& s);

/// Degenerate-cell correction: 0 -> epsilon, n -> n - epsilon, otherwise y.
double correct_counts(Count y, Count n, double epsilon);

/// (y1/n1, y2/n2). With epsilon > 0 the counts are corrected first.
std::pair<double, double> empirical_rates(const ContingencyTable& t, double epsilon = 0.0);

/// Sample Pearson correlation; nullopt when either coordinate has zero variance.
std::optional<double> pearson_correlation(std::span<const double> x, std::span<const double> y);

/// Correlation across tables of arm-1 rates against arm-2 rates.
/// Throws std::invalid_argument for fewer than 2 tables and
/// std::domain_error("correlation undefined") on zero variance.
double rate_correlation(const TableSet& s, double epsilon = 0.0);

}  // namespace lvct
