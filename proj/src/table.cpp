#include "lvct/table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string_view>

namespace lvct {

namespace {

constexpr std::string_view kHeader = "trial,y1,n1,y2,n2";

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::string at_row(std::size_t row)
{
    return " at row " + std::to_string(row);
}

std::vector<std::string_view> split_fields(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        auto pos = line.find(',', start);
        out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

std::optional<Count> parse_count(std::string_view field)
{
    Count value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size() || value < 0)
        return std::nullopt;
    return value;
}

void check_arm(Count y, Count n, int arm, const std::string& where)
{
    const auto a = std::to_string(arm);
    if (n < 1)
        throw input_error("n" + a + " is zero" + where);
    if (y < 0)
        throw input_error("y" + a + " is negative" + where);
    if (y > n)
        throw input_error("y" + a + " exceeds n" + a + where);
}

}  // namespace

void validate(const ContingencyTable& t)
{
    const std::string where = t.label ? " in table '" + *t.label + "'" : std::string{};
    check_arm(t.y1, t.n1, 1, where);
    check_arm(t.y2, t.n2, 2, where);
}

ContingencyTable swap_arms(const ContingencyTable& t)
{
    return {t.y2, t.n2, t.y1, t.n1, t.label};
}

void validate(const TableSet& s)
{
    if (s.tables.empty())
        throw input_error("empty table set");
    std::set<std::string> seen;
    for (const auto& t : s.tables) {
        validate(t);
        if (t.label && !seen.insert(*t.label).second)
            throw input_error("duplicate label '" + *t.label + "'");
    }
}

TableSet parse_table_set(std::istream& in, std::string name)
{
    TableSet out;
    out.name = std::move(name);

    std::string line;
    bool have_header = false;
    std::size_t row = 0;
    std::set<std::string> seen;
    while (std::getline(in, line)) {
        auto view = trim(line);
        if (view.empty())
            continue;
        if (!have_header) {
            if (view != kHeader)
                throw input_error("missing header '" + std::string(kHeader) + "'");
            have_header = true;
            continue;
        }
        ++row;
        const auto where = at_row(row);
        auto fields = split_fields(view);
        if (fields.size() != 5 || fields[0].empty())
            throw input_error("malformed row" + where);

        Count v[4];
        for (int i = 0; i < 4; ++i) {
            auto c = parse_count(fields[i + 1]);
            if (!c)
                throw input_error("malformed row" + where);
            v[i] = *c;
        }
        ContingencyTable t{v[0], v[1], v[2], v[3], std::string(fields[0])};
        check_arm(t.y1, t.n1, 1, where);
        check_arm(t.y2, t.n2, 2, where);
        if (!seen.insert(*t.label).second)
            throw input_error("duplicate trial '" + *t.label + "'" + where);
        out.tables.push_back(std::move(t));
    }
    if (out.tables.empty())
        throw input_error("empty table set");
    return out;
}

TableSet load_table_set(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw input_error("cannot open '" + path + "'");
    auto name = path;
    if (auto slash = name.find_last_of('/'); slash != std::string::npos)
        name = name.substr(slash + 1);
    if (auto dot = name.rfind('.'); dot != std::string::npos && dot > 0)
        name = name.substr(0, dot);
    return parse_table_set(in, name);
}

void write_table_set(std::ostream& out, const TableSet& s)
{
    out << kHeader << '\n';
    for (std::size_t i = 0; i < s.tables.size(); ++i) {
        const auto& t = s.tables[i];
        out << (t.label ? *t.label : std::to_string(i + 1)) << ',' << t.y1 << ',' << t.n1 << ','
            << t.y2 << ',' << t.n2 << '\n';
    }
}

double correct_counts(Count y, Count n, double epsilon)
{
    if (y == 0)
        return epsilon;
    if (y == n)
        return static_cast<double>(n) - epsilon;
    return static_cast<double>(y);
}

std::pair<double, double> empirical_rates(const ContingencyTable& t, double epsilon)
{
    if (epsilon > 0.0)
        return {correct_counts(t.y1, t.n1, epsilon) / static_cast<double>(t.n1),
                correct_counts(t.y2, t.n2, epsilon) / static_cast<double>(t.n2)};
    return {static_cast<double>(t.y1) / static_cast<double>(t.n1),
            static_cast<double>(t.y2) / static_cast<double>(t.n2)};
}

std::optional<double> pearson_correlation(std::span<const double> x, std::span<const double> y)
{
    const auto n = x.size();
    if (n < 2 || y.size() != n)
        return std::nullopt;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    // Relative threshold: constant inputs leave only rounding residue.
    const double scale_x = std::max(std::abs(mx), 1.0);
    const double scale_y = std::max(std::abs(my), 1.0);
    if (sxx <= 1e-28 * scale_x * scale_x * n || syy <= 1e-28 * scale_y * scale_y * n)
        return std::nullopt;
    const double r = sxy / std::sqrt(sxx * syy);
    return std::clamp(r, -1.0, 1.0);
}

double rate_correlation(const TableSet& s, double epsilon)
{
    if (s.tables.size() < 2)
        throw std::invalid_argument("rate correlation needs at least 2 tables");
    std::vector<double> r1, r2;
    r1.reserve(s.tables.size());
    r2.reserve(s.tables.size());
    for (const auto& t : s.tables) {
        auto [a, b] = empirical_rates(t, epsilon);
        r1.push_back(a);
        r2.push_back(b);
    }
    auto r = pearson_correlation(r1, r2);
    if (!r)
        throw std::domain_error("correlation undefined");
    return *r;
}

}  // namespace lvct
