#include "lvct/report.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

namespace lvct {

using json = nlohmann::ordered_json;

std::string format_fixed(double v, int digits)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    std::string s(buf);
    // "-0.0000" reads as a sign the value does not carry.
    if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos)
        s.erase(0, 1);
    return s;
}

json to_json(const FitResult& r)
{
    json j;
    j["label"] = r.label;
    j["alpha1_hat"] = r.alpha1_hat;
    j["alpha2_hat"] = r.alpha2_hat;
    j["sigma2_hat"] = r.sigma2_hat;
    j["pi1_hat"] = r.pi1_hat;
    j["pi2_hat"] = r.pi2_hat;
    j["se_alpha1"] = r.se_alpha1;
    j["se_alpha2"] = r.se_alpha2;
    j["log_or"] = r.log_or;
    j["se_log_or"] = r.se_log_or;
    j["t_stat"] = r.t_stat;
    j["reject"] = r.reject;
    j["iters"] = r.iters;
    j["converged"] = r.converged;
    j["delta_bar"] = r.delta_bar;
    if (r.diagnostics)
        j["diagnostics"] = {{"acceptance_rate", r.diagnostics->acceptance_rate},
                            {"step", r.diagnostics->step},
                            {"samples", r.diagnostics->samples}};
    else
        j["diagnostics"] = nullptr;
    return j;
}

json to_json(const PooledResult& r)
{
    json j;
    j["alpha1_hat"] = r.alpha1_hat;
    j["alpha2_hat"] = r.alpha2_hat;
    j["sigma2_hat"] = r.sigma2_hat;
    j["pi1_hat"] = r.pi1_hat;
    j["pi2_hat"] = r.pi2_hat;
    j["se_alpha1"] = r.se_alpha1;
    j["se_alpha2"] = r.se_alpha2;
    j["log_or"] = r.log_or;
    j["se_log_or"] = r.se_log_or;
    j["t_stat"] = r.t_stat;
    j["reject"] = r.reject;
    j["k"] = r.k;
    return j;
}

json to_json(const FitConfig& c)
{
    json j;
    j["estimator"] = to_string(c.estimator);
    j["epsilon"] = c.epsilon;
    j["max_iters"] = c.max_iters;
    j["tol"] = c.tol;
    j["sigma2_floor"] = c.sigma2_floor;
    j["level"] = c.level;
    if (c.estimator == Estimator::mh) {
        j["sampler"] = {{"samples", c.sampler.samples},
                        {"burn_in", c.sampler.burn_in},
                        {"thin", c.sampler.thin},
                        {"initial_step", c.sampler.initial_step},
                        {"target_acceptance", {c.sampler.target_lo, c.sampler.target_hi}},
                        {"seed", c.sampler.seed}};
    } else {
        j["quadrature"] = {{"half_width_sd", c.quadrature.half_width_sd},
                           {"nodes", c.quadrature.nodes}};
    }
    return j;
}

json to_json(const GeneratorConfig& c)
{
    json j;
    j["alpha1"] = c.alpha1;
    j["alpha2"] = c.alpha2;
    j["sigma"] = c.sigma;
    j["n1"] = c.n1;
    j["n2"] = c.n2;
    j["replications"] = c.replications;
    j["seed"] = c.seed;
    return j;
}

json fit_report_json(const std::string& dataset, const std::vector<FitResult>& fits,
                     const PooledResult* combined)
{
    json j;
    j["dataset"] = dataset;
    j["tables"] = json::array();
    for (const auto& f : fits)
        j["tables"].push_back(to_json(f));
    j["combined"] = combined ? to_json(*combined) : json(nullptr);
    return j;
}

namespace {

struct Row {
    std::string trial, a1, se1, a2, se2, pi1, pi2, lor, selor, t, result;
};

template <typename R>
Row make_row(const std::string& name, const R& r)
{
    return {name,
            format_fixed(r.alpha1_hat),
            "(" + format_fixed(r.se_alpha1) + ")",
            format_fixed(r.alpha2_hat),
            "(" + format_fixed(r.se_alpha2) + ")",
            format_fixed(r.pi1_hat),
            format_fixed(r.pi2_hat),
            format_fixed(r.log_or),
            "(" + format_fixed(r.se_log_or) + ")",
            format_fixed(r.t_stat),
            r.reject ? "1" : "0"};
}

}  // namespace

std::string fit_report_table(const std::vector<FitResult>& fits, const PooledResult* combined)
{
    std::vector<Row> rows;
    rows.push_back({"Trial", "alpha1", "(se)", "alpha2", "(se)", "pi1", "pi2", "logOR", "(se)", "T",
                    "Result"});
    for (const auto& f : fits)
        rows.push_back(make_row(f.label, f));
    if (combined)
        rows.push_back(make_row("Combined", *combined));

    std::vector<std::size_t> width(11, 0);
    for (const auto& r : rows) {
        const std::string* cells[] = {&r.trial, &r.a1, &r.se1, &r.a2, &r.se2, &r.pi1,
                                      &r.pi2,   &r.lor, &r.selor, &r.t, &r.result};
        for (std::size_t i = 0; i < 11; ++i)
            width[i] = std::max(width[i], cells[i]->size());
    }

    std::ostringstream out;
    for (const auto& r : rows) {
        const std::string* cells[] = {&r.trial, &r.a1, &r.se1, &r.a2, &r.se2, &r.pi1,
                                      &r.pi2,   &r.lor, &r.selor, &r.t, &r.result};
        for (std::size_t i = 0; i < 11; ++i) {
            if (i)
                out << "  ";
            if (i == 0)
                out << std::left << std::setw(static_cast<int>(width[i])) << *cells[i];
            else
                out << std::right << std::setw(static_cast<int>(width[i])) << *cells[i];
        }
        out << '\n';
    }
    return out.str();
}

namespace {

std::string full(double v)
{
    return json(v).dump();
}

}  // namespace

std::string fit_report_csv(const std::vector<FitResult>& fits, const PooledResult* combined)
{
    std::ostringstream out;
    out << "trial,alpha1_hat,se_alpha1,alpha2_hat,se_alpha2,sigma2_hat,pi1_hat,pi2_hat,log_or,"
           "se_log_or,t_stat,reject\n";
    auto row = [&](const std::string& name, const auto& r) {
        out << name << ',' << full(r.alpha1_hat) << ',' << full(r.se_alpha1) << ','
            << full(r.alpha2_hat) << ',' << full(r.se_alpha2) << ',' << full(r.sigma2_hat) << ','
            << full(r.pi1_hat) << ',' << full(r.pi2_hat) << ',' << full(r.log_or) << ','
            << full(r.se_log_or) << ',' << full(r.t_stat) << ',' << (r.reject ? 1 : 0) << '\n';
    };
    for (const auto& f : fits)
        row(f.label, f);
    if (combined)
        row("combined", *combined);
    return out.str();
}

json correlation_summary_json(const GeneratorConfig& c, const CorrelationStudyResult& r)
{
    json j;
    j["study"] = "correlation";
    j["config"] = to_json(c);
    j["replications"] = c.replications;
    j["retained"] = r.correlations.size();
    j["dropped"] = r.dropped;
    json q = json::object();
    for (const auto& [p, v] : r.quantiles) {
        char key[16];
        std::snprintf(key, sizeof key, "%.2f", p);
        q[key] = v;
    }
    j["quantiles"] = q;
    j["histogram"] = json::array();
    for (const auto& b : r.histogram)
        j["histogram"].push_back({{"lower", b.lower}, {"count", b.count}});
    return j;
}

std::string correlation_data_csv(const GeneratorConfig& c, const CorrelationStudyResult& r)
{
    std::ostringstream out;
    out << "replication,correlation\n";
    std::size_t next = 0;
    for (std::size_t rep = 0; rep < c.replications; ++rep) {
        out << rep << ',';
        if (next < r.replication.size() && r.replication[next] == rep)
            out << full(r.correlations[next++]);
        out << '\n';
    }
    return out.str();
}

json performance_summary_json(const GeneratorConfig& c, const FitConfig& f,
                              const PerformanceStudyResult& r)
{
    const auto& s = r.summary;
    json j;
    j["study"] = "performance";
    j["config"] = to_json(c);
    j["fit"] = to_json(f);
    j["replications"] = r.replications.size();
    j["mean_pi1"] = s.mean_pi1;
    j["mean_pi2"] = s.mean_pi2;
    j["mean_log_or"] = s.mean_log_or;
    j["pooled_rejection_rate"] = s.pooled_rejection_rate;
    j["table_rejection_rate"] = s.table_rejection_rate;
    j["pooled_se_below_min"] = {{"alpha1", s.pooled_se_below_min_alpha1},
                                {"alpha2", s.pooled_se_below_min_alpha2},
                                {"log_or", s.pooled_se_below_min_log_or}};
    j["non_converged_fits"] = s.non_converged_fits;
    return j;
}

std::string performance_data_csv(const PerformanceStudyResult& r)
{
    std::ostringstream out;
    out << "replication,alpha1_hat,se_alpha1,alpha2_hat,se_alpha2,pi1_hat,pi2_hat,log_or,se_log_or,"
           "t_stat,reject\n";
    for (std::size_t i = 0; i < r.replications.size(); ++i) {
        const auto& p = r.replications[i].pooled;
        out << i << ',' << full(p.alpha1_hat) << ',' << full(p.se_alpha1) << ','
            << full(p.alpha2_hat) << ',' << full(p.se_alpha2) << ',' << full(p.pi1_hat) << ','
            << full(p.pi2_hat) << ',' << full(p.log_or) << ',' << full(p.se_log_or) << ','
            << full(p.t_stat) << ',' << (p.reject ? 1 : 0) << '\n';
    }
    return out.str();
}

std::string sha256_hex(std::string_view bytes)
{
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

json run_manifest(const std::string& command, const json& config, std::uint64_t seed,
                  std::string_view input_bytes)
{
    json j;
    j["command"] = command;
    j["config"] = config;
    j["seed"] = seed;
    j["input_sha256"] = input_bytes.empty() ? json(nullptr) : json(sha256_hex(input_bytes));
    j["tool_version"] = kToolVersion;
    return j;
}

}  // namespace lvct
