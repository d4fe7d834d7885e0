#include "cli.hpp"

#include "lcorr/arith.hpp"
#include "lcorr/correlation.hpp"
#include "lcorr/errors.hpp"
#include "lcorr/gap_mse.hpp"
#include "lcorr/identities.hpp"
#include "lcorr/mc.hpp"
#include "lcorr/parallel.hpp"
#include "lcorr/policy.hpp"
#include "lcorr/special_fns.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <unistd.h>

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>

namespace lcorr::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;
constexpr std::size_t kMaxListLength = 1'000'000;

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
        std::size_t at = text.find(sep, start);
        parts.push_back(trim(text.substr(start, at == std::string_view::npos ? std::string_view::npos : at - start)));
        if (at == std::string_view::npos) return parts;
        start = at + 1;
    }
}

Json num(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

std::string timestamp() {
    std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buf;
}

std::vector<std::int64_t> parse_int_list(std::string_view text, const char* what) {
    std::vector<std::int64_t> out;
    for (const Rational& r : parse_rational_list(text, Rational(1))) {
        if (!r.is_integer()) throw ParseError(std::string(what) + " entries must be integers, got " + r.str());
        out.push_back(r.num());
    }
    return out;
}

std::vector<double> to_doubles(const std::vector<Rational>& values) {
    std::vector<double> out;
    out.reserve(values.size());
    for (const Rational& r : values) out.push_back(r.to_double());
    return out;
}

Rational positive_rational(const std::string& text, const char* what) {
    Rational r = Rational::parse(text);
    if (!r.is_positive()) throw DomainError(std::string(what) + " must be positive, got " + r.str());
    return r;
}

std::vector<Rational> positive_rationals(const std::string& text, const char* what, const Rational& step) {
    auto values = parse_rational_list(text, step);
    for (const Rational& r : values)
        if (!r.is_positive()) throw DomainError(std::string(what) + " entries must be positive, got " + r.str());
    return values;
}

// ---------------------------------------------------------------------------
// Options shared by every subcommand
// ---------------------------------------------------------------------------

struct Common {
    TruncationPolicy policy;
    std::string format;
    std::string out;
    std::string pairing = "literal";
};

void add_common(CLI::App* cmd, Common& c, const char* default_format) {
    c.format = default_format;
    cmd->add_option("--tol", c.policy.abs_tol, "Bound on each discarded series tail")->capture_default_str();
    cmd->add_option("--prime-limit", c.policy.prime_limit, "Largest prime summed directly")->capture_default_str();
    cmd->add_option("--term-limit", c.policy.term_limit, "Cap on k-indexed series length")->capture_default_str();
    cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    cmd->add_option("--out", c.out, "Output file, replaced atomically; stdout when absent");
    cmd->add_option("--pairing", c.pairing, "Dissonant-pair frequency matching")
        ->check(CLI::IsMember({"literal", "reduced"}))
        ->capture_default_str();
}

Json meta_of(const char* command, const Common& c) {
    Json meta;
    meta["command"] = command;
    meta["generated_at"] = timestamp();
    meta["policy"] = {{"abs_tol", c.policy.abs_tol},
                      {"prime_limit", c.policy.prime_limit},
                      {"term_limit", c.policy.term_limit}};
    meta["pairing"] = c.pairing;
    return meta;
}

/// What a command produced: the JSON document, and the row array plus column
/// order used for CSV.
struct Document {
    Json json;
    std::string rows_key;
    std::vector<std::string> columns;
    int exit_code = kExitSuccess;
};

std::string csv_text(const Json& value) {
    if (value.is_null()) return "";
    if (value.is_string()) return csv_field(value.get<std::string>());
    if (value.is_boolean()) return value.get<bool>() ? "true" : "false";
    return value.dump();
}

std::string render(const Document& doc, const std::string& format) {
    if (format == "json") return doc.json.dump(2) + "\n";
    std::string text;
    for (std::size_t i = 0; i < doc.columns.size(); ++i) text += (i ? "," : "") + csv_field(doc.columns[i]);
    text += "\n";
    for (const Json& row : doc.json.at(doc.rows_key)) {
        for (std::size_t i = 0; i < doc.columns.size(); ++i) {
            const auto& key = doc.columns[i];
            text += (i ? "," : "") + (row.contains(key) ? csv_text(row.at(key)) : std::string());
        }
        text += "\n";
    }
    return text;
}

void write_atomically(const std::filesystem::path& path, const std::string& text) {
    std::filesystem::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
        file << text;
        file.close();
        if (!file) {
            std::error_code ignored;
            std::filesystem::remove(tmp, ignored);
            throw std::runtime_error("cannot write " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

// ---------------------------------------------------------------------------
// table
// ---------------------------------------------------------------------------

struct TableArgs {
    std::string kind = "vert";
    std::string sigma = "1";
    std::string range = "1..12";
    std::string alphas, betas;
    std::int64_t modulus = 1;
};

Document cmd_table(const TableArgs& a, const Common& c) {
    CorrelationKind kind = parse_kind(a.kind);
    Rational sigma = positive_rational(a.sigma, "--sigma");
    auto alphas = positive_rationals(a.alphas.empty() ? a.range : a.alphas, "--alpha", Rational(1));
    auto betas = positive_rationals(a.betas.empty() ? a.range : a.betas, "--beta", Rational(1));
    PrincipalCharacter chi(a.modulus);
    PairingRule rule = parse_pairing(c.pairing);
    CorrelationTable table = build_table(kind, alphas, betas, sigma.to_double(), chi, c.policy, rule);

    Document doc;
    doc.rows_key = "cells";
    doc.columns = {"kind", "sigma", "alpha", "beta", "resonant", "rho"};
    Json meta = meta_of("table", c);
    meta["kind"] = to_string(kind);
    meta["sigma"] = sigma.str();
    meta["modulus"] = a.modulus;
    Json cells = Json::array();
    for (std::size_t i = 0; i < alphas.size(); ++i)
        for (std::size_t j = 0; j < betas.size(); ++j) {
            Json cell;
            cell["kind"] = to_string(kind);
            cell["sigma"] = sigma.str();
            cell["alpha"] = alphas[i].str();
            cell["beta"] = betas[j].str();
            cell["resonant"] = static_cast<bool>(table.divis_mask[i][j]);
            const auto& value = table.values[i][j];
            cell["rho"] = value ? num(*value) : Json(nullptr);
            if (!value) cell["reason"] = table.absent_reason[i][j];
            cells.push_back(std::move(cell));
        }
    meta["absent"] = table.absent_count();
    doc.json["schema"] = kSchemaVersion;
    doc.json["meta"] = std::move(meta);
    doc.json["cells"] = std::move(cells);
    if (table.absent_count() > 0) doc.exit_code = kExitPartial;
    return doc;
}

// ---------------------------------------------------------------------------
// rms
// ---------------------------------------------------------------------------

struct RmsArgs {
    std::string grid = "0.26..3";
    std::int64_t modulus = 1;
};

Document cmd_rms(const RmsArgs& a, const Common& c) {
    auto grid = parse_rational_list(a.grid, Rational(1, 50));
    PrincipalCharacter chi(a.modulus);
    auto curve = rms_curve(to_doubles(grid), chi, c.policy, parse_pairing(c.pairing));

    Document doc;
    doc.rows_key = "points";
    doc.columns = {"sigma",      "rms_simple",  "rms_expanded", "abs_diff", "mse_simple",
                   "mse_expanded", "mse_abs_diff", "reason"};
    Json meta = meta_of("rms", c);
    meta["modulus"] = a.modulus;
    Json points = Json::array();
    std::size_t absent = 0;
    for (std::size_t i = 0; i < curve.size(); ++i) {
        Json row;
        row["sigma"] = grid[i].to_double();
        if (const auto& r = curve[i].result) {
            double rms_expanded = std::sqrt(std::fmax(r->expanded.value, 0.0));
            row["rms_simple"] = num(r->rms);
            row["rms_expanded"] = num(rms_expanded);
            row["abs_diff"] = num(std::fabs(r->rms - rms_expanded));
            row["mse_simple"] = num(r->simple.value);
            row["mse_expanded"] = num(r->expanded.value);
            row["mse_abs_diff"] = num(std::fabs(r->simple.value - r->expanded.value));
        } else {
            for (const char* key : {"rms_simple", "rms_expanded", "abs_diff", "mse_simple", "mse_expanded",
                                    "mse_abs_diff"})
                row[key] = nullptr;
            row["reason"] = curve[i].reason;
            ++absent;
        }
        points.push_back(std::move(row));
    }
    meta["absent"] = absent;
    doc.json["schema"] = kSchemaVersion;
    doc.json["meta"] = std::move(meta);
    doc.json["points"] = std::move(points);
    if (absent > 0) doc.exit_code = kExitPartial;
    return doc;
}

// ---------------------------------------------------------------------------
// identity
// ---------------------------------------------------------------------------

struct IdentityArgs {
    std::string suite;
    std::string v, x, z, sigma, modulus, n, p, alpha;
    std::optional<double> check_tol;
};

const std::vector<std::string> kSuites = {"class",       "parity",      "reconstruction",  "symmetry",
                                          "euler-factor", "order-shift", "mobius-inversion", "all"};

/// One unit of work in a suite. Errors become a failed report carrying the message.
struct IdentityJob {
    std::string name;
    std::string parameters;
    std::function<std::vector<IdentityReport>()> run;
};

struct IdentityOutcome {
    std::vector<IdentityReport> reports;
    std::string error;
};

std::string describe(std::initializer_list<std::pair<const char*, double>> items) {
    // Shortest form that reads back to the same double.
    std::string out;
    char buf[32];
    for (const auto& [key, value] : items) {
        auto end = std::to_chars(buf, buf + sizeof buf, value).ptr;
        out += (out.empty() ? "" : " ") + std::string(key) + '=' + std::string(buf, end);
    }
    return out;
}

void add_suite_jobs(const std::string& suite, const IdentityArgs& a, const Common& c, PairingRule rule,
                    std::vector<IdentityJob>& jobs) {
    auto doubles = [](const std::string& given, const char* fallback) {
        return parse_double_list(given.empty() ? fallback : given);
    };
    auto sigmas = [&](const char* fallback) {
        return to_doubles(positive_rationals(a.sigma.empty() ? fallback : a.sigma, "--sigma", Rational(1, 4)));
    };
    auto ints = [](const std::string& given, const char* fallback, const char* what) {
        return parse_int_list(given.empty() ? fallback : given, what);
    };
    auto tol = [&](double fallback) { return a.check_tol.value_or(fallback); };
    const TruncationPolicy& policy = c.policy;

    if (suite == "class" || suite == "parity") {
        for (double v : doubles(a.v, "-2,-1,0,0.5,1,2,3"))
            for (double x : doubles(a.x, "1.15,1.2,1.5,2,10")) {
                std::string p = describe({{"v", v}, {"x", x}});
                if (suite == "class") {
                    double t = tol(1e-7);
                    jobs.push_back({"even-class", p, [=, &policy] {
                                        return std::vector{even_class_identity(v, x, t, policy, rule)};
                                    }});
                    jobs.push_back({"odd-class", p, [=, &policy] {
                                        return std::vector{odd_class_identity(v, x, t, policy, rule)};
                                    }});
                } else {
                    double t = tol(1e-10);
                    jobs.push_back({"parity", p, [=, &policy] { return std::vector{parity_partition(v, x, t, policy)}; }});
                }
            }
    } else if (suite == "reconstruction") {
        double t = tol(1e-10);
        for (double v : doubles(a.v, "0,1,2"))
            for (double z : doubles(a.z, "0.1,0.5,0.9"))
                jobs.push_back({"reconstruction", describe({{"v", v}, {"z", z}}),
                                [=, &policy] { return std::vector{mobius_reconstruction(v, z, t, policy)}; }});
    } else if (suite == "symmetry") {
        double t = tol(1e-8);
        for (double sigma : sigmas("1/2,1"))
            for (std::int64_t m : ints(a.modulus, "1,2,6", "--modulus"))
                jobs.push_back({"symmetry", describe({{"sigma", sigma}, {"M", double(m)}}), [=, &policy] {
                                    return std::vector{non_divisor_symmetry(sigma, PrincipalCharacter(m), t, policy, rule)};
                                }});
    } else if (suite == "euler-factor") {
        double t = tol(1e-10);
        for (std::int64_t n : ints(a.n, "1,2,3", "--n"))
            for (double sigma : sigmas("1"))
                for (std::int64_t m : ints(a.modulus, "1,2", "--modulus"))
                    for (std::int64_t p : ints(a.p, "2,3,5", "--p")) {
                        if (m > 0 && p > 0 && m % p == 0) continue;
                        jobs.push_back({"euler-factor",
                                        describe({{"n", double(n)}, {"sigma", sigma}, {"M", double(m)}, {"p", double(p)}}),
                                        [=, &policy] {
                                            return std::vector{euler_factor_removal(n, sigma, m, p, t, policy)};
                                        }});
                    }
    } else if (suite == "order-shift") {
        for (double v : doubles(a.v, "0,1,2"))
            for (double x : doubles(a.x, "1.5,2,10"))
                for (std::int64_t alpha : ints(a.alpha, "1,2,3", "--alpha"))
                    jobs.push_back({"order-shift", describe({{"v", v}, {"x", x}, {"alpha", double(alpha)}}),
                                    [=, &policy] {
                                        auto r = polylog_order_shift(v, x, alpha, policy);
                                        return std::vector{r.integral, r.derivative};
                                    }});
    } else if (suite == "mobius-inversion") {
        double t = tol(1e-9);
        for (double v : doubles(a.v, "2,3"))
            for (double sigma : sigmas("1,2"))
                for (std::int64_t m : ints(a.modulus, "1", "--modulus")) {
                    std::string p = describe({{"v", v}, {"sigma", sigma}, {"M", double(m)}});
                    jobs.push_back({"mobius-inversion", p, [=, &policy] {
                                        auto r = mobius_partial_identity(v, sigma, PrincipalCharacter(m), policy);
                                        return std::vector{make_report("mobius-inversion", p, r.lhs.value, r.rhs.value, t)};
                                    }});
                }
    }
}

Document cmd_identity(const IdentityArgs& a, const Common& c, std::ostream& err) {
    PairingRule rule = parse_pairing(c.pairing);
    std::vector<IdentityJob> jobs;
    if (a.suite == "all") {
        for (const auto& suite : kSuites)
            if (suite != "all") add_suite_jobs(suite, a, c, rule, jobs);
    } else {
        add_suite_jobs(a.suite, a, c, rule, jobs);
    }

    std::vector<IdentityOutcome> outcomes(jobs.size());
    parallel_for(jobs.size(), [&](std::size_t i) {
        try {
            outcomes[i].reports = jobs[i].run();
        } catch (const Error& e) {
            outcomes[i].error = std::string(to_string(e.kind())) + ": " + e.what();
        }
    });

    Document doc;
    doc.rows_key = "reports";
    doc.columns = {"name", "parameters", "lhs", "rhs", "abs_diff", "tol", "pass", "reason"};
    Json reports = Json::array();
    std::size_t passed = 0, failed = 0, errors = 0;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        if (!outcomes[i].error.empty()) {
            ++errors;
            err << "lcorr: " << jobs[i].name << " at " << jobs[i].parameters << ": " << outcomes[i].error << "\n";
            reports.push_back({{"name", jobs[i].name},
                               {"parameters", jobs[i].parameters},
                               {"lhs", nullptr},
                               {"rhs", nullptr},
                               {"abs_diff", nullptr},
                               {"tol", nullptr},
                               {"pass", false},
                               {"reason", outcomes[i].error}});
            continue;
        }
        for (const IdentityReport& r : outcomes[i].reports) {
            (r.pass ? passed : failed)++;
            reports.push_back({{"name", r.name},
                               {"parameters", r.parameters},
                               {"lhs", num(r.lhs)},
                               {"rhs", num(r.rhs)},
                               {"abs_diff", num(r.abs_diff)},
                               {"tol", num(r.tol)},
                               {"pass", r.pass}});
        }
    }
    Json meta = meta_of("identity", c);
    meta["suite"] = a.suite;
    meta["summary"] = {{"passed", passed}, {"failed", failed}, {"errors", errors}};
    doc.json["schema"] = kSchemaVersion;
    doc.json["meta"] = std::move(meta);
    doc.json["reports"] = std::move(reports);
    if (errors > 0)
        doc.exit_code = kExitError;
    else if (failed > 0)
        doc.exit_code = kExitPartial;
    return doc;
}

// ---------------------------------------------------------------------------
// mc
// ---------------------------------------------------------------------------

struct McArgs {
    std::string kind = "vert";
    std::string alpha = "2";
    std::string beta = "1";
    std::string sigma = "1";
    std::string sigma2;
    std::int64_t modulus = 1;
    SamplingPlan plan;
    std::string sampler = "iid";
};

Document cmd_mc(const McArgs& a, const Common& c) {
    Rational alpha = positive_rational(a.alpha, "--alpha");
    Rational beta = positive_rational(a.beta, "--beta");
    Rational sigma = positive_rational(a.sigma, "--sigma");
    Rational sigma2 = a.sigma2.empty() ? sigma : positive_rational(a.sigma2, "--sigma2");
    PrincipalCharacter chi(a.modulus);
    SamplingPlan plan = a.plan;
    plan.sampler = parse_sampler(a.sampler);

    CovarianceCheck check;
    if (a.kind == "reP") {
        check = verify_prime_sum_covariance(alpha, beta, sigma.to_double(), sigma2.to_double(), chi, plan, c.policy);
    } else {
        if (!a.sigma2.empty()) throw DomainError("--sigma2 applies to --kind reP only");
        CovarianceSpec spec{parse_kind(a.kind), alpha, beta, sigma.to_double(), chi};
        check = verify_log_covariance(spec, plan, c.policy, parse_pairing(c.pairing));
    }

    const MomentEstimate& e = check.estimate;
    Json config = {{"kind", a.kind},     {"alpha", alpha.str()},         {"beta", beta.str()},
                   {"sigma", sigma.str()}, {"sigma2", sigma2.str()},     {"modulus", a.modulus},
                   {"samples", plan.n_samples}, {"start", plan.t_start}, {"span", plan.t_span},
                   {"seed", plan.seed},  {"sampler", to_string(plan.sampler)}};
    Json result = {{"closed_form", num(check.closed_form)},
                   {"closed_error", num(check.closed_error)},
                   {"raw_moment", num(e.raw_moment)},
                   {"std_error", num(e.std_error)},
                   {"z_score", num(check.z_score)},
                   {"within_3se", check.z_score <= 3.0},
                   {"centered_moment", num(e.centered_moment)},
                   {"mean_x", num(e.mean_x)},
                   {"mean_y", num(e.mean_y)},
                   {"std_x", num(e.std_x)},
                   {"std_y", num(e.std_y)},
                   {"mean_z_x", num(check.mean_z_x)},
                   {"mean_z_y", num(check.mean_z_y)},
                   {"n_used", e.n_used},
                   {"rejected", e.rejected},
                   {"flagged", e.flagged},
                   {"degenerate", e.degenerate}};

    Document doc;
    doc.rows_key = "rows";
    Json row = config;
    for (auto& [key, value] : result.items()) row[key] = value;
    for (auto& [key, value] : row.items()) doc.columns.push_back(key);
    Json meta = meta_of("mc", c);
    meta["config"] = config;
    doc.json["schema"] = kSchemaVersion;
    doc.json["meta"] = std::move(meta);
    doc.json["result"] = std::move(result);
    doc.json["rows"] = Json::array({row});
    if (e.rejected > 0) doc.exit_code = kExitPartial;
    return doc;
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

struct EvalArgs {
    std::string function;
    std::optional<std::string> sigma, alpha, beta;
    std::optional<double> t, v, z, x;
    std::string kind = "diag";
    std::int64_t modulus = 1;
};

const std::vector<std::string> kEvalFunctions = {"primezeta", "polylog", "zeta", "logL",
                                                 "li2sum",    "pairsum", "cov",  "corr", "mse"};

template <class T>
const T& need(const std::optional<T>& value, const std::string& function, const char* option) {
    if (!value) throw DomainError("eval " + function + " needs " + option);
    return *value;
}

Document cmd_eval(const EvalArgs& a, const Common& c) {
    const std::string& f = a.function;
    PrincipalCharacter chi(a.modulus);
    PairingRule rule = parse_pairing(c.pairing);
    auto sigma = [&] { return Rational::parse(need(a.sigma, f, "--sigma")); };
    Json row;
    row["function"] = f;
    auto put = [&](const Estimate& e) {
        row["value"] = num(e.value);
        row["error_bound"] = num(e.error_bound);
    };

    if (f == "primezeta" || f == "li2sum") {
        Rational s = sigma();
        row["sigma"] = s.str();
        row["modulus"] = a.modulus;
        put(f == "primezeta" ? prime_zeta(s.to_double(), chi, c.policy) : li2_prime_sum(s.to_double(), chi, c.policy));
    } else if (f == "polylog") {
        double v = need(a.v, f, "--v"), z = need(a.z, f, "--z");
        row["v"] = v;
        row["z"] = z;
        put(polylog(v, z, c.policy));
    } else if (f == "zeta" || f == "logL") {
        Rational s = sigma();
        double t = a.t.value_or(0.0);
        row["sigma"] = s.str();
        row["t"] = t;
        if (f == "zeta") {
            auto z = zeta_complex({s.to_double(), t}, c.policy);
            row["value"] = num(z.value.real());
            row["imag"] = num(z.value.imag());
            row["error_bound"] = num(z.error_bound);
        } else {
            row["modulus"] = a.modulus;
            auto l = log_abs_L_line(ComplexPoint{s.to_double(), t}, chi, c.policy);
            row["value"] = num(l.value);
            row["abs_zeta"] = num(l.abs_zeta);
            row["near_zero"] = l.near_zero;
        }
    } else if (f == "pairsum") {
        double x = need(a.x, f, "--x");
        row["x"] = x;
        row["modulus"] = a.modulus;
        auto s = pair_sum(x, chi, c.policy);
        put(s.estimate);
        row["representation"] = to_string(s.representation);
    } else if (f == "cov" || f == "corr") {
        CovarianceSpec spec{parse_kind(a.kind), positive_rational(need(a.alpha, f, "--alpha"), "--alpha"),
                            positive_rational(need(a.beta, f, "--beta"), "--beta"), 0.0, chi};
        Rational s = positive_rational(need(a.sigma, f, "--sigma"), "--sigma");
        spec.sigma = s.to_double();
        row["kind"] = to_string(spec.kind);
        row["alpha"] = spec.alpha.str();
        row["beta"] = spec.beta.str();
        row["sigma"] = s.str();
        row["modulus"] = a.modulus;
        if (f == "cov") {
            if (spec.alpha < spec.beta) std::swap(spec.alpha, spec.beta);
            auto r = covariance(spec, c.policy, rule);
            row["value"] = num(r.value);
            row["error_bound"] = num(r.error_bound);
            row["resonant"] = r.term.resonant;
        } else {
            auto r = corr(spec, c.policy, rule);
            row["value"] = num(r.value);
            row["error_bound"] = num(r.error_bound);
            row["resonant"] = r.resonant;
            row["asymptotic"] = num(corr_asymptotic(spec));
        }
    } else if (f == "mse") {
        Rational s = sigma();
        row["sigma"] = s.str();
        row["modulus"] = a.modulus;
        auto r = gap_mse(s.to_double(), chi, c.policy, rule);
        row["value"] = num(r.simple.value);
        row["error_bound"] = num(r.simple.error_bound);
        row["expanded"] = num(r.expanded.value);
        row["rms"] = num(r.rms);
    }

    Document doc;
    doc.rows_key = "rows";
    for (auto& [key, value] : row.items()) doc.columns.push_back(key);
    doc.json["schema"] = kSchemaVersion;
    doc.json["meta"] = meta_of("eval", c);
    doc.json["rows"] = Json::array({row});
    return doc;
}

}  // namespace

// ---------------------------------------------------------------------------
// Parsing helpers
// ---------------------------------------------------------------------------

std::vector<Rational> parse_rational_list(std::string_view text, const Rational& default_step) {
    std::vector<Rational> out;
    for (std::string_view item : split(text, ',')) {
        std::size_t dots = item.find("..");
        if (dots == std::string_view::npos) {
            out.push_back(Rational::parse(item));
            continue;
        }
        std::string_view rest = item.substr(dots + 2);
        std::size_t colon = rest.find(':');
        Rational lo = Rational::parse(trim(item.substr(0, dots)));
        Rational hi = Rational::parse(trim(rest.substr(0, colon)));
        Rational step = colon == std::string_view::npos ? default_step : Rational::parse(trim(rest.substr(colon + 1)));
        if (!step.is_positive()) throw ParseError("range step must be positive in '" + std::string(item) + "'");
        if (hi < lo) throw ParseError("empty range '" + std::string(item) + "'");
        for (Rational r = lo; r <= hi; r = r + step) {
            if (out.size() >= kMaxListLength) throw ParseError("list longer than " + std::to_string(kMaxListLength));
            out.push_back(r);
        }
    }
    return out;
}

std::vector<double> parse_double_list(std::string_view text) {
    std::vector<double> out;
    for (std::string_view item : split(text, ',')) {
        double value = 0.0;
        auto [end, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
        if (item.empty() || ec != std::errc() || end != item.data() + item.size() || !std::isfinite(value))
            throw ParseError("not a finite number: '" + std::string(item) + "'");
        out.push_back(value);
    }
    return out;
}

std::string csv_field(std::string_view text) {
    if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
    std::string quoted = "\"";
    for (char ch : text) {
        if (ch == '"') quoted += '"';
        quoted += ch;
    }
    return quoted + "\"";
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false;
    bool pending = false;  // a record has started
    for (std::size_t i = 0; i < text.size(); ++i) {
        char ch = text[i];
        if (quoted) {
            if (ch != '"') {
                field += ch;
            } else if (i + 1 < text.size() && text[i + 1] == '"') {
                field += '"';
                ++i;
            } else {
                quoted = false;
            }
            continue;
        }
        pending = true;
        if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            record.push_back(std::move(field));
            field.clear();
        } else if (ch == '\n' || ch == '\r') {
            if (ch == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            record.push_back(std::move(field));
            field.clear();
            records.push_back(std::move(record));
            record.clear();
            pending = false;
        } else {
            field += ch;
        }
    }
    if (quoted) throw ParseError("unterminated quoted CSV field");
    if (pending) {
        record.push_back(std::move(field));
        records.push_back(std::move(record));
    }
    return records;
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Covariances and correlations of log|L(s, chi_0)| along lines, with identity checks"};
    app.name("lcorr");
    app.require_subcommand(1);

    Common common_table, common_rms, common_identity, common_mc, common_eval;

    TableArgs table;
    auto* t = app.add_subcommand("table", "Correlation matrix over alpha x beta labels");
    t->add_option("--kind", table.kind, "diag or vert")->check(CLI::IsMember({"diag", "vert"}))->capture_default_str();
    t->add_option("--sigma", table.sigma, "Real part as an exact rational, e.g. 3/4")->capture_default_str();
    t->add_option("--range", table.range, "Labels for both axes, e.g. 1..12 or 1..12:1/4")->capture_default_str();
    t->add_option("--alpha", table.alphas, "Row labels; overrides --range");
    t->add_option("--beta", table.betas, "Column labels; overrides --range");
    t->add_option("--modulus", table.modulus, "Modulus M of the principal character")->capture_default_str();
    add_common(t, common_table, "csv");

    RmsArgs rms;
    auto* r = app.add_subcommand("rms", "Root mean square of Re P - log|L| along sigma + it");
    r->add_option("--grid", rms.grid, "sigma grid; ranges step by 1/50 unless a step is given")->capture_default_str();
    r->add_option("--modulus", rms.modulus, "Modulus M of the principal character")->capture_default_str();
    add_common(r, common_rms, "csv");

    IdentityArgs identity;
    auto* id = app.add_subcommand("identity", "Side-by-side checks of series identities");
    id->add_option("--suite", identity.suite, "Which identities")->required()->check(CLI::IsMember(kSuites));
    id->add_option("--v", identity.v, "Polylog orders");
    id->add_option("--x", identity.x, "Bases x > 2^(1/6)");
    id->add_option("--z", identity.z, "Arguments 0 < z < 1");
    id->add_option("--sigma", identity.sigma, "Real parts (exact rationals)");
    id->add_option("--modulus", identity.modulus, "Moduli");
    id->add_option("--n", identity.n, "Diagonal scales");
    id->add_option("--p", identity.p, "Removed primes; pairs with p | M are skipped");
    id->add_option("--alpha", identity.alpha, "Integer scales");
    id->add_option("--check-tol", identity.check_tol, "Pass threshold on |lhs - rhs|; per-suite default otherwise");
    add_common(id, common_identity, "json");

    McArgs mc;
    auto* m = app.add_subcommand("mc", "Monte-Carlo moment against the closed-form covariance");
    m->add_option("--kind", mc.kind, "vert, diag, or reP (vertical prime sums)")
        ->check(CLI::IsMember({"vert", "diag", "reP"}))
        ->capture_default_str();
    m->add_option("--alpha", mc.alpha, "First scale (exact rational)")->capture_default_str();
    m->add_option("--beta", mc.beta, "Second scale (exact rational)")->capture_default_str();
    m->add_option("--sigma", mc.sigma, "Real part (exact rational)")->capture_default_str();
    m->add_option("--sigma2", mc.sigma2, "Real part of the second line, reP only");
    m->add_option("--modulus", mc.modulus, "Modulus M of the principal character")->capture_default_str();
    m->add_option("--samples", mc.plan.n_samples, "Number of sample points")->capture_default_str();
    m->add_option("--start", mc.plan.t_start, "Left end of the t window")->capture_default_str();
    m->add_option("--span", mc.plan.t_span, "Length of the t window")->capture_default_str();
    m->add_option("--seed", mc.plan.seed, "Stream seed")->capture_default_str();
    m->add_option("--sampler", mc.sampler, "iid or stratified")
        ->check(CLI::IsMember({"iid", "iid_uniform", "stratified"}))
        ->capture_default_str();
    add_common(m, common_mc, "json");

    EvalArgs eval;
    auto* e = app.add_subcommand("eval", "Point evaluation of one function");
    e->add_option("function", eval.function, "Function name")->required()->check(CLI::IsMember(kEvalFunctions));
    e->add_option("--sigma", eval.sigma, "Real part (exact rational)");
    e->add_option("--t", eval.t, "Imaginary part");
    e->add_option("--v", eval.v, "Polylog order");
    e->add_option("--z", eval.z, "Polylog argument");
    e->add_option("--x", eval.x, "Exponent base of the pair sum");
    e->add_option("--kind", eval.kind, "diag or vert")->check(CLI::IsMember({"diag", "vert"}))->capture_default_str();
    e->add_option("--alpha", eval.alpha, "First scale (exact rational)");
    e->add_option("--beta", eval.beta, "Second scale (exact rational)");
    e->add_option("--modulus", eval.modulus, "Modulus M of the principal character")->capture_default_str();
    add_common(e, common_eval, "json");

    std::vector<std::string> storage{"lcorr"};
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : storage) argv.push_back(s.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& ex) {
        int code = app.exit(ex, out, err);
        return code == 0 ? kExitSuccess : kExitError;
    }

    const Common* common = nullptr;
    try {
        Document doc;
        if (t->parsed()) {
            common = &common_table;
            common->policy.validate();
            doc = cmd_table(table, *common);
        } else if (r->parsed()) {
            common = &common_rms;
            common->policy.validate();
            doc = cmd_rms(rms, *common);
        } else if (id->parsed()) {
            common = &common_identity;
            common->policy.validate();
            doc = cmd_identity(identity, *common, err);
        } else if (m->parsed()) {
            common = &common_mc;
            common->policy.validate();
            doc = cmd_mc(mc, *common);
        } else {
            common = &common_eval;
            common->policy.validate();
            doc = cmd_eval(eval, *common);
        }
        std::string text = render(doc, common->format);
        if (common->out.empty())
            out << text;
        else
            write_atomically(common->out, text);
        if (doc.exit_code == kExitPartial) err << "lcorr: partial result, see absent or failing entries\n";
        return doc.exit_code;
    } catch (const Error& ex) {
        err << "lcorr: " << to_string(ex.kind()) << " error: " << ex.what() << "\n";
        return kExitError;
    } catch (const std::exception& ex) {
        err << "lcorr: " << ex.what() << "\n";
        return kExitError;
    }
}

}  // namespace lcorr::cli
