// Command-line front end: structural checks, simulation, diagnostics, and
// renewal classification, with deterministic replay from a run manifest.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gchain/json_io.hpp"
#include "gchain/kernels.hpp"
#include "gchain/sim.hpp"
#include "gchain/structure.hpp"

namespace fs = std::filesystem;
using gchain::json;

namespace {

constexpr const char* kArtifactVersion = "0.1.0";
constexpr const char* kSchemaVersion = "1";

struct Common {
    std::string config_path;
    std::optional<uint64_t> seed;
    std::string out_dir = ".";
    int replicas = 1000;
    double tol = 1e-12;
    std::string format = "json";
};

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw gchain::Error(gchain::Error::Code::BadInput, "cannot open " + path);
    return json::parse(in);
}

void write_file(const fs::path& path, const std::string& body) {
    fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << body;
}

std::string timestamp() {
    auto now = std::chrono::system_clock::now();
    auto t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

// Every command records what it ran and where the reports went; replaying a
// manifest must reproduce the report bodies byte for byte, so timestamps
// live only in the manifest header.
void write_manifest(const Common& c, const std::string& command, const json& kernel_spec,
                    const json& parameters, const std::vector<std::string>& outputs) {
    json m;
    m["header"] = {{"created", timestamp()}};
    m["command"] = command;
    m["kernel_spec"] = kernel_spec;
    m["parameters"] = parameters;
    m["seed"] = c.seed ? json(*c.seed) : json(nullptr);
    m["artifact_version"] = kArtifactVersion;
    m["outputs"] = outputs;
    write_file(fs::path(c.out_dir) / "manifest.json", m.dump(2) + "\n");
}

uint64_t require_seed(const Common& c, const std::string& why) {
    if (!c.seed)
        throw gchain::Error(gchain::Error::Code::BadInput,
                            "--seed is required: " + why + " (no ambient entropy is used)");
    return *c.seed;
}

// ---- check ----------------------------------------------------------------------

int run_check(const Common& c, const json& spec, int K, int trials, int64_t cap) {
    gchain::KernelPtr kernel = gchain::kernel_from_json(spec);
    const gchain::Alphabet& alph = kernel->alphabet();

    json report;
    report["schema_version"] = kSchemaVersion;
    report["command"] = "check";
    report["K"] = K;
    report["kernel"] = kernel->tag();

    gchain::EriReport eri;
    if (!alph.finite) {
        eri = gchain::check_eri_countable(*kernel, K);
    } else {
        gchain::TransitionBounds bounds = gchain::build_bound_matrices(*kernel, K);
        report["under_matrix"] = gchain::to_json(bounds.under, K, alph);
        report["over_matrix"] = gchain::to_json(bounds.over, K, alph);
        gchain::HittingSpec hitting;
        if (kernel->markov_order()) {
            hitting.analytic = true;
        } else {
            hitting.analytic = false;
            hitting.mc.trials = trials;
            hitting.mc.cap = cap;
            hitting.mc.seed = require_seed(c, "hitting evidence is Monte-Carlo for this kernel");
        }
        eri = gchain::check_eri(bounds, *kernel, hitting);
    }
    report["eri"] = gchain::to_json(eri, alph);

    gchain::AssumptionB b = gchain::check_assumption_B(*kernel, K, eri.core);
    report["assumption_B"] = gchain::to_json(b, alph);

    std::vector<gchain::PastSpec> probes = gchain::default_probes(*kernel, K, eri.core);
    gchain::AssumptionC cc = gchain::check_assumption_C(*kernel, K, eri.core, probes);
    report["assumption_C"] = gchain::to_json(cc, alph);

    bool hold = eri.verdict == gchain::EriVerdict::ERI &&
                b.status == gchain::AssumptionB::Status::holds &&
                cc.status == gchain::AssumptionC::Status::holds_on_probes;
    bool violated = eri.verdict == gchain::EriVerdict::NotERI ||
                    b.status == gchain::AssumptionB::Status::violated ||
                    cc.status == gchain::AssumptionC::Status::violated;
    std::string verdict = hold ? "conditions_hold" : violated ? "violated" : "undecided";
    report["verdict"] = verdict;

    // Consequence routes for finite continuous kernels.
    json routes;
    routes["unique_measure_if_conditions_hold"] = alph.finite && kernel->continuous();
    routes["plain_square_route"] =
        alph.finite && kernel->continuous() && kernel->zeros().isolated_zeros.empty();
    report["corollaries"] = routes;

    write_file(fs::path(c.out_dir) / "check_report.json", report.dump(2) + "\n");
    write_manifest(c, "check", spec,
                   json{{"K", K}, {"trials", trials}, {"cap", cap}, {"tol", c.tol}},
                   {"check_report.json"});
    std::cout << verdict << "\n";
    return hold ? 0 : violated ? 2 : 3;
}

// ---- simulate -------------------------------------------------------------------

int run_simulate(const Common& c, const json& spec, const std::string& past_text,
                 int64_t length) {
    gchain::KernelPtr kernel = gchain::kernel_from_json(spec);
    uint64_t seed = require_seed(c, "path simulation is randomized");
    gchain::PastSpec past = gchain::parse_past(past_text, kernel->alphabet());
    gchain::PathResult res = gchain::simulate_path(*kernel, past, length, seed, c.tol);

    std::string body;
    for (size_t i = 0; i < res.path.size(); ++i)
        body += std::to_string(kernel->alphabet().label_of(res.path[i])) + "\n";
    write_file(fs::path(c.out_dir) / "path.txt", body);

    json summary;
    summary["schema_version"] = kSchemaVersion;
    summary["command"] = "simulate";
    summary["kernel"] = kernel->tag();
    summary["past"] = past.to_string(kernel->alphabet());
    summary["length"] = length;
    summary["max_step_defect"] = res.max_step_defect;
    summary["sum_step_defect"] = res.sum_step_defect;
    gchain::SimConfig cfg{seed, 1, length, 0, c.tol};
    summary["config"] = gchain::to_json(cfg);
    write_file(fs::path(c.out_dir) / "simulate_summary.json", summary.dump(2) + "\n");
    write_manifest(c, "simulate", spec,
                   json{{"past", past_text}, {"length", length}, {"tol", c.tol}},
                   {"path.txt", "simulate_summary.json"});
    return 0;
}

// ---- diagnose -------------------------------------------------------------------

int run_diagnose(const Common& c, const json& spec, const std::string& x_text,
                 const std::string& y_text, int64_t horizon, int n, bool plain) {
    gchain::KernelPtr kernel = gchain::kernel_from_json(spec);
    uint64_t seed = require_seed(c, "the diagnostic samples trajectories");
    gchain::PastSpec x = gchain::parse_past(x_text, kernel->alphabet());
    gchain::PastSpec y = gchain::parse_past(y_text, kernel->alphabet());
    gchain::SimConfig cfg{seed, c.replicas, horizon, 0, c.tol};
    gchain::DkSeries series = gchain::dk_series(*kernel, x, y, n, horizon, !plain, cfg);

    write_file(fs::path(c.out_dir) / "dk_series.csv", gchain::dk_series_csv(series));
    json report;
    report["schema_version"] = kSchemaVersion;
    report["command"] = "diagnose";
    report["kernel"] = kernel->tag();
    report["x"] = x.to_string(kernel->alphabet());
    report["y"] = y.to_string(kernel->alphabet());
    report["mode"] = plain ? "plain" : "sqrt";
    report["series"] = gchain::to_json(series);
    report["config"] = gchain::to_json(cfg);
    write_file(fs::path(c.out_dir) / "diagnose_report.json", report.dump(2) + "\n");
    write_manifest(c, "diagnose", spec,
                   json{{"x", x_text},
                        {"y", y_text},
                        {"horizon", horizon},
                        {"n", n},
                        {"plain", plain},
                        {"replicas", c.replicas},
                        {"tol", c.tol}},
                   {"dk_series.csv", "diagnose_report.json"});
    return 0;
}

// ---- classify-renewal -----------------------------------------------------------

int run_classify(const Common& c, const json& spec, long terms) {
    if (spec.at("kernel").get<std::string>() != "renewal")
        throw gchain::Error(gchain::Error::Code::BadInput,
                            "classify-renewal needs a renewal kernel config");
    const json& params = spec.at("params");
    const json* qi = params.contains("q_inf") ? &params.at("q_inf") : nullptr;
    gchain::kernels::QRule rule = gchain::qrule_from_json(params.at("q"), qi);
    gchain::kernels::RenewalClassification cls =
        gchain::kernels::classify_renewal(rule, terms, 1e-9);
    json report;
    report["schema_version"] = kSchemaVersion;
    report["command"] = "classify-renewal";
    report["classification"] = gchain::to_json(cls);
    write_file(fs::path(c.out_dir) / "classification.json", report.dump(2) + "\n");
    write_manifest(c, "classify-renewal", spec, json{{"terms", terms}},
                   {"classification.json"});
    std::cout << report["classification"]["case"].dump() << "\n";
    return 0;
}

// ---- tv -------------------------------------------------------------------------

int run_tv(const Common& c, const json& spec, const std::string& x_text,
           const std::string& y_text, int n, int len, const std::string& mode) {
    gchain::KernelPtr kernel = gchain::kernel_from_json(spec);
    gchain::PastSpec x = gchain::parse_past(x_text, kernel->alphabet());
    gchain::PastSpec y = gchain::parse_past(y_text, kernel->alphabet());
    gchain::TvEstimate est;
    gchain::SimConfig cfg{0, c.replicas, 1, 0, c.tol};
    if (mode == "exact") {
        est = gchain::tv_window_exact(*kernel, x, y, n, len);
    } else if (mode == "mc") {
        cfg.seed = require_seed(c, "Monte-Carlo total variation is randomized");
        est = gchain::tv_window_mc(*kernel, x, y, n, len, cfg);
    } else {
        throw gchain::Error(gchain::Error::Code::BadInput, "mode must be exact or mc");
    }
    json report;
    report["schema_version"] = kSchemaVersion;
    report["command"] = "tv";
    report["kernel"] = kernel->tag();
    report["x"] = x.to_string(kernel->alphabet());
    report["y"] = y.to_string(kernel->alphabet());
    report["window_start"] = n;
    report["window_len"] = len;
    report["mode"] = mode;
    report["estimate"] = gchain::to_json(est);
    report["config"] = gchain::to_json(cfg);
    write_file(fs::path(c.out_dir) / "tv_report.json", report.dump(2) + "\n");
    write_manifest(c, "tv", spec,
                   json{{"x", x_text},
                        {"y", y_text},
                        {"n", n},
                        {"k", len},
                        {"mode", mode},
                        {"replicas", c.replicas},
                        {"tol", c.tol}},
                   {"tv_report.json"});
    return 0;
}

// ---- replay ---------------------------------------------------------------------

int run_replay(const std::string& manifest_path, const std::string& out_dir);

int dispatch(const std::string& command, const Common& c, const json& spec,
             const json& params) {
    if (command == "check")
        return run_check(c, spec, params.at("K").get<int>(), params.at("trials").get<int>(),
                         params.at("cap").get<int64_t>());
    if (command == "simulate")
        return run_simulate(c, spec, params.at("past").get<std::string>(),
                            params.at("length").get<int64_t>());
    if (command == "diagnose")
        return run_diagnose(c, spec, params.at("x").get<std::string>(),
                            params.at("y").get<std::string>(),
                            params.at("horizon").get<int64_t>(), params.at("n").get<int>(),
                            params.at("plain").get<bool>());
    if (command == "classify-renewal") return run_classify(c, spec, params.at("terms").get<long>());
    if (command == "tv")
        return run_tv(c, spec, params.at("x").get<std::string>(),
                      params.at("y").get<std::string>(), params.at("n").get<int>(),
                      params.at("k").get<int>(), params.at("mode").get<std::string>());
    throw gchain::Error(gchain::Error::Code::BadInput, "unknown command in manifest: " + command);
}

int run_replay(const std::string& manifest_path, const std::string& out_dir) {
    std::ifstream in(manifest_path);
    if (!in)
        throw gchain::Error(gchain::Error::Code::BadInput,
                            "cannot open manifest: " + manifest_path);
    json m = json::parse(in);
    Common c;
    c.out_dir = out_dir;
    if (!m.at("seed").is_null()) c.seed = m.at("seed").get<uint64_t>();
    const json& params = m.at("parameters");
    if (params.contains("tol")) c.tol = params.at("tol").get<double>();
    if (params.contains("replicas")) c.replicas = params.at("replicas").get<int>();
    return dispatch(m.at("command").get<std::string>(), c, m.at("kernel_spec"), params);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"analysis and simulation of chains of infinite order with forbidden transitions"};
    app.require_subcommand(1);
    app.fallthrough();

    Common common;
    app.add_option("--config", common.config_path, "kernel JSON document");
    app.add_option("--seed", common.seed, "deterministic seed (required for randomized runs)");
    app.add_option("--out", common.out_dir, "output directory");
    app.add_option("--replicas", common.replicas, "Monte-Carlo replicas");
    app.add_option("--tol", common.tol, "evaluation tolerance");
    app.add_option("--format", common.format, "json|csv (reports always include JSON)");

    auto* check = app.add_subcommand("check", "structural uniqueness conditions");
    int K = 2;
    int trials = 10000;
    int64_t cap = 1000000;
    check->add_option("--K", K, "word length for the bound matrices");
    check->add_option("--trials", trials, "Monte-Carlo hitting trials per start");
    check->add_option("--cap", cap, "hitting step cap");

    auto* simulate = app.add_subcommand("simulate", "sample a path");
    std::string past_text = "0^inf";
    int64_t length = 1000;
    simulate->add_option("--past", past_text, "start past, e.g. \"0^inf 11\"");
    simulate->add_option("--length", length, "number of symbols");

    auto* diagnose = app.add_subcommand("diagnose", "per-step squared divergence series");
    std::string x_text, y_text;
    int64_t horizon = 40;
    int n_start = 1;
    bool plain = false;
    diagnose->add_option("--x", x_text, "first past")->required();
    diagnose->add_option("--y", y_text, "second past")->required();
    diagnose->add_option("--horizon", horizon, "number of series terms");
    diagnose->add_option("--n", n_start, "window start (grows on support mismatch)");
    auto* plain_flag = diagnose->add_flag("--plain", plain, "differences of g instead of sqrt(g)");
    diagnose->add_flag("--sqrt", "square-root route (default)")->excludes(plain_flag);

    auto* classify = app.add_subcommand("classify-renewal", "existence/uniqueness cases");
    long terms = 1000000;
    classify->add_option("--terms", terms, "numeric partial-sum budget");

    auto* tv = app.add_subcommand("tv", "total variation over a window");
    int tv_n = 0, tv_k = 1;
    std::string tv_mode = "exact";
    tv->add_option("--x", x_text, "first past")->required();
    tv->add_option("--y", y_text, "second past")->required();
    tv->add_option("--n", tv_n, "window start");
    tv->add_option("--k", tv_k, "window length");
    tv->add_option("--mode", tv_mode, "exact|mc");

    auto* replay = app.add_subcommand("replay", "re-run a recorded manifest");
    std::string manifest_path;
    replay->add_option("--manifest", manifest_path, "manifest.json from a previous run")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (replay->parsed()) return run_replay(manifest_path, common.out_dir);
        if (common.config_path.empty())
            throw gchain::Error(gchain::Error::Code::BadInput, "--config is required");
        json spec = load_config(common.config_path);
        if (check->parsed()) return run_check(common, spec, K, trials, cap);
        if (simulate->parsed()) return run_simulate(common, spec, past_text, length);
        if (diagnose->parsed())
            return run_diagnose(common, spec, x_text, y_text, horizon, n_start, plain);
        if (classify->parsed()) return run_classify(common, spec, terms);
        if (tv->parsed()) return run_tv(common, spec, x_text, y_text, tv_n, tv_k, tv_mode);
    } catch (const gchain::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const json::exception& e) {
        std::cerr << "error: malformed input: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
