// Copyright 2026 The crudwalk Authors
// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "crudwalk/cli/pipeline.hpp"
#include "crudwalk/demo/demo.hpp"
#include "crudwalk/executor/executor.hpp"
#include "crudwalk/lifecycle/explore.hpp"
#include "crudwalk/speckit/speckit.hpp"

namespace crudwalk::cli {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(path + ": cannot open");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError(path + ": cannot write");
    out << text;
}

struct Logger {
    bool json = false;

    void info(const std::string& event, const nlohmann::ordered_json& fields, const std::string& human) const {
        if (json) {
            nlohmann::ordered_json j{{"event", event}};
            j.update(fields);
            std::cerr << j.dump() << "\n";
        } else {
            std::cerr << human << "\n";
        }
    }
};

int gen_contracts(const std::string& oas_path, const std::string& out, bool as_json, const Logger& log) {
    const auto oas = speckit::load_oas_file(oas_path);
    for (const auto& d : oas.diagnostics) {
        const bool err = d.severity == speckit::Diagnostic::Severity::Error;
        log.info("diagnostic",
                 {{"severity", err ? "error" : "warning"}, {"code", d.code}, {"location", d.location},
                  {"message", d.message}},
                 oas_path + ": " + (err ? "error" : "warning") + ": " + d.location + ": " + d.message + " [" +
                     d.code + "]");
    }
    if (oas.has_errors()) return 2;
    const auto ext = speckit::infer_contracts(oas);
    for (const auto& w : ext.warnings) log.info("warning", {{"message", w}}, "warning: " + w);
    write_file(out, speckit::emit_extended(ext, as_json));
    std::size_t pre = 0, post = 0;
    for (const auto& [id, c] : ext.contracts) {
        pre += c.contract.preconditions.size();
        post += c.contract.postconditions.size();
    }
    log.info("contracts", {{"operations", ext.operations.size()}, {"requires", pre}, {"ensures", post},
                           {"invariants", ext.invariants.size()}, {"out", out}},
             "wrote " + out + ": " + std::to_string(ext.operations.size()) + " operations, " + std::to_string(pre) +
                 " requires, " + std::to_string(post) + " ensures, " + std::to_string(ext.invariants.size()) +
                 " invariants");
    return 0;
}

int explore_cmd(const std::string& model_path, const std::string& out, std::size_t max_states, const Logger& log) {
    const auto model = lifecycle::load_model_file(model_path);
    lifecycle::ExploreOptions opts;
    opts.max_states = max_states;
    try {
        const auto ex = lifecycle::explore(model, opts);
        write_file(out, ssg::emit_dot(lifecycle::to_raw_graph(model, ex)));
        log.info("explore",
                 {{"model", model.name}, {"states", ex.states.size()}, {"transitions", ex.transitions.size()},
                  {"finals", ex.final_count()}, {"out", out}},
                 model.name + ": " + std::to_string(ex.states.size()) + " states, " +
                     std::to_string(ex.transitions.size()) + " transitions, " + std::to_string(ex.final_count()) +
                     " final; wrote " + out);
    } catch (const lifecycle::ExploreError& e) {
        std::cerr << model_path << ": " << e.what() << "\n" << lifecycle::format_trace(e.trace());
        return 2;
    }
    return 0;
}

int clean_cmd(const std::string& in, const std::string& out, const Logger& log) {
    const auto text = read_file(in);
    const auto raw = ssg::parse_dot(text);
    const auto cleaned = ssg::clean(raw);
    const auto rep = ssg::dedup_report(raw, cleaned);
    const auto dot = ssg::emit_dot(cleaned);
    write_file(out, dot);
    char pct[32];
    std::snprintf(pct, sizeof pct, "%.1f%%", rep.statement_reduction() * 100);
    log.info("clean",
             {{"statements", rep.original_statements}, {"clean_statements", rep.clean_statements},
              {"bytes", text.size()}, {"clean_bytes", dot.size()}, {"reduction", rep.statement_reduction()}},
             in + ": " + std::to_string(rep.original_statements) + " -> " + std::to_string(rep.clean_statements) +
                 " statements (" + pct + " removed); wrote " + out);
    return 0;
}

int sequences_cmd(const std::string& dot, const std::string& spec_path, const std::string& out, std::uint64_t seed,
                  int max_puts, const ssg::BuildOptions& options, const Logger& log) {
    const auto raw = ssg::parse_dot(read_file(dot));
    const auto spec = speckit::load_extended_file(spec_path);
    const auto b = build_sequences(raw, speckit::make_catalog(spec), seed, max_puts, options);
    auto doc = seqgen::sequences_to_json(b.sequences, seed, &b.graph);
    const auto& c = b.coverage;
    doc["coverage"] = {{"states", c.state_coverage}, {"transitions", c.transition_coverage},
                       {"labels", c.label_coverage}};
    write_file(out, doc.dump(2) + "\n");
    const auto len = seqgen::length_stats(b.sequences);
    char buf[160];
    std::snprintf(buf, sizeof buf, "%zu sequences (length %zu..%zu, avg %.2f); coverage states %.1f%% transitions %.1f%%",
                  b.sequences.size(), len.min, len.max, len.avg, c.state_coverage, c.transition_coverage);
    log.info("sequences",
             {{"sequences", b.sequences.size()}, {"min_length", len.min}, {"max_length", len.max},
              {"avg_length", len.avg}, {"state_coverage", c.state_coverage},
              {"transition_coverage", c.transition_coverage}, {"seed", seed}, {"out", out}},
             std::string(buf) + "; wrote " + out);
    return 0;
}

struct TestArgs {
    std::string spec, sequences, report;
    std::vector<std::string> base_urls;
    bool self_host = false;
    std::string faults;
    std::optional<std::uint64_t> seed;
    int timeout_ms = 10000;
    std::size_t get_budget = 256;
    bool no_cleanup = false;
    bool no_timing = false;
};

int test_cmd(const TestArgs& a, const Logger& log) {
    const auto spec = speckit::load_extended_file(a.spec);
    const auto file = seqgen::sequences_from_json(nlohmann::json::parse(read_file(a.sequences)));
    executor::RunConfig cfg;
    cfg.seed = a.seed.value_or(file.seed);
    cfg.timeout = std::chrono::milliseconds(a.timeout_ms);
    cfg.cleanup = !a.no_cleanup;
    cfg.get_budget = a.get_budget;
    cfg.on_outcome = [&log](const executor::OperationOutcome& o) {
        if (o.classification == executor::Classification::Ok && !log.json) return;
        log.info("outcome", executor::outcome_to_json(o, false),
                 "[" + executor::to_string(o.classification) + "] seq " + std::to_string(o.sequence_index) + " #" +
                     std::to_string(o.call_index) + " " + o.call + ": " + o.reason);
    };

    std::vector<std::unique_ptr<demo::DemoServer>> servers;
    if (a.self_host) {
        const auto faults = demo::FaultFlags::parse(a.faults);
        if (!a.base_urls.empty()) throw InputError("--self-host and --base-url are exclusive");
        servers.push_back(std::make_unique<demo::DemoServer>(faults, derive_seed(cfg.seed, "demo")));
        servers.back()->start();
        cfg.base_urls.push_back(servers.back()->base_url());
    }
    for (const auto& u : a.base_urls) cfg.base_urls.push_back(u);
    if (cfg.base_urls.empty()) throw InputError("test needs --base-url or --self-host");

    const auto report = executor::run_campaign(file.sequences, spec, cfg);
    auto json = executor::report_to_json(report, !a.no_timing);
    if (!a.report.empty()) write_file(a.report, json.dump(2) + "\n");
    const auto& s = report.summary;
    log.info("summary", {{"ok", s.ok}, {"warn", s.warn}, {"err", s.err}, {"not_tested", s.not_tested}},
             "OK " + std::to_string(s.ok) + "  WARN " + std::to_string(s.warn) + "  ERR " + std::to_string(s.err) +
                 "  NOT_TESTED " + std::to_string(s.not_tested));
    return executor::exit_code(report);
}

demo::DemoServer* g_server = nullptr;

int demo_cmd(const std::string& host, int port, const std::string& faults, std::uint64_t seed, const Logger& log) {
    demo::DemoServer server(demo::FaultFlags::parse(faults), seed);
    g_server = &server;
    std::signal(SIGINT, [](int) {
        if (g_server) g_server->stop();
    });
    std::signal(SIGTERM, [](int) {
        if (g_server) g_server->stop();
    });
    log.info("demo-server", {{"host", host}, {"port", port}, {"faults", demo::FaultFlags::parse(faults).str()}},
             "serving Tournaments on http://" + host + ":" + std::to_string(port));
    server.serve_blocking(host, port);
    g_server = nullptr;
    return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"crudwalk: model-based testing of CRUD REST services"};
    app.require_subcommand(1);
    Logger log;
    app.add_flag("--json-logs", log.json, "Machine-readable progress on stderr");

    std::string oas, out = "-";
    bool as_json = false;
    auto* gen = app.add_subcommand("gen-contracts", "Validate an OpenAPI document and add CRUD contracts");
    gen->add_option("oas", oas, "OpenAPI 3 document (YAML or JSON)")->required()->check(CLI::ExistingFile);
    gen->add_option("-o,--out", out, "Extended document")->required();
    gen->add_flag("--json", as_json, "Write JSON instead of YAML");

    std::string model;
    std::size_t max_states = 10'000'000;
    auto* exp = app.add_subcommand("explore", "Explore a lifecycle model into a DOT state graph");
    exp->add_option("model", model, "Lifecycle model (YAML)")->required()->check(CLI::ExistingFile);
    exp->add_option("-o,--out", out, "DOT output")->required();
    exp->add_option("--max-states", max_states, "Abort beyond this many states");

    std::string dot_in;
    auto* cln = app.add_subcommand("clean", "Drop duplicated DOT statements");
    cln->add_option("dot", dot_in, "DOT input")->required()->check(CLI::ExistingFile);
    cln->add_option("-o,--out", out, "DOT output")->required();

    std::string spec_path;
    std::uint64_t seed = 0;
    int max_puts = 0;
    std::string final_pattern, initial_id;
    bool prune = false, self_loops = false;
    auto* seq = app.add_subcommand("sequences", "Select test sequences from a state graph");
    seq->add_option("dot", dot_in, "DOT state graph")->required()->check(CLI::ExistingFile);
    seq->add_option("--spec", spec_path, "Extended OpenAPI document")->required()->check(CLI::ExistingFile);
    seq->add_option("-o,--out", out, "Sequences JSON")->required();
    seq->add_option("--seed", seed, "Seed for PUT insertion");
    seq->add_option("--puts-max", max_puts, "Consecutive PUTs per resource")->check(CLI::Range(0, 3));
    seq->add_option("--final-pattern", final_pattern, "Regex marking final states in node labels");
    seq->add_option("--initial", initial_id, "DOT id of the initial state");
    seq->add_flag("--prune", prune, "Drop states that are unreachable or cannot finish");
    seq->add_flag("--allow-self-loops", self_loops);

    TestArgs ta;
    std::uint64_t test_seed = 0;
    auto* tst = app.add_subcommand("test", "Run sequences against a service");
    tst->add_option("--spec", ta.spec, "Extended OpenAPI document")->required()->check(CLI::ExistingFile);
    tst->add_option("--sequences", ta.sequences, "Sequences JSON")->required()->check(CLI::ExistingFile);
    tst->add_option("--base-url", ta.base_urls, "Service root; repeat for parallel isolated instances");
    tst->add_flag("--self-host", ta.self_host, "Start the demo service in-process");
    tst->add_option("--faults", ta.faults, "Faults for --self-host (comma list or 'all')");
    auto* seed_opt = tst->add_option("--seed", test_seed, "Overrides the seed recorded in the sequences file");
    tst->add_option("--timeout-ms", ta.timeout_ms, "Per-request timeout")->check(CLI::PositiveNumber);
    tst->add_option("--report", ta.report, "Report JSON");
    tst->add_option("--get-budget", ta.get_budget, "GET requests allowed per contract evaluation")
        ->check(CLI::PositiveNumber);
    tst->add_flag("--no-cleanup", ta.no_cleanup, "Keep resources between sequences");
    tst->add_flag("--no-timing", ta.no_timing, "Omit latencies from the report");

    std::string host = "127.0.0.1", faults;
    int port = 8080;
    std::uint64_t demo_seed = 0;
    auto* dem = app.add_subcommand("demo-server", "Serve the Tournaments demo");
    dem->add_option("--host", host);
    dem->add_option("--port", port)->check(CLI::Range(1, 65535));
    dem->add_option("--faults", faults, "Comma list of faults or 'all'");
    dem->add_option("--seed", demo_seed, "Seed for the random-delete fault");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*gen) return gen_contracts(oas, out, as_json, log);
        if (*exp) return explore_cmd(model, out, max_states, log);
        if (*cln) return clean_cmd(dot_in, out, log);
        if (*seq) {
            ssg::BuildOptions opts;
            if (!final_pattern.empty()) opts.final_pattern = final_pattern;
            if (!initial_id.empty()) opts.initial_id = initial_id;
            opts.prune = prune;
            opts.allow_self_loops = self_loops;
            return sequences_cmd(dot_in, spec_path, out, seed, max_puts, opts, log);
        }
        if (*tst) {
            if (seed_opt->count() > 0) ta.seed = test_seed;
            return test_cmd(ta, log);
        }
        if (*dem) return demo_cmd(host, port, faults, demo_seed, log);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: malformed JSON: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

}  // namespace crudwalk::cli
