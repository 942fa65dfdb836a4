// kcsp command line workbench. Talks to the core exclusively through the C
// API in kcsp.h; reports embed their resolved configuration so any report can
// be reproduced bit-for-bit with `kcsp rerun`.

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kcsp.h"

using nlohmann::json;

namespace {

struct CliError {
    int code;
    std::string message;
};

int exit_code_for(kcsp_status status) {
    switch (status) {
        case KCSP_OK:
            return 0;
        case KCSP_ERROR_BUDGET:
            return 2;
        default:
            return 1;
    }
}

void check(kcsp_status status) {
    if (status != KCSP_OK) throw CliError{exit_code_for(status), kcsp_last_error()};
}

std::string fmt(double v) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", v);
    return buffer;
}

std::string fmt_u64(std::uint64_t v) {
    char buffer[24];
    std::snprintf(buffer, sizeof(buffer), "%" PRIu64, v);
    return buffer;
}

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += "\"\"";
        else
            out += c;
    }
    out += "\"";
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CliError{1, "cannot open file " + path};
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CliError{1, "cannot write file " + path};
    out << contents;
}

std::string config_line(const std::vector<std::string>& argv) {
    json j;
    j["argv"] = argv;
    return j.dump();
}

// CSV report: config comment, header, rows. Echoed to stdout and written to
// -o when given. The embedded config never contains -o or --threads, so
// reruns under any output path or worker count produce identical bytes.
void emit_csv(const std::string& out_path, const std::vector<std::string>& argv,
              const std::string& header, const std::vector<std::string>& rows) {
    std::ostringstream os;
    os << "# config " << config_line(argv) << "\n" << header << "\n";
    for (const std::string& row : rows) os << row << "\n";
    std::cout << os.str();
    if (!out_path.empty()) write_file(out_path, os.str());
}

void emit_json(const std::string& out_path, const std::vector<std::string>& argv, json result) {
    json j;
    j["config"]["argv"] = argv;
    j["result"] = std::move(result);
    std::string text = j.dump(2) + "\n";
    std::cout << text;
    if (!out_path.empty()) write_file(out_path, text);
}

std::string take_string(char* s) {
    std::string out = s ? s : "";
    kcsp_string_free(s);
    return out;
}

template <typename T, void (*Free)(T*)>
using handle = std::unique_ptr<T, std::integral_constant<void (*)(T*), Free>>;

using instance_handle = handle<kcsp_instance, kcsp_instance_free>;
using game_handle = handle<kcsp_game, kcsp_game_free>;
using rfunction_handle = handle<kcsp_rfunction, kcsp_rfunction_free>;
using table_handle = handle<kcsp_table, kcsp_table_free>;

instance_handle load_instance(const std::string& path) {
    kcsp_instance* raw = nullptr;
    check(kcsp_instance_from_json(read_file(path).c_str(), &raw));
    return instance_handle(raw);
}

game_handle load_game(const std::string& path) {
    kcsp_game* raw = nullptr;
    check(kcsp_game_from_json(read_file(path).c_str(), &raw));
    return game_handle(raw);
}

// Resolves (rho, degree, log_delta) from explicit flags or the (k, R)
// schedule. Sentinels: rho < 0, degree < 0, log_delta > 0 mean "default".
void resolve_params(kcsp_params& params, int k, int R, double rho, int degree, double log_delta) {
    params.k = k;
    params.R = R;
    kcsp_params defaults{};
    if (rho < 0.0 || degree < 0 || log_delta > 0.0) {
        if (kcsp_params_default(k, R, &defaults) != KCSP_OK)
            throw CliError{1, std::string(kcsp_last_error()) +
                                  " (pass --rho/--degree/--log-delta explicitly)"};
    }
    params.rho = rho >= 0.0 ? rho : defaults.rho;
    params.degree = degree >= 0 ? degree : defaults.degree;
    params.log_delta = log_delta <= 0.0 ? log_delta : defaults.log_delta;
}

int dispatch(const std::vector<std::string>& args);

// -------------------------------------------------------------------------
// subcommands
// -------------------------------------------------------------------------

struct GenCspOpts {
    int n = 6, R = 3, k = 2, m = 10;
    std::uint64_t seed = 0;
    std::string out;
};

int run_gen_csp(const GenCspOpts& o) {
    kcsp_instance* raw = nullptr;
    check(kcsp_instance_random(o.n, o.R, o.k, o.m, o.seed, &raw));
    instance_handle inst(raw);
    char* text = nullptr;
    check(kcsp_instance_to_json(inst.get(), &text));
    write_file(o.out, take_string(text) + "\n");
    std::cout << "wrote " << o.out << " (n=" << o.n << ", R=" << o.R << ", k=" << o.k
              << ", m=" << o.m << ", seed=" << o.seed << ")\n";
    return 0;
}

struct GenGameOpts {
    int V = 3, W = 3, N = 3, d = 2, edges_per_left = 2;
    std::uint64_t seed = 0;
    std::string out;
};

int run_gen_game(const GenGameOpts& o, bool d21) {
    kcsp_game* raw = nullptr;
    check(d21 ? kcsp_game_random_d21(o.V, o.W, o.N, o.d, o.edges_per_left, o.seed, &raw)
              : kcsp_game_random_unique(o.V, o.W, o.N, o.edges_per_left, o.seed, &raw));
    game_handle game(raw);
    char* text = nullptr;
    check(kcsp_game_to_json(game.get(), &text));
    write_file(o.out, take_string(text) + "\n");
    std::cout << "wrote " << o.out << " (" << (d21 ? "d-to-1" : "unique") << ", V=" << o.V
              << ", W=" << o.W << ", N=" << o.N << ", seed=" << o.seed << ")\n";
    return 0;
}

struct SolveOpts {
    std::string algo = "brute";
    std::string base = "brute";
    int k_prime = 2;
    double alpha = -1.0;
    std::uint64_t seed = 0;
    std::uint64_t budget = 10'000'000;
    std::string input;
    std::string out;
};

int run_solve(const SolveOpts& o) {
    instance_handle inst = load_instance(o.input);
    const auto n = static_cast<std::size_t>(kcsp_instance_num_vars(inst.get()));
    std::vector<int> assignment(n);
    double value = 0.0;
    if (o.algo == "brute") {
        check(kcsp_brute_force(inst.get(), o.budget, assignment.data(), n, &value));
    } else if (o.algo == "naive") {
        check(kcsp_solve_naive(inst.get(), o.seed, assignment.data(), n));
        check(kcsp_evaluate(inst.get(), assignment.data(), n, &value));
    } else if (o.algo == "extend") {
        check(kcsp_solve_extend(inst.get(), o.k_prime, o.base.c_str(), o.alpha, o.budget, o.seed,
                                assignment.data(), n));
        check(kcsp_evaluate(inst.get(), assignment.data(), n, &value));
    } else {
        throw CliError{1, "unknown algorithm \"" + o.algo + "\""};
    }

    std::vector<std::string> argv = {"solve", "--algo", o.algo};
    if (o.algo == "extend")
        argv.insert(argv.end(), {"--base", o.base, "--kprime", std::to_string(o.k_prime),
                                 "--alpha", fmt(o.alpha)});
    argv.insert(argv.end(), {"--seed", fmt_u64(o.seed), "--budget", fmt_u64(o.budget), o.input});

    json result;
    result["algo"] = o.algo;
    result["value"] = value;
    result["assignment"] = assignment;
    result["seed"] = o.seed;
    emit_json(o.out, argv, std::move(result));
    return 0;
}

struct ReduceUgOpts {
    int k = 2, R = 3;
    double rho = -1.0;
    int degree = -1;
    double log_delta = 1.0;
    std::string mode = "exact";
    std::int64_t samples = 10'000;
    std::uint64_t seed = 0;
    std::uint64_t budget = 10'000'000;
    std::string input;
    std::string out;
};

int run_reduce_ug(const ReduceUgOpts& o) {
    if (o.mode != "exact" && o.mode != "sampled")
        throw CliError{1, "mode must be exact or sampled"};
    game_handle game = load_game(o.input);
    kcsp_params params{};
    resolve_params(params, o.k, o.R, o.rho, o.degree, o.log_delta);
    kcsp_instance* raw = nullptr;
    check(kcsp_reduce_ug_to_csp(game.get(), &params, o.mode == "exact" ? 0 : 1, o.samples, o.seed,
                                o.budget, &raw));
    instance_handle csp(raw);
    char* text = nullptr;
    check(kcsp_instance_to_json(csp.get(), &text));
    write_file(o.out, take_string(text) + "\n");
    std::cout << "wrote " << o.out << " (" << kcsp_instance_num_constraints(csp.get())
              << " constraints over " << kcsp_instance_num_vars(csp.get()) << " variables)\n";
    return 0;
}

struct DtestOpts {
    std::string function = "dictator";
    std::string file;
    int n = 3, R = 3, k = 2;
    int coord = 0, value = 0;
    double rho = -1.0;
    int degree = -1;
    double log_delta = 1.0;
    std::string mode = "exact";
    std::int64_t trials = 100'000;
    std::uint64_t seed = 0;
    std::uint64_t budget = 10'000'000;
    int threads = 1;
    std::string out;
};

int run_dtest(const DtestOpts& o) {
    kcsp_rfunction* raw = nullptr;
    std::string f_id;
    if (o.function == "dictator") {
        check(kcsp_rfunction_dictator(o.n, o.R, o.coord, &raw));
        f_id = "dictator:" + std::to_string(o.coord);
    } else if (o.function == "constant") {
        check(kcsp_rfunction_constant(o.n, o.R, o.value, &raw));
        f_id = "constant:" + std::to_string(o.value);
    } else if (o.function == "random") {
        check(kcsp_rfunction_random(o.n, o.R, o.seed, &raw));
        f_id = "random:" + fmt_u64(o.seed);
    } else if (o.function == "folded") {
        check(kcsp_rfunction_folded_random(o.n, o.R, o.seed, &raw));
        f_id = "folded:" + fmt_u64(o.seed);
    } else if (o.function == "file") {
        if (o.file.empty()) throw CliError{1, "--function file requires --file"};
        check(kcsp_rfunction_from_json(read_file(o.file).c_str(), &raw));
        f_id = "file:" + o.file;
    } else {
        throw CliError{1, "unknown function kind \"" + o.function + "\""};
    }
    rfunction_handle f(raw);
    const int fn = kcsp_rfunction_num_vars(f.get());
    const int fR = kcsp_rfunction_alphabet(f.get());

    kcsp_params params{};
    resolve_params(params, o.k, fR, o.rho, o.degree, o.log_delta);

    double acceptance = 0.0, stderr_value = 0.0;
    if (o.mode == "exact") {
        check(kcsp_dtest_exact(f.get(), &params, o.budget, &acceptance));
    } else if (o.mode == "mc") {
        check(kcsp_dtest_mc(f.get(), &params, o.trials, o.seed, o.threads, &acceptance,
                            &stderr_value));
    } else {
        throw CliError{1, "mode must be exact or mc"};
    }

    int quasirandom = 0;
    double max_influence = 0.0;
    check(kcsp_quasirandomness_check(f.get(), params.degree, params.log_delta, &quasirandom,
                                     &max_influence, nullptr, nullptr));

    std::vector<std::string> argv = {"dtest", "--function", o.function};
    if (o.function == "file") argv.insert(argv.end(), {"--file", o.file});
    if (o.function == "dictator") argv.insert(argv.end(), {"--coord", std::to_string(o.coord)});
    if (o.function == "constant") argv.insert(argv.end(), {"--value", std::to_string(o.value)});
    argv.insert(argv.end(),
                {"--n", std::to_string(fn), "--R", std::to_string(fR), "--k",
                 std::to_string(params.k), "--rho", fmt(params.rho), "--degree",
                 std::to_string(params.degree), "--log-delta", fmt(params.log_delta), "--mode",
                 o.mode, "--trials", std::to_string(o.trials), "--seed", fmt_u64(o.seed)});

    std::string row = f_id + "," + o.mode + "," + std::to_string(params.k) + "," +
                      std::to_string(fR) + "," + fmt(params.rho) + "," + fmt(acceptance) + "," +
                      fmt(stderr_value) + "," + (quasirandom ? "true" : "false") + "," +
                      fmt(max_influence);
    emit_csv(o.out, argv, "f_id,mode,k,R,rho,acceptance,stderr,quasirandom,max_influence", {row});
    return 0;
}

struct LabOpts {
    int m = 8;
    double p = 2.0, q = 4.0;
    int n = 3, R = 3, k = 2;
    int degree = -1;
    double rho = -1.0;
    int psi_kind = 1;
    int count = 20;
    std::uint64_t seed = 0;
    std::string out;
};

const char* kLabHeader = "check,params,lhs,rhs,margin,aux";

int run_lab_hyper(const LabOpts& o) {
    double rho = o.rho;
    if (rho < 0.0) rho = o.p < o.q ? std::sqrt((o.p - 1.0) / (o.q - 1.0)) : 1.0;
    std::vector<std::string> rows;
    for (int i = 0; i < o.count; ++i) {
        kcsp_table* raw = nullptr;
        check(kcsp_table_random_sign(o.m, o.seed + static_cast<std::uint64_t>(i), &raw));
        table_handle h(raw);
        double lhs = 0.0, rhs = 0.0;
        check(kcsp_lab_hyper(h.get(), o.p, o.q, rho, &lhs, &rhs));
        json params = {{"p", o.p}, {"q", o.q}, {"rho", rho}, {"m", o.m}};
        json aux = {{"seed", o.seed + static_cast<std::uint64_t>(i)}};
        rows.push_back("hypercontractivity," + csv_quote(params.dump()) + "," + fmt(lhs) + "," +
                       fmt(rhs) + "," + fmt(rhs - lhs) + "," + csv_quote(aux.dump()));
    }
    std::vector<std::string> argv = {"lab",    "hyper",   "--m",     std::to_string(o.m),
                                     "--p",    fmt(o.p),  "--q",     fmt(o.q),
                                     "--rho",  fmt(rho),  "--count", std::to_string(o.count),
                                     "--seed", fmt_u64(o.seed)};
    emit_csv(o.out, argv, kLabHeader, rows);
    return 0;
}

int run_lab_invariance(const LabOpts& o) {
    int degree = o.degree >= 0 ? o.degree : 1;
    std::vector<std::string> rows;
    for (int i = 0; i < o.count; ++i) {
        kcsp_table* raw = nullptr;
        check(kcsp_table_random_unit(o.n, o.R, o.seed + static_cast<std::uint64_t>(i), &raw));
        table_handle f(raw);
        double boolean_side = 0.0, r_side = 0.0, max_influence = 0.0;
        check(kcsp_lab_invariance(f.get(), degree, o.psi_kind, o.k, &boolean_side, &r_side,
                                  &max_influence));
        json params = {{"n", o.n},
                       {"R", o.R},
                       {"d", degree},
                       {"psi", o.psi_kind == 1 ? "psi_1" : "psi_" + std::to_string(o.k)}};
        json aux = {{"gap", std::abs(r_side - boolean_side)},
                    {"max_degree_influence", max_influence},
                    {"seed", o.seed + static_cast<std::uint64_t>(i)}};
        rows.push_back("invariance_gap," + csv_quote(params.dump()) + "," + fmt(boolean_side) +
                       "," + fmt(r_side) + "," + fmt(r_side - boolean_side) + "," +
                       csv_quote(aux.dump()));
    }
    std::vector<std::string> argv = {"lab",      "invariance",
                                     "--n",      std::to_string(o.n),
                                     "--R",      std::to_string(o.R),
                                     "--degree", std::to_string(degree),
                                     "--psi",    std::to_string(o.psi_kind),
                                     "--k",      std::to_string(o.k),
                                     "--count",  std::to_string(o.count),
                                     "--seed",   fmt_u64(o.seed)};
    emit_csv(o.out, argv, kLabHeader, rows);
    return 0;
}

int run_lab_mainlemma(const LabOpts& o) {
    kcsp_params params{};
    resolve_params(params, o.k, o.R, o.rho, o.degree, 1.0);
    std::vector<std::string> rows;
    for (int i = 0; i < o.count; ++i) {
        kcsp_table* raw = nullptr;
        check(kcsp_table_random_mean(o.n, o.R, 1.0 / o.R, o.seed + static_cast<std::uint64_t>(i),
                                     &raw));
        table_handle g(raw);
        kcsp_main_lemma_stats stats{};
        check(kcsp_lab_main_lemma(g.get(), params.k, params.rho, params.degree, &stats));
        json pj = {{"k", params.k}, {"R", o.R}, {"rho", params.rho}, {"d", params.degree}};
        json aux = {{"implied_constant", stats.implied_constant},
                    {"max_degree_influence", stats.max_degree_influence},
                    {"high_tail_norm_sq", stats.high_tail_norm_sq},
                    {"half_noise_abs_mean", stats.half_noise_abs_mean},
                    {"half_noise_sq_mean", stats.half_noise_sq_mean},
                    {"seed", o.seed + static_cast<std::uint64_t>(i)}};
        rows.push_back("main_lemma," + csv_quote(pj.dump()) + "," + fmt(stats.lhs) + "," +
                       fmt(stats.reference) + "," + fmt(stats.reference - stats.lhs) + "," +
                       csv_quote(aux.dump()));
    }
    std::vector<std::string> argv = {"lab",      "mainlemma",
                                     "--n",      std::to_string(o.n),
                                     "--R",      std::to_string(o.R),
                                     "--k",      std::to_string(params.k),
                                     "--rho",    fmt(params.rho),
                                     "--degree", std::to_string(params.degree),
                                     "--count",  std::to_string(o.count),
                                     "--seed",   fmt_u64(o.seed)};
    emit_csv(o.out, argv, kLabHeader, rows);
    return 0;
}

struct VerifyOpts {
    std::uint64_t seed = 1;
    int threads = 1;
    std::string out;
};

int run_verify(const VerifyOpts& o) {
    char* report = nullptr;
    kcsp_status status = kcsp_run_verify(o.seed, o.threads, &report);
    std::string text = take_string(report);
    std::cout << text;
    if (!o.out.empty()) {
        json j;
        j["config"]["argv"] = std::vector<std::string>{"verify", "--seed", fmt_u64(o.seed)};
        j["result"]["passed"] = status == KCSP_OK;
        j["result"]["report"] = text;
        write_file(o.out, j.dump(2) + "\n");
    }
    return status == KCSP_OK ? 0 : 3;
}

int run_rerun(const std::string& report_path, const std::string& out, int threads) {
    std::string text = read_file(report_path);
    std::vector<std::string> argv;
    if (text.rfind("# config ", 0) == 0) {
        std::string line = text.substr(9, text.find('\n') - 9);
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.contains("argv"))
            throw CliError{1, "report has no parsable embedded config"};
        argv = j.at("argv").get<std::vector<std::string>>();
    } else {
        json j = json::parse(text, nullptr, false);
        if (j.is_discarded() || !j.contains("config") || !j.at("config").contains("argv"))
            throw CliError{1, "report has no parsable embedded config"};
        argv = j.at("config").at("argv").get<std::vector<std::string>>();
    }
    if (!out.empty()) argv.insert(argv.end(), {"-o", out});
    if (threads > 0) argv.insert(argv.end(), {"--threads", std::to_string(threads)});
    return dispatch(argv);
}

// -------------------------------------------------------------------------

int dispatch(const std::vector<std::string>& args) {
    CLI::App app{"Max k-CSP_R workbench: solvers, reductions, dictator tests, inequality lab"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("gen", "generate instance and game files");
    gen->require_subcommand(1);
    GenCspOpts gen_csp_opts;
    auto* gen_csp = gen->add_subcommand("csp", "random weighted Max k-CSP instance");
    gen_csp->add_option("--n", gen_csp_opts.n, "variables");
    gen_csp->add_option("--R", gen_csp_opts.R, "alphabet size");
    gen_csp->add_option("--k", gen_csp_opts.k, "arity");
    gen_csp->add_option("--m", gen_csp_opts.m, "constraints");
    gen_csp->add_option("--seed", gen_csp_opts.seed, "seed");
    gen_csp->add_option("-o,--out", gen_csp_opts.out, "output file")->required();

    GenGameOpts gen_ug_opts, gen_d21_opts;
    auto* gen_ug = gen->add_subcommand("ug", "random unique game (left regular)");
    gen_ug->add_option("--V", gen_ug_opts.V, "left vertices");
    gen_ug->add_option("--W", gen_ug_opts.W, "right vertices");
    gen_ug->add_option("--N", gen_ug_opts.N, "alphabet");
    gen_ug->add_option("--edges-per-left", gen_ug_opts.edges_per_left, "edges per left vertex");
    gen_ug->add_option("--seed", gen_ug_opts.seed, "seed");
    gen_ug->add_option("-o,--out", gen_ug_opts.out, "output file")->required();
    auto* gen_d21 = gen->add_subcommand("d21", "random d-to-1 game (left regular)");
    gen_d21->add_option("--V", gen_d21_opts.V, "left vertices");
    gen_d21->add_option("--W", gen_d21_opts.W, "right vertices");
    gen_d21->add_option("--N", gen_d21_opts.N, "left alphabet");
    gen_d21->add_option("--d", gen_d21_opts.d, "preimage size");
    gen_d21->add_option("--edges-per-left", gen_d21_opts.edges_per_left, "edges per left vertex");
    gen_d21->add_option("--seed", gen_d21_opts.seed, "seed");
    gen_d21->add_option("-o,--out", gen_d21_opts.out, "output file")->required();

    SolveOpts solve_opts;
    auto* solve = app.add_subcommand("solve", "solve an instance file");
    solve->add_option("--algo", solve_opts.algo, "naive | brute | extend");
    solve->add_option("--base", solve_opts.base, "base algorithm for extend: naive | brute");
    solve->add_option("--kprime", solve_opts.k_prime, "projection arity for extend");
    solve->add_option("--alpha", solve_opts.alpha, "blend probability (<0: default (k-k')/k)");
    solve->add_option("--seed", solve_opts.seed, "seed");
    solve->add_option("--budget", solve_opts.budget, "enumeration budget");
    int ignored_threads = 1;  // resource flag, accepted everywhere rerun may add it
    solve->add_option("--threads", ignored_threads, "worker threads");
    solve->add_option("-o,--out", solve_opts.out, "report file");
    solve->add_option("input", solve_opts.input, "instance JSON file")->required();

    auto* reduce = app.add_subcommand("reduce", "game reductions");
    reduce->require_subcommand(1);
    std::string reduce_d21_input, reduce_d21_out;
    auto* reduce_d21 = reduce->add_subcommand("d21", "d-to-1 game to unique game");
    reduce_d21->add_option("input", reduce_d21_input, "d-to-1 game JSON file")->required();
    reduce_d21->add_option("-o,--out", reduce_d21_out, "output file")->required();

    ReduceUgOpts reduce_ug_opts;
    auto* reduce_ug = reduce->add_subcommand("ug2csp", "unique game to Max k-CSP via the verifier");
    reduce_ug->add_option("--k", reduce_ug_opts.k, "queries");
    reduce_ug->add_option("--R", reduce_ug_opts.R, "CSP alphabet");
    reduce_ug->add_option("--rho", reduce_ug_opts.rho, "correlation (default: schedule)");
    reduce_ug->add_option("--degree", reduce_ug_opts.degree, "truncation degree");
    reduce_ug->add_option("--log-delta", reduce_ug_opts.log_delta, "ln delta");
    reduce_ug->add_option("--mode", reduce_ug_opts.mode, "exact | sampled");
    reduce_ug->add_option("--samples", reduce_ug_opts.samples, "verifier samples");
    reduce_ug->add_option("--seed", reduce_ug_opts.seed, "seed");
    reduce_ug->add_option("--budget", reduce_ug_opts.budget, "enumeration budget");
    reduce_ug->add_option("--threads", ignored_threads, "worker threads");
    reduce_ug->add_option("input", reduce_ug_opts.input, "unique game JSON file")->required();
    reduce_ug->add_option("-o,--out", reduce_ug_opts.out, "output file")->required();

    DtestOpts dtest_opts;
    auto* dtest = app.add_subcommand("dtest", "k-query dictator-vs-quasirandom test");
    dtest->add_option("--function", dtest_opts.function,
                      "dictator | constant | random | folded | file");
    dtest->add_option("--file", dtest_opts.file, "function JSON file");
    dtest->add_option("--n", dtest_opts.n, "coordinates");
    dtest->add_option("--R", dtest_opts.R, "alphabet");
    dtest->add_option("--k", dtest_opts.k, "queries");
    dtest->add_option("--coord", dtest_opts.coord, "dictator coordinate");
    dtest->add_option("--value", dtest_opts.value, "constant value");
    dtest->add_option("--rho", dtest_opts.rho, "correlation (default: schedule)");
    dtest->add_option("--degree", dtest_opts.degree, "influence truncation degree");
    dtest->add_option("--log-delta", dtest_opts.log_delta, "ln delta");
    dtest->add_option("--mode", dtest_opts.mode, "exact | mc");
    dtest->add_option("--trials", dtest_opts.trials, "Monte Carlo trials");
    dtest->add_option("--seed", dtest_opts.seed, "seed");
    dtest->add_option("--budget", dtest_opts.budget, "enumeration budget");
    dtest->add_option("--threads", dtest_opts.threads, "worker threads");
    dtest->add_option("-o,--out", dtest_opts.out, "report CSV file");

    auto* lab = app.add_subcommand("lab", "inequality checks");
    lab->require_subcommand(1);
    LabOpts hyper_opts;
    auto* lab_hyper = lab->add_subcommand("hyper", "hypercontractivity margins");
    lab_hyper->add_option("--m", hyper_opts.m, "cube dimension");
    lab_hyper->add_option("--p", hyper_opts.p, "lower norm");
    lab_hyper->add_option("--q", hyper_opts.q, "upper norm");
    lab_hyper->add_option("--rho", hyper_opts.rho, "noise (default: critical)");
    lab_hyper->add_option("--count", hyper_opts.count, "functions");
    lab_hyper->add_option("--seed", hyper_opts.seed, "seed");
    lab_hyper->add_option("--threads", ignored_threads, "worker threads");
    lab_hyper->add_option("-o,--out", hyper_opts.out, "report CSV file");

    LabOpts invariance_opts;
    auto* lab_inv = lab->add_subcommand("invariance", "invariance-principle gaps");
    lab_inv->add_option("--n", invariance_opts.n, "coordinates");
    lab_inv->add_option("--R", invariance_opts.R, "alphabet");
    lab_inv->add_option("--degree", invariance_opts.degree, "truncation degree");
    lab_inv->add_option("--psi", invariance_opts.psi_kind, "1 for |t|, 2 for clamped t^k");
    lab_inv->add_option("--k", invariance_opts.k, "psi_k exponent");
    lab_inv->add_option("--count", invariance_opts.count, "functions");
    lab_inv->add_option("--seed", invariance_opts.seed, "seed");
    lab_inv->add_option("--threads", ignored_threads, "worker threads");
    lab_inv->add_option("-o,--out", invariance_opts.out, "report CSV file");

    LabOpts mainlemma_opts;
    mainlemma_opts.n = 2;
    auto* lab_main = lab->add_subcommand("mainlemma", "noisy k-th moment quantities");
    lab_main->add_option("--n", mainlemma_opts.n, "coordinates");
    lab_main->add_option("--R", mainlemma_opts.R, "alphabet");
    lab_main->add_option("--k", mainlemma_opts.k, "moment");
    lab_main->add_option("--rho", mainlemma_opts.rho, "correlation (default: schedule)");
    lab_main->add_option("--degree", mainlemma_opts.degree, "truncation degree");
    lab_main->add_option("--count", mainlemma_opts.count, "functions");
    lab_main->add_option("--seed", mainlemma_opts.seed, "seed");
    lab_main->add_option("--threads", ignored_threads, "worker threads");
    lab_main->add_option("-o,--out", mainlemma_opts.out, "report CSV file");

    VerifyOpts verify_opts;
    auto* verify = app.add_subcommand("verify", "cross-module consistency suite");
    verify->add_option("--seed", verify_opts.seed, "seed");
    verify->add_option("--threads", verify_opts.threads, "worker threads");
    verify->add_option("-o,--out", verify_opts.out, "report file");

    std::string rerun_input, rerun_out;
    int rerun_threads = 0;
    auto* rerun = app.add_subcommand("rerun", "re-execute a report's embedded config");
    rerun->add_option("input", rerun_input, "report file")->required();
    rerun->add_option("-o,--out", rerun_out, "output file");
    rerun->add_option("--threads", rerun_threads, "worker threads");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (gen->parsed()) {
            if (gen_csp->parsed()) return run_gen_csp(gen_csp_opts);
            if (gen_ug->parsed()) return run_gen_game(gen_ug_opts, false);
            if (gen_d21->parsed()) return run_gen_game(gen_d21_opts, true);
        }
        if (solve->parsed()) return run_solve(solve_opts);
        if (reduce->parsed()) {
            if (reduce_d21->parsed()) {
                game_handle d21 = load_game(reduce_d21_input);
                kcsp_game* raw = nullptr;
                check(kcsp_reduce_d21_to_ug(d21.get(), &raw));
                game_handle ug(raw);
                char* text = nullptr;
                check(kcsp_game_to_json(ug.get(), &text));
                write_file(reduce_d21_out, take_string(text) + "\n");
                std::cout << "wrote " << reduce_d21_out << "\n";
                return 0;
            }
            if (reduce_ug->parsed()) return run_reduce_ug(reduce_ug_opts);
        }
        if (dtest->parsed()) return run_dtest(dtest_opts);
        if (lab->parsed()) {
            if (lab_hyper->parsed()) return run_lab_hyper(hyper_opts);
            if (lab_inv->parsed()) return run_lab_invariance(invariance_opts);
            if (lab_main->parsed()) return run_lab_mainlemma(mainlemma_opts);
        }
        if (verify->parsed()) return run_verify(verify_opts);
        if (rerun->parsed()) return run_rerun(rerun_input, rerun_out, rerun_threads);
    } catch (const CliError& e) {
        std::cerr << "error: " << e.message << "\n";
        return e.code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    std::cerr << "error: no subcommand selected\n";
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return dispatch(args);
}
