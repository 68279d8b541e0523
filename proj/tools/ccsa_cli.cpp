// ccsa: generate, solve, round, derandomize, and verify correlation-clustering
// instances from the command line. Every machine-readable output is a single
// JSON document; all randomness sits behind --seed.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ccsa/analysis.hpp"
#include "ccsa/derandomize.hpp"
#include "ccsa/json_io.hpp"
#include "ccsa/parallel.hpp"
#include "ccsa/relaxations.hpp"
#include "ccsa/rounding.hpp"

namespace {

using ccsa::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerifyFailed = 2;
constexpr int kExitResourceLimit = 3;

struct GlobalOptions {
    std::string out;
    int threads = 0;
    bool no_timing = false;
};

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

ccsa::SignedGraph read_instance(const std::string& path) {
    if (path.empty() || path == "-") return ccsa::parse_signed_graph(std::cin);
    std::ifstream in(path);
    if (!in) throw ccsa::invalid_argument("cannot open instance file: " + path);
    return ccsa::parse_signed_graph(in);
}

void emit(const GlobalOptions& g, const json& doc) {
    if (g.out.empty() || g.out == "-") {
        std::cout << doc.dump(2) << "\n";
    } else {
        std::ofstream out(g.out);
        if (!out) throw ccsa::invalid_argument("cannot open output file: " + g.out);
        out << doc.dump(2) << "\n";
    }
}

void attach_timing(const GlobalOptions& g, json& doc, const Stopwatch& sw) {
    if (g.no_timing) return;
    // volatile fields live under one key so reports can be compared modulo it
    const auto now = std::chrono::system_clock::now().time_since_epoch();
    doc["timing"] = {
        {"timestamp_ms", std::chrono::duration_cast<std::chrono::milliseconds>(now).count()},
        {"wall_ms", sw.ms()}};
}

json instance_descriptor(const ccsa::SignedGraph& g) {
    return json{{"n", g.n()}, {"plus_edges", g.num_plus()}, {"minus_edges", g.num_minus()}};
}

ccsa::Algo parse_algo(const std::string& s) {
    if (s == "kwik") return ccsa::Algo::KWIK;
    if (s == "lpkwik") return ccsa::Algo::LP_KWIK;
    if (s == "cmsy") return ccsa::Algo::CMSY;
    if (s == "sa") return ccsa::Algo::SA_CORRELATED;
    throw CLI::ValidationError("--algo", "unknown algorithm '" + s + "'");
}

/// Shared relaxation step for rounding commands: the SA valuation for --algo
/// sa, the standard-LP distances wrapped as a pair valuation otherwise.
struct RelaxationResult {
    std::string kind;
    double value = 0.0;
    ccsa::SAValuation valuation;
};

RelaxationResult relax_for(const ccsa::SignedGraph& g, ccsa::Algo algo, int rounds) {
    if (algo == ccsa::Algo::SA_CORRELATED) {
        if (rounds < 3) throw ccsa::invalid_argument("--algo sa needs --rounds at least 3");
        auto sa = ccsa::solve_sa(g, rounds);
        return {"sa(r=" + std::to_string(rounds) + ")", sa.value, std::move(sa.valuation)};
    }
    auto lp = ccsa::solve_standard_lp(g);
    return {"standard-lp", lp.value, ccsa::SAValuation::from_pair_distances(g.n(), lp.x, g)};
}

int cmd_gen(const GlobalOptions& g, const std::string& family, int k, int n, double p_plus,
            std::uint64_t seed) {
    ccsa::SignedGraph inst =
        family == "star" ? ccsa::make_star_gap(k) : ccsa::random_instance(n, p_plus, seed);
    if (g.out.empty() || g.out == "-") {
        ccsa::serialize_signed_graph(inst, std::cout);
    } else {
        std::ofstream out(g.out);
        if (!out) throw ccsa::invalid_argument("cannot open output file: " + g.out);
        ccsa::serialize_signed_graph(inst, out);
    }
    return kExitOk;
}

int cmd_lp(const GlobalOptions& g, const std::string& path) {
    Stopwatch sw;
    auto inst = read_instance(path);
    auto res = ccsa::solve_standard_lp(inst);
    json doc;
    doc["command"] = "lp";
    doc["instance"] = instance_descriptor(inst);
    doc["value"] = res.value;
    doc["cut_rounds"] = res.cut_rounds;
    doc["simplex_iterations"] = res.iterations;
    attach_timing(g, doc, sw);
    emit(g, doc);
    return kExitOk;
}

int cmd_sa(const GlobalOptions& g, const std::string& path, int rounds,
           const std::string& export_valuation) {
    Stopwatch sw;
    auto inst = read_instance(path);
    auto res = ccsa::solve_sa(inst, rounds);
    json doc;
    doc["command"] = "sa";
    doc["instance"] = instance_descriptor(inst);
    doc["rounds"] = rounds;
    doc["value"] = res.value;
    doc["simplex_iterations"] = res.iterations;
    if (!export_valuation.empty()) {
        std::ofstream out(export_valuation);
        if (!out) throw ccsa::invalid_argument("cannot open valuation file: " + export_valuation);
        out << ccsa::valuation_to_json(res.valuation).dump(2) << "\n";
        doc["valuation_file"] = export_valuation;
    }
    attach_timing(g, doc, sw);
    emit(g, doc);
    return kExitOk;
}

int cmd_round(const GlobalOptions& g, const std::string& path, const std::string& algo_name,
              int rounds, long long trials, std::uint64_t seed) {
    Stopwatch sw;
    auto inst = read_instance(path);
    const ccsa::Algo algo = parse_algo(algo_name);
    ccsa::RoundingPolicy policy;
    policy.variant = algo;
    policy.rounds = rounds;

    std::optional<RelaxationResult> relax;
    if (algo != ccsa::Algo::KWIK) relax = relax_for(inst, algo, rounds);

    long long best_cost = -1;
    ccsa::Clustering best = ccsa::Clustering::singletons(inst.n());
    double cost_sum = 0;
    // fixed chunking keeps results independent of the worker count
    const int chunks = static_cast<int>(std::min<long long>(std::max<long long>(trials, 1), 128));
    std::vector<double> chunk_sum(chunks, 0.0);
    std::vector<long long> chunk_best(chunks, -1);
    std::vector<ccsa::Clustering> chunk_cluster(chunks, best);
    ccsa::parallel_for_chunks(chunks, ccsa::resolve_thread_count(g.threads), [&](int c) {
        const long long lo = trials * c / chunks, hi = trials * (c + 1) / chunks;
        ccsa::Rng rng(seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(c));
        for (long long t = lo; t < hi; ++t) {
            ccsa::Clustering cl =
                ccsa::cluster(inst, relax ? &relax->valuation : nullptr, policy, rng);
            const long long cost = ccsa::clustering_cost(inst, cl);
            chunk_sum[c] += static_cast<double>(cost);
            if (chunk_best[c] < 0 || cost < chunk_best[c]) {
                chunk_best[c] = cost;
                chunk_cluster[c] = cl;
            }
        }
    });
    for (int c = 0; c < chunks; ++c) {
        cost_sum += chunk_sum[c];
        if (chunk_best[c] >= 0 && (best_cost < 0 || chunk_best[c] < best_cost)) {
            best_cost = chunk_best[c];
            best = chunk_cluster[c];
        }
    }

    json doc;
    doc["command"] = "round";
    doc["instance"] = instance_descriptor(inst);
    doc["algorithm"] = algo_name;
    if (relax) {
        doc["relaxation"] = relax->kind;
        doc["relaxation_value"] = relax->value;
    }
    doc["seed"] = seed;
    doc["trials"] = trials;
    doc["mean_cost"] = trials > 0 ? cost_sum / static_cast<double>(trials) : 0.0;
    doc["best_cost"] = best_cost;
    // realized cost must equal an independent recomputation
    if (best_cost >= 0 && ccsa::clustering_cost(inst, best) != best_cost)
        throw ccsa::numeric_error("round: recomputed cost mismatch");
    if (best_cost >= 0) doc["best_clustering"] = best.assignment();
    if (inst.n() <= 12) {
        auto [opt_c, opt] = ccsa::brute_force_opt(inst);
        doc["opt"] = opt;
    }
    attach_timing(g, doc, sw);
    emit(g, doc);
    return kExitOk;
}

int cmd_derand(const GlobalOptions& g, const std::string& path, int rounds,
               const std::string& algo_name, const std::string& certificate_out) {
    Stopwatch sw;
    auto inst = read_instance(path);
    const ccsa::Algo algo = parse_algo(algo_name);
    ccsa::RoundingPolicy policy;
    policy.variant = algo;
    policy.rounds = rounds;
    auto relax = relax_for(inst, algo, rounds);
    auto [clustering, cert] = ccsa::derandomized_cluster(inst, relax.valuation, policy);

    json doc;
    doc["command"] = "derand";
    doc["instance"] = instance_descriptor(inst);
    doc["algorithm"] = algo_name;
    doc["relaxation"] = relax.kind;
    doc["relaxation_value"] = relax.value;
    doc["cost"] = cert.total_cost;
    if (ccsa::clustering_cost(inst, clustering) != cert.total_cost)
        throw ccsa::numeric_error("derand: recomputed cost mismatch");
    doc["clustering"] = clustering.assignment();
    doc["certificate"] = {{"lp_value", cert.lp_value},
                          {"max_ratio", cert.max_ratio()},
                          {"bound", cert.bound()},
                          {"iterations", cert.iterations.size()}};
    if (inst.n() <= 12) {
        auto [opt_c, opt] = ccsa::brute_force_opt(inst);
        doc["opt"] = opt;
        if (opt > 0) doc["cost_over_opt"] = static_cast<double>(cert.total_cost) / opt;
    }
    if (!certificate_out.empty()) {
        std::ofstream out(certificate_out);
        if (!out) throw ccsa::invalid_argument("cannot open certificate file: " + certificate_out);
        out << ccsa::certificate_to_json(cert, inst, relax.valuation).dump(2) << "\n";
        doc["certificate_file"] = certificate_out;
    }
    attach_timing(g, doc, sw);
    emit(g, doc);
    return kExitOk;
}

int cmd_oracle(const GlobalOptions& g, const std::string& path) {
    Stopwatch sw;
    auto inst = read_instance(path);
    auto [clustering, opt] = ccsa::brute_force_opt(inst);
    json doc;
    doc["command"] = "oracle";
    doc["instance"] = instance_descriptor(inst);
    doc["cost"] = opt;
    doc["clustering"] = clustering.assignment();
    attach_timing(g, doc, sw);
    emit(g, doc);
    return kExitOk;
}

int cmd_verify_ratios(const GlobalOptions& g, const std::string& table, const std::string& type,
                      long long samples, int grid, std::uint64_t seed) {
    Stopwatch sw;
    ccsa::AnalysisConstants consts;
    std::vector<ccsa::RoundingScheme> schemes;
    if (table == "ideal" || table == "both") schemes.push_back(ccsa::RoundingScheme::Ideal);
    if (table == "special" || table == "both") schemes.push_back(ccsa::RoundingScheme::Special);
    if (schemes.empty()) throw CLI::ValidationError("--table", "expected ideal|special|both");

    std::vector<ccsa::SweepRowKind> kinds;
    auto add_kind = [&](const std::string& t) {
        if (t == "ppp") kinds.push_back(ccsa::SweepRowKind::PPP);
        else if (t == "pmm") kinds.push_back(ccsa::SweepRowKind::PMM);
        else if (t == "mmm") kinds.push_back(ccsa::SweepRowKind::MMM);
        else if (t == "ppm") {
            kinds.push_back(ccsa::SweepRowKind::PPM_ALL);
            kinds.push_back(ccsa::SweepRowKind::PPM_BAD);
            kinds.push_back(ccsa::SweepRowKind::PPM_NOT_BAD);
        } else if (t == "degenerate") kinds.push_back(ccsa::SweepRowKind::DEGENERATE);
        else throw CLI::ValidationError("--type", "expected ppp|ppm|pmm|mmm|degenerate|all");
    };
    if (type == "all") {
        for (const char* t : {"ppp", "ppm", "pmm", "mmm", "degenerate"}) add_kind(t);
    } else {
        add_kind(type);
    }

    struct Job {
        ccsa::SweepRowKind kind;
        ccsa::RoundingScheme scheme;
    };
    std::vector<Job> jobs;
    for (auto sch : schemes)
        for (auto kind : kinds) jobs.push_back({kind, sch});
    std::vector<ccsa::SweepRow> rows(jobs.size());
    ccsa::parallel_for_chunks(static_cast<int>(jobs.size()), ccsa::resolve_thread_count(g.threads),
                              [&](int i) {
                                  ccsa::SweepOptions opt;
                                  opt.samples = samples;
                                  opt.grid = grid;
                                  opt.seed = seed + static_cast<std::uint64_t>(i);
                                  opt.scheme = jobs[i].scheme;
                                  rows[i] = ccsa::sweep_ratio_bounds(jobs[i].kind, consts, opt);
                              });

    bool all_pass = true;
    json out_rows = json::array();
    for (const auto& row : rows) {
        all_pass = all_pass && row.pass;
        out_rows.push_back(ccsa::sweep_row_to_json(row));
    }
    json doc;
    doc["command"] = "verify-ratios";
    doc["samples"] = samples;
    doc["grid"] = grid;
    doc["seed"] = seed;
    doc["rows"] = std::move(out_rows);
    doc["pass"] = all_pass;
    attach_timing(g, doc, sw);
    emit(g, doc);
    return all_pass ? kExitOk : kExitVerifyFailed;
}

int cmd_verify_badbad(const GlobalOptions& g, long long samples, std::uint64_t seed) {
    Stopwatch sw;
    ccsa::Rng rng(seed);
    auto rep = ccsa::check_claim_badbad(samples, rng);
    json doc;
    doc["command"] = "verify-badbad";
    doc["seed"] = seed;
    doc["report"] = ccsa::claim_report_to_json(rep);
    attach_timing(g, doc, sw);
    emit(g, doc);
    return rep.pass ? kExitOk : kExitVerifyFailed;
}

int cmd_verify_numbad(const GlobalOptions& g, int trials, int max_vertices, std::uint64_t seed) {
    Stopwatch sw;
    ccsa::Rng rng(seed);
    auto rep = ccsa::check_claim_numbad(trials, rng, max_vertices);
    json doc;
    doc["command"] = "verify-numbad";
    doc["seed"] = seed;
    doc["report"] = ccsa::claim_report_to_json(rep);
    attach_timing(g, doc, sw);
    emit(g, doc);
    return rep.pass ? kExitOk : kExitVerifyFailed;
}

int cmd_verify_certificate(const GlobalOptions& g, const std::string& instance_path,
                           const std::string& certificate_path) {
    Stopwatch sw;
    std::ifstream in(instance_path);
    if (!in) throw ccsa::invalid_argument("cannot open instance file: " + instance_path);
    auto inst = ccsa::parse_signed_graph(in);
    std::ifstream cert_in(certificate_path);
    if (!cert_in)
        throw ccsa::invalid_argument("cannot open certificate file: " + certificate_path);
    json cert = json::parse(cert_in);
    auto check = ccsa::verify_certificate(inst, cert);
    json doc;
    doc["command"] = "verify-certificate";
    doc["instance"] = instance_descriptor(inst);
    doc["ok"] = check.ok;
    doc["message"] = check.message;
    attach_timing(g, doc, sw);
    emit(g, doc);
    return check.ok ? kExitOk : kExitVerifyFailed;
}

int cmd_bench(const GlobalOptions& g, int n, double p_plus, std::uint64_t seed, long long trials,
              int rounds) {
    Stopwatch sw;
    auto inst = ccsa::random_instance(n, p_plus, seed);
    json doc;
    doc["command"] = "bench";
    doc["instance"] = instance_descriptor(inst);
    doc["seed"] = seed;
    doc["trials"] = trials;

    auto lp = ccsa::solve_standard_lp(inst);
    doc["lp_value"] = lp.value;
    std::optional<ccsa::SASolveResult> sa;
    if (rounds >= 3) {
        sa = ccsa::solve_sa(inst, rounds);
        doc["sa_rounds"] = rounds;
        doc["sa_value"] = sa->value;
    }
    if (n <= 12) {
        auto [opt_c, opt] = ccsa::brute_force_opt(inst);
        doc["opt"] = opt;
    }

    ccsa::SAValuation lp_val = ccsa::SAValuation::from_pair_distances(n, lp.x, inst);
    json algos = json::array();
    for (const std::string name : {"kwik", "lpkwik", "cmsy", "sa"}) {
        if (name == "sa" && !sa) continue;
        ccsa::RoundingPolicy policy;
        policy.variant = parse_algo(name);
        policy.rounds = rounds;
        const ccsa::SAValuation* y = nullptr;
        if (policy.variant == ccsa::Algo::SA_CORRELATED) y = &sa->valuation;
        else if (policy.variant != ccsa::Algo::KWIK) y = &lp_val;
        double sum = 0;
        long long best = -1;
        ccsa::Rng rng(seed ^ 0xabcdef1234567890ULL);
        for (long long t = 0; t < trials; ++t) {
            auto cl = ccsa::cluster(inst, y, policy, rng);
            const long long cost = ccsa::clustering_cost(inst, cl);
            sum += static_cast<double>(cost);
            if (best < 0 || cost < best) best = cost;
        }
        json entry;
        entry["algorithm"] = name;
        entry["mean_cost"] = trials > 0 ? sum / static_cast<double>(trials) : 0.0;
        entry["best_cost"] = best;
        algos.push_back(std::move(entry));
    }
    if (sa) {
        ccsa::RoundingPolicy policy;
        policy.variant = ccsa::Algo::SA_CORRELATED;
        policy.rounds = rounds;
        auto [cl, cert] = ccsa::derandomized_cluster(inst, sa->valuation, policy);
        json entry;
        entry["algorithm"] = "derand-sa";
        entry["cost"] = cert.total_cost;
        entry["certificate_bound"] = cert.bound();
        algos.push_back(std::move(entry));
    }
    doc["algorithms"] = std::move(algos);
    attach_timing(g, doc, sw);
    emit(g, doc);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Correlation clustering: relaxations, pivot rounding, verification"};
    app.require_subcommand(1);
    GlobalOptions g;
    app.add_option("--out", g.out, "write the report (or instance) to this file instead of stdout");
    app.add_option("--threads", g.threads,
                   "worker threads for data-parallel sections (default: CCSA_THREADS or all cores)");
    app.add_flag("--no-timing", g.no_timing, "omit the volatile timing block from reports");

    // gen
    auto* gen = app.add_subcommand("gen", "generate an instance (text format)");
    std::string family;
    int gen_k = 4, gen_n = 8;
    double gen_p = 0.5;
    std::uint64_t gen_seed = 1;
    gen->add_option("family", family, "star|random")
        ->required()
        ->check(CLI::IsMember({"star", "random"}));
    gen->add_option("k", gen_k, "star size (family=star)");
    gen->add_option("--n", gen_n, "vertex count (family=random)");
    gen->add_option("--p-plus", gen_p, "probability of a +edge (family=random)");
    gen->add_option("--seed", gen_seed, "generator seed (family=random)");

    // lp
    auto* lp = app.add_subcommand("lp", "standard LP relaxation value");
    std::string lp_path = "-";
    lp->add_option("instance", lp_path, "instance file, '-' for stdin");

    // sa
    auto* sa = app.add_subcommand("sa", "Sherali-Adams relaxation value");
    std::string sa_path = "-", sa_export;
    int sa_rounds = 3;
    sa->add_option("--rounds", sa_rounds, "hierarchy rounds r >= 2")->required();
    sa->add_option("instance", sa_path, "instance file, '-' for stdin");
    sa->add_option("--export-valuation", sa_export, "write the solved valuation as JSON");

    // round
    auto* round = app.add_subcommand("round", "randomized pivot rounding");
    std::string round_path = "-", round_algo = "sa";
    int round_rounds = 4;
    long long round_trials = 100;
    std::uint64_t round_seed = 1;
    round->add_option("--algo", round_algo, "kwik|lpkwik|cmsy|sa")->required();
    round->add_option("--rounds", round_rounds, "SA rounds (algo=sa)");
    round->add_option("--trials", round_trials, "independent runs");
    round->add_option("--seed", round_seed, "rng seed");
    round->add_option("instance", round_path, "instance file, '-' for stdin");

    // derand
    auto* derand = app.add_subcommand("derand", "deterministic rounding with a certificate");
    std::string derand_path = "-", derand_algo = "sa", derand_cert;
    int derand_rounds = 4;
    derand->add_option("--rounds", derand_rounds, "SA rounds (algo=sa)");
    derand->add_option("--algo", derand_algo, "kwik|lpkwik|cmsy|sa");
    derand->add_option("--certificate", derand_cert, "write the full certificate JSON here");
    derand->add_option("instance", derand_path, "instance file, '-' for stdin");

    // oracle
    auto* oracle = app.add_subcommand("oracle", "brute-force optimum (n <= 12)");
    std::string oracle_path = "-";
    oracle->add_option("instance", oracle_path, "instance file, '-' for stdin");

    // verify
    auto* verify = app.add_subcommand("verify", "verification sweeps and checks");
    verify->require_subcommand(1);
    auto* vr = verify->add_subcommand("ratios", "triangle cost/lp ratio sweeps");
    std::string vr_table = "ideal", vr_type = "all";
    long long vr_samples = 100000;
    int vr_grid = 24;
    std::uint64_t vr_seed = 1;
    vr->add_option("--table", vr_table, "ideal|special|both");
    vr->add_option("--type", vr_type, "ppp|ppm|pmm|mmm|degenerate|all");
    vr->add_option("--samples", vr_samples, "Dirichlet samples per row");
    vr->add_option("--grid", vr_grid, "boundary grid resolution");
    vr->add_option("--seed", vr_seed, "rng seed");
    auto* vb = verify->add_subcommand("badbad", "bad-pair closeness claim check");
    long long vb_samples = 100000;
    std::uint64_t vb_seed = 1;
    vb->add_option("--samples", vb_samples, "feasible q-vectors to test");
    vb->add_option("--seed", vb_seed, "rng seed");
    auto* vn = verify->add_subcommand("numbad", "bad-vs-chargeable counting check");
    int vn_trials = 500, vn_max_vertices = 40;
    std::uint64_t vn_seed = 1;
    vn->add_option("--trials", vn_trials, "triangle-free graphs to test");
    vn->add_option("--max-vertices", vn_max_vertices, "vertex cap per graph");
    vn->add_option("--seed", vn_seed, "rng seed");
    auto* vc = verify->add_subcommand("certificate", "replay a derandomization certificate");
    std::string vc_instance, vc_cert;
    vc->add_option("--instance", vc_instance, "instance file")->required();
    vc->add_option("--certificate", vc_cert, "certificate JSON file")->required();

    // bench
    auto* bench = app.add_subcommand("bench", "run every algorithm on one random instance");
    int bench_n = 10, bench_rounds = 0;
    double bench_p = 0.5;
    std::uint64_t bench_seed = 1;
    long long bench_trials = 200;
    bench->add_option("--n", bench_n, "vertex count");
    bench->add_option("--p-plus", bench_p, "probability of a +edge");
    bench->add_option("--seed", bench_seed, "instance and rounding seed");
    bench->add_option("--trials", bench_trials, "randomized runs per algorithm");
    bench->add_option("--rounds", bench_rounds, "include SA at this level (0 = skip)");

    // global flags (--out, --threads, ...) may appear after the subcommand
    for (auto* sub : app.get_subcommands(nullptr)) {
        sub->fallthrough();
        for (auto* nested : sub->get_subcommands(nullptr)) nested->fallthrough();
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) return cmd_gen(g, family, gen_k, gen_n, gen_p, gen_seed);
        if (*lp) return cmd_lp(g, lp_path);
        if (*sa) return cmd_sa(g, sa_path, sa_rounds, sa_export);
        if (*round)
            return cmd_round(g, round_path, round_algo, round_rounds, round_trials, round_seed);
        if (*derand) return cmd_derand(g, derand_path, derand_rounds, derand_algo, derand_cert);
        if (*oracle) return cmd_oracle(g, oracle_path);
        if (*verify) {
            if (*vr) return cmd_verify_ratios(g, vr_table, vr_type, vr_samples, vr_grid, vr_seed);
            if (*vb) return cmd_verify_badbad(g, vb_samples, vb_seed);
            if (*vn) return cmd_verify_numbad(g, vn_trials, vn_max_vertices, vn_seed);
            if (*vc) return cmd_verify_certificate(g, vc_instance, vc_cert);
        }
        if (*bench) return cmd_bench(g, bench_n, bench_p, bench_seed, bench_trials, bench_rounds);
        std::cerr << "no subcommand selected\n";
        return kExitUsage;
    } catch (const ccsa::resource_limit_error& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return kExitResourceLimit;
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
