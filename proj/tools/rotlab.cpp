// rotlab: batch front end for the circle-rotation Birkhoff-sum laboratory.
//
// Subcommands:
//   alpha       continued-fraction tables (convergents, parities, beta)
//   experiment  subsequence pipeline: plan -> laws -> sigma -> KS/moments
//   verify      the lemma-checker suite, JSON reports
//   report      summarize previously written reports
//
// Exit codes: 0 ok, 1 hard-check failure, 2 usage, 3 precision/horizon.

#include <CLI11.hpp>

#include <cstdlib>
#include <optional>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "rotlab/experiment.hpp"
#include "rotlab/verify.hpp"

namespace fs = std::filesystem;
using namespace rotlab;

namespace {

constexpr const char* kVersion = ROTLAB_VERSION;

std::string hash_hex(const json& config) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(config.dump())));
    return buf;
}

std::string file_header(const std::string& hash) {
    return std::string("# rotlab ") + kVersion + "\n# config " + hash + "\n";
}

void write_text(const fs::path& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw usage_error("cannot write " + path.string());
    os << content;
}

json load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw usage_error("cannot read config file " + path);
    try {
        return json::parse(is);
    } catch (const json::exception& e) {
        throw usage_error("config parse error: " + std::string(e.what()));
    }
}

json meta_block(const std::string& hash) {
    return json{{"tool", "rotlab"}, {"version", kVersion}, {"config_hash", hash}};
}

std::vector<Int> parse_int_list(const std::string& csv) {
    std::vector<Int> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.emplace_back(tok);
    }
    return out;
}

StepFunction psi_from_config(const json& cfg) {
    if (!cfg.contains("psi") || cfg["psi"] == "psi_star") return psi_star();
    return StepFunction::from_json(cfg.at("psi"));
}

std::string default_out(const std::string& flag, const json& cfg) {
    if (!flag.empty()) return flag;
    if (cfg.contains("out")) return cfg["out"].get<std::string>();
    if (const char* env = std::getenv("ROTLAB_OUT")) return env;
    return "rotlab_out";
}

struct AlphaOpts {
    bool golden = false;
    std::string ead, explicit_list, periodic;
    int N = 10;
    int order = -1;
    std::string out;
};

QuotientSpec alpha_from_opts(const AlphaOpts& o) {
    int picked = int(o.golden) + int(!o.ead.empty()) + int(!o.explicit_list.empty()) +
                 int(!o.periodic.empty());
    if (picked != 1)
        throw usage_error("choose exactly one of --golden, --ead, --explicit, --periodic");
    if (o.golden) return QuotientSpec::golden();
    if (!o.explicit_list.empty()) return QuotientSpec::explicit_list(parse_int_list(o.explicit_list));
    if (!o.periodic.empty()) {
        auto colon = o.periodic.find(':');
        std::vector<Int> pre, period;
        if (colon == std::string::npos) {
            period = parse_int_list(o.periodic);
        } else {
            pre = parse_int_list(o.periodic.substr(0, colon));
            period = parse_int_list(o.periodic.substr(colon + 1));
        }
        return QuotientSpec::periodic(std::move(pre), std::move(period));
    }
    // --ead A=5,d=2,seed=1
    std::uint64_t A = 0, d = 0, seed = 0;
    bool have_seed = false;
    std::stringstream ss(o.ead);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) throw usage_error("bad --ead component: " + tok);
        std::string key = tok.substr(0, eq);
        std::uint64_t val = std::strtoull(tok.substr(eq + 1).c_str(), nullptr, 10);
        if (key == "A") A = val;
        else if (key == "d") d = val;
        else if (key == "seed") { seed = val; have_seed = true; }
        else throw usage_error("bad --ead key: " + key);
    }
    if (!have_seed) throw usage_error("--ead requires an explicit seed (reproducibility)");
    return QuotientSpec::ead(A, d, seed);
}

int cmd_alpha(const AlphaOpts& o) {
    QuotientSpec spec = alpha_from_opts(o);
    int order = o.order > 0 ? o.order : o.N + 8;
    if (order <= o.N + 2) throw usage_error("--precision-order must exceed N + 2");
    auto cs = convergents(spec, o.N);  // validates quotient availability first
    convergents(spec, order + 1);      // and the certification depth
    std::ostringstream table;
    table << "n,a_n,p_n,q_n,parity,beta_lo,beta_hi,good\n";
    for (int n = 0; n <= o.N; ++n) {
        auto aq = approx_quality(spec, n, order);
        table << n << ',' << (n == 0 ? spec.a0().str() : spec.quotient(n).str()) << ','
              << cs[n].p.str() << ',' << cs[n].q.str() << ','
              << (cs[n].q % 2 == 0 ? "even" : "odd") << ',' << to_double(aq.beta_lo) << ','
              << to_double(aq.beta_hi) << ',' << (aq.below_half ? 1 : 0) << '\n';
    }
    std::cout << "alpha = " << spec.describe() << "\n" << table.str();
    if (!o.out.empty()) {
        json cfgj{{"alpha", spec.to_json()}, {"N", o.N}, {"precision_order", order}};
        write_text(o.out, file_header(hash_hex(cfgj)) + table.str());
    }
    return 0;
}

struct RunOpts {
    std::string config_path;
    std::string out;
    long long horizon = -1;
    long long seed = -1;
};

QuotientSpec alpha_from_config(const json& cfg) {
    if (!cfg.contains("alpha")) throw usage_error("config needs an \"alpha\" spec");
    return QuotientSpec::from_json(cfg["alpha"]);
}

Int min_den_from_config(const json& cfg) {
    if (!cfg.contains("min_den")) return 0;
    return Int(cfg["min_den"].get<std::string>());
}

// folds --seed / --horizon overrides into the config document so the config
// hash reflects what actually ran
json effective_config(const RunOpts& o) {
    json cfgj = load_config(o.config_path);
    if (o.seed >= 0) {
        if (!cfgj.contains("alpha") || cfgj["alpha"].value("kind", "") != "ead")
            throw usage_error("--seed only applies to E(A,d) alpha specs");
        cfgj["alpha"]["seed"] = static_cast<std::uint64_t>(o.seed);
    }
    if (o.horizon > 0) cfgj["horizon"] = o.horizon;
    return cfgj;
}

int cmd_experiment(const RunOpts& o) {
    json cfgj = effective_config(o);
    const std::string hash = hash_hex(cfgj);
    QuotientSpec alpha = alpha_from_config(cfgj);
    StepFunction psi = psi_from_config(cfgj);
    if (!cfgj.contains("plan")) throw usage_error("config needs a \"plan\" block");
    const json& pj = cfgj["plan"];
    const std::string kind = pj.value("kind", "r_sequence");

    SubsequencePlan plan;
    std::optional<BirkhoffConfig> cfg;
    if (kind == "r_sequence") {
        int N = pj.value("N", 4);
        plan = r_sequence(alpha, N);
        Int needed = plan.indices.back();
        if (needed > (Int(1) << 40))
            throw horizon_error("r_" + std::to_string(N) + " = " + needed.str() +
                                " is beyond desk scale; reduce N");
        long long horizon = cfgj.value("horizon", needed.convert_to<long long>());
        if (Int(horizon) < needed)
            throw horizon_error("configured horizon is below r_N = " + needed.str(),
                                needed.convert_to<long long>());
        cfg.emplace(make_config(alpha, horizon, psi, min_den_from_config(cfgj)));
    } else if (kind == "greedy") {
        if (!cfgj.contains("horizon"))
            throw usage_error("greedy experiments require an explicit \"horizon\"");
        long long horizon = cfgj["horizon"].get<long long>();
        cfg.emplace(make_config(alpha, horizon, psi, min_den_from_config(cfgj)));
        int J = pj.value("J", 4);
        std::vector<Rat> schedule;
        if (pj.contains("delta_schedule"))
            for (const auto& s : pj["delta_schedule"]) schedule.push_back(parse_rat(s.get<std::string>()));
        else
            schedule = default_delta_schedule(J);
        plan = greedy_subsequence(*cfg, J, schedule);
        if (plan.exhausted)
            std::cout << "greedy: horizon exhausted after " << plan.stages() << " of " << J
                      << " blocks\n";
        if (plan.stages() == 0) throw horizon_error("greedy found no certified blocks");
    } else {
        throw usage_error("unknown plan kind: " + kind);
    }

    auto stages = run_stages(*cfg, plan);
    plan.sigma.clear();
    for (const auto& s : stages) plan.sigma.push_back(s.sigma);

    fs::path out = default_out(o.out, cfgj);
    fs::create_directories(out);
    json plan_doc{{"meta", meta_block(hash)}, {"plan", plan.to_json()}};
    write_text(out / "plan.json", plan_doc.dump(2) + "\n");
    write_text(out / "summary.csv", file_header(hash) + stages_csv(stages));
    for (const auto& s : stages) {
        RescaledLaw law{s.atoms, s.stage};
        write_text(out / ("law_" + std::to_string(s.stage) + ".csv"),
                   file_header(hash) + law.to_csv());
        write_text(out / ("hist_" + std::to_string(s.stage) + ".dat"),
                   file_header(hash) + stage_histogram(s));
    }
    for (const auto& s : stages)
        std::cout << "stage " << s.stage << ": n=" << s.n.str() << " sigma=" << s.sigma.decimal(6)
                  << " ks=" << s.ks.decimal(6) << " m2=" << to_double(s.m2) << '\n';
    std::cout << "wrote " << out.string() << "/{plan.json,summary.csv,law_*.csv,hist_*.dat}\n";
    return 0;
}

int cmd_verify(const RunOpts& o) {
    json cfgj = effective_config(o);
    const std::string hash = hash_hex(cfgj);
    QuotientSpec alpha = alpha_from_config(cfgj);
    StepFunction psi = psi_from_config(cfgj);
    json checks = cfgj.value("checks", json::object());
    const int max_index = checks.value("max_index", 12);
    const int parity_N = checks.value("parity_N", 20);
    const int weak_K = checks.value("weak_K", 3);
    const int weak_max_index = checks.value("weak_max_index", 10);
    const int witnesses = checks.value("witnesses", 5);
    const int beta_exp = checks.value("beta_exp", 1);
    const int growth_N = checks.value("growth_N", 5);
    const int growth_p = checks.value("growth_p", 2);
    const int plan_N = checks.value("plan_N", 4);
    const int l4_N = checks.value("l4_N", plan_N);

    // derive the horizon the whole suite needs
    auto cs = convergents(alpha, std::max(max_index, std::max(weak_max_index, growth_N)) + 1);
    auto need_plan = r_sequence(alpha, std::max(plan_N, growth_N));
    Int needed = cs[static_cast<std::size_t>(max_index)].q;
    needed = std::max(needed, cs[static_cast<std::size_t>(weak_max_index)].q);
    needed = std::max(needed, cs[static_cast<std::size_t>(growth_N)].q);
    needed = std::max(needed, need_plan.indices.back());
    if (cfgj.contains("horizon")) needed = std::max(needed, Int(cfgj["horizon"].get<long long>()));
    if (needed > 100000000)
        throw horizon_error("verify suite would need horizon " + needed.str() +
                            "; reduce check indices");
    BirkhoffConfig cfg = make_config(alpha, needed.convert_to<long long>(), psi,
                                     min_den_from_config(cfgj));
    SubsequencePlan check_plan = r_sequence(alpha, plan_N);

    std::vector<VerificationReport> reports;
    reports.push_back(check_parity_lemma(alpha, parity_N));
    reports.push_back(check_denjoy_koksma(cfg, max_index));
    if (is_psi_star(cfg.psi)) reports.push_back(check_refined_dk(cfg, max_index));
    reports.push_back(check_weak_null(cfg, weak_K, weak_max_index));
    reports.push_back(cohomology_witness(cfg, witnesses));
    reports.push_back(check_growth(cfg, growth_N, growth_p));
    reports.push_back(measure_decorrelation(cfg, check_plan, beta_exp));
    reports.push_back(check_l4(cfg, check_plan, l4_N));

    fs::path out = default_out(o.out, cfgj);
    fs::create_directories(out);
    int hard_failures = 0;
    json agg = json::array();
    for (const auto& r : reports) {
        if (r.hard && !r.pass) ++hard_failures;
        agg.push_back(r.to_json());
        write_text(out / (r.lemma_id + ".json"),
                   json{{"meta", meta_block(hash)}, {"report", r.to_json()}}.dump(2) + "\n");
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.lemma_id << " (instances "
                  << r.instances_checked << ", worst_ratio " << r.worst_ratio << ")\n";
    }
    write_text(out / "report.json",
               json{{"meta", meta_block(hash)}, {"hard_failures", hard_failures}, {"reports", agg}}
                       .dump(2) +
                   "\n");
    std::cout << "wrote " << (out / "report.json").string() << "\n";
    return hard_failures == 0 ? 0 : 1;
}

int cmd_report(const std::string& in_dir) {
    fs::path dir(in_dir);
    fs::path agg = dir / "report.json";
    int hard_failures = 0;
    bool found = false;
    auto show = [&](const json& r) {
        found = true;
        bool pass = r.value("pass", false);
        bool hard = r.value("hard", true);
        if (hard && !pass) ++hard_failures;
        std::cout << (pass ? "[PASS] " : "[FAIL] ") << r.value("lemma_id", std::string("?"))
                  << " (instances " << r.value("instances_checked", 0LL) << ", worst_ratio "
                  << r.value("worst_ratio", 0.0) << (hard ? ", hard" : ", measured") << ")\n";
    };
    if (fs::exists(agg)) {
        json doc = load_config(agg.string());
        for (const auto& r : doc.value("reports", json::array())) show(r);
    } else if (fs::exists(dir)) {
        std::vector<fs::path> files;
        for (const auto& e : fs::directory_iterator(dir))
            if (e.path().extension() == ".json") files.push_back(e.path());
        std::sort(files.begin(), files.end());
        for (const auto& f : files) {
            json doc = load_config(f.string());
            if (doc.contains("report")) show(doc["report"]);
        }
    } else {
        throw usage_error("no such report directory: " + in_dir);
    }
    if (!found) throw usage_error("no reports found in " + in_dir);
    return hard_failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string("rotlab ") + kVersion +
                 " - exact Birkhoff-sum laboratory for circle rotations"};
    app.require_subcommand(1);

    AlphaOpts aopt;
    auto* alpha_cmd = app.add_subcommand("alpha", "continued-fraction table");
    alpha_cmd->add_flag("--golden", aopt.golden, "alpha = (sqrt(5)-1)/2");
    alpha_cmd->add_option("--ead", aopt.ead, "random quotients, e.g. A=5,d=2,seed=1");
    alpha_cmd->add_option("--explicit", aopt.explicit_list, "comma-separated quotients");
    alpha_cmd->add_option("--periodic", aopt.periodic, "pre:period quotient lists");
    alpha_cmd->add_option("-N,--max-index", aopt.N, "largest convergent index");
    alpha_cmd->add_option("--precision-order", aopt.order, "certification order (default N+8)");
    alpha_cmd->add_option("--out", aopt.out, "also write the table as CSV");

    RunOpts eopt, vopt;
    auto* exp_cmd = app.add_subcommand("experiment", "run a subsequence experiment");
    exp_cmd->add_option("--config", eopt.config_path, "JSON config")->required();
    exp_cmd->add_option("--out", eopt.out, "output directory");
    exp_cmd->add_option("--horizon", eopt.horizon, "override the shadow horizon");
    exp_cmd->add_option("--seed", eopt.seed, "override the E(A,d) seed");

    auto* ver_cmd = app.add_subcommand("verify", "run the lemma-checker suite");
    ver_cmd->add_option("--config", vopt.config_path, "JSON config")->required();
    ver_cmd->add_option("--out", vopt.out, "output directory");
    ver_cmd->add_option("--horizon", vopt.horizon, "override the shadow horizon");
    ver_cmd->add_option("--seed", vopt.seed, "override the E(A,d) seed");

    std::string report_in;
    auto* rep_cmd = app.add_subcommand("report", "summarize report JSON files");
    rep_cmd->add_option("--in", report_in, "directory of reports")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(alpha_cmd)) return cmd_alpha(aopt);
        if (app.got_subcommand(exp_cmd)) return cmd_experiment(eopt);
        if (app.got_subcommand(ver_cmd)) return cmd_verify(vopt);
        if (app.got_subcommand(rep_cmd)) return cmd_report(report_in);
    } catch (const usage_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const precision_error& e) {
        std::cerr << "precision error: " << e.what() << "\n";
        return 3;
    } catch (const horizon_error& e) {
        std::cerr << "horizon error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
