// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria. Each criterion pins its thresholds in code; trend-style
// criteria use the declared trend rule (last <= first, second-half envelope
// <= 2x first-half envelope) exactly as the verification suite does.

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <vector>

#include "rotlab/experiment.hpp"
#include "rotlab/verify.hpp"

using namespace rotlab;

namespace {

int failures = 0;

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double s() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

void verdict(int id, const std::string& name, bool pass, const std::string& detail,
             double seconds) {
    if (!pass) ++failures;
    std::ostringstream line;
    line << (pass ? "[PASS] " : "[FAIL] ") << "criterion " << id << ": " << name << " — "
         << detail << " (" << std::fixed << std::setprecision(1) << seconds << " s)";
    std::cout << line.str() << std::endl;
}

void info(const std::string& s) { std::cout << "       " << s << std::endl; }

std::vector<QuotientSpec> test_alphas() {
    std::vector<QuotientSpec> out;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) out.push_back(QuotientSpec::ead(3, 3, seed));
    out.push_back(QuotientSpec::golden());
    return out;
}

int index_of_largest_q_below(const QuotientSpec& spec, const Int& cap) {
    int n = 0;
    while (true) {
        auto more = convergents(spec, n + 1);
        if (more[static_cast<std::size_t>(n + 1)].q > cap) return n;
        ++n;
    }
}

long long mem_available_kb() {
    std::ifstream is("/proc/meminfo");
    std::string key;
    long long val;
    std::string unit;
    while (is >> key >> val >> unit)
        if (key == "MemAvailable:") return val;
    return -1;
}

bool declared_trend_ok(const std::vector<double>& v) {
    if (v.size() < 2) return true;
    if (v.back() > v.front()) return false;
    std::size_t half = v.size() / 2;
    double first = 0, second = 0;
    for (std::size_t i = 0; i < v.size(); ++i)
        (i < half ? first : second) = std::max(i < half ? first : second, v[i]);
    return second <= 2 * first;
}

// ---- criteria ----

void criterion1() {
    Timer t;
    const Int cap = 1000000;
    bool ok = true;
    long long instances = 0;
    for (const auto& spec : test_alphas()) {
        int max_index = index_of_largest_q_below(spec, cap);
        auto cs = convergents(spec, max_index);
        long long horizon = cs[static_cast<std::size_t>(max_index)].q.convert_to<long long>();
        auto cfg = make_config(spec, horizon);
        for (int n = 1; n <= max_index; ++n) {
            Rat sup = birkhoff_profile(cfg, cs[n].q.convert_to<long long>()).sup;
            ok = ok && sup <= 4;
            ++instances;
        }
    }
    verdict(1, "exact Denjoy-Koksma suite, q <= 1e6, 21 alphas", ok,
            "sup|y_q| <= 4 exact on " + std::to_string(instances) + " convergents", t.s());
}

void criterion2() {
    Timer t;
    const Int cap = 1000000;
    bool ok = true;
    long long instances = 0;
    for (const auto& spec : test_alphas()) {
        int max_index = index_of_largest_q_below(spec, cap);
        auto cs = convergents(spec, max_index);
        long long horizon = cs[static_cast<std::size_t>(max_index)].q.convert_to<long long>();
        auto cfg = make_config(spec, horizon);
        auto r = check_refined_dk(cfg, max_index);
        ok = ok && r.pass;
        instances += r.instances_checked;
    }
    verdict(2, "refined Denjoy-Koksma suite (odd good q: sup = 1, +-1 values, cell shapes)", ok,
            std::to_string(instances) + " eligible convergents, all exact", t.s());
}

void criterion3() {
    Timer t;
    bool ok = true;
    long long instances = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto r = check_parity_lemma(QuotientSpec::ead(3, 3, seed), 30);
        ok = ok && r.pass;
        instances += r.instances_checked;
    }
    verdict(3, "convergent parity/selection suite to index 30, 20 seeded alphas", ok,
            std::to_string(instances) + " exact instances", t.s());
}

void criterion4() {
    Timer t;
    auto cfg = make_config(QuotientSpec::golden(), 233, psi_star(), Int(100001));
    bool ok = true;
    std::string detail;
    for (long long n : {5LL, 13LL, 233LL}) {
        Rat exact = birkhoff_sum(cfg, n).norms().l2_sq;
        auto p = l2_via_parseval(cfg, n, 100000);
        bool contains = p.contains(exact);
        ok = ok && contains;
        detail += "n=" + std::to_string(n) + (contains ? " contained " : " VIOLATED ");
    }
    verdict(4, "Parseval cross-check, golden, K = 1e5", ok, detail, t.s());
}

void criterion5() {
    Timer t;
    auto spec = QuotientSpec::golden();
    auto plan = r_sequence(spec, 20);
    auto cs = convergents(spec, 22);
    bool ok = true;
    for (int j = 1; j <= 20; ++j) ok = ok && plan.indices[j - 1] == cs[j + 2].q - 2;
    long long horizon = plan.indices.back().convert_to<long long>();
    auto cfg = make_config(spec, horizon);
    Rat max_sup = 0;
    for (int j = 1; j <= 20; ++j) {
        auto prof = birkhoff_profile(cfg, plan.indices[j - 1].convert_to<long long>());
        ok = ok && prof.sup <= 6 && prof.l2_sq <= 36;
        if (prof.sup > max_sup) max_sup = prof.sup;
    }
    verdict(5, "golden degeneracy: r_j = q_{j+2} - 2, sup|y_{r_j}| <= 6, sigma_j <= 6/sqrt(j)", ok,
            "j <= 20 exact, max sup = " + rat_str(max_sup), t.s());
}

void criterion6() {
    Timer t;
    int N = 8;
    bool reduced = false;
    long long avail = mem_available_kb();
    if (avail >= 0 && avail < 3000000) {
        N = 7;  // the n = 8 stage sorts ~1.2e8 events; stay inside the sandbox
        reduced = true;
    }
    auto spec = QuotientSpec::periodic({}, {Int(10)});
    auto plan = r_sequence(spec, N);
    auto cfg = make_config(spec, plan.indices.back().convert_to<long long>());
    auto stages = run_stages(cfg, plan);
    bool sigma_ok = true;
    std::vector<double> ks_from_3;
    bool strictly_nonincreasing = true;
    std::string ks_row = "KS:";
    for (const auto& s : stages) {
        sigma_ok = sigma_ok && s.sigma.certainly_ge(Rat(3, 10)) && s.sigma.certainly_le(Rat(4));
        if (s.stage >= 3) ks_from_3.push_back(s.ks.mid());
        if (s.stage >= 4 && stages[static_cast<std::size_t>(s.stage - 2)].ks.mid() < s.ks.mid())
            strictly_nonincreasing = false;
        ks_row += " " + s.ks.decimal(4);
    }
    bool trend = declared_trend_ok(ks_from_3);
    bool final_ks = stages.back().ks.certainly_le(Rat(1, 4));
    bool ok = sigma_ok && trend && final_ks;
    verdict(6,
            "A=10 finite-stage: sigma in [0.3,4], KS trend from n=3, final KS <= 0.25 (n <= " +
                std::to_string(N) + (reduced ? ", reduced for memory)" : ")"),
            ok,
            ks_row + (strictly_nonincreasing ? " | strictly non-increasing"
                                             : " | trend rule (strict monotonicity broken by "
                                               "parity oscillations of ~2e-3)"),
            t.s());
}

void criterion7() {
    Timer t;
    auto cfg = make_config(QuotientSpec::golden(), 4000000);
    auto schedule = default_delta_schedule(6);
    auto plan = greedy_subsequence(cfg, 6, schedule);
    bool ok = !plan.exhausted && plan.stages() == 6;
    std::string detail;
    if (ok) {
        auto cs = convergents(cfg.alpha, 40);
        for (int k = 0; k < 6 && ok; ++k) {
            long long q = plan.block_lengths[k].convert_to<long long>();
            bool good_conv = false;  // some convergent with this q is odd and good
            for (int n = 0; n <= 40; ++n)
                if (cs[n].q == plan.block_lengths[k])
                    good_conv = good_conv || certified_below_half(cfg.alpha, n);
            ok = ok && good_conv && q % 2 == 1;
            long long n0 = k == 0 ? 0 : plan.indices[k - 1].convert_to<long long>();
            auto prof = profile_window(cfg, n0, q);
            ok = ok && prof.sup == 1;
            for (const auto& a : prof.atoms) ok = ok && (a.value == 1 || a.value == -1);
            if (k > 0) ok = ok && plan.deltas[k - 1] <= schedule[k - 1];
        }
        long long n6 = plan.indices[5].convert_to<long long>();
        auto prof6 = birkhoff_profile(cfg, n6);
        Rat m2 = prof6.l2_sq / 6;
        bool m2_ok = m2 >= Rat(8, 10) && m2 <= Rat(12, 10);
        CReal ks = ks_distance(ValueDistribution(prof6.atoms),
                               GaussianRef(CReal::from_long(6).sqrt()));
        bool ks_ok = ks.certainly_le(Rat(3, 10));
        ok = ok && m2_ok && ks_ok;
        detail = "blocks q = ";
        for (int k = 0; k < 6; ++k) detail += plan.block_lengths[k].str() + (k < 5 ? "," : "");
        detail += "; m2(S_6/sqrt6) = " + std::to_string(to_double(m2)) +
                  ", KS vs g(1) = " + ks.decimal(4);
    } else {
        detail = "greedy exhausted after " + std::to_string(plan.stages()) + " blocks";
    }
    verdict(7, "greedy pipeline: J=6, delta_k = 2^-k, golden", ok, detail, t.s());
}

void criterion8() {
    Timer t;
    auto cfg = make_config(QuotientSpec::golden(), 1000);
    auto cs = convergents(cfg.alpha, 15);
    bool stated_ok = true, corrected_ok = true, trend_ok = true;
    int violations = 0;
    std::string first_witness;
    for (long long k : {1LL, 3LL, 5LL}) {
        Rat ka = circle_norm(shadow_frac(cfg.shadow, Int(k)));
        std::vector<CReal> mods;
        std::vector<Rat> qas;
        for (int n = 1; n <= 15; ++n) {
            long long q = cs[n].q.convert_to<long long>();
            CReal mod = fourier_y(cfg, q, k, 192).modulus();
            Rat qa = circle_norm(shadow_frac(cfg.shadow, Int(q)));
            mods.push_back(mod);
            qas.push_back(qa);
            Rat stated = Rat(4) * qa;           // Var(psi*) |q a|_T, as stated
            Rat corrected = stated / (4 * ka);  // with the dropped factor restored
            if (!(mod.hi_rat() <= stated)) {
                stated_ok = false;
                ++violations;
                if (first_witness.empty())
                    first_witness = "k=" + std::to_string(k) + ",q=" + std::to_string(q) +
                                    ": |y_hat| = " + mod.decimal(4) + " > 4|q a|_T = " +
                                    std::to_string(to_double(stated));
            }
            corrected_ok = corrected_ok && mod.hi_rat() <= corrected;
        }
        int start = -1;
        for (std::size_t i = 0; i < qas.size(); ++i)
            if (Rat(k) * qas[i] < Rat(1, 4)) { start = static_cast<int>(i); break; }
        if (start >= 0)
            for (std::size_t i = static_cast<std::size_t>(start); i + 1 < mods.size(); ++i)
                trend_ok = trend_ok && mods[i + 1].certainly_lt(mods[i]);
    }
    bool ok = stated_ok && trend_ok;
    verdict(8, "weak-null: |y_hat_{q_n}(k)| <= Var|q_n a|_T for k in {1,3,5}, n <= 15 + decay", ok,
            stated_ok ? "stated bound and decay both hold"
                      : std::to_string(violations) + " violations of the stated bound, e.g. " +
                            first_witness,
            t.s());
    if (!stated_ok) {
        info("the stated constant omits the 1/|1-e^{2 pi i k a}| factor and is provably");
        info(std::string("violated for k >= 3; restored-factor bound Var|q a|_T/(4|k a|_T): ") +
             (corrected_ok ? "holds for all instances" : "violated"));
        info(std::string("strict decay beyond the k|q_n a|_T < 1/4 threshold: ") +
             (trend_ok ? "holds" : "violated"));
    }
}

void criterion9() {
    Timer t;
    bool ok = true;
    long long total = 0;
    for (const auto& spec : test_alphas()) {
        auto cfg = make_config(spec, 10);
        auto r = cohomology_witness(cfg, 5);
        ok = ok && r.pass && r.instances_checked >= 5;
        total += r.instances_checked;
    }
    verdict(9, "cohomology witnesses: >= 5 odd k with |k a|_T < 1/k and |u_hat| >= 1/pi^2", ok,
            std::to_string(total) + " certified witnesses across 21 alphas", t.s());
}

void criterion10() {
    Timer t;
    auto cfg = make_config(QuotientSpec::golden(), 10000);
    auto y = birkhoff_sum(cfg, 10000);
    SplitMix64 rng(0xACCE97);
    bool ok = true;
    for (int i = 0; i < 1000; ++i) {
        Rat x(Int(rng.next_below(1ULL << 30)), Int(1) << 30);
        ok = ok && birkhoff_value(cfg, x, 10000) == y(x);
    }
    // a second rotation number through the same pair of engines
    auto cfg2 = make_config(QuotientSpec::ead(3, 3, 11), 2000);
    auto y2 = birkhoff_sum(cfg2, 2000);
    for (int i = 0; i < 100; ++i) {
        Rat x(Int(rng.next_below(1ULL << 30)), Int(1) << 30);
        ok = ok && birkhoff_value(cfg2, x, 2000) == y2(x);
    }
    verdict(10, "oracle equivalence: birkhoff_value vs full construction, n = 1e4", ok,
            "1100 random points, exact equality", t.s());
}

}  // namespace

int main() {
    Timer total;
    std::cout << "rotlab acceptance suite" << std::endl;
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
    std::cout << (failures == 0 ? "all criteria passed"
                                : std::to_string(failures) + " criterion(s) failed")
              << " in " << std::fixed << std::setprecision(1) << total.s() << " s" << std::endl;
    return failures == 0 ? 0 : 1;
}
