#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "rotlab/birkhoff.hpp"

#include "helpers.hpp"

using namespace rotlab;
using rotlab::testing::random_step_function;

namespace {

// Independent oracle: piecewise closed-form integration in std::complex
// double arithmetic (entirely separate code path from the certified one).
std::complex<double> fourier_oracle(const StepFunction& f, long long k) {
    std::complex<double> s = 0;
    f.for_each_piece([&](const Rat& b, const Rat& len, const Rat& v) {
        double bb = to_double(b), ee = bb + to_double(len), vv = to_double(v);
        std::complex<double> w(0.0, -2.0 * M_PI * static_cast<double>(k));
        s += vv * (std::exp(w * ee) - std::exp(w * bb)) / w;
    });
    return s;
}

}  // namespace

TEST_CASE("psi_star basics") {
    auto psi = psi_star();
    CHECK(psi(Rat(1, 4)) == 1);
    CHECK(psi(Rat(1, 2)) == -1);
    CHECK(psi.integral() == 0);
    CHECK(psi.variation() == 4);
}

TEST_CASE("birkhoff_sum: empty and single-term sums") {
    auto cfg = make_config(QuotientSpec::golden(), 50);
    CHECK(birkhoff_sum(cfg, 0).is_zero());
    CHECK(birkhoff_sum(cfg, 1) == psi_star());
}

TEST_CASE("golden n=5: sup norm exactly 1") {
    auto cfg = make_config(QuotientSpec::golden(), 50);
    auto y5 = birkhoff_sum(cfg, 5);
    CHECK(y5.norms().sup == 1);
    auto prof = birkhoff_profile(cfg, 5);
    CHECK(prof.sup == 1);
}

TEST_CASE("cocycle identity is exact") {
    for (auto spec : {QuotientSpec::golden(), QuotientSpec::ead(3, 3, 4)}) {
        auto cfg = make_config(spec, 80);
        SplitMix64 rng(11);
        for (int i = 0; i < 10; ++i) {
            long long m = 1 + static_cast<long long>(rng.next_below(39));
            long long n = 1 + static_cast<long long>(rng.next_below(39));
            auto lhs = birkhoff_sum(cfg, m + n);
            auto rhs = birkhoff_sum(cfg, m) + rotate(birkhoff_sum(cfg, n), shadow_frac(cfg.shadow, m));
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("Denjoy-Koksma: sup of y_q bounded by Var(psi) at convergent denominators") {
    auto spec = QuotientSpec::ead(2, 4, 9);
    auto cs = convergents(spec, 8);
    auto cfg = make_config(spec, 600);
    for (int n = 1; n <= 8; ++n) {
        long long q = cs[n].q.convert_to<long long>();
        if (q > 600) break;
        CHECK(birkhoff_profile(cfg, q).sup <= cfg.psi.variation());
    }
    // same statement for a custom zero-mean observable through the generic engine
    SplitMix64 rng(13);
    auto psi = random_step_function(rng, 5, /*mean_zero=*/true);
    auto cfg2 = make_config(spec, 120, psi);
    for (int n = 1; n <= 5; ++n) {
        long long q = cs[n].q.convert_to<long long>();
        if (q > 120) break;
        CHECK(birkhoff_profile(cfg2, q).sup <= psi.variation());
    }
}

TEST_CASE("parity: y_n takes integer values of parity n") {
    auto cfg = make_config(QuotientSpec::golden(), 64);
    for (long long n : {1LL, 2LL, 5LL, 12LL, 33LL}) {
        auto prof = birkhoff_profile(cfg, n);
        CHECK(prof.mean == 0);
        for (const auto& a : prof.atoms) {
            CHECK(den(a.value) == 1);
            CHECK((num(a.value) - n) % 2 == 0);
        }
    }
}

TEST_CASE("birkhoff_value agrees with the full construction") {
    auto cfg = make_config(QuotientSpec::golden(), 1200);
    CHECK(birkhoff_value(cfg, Rat(1, 3), 0) == 0);
    CHECK(birkhoff_value(cfg, Rat(0), 1) == 1);
    auto y = birkhoff_sum(cfg, 1000);
    SplitMix64 rng(17);
    for (int i = 0; i < 50; ++i) {
        Rat x(Int(rng.next_below(1u << 30)), Int(1) << 30);
        CHECK(birkhoff_value(cfg, x, 1000) == y(x));
    }
    // custom observable through the generic paths
    SplitMix64 rng2(19);
    auto psi = random_step_function(rng2, 4, /*mean_zero=*/true);
    auto cfg2 = make_config(QuotientSpec::ead(3, 2, 5), 90, psi);
    auto y2 = birkhoff_sum(cfg2, 77);
    for (int i = 0; i < 20; ++i) {
        Rat x = testing::random_rat01(rng2, 97);
        CHECK(birkhoff_value(cfg2, x, 77) == y2(x));
    }
}

TEST_CASE("grid and generic engines agree") {
    auto cfg = make_config(QuotientSpec::golden(), 250);
    REQUIRE(detail::grid_engine_applies(cfg));
    for (long long n : {1LL, 2LL, 3LL, 8LL, 21LL, 40LL, 233LL}) {
        auto prof = birkhoff_profile(cfg, n);  // grid engine
        auto f = birkhoff_sum(cfg, n);         // generic rational engine
        auto norms = f.norms();
        CHECK(prof.mean == norms.mean);
        CHECK(prof.l2_sq == norms.l2_sq);
        CHECK(prof.l4_qd == norms.l4_qd);
        CHECK(prof.sup == norms.sup);
        CHECK(prof.variation == f.variation());
        CHECK(prof.distribution() == f.distribution());
    }
}

TEST_CASE("window profile equals rotated block") {
    auto cfg = make_config(QuotientSpec::ead(4, 2, 21), 400);
    long long n0 = 37, count = 55;
    auto prof = profile_window(cfg, n0, count);
    auto block = rotate(birkhoff_sum(cfg, count), shadow_frac(cfg.shadow, n0));
    auto norms = block.norms();
    CHECK(prof.l2_sq == norms.l2_sq);
    CHECK(prof.sup == norms.sup);
    CHECK(prof.distribution() == block.distribution());
}

TEST_CASE("grid piece walk reconstructs the exact step function") {
    auto cfg = make_config(QuotientSpec::golden(), 40);
    const Int D = cfg.shadow.Q * 2;
    std::vector<Rat> breaks, vals;
    std::int64_t total = 0;
    for_each_grid_piece(cfg, 0, 13, [&](std::int64_t pos, std::int64_t len, std::int64_t v) {
        breaks.emplace_back(Int(pos), D);
        vals.emplace_back(Int(v));
        total += len;
    });
    CHECK(Int(total) == D);
    CHECK(StepFunction(breaks, vals) == birkhoff_sum(cfg, 13));
}

TEST_CASE("fourier_psi: even harmonics of psi_star vanish exactly") {
    for (long long k : {2LL, 4LL, -6LL, 100LL}) {
        CHECK(fourier_psi(psi_star(), k).is_exact_zero());
    }
}

TEST_CASE("fourier_psi: first harmonic has modulus 2/pi") {
    auto c = fourier_psi(psi_star(), 1);
    CHECK(c.re.is_exact_zero());
    // modulus encloses 2/pi
    CReal two_over_pi = CReal::from_long(2) / CReal::pi();
    CReal mod = c.modulus();
    CHECK(mod.lo_d() <= two_over_pi.hi_d());
    CHECK(mod.hi_d() >= two_over_pi.lo_d());
    // independent double-arithmetic oracle
    auto o = fourier_oracle(psi_star(), 1);
    CHECK(std::abs(std::abs(o) - 2.0 / M_PI) < 1e-9);
    CHECK(std::abs(c.re.mid() - o.real()) < 1e-9);
    CHECK(std::abs(c.im.mid() - o.imag()) < 1e-9);
}

TEST_CASE("fourier_psi matches the double oracle on random observables") {
    SplitMix64 rng(23);
    for (int i = 0; i < 15; ++i) {
        auto f = random_step_function(rng, 6, /*mean_zero=*/true);
        for (long long k : {1LL, 2LL, 3LL, -5LL}) {
            auto c = fourier_psi(f, k);
            auto o = fourier_oracle(f, k);
            CHECK(std::abs(c.re.mid() - o.real()) < 1e-9);
            CHECK(std::abs(c.im.mid() - o.imag()) < 1e-9);
            // decay bound |f_hat(k)| <= Var(f)/(2 pi |k|): no certified violation
            CReal bound = CReal::from_rat(f.variation()) /
                          (CReal::from_long(2 * std::llabs(k)) * CReal::pi());
            CHECK(c.modulus().lo_d() <= bound.hi_d() + 1e-30);
        }
    }
}

TEST_CASE("fourier_y: even harmonics vanish, n=1 reduces to fourier_psi") {
    auto cfg = make_config(QuotientSpec::golden(), 100);
    CHECK(fourier_y(cfg, 13, 2).is_exact_zero());
    auto a = fourier_y(cfg, 1, 3);
    auto b = fourier_psi(psi_star(), 3);
    CHECK(std::abs(a.re.mid() - b.re.mid()) < 1e-25);
    CHECK(std::abs(a.im.mid() - b.im.mid()) < 1e-25);
    CHECK(a.width() < 1e-20);
}

TEST_CASE("fourier_y at convergent denominators: decay bounds") {
    auto cfg = make_config(QuotientSpec::golden(), 100);
    auto cs = convergents(QuotientSpec::golden(), 10);
    for (int n = 2; n <= 10; ++n) {
        long long q = cs[n].q.convert_to<long long>();
        if (q > 100) break;
        for (long long k : {1LL, 3LL, 5LL}) {
            Rat qa = circle_norm(shadow_frac(cfg.shadow, Int(q)));
            Rat ka = circle_norm(shadow_frac(cfg.shadow, Int(k)));
            CReal lhs = fourier_y(cfg, q, k).modulus();
            // |y_q_hat(k)| <= Var(psi) |q a|_T / (4 |k a|_T): exact RHS
            CHECK(lhs.hi_rat() <= Rat(4) * qa / (4 * ka));
            // the k-free form Var(psi)|q a|_T holds for k = 1 on the golden
            // rotation but is not a theorem for larger k (see verify suite)
            if (k == 1) CHECK(lhs.hi_rat() <= Rat(4) * qa);
        }
    }
}

TEST_CASE("parseval interval brackets the exact L2 norm") {
    // harmonics up to K need Q > K, so ask for a large enough denominator
    auto cfg = make_config(QuotientSpec::golden(), 50, psi_star(), Int(20000));
    // n = 1: ||psi_star||_2^2 = 1, interval shrinks onto 1
    auto p1 = l2_via_parseval(cfg, 1, 2000);
    CHECK(p1.contains(Rat(1)));
    CHECK(p1.hi - p1.lo < Rat(1, 1000));
    // n = 5 against the exact step-function norm
    auto p5 = l2_via_parseval(cfg, 5, 10000);
    Rat exact = birkhoff_sum(cfg, 5).norms().l2_sq;
    CHECK(p5.contains(exact));
    // stated width bound: (n Var)^2/(2 pi^2 K) * 2
    Rat nvar = Rat(5) * Rat(4);
    double width_bound = 2 * to_double(nvar * nvar) / (2 * M_PI * M_PI * 10000);
    CHECK(to_double(p5.hi - p5.lo) <= width_bound * 1.01);
}

TEST_CASE("horizon violations raise horizon_error with the required value") {
    auto cfg = make_config(QuotientSpec::golden(), 30);
    try {
        birkhoff_sum(cfg, 31);
        FAIL("expected horizon_error");
    } catch (const horizon_error& e) {
        CHECK(e.required_horizon == 31);
    }
    CHECK_THROWS_AS(birkhoff_value(cfg, Rat(0), 31), horizon_error);
    CHECK_THROWS_AS(birkhoff_profile(cfg, 31), horizon_error);
}

TEST_CASE("config construction enforces the zero-mean hypothesis") {
    CHECK_THROWS_AS(make_config(QuotientSpec::golden(), 10, StepFunction::constant(Rat(1))),
                    usage_error);
}

TEST_CASE("fourier_y rejects harmonics beyond the shadow resolution") {
    auto cfg = make_config(QuotientSpec::golden(), 10);  // Q is small here
    long long huge = cfg.shadow.Q.convert_to<long long>() + 1;
    CHECK_THROWS_AS(fourier_y(cfg, 3, huge), precision_error);
}
