#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "rotlab/stats.hpp"

#include "helpers.hpp"

using namespace rotlab;
using rotlab::testing::random_step_function;

namespace {

ValueDistribution pm_one() {
    return ValueDistribution({{Rat(-1), Rat(1, 2)}, {Rat(1), Rat(1, 2)}});
}

// Inverse standard normal CDF by Newton iteration on std::erf (test oracle).
double phi_inv(double p) {
    double x = 0;
    for (int i = 0; i < 80; ++i) {
        double cdf = 0.5 * (1 + std::erf(x / std::sqrt(2.0)));
        double pdf = std::exp(-x * x / 2) / std::sqrt(2 * M_PI);
        x -= (cdf - p) / pdf;
    }
    return x;
}

Rat rat_from_double(double x) {
    // doubles are dyadic rationals; 2^40 resolution is plenty for the oracle
    long long scaled = static_cast<long long>(std::llround(x * (1LL << 40)));
    return Rat(Int(scaled), Int(1) << 40);
}

}  // namespace

TEST_CASE("ks: point mass at 0 against g(1) is 1/2") {
    ValueDistribution point({{Rat(0), Rat(1)}});
    CReal ks = ks_distance(point, GaussianRef::from_rat(Rat(1)));
    CHECK(ks.contains(Rat(1, 2)));
    CHECK(ks.width() < 1e-20);
}

TEST_CASE("ks: symmetric two-point law against g(1) is Phi(1) - 1/2") {
    // oracle: Phi(1) - 1/2 = 0.341344746068543...
    CReal ks = ks_distance(pm_one(), GaussianRef::from_rat(Rat(1)));
    CHECK(std::abs(ks.mid() - 0.341344746068543) < 1e-12);
    CHECK(ks.width() < 1e-20);
}

TEST_CASE("ks: discretizations of the gaussian converge") {
    auto discretize = [&](int N) {
        std::vector<Atom> atoms;
        for (int j = 1; j <= N; ++j) {
            double p = (j - 0.5) / N;
            atoms.push_back({rat_from_double(phi_inv(p)), Rat(1, N)});
        }
        return ValueDistribution(std::move(atoms));
    };
    auto ref = GaussianRef::from_rat(Rat(1));
    CReal k64 = ks_distance(discretize(64), ref);
    CReal k256 = ks_distance(discretize(256), ref);
    CHECK(k64.hi_d() < 0.01);
    CHECK(k256.hi_d() < k64.hi_d());
    CHECK(k256.hi_d() < 0.003);
}

TEST_CASE("ks is strictly positive for atomic laws") {
    SplitMix64 rng(7);
    for (int i = 0; i < 20; ++i) {
        auto law = random_step_function(rng).distribution();
        CReal ks = ks_distance(law, GaussianRef::from_rat(Rat(1)));
        CHECK(ks.lo_d() > 0);
        CHECK(ks.hi_d() <= 1.0 + 1e-15);
    }
}

TEST_CASE("moments: examples") {
    auto m = moments(pm_one(), 4);
    CHECK(m[0] == 0);
    CHECK(m[1] == 1);
    CHECK(m[2] == 0);
    CHECK(m[3] == 1);
    ValueDistribution point({{Rat(-3, 2), Rat(1)}});
    auto mp = moments(point, 3);
    CHECK(mp[0] == Rat(-3, 2));
    CHECK(mp[1] == Rat(9, 4));
    CHECK(mp[2] == Rat(-27, 8));
}

TEST_CASE("moments agree with exact norms and obey the classical inequalities") {
    SplitMix64 rng(11);
    for (int i = 0; i < 25; ++i) {
        auto f = random_step_function(rng);
        auto law = f.distribution();
        auto nm = f.norms();
        auto m = moments(law, 4);
        CHECK(m[0] == nm.mean);
        CHECK(m[1] == nm.l2_sq);
        CHECK(m[3] == nm.l4_qd);
        CHECK(m[1] >= m[0] * m[0]);          // variance >= 0
        CHECK(m[3] >= m[1] * m[1]);          // Cauchy-Schwarz
    }
}

TEST_CASE("char_fn: examples and symmetries") {
    auto law = pm_one();
    for (long lam : {0L, 1L, 2L, 7L}) {
        CComplex c = char_fn(law, Rat(lam));
        // +-1 symmetric law: characteristic function is cos(lambda)
        CHECK(std::abs(c.re.mid() - std::cos(static_cast<double>(lam))) < 1e-15);
        CHECK(c.im.contains(Rat(0)));
    }
    CHECK(char_fn(law, Rat(0)).re.contains(Rat(1)));
    SplitMix64 rng(13);
    for (int i = 0; i < 15; ++i) {
        auto l2 = random_step_function(rng).distribution();
        Rat lam = testing::random_rat(rng, -5, 5, 8);
        CComplex a = char_fn(l2, lam);
        CComplex b = char_fn(l2, -lam);
        CHECK(std::abs(a.re.mid() - b.re.mid()) < 1e-25);
        CHECK(std::abs(a.im.mid() + b.im.mid()) < 1e-25);
        CHECK(a.modulus().lo_d() <= 1.0 + 1e-15);
    }
}

TEST_CASE("char_gap: zero lambda gives zero gap") {
    CReal gap = char_gap(pm_one(), CReal::from_long(0), CReal::from_long(1));
    CHECK(gap.contains(Rat(0)));
    CHECK(gap.width() < 1e-20);
}

TEST_CASE("ks rescaling identity: law of v/sqrt(n) vs g(s) equals law of v vs g(s sqrt(n))") {
    // n = 4: exact rescaled atoms +-1/2
    ValueDistribution rescaled({{Rat(-1, 2), Rat(1, 2)}, {Rat(1, 2), Rat(1, 2)}});
    CReal lhs = ks_distance(rescaled, GaussianRef::from_rat(Rat(3, 4)));
    CReal rhs = ks_distance(pm_one(), GaussianRef::from_rat(Rat(3, 2)));
    CHECK(std::abs(lhs.mid() - rhs.mid()) < 1e-25);
}

TEST_CASE("gaussian ref rejects nonpositive sigma") {
    CHECK_THROWS_AS(GaussianRef::from_rat(Rat(0)), usage_error);
    CHECK_THROWS_AS(GaussianRef::from_rat(Rat(-1)), usage_error);
}
