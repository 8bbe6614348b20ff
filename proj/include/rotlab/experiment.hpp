#pragma once

#include <sstream>
#include <vector>

#include "rotlab/limits.hpp"
#include "rotlab/stats.hpp"

namespace rotlab {

/// Per-stage summary of a subsequence experiment: the exact law of y_{n_j},
/// its rescaled moments, the certified sigma_j, the KS distance of the
/// rescaled law from g(sigma_j), and the characteristic-function gap at
/// lambda = 1. KS is evaluated through the exact identity
/// KS(law of y/sqrt j, g(s)) = KS(law of y, g(s sqrt j)).
struct StageRecord {
    int stage = 1;           // j
    Int n;                   // iterate count n_j
    CReal sigma;             // ||y_{n_j}/sqrt(j)||_2
    CReal ks;                // KS(mu_j, g(sigma_j))
    Rat m2, m4;              // exact moments of the rescaled law
    CReal char_gap1;         // |J(1) - e^{-sigma_j^2/2}|
    std::vector<Atom> atoms; // exact law of y_{n_j} (unrescaled values)
};

inline StageRecord run_stage(const BirkhoffConfig& cfg, const SubsequencePlan& plan, int j,
                             mpfr_prec_t prec = kPrecDefault) {
    StageRecord rec;
    rec.stage = j;
    rec.n = plan.indices.at(static_cast<std::size_t>(j - 1));
    long long n = rec.n.convert_to<long long>();
    Profile prof = birkhoff_profile(cfg, n);
    rec.atoms = prof.atoms;
    rec.m2 = prof.l2_sq / Rat(j);
    rec.m4 = prof.l4_qd / Rat(j) / Rat(j);
    CReal sqrt_j = CReal::from_long(j, prec).sqrt();
    rec.sigma = CReal::from_rat(rec.m2, prec).sqrt();
    CReal sigma_full = CReal::from_rat(prof.l2_sq, prec).sqrt();
    ValueDistribution law(prof.atoms);
    if (prof.l2_sq == 0) {
        // degenerate stage: the law is a point mass; report KS against nothing
        rec.ks = CReal::from_long(1, prec);
        rec.char_gap1 = CReal::from_long(0, prec);
        return rec;
    }
    rec.ks = ks_distance(law, GaussianRef(sigma_full), prec);
    rec.char_gap1 = char_gap(law, CReal::from_long(1, prec) / sqrt_j, rec.sigma, prec);
    return rec;
}

inline std::vector<StageRecord> run_stages(const BirkhoffConfig& cfg, const SubsequencePlan& plan,
                                           mpfr_prec_t prec = kPrecDefault) {
    std::vector<StageRecord> out;
    for (int j = 1; j <= plan.stages(); ++j) out.push_back(run_stage(cfg, plan, j, prec));
    return out;
}

inline std::string stages_csv(const std::vector<StageRecord>& stages) {
    std::ostringstream os;
    os << "n,r_n,sigma_n,ks,m2,m4,char_gap_at_lambda1\n";
    for (const auto& s : stages)
        os << s.stage << ',' << s.n.str() << ',' << s.sigma.decimal(10) << ',' << s.ks.decimal(6)
           << ',' << to_double(s.m2) << ',' << to_double(s.m4) << ',' << s.char_gap1.decimal(6)
           << '\n';
    return os.str();
}

/// Two-column histogram of the rescaled law (value, mass), plot-ready.
inline std::string stage_histogram(const StageRecord& s) {
    std::ostringstream os;
    double root = std::sqrt(static_cast<double>(s.stage));
    for (const auto& a : s.atoms) os << to_double(a.value) / root << ' ' << to_double(a.mass) << '\n';
    return os.str();
}

}  // namespace rotlab
