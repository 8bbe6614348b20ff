#pragma once

#include <optional>
#include <vector>

#include "rotlab/birkhoff.hpp"

namespace rotlab {

enum class PlanKind { RSequence, Greedy };

/// A subsequence of iterate counts along which rescaled Birkhoff sums are
/// studied, together with the per-block bookkeeping that certifies it.
struct SubsequencePlan {
    PlanKind kind = PlanKind::RSequence;
    std::vector<Int> indices;        // n_1 < n_2 < ... (iterate counts)
    std::vector<Int> block_lengths;  // q_k per block
    std::vector<Rat> deltas;         // greedy only: measured decorrelation bounds
    std::vector<CReal> sigma;        // filled by sigma_sequence
    bool exhausted = false;          // greedy ran out of certified blocks

    int stages() const { return static_cast<int>(indices.size()); }

    json to_json() const {
        json j;
        j["kind"] = kind == PlanKind::RSequence ? "r_sequence" : "greedy";
        json idx = json::array(), bl = json::array(), dl = json::array(), sg = json::array();
        for (const auto& x : indices) idx.push_back(x.str());
        for (const auto& x : block_lengths) bl.push_back(x.str());
        for (const auto& d : deltas) dl.push_back(rat_to_json(d));
        for (const auto& s : sigma) sg.push_back(s.decimal(10));
        j["indices"] = idx;
        j["block_lengths"] = bl;
        j["deltas"] = dl;
        j["sigma"] = sg;
        j["exhausted"] = exhausted;
        return j;
    }
};

/// r_n = q_1 + ... + q_n, exact.
inline SubsequencePlan r_sequence(const QuotientSpec& alpha, int N) {
    if (N < 1) throw usage_error("r_sequence: N must be >= 1");
    auto cs = convergents(alpha, N);
    SubsequencePlan plan;
    plan.kind = PlanKind::RSequence;
    Int r = 0;
    for (int n = 1; n <= N; ++n) {
        r += cs[n].q;
        plan.indices.push_back(r);
        plan.block_lengths.push_back(cs[n].q);
    }
    return plan;
}

/// sigma_n = ||y_{n_j} / sqrt(j)||_L2 for every stage of the plan, certified
/// from the exact rational L2 norm. Also stored into plan.sigma.
inline std::vector<CReal> sigma_sequence(const BirkhoffConfig& cfg, SubsequencePlan& plan,
                                         mpfr_prec_t prec = kPrecDefault) {
    std::vector<CReal> out;
    out.reserve(plan.indices.size());
    for (std::size_t j = 0; j < plan.indices.size(); ++j) {
        long long n = plan.indices[j].convert_to<long long>();
        Rat l2 = birkhoff_profile(cfg, n).l2_sq;
        out.push_back(CReal::from_rat(l2 / Rat(static_cast<long long>(j + 1)), prec).sqrt());
    }
    plan.sigma = out;
    return out;
}

/// Exact law of y_{n_j} carried together with the sqrt(j) rescaling: atom
/// values are exact (integers for psi_star); the rendered value is v/sqrt(n).
struct RescaledLaw {
    std::vector<Atom> atoms;  // exact law of y_{n_j}
    long long stage = 1;      // j: values are rescaled by 1/sqrt(j)

    ValueDistribution base() const { return ValueDistribution(atoms); }

    std::string to_csv() const {
        std::ostringstream os;
        os << "value_num,value_den_sqrt_n,mass_num,mass_den,value_rescaled,mass\n";
        for (const auto& a : atoms) {
            double vr = to_double(a.value) / std::sqrt(static_cast<double>(stage));
            os << num(a.value).str() << ',' << den(a.value).str() << '*' << "sqrt(" << stage
               << ")," << num(a.mass).str() << ',' << den(a.mass).str() << ',' << vr << ','
               << to_double(a.mass) << '\n';
        }
        return os.str();
    }
};

/// Law of the j-th stage (1-based), values understood as divided by sqrt(j).
inline RescaledLaw rescaled_law(const BirkhoffConfig& cfg, const SubsequencePlan& plan, int j) {
    if (j < 1 || j > plan.stages()) throw usage_error("rescaled_law: stage out of range");
    long long n = plan.indices[static_cast<std::size_t>(j - 1)].convert_to<long long>();
    RescaledLaw out;
    out.atoms = birkhoff_profile(cfg, n).atoms;
    out.stage = j;
    return out;
}

/// delta_k = 2^{-k}, k = 1..J-1 (the summable default schedule).
inline std::vector<Rat> default_delta_schedule(int J) {
    std::vector<Rat> out;
    for (int k = 1; k < J; ++k) out.emplace_back(Int(1), Int(1) << static_cast<unsigned>(k));
    return out;
}

namespace detail {

// Ascending pass over a sorted int64 array viewed cyclically from `start`,
// positions lifted by +D after the wrap so the emitted sequence is monotone.
class CyclicView {
  public:
    CyclicView(const std::vector<std::int64_t>& v, std::int64_t start, std::int64_t D)
        : v_(v), D_(D) {
        begin_ = static_cast<std::size_t>(
            std::lower_bound(v.begin(), v.end(), start) - v.begin());
    }
    bool done() const { return i_ == v_.size(); }
    std::int64_t peek() const {
        std::size_t idx = begin_ + i_;
        if (idx < v_.size()) return v_[idx];
        return v_[idx - v_.size()] + D_;
    }
    void pop() { ++i_; }

  private:
    const std::vector<std::int64_t>& v_;
    std::int64_t D_;
    std::size_t begin_ = 0, i_ = 0;
};

// The minus-jump positions of a psi_star window (plus positions offset by Q),
// sorted ascending, as a lazily generated view.
class MinusView {
  public:
    MinusView(const std::vector<std::int64_t>& plus, std::int64_t D) : plus_(plus), D_(D) {
        split_ = static_cast<std::size_t>(
            std::lower_bound(plus.begin(), plus.end(), D / 2) - plus.begin());
    }
    std::int64_t at(std::size_t i) const {
        const std::size_t upper = plus_.size() - split_;
        return i < upper ? plus_[split_ + i] - D_ / 2 : plus_[i - upper] + D_ / 2;
    }
    std::size_t size() const { return plus_.size(); }

  private:
    const std::vector<std::int64_t>& plus_;
    std::int64_t D_;
    std::size_t split_;
};

class CyclicMinusView {
  public:
    CyclicMinusView(const MinusView& mv, std::int64_t start, std::int64_t D) : mv_(mv), D_(D) {
        std::size_t lo = 0, hi = mv.size();
        while (lo < hi) {
            std::size_t mid = (lo + hi) / 2;
            if (mv.at(mid) < start) lo = mid + 1;
            else hi = mid;
        }
        begin_ = lo;
    }
    bool done() const { return i_ == mv_.size(); }
    std::int64_t peek() const {
        std::size_t idx = begin_ + i_;
        if (idx < mv_.size()) return mv_.at(idx);
        return mv_.at(idx - mv_.size()) + D_;
    }
    void pop() { ++i_; }

  private:
    const MinusView& mv_;
    std::int64_t D_;
    std::size_t begin_ = 0, i_ = 0;
};

// Value of the psi_star window sum at grid position x0 (on Z/2Q), O(count).
inline std::int64_t window_value_at(const ShadowRational& shadow, long long n0, long long count,
                                    std::int64_t x0) {
    const Int D_big = shadow.Q * 2;
    const std::int64_t D = D_big.convert_to<std::int64_t>();
    const std::int64_t Q = D / 2;
    const std::int64_t step = ((shadow.P * 2) % D_big).convert_to<std::int64_t>();
    Int t0 = (Int(x0) + Int(n0) * 2 * shadow.P) % D_big;
    if (t0 < 0) t0 += D_big;
    std::int64_t t = t0.convert_to<std::int64_t>();
    std::int64_t cnt = 0;
    for (long long j = 0; j < count; ++j) {
        if (t < Q) ++cnt;
        t += step;
        if (t >= D) t -= D;
    }
    return 2 * cnt - count;
}

// Measures m * max_j |int_{I_j} f| for f the psi_star window [n0, n0+count)
// against the constancy partition given by `boundaries` (sorted grid
// positions). Early-aborts as soon as the threshold num/den is exceeded.
// Returns the measured value, or nullopt on abort.
inline std::optional<Rat> greedy_delta_measure(const BirkhoffConfig& cfg, long long n0,
                                               long long count,
                                               const std::vector<std::int64_t>& boundaries,
                                               const Rat& threshold) {
    if (num(threshold) >= (Int(1) << 62) || den(threshold) >= (Int(1) << 62))
        throw usage_error("delta schedule entries must have 62-bit numerator/denominator");
    auto sweep = make_grid_sweep(cfg.shadow, n0, count);
    const std::int64_t D = sweep.D;
    const auto m = static_cast<std::int64_t>(boundaries.size());

    // abort iff |acc| * m * den(threshold) > num(threshold) * D
    const __int128 abort_lhs_scale =
        static_cast<__int128>(m) * den(threshold).convert_to<std::int64_t>();
    const __int128 abort_rhs =
        static_cast<__int128>(num(threshold).convert_to<std::int64_t>()) * D;

    const std::int64_t start = boundaries.front();
    CyclicView bview(boundaries, start, D);
    CyclicView pview(sweep.plus, start, D);
    MinusView mraw(sweep.plus, D);
    CyclicMinusView mview(mraw, start, D);

    std::int64_t v = window_value_at(cfg.shadow, n0, count, start);
    // `start` is a boundary of the history partition, never an event of f
    __int128 acc = 0;
    __int128 max_abs = 0;
    std::int64_t prev = start;
    bview.pop();  // the opening boundary

    auto settle = [&](std::int64_t pos) {
        acc += static_cast<__int128>(v) * (pos - prev);
        prev = pos;
    };

    for (;;) {
        const std::int64_t bp = bview.done() ? start + D : bview.peek();
        const std::int64_t pp = pview.done() ? start + D + 1 : pview.peek();
        const std::int64_t mp = mview.done() ? start + D + 1 : mview.peek();
        if (bp <= pp && bp <= mp) {
            settle(bp);
            __int128 a = acc < 0 ? -acc : acc;
            if (a > max_abs) max_abs = a;
            if (a * abort_lhs_scale > abort_rhs) return std::nullopt;
            acc = 0;
            if (bview.done()) break;
            bview.pop();
        } else if (pp < mp) {
            settle(pp);
            v += 2;
            pview.pop();
        } else {
            settle(mp);
            v -= 2;
            mview.pop();
        }
    }
    return Rat(Int(m) * detail::int128_to_int(max_abs), Int(D));
}

// Sorted event positions (plus and minus jumps) of a psi_star window.
inline std::vector<std::int64_t> window_event_positions(const BirkhoffConfig& cfg, long long n0,
                                                        long long count) {
    auto sweep = make_grid_sweep(cfg.shadow, n0, count);
    MinusView mv(sweep.plus, sweep.D);
    std::vector<std::int64_t> out;
    out.reserve(sweep.plus.size() * 2);
    std::size_t a = 0, b = 0;
    while (a < sweep.plus.size() || b < mv.size()) {
        if (b == mv.size() || (a < sweep.plus.size() && sweep.plus[a] < mv.at(b)))
            out.push_back(sweep.plus[a++]);
        else
            out.push_back(mv.at(b++));
    }
    return out;
}

}  // namespace detail

/// Greedy construction of the sparse certified subsequence: blocks are
/// Birkhoff sums at odd convergent denominators with certified beta < 1/2
/// (so each block is +-1 valued), and block k+1 is pushed far enough out
/// that max_j |int_{I_j} f_{k+1}| <= delta_k / m(k) over the m(k) constancy
/// intervals I_j of the history sum. That single finitely-checkable bound
/// dominates |int f_{k+1} e^{i b (f_1+...+f_k)}| <= delta_k for every b.
inline SubsequencePlan greedy_subsequence(const BirkhoffConfig& cfg, int J,
                                          const std::vector<Rat>& delta_schedule) {
    if (J < 1) throw usage_error("greedy_subsequence: J must be >= 1");
    if (!is_psi_star(cfg.psi))
        throw usage_error("greedy_subsequence: the certified block structure requires psi_star");
    if (static_cast<int>(delta_schedule.size()) < J - 1)
        throw usage_error("greedy_subsequence: schedule must provide J-1 deltas");
    for (const auto& d : delta_schedule)
        if (d <= 0) throw usage_error("greedy_subsequence: deltas must be positive");

    SubsequencePlan plan;
    plan.kind = PlanKind::Greedy;
    const long long horizon = cfg.shadow.horizon;

    std::vector<std::int64_t> boundaries;  // events of the history sum S_k
    long long n_hist = 0;
    Int last_q = 0;
    int idx = 0;  // next convergent index to try

    for (int k = 1; k <= J; ++k) {
        bool accepted = false;
        while (!accepted) {
            auto cs = convergents(cfg.alpha, idx);
            const Int& q_big = cs[static_cast<std::size_t>(idx)].q;
            if (Int(n_hist) + q_big > horizon) {
                plan.exhausted = true;
                return plan;
            }
            const long long q = q_big.convert_to<long long>();
            ++idx;
            if (q_big <= last_q || q_big % 2 == 0) continue;
            if (!certified_below_half(cfg.alpha, idx - 1)) continue;
            if (k > 1) {
                auto measured = detail::greedy_delta_measure(cfg, n_hist, q, boundaries,
                                                             delta_schedule[k - 2]);
                if (!measured) continue;
                plan.deltas.push_back(*measured);
            }
            if (k < J) {
                auto ev = detail::window_event_positions(cfg, n_hist, q);
                std::vector<std::int64_t> merged;
                merged.reserve(boundaries.size() + ev.size());
                std::merge(boundaries.begin(), boundaries.end(), ev.begin(), ev.end(),
                           std::back_inserter(merged));
                boundaries = std::move(merged);
            }
            n_hist += q;
            last_q = q_big;
            plan.indices.emplace_back(n_hist);
            plan.block_lengths.push_back(q_big);
            accepted = true;
        }
    }
    return plan;
}

}  // namespace rotlab
