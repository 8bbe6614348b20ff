#pragma once

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rotlab/rational.hpp"

namespace rotlab {

/// Exact norm bundle of a step function. Even norms are reported as their
/// exact powers (l2^2, l4^4); callers render floating approximations.
struct Norms {
    Rat mean, l2_sq, l4_qd, sup;
};

struct Atom {
    Rat value, mass;
    bool operator==(const Atom&) const = default;
};

/// Exact law of a step function under Lebesgue measure: finitely many
/// (value, mass) atoms, values strictly increasing, masses summing to 1.
class ValueDistribution {
  public:
    explicit ValueDistribution(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
        Rat total = 0;
        for (std::size_t i = 0; i < atoms_.size(); ++i) {
            if (atoms_[i].mass <= 0) throw usage_error("distribution masses must be positive");
            if (i > 0 && atoms_[i].value <= atoms_[i - 1].value)
                throw usage_error("distribution values must be strictly increasing");
            total += atoms_[i].mass;
        }
        if (total != 1) throw usage_error("distribution masses must sum to 1");
    }

    const std::vector<Atom>& atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }

    bool operator==(const ValueDistribution&) const = default;

    json to_json() const {
        json arr = json::array();
        for (const auto& a : atoms_)
            arr.push_back(json{{"value", rat_to_json(a.value)}, {"mass", rat_to_json(a.mass)}});
        return json{{"atoms", arr}};
    }

    static ValueDistribution from_json(const json& j) {
        std::vector<Atom> atoms;
        for (const auto& a : j.at("atoms"))
            atoms.push_back({rat_from_json(a.at("value")), rat_from_json(a.at("mass"))});
        return ValueDistribution(std::move(atoms));
    }

    std::string to_csv() const {
        std::ostringstream os;
        os << "value,mass,value_exact,mass_exact\n";
        for (const auto& a : atoms_)
            os << to_double(a.value) << ',' << to_double(a.mass) << ',' << rat_str(a.value) << ','
               << rat_str(a.mass) << '\n';
        return os.str();
    }

  private:
    std::vector<Atom> atoms_;
};

/// Piecewise-constant function on T = R/Z with exact rational breakpoints and
/// values. values[i] holds on [breaks[i], breaks[i+1]) and the last piece
/// wraps around through 0 (unless 0 itself is a breakpoint). Canonical form:
/// breakpoints strictly increasing in [0,1), cyclically adjacent values
/// distinct; the constant function is anchored at breakpoint 0.
class StepFunction {
  public:
    StepFunction() : breaks_{Rat(0)}, vals_{Rat(0)} {}

    static StepFunction constant(Rat c) {
        StepFunction f;
        f.vals_[0] = std::move(c);
        return f;
    }

    StepFunction(std::vector<Rat> breaks, std::vector<Rat> values)
        : breaks_(std::move(breaks)), vals_(std::move(values)) {
        if (breaks_.empty() || breaks_.size() != vals_.size())
            throw usage_error("step function needs matching nonempty breakpoints and values");
        for (std::size_t i = 0; i < breaks_.size(); ++i) {
            if (breaks_[i] < 0 || breaks_[i] >= 1)
                throw usage_error("breakpoints must lie in [0,1)");
            if (i > 0 && breaks_[i] <= breaks_[i - 1])
                throw usage_error("breakpoints must be strictly increasing");
        }
        canonicalize();
    }

    std::size_t pieces() const { return breaks_.size(); }
    const std::vector<Rat>& breakpoints() const { return breaks_; }
    const std::vector<Rat>& values() const { return vals_; }
    bool is_constant() const { return breaks_.size() == 1; }
    bool is_zero() const { return is_constant() && vals_[0] == 0; }

    Rat operator()(const Rat& x) const {
        Rat f = frac1(x);
        auto it = std::upper_bound(breaks_.begin(), breaks_.end(), f);
        if (it == breaks_.begin()) return vals_.back();  // wrap piece
        return vals_[static_cast<std::size_t>(it - breaks_.begin()) - 1];
    }

    /// Sum of absolute jumps around the circle (wrap jump included).
    Rat variation() const {
        if (breaks_.size() == 1) return Rat(0);
        Rat v = 0;
        for (std::size_t i = 0; i < vals_.size(); ++i) {
            std::size_t prev = i == 0 ? vals_.size() - 1 : i - 1;
            v += abs(vals_[i] - vals_[prev]);
        }
        return v;
    }

    Norms norms() const {
        Norms n{0, 0, 0, 0};
        for_each_piece([&](const Rat&, const Rat& len, const Rat& v) {
            Rat v2 = v * v;
            n.mean += v * len;
            n.l2_sq += v2 * len;
            n.l4_qd += v2 * v2 * len;
            Rat a = abs(v);
            if (a > n.sup) n.sup = a;
        });
        return n;
    }

    ValueDistribution distribution() const {
        std::map<Rat, Rat> mass;
        for_each_piece([&](const Rat&, const Rat& len, const Rat& v) { mass[v] += len; });
        std::vector<Atom> atoms;
        atoms.reserve(mass.size());
        for (auto& [v, m] : mass) atoms.push_back({v, m});
        return ValueDistribution(std::move(atoms));
    }

    Rat integral() const {
        Rat s = 0;
        for_each_piece([&](const Rat&, const Rat& len, const Rat& v) { s += v * len; });
        return s;
    }

    /// Exact integral over [a, b), 0 <= b - a <= 1 (positions taken mod 1).
    Rat integral(const Rat& a, const Rat& b) const {
        Rat len = b - a;
        if (len < 0 || len > 1) throw usage_error("integral: need 0 <= b - a <= 1");
        if (len == 0) return Rat(0);
        Rat x = frac1(a);
        Rat y = x + len;
        Rat s = 0;
        for_each_piece([&](const Rat& start, const Rat& plen, const Rat& v) {
            // the piece's lifts [start+k, start+plen+k) for k in {-1,0,1} cover
            // every query window inside [0, 2)
            for (int shift = -1; shift <= 1; ++shift) {
                Rat ps = start + shift, pe = start + plen + shift;
                Rat lo = std::max(ps, x), hi = std::min(pe, y);
                if (hi > lo) s += v * (hi - lo);
            }
        });
        return s;
    }

    friend StepFunction rotate(const StepFunction& f, const Rat& gamma) {
        if (f.is_constant()) return f;
        Rat g = frac1(gamma);
        const std::size_t m = f.breaks_.size();
        std::vector<Rat> nb(m);
        std::vector<Rat> nv(m);
        // breakpoints move to b - gamma; split at the wrap and re-stitch sorted
        std::size_t split = static_cast<std::size_t>(
            std::lower_bound(f.breaks_.begin(), f.breaks_.end(), g) - f.breaks_.begin());
        std::size_t k = 0;
        for (std::size_t i = split; i < m; ++i, ++k) {
            nb[k] = f.breaks_[i] - g;
            nv[k] = f.vals_[i];
        }
        for (std::size_t i = 0; i < split; ++i, ++k) {
            nb[k] = f.breaks_[i] - g + 1;
            nv[k] = f.vals_[i];
        }
        StepFunction out;
        out.breaks_ = std::move(nb);
        out.vals_ = std::move(nv);
        out.canonicalize();
        return out;
    }

    friend StepFunction operator+(const StepFunction& f, const StepFunction& g) {
        return combine(f, g, [](const Rat& a, const Rat& b) { return a + b; });
    }

    friend StepFunction operator*(const StepFunction& f, const StepFunction& g) {
        return combine(f, g, [](const Rat& a, const Rat& b) { return a * b; });
    }

    friend StepFunction operator-(const StepFunction& f) { return Rat(-1) * f; }

    friend StepFunction operator-(const StepFunction& f, const StepFunction& g) {
        return f + (-g);
    }

    friend StepFunction operator*(const Rat& c, const StepFunction& f) {
        StepFunction out = f;
        for (auto& v : out.vals_) v *= c;
        out.canonicalize();
        return out;
    }

    bool operator==(const StepFunction&) const = default;

    json to_json() const {
        json bs = json::array(), vs = json::array();
        for (const auto& b : breaks_) bs.push_back(rat_to_json(b));
        for (const auto& v : vals_) vs.push_back(rat_to_json(v));
        return json{{"breakpoints", bs}, {"values", vs}};
    }

    static StepFunction from_json(const json& j) {
        std::vector<Rat> bs, vs;
        for (const auto& b : j.at("breakpoints")) bs.push_back(rat_from_json(b));
        for (const auto& v : j.at("values")) vs.push_back(rat_from_json(v));
        return StepFunction(std::move(bs), std::move(vs));
    }

    /// CSV rows (breakpoint, value), decimal columns first for plotting.
    std::string to_csv() const {
        std::ostringstream os;
        os << "breakpoint,value,breakpoint_exact,value_exact\n";
        for (std::size_t i = 0; i < breaks_.size(); ++i)
            os << to_double(breaks_[i]) << ',' << to_double(vals_[i]) << ',' << rat_str(breaks_[i])
               << ',' << rat_str(vals_[i]) << '\n';
        return os.str();
    }

    template <class Fn>
    void for_each_piece(Fn&& fn) const {
        const std::size_t m = breaks_.size();
        for (std::size_t i = 0; i + 1 < m; ++i) fn(breaks_[i], breaks_[i + 1] - breaks_[i], vals_[i]);
        fn(breaks_[m - 1], breaks_[0] + 1 - breaks_[m - 1], vals_[m - 1]);
    }

  private:
    template <class Op>
    static StepFunction combine(const StepFunction& f, const StepFunction& g, Op op) {
        const auto& fb = f.breaks_;
        const auto& gb = g.breaks_;
        std::vector<Rat> ub;
        ub.reserve(fb.size() + gb.size());
        std::size_t i = 0, j = 0;
        while (i < fb.size() || j < gb.size()) {
            if (j == gb.size() || (i < fb.size() && fb[i] < gb[j])) ub.push_back(fb[i++]);
            else if (i == fb.size() || gb[j] < fb[i]) ub.push_back(gb[j++]);
            else { ub.push_back(fb[i]); ++i; ++j; }
        }
        std::vector<Rat> vals;
        vals.reserve(ub.size());
        std::size_t fi = 0, gj = 0;  // counts of breakpoints <= current position
        for (const Rat& u : ub) {
            while (fi < fb.size() && fb[fi] <= u) ++fi;
            while (gj < gb.size() && gb[gj] <= u) ++gj;
            const Rat& fv = f.vals_[fi == 0 ? fb.size() - 1 : fi - 1];
            const Rat& gv = g.vals_[gj == 0 ? gb.size() - 1 : gj - 1];
            vals.push_back(op(fv, gv));
        }
        StepFunction out;
        out.breaks_ = std::move(ub);
        out.vals_ = std::move(vals);
        out.canonicalize();
        return out;
    }

    void canonicalize() {
        const std::size_t m = breaks_.size();
        if (m == 1) {
            breaks_[0] = 0;
            return;
        }
        bool all_equal = true;
        for (std::size_t i = 1; i < m && all_equal; ++i) all_equal = vals_[i] == vals_[0];
        if (all_equal) {
            Rat v = std::move(vals_[0]);
            breaks_.assign(1, Rat(0));
            vals_.assign(1, std::move(v));
            return;
        }
        std::vector<Rat> nb, nv;
        nb.reserve(m);
        nv.reserve(m);
        for (std::size_t i = 0; i < m; ++i) {
            std::size_t prev = i == 0 ? m - 1 : i - 1;
            if (vals_[i] != vals_[prev]) {
                nb.push_back(std::move(breaks_[i]));
                nv.push_back(std::move(vals_[i]));
            }
        }
        breaks_ = std::move(nb);
        vals_ = std::move(nv);
    }

    std::vector<Rat> breaks_, vals_;
};

/// Exact integral of a pointwise product.
inline Rat integral_product(const StepFunction& f, const StepFunction& g) {
    return (f * g).integral();
}

/// Sum of rotated copies, Sum_k f(x + shifts[k]), assembled by one global
/// jump-event sort over a common denominator grid: O(E log E) for E total
/// pieces, rather than quadratic repeated addition.
inline StepFunction sum_rotated_copies(const StepFunction& psi, const std::vector<Rat>& shifts) {
    if (shifts.empty()) return StepFunction();
    if (psi.is_constant()) return StepFunction::constant(psi.values()[0] * Rat((long)shifts.size()));

    const auto& bps = psi.breakpoints();
    const auto& vv = psi.values();
    const std::size_t m = bps.size();

    Int D = 1;
    for (const auto& b : bps) D = boost::multiprecision::lcm(D, den(b));
    for (const auto& s : shifts) D = boost::multiprecision::lcm(D, den(frac1(s)));

    std::vector<Rat> jumps(m);
    std::vector<Int> bp_grid(m);
    for (std::size_t j = 0; j < m; ++j) {
        jumps[j] = vv[j] - vv[j == 0 ? m - 1 : j - 1];
        bp_grid[j] = num(bps[j]) * (D / den(bps[j]));
    }

    struct Event {
        Int pos;
        std::uint32_t bp;
    };
    std::vector<Event> events;
    events.reserve(shifts.size() * m);
    std::vector<Int> shift_grid;
    shift_grid.reserve(shifts.size());
    for (const auto& s : shifts) {
        Rat sf = frac1(s);
        Int sg = num(sf) * (D / den(sf));
        shift_grid.push_back(sg);
        for (std::size_t j = 0; j < m; ++j) {
            Int pos = bp_grid[j] - sg;
            if (pos < 0) pos += D;
            events.push_back({std::move(pos), static_cast<std::uint32_t>(j)});
        }
    }
    std::sort(events.begin(), events.end(),
              [](const Event& a, const Event& b) { return a.pos < b.pos; });

    // value on the piece that starts at the first event
    Rat v = 0;
    {
        const Int& e0 = events.front().pos;
        for (const Int& sg : shift_grid) {
            Int x = e0 + sg;
            if (x >= D) x -= D;
            // locate the psi piece containing x/D
            auto it = std::upper_bound(bp_grid.begin(), bp_grid.end(), x);
            std::size_t idx = it == bp_grid.begin() ? m - 1
                                                    : static_cast<std::size_t>(it - bp_grid.begin()) - 1;
            v += vv[idx];
        }
    }

    std::vector<Rat> nb, nv;
    nb.reserve(events.size());
    nv.reserve(events.size());
    std::size_t i = 0;
    Rat running = v;
    bool first = true;
    while (i < events.size()) {
        std::size_t j = i;
        Rat jump = 0;
        while (j < events.size() && events[j].pos == events[i].pos) {
            jump += jumps[events[j].bp];
            ++j;
        }
        if (!first) running += jump;  // the first event's jump is already inside v
        nb.emplace_back(Rat(events[i].pos, D));
        nv.push_back(running);
        first = false;
        i = j;
    }
    return StepFunction(std::move(nb), std::move(nv));
}

}  // namespace rotlab
