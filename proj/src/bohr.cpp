#include "tieq/bohr.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace tieq {

BohrSet::BohrSet(FiniteAbelianGroup group, std::vector<Index> frequencies, std::vector<double> widths)
    : group_(std::move(group)) {
    if (frequencies.size() != widths.size())
        throw std::invalid_argument("frequency and width lists differ in length");
    std::map<Index, double> merged;
    for (std::size_t i = 0; i < frequencies.size(); ++i) {
        Index chi = frequencies[i];
        if (chi < 0 || chi >= group_.order()) throw std::invalid_argument("character index out of range");
        if (chi == 0) throw std::invalid_argument("the trivial character constrains nothing and is not allowed in a frequency set");
        double w = widths[i];
        if (!(w >= 0.0) || w > 2.0) throw std::invalid_argument("widths must lie in [0, 2]");
        auto [it, fresh] = merged.emplace(chi, w);
        if (!fresh) it->second = std::min(it->second, w);  // duplicate frequency: keep the tighter width
    }
    freq_.reserve(merged.size());
    widths_.reserve(merged.size());
    for (auto& [chi, w] : merged) {
        freq_.push_back(chi);
        widths_.push_back(w);
    }
    enumerate();
}

BohrSet BohrSet::whole_group(FiniteAbelianGroup group) { return BohrSet(std::move(group), {}, {}); }

void BohrSet::enumerate() {
    mask_.assign(static_cast<std::size_t>(group_.order()), 0);
    elements_.clear();
    for (Index x = 0; x < group_.order(); ++x) {
        bool in = true;
        for (std::size_t i = 0; i < freq_.size(); ++i) {
            if (group_.pairing_distance(freq_[i], x) > widths_[i] + kBohrTol) { in = false; break; }
        }
        if (in) {
            mask_[static_cast<std::size_t>(x)] = 1;
            elements_.push_back(x);
        }
    }
}

bool BohrSet::same_triple(const BohrSet& other) const noexcept {
    return group_ == other.group_ && freq_ == other.freq_ && widths_ == other.widths_;
}

BohrSet BohrSet::dilate(double rho) const {
    if (!(rho > 0.0)) throw std::invalid_argument("dilation parameter must be positive");
    std::vector<double> w(widths_);
    for (double& v : w) v = std::min(v * rho, 2.0);
    return BohrSet(group_, freq_, std::move(w));
}

BohrSet intersect_bohr(const BohrSet& a, const BohrSet& b) {
    if (!(a.group_ == b.group_)) throw std::invalid_argument("Bohr sets live on different groups");
    std::vector<Index> freq = a.freq_;
    std::vector<double> widths = a.widths_;
    freq.insert(freq.end(), b.freq_.begin(), b.freq_.end());
    widths.insert(widths.end(), b.widths_.begin(), b.widths_.end());
    BohrSet out(a.group_, std::move(freq), std::move(widths));  // min-width merge happens inside
    std::vector<Index> direct = sorted_intersect(a.elements_, b.elements_);
    if (direct != out.elements_)
        throw std::logic_error("Bohr intersection disagrees with the element-level intersection");
    return out;
}

BohrSet BohrSet::apply_automorphism(const Endomorphism& t) const {
    if (!(t.group() == group_)) throw std::invalid_argument("automorphism acts on a different group");
    Endomorphism tinv = t.inverse();  // throws when t is not invertible
    std::vector<Index> freq;
    freq.reserve(freq_.size());
    for (Index chi : freq_) freq.push_back(tinv.apply_dual(chi));
    // the dual action of an automorphism permutes characters, so widths
    // follow their frequency through the constructor's sort
    std::vector<std::pair<Index, double>> paired;
    paired.reserve(freq.size());
    for (std::size_t i = 0; i < freq.size(); ++i) paired.emplace_back(freq[i], widths_[i]);
    std::sort(paired.begin(), paired.end());
    std::vector<double> widths;
    freq.clear();
    for (auto& [chi, w] : paired) { freq.push_back(chi); widths.push_back(w); }
    BohrSet out(group_, std::move(freq), std::move(widths));
    std::vector<Index> direct;
    direct.reserve(elements_.size());
    for (Index x : elements_) direct.push_back(t.apply(x));
    std::sort(direct.begin(), direct.end());
    if (direct != out.elements_)
        throw std::logic_error("automorphism image disagrees with the element-level image");
    return out;
}

std::vector<double> BohrSet::dilation_profile() const {
    // m(x) = max over positive-width frequencies of (dist - tol)/width; then
    // x lies in B_u exactly when m(x) <= u, matching the enumeration
    // predicate dist <= u*width + tol in exact arithmetic.
    std::vector<double> m;
    for (Index x = 0; x < group_.order(); ++x) {
        bool alive = true;
        double mx = 0.0;
        for (std::size_t i = 0; i < freq_.size(); ++i) {
            double dist = group_.pairing_distance(freq_[i], x);
            if (widths_[i] == 0.0) {
                if (dist > kBohrTol) { alive = false; break; }
            } else {
                mx = std::max(mx, (dist - kBohrTol) / widths_[i]);
            }
        }
        if (alive) m.push_back(mx);
    }
    std::sort(m.begin(), m.end());
    return m;
}

namespace {

std::int64_t count_leq(const std::vector<double>& sorted, double u) {
    return std::upper_bound(sorted.begin(), sorted.end(), u) - sorted.begin();
}

std::int64_t count_lt(const std::vector<double>& sorted, double u) {
    return std::lower_bound(sorted.begin(), sorted.end(), u) - sorted.begin();
}

}  // namespace

RegularityReport BohrSet::is_regular() const {
    RegularityReport rep;
    if (rank() == 0) {
        rep.regular = true;
        return rep;
    }
    const double d = static_cast<double>(rank());
    const double kmax = 1.0 / (100.0 * d);
    const std::vector<double> profile = dilation_profile();
    const double base = static_cast<double>(count_leq(profile, 1.0));
    // (base equals |B| by construction of the profile)

    // candidate kappas: every breakpoint inside the window plus the endpoints
    std::vector<double> cands = {-kmax, 0.0, kmax};
    for (double m : profile) {
        double k = m - 1.0;
        if (k > -kmax && k < kmax) cands.push_back(k);
    }
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());

    rep.regular = true;
    double worst_margin = 1e300;
    auto consider = [&](double kappa, double size) {
        double lo = (1.0 - 100.0 * d * std::abs(kappa)) * base;
        double hi = (1.0 + 100.0 * d * std::abs(kappa)) * base;
        const double slack = 1e-9;  // absorbs rounding in the bound product; real violations are >= 1 element
        bool upper_ok = size <= hi + slack;
        bool lower_ok = size >= lo - slack;
        double margin = std::min(hi - size, size - lo);
        if (margin < worst_margin) {
            worst_margin = margin;
            rep.worst_kappa = kappa;
            rep.worst_size = size;
            rep.worst_is_upper = (hi - size) <= (size - lo);
            rep.worst_bound = rep.worst_is_upper ? hi : lo;
        }
        if (!upper_ok || !lower_ok) rep.regular = false;
    };
    for (double k : cands) {
        consider(k, static_cast<double>(count_leq(profile, 1.0 + k)));
        if (k > -kmax)  // left limits matter everywhere except at the window's left edge
            consider(k, static_cast<double>(count_lt(profile, 1.0 + k)));
    }
    return rep;
}

double BohrSet::find_regular_dilate() const {
    if (rank() == 0) return 1.0;
    const double d = static_cast<double>(rank());
    const double kmax = 1.0 / (100.0 * d);
    const std::vector<double> profile = dilation_profile();

    auto verified = [&](double rho) {
        return rho >= 0.5 && rho <= 1.0 && dilate(rho).is_regular().regular;
    };
    if (verified(1.0)) return 1.0;

    // rho-space critical values: a point v of the profile interacts with the
    // window [rho(1-kmax), rho(1+kmax)] only when rho crosses v, v/(1+kmax)
    // or v/(1-kmax)
    std::vector<double> crit = {0.5, 1.0};
    for (double v : profile) {
        for (double c : {v, v / (1.0 + kmax), v / (1.0 - kmax)}) {
            if (c > 0.5 - 1e-9 && c < 1.0 + 1e-9) crit.push_back(std::min(std::max(c, 0.5), 1.0));
        }
    }
    std::sort(crit.begin(), crit.end());
    crit.erase(std::unique(crit.begin(), crit.end()), crit.end());

    for (double c : crit)
        if (verified(c)) return c;

    // Between consecutive critical values the step content of the window is
    // frozen, so each regularity constraint becomes a closed-form bound on
    // rho; intersect them and test a point of the feasible sub-interval.
    std::vector<double> distinct(profile);
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    for (std::size_t i = crit.size(); i-- > 1;) {
        double a = crit[i - 1], b = crit[i];
        if (b - a < 1e-15) continue;
        double mid = 0.5 * (a + b);
        double s = static_cast<double>(count_leq(profile, mid));
        if (s <= 0.0) continue;
        double lo = a, hi = b;
        bool feasible = true;
        for (double v : distinct) {
            if (v > mid && v <= mid * (1.0 + kmax)) {
                // upper side: F(v) <= (1 + 100 d (v/rho - 1)) s  =>  rho <= v / R
                double fv = static_cast<double>(count_leq(profile, v));
                double r = 1.0 + (fv - s) / (100.0 * d * s);
                hi = std::min(hi, v / r);
            } else if (v < mid && v >= mid * (1.0 - kmax)) {
                // lower side: F(v-) >= (1 - 100 d (1 - v/rho)) s  =>  rho >= v / L
                double fvm = static_cast<double>(count_lt(profile, v));
                double l = 1.0 - (1.0 - fvm / s) / (100.0 * d);
                if (l <= 0.0) { feasible = false; break; }
                lo = std::max(lo, v / l);
            }
        }
        if (!feasible || hi < lo) continue;
        double rho = 0.5 * (lo + hi);
        if (verified(rho)) return rho;
    }

    // dense fallback; existence is guaranteed, this is belt and suspenders
    for (int k = 0; k <= 4096; ++k) {
        double rho = 1.0 - 0.5 * static_cast<double>(k) / 4096.0;
        if (verified(rho)) return rho;
    }
    throw std::logic_error("no regular dilate found in [1/2, 1]");
}

}  // namespace tieq
