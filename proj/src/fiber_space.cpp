#include "skewlab/fiber_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace skewlab {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kMaterializeLimit = 500.0;
}  // namespace

SparseVector::SparseVector(std::vector<Entry> entries) : entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end(),
              [](const Entry& a, const Entry& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < entries_.size(); ++i)
        if (entries_[i - 1].first == entries_[i].first) throw Error("duplicate sparse vector index");
    std::erase_if(entries_, [](const Entry& e) { return e.second == std::complex<double>(0.0, 0.0); });
}

SparseVector SparseVector::basis(std::int64_t index, std::complex<double> coeff) {
    return SparseVector({{index, coeff}});
}

std::complex<double> SparseVector::at(std::int64_t index) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), index,
                               [](const Entry& e, std::int64_t i) { return e.first < i; });
    if (it != entries_.end() && it->first == index) return it->second;
    return {0.0, 0.0};
}

SparseVector SparseVector::operator+(const SparseVector& o) const {
    std::vector<Entry> out;
    auto a = entries_.begin();
    auto b = o.entries_.begin();
    while (a != entries_.end() || b != o.entries_.end()) {
        if (b == o.entries_.end() || (a != entries_.end() && a->first < b->first))
            out.push_back(*a++);
        else if (a == entries_.end() || b->first < a->first)
            out.push_back(*b++);
        else {
            out.emplace_back(a->first, a->second + b->second);
            ++a;
            ++b;
        }
    }
    return SparseVector(std::move(out));
}

SparseVector SparseVector::operator-(const SparseVector& o) const {
    return *this + o.scaled(-1.0);
}

SparseVector SparseVector::scaled(std::complex<double> c) const {
    std::vector<Entry> out = entries_;
    for (auto& e : out) e.second *= c;
    return SparseVector(std::move(out));
}

LogVector LogVector::from_sparse(const SparseVector& v) {
    LogVector out;
    out.entries.reserve(v.entries().size());
    for (const auto& [idx, c] : v.entries()) out.entries.push_back({idx, LogPolar::from_complex(c)});
    return out;
}

SparseVector LogVector::to_sparse() const {
    std::vector<SparseVector::Entry> out;
    out.reserve(entries.size());
    for (const auto& e : entries) {
        if (std::fabs(e.coeff.log_mag) > kMaterializeLimit)
            throw OverflowScaleError("coefficient magnitude out of linear range; keep the log form");
        out.emplace_back(e.index, e.coeff.to_complex());
    }
    return SparseVector(std::move(out));
}

LogVector LogVector::scaled(const LogPolar& s) const {
    LogVector out = *this;
    for (auto& e : out.entries) e.coeff *= s;
    return out;
}

WindowSpec::WindowSpec(std::int64_t base, int max_k) {
    if (base < 2) throw Error("window base must be >= 2");
    std::int64_t r = 1;
    for (int k = 1; k <= max_k; ++k) {
        if (r > std::numeric_limits<std::int64_t>::max() / base) break;
        r *= base;
        centers_.push_back(r);
    }
    // disjointness re-checked in case of a tight base
    for (std::size_t i = 1; i < centers_.size(); ++i) {
        std::int64_t k = static_cast<std::int64_t>(i) + 1;
        if (centers_[i] - k <= centers_[i - 1] + k)
            throw Error("windows must be pairwise disjoint and separated");
    }
}

WindowSpec WindowSpec::from_centers(std::vector<std::int64_t> centers) {
    WindowSpec w(4, 0);
    w.centers_ = std::move(centers);
    for (std::size_t i = 0; i < w.centers_.size(); ++i) {
        std::int64_t k = static_cast<std::int64_t>(i) + 1;
        if (w.centers_[i] - k + 1 < 1) throw Error("window extends below index 1");
        if (i > 0 && w.centers_[i] - k <= w.centers_[i - 1] + k)
            throw Error("windows must be pairwise disjoint and separated");
    }
    return w;
}

std::optional<int> WindowSpec::window_of(std::int64_t n) const {
    for (std::size_t i = 0; i < centers_.size(); ++i) {
        std::int64_t k = static_cast<std::int64_t>(i) + 1;
        if (n >= centers_[i] - k + 1 && n <= centers_[i] + k) return static_cast<int>(k);
        if (n < centers_[i] - k + 1) break;
    }
    return std::nullopt;
}

std::int64_t WindowSpec::coverage() const {
    if (centers_.empty()) return 0;
    return centers_.back() + static_cast<std::int64_t>(centers_.size());
}

std::int64_t example1_r(int k) {
    if (k < 1) throw Error("example1_r: k >= 1");
    return 2 * (std::int64_t{1} << (2 * (k - 1))) - 1;  // 2*4^{k-1} - 1
}

WeightSequence::WeightSequence(Rule rule) : rule_(std::move(rule)) {
    if (const auto* c = std::get_if<Constant>(&rule_)) {
        if (!(c->w > 0.0)) throw Error("constant weight must be positive");
    } else if (const auto* e1 = std::get_if<Example1>(&rule_)) {
        if (!(e1->gamma - e1->eps > 0.0)) throw Error("example1 requires gamma - eps > 0");
        if (!(e1->eps >= 0.0)) throw Error("example1 requires eps >= 0");
    } else if (const auto* e2 = std::get_if<Example2>(&rule_)) {
        if (!(e2->gamma > 0.0)) throw Error("example2 requires gamma > 0");
        // closed-form prefix product cross-checked against direct summation
        double acc = 0.0;
        std::int64_t check = std::min<std::int64_t>(4096, e2->windows.coverage() + 8);
        for (std::int64_t n = 1; n <= check; ++n) {
            acc += log_weight(n);
            if (std::fabs(acc - log_prefix_product(n)) > 1e-9)
                throw Error("example2 closed-form prefix product mismatch");
        }
    } else {
        for (double v : std::get<Table>(rule_).values)
            if (!(v > 0.0)) throw Error("table weights must be positive");
    }
}

double WeightSequence::log_weight(std::int64_t n) const {
    if (const auto* c = std::get_if<Constant>(&rule_)) return std::log(c->w);
    if (n < 1) throw Error("weight index must be >= 1 for non-constant rules");
    if (const auto* e1 = std::get_if<Example1>(&rule_)) {
        if (n == 1) return 0.0;  // branch table starts at n = 2; a single weight is limsup-neutral
        int k = 1;
        while (example1_r(k + 1) < n) ++k;
        std::int64_t rk = example1_r(k);
        if (n <= 2 * rk + 1) return static_cast<double>(2 * rk + 1 - n) * (e1->gamma - e1->eps);
        return static_cast<double>(example1_r(k + 1) - n) * 2.0 * e1->gamma;
    }
    if (const auto* e2 = std::get_if<Example2>(&rule_)) {
        if (auto k = e2->windows.window_of(n)) {
            std::int64_t rk = e2->windows.center(*k);
            return n <= rk ? 0.0 : -2.0 * e2->gamma;
        }
        return -e2->gamma;
    }
    const auto& tab = std::get<Table>(rule_).values;
    if (n > static_cast<std::int64_t>(tab.size())) throw Error("table weight index out of range");
    return std::log(tab[static_cast<std::size_t>(n - 1)]);
}

double WeightSequence::weight(std::int64_t n) const {
    return std::exp(log_weight(n));
}

double WeightSequence::log_prefix_product(std::int64_t n) const {
    if (n < 0) throw Error("log_prefix_product: n >= 0");
    if (n == 0) return 0.0;
    if (const auto* c = std::get_if<Constant>(&rule_))
        return static_cast<double>(n) * std::log(c->w);
    if (const auto* e2 = std::get_if<Example2>(&rule_)) {
        if (auto k = e2->windows.window_of(n)) {
            std::int64_t rk = e2->windows.center(*k);
            std::int64_t kk = *k;
            if (n <= rk) return -e2->gamma * static_cast<double>(rk - kk);
            return -e2->gamma * static_cast<double>(rk - kk + 2 * (n - rk));
        }
        return -e2->gamma * static_cast<double>(n);
    }
    // cached running sums for example1 and table rules
    if (static_cast<std::int64_t>(prefix_cache_.size()) <= n) {
        if (prefix_cache_.empty()) prefix_cache_.push_back(0.0);
        for (std::int64_t i = static_cast<std::int64_t>(prefix_cache_.size()); i <= n; ++i)
            prefix_cache_.push_back(prefix_cache_.back() + log_weight(i));
    }
    return prefix_cache_[static_cast<std::size_t>(n)];
}

double WeightSequence::log_range_product(std::int64_t first, std::int64_t last) const {
    if (first > last) return 0.0;
    if (const auto* c = std::get_if<Constant>(&rule_))
        return static_cast<double>(last - first + 1) * std::log(c->w);
    if (first < 1) throw Error("negative weight indices need a constant rule");
    return log_prefix_product(last) - log_prefix_product(first - 1);
}

double norm_log(const LogVector& v, const NormSpace& space) {
    if (v.entries.empty()) return kNegInf;
    double p = space.p;
    double m = kNegInf;
    std::vector<double> terms;
    terms.reserve(v.entries.size());
    for (const auto& e : v.entries) {
        double t = e.coeff.log_mag;
        if (space.weight) t += space.weight->log_weight(e.index);
        terms.push_back(t);
        m = std::max(m, t);
    }
    if (m == kNegInf) return kNegInf;
    double s = 0.0;
    for (double t : terms) s += std::exp(p * (t - m));
    return m + std::log(s) / p;
}

double norm_log(const SparseVector& v, const NormSpace& space) {
    if (v.empty()) return kNegInf;
    return norm_log(LogVector::from_sparse(v), space);
}

double norm(const SparseVector& v, const NormSpace& space) {
    double l = norm_log(v, space);
    return l == kNegInf ? 0.0 : std::exp(l);
}

ShiftOperator::ShiftOperator(WeightSequence op_weights, Side side, NormSpace space)
    : op_weights_(std::move(op_weights)), side_(side), space_(std::move(space)) {
    if (side_ == Side::bilateral && !op_weights_.constant_rule())
        throw Error("bilateral shifts require a constant weight rule");
}

ShiftOperator ShiftOperator::weighted_unilateral(WeightSequence w, double p) {
    return ShiftOperator(std::move(w), Side::unilateral, NormSpace::plain(p));
}

ShiftOperator ShiftOperator::weighted_bilateral(double w, double p) {
    return ShiftOperator(WeightSequence::constant(w), Side::bilateral, NormSpace::plain(p));
}

ShiftOperator ShiftOperator::unweighted_on_weighted_space(WeightSequence w, double p) {
    return ShiftOperator(WeightSequence::constant(1.0), Side::unilateral,
                         NormSpace::weighted(std::move(w), p));
}

LogVector ShiftOperator::apply_log(const LogVector& v, std::int64_t n) const {
    if (n < 0) throw Error("shift power must be >= 0; use power_log for inverses");
    LogVector out;
    for (const auto& e : v.entries) {
        std::int64_t j = e.index - n;
        if (side_ == Side::unilateral && j < 1) continue;
        LogPolar c = e.coeff;
        c.log_mag += op_weights_.log_range_product(j, e.index - 1);
        out.entries.push_back({j, c});
    }
    return out;
}

SparseVector ShiftOperator::apply(const SparseVector& v, std::int64_t n) const {
    return apply_log(LogVector::from_sparse(v), n).to_sparse();
}

LogVector ShiftOperator::right_inverse_log(const LogVector& v, std::int64_t n) const {
    if (n < 0) throw Error("right inverse power must be >= 0");
    LogVector out;
    for (const auto& e : v.entries) {
        LogPolar c = e.coeff;
        c.log_mag -= op_weights_.log_range_product(e.index, e.index + n - 1);
        out.entries.push_back({e.index + n, c});
    }
    return out;
}

SparseVector ShiftOperator::right_inverse(const SparseVector& v, std::int64_t n) const {
    return right_inverse_log(LogVector::from_sparse(v), n).to_sparse();
}

LogVector ShiftOperator::power_log(const LogVector& v, std::int64_t m) const {
    if (m >= 0) return apply_log(v, m);
    if (side_ != Side::bilateral) throw NonInvertibleError("unilateral shift has no inverse");
    return right_inverse_log(v, -m);
}

}  // namespace skewlab
