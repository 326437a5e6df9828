#include "entropic/families.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace entropic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLog2Pi = 1.8378770664093454835606594728112353;

double log_sum_exp2(double a, double b) {
    if (a == -kInf) return b;
    if (b == -kInf) return a;
    const double m = std::max(a, b);
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

struct SortedSub {
    const double* values = nullptr;
    const double* weights = nullptr;
    std::size_t size = 0;
    std::vector<double> values_buf;
    std::vector<double> weights_buf;
};

// Ascending distinct values with positive weights. Points to the input when
// it is already in that form (the M-step always hands it over sorted).
SortedSub sorted_support(const WeightedSubsample& sub) {
    SortedSub out;
    bool clean = true;
    for (std::size_t i = 0; i < sub.values.size() && clean; ++i) {
        if (sub.weights[i] <= 0.0) clean = false;
        if (i > 0 && !(sub.values[i - 1] < sub.values[i])) clean = false;
    }
    if (clean) {
        out.values = sub.values.data();
        out.weights = sub.weights.data();
        out.size = sub.values.size();
        return out;
    }
    std::vector<std::pair<double, double>> pts;
    pts.reserve(sub.values.size());
    for (std::size_t i = 0; i < sub.values.size(); ++i)
        if (sub.weights[i] > 0.0) pts.emplace_back(sub.values[i], sub.weights[i]);
    std::sort(pts.begin(), pts.end());
    for (const auto& [z, wt] : pts) {
        if (!out.values_buf.empty() && out.values_buf.back() == z)
            out.weights_buf.back() += wt;
        else {
            out.values_buf.push_back(z);
            out.weights_buf.push_back(wt);
        }
    }
    out.values = out.values_buf.data();
    out.weights = out.weights_buf.data();
    out.size = out.values_buf.size();
    return out;
}

FitOutcome fit_gaussian(const Family& family, const WeightedSubsample& sub) {
    double mean = 0.0;
    for (std::size_t i = 0; i < sub.values.size(); ++i)
        mean += sub.weights[i] * sub.values[i];
    mean /= sub.mass;
    double var = 0.0;
    for (std::size_t i = 0; i < sub.values.size(); ++i) {
        const double d = sub.values[i] - mean;
        var += sub.weights[i] * d * d;
    }
    var /= sub.mass;

    FitOutcome out;
    const double s2 = std::max(var, family.sigma2_floor);
    out.degenerate = var < family.sigma2_floor;
    out.params = GaussianParams{mean, s2};
    // equals 0.5*(log s2 + log 2pi + 1) whenever the floor does not bind
    out.cross_entropy = 0.5 * (kLog2Pi + std::log(s2) + var / s2);
    return out;
}

FitOutcome fit_bernoulli(const WeightedSubsample& sub) {
    double w0 = 0.0, w1 = 0.0, w_other = 0.0;
    for (std::size_t i = 0; i < sub.values.size(); ++i) {
        if (sub.values[i] == 0.0)
            w0 += sub.weights[i];
        else if (sub.values[i] == 1.0)
            w1 += sub.weights[i];
        else
            w_other += sub.weights[i];
    }
    FitOutcome out;
    const double on_support = w0 + w1;
    const double mu0 = on_support > 0.0 ? w0 / on_support : 0.5;
    out.params = BernoulliParams{mu0, 1.0 - mu0};
    if (w_other > 0.0) {
        out.cross_entropy = kInf;  // mass where every g_theta vanishes
        return out;
    }
    double h = 0.0;
    const double f0 = w0 / sub.mass, f1 = w1 / sub.mass;
    if (f0 > 0.0) h -= f0 * std::log(mu0);
    if (f1 > 0.0) h -= f1 * std::log(1.0 - mu0);
    out.cross_entropy = h;
    return out;
}

// Enumerates the m+1 ways to split the sorted support into a left and a right
// tail; anchors sit on the innermost data point of each side, rates are the
// reciprocal mean absolute deviations (capped), p is the clipped right mass.
// Each split is solved exactly, so the best split is the family MLE.
FitOutcome fit_biexp(const Family& family, const WeightedSubsample& sub) {
    const SortedSub s = sorted_support(sub);
    const std::size_t m = s.size;
    if (m == 0) throw std::invalid_argument("empty class");

    std::vector<double> wcum(m + 1, 0.0), wzcum(m + 1, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        wcum[i + 1] = wcum[i] + s.weights[i];
        wzcum[i + 1] = wzcum[i] + s.weights[i] * s.values[i];
    }
    const double mass = wcum[m];

    FitOutcome best;
    best.cross_entropy = kInf;
    for (std::size_t k = 0; k <= m; ++k) {
        const double wl = wcum[k] / mass;
        const double wr = 1.0 - wl;
        BiExpParams p;
        p.p = std::clamp(wr, family.alpha, 1.0 - family.alpha);
        double value = 0.0;
        bool capped = false;
        if (k > 0) {
            p.a_left = s.values[k - 1];
            const double dev = std::max(0.0, (wcum[k] * p.a_left - wzcum[k]) / mass);
            p.lambda_left = dev > 0.0 ? std::min(wl / dev, family.lambda_cap)
                                      : family.lambda_cap;
            capped = capped || p.lambda_left == family.lambda_cap;
            value += -wl * std::log(1.0 - p.p) - wl * std::log(p.lambda_left) +
                     p.lambda_left * dev;
        }
        if (k < m) {
            p.a_right = s.values[k];
            const double dev =
                std::max(0.0, ((wzcum[m] - wzcum[k]) - (mass - wcum[k]) * p.a_right) / mass);
            p.lambda_right = dev > 0.0 ? std::min(wr / dev, family.lambda_cap)
                                       : family.lambda_cap;
            capped = capped || p.lambda_right == family.lambda_cap;
            value += -wr * std::log(p.p) - wr * std::log(p.lambda_right) +
                     p.lambda_right * dev;
        }
        // An empty side collapses onto the other anchor with lambda = 1. Both
        // indicator terms of the density then overlap at the shared anchor, so
        // the anchor point's weight sees both sides; fold that in to keep the
        // returned value equal to -sum w log g at the returned parameters.
        if (k == 0) {
            p.a_left = p.a_right;
            p.lambda_left = 1.0;
            const double w0 = s.weights[0] / mass;
            value -= w0 * std::log1p((1.0 - p.p) / (p.p * p.lambda_right));
        }
        if (k == m) {
            p.a_right = p.a_left;
            p.lambda_right = 1.0;
            const double wm = s.weights[m - 1] / mass;
            value -= wm * std::log1p(p.p / ((1.0 - p.p) * p.lambda_left));
        }
        if (value < best.cross_entropy) {
            best.cross_entropy = value;
            best.params = p;
            best.degenerate = capped;
        }
    }
    // The prefix-sum objective loses ~lambda_cap * ulp of absolute accuracy
    // when a rate is capped; report the exact objective at the chosen
    // parameters instead.
    const PreparedLogDensity ld(family, best.params);
    double exact = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        exact -= s.weights[i] / mass * ld(s.values[i]);
    best.cross_entropy = exact;
    return best;
}

}  // namespace

Family bind_family(FamilyKind kind, const WeightedSample& w, double alpha,
                   double lambda_cap, double sigma2_floor_scale) {
    Family f;
    f.kind = kind;
    f.alpha = alpha;
    f.lambda_cap = lambda_cap;
    f.sigma2_floor_scale = sigma2_floor_scale;
    const double range = w.values.back() - w.values.front();
    f.sigma2_floor = sigma2_floor_scale * range * range + 1e-300;
    return f;
}

FamilyKind family_kind_from_id(const std::string& id) {
    if (id == "gaussian") return FamilyKind::gaussian;
    if (id == "biexp") return FamilyKind::biexp;
    if (id == "bernoulli") return FamilyKind::bernoulli;
    throw std::invalid_argument("unknown family id '" + id + "'");
}

std::string family_id(FamilyKind kind) {
    switch (kind) {
        case FamilyKind::gaussian: return "gaussian";
        case FamilyKind::biexp: return "biexp";
        case FamilyKind::bernoulli: return "bernoulli";
    }
    return "?";
}

double log_density(const Family& family, const FamilyParams& params, double z) {
    switch (family.kind) {
        case FamilyKind::gaussian: {
            const auto& p = std::get<GaussianParams>(params);
            const double d = z - p.mu;
            return -0.5 * (kLog2Pi + std::log(p.sigma2)) - d * d / (2.0 * p.sigma2);
        }
        case FamilyKind::biexp: {
            const auto& p = std::get<BiExpParams>(params);
            double right = -kInf, left = -kInf;
            if (z >= p.a_right)
                right = std::log(p.p) + std::log(p.lambda_right) -
                        p.lambda_right * (z - p.a_right);
            if (z <= p.a_left)
                left = std::log(1.0 - p.p) + std::log(p.lambda_left) -
                       p.lambda_left * (p.a_left - z);
            return log_sum_exp2(right, left);
        }
        case FamilyKind::bernoulli: {
            const auto& p = std::get<BernoulliParams>(params);
            if (z == 0.0) return p.mu0 > 0.0 ? std::log(p.mu0) : -kInf;
            if (z == 1.0) return p.mu1 > 0.0 ? std::log(p.mu1) : -kInf;
            return -kInf;
        }
    }
    throw std::logic_error("unreachable family kind");
}

FitOutcome fit_weighted(const Family& family, const WeightedSubsample& sub) {
    if (!(sub.mass > 0.0)) throw std::invalid_argument("empty class");
    if (sub.values.size() != sub.weights.size())
        throw std::invalid_argument("subsample values/weights size mismatch");
    switch (family.kind) {
        case FamilyKind::gaussian: return fit_gaussian(family, sub);
        case FamilyKind::biexp: return fit_biexp(family, sub);
        case FamilyKind::bernoulli: return fit_bernoulli(sub);
    }
    throw std::logic_error("unreachable family kind");
}

PreparedLogDensity::PreparedLogDensity(const Family& family,
                                       const FamilyParams& params)
    : kind_(family.kind) {
    switch (kind_) {
        case FamilyKind::gaussian: {
            const auto& p = std::get<GaussianParams>(params);
            a_ = -0.5 * (kLog2Pi + std::log(p.sigma2));
            b_ = 1.0 / (2.0 * p.sigma2);
            c_ = p.mu;
            break;
        }
        case FamilyKind::biexp: {
            const auto& p = std::get<BiExpParams>(params);
            a_ = std::log(p.p) + std::log(p.lambda_right);
            b_ = std::log(1.0 - p.p) + std::log(p.lambda_left);
            a_left_ = p.a_left;
            a_right_ = p.a_right;
            ll_ = p.lambda_left;
            lr_ = p.lambda_right;
            break;
        }
        case FamilyKind::bernoulli: {
            const auto& p = std::get<BernoulliParams>(params);
            a_ = p.mu0 > 0.0 ? std::log(p.mu0) : -kInf;
            b_ = p.mu1 > 0.0 ? std::log(p.mu1) : -kInf;
            break;
        }
    }
}

double PreparedLogDensity::operator()(double z) const {
    switch (kind_) {
        case FamilyKind::gaussian: {
            const double d = z - c_;
            return a_ - d * d * b_;
        }
        case FamilyKind::biexp: {
            const bool right = z >= a_right_;
            const bool left = z <= a_left_;
            if (right && !left) return a_ - lr_ * (z - a_right_);
            if (left && !right) return b_ - ll_ * (a_left_ - z);
            if (!left) return -kInf;  // strictly inside the gap
            return log_sum_exp2(a_ - lr_ * (z - a_right_), b_ - ll_ * (a_left_ - z));
        }
        case FamilyKind::bernoulli:
            if (z == 0.0) return a_;
            if (z == 1.0) return b_;
            return -kInf;
    }
    return -kInf;
}

FamilyParams placeholder_params(const Family& family) {
    switch (family.kind) {
        case FamilyKind::gaussian: return GaussianParams{0.0, 1.0};
        case FamilyKind::biexp: return BiExpParams{};
        case FamilyKind::bernoulli: return BernoulliParams{};
    }
    throw std::logic_error("unreachable family kind");
}

}  // namespace entropic
