#ifndef JDD_NP_TESTING_HPP
#define JDD_NP_TESTING_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "jdd/gaussian.hpp"

namespace jdd {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Which measure a Monte-Carlo LLR sample set was drawn under, relative to
/// the orientation of the statistic L = log dP/dQ.
enum class DrawnUnder { P, Q };

/// Monte-Carlo samples of a scalar LLR statistic (nats).
struct LlrSampleSet {
    std::vector<double> values;
    DrawnUnder drawn_under = DrawnUnder::P;
    std::uint64_t seed = 0;
    std::size_t count = 0;
};

inline LlrSampleSet make_sample_set(std::vector<double> values, DrawnUnder tag,
                                    std::uint64_t seed) {
    LlrSampleSet s;
    s.count = values.size();
    s.values = std::move(values);
    s.drawn_under = tag;
    s.seed = seed;
    return s;
}

/// A randomized threshold test on L: Z = 1 iff L > threshold, and Z = 1 with
/// probability tau when L == threshold.
struct TestPoint {
    double threshold = 0.0;
    double tau = 0.0;
};

struct ProbEstimate {
    double value = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::size_t n_samples = 0;
};

/// Plain mean with a normal CI; not clamped to [0,1].
struct MeanEstimate {
    double mean = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::size_t n_samples = 0;
};

/// Thrown when no estimation route reaches the configured effective-sample-size
/// floor for a required tail; carries the best achievable estimate.
class precision_error : public std::runtime_error {
public:
    precision_error(const std::string& msg, ProbEstimate attained)
        : std::runtime_error(msg), attained_(attained) {}
    const ProbEstimate& attained() const { return attained_; }

private:
    ProbEstimate attained_;
};

struct NpConfig {
    double confidence = 0.99;  // two-sided CI level
    double ess_floor = 50.0;   // minimum effective sample size for a tail
    double moderate_factor = 10.0;  // "native side" rule: mass >= factor/sqrt(N)
};

inline double z_for_confidence(double confidence) {
    if (!(confidence > 0.0 && confidence < 1.0))
        throw std::invalid_argument("confidence must be in (0,1)");
    return q_inv(0.5 * (1.0 - confidence));
}

/// Wilson score interval for k successes (k may be fractional, from test
/// randomization) out of n trials.
inline ProbEstimate wilson_interval(double k, std::size_t n, double z) {
    ProbEstimate e;
    e.n_samples = n;
    if (n == 0) {
        e.value = 0.0;
        e.ci_low = 0.0;
        e.ci_high = 1.0;
        return e;
    }
    const double nn = static_cast<double>(n);
    const double phat = k / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = (phat + z2 / (2.0 * nn)) / denom;
    const double hw =
        z * std::sqrt(phat * (1.0 - phat) / nn + z2 / (4.0 * nn * nn)) / denom;
    e.value = phat;
    e.ci_low = std::max(0.0, center - hw);
    e.ci_high = std::min(1.0, center + hw);
    return e;
}

/**
 * One-sided tail estimate with both linear and log-domain fields. The log
 * fields stay finite far below the double underflow threshold, which the
 * deep-tail importance-weighted estimates require.
 */
struct TailEstimate {
    double value = 0.0;     // linear; 0 if it underflows
    double log_value = -kInf;
    double ci_low = 0.0, ci_high = 0.0;         // linear, clamped to [0,1]
    double log_ci_low = -kInf, log_ci_high = -kInf;
    double ess = 0.0;       // Kish ESS (weighted) or tail count (native)
    std::size_t n_samples = 0;
    bool weighted = false;
};

namespace detail {

inline TailEstimate from_wilson(double k, std::size_t n, double z) {
    ProbEstimate w = wilson_interval(k, n, z);
    TailEstimate t;
    t.value = w.value;
    t.log_value = w.value > 0.0 ? std::log(w.value) : -kInf;
    t.ci_low = w.ci_low;
    t.ci_high = w.ci_high;
    t.log_ci_low = w.ci_low > 0.0 ? std::log(w.ci_low) : -kInf;
    t.log_ci_high = w.ci_high > 0.0 ? std::log(w.ci_high) : -kInf;
    t.ess = k;
    t.n_samples = n;
    t.weighted = false;
    return t;
}

// Weighted tail sum in scaled form: the true sum is exp(offset) * sum_scaled,
// with per-sample second moment exp(2*offset) * sum_sq_scaled.
inline TailEstimate from_weighted(double sum_scaled, double sum_sq_scaled,
                                  double offset, std::size_t n, double z) {
    TailEstimate t;
    t.n_samples = n;
    t.weighted = true;
    if (n == 0 || sum_scaled <= 0.0) {
        t.ci_high = 0.0;  // no weight observed; caller judges via ESS = 0
        return t;
    }
    const double nn = static_cast<double>(n);
    const double mean_scaled = sum_scaled / nn;
    t.log_value = offset + std::log(mean_scaled);
    t.value = std::exp(t.log_value);
    double var_scaled = sum_sq_scaled / nn - mean_scaled * mean_scaled;
    if (var_scaled < 0.0) var_scaled = 0.0;
    if (nn > 1.0) var_scaled *= nn / (nn - 1.0);
    const double rel_hw = z * std::sqrt(var_scaled / nn) / mean_scaled;
    t.ess = sum_sq_scaled > 0.0 ? sum_scaled * sum_scaled / sum_sq_scaled : 0.0;
    if (rel_hw < 1.0) {
        t.log_ci_low = t.log_value + std::log1p(-rel_hw);
        t.ci_low = std::exp(t.log_ci_low);
    }
    t.log_ci_high = t.log_value + std::log1p(rel_hw);
    t.ci_high = std::min(1.0, std::exp(t.log_ci_high));
    t.value = std::min(1.0, t.value);
    return t;
}

} // namespace detail

/**
 * Sorted view of an LLR sample set with cumulative weight sums, answering the
 * tail queries behind the Neyman-Pearson evaluations.
 *
 * Orientation convention: the stored values are L = log dP/dQ. If the set was
 * drawn under P, weights exp(-L) turn its tail sums into estimates of
 * Q-masses; if drawn under Q, weights exp(+L) estimate P-masses.
 */
class TailCurve {
public:
    TailCurve() = default;

    explicit TailCurve(std::vector<double> values) : v_(std::move(values)) {
        for (double x : v_) {
            if (!std::isfinite(x))
                throw std::invalid_argument("LLR sample values must be finite");
        }
        std::sort(v_.begin(), v_.end());
        n_ = v_.size();
    }

    explicit TailCurve(const LlrSampleSet& set) : TailCurve(set.values) {
        if (set.count != set.values.size())
            throw std::invalid_argument("LlrSampleSet count mismatch");
    }

    std::size_t size() const { return n_; }
    bool empty() const { return n_ == 0; }
    const std::vector<double>& sorted_values() const { return v_; }
    double min_value() const { return v_.front(); }
    double max_value() const { return v_.back(); }

    // --- index helpers -----------------------------------------------------
    std::size_t lower_index(double x) const {  // # of samples < x
        return static_cast<std::size_t>(
            std::lower_bound(v_.begin(), v_.end(), x) - v_.begin());
    }
    std::size_t upper_index(double x) const {  // # of samples <= x
        return static_cast<std::size_t>(
            std::upper_bound(v_.begin(), v_.end(), x) - v_.begin());
    }

    // --- native (unweighted) estimates --------------------------------------
    /// Empirical mass of {L > g} + tau * {L == g}; Wilson CI.
    TailEstimate native_upper(double g, double tau, double z) const {
        const double k = count_upper(g, tau);
        return detail::from_wilson(k, n_, z);
    }
    /// Empirical mass of {L < g} + keep * {L == g} (keep = 1 - tau); Wilson CI.
    TailEstimate native_lower(double g, double keep, double z) const {
        const double k = count_lower(g, keep);
        return detail::from_wilson(k, n_, z);
    }

    // --- importance-weighted estimates --------------------------------------
    /// (1/n) sum exp(-L)(1{L>g} + tau 1{L=g}): the opposite measure's upper tail.
    TailEstimate weighted_upper_w(double g, double tau, double z) const {
        ensure_w();
        const std::size_t lo = lower_index(g), hi = upper_index(g);
        double s = suf_w_[hi] + tau * (suf_w_[lo] - suf_w_[hi]);
        double s2 = suf_w2_[hi] + tau * (suf_w2_[lo] - suf_w2_[hi]);
        return detail::from_weighted(s, s2, -w_off_, n_, z);
    }
    TailEstimate weighted_lower_w(double g, double keep, double z) const {
        ensure_w();
        const std::size_t lo = lower_index(g), hi = upper_index(g);
        double s = pre_w_[lo] + keep * (pre_w_[hi] - pre_w_[lo]);
        double s2 = pre_w2_[lo] + keep * (pre_w2_[hi] - pre_w2_[lo]);
        return detail::from_weighted(s, s2, -w_off_, n_, z);
    }
    /// (1/n) sum exp(+L)(...): the opposite measure when this set is Q-drawn.
    TailEstimate weighted_upper_v(double g, double tau, double z) const {
        ensure_v();
        const std::size_t lo = lower_index(g), hi = upper_index(g);
        double s = suf_v_[hi] + tau * (suf_v_[lo] - suf_v_[hi]);
        double s2 = suf_v2_[hi] + tau * (suf_v2_[lo] - suf_v2_[hi]);
        return detail::from_weighted(s, s2, v_off_, n_, z);
    }
    TailEstimate weighted_lower_v(double g, double keep, double z) const {
        ensure_v();
        const std::size_t lo = lower_index(g), hi = upper_index(g);
        double s = pre_v_[lo] + keep * (pre_v_[hi] - pre_v_[lo]);
        double s2 = pre_v2_[lo] + keep * (pre_v2_[hi] - pre_v2_[lo]);
        return detail::from_weighted(s, s2, v_off_, n_, z);
    }

    /// Mean of exp(-L) over the whole set (unit-mean when drawn under P).
    MeanEstimate weight_normalization(double z) const {
        ensure_w();
        MeanEstimate m;
        m.n_samples = n_;
        if (n_ == 0) return m;
        const double nn = static_cast<double>(n_);
        const double mean_scaled = suf_w_[0] / nn;
        double var_scaled = suf_w2_[0] / nn - mean_scaled * mean_scaled;
        if (var_scaled < 0.0) var_scaled = 0.0;
        if (nn > 1.0) var_scaled *= nn / (nn - 1.0);
        const double scale = std::exp(-w_off_);
        m.mean = scale * mean_scaled;
        const double hw = z * scale * std::sqrt(var_scaled / nn);
        m.ci_low = m.mean - hw;
        m.ci_high = m.mean + hw;
        return m;
    }

    // --- solvers -------------------------------------------------------------
    /// (g, tau) with empirical mass of {L > g} + tau {L = g} equal to `mass`.
    TestPoint solve_native_upper(double mass) const {
        if (n_ == 0) throw std::invalid_argument("solve on empty sample set");
        const double target = mass * static_cast<double>(n_);
        if (target <= 0.0) return {kInf, 0.0};
        if (target >= static_cast<double>(n_)) return {-kInf, 0.0};
        std::size_t j = n_ - static_cast<std::size_t>(std::ceil(target));
        const double g = v_[j];
        const std::size_t lo = lower_index(g), hi = upper_index(g);
        const double gt = static_cast<double>(n_ - hi);
        const double eq = static_cast<double>(hi - lo);
        double tau = (target - gt) / eq;
        tau = std::min(1.0, std::max(0.0, tau));
        return {g, tau};
    }

    /// (g, tau) with the weighted (exp(-L)) tail estimate equal to `mass`.
    /// Saturates at the sample extremes when the target is out of range.
    TestPoint solve_weighted_w_upper(double mass) const {
        if (n_ == 0) throw std::invalid_argument("solve on empty sample set");
        ensure_w();
        if (mass <= 0.0) return {kInf, 0.0};
        // scaled target = mass * n * exp(v_min); compare in logs first
        const double log_target = std::log(mass) + std::log(static_cast<double>(n_)) + w_off_;
        if (log_target >= std::log(suf_w_[0])) return {-kInf, 0.0};
        // smallest index k with suf_w_[k] <= exp(log_target): binary search on
        // the nonincreasing suffix array
        const double target = std::exp(log_target);
        std::size_t lo = 0, hi = n_;  // invariant: suf_w_[lo] > target >= suf_w_[hi]
        while (hi - lo > 1) {
            std::size_t mid = (lo + hi) / 2;
            if (suf_w_[mid] > target) lo = mid; else hi = mid;
        }
        // threshold at the tie group containing index lo
        const double g = v_[lo];
        const std::size_t glo = lower_index(g), ghi = upper_index(g);
        const double tail_after = suf_w_[ghi];
        const double group = suf_w_[glo] - suf_w_[ghi];
        double tau = group > 0.0 ? (target - tail_after) / group : 0.0;
        tau = std::min(1.0, std::max(0.0, tau));
        return {g, tau};
    }

    // --- raw scaled sums for the threshold-scan bound core -------------------
    double scaled_suffix_w(std::size_t k) const { ensure_w(); return suf_w_[k]; }
    double scaled_suffix_w2(std::size_t k) const { ensure_w(); return suf_w2_[k]; }
    /// True weighted sums are exp(-w_offset()) * scaled values.
    double w_offset() const { return w_off_; }

private:
    double count_upper(double g, double tau) const {
        if (g == -kInf) return static_cast<double>(n_);
        if (g == kInf) return 0.0;
        const std::size_t lo = lower_index(g), hi = upper_index(g);
        return static_cast<double>(n_ - hi) + tau * static_cast<double>(hi - lo);
    }
    double count_lower(double g, double keep) const {
        if (g == -kInf) return 0.0;
        if (g == kInf) return static_cast<double>(n_);
        const std::size_t lo = lower_index(g), hi = upper_index(g);
        return static_cast<double>(lo) + keep * static_cast<double>(hi - lo);
    }

    void ensure_w() const {
        if (!suf_w_.empty() || n_ == 0) return;
        w_off_ = v_.front();  // weights exp(-(v - v_min)) are in (0, 1]
        suf_w_.assign(n_ + 1, 0.0);
        suf_w2_.assign(n_ + 1, 0.0);
        pre_w_.assign(n_ + 1, 0.0);
        pre_w2_.assign(n_ + 1, 0.0);
        long double acc = 0.0L, acc2 = 0.0L;
        for (std::size_t i = n_; i-- > 0;) {  // smallest weights first
            const double w = std::exp(-(v_[i] - w_off_));
            acc += w;
            acc2 += static_cast<long double>(w) * w;
            suf_w_[i] = static_cast<double>(acc);
            suf_w2_[i] = static_cast<double>(acc2);
        }
        acc = 0.0L; acc2 = 0.0L;
        for (std::size_t i = 0; i < n_; ++i) {
            const double w = std::exp(-(v_[i] - w_off_));
            acc += w;
            acc2 += static_cast<long double>(w) * w;
            pre_w_[i + 1] = static_cast<double>(acc);
            pre_w2_[i + 1] = static_cast<double>(acc2);
        }
    }
    void ensure_v() const {
        if (!pre_v_.empty() || n_ == 0) return;
        v_off_ = v_.back();  // weights exp(v - v_max) are in (0, 1]
        pre_v_.assign(n_ + 1, 0.0);
        pre_v2_.assign(n_ + 1, 0.0);
        suf_v_.assign(n_ + 1, 0.0);
        suf_v2_.assign(n_ + 1, 0.0);
        long double acc = 0.0L, acc2 = 0.0L;
        for (std::size_t i = 0; i < n_; ++i) {  // smallest weights first
            const double w = std::exp(v_[i] - v_off_);
            acc += w;
            acc2 += static_cast<long double>(w) * w;
            pre_v_[i + 1] = static_cast<double>(acc);
            pre_v2_[i + 1] = static_cast<double>(acc2);
        }
        acc = 0.0L; acc2 = 0.0L;
        for (std::size_t i = n_; i-- > 0;) {
            const double w = std::exp(v_[i] - v_off_);
            acc += w;
            acc2 += static_cast<long double>(w) * w;
            suf_v_[i] = static_cast<double>(acc);
            suf_v2_[i] = static_cast<double>(acc2);
        }
    }

    std::vector<double> v_;
    std::size_t n_ = 0;
    mutable double w_off_ = 0.0, v_off_ = 0.0;
    mutable std::vector<double> suf_w_, suf_w2_, pre_w_, pre_w2_;
    mutable std::vector<double> pre_v_, pre_v2_, suf_v_, suf_v2_;
};

namespace detail {

inline ProbEstimate to_prob(const TailEstimate& t) {
    ProbEstimate p;
    p.value = std::min(1.0, t.value);
    p.ci_low = std::min(1.0, t.ci_low);
    p.ci_high = std::min(1.0, t.ci_high);
    p.n_samples = t.n_samples;
    return p;
}

inline bool all_zero(const TailCurve& c) {
    return !c.empty() && c.min_value() == 0.0 && c.max_value() == 0.0;
}

// Chooses between a native tail count and an importance-weighted estimate of
// the same mass, following the tail-side rule: native when the mass is
// moderate (>= factor/sqrt(N)), weighted otherwise, with ESS fallbacks.
inline TailEstimate pick_estimate(const TailEstimate* native,
                                  const TailEstimate* weighted,
                                  const NpConfig& cfg) {
    if (native && !weighted) return *native;
    if (weighted && !native) return *weighted;
    if (!native && !weighted)
        throw std::invalid_argument("no sample route available");
    const double moderate =
        cfg.moderate_factor / std::sqrt(static_cast<double>(native->n_samples));
    if (native->value >= moderate) return *native;
    if (weighted->ess >= cfg.ess_floor) return *weighted;
    return *native;
}

} // namespace detail

/**
 * alpha_beta(P, Q): smallest P[Z=0] over randomized tests with Q[Z=1] <= beta,
 * evaluated on the Neyman-Pearson threshold family from Monte-Carlo samples of
 * L = log dP/dQ. Either sample set may be empty (the other measure's side is
 * then importance-weighted throughout).
 *
 * Throws std::invalid_argument on domain violations and precision_error when
 * no route to locate the beta-tail threshold reaches the ESS floor.
 */
inline std::pair<ProbEstimate, TestPoint> alpha_from_curves(
    const TailCurve& p_curve, const TailCurve& q_curve, double beta,
    const NpConfig& cfg = {}) {
    if (!(beta > 0.0 && beta <= 1.0))
        throw std::invalid_argument("beta must be in (0,1]");
    if (p_curve.empty() && q_curve.empty())
        throw std::invalid_argument("at least one sample set must be nonempty");
    const double z = z_for_confidence(cfg.confidence);

    if (beta == 1.0) {  // test may always declare Z=1
        ProbEstimate e{0.0, 0.0, 0.0, p_curve.size()};
        return {e, TestPoint{-kInf, 0.0}};
    }
    // Identical measures: L == 0, the randomized test is forced and exact.
    if ((p_curve.empty() || detail::all_zero(p_curve)) &&
        (q_curve.empty() || detail::all_zero(q_curve)) &&
        (detail::all_zero(p_curve) || detail::all_zero(q_curve))) {
        ProbEstimate e{1.0 - beta, 1.0 - beta, 1.0 - beta,
                       p_curve.empty() ? q_curve.size() : p_curve.size()};
        return {e, TestPoint{0.0, beta}};
    }

    // Locate the threshold with Q[Z=1] = beta.
    TestPoint tp;
    bool solved = false;
    const bool native_ok =
        !q_curve.empty() &&
        beta >= cfg.moderate_factor / std::sqrt(static_cast<double>(q_curve.size()));
    if (native_ok) {
        tp = q_curve.solve_native_upper(beta);
        solved = true;
    } else if (!p_curve.empty()) {
        tp = p_curve.solve_weighted_w_upper(beta);
        const TailEstimate at = p_curve.weighted_upper_w(tp.threshold, tp.tau, z);
        if (at.ess >= cfg.ess_floor) {
            solved = true;
        } else if (!q_curve.empty() &&
                   beta * static_cast<double>(q_curve.size()) >= cfg.ess_floor) {
            tp = q_curve.solve_native_upper(beta);
            solved = true;
        } else {
            throw precision_error("beta-tail ESS below floor on all routes",
                                  detail::to_prob(at));
        }
    } else {
        // only q samples, deep tail: the native route is all there is
        tp = q_curve.solve_native_upper(beta);
        if (beta * static_cast<double>(q_curve.size()) < cfg.ess_floor)
            throw precision_error(
                "beta-tail ESS below floor on the only available route",
                detail::to_prob(q_curve.native_upper(tp.threshold, tp.tau, z)));
        solved = true;
    }
    (void)solved;

    // alpha = P[Z=0] at the test point.
    const double keep = 1.0 - tp.tau;
    TailEstimate nat, wtd;
    const TailEstimate* natp = nullptr;
    const TailEstimate* wtdp = nullptr;
    if (!p_curve.empty()) {
        nat = p_curve.native_lower(tp.threshold, keep, z);
        natp = &nat;
    }
    if (!q_curve.empty()) {
        wtd = q_curve.weighted_lower_v(tp.threshold, keep, z);
        wtdp = &wtd;
    }
    return {detail::to_prob(detail::pick_estimate(natp, wtdp, cfg)), tp};
}

inline std::pair<ProbEstimate, TestPoint> alpha_from_samples(
    const LlrSampleSet& p_samples, const LlrSampleSet& q_samples, double beta,
    const NpConfig& cfg = {}) {
    if (p_samples.count != p_samples.values.size() ||
        q_samples.count != q_samples.values.size())
        throw std::invalid_argument("LlrSampleSet count mismatch");
    return alpha_from_curves(TailCurve(p_samples), TailCurve(q_samples), beta, cfg);
}

/**
 * beta_alpha(P, Q): smallest Q[Z=1] over randomized tests with P[Z=1] >= alpha
 * (met with equality by randomization). Same conventions as alpha_from_curves.
 */
inline std::pair<ProbEstimate, TestPoint> beta_from_curves(
    const TailCurve& p_curve, const TailCurve& q_curve, double alpha,
    const NpConfig& cfg = {}) {
    if (!(alpha >= 0.0 && alpha < 1.0))
        throw std::invalid_argument("alpha must be in [0,1)");
    if (p_curve.empty() && q_curve.empty())
        throw std::invalid_argument("at least one sample set must be nonempty");
    const double z = z_for_confidence(cfg.confidence);

    if (alpha == 0.0) {  // always declare Z=0
        ProbEstimate e{0.0, 0.0, 0.0, q_curve.size()};
        return {e, TestPoint{kInf, 0.0}};
    }
    if ((p_curve.empty() || detail::all_zero(p_curve)) &&
        (q_curve.empty() || detail::all_zero(q_curve)) &&
        (detail::all_zero(p_curve) || detail::all_zero(q_curve))) {
        ProbEstimate e{alpha, alpha, alpha,
                       q_curve.empty() ? p_curve.size() : q_curve.size()};
        return {e, TestPoint{0.0, alpha}};
    }

    // Locate the threshold with P[Z=1] = alpha. The binding tail for the
    // quantile is min(alpha, 1-alpha).
    TestPoint tp;
    const double binding = std::min(alpha, 1.0 - alpha);
    const bool native_ok =
        !p_curve.empty() &&
        binding >= cfg.moderate_factor / std::sqrt(static_cast<double>(p_curve.size()));
    if (native_ok) {
        tp = p_curve.solve_native_upper(alpha);
    } else if (!p_curve.empty() && q_curve.empty()) {
        tp = p_curve.solve_native_upper(alpha);
        if (binding * static_cast<double>(p_curve.size()) < 1.0)
            throw precision_error(
                "alpha-quantile unpopulated on the only available route",
                detail::to_prob(p_curve.native_upper(tp.threshold, tp.tau, z)));
    } else if (!q_curve.empty()) {
        // weighted quantile from the Q side: invert sum exp(L)(1{L>g}+tau 1{L=g})
        // = alpha; bisection over values, then tau within the atom
        const auto& vals = q_curve.sorted_values();
        auto mass_at = [&](std::size_t idx) {
            return q_curve.weighted_upper_v(vals[idx], 0.0, z).value;
        };
        if (mass_at(0) < alpha) {
            tp = {-kInf, 0.0};
        } else {
            std::size_t lo = 0, hi = vals.size();
            while (hi - lo > 1) {
                std::size_t mid = (lo + hi) / 2;
                if (mass_at(mid) >= alpha) lo = mid; else hi = mid;
            }
            // mass_at(lo) >= alpha > mass_at(lo+1); interpolate on the atom
            std::size_t nxt = lo + 1;
            const double below = nxt < vals.size() ? mass_at(nxt) : 0.0;
            const double g = nxt < vals.size() ? vals[nxt] : vals[lo];
            const double atom =
                q_curve.weighted_upper_v(g, 1.0, z).value - below;
            double tau = atom > 0.0 ? (alpha - below) / atom : 0.0;
            tau = std::min(1.0, std::max(0.0, tau));
            tp = {g, tau};
        }
        const TailEstimate at = q_curve.weighted_upper_v(tp.threshold, tp.tau, z);
        if (at.ess < cfg.ess_floor) {
            if (!p_curve.empty()) {
                tp = p_curve.solve_native_upper(alpha);
            } else {
                throw precision_error("alpha-quantile ESS below floor",
                                      detail::to_prob(at));
            }
        }
    }

    // beta = Q[Z=1] at the test point.
    TailEstimate nat, wtd;
    const TailEstimate* natp = nullptr;
    const TailEstimate* wtdp = nullptr;
    if (!q_curve.empty()) {
        nat = q_curve.native_upper(tp.threshold, tp.tau, z);
        natp = &nat;
    }
    if (!p_curve.empty()) {
        wtd = p_curve.weighted_upper_w(tp.threshold, tp.tau, z);
        wtdp = &wtd;
    }
    return {detail::to_prob(detail::pick_estimate(natp, wtdp, cfg)), tp};
}

inline std::pair<ProbEstimate, TestPoint> beta_from_samples(
    const LlrSampleSet& p_samples, const LlrSampleSet& q_samples, double alpha,
    const NpConfig& cfg = {}) {
    if (p_samples.count != p_samples.values.size() ||
        q_samples.count != q_samples.values.size())
        throw std::invalid_argument("LlrSampleSet count mismatch");
    return beta_from_curves(TailCurve(p_samples), TailCurve(q_samples), alpha, cfg);
}

/**
 * Closed-form alpha_beta when the LLR statistic is Gaussian with the same
 * variance under both measures (the matched-filter statistic): the optimal
 * test thresholds the statistic itself.
 */
inline double gaussian_alpha(double mean_p, double mean_q, double variance,
                             double beta) {
    if (!(variance > 0.0))
        throw std::invalid_argument("gaussian_alpha: variance must be > 0");
    if (!(beta >= 0.0 && beta <= 1.0))
        throw std::invalid_argument("gaussian_alpha: beta must be in [0,1]");
    const double d = (mean_p - mean_q) / std::sqrt(variance);
    return normal_cdf(q_inv(beta) - d);
}

inline double gaussian_beta(double mean_p, double mean_q, double variance,
                            double alpha) {
    if (!(variance > 0.0))
        throw std::invalid_argument("gaussian_beta: variance must be > 0");
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument("gaussian_beta: alpha must be in [0,1]");
    const double d = (mean_p - mean_q) / std::sqrt(variance);
    return q_func(q_inv(alpha) + d);
}

/// Unit-mean check: mean of exp(-L) over a P-drawn set estimates Q's total
/// mass and must sit within its CI of 1.
inline MeanEstimate importance_weight_normalization(const LlrSampleSet& set,
                                                    double confidence = 0.99) {
    TailCurve c(set);
    return c.weight_normalization(z_for_confidence(confidence));
}

} // namespace jdd

#endif // JDD_NP_TESTING_HPP
