#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace crnkit {

enum class SeriesVerdict { Finite, Divergent, Inconclusive };

inline const char* to_string(SeriesVerdict v) {
    switch (v) {
        case SeriesVerdict::Finite: return "finite";
        case SeriesVerdict::Divergent: return "divergent";
        default: return "inconclusive";
    }
}

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double mid() const { return 0.5 * (lo + hi); }
    double width() const { return hi - lo; }
    bool contains(double v) const { return lo <= v && v <= hi; }
};

struct SeriesOptions {
    long long max_terms = 1 << 20;
    /// Ratio test accepts only if tail ratios stay at or below this bound.
    double ratio_bound = 0.99;
    /// Power-law decay exponent must clear 1 by this margin either way.
    double p_margin = 0.05;
    /// Successive log-slope estimates must agree this tightly.
    double p_stability = 0.01;
    /// a(x) * x^p must be this close to constant over the tail window.
    double majorant_slack = 0.02;
    /// Stop early once the partial sum passes this with non-decreasing terms.
    double divergence_sum_bound = 1e15;
    /// Once a term is exactly zero (after the support started), all later
    /// terms are too; true for product recurrences and lets the analyzer
    /// truncate with an exactly-zero tail.
    bool zero_is_absorbing = false;
};

/// Verdict on sum_{x >= from} a(x) for non-negative terms, with a two-sided
/// tail bracket when finite and comparator evidence when divergent.
///
/// A Finite verdict needs a rigorous tail bound: either tail ratios bounded
/// by r < 1 (geometric domination), or a stable power-law fit a(x) ~ C x^-p
/// with p > 1 bracketed through the integral test.  Divergent needs terms
/// bounded below by a divergent comparator (a constant, or c/x).  Anything
/// the data does not support ends up Inconclusive rather than overclaimed.
struct SeriesAnalysis {
    SeriesVerdict verdict = SeriesVerdict::Inconclusive;
    double partial_sum = 0.0;
    long long terms_used = 0;
    long long first_index = 0;
    std::optional<Interval> tail;    // bracket on the sum beyond the terms used
    std::optional<Interval> value;   // partial_sum + tail
    std::string method;
    double comparator = 0.0;         // c in "terms >= c/x" / "terms >= c"
    std::optional<long long> sum_exceeds_1000_at;  // first index with partial sum > 1e3

    bool finite() const { return verdict == SeriesVerdict::Finite; }
    bool divergent() const { return verdict == SeriesVerdict::Divergent; }
};

namespace detail {

struct KahanSum {
    double sum = 0.0, c = 0.0;
    void add(double v) {
        double y = v - c;
        double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

}  // namespace detail

/// The term oracle is called once per index, in increasing order from `from`,
/// so stateful recurrence lambdas work.
inline SeriesAnalysis analyze_series(const std::function<double(long long)>& term, long long from,
                                     const SeriesOptions& opts = {}) {
    SeriesAnalysis out;
    out.first_index = from;

    // Circular buffer of the last kWindow nonzero terms with their indices.
    constexpr std::size_t kWindow = 4096;
    std::vector<std::pair<long long, double>> ring;
    ring.reserve(kWindow);
    std::size_t head = 0;
    auto push_ring = [&](long long x, double a) {
        if (ring.size() < kWindow) {
            ring.emplace_back(x, a);
        } else {
            ring[head] = {x, a};
            head = (head + 1) % kWindow;
        }
    };

    // Checkpoint a(x) at geometrically spaced indices for log-slope fits.
    std::vector<std::pair<long long, double>> checkpoints;
    long long next_checkpoint = 1;
    while (next_checkpoint < std::max(from, 1LL)) next_checkpoint *= 2;

    detail::KahanSum sum;
    long long n = 0;
    long long last_x = from - 1, last_positive_x = from - 1;
    bool saw_negative = false, saw_nonfinite = false, truncated_at_zero = false;
    bool seen_positive = false, nondecreasing_run = true;
    double prev_term = -1.0;

    for (long long x = from; x < from + opts.max_terms; ++x) {
        double a = term(x);
        if (!(a >= 0.0)) {
            saw_negative = true;
            break;
        }
        if (!std::isfinite(a)) {
            saw_nonfinite = true;
            break;
        }
        if (a == 0.0 && opts.zero_is_absorbing && seen_positive) {
            truncated_at_zero = true;
            break;
        }
        sum.add(a);
        last_x = x;
        ++n;
        if (a > 0.0) {
            seen_positive = true;
            last_positive_x = x;
            push_ring(x, a);
        }
        if (x == next_checkpoint) {
            checkpoints.emplace_back(x, a);
            next_checkpoint *= 2;
        }
        if (!out.sum_exceeds_1000_at && sum.sum > 1e3) out.sum_exceeds_1000_at = x;
        if (prev_term >= 0.0 && a < prev_term) nondecreasing_run = false;
        prev_term = a;
        if (sum.sum > opts.divergence_sum_bound && nondecreasing_run) break;
    }

    out.partial_sum = sum.sum;
    out.terms_used = n;

    if (saw_nonfinite) {
        out.verdict = SeriesVerdict::Divergent;
        out.method = "terms overflow to infinity";
        return out;
    }
    if (saw_negative) {
        out.method = "negative term encountered";
        return out;
    }
    if (truncated_at_zero) {
        out.verdict = SeriesVerdict::Finite;
        out.tail = Interval{0.0, 0.0};
        out.value = Interval{sum.sum, sum.sum};
        out.method = "terms vanish beyond x = " + std::to_string(last_positive_x);
        return out;
    }
    if (!seen_positive) {
        out.verdict = SeriesVerdict::Finite;
        out.tail = Interval{0.0, 0.0};
        out.value = Interval{0.0, 0.0};
        out.method = "all terms zero";
        return out;
    }

    if (sum.sum > opts.divergence_sum_bound && nondecreasing_run) {
        // Terms never decreased and the sum blew past the bound.
        char bound[32];
        std::snprintf(bound, sizeof(bound), "%g", opts.divergence_sum_bound);
        out.verdict = SeriesVerdict::Divergent;
        out.comparator = prev_term;
        out.method = std::string("non-decreasing terms, partial sum exceeds ") + bound;
        return out;
    }

    // Tail window: the last nonzero terms, oldest first.  The analysis works
    // on this window; a run of exact zeros at the end only weakens the lower
    // tail bound (to zero), never the upper one.
    std::vector<std::pair<long long, double>> window;
    window.reserve(ring.size());
    for (std::size_t i = 0; i < ring.size(); ++i)
        window.push_back(ring[(head + i) % ring.size()]);
    const bool contiguous = [&] {
        for (std::size_t i = 1; i < window.size(); ++i)
            if (window[i].first != window[i - 1].first + 1) return false;
        return !window.empty();
    }();
    const bool zero_tail_run = last_positive_x < last_x;
    const long long N = last_positive_x;

    // --- ratio test over the tail window --------------------------------
    if (contiguous && window.size() >= 2) {
        double r_max = 0.0, r_min = std::numeric_limits<double>::infinity();
        bool monotone = true;
        double prev_ratio = -1.0;
        for (std::size_t i = 1; i < window.size(); ++i) {
            double r = window[i].second / window[i - 1].second;
            r_max = std::max(r_max, r);
            r_min = std::min(r_min, r);
            if (prev_ratio >= 0.0 && r > prev_ratio * (1.0 + 1e-9)) monotone = false;
            prev_ratio = r;
        }
        if (monotone && r_max <= opts.ratio_bound) {
            double aN = window.back().second;
            double tail_hi = aN * r_max / (1.0 - r_max);
            double tail_lo = zero_tail_run ? 0.0 : aN * r_min;
            out.verdict = SeriesVerdict::Finite;
            out.tail = Interval{tail_lo, tail_hi};
            out.value = Interval{sum.sum + tail_lo, sum.sum + tail_hi};
            out.method = "ratio test, tail ratios <= " + std::to_string(r_max);
            return out;
        }
    }

    // --- power-law fit from geometric checkpoints ------------------------
    std::optional<double> p_hat;
    double p_spread = 0.0;
    if (checkpoints.size() >= 4) {
        std::vector<double> slopes;
        for (std::size_t i = checkpoints.size() - 3; i < checkpoints.size(); ++i) {
            auto [x0, a0] = checkpoints[i - 1];
            auto [x1, a1] = checkpoints[i];
            if (a0 <= 0.0 || a1 <= 0.0) {
                slopes.clear();
                break;
            }
            slopes.push_back(-(std::log(a1) - std::log(a0)) /
                             (std::log(double(x1)) - std::log(double(x0))));
        }
        if (slopes.size() == 3) {
            double lo = std::min({slopes[0], slopes[1], slopes[2]});
            double hi = std::max({slopes[0], slopes[1], slopes[2]});
            if (hi - lo <= opts.p_stability) {
                p_hat = slopes.back();
                p_spread = hi - lo;
            }
        }
    }

    if (p_hat && *p_hat > 1.0 + opts.p_margin && contiguous && !zero_tail_run) {
        // Majorant/minorant constants over the tail window.
        double u_min = std::numeric_limits<double>::infinity(), u_max = 0.0;
        bool usable = true;
        for (const auto& [x, a] : window) {
            double u = a * std::pow(double(x), *p_hat);
            if (!std::isfinite(u) || u <= 0.0) {
                usable = false;
                break;
            }
            u_min = std::min(u_min, u);
            u_max = std::max(u_max, u);
        }
        if (usable && u_max <= u_min * (1.0 + opts.majorant_slack)) {
            double eps = p_spread + 1e-9;
            double p_lo = *p_hat - eps, p_hi = *p_hat + eps;
            auto integral = [](double M, double p) { return std::pow(M, 1.0 - p) / (p - 1.0); };
            double tail_hi = u_max * integral(double(N), p_lo);
            double tail_lo = u_min * integral(double(N + 1), p_hi);
            out.verdict = SeriesVerdict::Finite;
            out.tail = Interval{tail_lo, tail_hi};
            out.value = Interval{sum.sum + tail_lo, sum.sum + tail_hi};
            out.method = "integral test with p = " + std::to_string(*p_hat);
            return out;
        }
    }

    // --- divergence comparators ------------------------------------------
    if (contiguous && !zero_tail_run) {
        if (p_hat && std::abs(*p_hat) <= 1e-3) {
            // Flat terms: bounded below by the window floor.
            double floor_now = std::numeric_limits<double>::infinity();
            for (const auto& [x, a] : window) floor_now = std::min(floor_now, a);
            if (floor_now > 0.0) {
                out.verdict = SeriesVerdict::Divergent;
                out.comparator = floor_now;
                out.method = "terms bounded below by " + std::to_string(floor_now);
                return out;
            }
        }

        if (p_hat && *p_hat < 1.0 - opts.p_margin) {
            // Decay slower than 1/x (or growth): minorant c * x^-p, p < 1.
            double c_min = std::numeric_limits<double>::infinity();
            for (const auto& [x, a] : window)
                c_min = std::min(c_min, a * std::pow(double(x), *p_hat));
            if (std::isfinite(c_min) && c_min > 0.0) {
                out.verdict = SeriesVerdict::Divergent;
                out.comparator = c_min;
                out.method = "power comparator c = " + std::to_string(c_min) +
                             ", p = " + std::to_string(*p_hat) + " < 1";
                return out;
            }
        }

        if (p_hat && std::abs(*p_hat - 1.0) <= opts.p_margin) {
            // Harmonic comparator: x * a(x) bounded below, stable across scales.
            double v_now = std::numeric_limits<double>::infinity();
            for (const auto& [x, a] : window) v_now = std::min(v_now, a * double(x));
            auto [x_half, a_half] = checkpoints[checkpoints.size() - 2];
            double v_half = a_half * double(x_half);
            if (v_now > 0.0 && v_half > 0.0 && v_now >= 0.999 * v_half) {
                out.verdict = SeriesVerdict::Divergent;
                out.comparator = v_now;
                out.method = "harmonic comparator " + std::to_string(v_now) + " / x";
                return out;
            }
        }

        if (nondecreasing_run && n >= 2) {
            out.verdict = SeriesVerdict::Divergent;
            out.comparator = window.front().second;
            out.method =
                "terms non-decreasing, bounded below by " + std::to_string(out.comparator);
            return out;
        }
    }

    out.method = "no criterion reached a verdict";
    return out;
}

/// Plain truncated sum (test oracle and brute-force cross-check).
inline double partial_sum(const std::function<double(long long)>& term, long long from,
                          long long to) {
    detail::KahanSum s;
    for (long long x = from; x <= to; ++x) s.add(term(x));
    return s.sum;
}

}  // namespace crnkit
