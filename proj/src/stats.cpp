#include "feesh/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace feesh::stats {

std::string_view to_string(Method method) { return method == Method::Exact ? "exact" : "normal-approx"; }

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

namespace {

struct Ranked {
    /// Twice the midrank of every observation, a's first then b's. Midranks
    /// are multiples of 1/2, so doubling keeps the arithmetic exact.
    std::vector<std::int64_t> doubled_ranks;
    double tie_sum{0.0};
};

Ranked rank(std::span<const double> a, std::span<const double> b) {
    const std::size_t total = a.size() + b.size();
    std::vector<std::pair<double, std::size_t>> pooled;
    pooled.reserve(total);
    for (std::size_t i = 0; i < a.size(); ++i) pooled.emplace_back(a[i], i);
    for (std::size_t j = 0; j < b.size(); ++j) pooled.emplace_back(b[j], a.size() + j);
    std::sort(pooled.begin(), pooled.end());

    Ranked out;
    out.doubled_ranks.assign(total, 0);
    std::size_t i = 0;
    while (i < total) {
        std::size_t j = i;
        while (j < total && pooled[j].first == pooled[i].first) ++j;
        // Ranks i+1 .. j share the midrank (i + 1 + j) / 2.
        const auto doubled = static_cast<std::int64_t>(i + 1 + j);
        for (std::size_t k = i; k < j; ++k) out.doubled_ranks[pooled[k].second] = doubled;
        const double t = static_cast<double>(j - i);
        out.tie_sum += t * t * t - t;
        i = j;
    }
    return out;
}

void require_non_empty(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("mann_whitney_u: both samples must be non-empty");
    for (auto x : a) {
        if (std::isnan(x)) throw std::invalid_argument("mann_whitney_u: NaN in first sample");
    }
    for (auto x : b) {
        if (std::isnan(x)) throw std::invalid_argument("mann_whitney_u: NaN in second sample");
    }
}

// Two-sided exact p: the share of all C(N, n) labelings whose U lies at
// least as far from n*m/2 as the observed one.
double exact_p(const std::vector<std::int64_t>& doubled_ranks, std::size_t n, std::int64_t observed_doubled_rank_sum) {
    const std::size_t total = doubled_ranks.size();
    // Compare 2*R - n*(N+1) (twice the deviation of the rank sum from its mean).
    const auto centre = static_cast<std::int64_t>(n * (total + 1));
    const auto observed = std::llabs(observed_doubled_rank_sum - centre);

    std::uint64_t hits = 0;
    std::uint64_t count = 0;
    // Gosper's hack enumerates every n-subset of `total` positions.
    std::uint32_t mask = (n == 0) ? 0u : ((1u << n) - 1u);
    const std::uint32_t end = 1u << total;
    while (mask < end) {
        std::int64_t sum = 0;
        for (std::uint32_t bits = mask; bits != 0; bits &= bits - 1) {
            sum += doubled_ranks[static_cast<std::size_t>(__builtin_ctz(bits))];
        }
        ++count;
        if (std::llabs(sum - centre) >= observed) ++hits;
        const std::uint32_t low = mask & (~mask + 1u);
        const std::uint32_t ripple = mask + low;
        mask = (((ripple ^ mask) >> 2) / low) | ripple;
    }
    return static_cast<double>(hits) / static_cast<double>(count);
}

}  // namespace

double normal_approx_p(double u, std::size_t n, std::size_t m, double tie_sum, double* z_out) {
    const double nn = static_cast<double>(n), mm = static_cast<double>(m);
    const double total = nn + mm;
    const double mean = nn * mm / 2.0;
    double variance = nn * mm / 12.0 * (total + 1.0);
    if (total > 1.0) variance = nn * mm / 12.0 * ((total + 1.0) - tie_sum / (total * (total - 1.0)));
    if (!(variance > 0.0)) {
        if (z_out) *z_out = 0.0;
        return 1.0;
    }
    const double deviation = u - mean;
    const double corrected = std::max(0.0, std::abs(deviation) - 0.5);
    const double z = corrected / std::sqrt(variance);
    if (z_out) *z_out = deviation < 0.0 ? -z : z;
    return std::min(1.0, 2.0 * normal_sf(z));
}

TestResult mann_whitney_u(std::span<const double> a, std::span<const double> b, Method method) {
    require_non_empty(a, b);
    const std::size_t n = a.size(), m = b.size();
    if (method == Method::Exact && n + m > exact_limit) {
        throw std::invalid_argument("mann_whitney_u: exact method limited to combined size 16");
    }
    const auto ranked = rank(a, b);
    std::int64_t doubled_rank_sum = 0;
    for (std::size_t i = 0; i < n; ++i) doubled_rank_sum += ranked.doubled_ranks[i];

    TestResult result;
    result.method = method;
    result.u = static_cast<double>(doubled_rank_sum) / 2.0 - static_cast<double>(n * (n + 1)) / 2.0;
    const double approx = normal_approx_p(result.u, n, m, ranked.tie_sum, &result.z);
    result.p = method == Method::Exact ? exact_p(ranked.doubled_ranks, n, doubled_rank_sum) : approx;
    return result;
}

TestResult mann_whitney_u(std::span<const double> a, std::span<const double> b) {
    return mann_whitney_u(a, b, a.size() + b.size() <= exact_limit ? Method::Exact : Method::NormalApprox);
}

double quantile_sorted(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw std::invalid_argument("quantile of an empty sample");
    const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

Summary describe(std::span<const double> sample) {
    if (sample.empty()) throw std::invalid_argument("describe: empty sample");
    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    Summary s;
    s.n = sorted.size();
    s.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(s.n);
    s.min = sorted.front();
    s.max = sorted.back();
    s.q1 = quantile_sorted(sorted, 0.25);
    s.median = quantile_sorted(sorted, 0.5);
    s.q3 = quantile_sorted(sorted, 0.75);
    return s;
}

}  // namespace feesh::stats
