#include "redtide/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include <gsl/gsl_cdf.h>

namespace redtide::stats {

double mean(std::span<const double> xs) {
    double s = 0.0;
    for (double v : xs) s += v;
    return s / static_cast<double>(xs.size());
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("pearson: length mismatch");
    if (x.size() < 3) throw std::invalid_argument("pearson: need at least 3 points");
    const double mx = mean(x), my = mean(y);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) {
        throw std::invalid_argument("pearson: undefined correlation (zero variance)");
    }
    return sxy / std::sqrt(sxx * syy);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / 1.4142135623730951); }

double normal_quantile(double p) {
    if (p <= 0.0 || p >= 1.0) throw std::invalid_argument("normal_quantile: p in (0,1)");
    return gsl_cdf_ugaussian_Pinv(p);
}

double student_t_sf(double t, double df) { return gsl_cdf_tdist_Q(t, df); }

double student_t_quantile(double p, double df) { return gsl_cdf_tdist_Pinv(p, df); }

OlsFit ols(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("ols: length mismatch");
    if (x.size() < 3) throw std::invalid_argument("ols: need at least 3 points");
    const size_t n = x.size();
    const double mx = mean(x), my = mean(y);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx <= 0.0) throw std::invalid_argument("ols: all x values identical");

    OlsFit fit;
    fit.n = n;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (syy <= 0.0) {  // constant response: zero slope fits exactly
        fit.r_squared = 0.0;
        fit.p_value = 1.0;
        return fit;
    }
    fit.r_squared = std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);

    const double sse = std::max(0.0, syy - fit.slope * sxy);
    const double df = static_cast<double>(n - 2);
    const double se2 = sse / df / sxx;
    if (se2 <= 0.0) {
        fit.p_value = std::numeric_limits<double>::min();  // exact fit
    } else {
        const double t = std::fabs(fit.slope) / std::sqrt(se2);
        fit.p_value =
            std::clamp(2.0 * student_t_sf(t, df), std::numeric_limits<double>::min(), 1.0);
    }
    return fit;
}

namespace {

// 16-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr double kGlNode[8] = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
    0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499};
constexpr double kGlWeight[8] = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

template <typename F>
double gauss_legendre(F&& f, double a, double b, int panels) {
    const double h = (b - a) / panels;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + h * (p + 0.5);
        const double half = h / 2.0;
        for (int i = 0; i < 8; ++i) {
            sum += kGlWeight[i] *
                   (f(mid + half * kGlNode[i]) + f(mid - half * kGlNode[i]));
        }
    }
    return sum * (b - a) / (2.0 * panels);
}

double normal_pdf(double z) {
    return std::exp(-0.5 * z * z) * 0.3989422804014327;
}

// P(range of k iid standard normals <= w).
double normal_range_cdf(double w, int k) {
    if (w <= 0.0) return 0.0;
    auto integrand = [&](double z) {
        const double span = normal_cdf(z + w) - normal_cdf(z);
        return normal_pdf(z) * std::pow(span, k - 1);
    };
    return k * gauss_legendre(integrand, -8.5, 8.5, 24);
}

}  // namespace

double studentized_range_cdf(double q, int k, double df) {
    if (k < 2) throw std::invalid_argument("studentized range: k >= 2 required");
    if (q <= 0.0) return 0.0;
    if (df > 1e5 || !std::isfinite(df)) return normal_range_cdf(q, k);
    if (df < 1.0) throw std::invalid_argument("studentized range: df >= 1 required");

    // Outer integral over the scale u = sqrt(chi^2_df / df); the density
    // concentrates near 1 with spread ~ 1/sqrt(2 df).
    const double log_norm = 0.5 * df * std::log(df / 2.0) - std::lgamma(df / 2.0);
    auto chi_density = [&](double u) {
        return std::exp(log_norm + (df - 1.0) * std::log(u) - 0.5 * df * u * u) * 2.0;
    };
    auto integrand = [&](double u) { return chi_density(u) * normal_range_cdf(q * u, k); };
    const double upper = 1.0 + 14.0 / std::sqrt(df);
    return std::min(1.0, gauss_legendre(integrand, 1e-10, upper, 32));
}

double studentized_range_quantile(double p, int k, double df) {
    if (p <= 0.0 || p >= 1.0) {
        throw std::invalid_argument("studentized range quantile: p in (0,1)");
    }
    // The inversion costs ~60 full double integrals; repeated Tukey runs
    // over same-shaped groups hit identical (p, k, df) triples constantly.
    static std::mutex cache_mutex;
    static std::map<std::tuple<double, int, double>, double> cache;
    const auto key = std::make_tuple(p, k, df);
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        const auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }

    double lo = 0.0, hi = 4.0;
    while (studentized_range_cdf(hi, k, df) < p) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e4) throw std::runtime_error("studentized range quantile: no bracket");
    }
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (studentized_range_cdf(mid, k, df) < p) lo = mid;
        else hi = mid;
    }
    const double q = 0.5 * (lo + hi);
    std::lock_guard<std::mutex> lock(cache_mutex);
    cache.emplace(key, q);
    return q;
}

std::vector<TukeyContrast> tukey_contrasts(const std::vector<std::vector<double>>& groups,
                                           double alpha) {
    const size_t k = groups.size();
    if (k < 2) throw std::invalid_argument("tukey: need at least 2 groups");
    size_t total = 0;
    for (const auto& g : groups) {
        if (g.empty()) throw std::invalid_argument("tukey: empty group");
        total += g.size();
    }
    if (total <= k) throw std::invalid_argument("tukey: no error degrees of freedom");

    std::vector<double> means(k);
    double sse = 0.0;
    for (size_t i = 0; i < k; ++i) {
        means[i] = mean(groups[i]);
        for (double v : groups[i]) sse += (v - means[i]) * (v - means[i]);
    }
    const double df = static_cast<double>(total - k);
    const double mse = sse / df;
    const double q = mse > 0.0
                         ? studentized_range_quantile(1.0 - alpha, static_cast<int>(k), df)
                         : 0.0;

    std::vector<TukeyContrast> out;
    for (size_t i = 0; i < k; ++i) {
        for (size_t j = i + 1; j < k; ++j) {
            TukeyContrast c;
            c.group_a = i;
            c.group_b = j;
            c.diff = means[i] - means[j];
            const double half =
                q / 1.4142135623730951 *
                std::sqrt(mse * (1.0 / groups[i].size() + 1.0 / groups[j].size()));
            c.lower = c.diff - half;
            c.upper = c.diff + half;
            out.push_back(c);
        }
    }
    return out;
}

}  // namespace redtide::stats
