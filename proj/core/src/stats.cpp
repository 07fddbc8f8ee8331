#include "respira/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/distributions/students_t.hpp>

#include "respira/errors.hpp"

namespace respira {

namespace {

constexpr double kKlFloor = 1e-12;

double mean_of(std::span<const double> v) {
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sample_var(std::span<const double> v, double mean) {
    double ss = 0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return ss / static_cast<double>(v.size() - 1);
}

}  // namespace

double Density1D::pdf(double x) const {
    const double norm = 1.0 / (static_cast<double>(centers.size()) * bandwidth *
                               std::sqrt(2.0 * std::numbers::pi));
    double acc = 0;
    for (double c : centers) {
        const double z = (x - c) / bandwidth;
        acc += std::exp(-0.5 * z * z);
    }
    return norm * acc;
}

std::vector<double> Density1D::grid() const {
    std::vector<double> g(static_cast<std::size_t>(grid_n));
    const double step = (grid_hi - grid_lo) / static_cast<double>(grid_n - 1);
    for (int i = 0; i < grid_n; ++i) g[static_cast<std::size_t>(i)] = grid_lo + step * i;
    return g;
}

std::vector<double> Density1D::pdf_on_grid() const {
    auto g = grid();
    std::vector<double> out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = pdf(g[i]);
    return out;
}

Density1D kde(std::span<const double> samples, std::optional<double> bandwidth) {
    if (samples.empty()) throw data_error("kde: no samples");
    for (double x : samples) {
        if (!std::isfinite(x)) throw data_error("kde: non-finite sample");
    }

    double h;
    if (bandwidth) {
        h = *bandwidth;
        if (!(h > 0)) throw config_error("kde: bandwidth must be > 0");
    } else {
        if (samples.size() < 2) throw data_error("kde: auto bandwidth needs >= 2 samples");
        const double mu = mean_of(samples);
        const double sd = std::sqrt(sample_var(samples, mu));
        std::vector<double> sorted(samples.begin(), samples.end());
        std::sort(sorted.begin(), sorted.end());
        const auto quantile = [&](double q) {
            const double pos = q * static_cast<double>(sorted.size() - 1);
            const std::size_t i = static_cast<std::size_t>(pos);
            const double frac = pos - static_cast<double>(i);
            return i + 1 < sorted.size() ? sorted[i] * (1 - frac) + sorted[i + 1] * frac
                                         : sorted[i];
        };
        const double iqr = quantile(0.75) - quantile(0.25);
        double spread = sd;
        if (iqr > 0) spread = std::min(spread, iqr / 1.34);
        if (!(spread > 0))
            throw data_error("kde: all samples identical, pass an explicit bandwidth");
        h = 0.9 * spread * std::pow(static_cast<double>(samples.size()), -0.2);
    }

    Density1D d;
    d.centers.assign(samples.begin(), samples.end());
    d.bandwidth = h;
    const auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
    d.grid_lo = *mn - 5.0 * h;
    d.grid_hi = *mx + 5.0 * h;
    return d;
}

double kl_divergence(const Density1D& p, const Density1D& q) {
    if (!(p.bandwidth > 0) || !(q.bandwidth > 0)) throw config_error("kl: invalid densities");

    const double lo = std::min(p.grid_lo, q.grid_lo);
    const double hi = std::max(p.grid_hi, q.grid_hi);
    const int n = std::max(p.grid_n, q.grid_n);
    if (!(hi > lo) || n < 8) throw data_error("kl: unusable union grid");

    const double step = (hi - lo) / static_cast<double>(n - 1);
    double acc = 0;
    double prev = 0;
    for (int i = 0; i < n; ++i) {
        const double x = lo + step * i;
        const double pv = p.pdf(x);
        const double term = pv <= 0 ? 0.0 : pv * std::log(pv / std::max(q.pdf(x), kKlFloor));
        if (i > 0) acc += 0.5 * (prev + term) * step;
        prev = term;
    }
    if (acc < -1e-6)
        throw data_error("kl: integration failure, result " + std::to_string(acc));
    return acc;
}

TTestResult welch_ttest(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2) throw data_error("welch_ttest: need >= 2 samples per group");
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double ma = mean_of(a);
    const double mb = mean_of(b);
    const double va = sample_var(a, ma);
    const double vb = sample_var(b, mb);
    if (va == 0 && vb == 0) throw data_error("welch_ttest: zero variance in both groups");

    const double ra = va / na;
    const double rb = vb / nb;
    const double denom = std::sqrt(ra + rb);
    const double dof = (ra + rb) * (ra + rb) / (ra * ra / (na - 1) + rb * rb / (nb - 1));

    TTestResult r;
    r.t = (ma - mb) / denom;
    r.dof = dof;
    boost::math::students_t_distribution<double> dist(dof);
    r.p = 2.0 * boost::math::cdf(dist, -std::abs(r.t));
    return r;
}

KlTable compare_datasets(std::span<const FeatureRow> a, std::span<const FeatureRow> b,
                         std::span<const std::string> feature_names) {
    KlTable table;
    auto column = [](std::span<const FeatureRow> rows, int idx) {
        std::vector<double> v;
        v.reserve(rows.size());
        for (const auto& row : rows) v.push_back(row.values[static_cast<std::size_t>(idx)]);
        return v;
    };
    double sum = 0;
    for (const auto& name : feature_names) {
        const int idx = feat::index_of(name);
        if (idx < 0) throw data_error("compare_datasets: unknown feature '" + name + "'");
        auto va = column(a, idx);
        auto vb = column(b, idx);
        if (va.size() < 2 || vb.size() < 2)
            throw data_error("compare_datasets: feature '" + name +
                             "' missing enough samples in one dataset");
        const double kl = kl_divergence(kde(va), kde(vb));
        table.feature_names.push_back(name);
        table.kl.push_back(kl);
        sum += kl;
    }
    if (table.kl.empty()) throw data_error("compare_datasets: no features requested");
    table.avg = sum / static_cast<double>(table.kl.size());
    return table;
}

}  // namespace respira
