#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "respira/features.hpp"

namespace respira {

// Equal-weight Gaussian mixture over the kernel centers, evaluated on a
// uniform grid spanning the data range plus five bandwidths each side.
struct Density1D {
    std::vector<double> centers;
    double bandwidth = 0;
    double grid_lo = 0;
    double grid_hi = 0;
    int grid_n = 2048;

    double pdf(double x) const;
    std::vector<double> grid() const;
    std::vector<double> pdf_on_grid() const;
};

// Auto bandwidth is Silverman's rule, 0.9 * min(sd, iqr/1.34) * n^(-1/5);
// degenerate samples (zero spread) demand an explicit bandwidth.
Density1D kde(std::span<const double> samples, std::optional<double> bandwidth = std::nullopt);

// Numeric integral of p * log(p/q) over the union grid, with q floored at
// 1e-12 so disjoint tails stay finite.
double kl_divergence(const Density1D& p, const Density1D& q);

struct TTestResult {
    double t = 0;
    double p = 1;
    double dof = 0;
};

// Welch's unequal-variance t-test, two-sided p via Welch-Satterthwaite
// degrees of freedom. t > 0 when mean(a) > mean(b).
TTestResult welch_ttest(std::span<const double> a, std::span<const double> b);

struct KlTable {
    std::vector<std::string> feature_names;
    std::vector<double> kl;  // KL(A || B) per feature
    double avg = 0;
};

// Per-feature marginal KDE-vs-KDE divergence plus the unweighted average.
KlTable compare_datasets(std::span<const FeatureRow> a, std::span<const FeatureRow> b,
                         std::span<const std::string> feature_names);

}  // namespace respira
