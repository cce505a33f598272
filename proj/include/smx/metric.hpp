#pragma once

#include <span>
#include <string>
#include <string_view>

namespace smx {

enum class MetricKind {
    Euclidean,
    Manhattan,
    Chebyshev,
    Cosine,        // Euclidean distance between l2-normalised vectors
    JensenShannon, // sqrt of base-2 Jensen-Shannon divergence
    Triangular,    // sqrt(0.5 * sum (a-b)^2/(a+b)) over unit-sum inputs
};

// A named distance function together with the geometric flags that decide
// which exclusion predicates are legal on it. An exponent alpha != 1 means
// the distance is d(x,y)^alpha of the base metric.
class Metric {
public:
    explicit Metric(MetricKind kind, double alpha = 1.0);

    // Accepts: euclidean, cosine, jsd, triangular, manhattan, chebyshev,
    // pow:<alpha>:<base>
    static Metric parse(std::string_view name);

    double operator()(std::span<const double> a, std::span<const double> b) const;

    const std::string& name() const { return name_; }
    MetricKind kind() const { return kind_; }
    double alpha() const { return alpha_; }
    bool four_point() const { return four_point_; }
    // true for the divergence metrics, whose inputs are normalised to unit
    // sum internally and must be component-wise nonnegative
    bool probability_input() const;

private:
    MetricKind kind_;
    double alpha_;
    bool four_point_;
    std::string name_;
};

// d'(x,y) = d(x,y)^alpha, alpha in (0,1]. Exponents compose multiplicatively.
Metric power_transform(const Metric& base, double alpha);

} // namespace smx
