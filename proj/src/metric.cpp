#include "smx/metric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace smx {

namespace {

[[noreturn]] void bad_metric(const std::string& msg) {
    throw std::invalid_argument(msg);
}

void require_same_dim(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        bad_metric("incompatible vectors: dim " + std::to_string(a.size()) +
                   " vs " + std::to_string(b.size()));
}

double euclidean_raw(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return std::sqrt(acc);
}

double manhattan_raw(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::fabs(a[i] - b[i]);
    return acc;
}

double chebyshev_raw(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        acc = std::max(acc, std::fabs(a[i] - b[i]));
    return acc;
}

double cosine_raw(std::span<const double> a, std::span<const double> b) {
    double na = 0.0, nb = 0.0;
    for (double v : a) na += v * v;
    for (double v : b) nb += v * v;
    na = std::sqrt(na);
    nb = std::sqrt(nb);
    if (na == 0.0 || nb == 0.0)
        bad_metric("cosine distance undefined for the zero vector");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] / na - b[i] / nb;
        acc += d * d;
    }
    return std::sqrt(acc);
}

double unit_sum(std::span<const double> a) {
    double s = 0.0;
    for (double v : a) {
        if (v < 0.0) bad_metric("divergence metrics require nonnegative components");
        s += v;
    }
    if (s == 0.0) bad_metric("divergence metrics undefined for a zero-sum vector");
    return s;
}

// base-2 logs, so the distance is bounded by 1; 0*log(0) terms are 0.
double jensen_shannon_raw(std::span<const double> a, std::span<const double> b) {
    const double sa = unit_sum(a), sb = unit_sum(b);
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double p = a[i] / sa, q = b[i] / sb;
        const double m = p + q;
        // both terms are added in one step so the sum is bit-symmetric in
        // (a, b): IEEE addition commutes
        const double tp = p > 0.0 ? p * std::log2(2.0 * p / m) : 0.0;
        const double tq = q > 0.0 ? q * std::log2(2.0 * q / m) : 0.0;
        acc += tp + tq;
    }
    const double jsd = std::clamp(0.5 * acc, 0.0, 1.0);
    return std::sqrt(jsd);
}

double triangular_raw(std::span<const double> a, std::span<const double> b) {
    const double sa = unit_sum(a), sb = unit_sum(b);
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double p = a[i] / sa, q = b[i] / sb;
        const double m = p + q;
        if (m > 0.0) {
            const double d = p - q;
            acc += d * d / m;
        }
    }
    return std::sqrt(std::clamp(0.5 * acc, 0.0, 1.0));
}

bool base_four_point(MetricKind kind) {
    switch (kind) {
        case MetricKind::Euclidean:
        case MetricKind::Cosine:
        case MetricKind::JensenShannon:
        case MetricKind::Triangular:
            return true;
        case MetricKind::Manhattan:
        case MetricKind::Chebyshev:
            return false;
    }
    return false;
}

std::string base_name(MetricKind kind) {
    switch (kind) {
        case MetricKind::Euclidean: return "euclidean";
        case MetricKind::Manhattan: return "manhattan";
        case MetricKind::Chebyshev: return "chebyshev";
        case MetricKind::Cosine: return "cosine";
        case MetricKind::JensenShannon: return "jsd";
        case MetricKind::Triangular: return "triangular";
    }
    return "?";
}

} // namespace

Metric::Metric(MetricKind kind, double alpha) : kind_(kind), alpha_(alpha) {
    if (!(alpha > 0.0) || alpha > 1.0)
        bad_metric("power exponent must lie in (0, 1]");
    if (alpha_ == 1.0) {
        four_point_ = base_four_point(kind_);
        name_ = base_name(kind_);
    } else {
        four_point_ = alpha_ <= 0.5;
        char buf[64];
        std::snprintf(buf, sizeof buf, "pow:%g:%s", alpha_, base_name(kind_).c_str());
        name_ = buf;
    }
}

bool Metric::probability_input() const {
    return kind_ == MetricKind::JensenShannon || kind_ == MetricKind::Triangular;
}

double Metric::operator()(std::span<const double> a, std::span<const double> b) const {
    require_same_dim(a, b);
    double d = 0.0;
    switch (kind_) {
        case MetricKind::Euclidean: d = euclidean_raw(a, b); break;
        case MetricKind::Manhattan: d = manhattan_raw(a, b); break;
        case MetricKind::Chebyshev: d = chebyshev_raw(a, b); break;
        case MetricKind::Cosine: d = cosine_raw(a, b); break;
        case MetricKind::JensenShannon: d = jensen_shannon_raw(a, b); break;
        case MetricKind::Triangular: d = triangular_raw(a, b); break;
    }
    return alpha_ == 1.0 ? d : std::pow(d, alpha_);
}

Metric Metric::parse(std::string_view name) {
    if (name == "euclidean") return Metric(MetricKind::Euclidean);
    if (name == "manhattan") return Metric(MetricKind::Manhattan);
    if (name == "chebyshev") return Metric(MetricKind::Chebyshev);
    if (name == "cosine") return Metric(MetricKind::Cosine);
    if (name == "jsd") return Metric(MetricKind::JensenShannon);
    if (name == "triangular") return Metric(MetricKind::Triangular);
    if (name.rfind("pow:", 0) == 0) {
        const auto rest = name.substr(4);
        const auto colon = rest.find(':');
        if (colon == std::string_view::npos)
            bad_metric("expected pow:<alpha>:<base>, got '" + std::string(name) + "'");
        double alpha = 0.0;
        try {
            alpha = std::stod(std::string(rest.substr(0, colon)));
        } catch (const std::exception&) {
            bad_metric("bad exponent in '" + std::string(name) + "'");
        }
        return power_transform(Metric::parse(rest.substr(colon + 1)), alpha);
    }
    bad_metric("unknown metric '" + std::string(name) + "'");
}

Metric power_transform(const Metric& base, double alpha) {
    if (!(alpha > 0.0) || alpha > 1.0)
        bad_metric("power exponent must lie in (0, 1]");
    return Metric(base.kind(), base.alpha() * alpha);
}

} // namespace smx
