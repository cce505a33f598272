#include "smx/index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "smx/rng.hpp"

namespace smx {

// --- names -----------------------------------------------------------------

namespace {

struct NameEntry {
    Structure s;
    std::string_view name;
};

constexpr NameEntry kNames[] = {
    {Structure::SatPure, "sat_pure"},
    {Structure::SatDistalPure, "sat_distal_pure"},
    {Structure::SatDistalFixed, "sat_distal_fixed"},
    {Structure::SatDistalLog, "sat_distal_log"},
    {Structure::SatGlobalFixed, "sat_global_fixed"},
    {Structure::SatGlobalLog, "sat_global_log"},
    {Structure::HptFftBinary, "hpt_fft_binary"},
    {Structure::HptFftFixed, "hpt_fft_fixed"},
    {Structure::HptFftLog, "hpt_fft_log"},
    {Structure::HptRandomBinary, "hpt_random_binary"},
    {Structure::HptRandomFixed, "hpt_random_fixed"},
    {Structure::HptRandomLog, "hpt_random_log"},
    {Structure::MonptRand, "monpt_rand"},
    {Structure::MonptFar, "monpt_far"},
    {Structure::BalancedMonptRand, "balanced_monpt_rand"},
    {Structure::BalancedMonptFar, "balanced_monpt_far"},
    {Structure::LrtRand, "lrt_rand"},
    {Structure::LrtFar, "lrt_far"},
    {Structure::Vpt, "vpt"},
};

} // namespace

Structure parse_structure(std::string_view name) {
    for (const auto& e : kNames)
        if (e.name == name) return e.s;
    throw std::invalid_argument("unknown structure '" + std::string(name) + "'");
}

std::string_view structure_name(Structure s) {
    for (const auto& e : kNames)
        if (e.s == s) return e.name;
    return "?";
}

const std::array<Structure, 19>& all_structures() {
    static const std::array<Structure, 19> all = [] {
        std::array<Structure, 19> a{};
        for (std::size_t i = 0; i < a.size(); ++i) a[i] = kNames[i].s;
        return a;
    }();
    return all;
}

Exclusion parse_exclusion(std::string_view name) {
    if (name == "hyperbolic") return Exclusion::Hyperbolic;
    if (name == "hilbert") return Exclusion::Hilbert;
    throw std::invalid_argument("unknown exclusion '" + std::string(name) + "'");
}

std::string_view exclusion_name(Exclusion e) {
    return e == Exclusion::Hyperbolic ? "hyperbolic" : "hilbert";
}

// --- pivot selection -------------------------------------------------------

std::vector<std::uint32_t> select_random(std::span<const std::uint32_t> candidates,
                                         std::size_t k, std::uint64_t seed) {
    if (k < 1 || k > candidates.size())
        throw std::invalid_argument("pivot count out of range");
    std::vector<std::uint32_t> pool(candidates.begin(), candidates.end());
    Rng rng(seed);
    std::vector<std::uint32_t> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
        const std::size_t j = pick(rng);
        out.push_back(pool[j]);
        pool[j] = pool.back();
        pool.pop_back();
    }
    return out;
}

std::vector<std::uint32_t> select_fft(std::span<const std::uint32_t> candidates,
                                      std::size_t k, std::uint64_t seed,
                                      const DistFn& dist,
                                      std::optional<std::uint32_t> first) {
    if (k < 1 || k > candidates.size())
        throw std::invalid_argument("pivot count out of range");

    const std::size_t n = candidates.size();
    std::vector<std::uint32_t> out;
    out.reserve(k);

    std::size_t first_idx = 0;
    if (first) {
        const auto it = std::find(candidates.begin(), candidates.end(), *first);
        if (it == candidates.end())
            throw std::invalid_argument("forced first pivot not among candidates");
        first_idx = static_cast<std::size_t>(it - candidates.begin());
    } else {
        Rng rng(seed);
        first_idx = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    }
    out.push_back(candidates[first_idx]);

    std::vector<double> mind(n, std::numeric_limits<double>::infinity());
    std::vector<char> used(n, 0);
    used[first_idx] = 1;
    for (std::size_t i = 0; i < n; ++i)
        if (!used[i]) mind[i] = dist(candidates[i], out.back());

    while (out.size() < k) {
        std::size_t best = n;
        for (std::size_t i = 0; i < n; ++i)
            if (!used[i] && (best == n || mind[i] > mind[best])) best = i;
        used[best] = 1;
        out.push_back(candidates[best]);
        for (std::size_t i = 0; i < n; ++i)
            if (!used[i]) mind[i] = std::min(mind[i], dist(candidates[i], out.back()));
    }
    return out;
}

std::vector<std::uint32_t> select_sat(std::span<const std::uint32_t> candidates,
                                      std::uint32_t centre, SatOrder order,
                                      std::size_t cap, const DistFn& dist,
                                      const std::vector<double>* global_key) {
    if (candidates.empty()) return {};
    if (order == SatOrder::Global && global_key == nullptr)
        throw std::invalid_argument("global order requires a key vector");

    const std::size_t n = candidates.size();
    std::vector<double> centre_d(n);
    for (std::size_t i = 0; i < n; ++i) centre_d[i] = dist(candidates[i], centre);

    std::vector<std::uint32_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0u);
    auto key = [&](std::uint32_t i) {
        return order == SatOrder::Global ? (*global_key)[candidates[i]] : centre_d[i];
    };
    const bool ascending = order == SatOrder::Proximal;
    std::sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) {
        const double ka = key(a), kb = key(b);
        if (ka != kb) return ascending ? ka < kb : ka > kb;
        return candidates[a] < candidates[b];
    });

    std::vector<std::uint32_t> out;
    for (std::uint32_t i : idx) {
        bool accept = true;
        for (std::uint32_t p : out)
            if (dist(candidates[i], p) <= centre_d[i]) {
                accept = false;
                break;
            }
        if (!accept) continue;
        out.push_back(candidates[i]);
        if (cap != 0 && out.size() == cap) break;
    }
    return out;
}

std::size_t count_non_exclusive(std::span<const PlanarPoint> sample, double delta,
                                double t, Exclusion exclusion) {
    if (!(delta > 0.0)) throw std::invalid_argument("degenerate pivot pair");
    std::size_t count = 0;
    for (const auto& p : sample) {
        bool exclusive;
        if (exclusion == Exclusion::Hilbert) {
            exclusive = std::fabs(p.x) > t;
        } else {
            const double d1 = std::hypot(p.x + delta / 2.0, p.y);
            const double d2 = std::hypot(p.x - delta / 2.0, p.y);
            exclusive = std::fabs(d1 - d2) > 2.0 * t;
        }
        if (!exclusive) ++count;
    }
    return count;
}

// --- shared machinery ------------------------------------------------------

namespace {

struct Traits {
    enum class Family { Nary, Binary, Vp } family = Family::Nary;
    // n-ary
    bool sat = false;
    bool pure = false;
    SatOrder order = SatOrder::Proximal;
    enum class Arity { Binary, Fixed, Log, Uncapped } arity = Arity::Log;
    bool fft = false;
    // binary planar
    bool balanced = false;
    bool lrt = false;
    bool far = false;
};

Traits traits_of(Structure s) {
    using A = Traits::Arity;
    Traits t;
    switch (s) {
        case Structure::SatPure:
            t.sat = t.pure = true;
            t.order = SatOrder::Proximal;
            t.arity = A::Uncapped;
            break;
        case Structure::SatDistalPure:
            t.sat = t.pure = true;
            t.order = SatOrder::Distal;
            t.arity = A::Uncapped;
            break;
        case Structure::SatDistalFixed:
            t.sat = true;
            t.order = SatOrder::Distal;
            t.arity = A::Fixed;
            break;
        case Structure::SatDistalLog:
            t.sat = true;
            t.order = SatOrder::Distal;
            t.arity = A::Log;
            break;
        case Structure::SatGlobalFixed:
            t.sat = true;
            t.order = SatOrder::Global;
            t.arity = A::Fixed;
            break;
        case Structure::SatGlobalLog:
            t.sat = true;
            t.order = SatOrder::Global;
            t.arity = A::Log;
            break;
        case Structure::HptFftBinary: t.fft = true; t.arity = A::Binary; break;
        case Structure::HptFftFixed: t.fft = true; t.arity = A::Fixed; break;
        case Structure::HptFftLog: t.fft = true; t.arity = A::Log; break;
        case Structure::HptRandomBinary: t.arity = A::Binary; break;
        case Structure::HptRandomFixed: t.arity = A::Fixed; break;
        case Structure::HptRandomLog: t.arity = A::Log; break;
        case Structure::MonptRand: t.family = Traits::Family::Binary; break;
        case Structure::MonptFar:
            t.family = Traits::Family::Binary;
            t.far = true;
            break;
        case Structure::BalancedMonptRand:
            t.family = Traits::Family::Binary;
            t.balanced = true;
            break;
        case Structure::BalancedMonptFar:
            t.family = Traits::Family::Binary;
            t.balanced = t.far = true;
            break;
        case Structure::LrtRand:
            t.family = Traits::Family::Binary;
            t.balanced = t.lrt = true;
            break;
        case Structure::LrtFar:
            t.family = Traits::Family::Binary;
            t.balanced = t.lrt = t.far = true;
            break;
        case Structure::Vpt: t.family = Traits::Family::Vp; break;
    }
    return t;
}

// arity recomputed per node; the log policy shrinks as the tree descends
std::size_t node_arity(Traits::Arity a, std::size_t subset) {
    switch (a) {
        case Traits::Arity::Binary: return 2;
        case Traits::Arity::Fixed: return 4;
        case Traits::Arity::Log:
            return std::max<std::size_t>(
                2, static_cast<std::size_t>(std::floor(std::log(static_cast<double>(subset)))));
        case Traits::Arity::Uncapped: return 0;
    }
    return 2;
}

// Rank-based median split on (score, id): sizes differ by at most 1, and the
// returned boundary value separates the halves (left <= split <= right) so
// it stays usable as an exclusion boundary even with tied scores.
struct MedianSplit {
    std::vector<std::uint32_t> left, right; // positions into the input
    double split = 0.0;
};

MedianSplit median_split(std::span<const double> score,
                         std::span<const std::uint32_t> ids) {
    const std::size_t n = score.size();
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (score[a] != score[b]) return score[a] < score[b];
        return ids[a] < ids[b];
    });
    MedianSplit out;
    const std::size_t nl = n / 2;
    out.left.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(nl));
    out.right.assign(order.begin() + static_cast<std::ptrdiff_t>(nl), order.end());
    out.split = score[order[nl]];
    return out;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

// --- n-ary partition trees (hpt_* and sat_*) -------------------------------

struct NaryNode {
    std::vector<std::uint32_t> leaf_ids;
    std::vector<std::uint32_t> pivots;
    std::vector<double> cover;        // max distance from pivot to its partition
    std::vector<double> inter;        // packed upper triangle of pivot distances
    std::vector<double> anc;          // [pivot][ancestor], pure SATs only
    std::size_t n_ancestors = 0;
    std::vector<std::unique_ptr<NaryNode>> children;
    bool is_leaf() const { return pivots.empty(); }
};

class NaryIndex final : public Index {
public:
    NaryIndex(const Dataset& data, const Metric& metric, const IndexConfig& cfg,
              Traits traits)
        : Index(data, metric, cfg), traits_(traits) {
        build();
    }

protected:
    void run_query(QueryCtx& ctx) const override {
        std::vector<double> anc_dq;
        if (centre_) {
            const double dc = ctx.dist(*centre_);
            ctx.check(*centre_, dc);
            if (traits_.pure) anc_dq.push_back(dc);
        }
        if (root_) query_node(*root_, ctx, anc_dq);
    }

    void collect_stored(std::vector<std::uint32_t>& out) const override {
        if (centre_) out.push_back(*centre_);
        collect_node(root_.get(), out);
    }

private:
    Traits traits_;
    std::optional<std::uint32_t> centre_;
    std::unique_ptr<NaryNode> root_;
    std::vector<double> global_key_; // distance from the tree-global centre

    double d(std::uint32_t a, std::uint32_t b) {
        ++build_distances_;
        return metric_((*data_)[a], (*data_)[b]);
    }

    void build() {
        Rng rng(derive_seed(config_.seed, "nary"));
        std::vector<std::uint32_t> ids(data_->size());
        std::iota(ids.begin(), ids.end(), 0u);

        std::vector<std::uint32_t> ancestors;
        if (traits_.sat) {
            centre_ = pick_outlier_centre(ids, rng);
            ids.erase(std::find(ids.begin(), ids.end(), *centre_));
            if (traits_.order == SatOrder::Global) {
                global_key_.resize(data_->size(), 0.0);
                for (std::uint32_t id : ids) global_key_[id] = d(id, *centre_);
            }
            if (traits_.pure) ancestors.push_back(*centre_);
        }
        if (!ids.empty()) root_ = build_node(ids, centre_, ancestors, rng);
    }

    // outlier heuristic: the farthest, among a 100-point sample, from one
    // randomly drawn point
    std::uint32_t pick_outlier_centre(const std::vector<std::uint32_t>& ids, Rng& rng) {
        std::uniform_int_distribution<std::size_t> pick(0, ids.size() - 1);
        const std::uint32_t ref = ids[pick(rng)];
        std::uint32_t best = ref;
        double best_d = -1.0;
        const std::size_t sample = std::min<std::size_t>(100, ids.size());
        for (std::size_t i = 0; i < sample; ++i) {
            const std::uint32_t c = ids[pick(rng)];
            if (c == ref) continue;
            const double dd = d(c, ref);
            if (dd > best_d) {
                best_d = dd;
                best = c;
            }
        }
        return best;
    }

    std::unique_ptr<NaryNode> build_node(const std::vector<std::uint32_t>& subset,
                                         std::optional<std::uint32_t> centre,
                                         const std::vector<std::uint32_t>& ancestors,
                                         Rng& rng) {
        auto node = std::make_unique<NaryNode>();
        const std::size_t arity = node_arity(traits_.arity, subset.size());
        const std::size_t leaf_cap =
            config_.leaf_capacity ? config_.leaf_capacity
                                  : (arity == 0 ? 2 : arity);
        if (subset.size() <= leaf_cap) {
            node->leaf_ids = subset;
            return node;
        }

        DistFn dist = [this](std::uint32_t a, std::uint32_t b) { return d(a, b); };
        if (traits_.sat) {
            node->pivots = select_sat(subset, *centre, traits_.order, arity, dist,
                                      traits_.order == SatOrder::Global ? &global_key_
                                                                        : nullptr);
        } else if (traits_.fft) {
            node->pivots = select_fft(subset, std::min(arity, subset.size()), rng(), dist);
        } else {
            node->pivots = select_random(subset, std::min(arity, subset.size()), rng());
        }
        const std::size_t k = node->pivots.size();

        node->inter.resize(k * (k - 1) / 2);
        std::size_t pos = 0;
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j)
                node->inter[pos++] = d(node->pivots[i], node->pivots[j]);

        if (traits_.pure) {
            node->n_ancestors = ancestors.size();
            node->anc.resize(k * ancestors.size());
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t a = 0; a < ancestors.size(); ++a)
                    node->anc[i * ancestors.size() + a] = d(node->pivots[i], ancestors[a]);
        }

        // nearest-pivot assignment; ties go to the lowest pivot index
        std::vector<std::vector<std::uint32_t>> parts(k);
        std::vector<std::vector<double>> part_d(k);
        node->cover.assign(k, 0.0);
        std::vector<char> is_pivot_id(0);
        for (std::uint32_t s : subset) {
            if (std::find(node->pivots.begin(), node->pivots.end(), s) !=
                node->pivots.end())
                continue;
            std::size_t best = 0;
            double best_d = kInf;
            for (std::size_t i = 0; i < k; ++i) {
                const double dd = d(s, node->pivots[i]);
                if (dd < best_d) {
                    best_d = dd;
                    best = i;
                }
            }
            parts[best].push_back(s);
            part_d[best].push_back(best_d);
            node->cover[best] = std::max(node->cover[best], best_d);
        }

        node->children.resize(k);
        for (std::size_t i = 0; i < k; ++i) {
            if (parts[i].empty()) continue;
            std::vector<std::uint32_t> child_anc;
            if (traits_.pure) {
                child_anc = ancestors;
                child_anc.push_back(node->pivots[i]);
            }
            node->children[i] = build_node(parts[i], node->pivots[i], child_anc, rng);
        }
        return node;
    }

    void query_node(const NaryNode& node, QueryCtx& ctx,
                    std::vector<double>& anc_dq) const {
        ++ctx.nodes;
        if (node.is_leaf()) {
            ctx.scan(node.leaf_ids);
            return;
        }
        const std::size_t k = node.pivots.size();
        std::vector<double> dq(k);
        for (std::size_t i = 0; i < k; ++i) {
            dq[i] = ctx.dist(node.pivots[i]);
            ctx.check(node.pivots[i], dq[i]);
        }

        std::vector<char> excluded(k, 0);
        for (std::size_t i = 0; i < k; ++i)
            if (cover_radius_excludes(dq[i], node.cover[i], ctx.t)) excluded[i] = 1;

        const bool hilbert = ctx.exclusion == Exclusion::Hilbert;
        std::size_t pos = 0;
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = i + 1; j < k; ++j, ++pos) {
                const double delta = node.inter[pos];
                if (hilbert) {
                    if (delta <= 0.0) continue; // duplicate pivots: no hyperplane
                    const double lhs = (dq[i] * dq[i] - dq[j] * dq[j]) / delta;
                    if (lhs > 2.0 * ctx.t) excluded[i] = 1;
                    if (-lhs > 2.0 * ctx.t) excluded[j] = 1;
                } else {
                    if (dq[i] - dq[j] > 2.0 * ctx.t) excluded[i] = 1;
                    if (dq[j] - dq[i] > 2.0 * ctx.t) excluded[j] = 1;
                }
            }
        }

        // pure SATs: every point below pivot i is at least as close to it as
        // to any pivot on the path above, so those pairs prune too
        if (traits_.pure) {
            for (std::size_t i = 0; i < k; ++i) {
                for (std::size_t a = 0; a < node.n_ancestors && !excluded[i]; ++a) {
                    if (hilbert) {
                        const double delta = node.anc[i * node.n_ancestors + a];
                        if (delta <= 0.0) continue;
                        if ((dq[i] * dq[i] - anc_dq[a] * anc_dq[a]) / delta > 2.0 * ctx.t)
                            excluded[i] = 1;
                    } else {
                        if (dq[i] - anc_dq[a] > 2.0 * ctx.t) excluded[i] = 1;
                    }
                }
            }
        }

        for (std::size_t i = 0; i < k; ++i) {
            if (excluded[i] || !node.children[i]) continue;
            if (traits_.pure) {
                anc_dq.push_back(dq[i]);
                query_node(*node.children[i], ctx, anc_dq);
                anc_dq.pop_back();
            } else {
                query_node(*node.children[i], ctx, anc_dq);
            }
        }
    }

    static void collect_node(const NaryNode* node, std::vector<std::uint32_t>& out) {
        if (!node) return;
        if (node->is_leaf()) {
            out.insert(out.end(), node->leaf_ids.begin(), node->leaf_ids.end());
            return;
        }
        out.insert(out.end(), node->pivots.begin(), node->pivots.end());
        for (const auto& c : node->children) collect_node(c.get(), out);
    }
};

// --- binary planar trees (monpt, balanced monpt, lrt) ----------------------

struct BinNode {
    bool leaf = false;
    std::vector<std::uint32_t> leaf_ids;
    std::uint32_t p2 = 0;
    double delta = 0.0;
    bool degenerate = false; // delta == 0: median-ball split on d(s, p1)
    double split = 0.0;      // boundary on the node's split scalar
    double theta = 0.0, h = 0.0; // rotation (lrt only)
    bool right_inherits_p2 = false;
    std::unique_ptr<BinNode> left, right;
};

class BinaryIndex final : public Index {
public:
    BinaryIndex(const Dataset& data, const Metric& metric, const IndexConfig& cfg,
                Traits traits)
        : Index(data, metric, cfg), traits_(traits) {
        build();
    }

protected:
    void run_query(QueryCtx& ctx) const override {
        const double d1 = ctx.dist(root_p1_);
        ctx.check(root_p1_, d1);
        if (root_) query_node(*root_, ctx, d1);
    }

    void collect_stored(std::vector<std::uint32_t>& out) const override {
        out.push_back(root_p1_);
        collect_node(root_.get(), out);
    }

private:
    Traits traits_;
    std::uint32_t root_p1_ = 0;
    std::unique_ptr<BinNode> root_;

    double d(std::uint32_t a, std::uint32_t b) {
        ++build_distances_;
        return metric_((*data_)[a], (*data_)[b]);
    }

    std::size_t leaf_cap() const {
        return config_.leaf_capacity ? config_.leaf_capacity : 2;
    }

    void build() {
        Rng rng(derive_seed(config_.seed, "binary"));
        const std::size_t n = data_->size();
        std::vector<std::uint32_t> ids(n);
        std::iota(ids.begin(), ids.end(), 0u);

        const std::size_t r = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
        root_p1_ = ids[r];
        ids.erase(ids.begin() + static_cast<std::ptrdiff_t>(r));
        std::vector<double> d1(ids.size());
        for (std::size_t i = 0; i < ids.size(); ++i) d1[i] = d(ids[i], root_p1_);
        if (!ids.empty()) root_ = build_node(std::move(ids), std::move(d1), rng);
    }

    std::unique_ptr<BinNode> build_node(std::vector<std::uint32_t> A,
                                        std::vector<double> d1, Rng& rng) {
        auto node = std::make_unique<BinNode>();
        if (A.size() <= leaf_cap()) {
            node->leaf = true;
            node->leaf_ids = std::move(A);
            return node;
        }

        // second pivot: uniform, or the farthest from the inherited pivot
        std::size_t pi;
        if (traits_.far) {
            pi = 0;
            for (std::size_t i = 1; i < A.size(); ++i)
                if (d1[i] > d1[pi] || (d1[i] == d1[pi] && A[i] < A[pi])) pi = i;
        } else {
            pi = std::uniform_int_distribution<std::size_t>(0, A.size() - 1)(rng);
        }
        node->p2 = A[pi];
        node->delta = d1[pi];
        A.erase(A.begin() + static_cast<std::ptrdiff_t>(pi));
        d1.erase(d1.begin() + static_cast<std::ptrdiff_t>(pi));

        std::vector<double> d2(A.size());
        for (std::size_t i = 0; i < A.size(); ++i) d2[i] = d(A[i], node->p2);

        std::vector<std::uint32_t> left_pos, right_pos;
        if (node->delta == 0.0) {
            node->degenerate = true;
            auto ms = median_split(d1, A);
            node->split = ms.split;
            left_pos = std::move(ms.left);
            right_pos = std::move(ms.right);
        } else {
            std::vector<double> score(A.size());
            for (std::size_t i = 0; i < A.size(); ++i)
                score[i] = (d1[i] * d1[i] - d2[i] * d2[i]) / (2.0 * node->delta);

            if (traits_.lrt) {
                std::vector<PlanarPoint> pts(A.size());
                for (std::size_t i = 0; i < A.size(); ++i) {
                    const double from_p1 = score[i] + node->delta / 2.0;
                    pts[i] = {score[i],
                              std::sqrt(std::max(0.0, d1[i] * d1[i] - from_p1 * from_p1))};
                }
                const auto params = fit_line(pts);
                node->theta = params.theta;
                node->h = params.h;
                for (std::size_t i = 0; i < A.size(); ++i) score[i] = rotate(pts[i], params)[0];
            }

            if (traits_.balanced) {
                auto ms = median_split(score, A);
                node->split = ms.split;
                left_pos = std::move(ms.left);
                right_pos = std::move(ms.right);
            } else {
                // hyperplane split: nearer pivot wins, ties to p1
                node->split = 0.0;
                for (std::uint32_t i = 0; i < A.size(); ++i)
                    (score[i] <= 0.0 ? left_pos : right_pos).push_back(i);
            }
            node->right_inherits_p2 = !traits_.lrt;
        }

        auto take = [&](const std::vector<std::uint32_t>& pos, bool use_d2) {
            std::pair<std::vector<std::uint32_t>, std::vector<double>> out;
            out.first.reserve(pos.size());
            out.second.reserve(pos.size());
            for (std::uint32_t i : pos) {
                out.first.push_back(A[i]);
                out.second.push_back(use_d2 ? d2[i] : d1[i]);
            }
            return out;
        };

        auto [la, ld] = take(left_pos, false);
        auto [ra, rd] = take(right_pos, node->right_inherits_p2);
        if (!la.empty()) node->left = build_node(std::move(la), std::move(ld), rng);
        if (!ra.empty()) node->right = build_node(std::move(ra), std::move(rd), rng);
        return node;
    }

    void query_node(const BinNode& node, QueryCtx& ctx, double d1) const {
        ++ctx.nodes;
        if (node.leaf) {
            ctx.scan(node.leaf_ids);
            return;
        }
        const double d2 = ctx.dist(node.p2);
        ctx.check(node.p2, d2);

        double scalar = 0.0, margin = kInf;
        if (node.degenerate) {
            scalar = d1;
            margin = ctx.t; // ball split: |d(q,p1) - d(s,p1)| <= d(q,s)
        } else {
            const double x = (d1 * d1 - d2 * d2) / (2.0 * node.delta);
            if (traits_.lrt) {
                if (ctx.exclusion == Exclusion::Hilbert) {
                    const double from_p1 = x + node.delta / 2.0;
                    const double y = std::sqrt(std::max(0.0, d1 * d1 - from_p1 * from_p1));
                    scalar = rotate({x, y}, {node.theta, node.h, 0.0, false})[0];
                    margin = ctx.t;
                }
                // rotated coordinates have no triangle-only bound, so the
                // hyperbolic mode keeps margin = inf and searches both sides
            } else {
                scalar = x;
                margin = ctx.exclusion == Exclusion::Hilbert
                             ? ctx.t
                             : ctx.t * (d1 + d2) / node.delta;
            }
        }

        const bool go_left = !(scalar - margin > node.split);
        const bool go_right = !(scalar + margin < node.split);
        if (go_left && node.left)
            query_node(*node.left, ctx, d1);
        if (go_right && node.right)
            query_node(*node.right, ctx, node.right_inherits_p2 ? d2 : d1);
    }

    static void collect_node(const BinNode* node, std::vector<std::uint32_t>& out) {
        if (!node) return;
        if (node->leaf) {
            out.insert(out.end(), node->leaf_ids.begin(), node->leaf_ids.end());
            return;
        }
        out.push_back(node->p2);
        collect_node(node->left.get(), out);
        collect_node(node->right.get(), out);
    }
};

// --- vantage point tree ----------------------------------------------------

struct VpNode {
    bool leaf = false;
    std::vector<std::uint32_t> leaf_ids;
    std::uint32_t pivot = 0;
    double split = 0.0; // median pivot distance; inside <= split <= outside
    std::unique_ptr<VpNode> inside, outside;
};

class VpIndex final : public Index {
public:
    VpIndex(const Dataset& data, const Metric& metric, const IndexConfig& cfg)
        : Index(data, metric, cfg) {
        Rng rng(derive_seed(config_.seed, "vpt"));
        std::vector<std::uint32_t> ids(data.size());
        std::iota(ids.begin(), ids.end(), 0u);
        root_ = build_node(std::move(ids), rng);
    }

protected:
    void run_query(QueryCtx& ctx) const override { query_node(*root_, ctx); }

    void collect_stored(std::vector<std::uint32_t>& out) const override {
        collect_node(root_.get(), out);
    }

private:
    std::unique_ptr<VpNode> root_;

    double d(std::uint32_t a, std::uint32_t b) {
        ++build_distances_;
        return metric_((*data_)[a], (*data_)[b]);
    }

    std::size_t leaf_cap() const {
        return config_.leaf_capacity ? config_.leaf_capacity : 2;
    }

    std::unique_ptr<VpNode> build_node(std::vector<std::uint32_t> A, Rng& rng) {
        auto node = std::make_unique<VpNode>();
        if (A.size() <= leaf_cap()) {
            node->leaf = true;
            node->leaf_ids = std::move(A);
            return node;
        }
        const std::size_t pi =
            std::uniform_int_distribution<std::size_t>(0, A.size() - 1)(rng);
        node->pivot = A[pi];
        A.erase(A.begin() + static_cast<std::ptrdiff_t>(pi));

        std::vector<double> dist(A.size());
        for (std::size_t i = 0; i < A.size(); ++i) dist[i] = d(A[i], node->pivot);

        auto ms = median_split(dist, A);
        node->split = ms.split;
        auto take = [&](const std::vector<std::uint32_t>& pos) {
            std::vector<std::uint32_t> out;
            out.reserve(pos.size());
            for (std::uint32_t i : pos) out.push_back(A[i]);
            return out;
        };
        auto la = take(ms.left);
        auto ra = take(ms.right);
        if (!la.empty()) node->inside = build_node(std::move(la), rng);
        if (!ra.empty()) node->outside = build_node(std::move(ra), rng);
        return node;
    }

    void query_node(const VpNode& node, QueryCtx& ctx) const {
        ++ctx.nodes;
        if (node.leaf) {
            ctx.scan(node.leaf_ids);
            return;
        }
        const double dq = ctx.dist(node.pivot);
        ctx.check(node.pivot, dq);
        if (node.inside && !(dq - ctx.t > node.split)) query_node(*node.inside, ctx);
        if (node.outside && !(dq + ctx.t < node.split)) query_node(*node.outside, ctx);
    }

    static void collect_node(const VpNode* node, std::vector<std::uint32_t>& out) {
        if (!node) return;
        if (node->leaf) {
            out.insert(out.end(), node->leaf_ids.begin(), node->leaf_ids.end());
            return;
        }
        out.push_back(node->pivot);
        collect_node(node->inside.get(), out);
        collect_node(node->outside.get(), out);
    }
};

} // namespace

// --- Index facade ----------------------------------------------------------

QueryReport Index::range_query(std::span<const double> q, double t,
                               Exclusion exclusion) const {
    if (t < 0.0) throw std::invalid_argument("threshold must be nonnegative");
    if (q.size() != data_->dim)
        throw std::invalid_argument("query dimension mismatch");
    if (exclusion == Exclusion::Hilbert && !metric_.four_point())
        throw std::invalid_argument(
            "hilbert exclusion is illegal on a metric without the four-point property");

    QueryCtx ctx;
    ctx.q = q;
    ctx.t = t;
    ctx.exclusion = exclusion;
    ctx.data = data_;
    ctx.metric = &metric_;
    run_query(ctx);

    QueryReport report;
    std::sort(ctx.results.begin(), ctx.results.end());
    report.result_ids = std::move(ctx.results);
    report.distance_count = ctx.distances;
    report.nodes_visited = ctx.nodes;
    return report;
}

std::vector<std::uint32_t> Index::stored_ids() const {
    std::vector<std::uint32_t> out;
    collect_stored(out);
    std::sort(out.begin(), out.end());
    return out;
}

std::unique_ptr<Index> build_index(const Dataset& data, const Metric& metric,
                                   const IndexConfig& config) {
    if (data.size() == 0) throw std::invalid_argument("cannot index an empty dataset");
    const Traits t = traits_of(config.structure);
    switch (t.family) {
        case Traits::Family::Nary:
            return std::make_unique<NaryIndex>(data, metric, config, t);
        case Traits::Family::Binary:
            return std::make_unique<BinaryIndex>(data, metric, config, t);
        case Traits::Family::Vp:
            return std::make_unique<VpIndex>(data, metric, config);
    }
    throw std::logic_error("unreachable");
}

} // namespace smx
