#include "rotree/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <ostream>
#include <thread>

#include "rotree/errors.hpp"
#include "rotree/stats.hpp"

namespace rotree {

void validate(const ExperimentConfig& config, const OffspringLaw& law) {
    if (config.reps < 1) throw InvalidArgument("replicas must be >= 1");
    if (config.sizes.empty()) throw InvalidArgument("no tree size given");
    if (config.grid == 1) throw InvalidArgument("grid must be >= 2 (or 0 for automatic)");
    for (std::size_t n : config.sizes) {
        if (!admissible(law, n)) {
            throw InadmissibleSizeError("no tree with " + std::to_string(n) + " vertices under law " + law.name());
        }
    }
}

Rng replica_rng(std::uint64_t seed, std::size_t n, std::size_t rep) {
    return Rng(seed, splitmix64(static_cast<std::uint64_t>(n)) + static_cast<std::uint64_t>(rep));
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_lock;
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> g(error_lock);
                if (!error) error = std::current_exception();
                next = count;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

std::size_t auto_grid(std::size_t n) { return std::max(m1_exact_grid, std::bit_ceil(2 * n)); }

int tree_diameter(const PlaneTree& tree) {
    if (tree.size() < 2) return 0;
    const auto adj = tree_adjacency(tree);
    const auto d0 = bfs_distances(adj, 0);
    const auto far = static_cast<std::int32_t>(std::max_element(d0.begin(), d0.end()) - d0.begin());
    const auto d1 = bfs_distances(adj, far);
    return *std::max_element(d1.begin(), d1.end());
}

Summary summarize(const std::vector<double>& values) {
    Summary s;
    s.count = values.size();
    if (values.empty()) return s;
    s.mean = mean(values);
    s.stderr_of_mean = values.size() > 1 ? stddev(values) / std::sqrt(static_cast<double>(values.size())) : 0.0;
    return s;
}

/* ----------------------------------------------------------------- dilation */

std::vector<DilationRow> run_dilation(const ExperimentConfig& config) {
    const OffspringLaw law = parse_law(config.law);
    validate(config, law);
    std::vector<DilationRow> rows(config.sizes.size() * config.reps);
    parallel_for(rows.size(), config.threads, [&](std::size_t idx) {
        const std::size_t n = config.sizes[idx / config.reps];
        const std::size_t rep = idx % config.reps;
        Rng rng = replica_rng(config.seed, n, rep);
        const PlaneTree tree = sample_conditioned(law, n, rng);
        const PlaneTree rot = rotate(tree).tree;
        DilationRow& r = rows[idx];
        r.n = n;
        r.replica = rep;
        r.diam_tree = tree_diameter(tree);
        r.diam_rot = tree_diameter(rot);
        r.height_tree = tree.height();
        r.height_rot = rot.height();
        // the one-vertex tree has both diameters 0; the ratio is 1 by convention
        r.diam_ratio = r.diam_tree == 0 ? 1.0 : static_cast<double>(r.diam_rot) / r.diam_tree;
        r.height_ratio = r.height_tree == 0 ? 1.0 : static_cast<double>(r.height_rot) / r.height_tree;
    });
    return rows;
}

void write_dilation_csv(std::ostream& os, const std::vector<DilationRow>& rows) {
    os << "#schema,rotree.dilation.v1\n";
    os << "n,replica,diam_tree,diam_rot,height_tree,height_rot,diam_ratio,height_ratio\n";
    char buf[64];
    for (const auto& r : rows) {
        os << r.n << ',' << r.replica << ',' << r.diam_tree << ',' << r.diam_rot << ',' << r.height_tree << ','
           << r.height_rot << ',';
        std::snprintf(buf, sizeof buf, "%.9g,%.9g", r.diam_ratio, r.height_ratio);
        os << buf << '\n';
    }
}

/* ----------------------------------------------------------- M1 convergence */

std::string to_string(ProcessPair pair) {
    switch (pair) {
        case ProcessPair::rot_contour_vs_mirror_luka: return "rot_contour_vs_mirror_luka";
        case ProcessPair::corot_luka_vs_luka: return "corot_luka_vs_luka";
        case ProcessPair::contour_vs_height: return "contour_vs_height";
    }
    return "contour_vs_height";
}

std::vector<ProcessPair> all_process_pairs() {
    return {ProcessPair::rot_contour_vs_mirror_luka, ProcessPair::corot_luka_vs_luka, ProcessPair::contour_vs_height};
}

namespace {

CadlagFn linear(const Walk& w) { return CadlagFn::from(time_scaled(w, Interpolation::linear)); }

CadlagFn sup_normalized(const CadlagFn& x) {
    const double norm = std::max(std::abs(x.sup()), std::abs(x.inf()));
    return norm > 0.0 ? x.scaled(1.0 / norm) : x;
}

}  // namespace

std::pair<CadlagFn, CadlagFn> normalized_pair(const PlaneTree& tree, ProcessPair pair) {
    CadlagFn a, b;
    switch (pair) {
        case ProcessPair::rot_contour_vs_mirror_luka:
            a = time_reverse(linear(contour_walk(rotate(tree).tree)));
            b = linear(lukasiewicz_walk(mirror(tree)));
            break;
        case ProcessPair::corot_luka_vs_luka:
            a = linear(lukasiewicz_walk(corotate(tree).tree));
            b = linear(lukasiewicz_walk(tree));
            break;
        case ProcessPair::contour_vs_height:
            a = linear(contour_walk(tree));
            b = linear(height_walk(tree));
            break;
    }
    return {sup_normalized(a), sup_normalized(b)};
}

std::vector<M1Row> run_m1_convergence(const ExperimentConfig& config, const std::vector<ProcessPair>& pairs) {
    const OffspringLaw law = parse_law(config.law);
    validate(config, law);
    const std::size_t per_tree = pairs.size();
    std::vector<M1Row> rows(config.sizes.size() * config.reps * per_tree);
    parallel_for(config.sizes.size() * config.reps, config.threads, [&](std::size_t idx) {
        const std::size_t n = config.sizes[idx / config.reps];
        const std::size_t rep = idx % config.reps;
        Rng rng = replica_rng(config.seed, n, rep);
        const PlaneTree tree = sample_conditioned(law, n, rng);
        for (std::size_t k = 0; k < per_tree; ++k) {
            const auto [x, y] = normalized_pair(tree, pairs[k]);
            const ParamRep p = parametric_representation(x), q = parametric_representation(y);
            M1Row& r = rows[idx * per_tree + k];
            r.n = n;
            r.replica = rep;
            r.pair = pairs[k];
            r.grid = config.grid ? config.grid : auto_grid(n);
            r.bound = m1_upper(p, q, r.grid).value;
            r.bound_double = config.grid_check ? m1_upper(p, q, 2 * r.grid).value
                                               : std::numeric_limits<double>::quiet_NaN();
        }
    });
    return rows;
}

void write_m1_csv(std::ostream& os, const std::vector<M1Row>& rows) {
    os << "#schema,rotree.m1.v1\n";
    os << "n,replica,pair,grid,bound,bound_double_grid\n";
    char buf[64];
    for (const auto& r : rows) {
        if (std::isnan(r.bound_double)) {
            std::snprintf(buf, sizeof buf, "%.9g,", r.bound);
        } else {
            std::snprintf(buf, sizeof buf, "%.9g,%.9g", r.bound, r.bound_double);
        }
        os << r.n << ',' << r.replica << ',' << to_string(r.pair) << ',' << r.grid << ',' << buf << '\n';
    }
}

/* ---------------------------------------------------------------- dimension */

std::string to_string(CloudKind kind) {
    switch (kind) {
        case CloudKind::rot: return "rot";
        case CloudKind::loop: return "loop";
        case CloudKind::tree: return "tree";
        case CloudKind::segment: return "segment";
    }
    return "tree";
}

namespace {

std::vector<std::int32_t> choose(std::size_t population, std::size_t k, Rng& rng) {
    std::vector<std::int32_t> all(population);
    std::iota(all.begin(), all.end(), 0);
    k = std::min(k, population);
    for (std::size_t i = 0; i < k; ++i) std::swap(all[i], all[i + rng.below(population - i)]);
    all.resize(k);
    std::sort(all.begin(), all.end());
    return all;
}

}  // namespace

MetricCloud sample_cloud(const PlaneTree& tree, CloudKind kind, std::size_t points, Rng& rng) {
    switch (kind) {
        case CloudKind::tree: return vertex_cloud(tree, choose(tree.size(), points, rng));
        case CloudKind::rot: {
            const PlaneTree rot = rotate(tree).tree;
            return vertex_cloud(rot, choose(rot.size(), points, rng));
        }
        case CloudKind::loop: {
            const Looptree loop = looptree(tree);
            return looptree_cloud(loop, choose(loop.vertex_count, points, rng));
        }
        case CloudKind::segment: return segment_cloud(points);
    }
    return segment_cloud(points);
}

MetricCloud segment_cloud(std::size_t points) {
    MetricCloud c;
    c.m = points;
    c.dist.assign(points * points, 0.0);
    for (std::size_t i = 0; i < points; ++i) {
        c.times.push_back(points > 1 ? static_cast<double>(i) / static_cast<double>(points - 1) : 0.0);
    }
    for (std::size_t i = 0; i < points; ++i)
        for (std::size_t j = 0; j < points; ++j) c.dist[i * points + j] = std::abs(c.times[i] - c.times[j]);
    return c;
}

std::vector<DimensionRow> run_dimension(const ExperimentConfig& config, std::size_t points,
                                        const DimensionOptions& options) {
    const OffspringLaw law = parse_law(config.law);
    validate(config, law);
    const std::vector<CloudKind> kinds{CloudKind::rot, CloudKind::loop, CloudKind::tree};
    std::vector<DimensionRow> rows(config.sizes.size() * config.reps * kinds.size());
    parallel_for(config.sizes.size() * config.reps, config.threads, [&](std::size_t idx) {
        const std::size_t n = config.sizes[idx / config.reps];
        const std::size_t rep = idx % config.reps;
        Rng rng = replica_rng(config.seed, n, rep);
        const PlaneTree tree = sample_conditioned(law, n, rng);
        for (std::size_t k = 0; k < kinds.size(); ++k) {
            DimensionRow& r = rows[idx * kinds.size() + k];
            r.n = n;
            r.replica = rep;
            r.cloud = kinds[k];
            r.estimate = correlation_dimension(sample_cloud(tree, kinds[k], points, rng), options);
        }
    });
    // control run on a segment
    DimensionRow control;
    control.n = points;
    control.cloud = CloudKind::segment;
    control.estimate = correlation_dimension(segment_cloud(points), options);
    rows.push_back(control);
    return rows;
}

void write_dimension_csv(std::ostream& os, const std::vector<DimensionRow>& rows) {
    os << "#schema,rotree.dimension.v1\n";
    os << "n,replica,cloud,dimension,stderr,r_min,r_max,r2,points\n";
    char buf[128];
    for (const auto& r : rows) {
        const auto& e = r.estimate;
        std::snprintf(buf, sizeof buf, "%.6g,%.6g,%.6g,%.6g,%.6g", e.dimension, e.slope_stderr, e.r_min, e.r_max, e.r2);
        os << r.n << ',' << r.replica << ',' << to_string(r.cloud) << ',' << buf << ',' << e.points << '\n';
    }
}

}  // namespace rotree
