#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "rotree/cadlag.hpp"
#include "rotree/metric.hpp"
#include "rotree/sampler.hpp"
#include "rotree/transforms.hpp"

namespace rotree {

struct ExperimentConfig {
    std::string law = "geom";
    std::vector<std::size_t> sizes{1000};
    std::size_t reps = 1;
    std::uint64_t seed = 1;
    std::size_t grid = 0;      // M1 grid; 0 picks auto_grid(n)
    bool grid_check = false;   // also report the bound on the doubled grid
    std::string out_dir = ".";
    std::string name;
    unsigned threads = 0;  // 0: hardware concurrency
};

// throws InvalidArgument / InadmissibleSizeError when the config cannot run
void validate(const ExperimentConfig& config, const OffspringLaw& law);

// generator for replica `rep` at size n; distinct (n, rep) never share a stream
Rng replica_rng(std::uint64_t seed, std::size_t n, std::size_t rep);

// runs body(i) for i in [0, count) on a small worker pool; exceptions are rethrown
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

// max(m1_exact_grid, bit_ceil(2n)): at least two cells per vertex
std::size_t auto_grid(std::size_t n);

// exact diameter by two breadth-first sweeps
int tree_diameter(const PlaneTree& tree);

/* --------------------------------------------------------------- dilation */

struct DilationRow {
    std::size_t n = 0;
    std::size_t replica = 0;
    int diam_tree = 0;
    int diam_rot = 0;
    int height_tree = 0;
    int height_rot = 0;
    double diam_ratio = 1.0;    // 1 when both diameters are 0
    double height_ratio = 1.0;
};

struct Summary {
    double mean = 0.0;
    double stderr_of_mean = 0.0;
    std::size_t count = 0;
};

Summary summarize(const std::vector<double>& values);

std::vector<DilationRow> run_dilation(const ExperimentConfig& config);
void write_dilation_csv(std::ostream& os, const std::vector<DilationRow>& rows);

/* ---------------------------------------------------------- M1 convergence */

enum class ProcessPair {
    rot_contour_vs_mirror_luka,  // ĉ_{rot T} against s_{T^÷}
    corot_luka_vs_luka,          // s_{corot T} against s_T
    contour_vs_height,           // c_T against h_T
};

std::string to_string(ProcessPair pair);
std::vector<ProcessPair> all_process_pairs();

// both processes of the pair, each divided by its own sup norm
std::pair<CadlagFn, CadlagFn> normalized_pair(const PlaneTree& tree, ProcessPair pair);

struct M1Row {
    std::size_t n = 0;
    std::size_t replica = 0;
    ProcessPair pair = ProcessPair::contour_vs_height;
    std::size_t grid = 0;
    double bound = 0.0;
    double bound_double = 0.0;  // on grid 2 x grid, NaN unless grid_check
};

std::vector<M1Row> run_m1_convergence(const ExperimentConfig& config, const std::vector<ProcessPair>& pairs);
void write_m1_csv(std::ostream& os, const std::vector<M1Row>& rows);

/* --------------------------------------------------------------- dimension */

enum class CloudKind { rot, loop, tree, segment };

std::string to_string(CloudKind kind);

struct DimensionRow {
    std::size_t n = 0;
    std::size_t replica = 0;
    CloudKind cloud = CloudKind::tree;
    DimensionEstimate estimate;
};

// uniform vertex samples of rot T, Loop(T) and T (without replacement)
MetricCloud sample_cloud(const PlaneTree& tree, CloudKind kind, std::size_t points, Rng& rng);
MetricCloud segment_cloud(std::size_t points);

std::vector<DimensionRow> run_dimension(const ExperimentConfig& config, std::size_t points,
                                        const DimensionOptions& options = {});
void write_dimension_csv(std::ostream& os, const std::vector<DimensionRow>& rows);

/* ------------------------------------------------------------- interpolate */

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

// deterministic spring layout started from a radial drawing
std::vector<Point2> force_layout(const PlaneTree& tree, std::uint64_t seed, int iterations = 200);

struct Drawing {
    PlaneTree tree;
    std::vector<Point2> layout;
    std::string title;
};

std::string tree_svg(const Drawing& drawing, double size = 600.0);
// drawings side by side in one file
std::string panel_svg(const std::vector<Drawing>& drawings, double size = 600.0);

}  // namespace rotree
