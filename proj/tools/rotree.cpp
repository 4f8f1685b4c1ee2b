// rotree command-line front end
#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "rotree/encodings.hpp"
#include "rotree/experiments.hpp"
#include "rotree/sampler.hpp"
#include "rotree/stats.hpp"
#include "rotree/transforms.hpp"
#include "rotree/tree_core.hpp"

namespace fs = std::filesystem;
using namespace rotree;

namespace {

enum Exit : int { ok = 0, identity_failure = 1, usage = 2, io = 3 };

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// "-" or empty writes to stdout
void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    const fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << text;
    if (!out) throw IoError("write failed: " + path);
}

// JSON when the file starts with '{', else a whitespace separated degree sequence
PlaneTree load_tree(const std::string& path) {
    const std::string text = read_file(path);
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') return tree_from_json(text);
    return parse(text);
}

struct TreeInput {
    std::string file;
    std::string degrees;

    void add(CLI::App* cmd) {
        cmd->add_option("--tree", file, "tree file (JSON or degree sequence)");
        cmd->add_option("--degrees", degrees, "degree sequence in lexicographic order, e.g. \"3 2 0 0 0 1 0\"");
    }
    bool given() const { return !file.empty() || !degrees.empty(); }
    PlaneTree load() const {
        if (!file.empty()) return load_tree(file);
        return parse(degrees);
    }
};

std::string fmt(double x, int digits = 6) {
    std::ostringstream ss;
    ss.precision(digits);
    ss << x;
    return ss.str();
}

/* ------------------------------------------------------------------ sample */

int cmd_sample(const std::string& law_spec, std::size_t n, std::uint64_t seed, std::size_t reps,
               const std::string& out) {
    const OffspringLaw law = parse_law(law_spec);
    ExperimentConfig config;
    config.sizes = {n};
    config.reps = reps;
    validate(config, law);
    for (std::size_t rep = 0; rep < reps; ++rep) {
        Rng rng = replica_rng(seed, n, rep);
        const PlaneTree tree = sample_conditioned(law, n, rng);
        TreeMeta meta;
        meta.law = law.name();
        meta.seed = seed;
        meta.extra["replica"] = std::to_string(rep);
        std::string path = out;
        if (reps > 1) {
            // --out names a directory when several replicas are drawn
            path = (fs::path(out.empty() || out == "-" ? "." : out) /
                    ("tree_n" + std::to_string(n) + "_r" + std::to_string(rep) + ".json"))
                       .string();
        }
        write_output(path, to_json(tree, meta) + "\n");
    }
    return ok;
}

/* ------------------------------------------------------------------ encode */

int cmd_encode(const TreeInput& input, const std::string& kind, const std::string& out) {
    const PlaneTree tree = input.load();
    Walk w;
    switch (walk_kind_from_string(kind)) {
        case WalkKind::height: w = height_walk(tree); break;
        case WalkKind::contour: w = contour_walk(tree); break;
        case WalkKind::lukasiewicz: w = lukasiewicz_walk(tree); break;
        default: throw InvalidArgument("unknown walk kind " + kind);
    }
    std::ostringstream ss;
    write_walk_csv(ss, w);
    write_output(out, ss.str());
    return ok;
}

/* --------------------------------------------------------------- transform */

int cmd_transform(const TreeInput& input, const std::string& op, const std::string& out) {
    const PlaneTree tree = input.load();
    std::ostringstream ss;
    if (op == "rot") {
        ss << to_json(rotate(tree)) << '\n';
    } else if (op == "corot") {
        ss << to_json(corotate(tree)) << '\n';
    } else if (op == "mirror") {
        ss << to_json(mirror(tree)) << '\n';
    } else if (op == "looptree") {
        write_looptree_csv(ss, looptree(tree));
    } else if (op == "internal") {
        TreeMeta meta;
        meta.extra["transform"] = "internal_subtree";
        ss << to_json(internal_subtree(rotate(tree)).tree, meta) << '\n';
    } else {
        throw InvalidArgument("unknown transform " + op);
    }
    write_output(out, ss.str());
    return ok;
}

/* ------------------------------------------------------------------ verify */

struct Tally {
    std::uint64_t trees = 0;
    std::uint64_t evaluated = 0;
    std::uint64_t failures = 0;
};

class Verifier {
public:
    explicit Verifier(std::string counterexample_path) : path_(std::move(counterexample_path)) {}

    // false on the first failing identity; the tree is written out
    bool check(const PlaneTree& tree) {
        if (tree.size() < 2) return true;  // the identities are stated for trees with an edge
        const OracleReport report = lemma_oracles(tree);
        for (const auto& c : report.checks) {
            auto& t = tally_[c.name];
            ++t.trees;
            t.evaluated += c.evaluated;
            if (!c.passed) {
                ++t.failures;
                if (!failed_) {
                    failed_ = true;
                    TreeMeta meta;
                    meta.extra["identity"] = c.name;
                    meta.extra["detail"] = c.detail;
                    write_output(path_, to_json(tree, meta) + "\n");
                    std::cerr << "identity " << c.name << " failed: " << c.detail << "\ncounterexample written to "
                              << path_ << '\n';
                }
            }
        }
        return report.all_passed();
    }

    int finish() const {
        for (const auto& [name, t] : tally_) {
            std::cout << (t.failures == 0 ? "pass " : "FAIL ") << name << "  trees=" << t.trees
                      << " equalities=" << t.evaluated;
            if (t.failures) std::cout << " failures=" << t.failures;
            std::cout << '\n';
        }
        return failed_ ? identity_failure : ok;
    }

    bool failed() const { return failed_; }

private:
    std::string path_;
    std::map<std::string, Tally> tally_;
    bool failed_ = false;
};

bool is_full_binary(const PlaneTree& t) {
    return std::all_of(t.degrees().begin(), t.degrees().end(), [](int d) { return d == 0 || d == 2; });
}

int cmd_verify(const TreeInput& input, bool random, const std::string& law_spec, std::size_t n, std::size_t reps,
               std::uint64_t seed, std::size_t exhaustive, const std::string& counterexample) {
    Verifier v(counterexample);
    const int modes = (input.given() ? 1 : 0) + (random ? 1 : 0) + (exhaustive > 0 ? 1 : 0);
    if (modes != 1) throw InvalidArgument("give exactly one of --tree/--degrees, --random, --exhaustive");
    if (input.given()) {
        v.check(input.load());
        return v.finish();
    }
    if (random) {
        const OffspringLaw law = parse_law(law_spec);
        ExperimentConfig config;
        config.sizes = {n};
        config.reps = reps;
        validate(config, law);
        for (std::size_t rep = 0; rep < reps && !v.failed(); ++rep) {
            Rng rng = replica_rng(seed, n, rep);
            v.check(sample_conditioned(law, n, rng));
        }
        std::cout << "random trees: law=" << law.name() << " n=" << n << " reps=" << reps << '\n';
        return v.finish();
    }
    // exhaustive: every tree up to the given size, plus the rotation bijection
    bool bijection = true;
    for (std::size_t k = 1; k <= exhaustive; ++k) {
        std::uint64_t count = 0;
        std::set<std::vector<int>> images;
        bool shapes_ok = true;
        for_each_tree(k, [&](const PlaneTree& t) {
            ++count;
            v.check(t);
            const PlaneTree r = rotate(t).tree;
            images.insert(r.degrees());
            if (!is_full_binary(r) || r.leaf_count() != k) shapes_ok = false;
        });
        const std::uint64_t cat = catalan(static_cast<unsigned>(k - 1));
        // full binary trees with k leaves are also counted by Catalan(k-1)
        const bool ok_k = count == cat && images.size() == cat && shapes_ok;
        bijection = bijection && ok_k;
        std::cout << "n=" << k << " trees=" << count << " catalan=" << cat << " rot_images=" << images.size()
                  << (ok_k ? " bijection ok" : " bijection FAILED") << '\n';
    }
    const int code = v.finish();
    std::cout << (bijection ? "pass " : "FAIL ") << "rotation_bijection\n";
    return bijection ? code : identity_failure;
}

/* ---------------------------------------------------------------- dilation */

int cmd_dilation(const ExperimentConfig& config, const std::string& out) {
    const auto rows = run_dilation(config);
    std::ostringstream ss;
    write_dilation_csv(ss, rows);
    write_output(out.empty() ? "-" : out, ss.str());
    for (std::size_t n : config.sizes) {
        std::vector<double> diam, height;
        for (const auto& r : rows) {
            if (r.n != n) continue;
            diam.push_back(r.diam_ratio);
            height.push_back(r.height_ratio);
        }
        const Summary d = summarize(diam), h = summarize(height);
        std::cerr << "n=" << n << " diam_ratio mean=" << fmt(d.mean) << " stderr=" << fmt(d.stderr_of_mean)
                  << " height_ratio mean=" << fmt(h.mean) << " stderr=" << fmt(h.stderr_of_mean) << '\n';
    }
    return ok;
}

/* ---------------------------------------------------------------------- m1 */

std::vector<ProcessPair> parse_pairs(const std::vector<std::string>& names) {
    if (names.empty()) return all_process_pairs();
    std::vector<ProcessPair> out;
    for (const auto& name : names) {
        bool found = false;
        for (ProcessPair p : all_process_pairs()) {
            if (to_string(p) == name) out.push_back(p), found = true;
        }
        if (!found) throw InvalidArgument("unknown process pair " + name);
    }
    return out;
}

int cmd_m1(const ExperimentConfig& config, const std::vector<ProcessPair>& pairs, const std::string& out) {
    const auto rows = run_m1_convergence(config, pairs);
    std::ostringstream ss;
    write_m1_csv(ss, rows);
    write_output(out.empty() ? "-" : out, ss.str());
    for (ProcessPair p : pairs) {
        for (std::size_t n : config.sizes) {
            std::vector<double> b;
            for (const auto& r : rows) {
                if (r.n == n && r.pair == p) b.push_back(r.bound);
            }
            std::cerr << to_string(p) << " n=" << n << " median=" << fmt(median(b)) << '\n';
        }
    }
    return ok;
}

/* --------------------------------------------------------------- dimension */

int cmd_dimension(const ExperimentConfig& config, std::size_t points, const DimensionOptions& options,
                  const std::string& out) {
    const auto rows = run_dimension(config, points, options);
    std::ostringstream ss;
    write_dimension_csv(ss, rows);
    write_output(out.empty() ? "-" : out, ss.str());
    std::map<std::pair<std::size_t, std::string>, std::vector<double>> groups;
    for (const auto& r : rows) groups[{r.n, to_string(r.cloud)}].push_back(r.estimate.dimension);
    for (const auto& [key, values] : groups) {
        const Summary s = summarize(values);
        std::cerr << key.second << " n=" << key.first << " dimension mean=" << fmt(s.mean)
                  << " stderr=" << fmt(s.stderr_of_mean) << '\n';
    }
    return ok;
}

/* ------------------------------------------------------------- interpolate */

int cmd_interpolate(const std::vector<double>& alphas, std::size_t n, std::uint64_t seed, int iterations,
                    const std::string& out_dir) {
    if (alphas.empty()) throw InvalidArgument("--alpha needs at least one value");
    for (double a : alphas) {
        if (!(a > 1.0 && a < 2.0)) throw InvalidArgument("alpha must lie in (1,2), got " + fmt(a));
    }
    std::vector<Drawing> drawings;
    for (std::size_t k = 0; k < alphas.size(); ++k) {
        const OffspringLaw law = make_stable_law(alphas[k]);
        if (!admissible(law, n)) throw InadmissibleSizeError("size " + std::to_string(n) + " not admissible");
        Rng rng = replica_rng(seed, n, k);
        const PlaneTree rot = rotate(sample_conditioned(law, n, rng)).tree;
        Drawing d{rot, force_layout(rot, seed + k, iterations), "alpha = " + fmt(alphas[k], 4)};
        const std::string name = "rot_alpha_" + fmt(alphas[k], 4) + ".svg";
        write_output((fs::path(out_dir) / name).string(), tree_svg(d));
        std::cerr << "wrote " << (fs::path(out_dir) / name).string() << '\n';
        drawings.push_back(std::move(d));
    }
    write_output((fs::path(out_dir) / "rot_panel.svg").string(), panel_svg(drawings, 400.0));
    return ok;
}

void add_config(CLI::App* cmd, ExperimentConfig& c, const std::string& default_law) {
    c.law = default_law;
    cmd->add_option("--law", c.law, "offspring law: geom, binary, poisson, stable:<alpha>")->capture_default_str();
    cmd->add_option("--n", c.sizes, "tree sizes, comma separated")->delimiter(',')->required();
    cmd->add_option("--reps", c.reps, "replicas per size")->capture_default_str();
    cmd->add_option("--seed", c.seed, "seed")->capture_default_str();
    cmd->add_option("--threads", c.threads, "worker threads (0: all cores)")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rotated plane trees: sampling, encodings, identities and scaling experiments"};
    app.require_subcommand(1);

    // sample
    auto* sample = app.add_subcommand("sample", "draw conditioned Bienaymé trees as JSON");
    std::string law = "geom";
    std::size_t n = 0, reps = 1;
    std::uint64_t seed = 1;
    std::string out;
    sample->add_option("--law", law, "offspring law")->capture_default_str();
    sample->add_option("--n", n, "vertex count")->required();
    sample->add_option("--seed", seed, "seed")->capture_default_str();
    sample->add_option("--reps", reps, "number of trees; --out is then a directory")->check(CLI::PositiveNumber);
    sample->add_option("--out", out, "output file (stdout when omitted)");

    // encode
    auto* encode = app.add_subcommand("encode", "height, contour or Lukasiewicz walk as CSV");
    TreeInput enc_in;
    enc_in.add(encode);
    std::string kind = "contour";
    encode->add_option("--kind", kind, "height | contour | lukasiewicz")
        ->capture_default_str()
        ->check(CLI::IsMember({"height", "contour", "lukasiewicz", "luka"}));
    encode->add_option("--out", out, "output CSV");

    // transform
    auto* transform = app.add_subcommand("transform", "rotation, co-rotation, mirror, looptree, internal subtree");
    TreeInput tr_in;
    tr_in.add(transform);
    std::string op;
    transform->add_option("--op", op, "rot | corot | mirror | looptree | internal")
        ->required()
        ->check(CLI::IsMember({"rot", "corot", "mirror", "looptree", "internal"}));
    transform->add_option("--out", out, "output file");

    // verify
    auto* verify = app.add_subcommand("verify", "check every exact identity");
    TreeInput ver_in;
    ver_in.add(verify);
    bool random = false;
    std::size_t exhaustive = 0;
    std::string counterexample = "counterexample.json";
    verify->add_flag("--random", random, "check random trees (--law, --n, --reps, --seed)");
    verify->add_option("--law", law, "offspring law for --random");
    verify->add_option("--n", n, "tree size for --random");
    verify->add_option("--reps", reps, "number of random trees");
    verify->add_option("--seed", seed, "seed");
    verify->add_option("--exhaustive", exhaustive, "all trees with at most this many vertices");
    verify->add_option("--counterexample", counterexample, "where a failing tree is written")->capture_default_str();

    // dilation
    auto* dilation = app.add_subcommand("dilation", "diam(rot T)/diam(T) and height ratios");
    ExperimentConfig dil;
    add_config(dilation, dil, "geom");
    dilation->add_option("--out", out, "output CSV (stdout when omitted)");

    // m1
    auto* m1 = app.add_subcommand("m1", "M1 upper bounds between sup-normalized paired processes");
    ExperimentConfig m1c;
    add_config(m1, m1c, "geom");
    m1->add_option("--grid", m1c.grid, "parameter grid N (0: max(4096, bit_ceil(2n)))")
        ->capture_default_str()
        ->check(CLI::Range(0, 1 << 22));
    m1->add_flag("--grid-check", m1c.grid_check, "also bound on the doubled grid");
    std::vector<std::string> pair_names;
    m1->add_option("--pairs", pair_names,
                   "rot_contour_vs_mirror_luka, corot_luka_vs_luka, contour_vs_height (all by default)")
        ->delimiter(',');
    m1->add_option("--out", out, "output CSV");

    // dimension
    auto* dimension = app.add_subcommand("dimension", "correlation dimension of rot T, Loop(T) and T");
    ExperimentConfig dimc;
    add_config(dimension, dimc, "stable:1.5");
    std::size_t points = 4000;
    DimensionOptions dopt;
    dimension->add_option("--points", points, "sampled vertices per cloud")->capture_default_str();
    dimension->add_option("--r-min", dopt.r_min, "fit window start (fraction of diameter)")->capture_default_str();
    dimension->add_option("--r-max", dopt.r_max, "fit window end")->capture_default_str();
    dimension->add_option("--out", out, "output CSV");

    // interpolate
    auto* interpolate = app.add_subcommand("interpolate", "SVG drawings of rot T for several alpha");
    std::vector<double> alphas;
    std::size_t in_n = 5000;
    int iterations = 200;
    std::string out_dir = ".";
    interpolate->add_option("--alpha", alphas, "alpha values in (1,2), comma separated")->delimiter(',');
    interpolate->add_option("--n", in_n, "vertex count")->capture_default_str();
    interpolate->add_option("--seed", seed, "seed")->capture_default_str();
    interpolate->add_option("--iterations", iterations, "layout iterations")->capture_default_str();
    interpolate->add_option("--out", out_dir, "output directory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : usage;
    }

    try {
        if (*sample) return cmd_sample(law, n, seed, reps, out);
        if (*encode) return cmd_encode(enc_in, kind, out);
        if (*transform) return cmd_transform(tr_in, op, out);
        if (*verify) return cmd_verify(ver_in, random, law, n, reps, seed, exhaustive, counterexample);
        if (*dilation) return cmd_dilation(dil, out);
        if (*m1) return cmd_m1(m1c, parse_pairs(pair_names), out);
        if (*dimension) return cmd_dimension(dimc, points, dopt, out);
        if (*interpolate) return cmd_interpolate(alphas, in_n, seed, iterations, out_dir);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return io;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return io;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return io;
    } catch (const InadmissibleSizeError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return usage;
    } catch (const InvalidArgument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return usage;
    } catch (const std::exception& e) {
        // sampler budget and other runtime failures: not a usage or i/o problem
        std::cerr << "error: " << e.what() << '\n';
        return identity_failure;
    }
    return usage;
}
