#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <thread>

#include <ueoc/bench.hpp>
#include <ueoc/detect.hpp>
#include <ueoc/metrics.hpp>
#include <ueoc/spectral.hpp>

namespace {

using namespace ueoc;

enum ExitCode { ok = 0, usage = 1, data = 2, internal = 3 };

// Raised for problems with the user's input files or parameters.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Output stream that is stdout for an empty path or "-".
class Output {
public:
    explicit Output(const std::string& path) {
        if (path.empty() || path == "-")
            return;
        file_.open(path);
        if (!file_)
            throw DataError("cannot write '" + path + "'");
    }
    std::ostream& get() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

Cover load_cover(const Network& net, const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot open '" + path + "'");
    return read_cover(net, in);
}

NodeId resolve_node(const Network& net, const std::string& label) {
    if (label.empty()) {
        NodeId best = 0;
        for (NodeId v = 1; v < net.graph.node_count(); ++v)
            if (net.graph.degree(v) > net.graph.degree(best))
                best = v;
        return best;
    }
    auto id = net.find(label);
    if (id < 0)
        throw DataError("unknown or isolated node '" + label + "'");
    return static_cast<NodeId>(id);
}

WalkMode parse_mode(const std::string& s) {
    if (s == "unconstrained")
        return WalkMode::unconstrained;
    if (s == "constrained")
        return WalkMode::constrained;
    return WalkMode::constrained_degree_corrected;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct WalkFlags {
    int l = 20;
    double tol = 1e-12;

    WalkConfig config() const { return WalkConfig{l, tol, WalkMode::constrained_degree_corrected}; }
};

void add_walk_flags(CLI::App* cmd, WalkFlags& w) {
    cmd->add_option("--l", w.l, "Number of walk steps")->check(CLI::Range(1, 100000))->capture_default_str();
    cmd->add_option("--tol", w.tol, "Early-exit distance between consecutive vectors")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
}

// detect

struct DetectArgs {
    std::string graph, out, trace_dir;
    WalkFlags walk;
};

void write_traces(const Network& net, const std::vector<DetectionTrace>& traces, const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw DataError("cannot create '" + dir + "': " + ec.message());
    Output seeds((std::filesystem::path(dir) / "seeds.csv").string());
    Output sweep((std::filesystem::path(dir) / "sweep.csv").string());
    seeds.get() << "seed,steps,all_zero,seed_added,cut,conductance\n";
    sweep.get() << "seed,k,conductance\n" << std::setprecision(17);
    for (const auto& t : traces) {
        std::size_t cut = 0;
        double best = std::numeric_limits<double>::quiet_NaN();
        for (const auto& p : t.sweep)
            if (std::isnan(best) || p.conductance < best) {
                best = p.conductance;
                cut = p.k;
            }
        seeds.get() << net.labels[t.seed] << ',' << t.steps << ',' << t.all_zero << ',' << t.seed_repaired << ','
                    << cut << ',' << std::setprecision(17) << best << '\n';
        for (const auto& p : t.sweep)
            sweep.get() << net.labels[t.seed] << ',' << p.k << ',' << p.conductance << '\n';
    }
}

int run_detect(const DetectArgs& a) {
    const auto t0 = std::chrono::steady_clock::now();
    auto net = load_edge_list_file(a.graph);
    std::vector<DetectionTrace> traces;
    auto cover = detect_cover(net.graph, a.walk.config(), a.trace_dir.empty() ? nullptr : &traces);
    const double elapsed = seconds_since(t0);
    if (!cover.covers_all())
        throw std::logic_error("detected cover leaves nodes unassigned");
    Output out(a.out);
    write_cover(net, cover, out.get());
    if (!a.trace_dir.empty())
        write_traces(net, traces, a.trace_dir);
    std::cerr << cover.size() + net.isolated.size() << " communities, " << cover.overlapping_node_count()
              << " overlapping nodes, " << std::fixed << std::setprecision(3) << elapsed << " s\n";
    return ok;
}

// eval

struct EvalArgs {
    std::string graph, cover, reference;
};

int run_eval(const EvalArgs& a) {
    auto net = load_edge_list_file(a.graph);
    auto cover = load_cover(net, a.cover);
    auto score = score_cover(net.graph, cover);
    std::cout << std::setprecision(17);
    if (a.reference.empty()) {
        std::cout << "ac,eq\n" << score.ac << ',' << score.eq << '\n';
        return ok;
    }
    auto ref = load_cover(net, a.reference);
    const double nmi = overlapping_nmi(cover, ref, net.graph.node_count());
    std::cout << "ac,eq,nmi\n" << score.ac << ',' << score.eq << ',' << nmi << '\n';
    return ok;
}

// generate

struct GenerateArgs {
    std::string model = "gn", out;
    std::uint64_t seed = 0;
    GNParams gn;
    LFRStyleParams lfr;
};

void add_gn_flags(CLI::App* cmd, GNParams& gn) {
    cmd->add_option("--groups", gn.groups, "GN: number of groups")->capture_default_str();
    cmd->add_option("--group-size", gn.group_size, "GN: nodes per group")->capture_default_str();
    cmd->add_option("--degree", gn.expected_degree, "GN: expected degree")->capture_default_str();
    cmd->add_option("--zout", gn.z_out, "GN: expected links outside the group")->capture_default_str();
}

void add_lfr_flags(CLI::App* cmd, LFRStyleParams& p) {
    cmd->add_option("--n", p.n, "overlap: number of nodes")->capture_default_str();
    cmd->add_option("--avg-degree", p.avg_degree, "overlap: mean degree")->capture_default_str();
    cmd->add_option("--max-degree", p.max_degree, "overlap: maximum degree (0 = 2.5 x mean)")->capture_default_str();
    cmd->add_option("--cmin", p.c_min, "overlap: smallest community")->capture_default_str();
    cmd->add_option("--cmax", p.c_max, "overlap: largest community (0 = 5 x cmin)")->capture_default_str();
    cmd->add_option("--mu", p.mu, "overlap: mixing parameter")->capture_default_str();
    cmd->add_option("--on", p.overlap_count, "overlap: number of overlapping nodes")->capture_default_str();
    cmd->add_option("--om", p.memberships, "overlap: memberships per overlapping node")->capture_default_str();
    cmd->add_option("--tau1", p.tau1, "overlap: degree exponent")->capture_default_str();
    cmd->add_option("--tau2", p.tau2, "overlap: community size exponent")->capture_default_str();
}

int run_generate(GenerateArgs& a) {
    Benchmark b;
    if (a.model == "gn") {
        a.gn.rng_seed = a.seed;
        b = generate_gn(a.gn);
    } else {
        a.lfr.rng_seed = a.seed;
        b = generate_overlapping(a.lfr);
    }
    std::filesystem::path prefix(a.out);
    if (prefix.has_parent_path())
        std::filesystem::create_directories(prefix.parent_path());
    write_benchmark(b, a.out);
    std::cerr << "wrote " << a.out << ".edges (" << b.network.graph.node_count() << " nodes, "
              << b.network.graph.edge_count() << " edges) and " << a.out << ".cover (" << b.truth.size()
              << " communities)\n";
    return ok;
}

// spectrum

struct SpectrumArgs {
    std::string graph, mode = "unconstrained";
    int matrix = -1;
    std::size_t count = 64;
    bool iterative = false;
};

int run_spectrum(const SpectrumArgs& a) {
    auto net = load_edge_list_file(a.graph);
    std::cout << std::setprecision(17);
    if (a.matrix >= 0) {
        auto X = dense_transition_matrix(net.graph, parse_mode(a.mode), a.matrix);
        std::cout << "node";
        for (const auto& l : net.labels)
            std::cout << ',' << l;
        std::cout << '\n';
        for (Eigen::Index i = 0; i < X.rows(); ++i) {
            std::cout << net.labels[static_cast<std::size_t>(i)];
            for (Eigen::Index j = 0; j < X.cols(); ++j)
                std::cout << ',' << X(i, j);
            std::cout << '\n';
        }
        return ok;
    }
    SpectrumOptions opt;
    opt.force_iterative = a.iterative;
    opt.iterative_count = a.count;
    auto rep = laplacian_spectrum(net.graph, opt);
    std::cout << "i,lambda,inv_lambda\n";
    for (std::size_t i = 1; i <= rep.eigenvalues.size(); ++i) {
        const double x = rep.lambda(i);
        std::cout << i << ',' << x << ',';
        if (x > 1e-9)
            std::cout << 1.0 / x;
        else
            std::cout << "inf";
        std::cout << '\n';
    }
    return ok;
}

// trace

struct TraceArgs {
    std::string graph, node, vector_out;
    int l = 40;
};

int run_trace(const TraceArgs& a) {
    auto net = load_edge_list_file(a.graph);
    const NodeId s = resolve_node(net, a.node);
    WalkConfig cfg{a.l, 1e-12, WalkMode::constrained_degree_corrected};
    auto trace = convergence_trace(net.graph, s, cfg);
    std::cout << std::setprecision(17) << "l,vector_delta,rank_delta\n";
    for (const auto& p : trace)
        std::cout << p.l << ',' << p.vector_delta << ',' << p.rank_delta << '\n';
    if (!a.vector_out.empty()) {
        cfg.convergence_tol = std::numeric_limits<double>::min();
        auto ranked = unfold_community(net.graph, s, cfg);
        Output out(a.vector_out);
        out.get() << std::setprecision(17) << "node,probability\n";
        for (const auto& e : ranked.entries)
            out.get() << net.labels[e.node] << ',' << e.probability << '\n';
    }
    std::cerr << "seed " << net.labels[s] << " (degree " << net.graph.degree(s) << ")\n";
    return ok;
}

// suite

struct SuiteArgs {
    std::string model = "gn", out;
    std::vector<double> values;
    int reps = 10;
    unsigned jobs = 1;
    std::uint64_t seed = 0;
    double mu = 0.1;
    WalkFlags walk;
};

struct CellResult {
    bool failed = false;
    std::string error;
    double nmi = 0, seconds = 0;
    std::size_t n = 0;
};

Benchmark suite_instance(const SuiteArgs& a, double value, std::uint64_t seed) {
    if (a.model == "gn") {
        GNParams p;
        p.z_out = value;
        p.rng_seed = seed;
        return generate_gn(p);
    }
    if (a.model == "scaling") {
        GNParams p;
        p.groups = 40;
        p.group_size = static_cast<std::size_t>(value);
        p.z_out = 6;
        p.rng_seed = seed;
        return generate_gn(p);
    }
    LFRStyleParams p;
    p.mu = a.mu;
    p.overlap_count = static_cast<std::size_t>(std::lround(value * static_cast<double>(p.n)));
    p.rng_seed = seed;
    return generate_overlapping(p);
}

int run_suite(SuiteArgs& a) {
    if (a.values.empty()) {
        if (a.model == "gn")
            a.values = {0, 1, 2, 3, 4, 5, 6, 7, 8};
        else if (a.model == "scaling")
            a.values = {25, 50, 75, 100};
        else
            a.values = {0, 0.1, 0.2, 0.3, 0.4, 0.5};
    }
    const std::size_t cells = a.values.size() * static_cast<std::size_t>(a.reps);
    std::vector<CellResult> results(cells);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < cells;) {
            const double value = a.values[i / static_cast<std::size_t>(a.reps)];
            const std::uint64_t seed = a.seed + i % static_cast<std::size_t>(a.reps);
            auto& r = results[i];
            try {
                auto b = suite_instance(a, value, seed);
                const auto t0 = std::chrono::steady_clock::now();
                auto cover = detect_cover(b.network.graph, a.walk.config());
                r.seconds = seconds_since(t0);
                r.n = b.network.graph.node_count();
                r.nmi = overlapping_nmi(cover, b.truth, r.n);
            } catch (const std::exception& e) {
                r.failed = true;
                r.error = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    const unsigned jobs = std::max(1u, a.jobs);
    for (unsigned t = 1; t < jobs; ++t)
        pool.emplace_back(worker);
    worker();
    for (auto& t : pool)
        t.join();

    Output out(a.out);
    auto& os = out.get();
    os << "model,value,n,reps,failed,mean_nmi,std_nmi,mean_seconds,sqrt_mean_seconds\n" << std::setprecision(10);
    for (std::size_t v = 0; v < a.values.size(); ++v) {
        double sum = 0, sq = 0, secs = 0;
        std::size_t good = 0, failed = 0, n = 0;
        for (int r = 0; r < a.reps; ++r) {
            const auto& c = results[v * static_cast<std::size_t>(a.reps) + static_cast<std::size_t>(r)];
            if (c.failed) {
                ++failed;
                std::cerr << "cell " << a.model << '=' << a.values[v] << " rep " << r << ": " << c.error << '\n';
                continue;
            }
            ++good;
            n = c.n;
            sum += c.nmi;
            sq += c.nmi * c.nmi;
            secs += c.seconds;
        }
        const double mean = good ? sum / static_cast<double>(good) : std::nan("");
        const double var = good > 1 ? (sq - static_cast<double>(good) * mean * mean) / static_cast<double>(good - 1) : 0;
        const double mean_secs = good ? secs / static_cast<double>(good) : std::nan("");
        os << a.model << ',' << a.values[v] << ',' << n << ',' << a.reps << ',' << failed << ',' << mean << ','
           << std::sqrt(std::max(var, 0.0)) << ',' << mean_secs << ',' << std::sqrt(mean_secs) << '\n';
    }
    return ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Overlapping community detection by constrained random walks"};
    app.require_subcommand(1);

    DetectArgs detect;
    auto* c_detect = app.add_subcommand("detect", "Detect an overlapping cover");
    c_detect->add_option("graph", detect.graph, "Edge list")->required()->check(CLI::ExistingFile);
    c_detect->add_option("-o,--out", detect.out, "Cover file (default stdout)");
    c_detect->add_option("--trace", detect.trace_dir, "Directory for per-seed sweep traces");
    add_walk_flags(c_detect, detect.walk);

    EvalArgs eval;
    auto* c_eval = app.add_subcommand("eval", "Score a cover: AC, EQ and NMI against a reference");
    c_eval->add_option("graph", eval.graph, "Edge list")->required()->check(CLI::ExistingFile);
    c_eval->add_option("cover", eval.cover, "Cover to score")->required()->check(CLI::ExistingFile);
    c_eval->add_option("reference", eval.reference, "Reference cover for NMI")->check(CLI::ExistingFile);

    GenerateArgs gen;
    auto* c_gen = app.add_subcommand("generate", "Write a benchmark graph and its planted cover");
    c_gen->add_option("--model", gen.model, "gn or overlap")
        ->check(CLI::IsMember({"gn", "overlap"}))
        ->capture_default_str();
    c_gen->add_option("--seed", gen.seed, "Random seed")->required();
    c_gen->add_option("-o,--out", gen.out, "Output prefix for .edges and .cover")->required();
    add_gn_flags(c_gen, gen.gn);
    add_lfr_flags(c_gen, gen.lfr);

    SpectrumArgs spectrum;
    auto* c_spec = app.add_subcommand("spectrum", "Normalized Laplacian spectrum or l-step transition matrix");
    c_spec->add_option("graph", spectrum.graph, "Edge list")->required()->check(CLI::ExistingFile);
    c_spec->add_option("--matrix", spectrum.matrix, "Emit the dense l-step matrix instead")->check(CLI::NonNegativeNumber);
    c_spec->add_option("--mode", spectrum.mode, "Walk for --matrix")
        ->check(CLI::IsMember({"unconstrained", "constrained", "corrected"}))
        ->capture_default_str();
    c_spec->add_option("--count", spectrum.count, "Eigenvalues computed iteratively on large graphs")->capture_default_str();
    c_spec->add_flag("--iterative", spectrum.iterative, "Force the iterative solver");

    TraceArgs tr;
    auto* c_trace = app.add_subcommand("trace", "Per-step convergence of the walk from one seed");
    c_trace->add_option("graph", tr.graph, "Edge list")->required()->check(CLI::ExistingFile);
    c_trace->add_option("--node", tr.node, "Seed label (default: highest degree)");
    c_trace->add_option("--l", tr.l, "Number of steps")->check(CLI::Range(1, 100000))->capture_default_str();
    c_trace->add_option("--vector", tr.vector_out, "Write the final ranked vector as CSV");

    SuiteArgs suite;
    auto* c_suite = app.add_subcommand("suite", "Benchmark sweep: mean NMI and timing per parameter value");
    c_suite->add_option("--model", suite.model, "gn (z_out), scaling (group size) or overlap (overlap fraction)")
        ->check(CLI::IsMember({"gn", "scaling", "overlap"}))
        ->capture_default_str();
    c_suite->add_option("--values", suite.values, "Sweep values")->delimiter(',');
    c_suite->add_option("--reps", suite.reps, "Graphs per value")->check(CLI::PositiveNumber)->capture_default_str();
    c_suite->add_option("--jobs", suite.jobs, "Concurrent cells")->capture_default_str();
    c_suite->add_option("--seed", suite.seed, "First seed; repetition r uses seed + r")->capture_default_str();
    c_suite->add_option("--mu", suite.mu, "Mixing parameter for the overlap model")->capture_default_str();
    c_suite->add_option("-o,--out", suite.out, "CSV output (default stdout)");
    add_walk_flags(c_suite, suite.walk);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? ok : usage;
    }

    try {
        if (*c_detect)
            return run_detect(detect);
        if (*c_eval)
            return run_eval(eval);
        if (*c_gen)
            return run_generate(gen);
        if (*c_spec)
            return run_spectrum(spectrum);
        if (*c_trace)
            return run_trace(tr);
        if (*c_suite)
            return run_suite(suite);
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return data;
    } catch (const GraphError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return data;
    } catch (const GenerationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return data;
    } catch (const MetricError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return data;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return internal;
    }
    return internal;
}
