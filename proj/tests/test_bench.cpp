#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <ueoc/bench.hpp>

#include "test_support.hpp"

namespace ueoc {
namespace {

using namespace ueoc::testing;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("ueoc_bench_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
                ::testing::UnitTest::GetInstance()->current_test_info()->name());
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

TEST(RngTest, deterministicAndInRange) {
    Rng a(5), b(5);
    for (int i = 0; i < 1000; ++i) {
        const double x = a.uniform();
        EXPECT_EQ(x, b.uniform());
        EXPECT_GE(x, 0.0);
        EXPECT_LT(x, 1.0);
        EXPECT_LT(a.below(7), 7u);
        b.below(7);
    }
}

TEST(GnTest, defaultsGiveFourGroupsOf32) {
    auto b = generate_gn(GNParams{});
    EXPECT_EQ(b.network.graph.node_count(), 128u);
    ASSERT_EQ(b.truth.size(), 4u);
    for (const auto& c : b.truth.communities())
        EXPECT_EQ(c.size(), 32u);
    EXPECT_EQ(b.truth.overlapping_node_count(), 0u);
}

TEST(GnTest, noOutsideLinksWhenZoutIsZero) {
    GNParams p;
    p.rng_seed = 4;
    auto b = generate_gn(p);
    const auto& g = b.network.graph;
    for (auto [u, v] : g.edges())
        EXPECT_EQ(b.truth.memberships(u), b.truth.memberships(v));
    EXPECT_EQ(connected_components(g).size(), 4u);
}

TEST(GnTest, degreeLaw) {
    // Mean degree 16 +- 0.5 over 50 graphs, and the intra/inter split within
    // three standard deviations of its binomial expectation over 400 graphs.
    const int graphs = 400;
    double total = 0, inner = 0, outer = 0;
    for (int seed = 0; seed < graphs; ++seed) {
        GNParams p;
        p.z_out = 6;
        p.rng_seed = static_cast<std::uint64_t>(seed);
        auto b = generate_gn(p);
        const auto& g = b.network.graph;
        ASSERT_EQ(g.node_count(), 128u);
        if (seed < 50)
            total += 2.0 * static_cast<double>(g.edge_count()) / 128.0;
        for (auto [u, v] : g.edges())
            (b.truth.memberships(u) == b.truth.memberships(v) ? inner : outer) += 2.0 / 128.0;
    }
    EXPECT_NEAR(total / 50, 16.0, 0.5);
    // edge counts per graph: intra ~ Bin(4 * C(32,2), 10/31), inter ~ Bin(6 * 32^2, 6/96)
    const double intra_pairs = 4 * 496, inter_pairs = 6 * 1024;
    const double sd_in = 2 * std::sqrt(intra_pairs * (10.0 / 31) * (21.0 / 31) / graphs) / 128;
    const double sd_out = 2 * std::sqrt(inter_pairs * (6.0 / 96) * (90.0 / 96) / graphs) / 128;
    EXPECT_NEAR(inner / graphs, 10.0, 3 * sd_in);
    EXPECT_NEAR(outer / graphs, 6.0, 3 * sd_out);
}

TEST(GnTest, scalingFamily) {
    GNParams p;
    p.groups = 40;
    p.group_size = 25;
    p.z_out = 6;
    p.rng_seed = 1;
    auto b = generate_gn(p);
    EXPECT_EQ(b.network.graph.node_count(), 1000u);
    EXPECT_EQ(b.truth.size(), 40u);
    EXPECT_NEAR(p.z_in(), 10.0, 0);
}

TEST(GnTest, rejectsImpossibleParameters) {
    GNParams p;
    p.z_out = 17;
    EXPECT_THROW(generate_gn(p), GenerationError);
    p.z_out = 0;
    p.group_size = 8; // p_in = 16 / 7 > 1
    EXPECT_THROW(generate_gn(p), GenerationError);
}

TEST(GnTest, filesAreReproducibleAndRoundTrip) {
    TempDir dir;
    GNParams p;
    p.z_out = 3;
    p.rng_seed = 99;
    const auto a = (dir.path / "a").string(), b = (dir.path / "b").string(), c = (dir.path / "c").string();
    auto bench = generate_gn(p);
    write_benchmark(bench, a);
    write_benchmark(generate_gn(p), b);
    p.rng_seed = 100;
    write_benchmark(generate_gn(p), c);
    EXPECT_EQ(slurp(a + ".edges"), slurp(b + ".edges"));
    EXPECT_EQ(slurp(a + ".cover"), slurp(b + ".cover"));
    EXPECT_NE(slurp(a + ".edges"), slurp(c + ".edges"));

    auto net = load_edge_list_file(a + ".edges");
    EXPECT_EQ(net.graph.node_count(), 128u);
    EXPECT_EQ(net.graph.edge_count(), bench.network.graph.edge_count());
    for (auto [u, v] : bench.network.graph.edges()) {
        auto x = net.find(bench.network.labels[u]), y = net.find(bench.network.labels[v]);
        ASSERT_GE(x, 0);
        ASSERT_GE(y, 0);
        EXPECT_TRUE(net.graph.has_edge(static_cast<NodeId>(x), static_cast<NodeId>(y)));
    }
    std::ifstream in(a + ".cover");
    auto truth = read_cover(net, in);
    EXPECT_TRUE(truth.covers_all());
    EXPECT_EQ(truth.size(), 4u);
}

TEST(OverlapTest, bookkeepingAndSizes) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        LFRStyleParams p;
        p.overlap_count = 100;
        p.mu = 0.2;
        p.rng_seed = seed;
        auto b = generate_overlapping(p);
        const auto& g = b.network.graph;
        ASSERT_EQ(g.node_count(), 1000u);
        EXPECT_TRUE(b.truth.covers_all());
        std::size_t overlapping = 0;
        for (NodeId v = 0; v < 1000; ++v) {
            const auto o = b.truth.memberships(v).size();
            EXPECT_TRUE(o == 1 || o == 2);
            overlapping += o == 2 ? 1 : 0;
        }
        EXPECT_EQ(overlapping, 100u);
        for (const auto& c : b.truth.communities()) {
            EXPECT_GE(c.size(), 20u);
            EXPECT_LE(c.size(), 100u);
        }
    }
}

TEST(OverlapTest, degreesAndMixing) {
    LFRStyleParams p;
    p.mu = 0.3;
    p.overlap_count = 50;
    p.rng_seed = 21;
    auto b = generate_overlapping(p);
    const auto& g = b.network.graph;
    EXPECT_NEAR(2.0 * static_cast<double>(g.edge_count()) / 1000.0, 20.0, 1.5);
    std::size_t max_degree = 0;
    for (NodeId v = 0; v < 1000; ++v)
        max_degree = std::max(max_degree, g.degree(v));
    EXPECT_LE(max_degree, 50u);
    double external = 0;
    for (auto [u, v] : g.edges()) {
        bool shared = false;
        for (auto c : b.truth.memberships(u))
            for (auto d : b.truth.memberships(v))
                shared = shared || c == d;
        external += shared ? 0 : 1;
    }
    EXPECT_NEAR(external / static_cast<double>(g.edge_count()), 0.3, 0.03);
}

TEST(OverlapTest, noMixingGivesIsolatedCommunities) {
    LFRStyleParams p;
    p.mu = 0;
    p.rng_seed = 2;
    auto b = generate_overlapping(p);
    const auto& g = b.network.graph;
    for (auto [u, v] : g.edges())
        EXPECT_EQ(b.truth.memberships(u), b.truth.memberships(v));
    for (const auto& c : b.truth.communities())
        EXPECT_EQ(naive_cut(g, c.members).first, 0);
}

TEST(OverlapTest, deterministicFromSeed) {
    LFRStyleParams p;
    p.n = 400;
    p.overlap_count = 40;
    p.rng_seed = 7;
    auto a = generate_overlapping(p);
    auto b = generate_overlapping(p);
    EXPECT_TRUE(a.network.graph == b.network.graph);
    EXPECT_TRUE(a.truth.same_sets(b.truth));
}

TEST(OverlapTest, rejectsBadParameters) {
    LFRStyleParams p;
    p.mu = 1.0;
    EXPECT_THROW(generate_overlapping(p), GenerationError);
    p = LFRStyleParams{};
    p.c_min = 300; // c_max = 1500 > n
    EXPECT_THROW(generate_overlapping(p), GenerationError);
    p = LFRStyleParams{};
    p.memberships = 1;
    EXPECT_THROW(generate_overlapping(p), GenerationError);
}

} // namespace
} // namespace ueoc
