#include <benchmark/benchmark.h>

#include "tagrank/adjacency.hpp"
#include "tagrank/baselines.hpp"
#include "tagrank/corpus.hpp"
#include "tagrank/ranker.hpp"

using namespace tagrank;

namespace {

Corpus corpus_of(std::size_t posts) {
    SyntheticSpec spec;
    spec.posts = posts;
    spec.users = std::max<std::size_t>(posts / 5, 1);
    spec.tags = posts * 2;
    spec.seed = 7;
    return generate_synthetic_corpus(spec);
}

} // namespace

static void BM_BuildSubmatrices(benchmark::State& state) {
    Corpus corpus = corpus_of(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        auto content = build_content_submatrices(corpus, BuildOptions{});
        auto user = build_user_submatrices(corpus, BuildOptions{});
        benchmark::DoNotOptimize(content.popularity_share.entry_count());
        benchmark::DoNotOptimize(user.popularity_share.entry_count());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BuildSubmatrices)->Arg(1000)->Arg(5000)->Arg(10000);

static void BM_BuildAllVariants(benchmark::State& state) {
    Corpus corpus = corpus_of(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        auto variants = build_adjacency_variants(corpus, BuildOptions{}, all_variants());
        benchmark::DoNotOptimize(variants.at(Variant::UFP_PRODUCT).matrix.entry_count());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BuildAllVariants)->Arg(1000)->Arg(5000)->Arg(10000);

static void BM_PowerIterate(benchmark::State& state) {
    Corpus corpus = corpus_of(static_cast<std::size_t>(state.range(0)));
    AdjacencyMatrix a = build_adjacency_variants(corpus, BuildOptions{},
                                                 std::array{Variant::UFP_PLUS})
                            .at(Variant::UFP_PLUS);
    PreferenceVector pref = uniform_preference(corpus.tag_count(), 1.0);
    for (auto _ : state) {
        auto result = power_iterate(a, pref);
        benchmark::DoNotOptimize(result.scores.data());
    }
}
BENCHMARK(BM_PowerIterate)->Arg(1000)->Arg(5000)->Arg(10000);

static void BM_RecommendBatch(benchmark::State& state) {
    Corpus corpus = corpus_of(2000);
    AdjacencyMatrix a = build_adjacency_variants(corpus, BuildOptions{},
                                                 std::array{Variant::UFP_PRODUCT})
                            .at(Variant::UFP_PRODUCT);
    Recommender engine(a);
    engine.unit_baseline(); // warm the cached baseline
    std::size_t cursor = 0;
    for (auto _ : state) {
        const Post& post = corpus.posts[cursor];
        cursor = (cursor + 83) % corpus.post_count();
        auto rec = engine.recommend(post.tags, 10);
        benchmark::DoNotOptimize(rec.items.data());
    }
}
BENCHMARK(BM_RecommendBatch);

static void BM_CooccurrenceStats(benchmark::State& state) {
    Corpus corpus = corpus_of(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        auto stats = CooccurrenceStats::from_corpus(corpus);
        benchmark::DoNotOptimize(stats.tag_count());
    }
}
BENCHMARK(BM_CooccurrenceStats)->Arg(1000)->Arg(5000);

static void BM_TrainTagWeights(benchmark::State& state) {
    Corpus corpus = corpus_of(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        auto weights = train_tag_weights(corpus, 1.0);
        benchmark::DoNotOptimize(weights.data());
    }
}
BENCHMARK(BM_TrainTagWeights)->Arg(1000)->Arg(5000);

BENCHMARK_MAIN();
