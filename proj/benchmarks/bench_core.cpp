// ============================================================================
//  bench_core.cpp -- micro-benchmarks for the translators and the reasoners
// ============================================================================
//
//  Built when ALUNI_BUILD_BENCHMARKS is on; never registered with ctest.
//  Run the `aluni_benchmarks` binary directly for the numbers.  The inputs
//  are the checked-in fixtures, so results are comparable across machines.
//
// ============================================================================

#include <benchmark/benchmark.h>

#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "aluni/cardinality.hpp"
#include "aluni/er.hpp"
#include "aluni/frames.hpp"
#include "aluni/interpretation.hpp"
#include "aluni/kb.hpp"
#include "aluni/kb_parser.hpp"
#include "aluni/oo.hpp"
#include "aluni/reason.hpp"

namespace {

using namespace aluni;

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(ALUNI_FIGURES_DIR) + "/" + name);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

const KnowledgeBase& doubling_kb() {
  static const KnowledgeBase k = parse_kb(slurp("keven.kb"));
  return k;
}

SearchBudget up_to(int hi) {
  SearchBudget b;
  b.maxSize = hi;
  return b;
}

/// A dense random interpretation over the doubling signature; the benchmarks
/// sweep the domain size while the edge density stays fixed.
Interpretation dense_interpretation(int n) {
  std::mt19937 rng(9090 + static_cast<unsigned>(n));
  Interpretation i;
  i.domain = n;
  for (int d = 0; d < n; ++d) {
    if (rng() % 2 == 0) i.concepts["Number"].insert(d);
    if (rng() % 3 == 0) i.concepts["Even"].insert(d);
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (rng() % 4 == 0) i.roles["doubles"].insert({a, b});
  i.pad_signature(doubling_kb());
  return i;
}

}  // namespace

// ── Translation ─────────────────────────────────────────────────────────────

static void BM_TranslateFrames(benchmark::State& state) {
  const FrameKB f = parse_frames(slurp("fig2.frm"));
  for (auto _ : state) benchmark::DoNotOptimize(translate_theta(f));
}
BENCHMARK(BM_TranslateFrames);

static void BM_TranslateEr(benchmark::State& state) {
  const ERSchema s = parse_er(slurp("fig4.ers"));
  for (auto _ : state) benchmark::DoNotOptimize(translate_phi(s));
}
BENCHMARK(BM_TranslateEr);

static void BM_TranslateOo(benchmark::State& state) {
  const OOSchema s = parse_oo(slurp("fig7.oos"));
  for (auto _ : state) benchmark::DoNotOptimize(translate_psi(s));
}
BENCHMARK(BM_TranslateOo);

// ── Bounded model search ────────────────────────────────────────────────────

static void BM_FindWitness(benchmark::State& state) {
  const KnowledgeBase& k = doubling_kb();
  const ConceptPtr goal = parse_concept_expr("Number AND Even", k);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        find_model(k, goal, up_to(static_cast<int>(state.range(0)))));
}
BENCHMARK(BM_FindWitness)->DenseRange(1, 4);

static void BM_Refute(benchmark::State& state) {
  const KnowledgeBase& k = doubling_kb();
  const ConceptPtr goal = parse_concept_expr("Number AND NOT Even", k);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        find_model(k, goal, up_to(static_cast<int>(state.range(0)))));
}
BENCHMARK(BM_Refute)->DenseRange(1, 5);

// ── Cardinality analysis ────────────────────────────────────────────────────

static void BM_AnalyzeCardinalities(benchmark::State& state) {
  const KnowledgeBase k = translate_phi(parse_er(slurp("fig4.ers")));
  for (auto _ : state) benchmark::DoNotOptimize(analyze_cardinalities(k));
}
BENCHMARK(BM_AnalyzeCardinalities);

// ── Semantics evaluation ────────────────────────────────────────────────────

static void BM_EvaluateConcept(benchmark::State& state) {
  const KnowledgeBase& k = doubling_kb();
  const Interpretation i =
      dense_interpretation(static_cast<int>(state.range(0)));
  const ConceptPtr c =
      parse_concept_expr("ALL doubles.Even AND ATLEAST 1 doubles", k);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_concept(*c, i));
}
BENCHMARK(BM_EvaluateConcept)->Arg(16)->Arg(64)->Arg(256);

static void BM_IsModel(benchmark::State& state) {
  const KnowledgeBase& k = doubling_kb();
  const Interpretation i =
      dense_interpretation(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(is_model(k, i));
}
BENCHMARK(BM_IsModel)->Arg(16)->Arg(64)->Arg(256);

BENCHMARK_MAIN();
