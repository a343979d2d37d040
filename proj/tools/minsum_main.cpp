// Command line front end: instance generation, solving, evaluation, label
// corruption and auditing, cover search, and a seeded benchmark matrix.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "minsum/exact.hpp"
#include "minsum/instances.hpp"
#include "minsum/io.hpp"
#include "minsum/kernels.hpp"
#include "minsum/kmeans.hpp"
#include "minsum/learned.hpp"
#include "minsum/oracle_sim.hpp"
#include "minsum/ptas.hpp"

namespace {

using namespace minsum;
using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void append_report(const std::string& path, const RunReport& r) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw ParseError(path + ": cannot open for appending");
  out << run_report_jsonl(r) << '\n';
}

void print_summary(const RunReport& r) {
  std::printf("%-8s n=%zu d=%zu k=%d cost=%.6f", r.algo.c_str(), r.n, r.d, r.k,
              r.cost);
  if (r.ratio) std::printf(" ratio=%.4f", *r.ratio);
  std::printf(" wall_ms=%.1f", r.wall_ms);
  for (const auto& f : r.flags) std::printf(" [%s]", f.c_str());
  std::printf("\n");
}

// ------------------------------------------------------------------ generate

int cmd_generate(const std::string& kind, const std::string& out_points,
                 const std::string& out_truth, const std::string& out_sets,
                 const std::string& out_halfplane, std::size_t n, std::size_t d,
                 std::int32_t k, double separation, double sigma,
                 std::size_t inner, std::size_t outer, double inner_radius,
                 double outer_radius, double jitter, std::size_t universe,
                 std::size_t z, std::size_t sets_per_part, double spacing,
                 std::uint64_t seed) {
  if (kind == "gaussian") {
    GaussianSpec spec{n, d, k, separation, sigma, seed};
    PlantedInstance inst = gen_gaussian(spec);
    write_points_csv(out_points, inst.points);
    if (!out_truth.empty()) write_labels(out_truth, inst.truth);
    std::printf("gaussian n=%zu d=%zu k=%d -> %s\n", inst.points.size(),
                inst.points.dim(), k, out_points.c_str());
  } else if (kind == "rings") {
    RingsSpec spec{inner, outer, inner_radius, outer_radius, jitter, seed};
    RingsInstance inst = gen_rings(spec);
    write_points_csv(out_points, inst.points);
    if (!out_truth.empty()) write_labels(out_truth, inst.ring_partition);
    if (!out_halfplane.empty())
      write_labels(out_halfplane, inst.halfplane_partition);
    std::printf("rings n=%zu -> %s\n", inst.points.size(), out_points.c_str());
  } else if (kind == "jch") {
    CoverSystemSpec spec{universe, z, k, sets_per_part, seed};
    CoverSystemInstance inst = gen_cover_system(spec);
    Dataset pts = set_system_points(inst.sets);
    write_points_csv(out_points, pts);
    if (!out_truth.empty()) write_labels(out_truth, inst.truth);
    if (!out_sets.empty()) write_set_system(out_sets, inst.sets);
    std::printf("jch universe=%zu z=%zu k=%d sets=%zu -> %s\n", universe, z, k,
                inst.sets.sets.size(), out_points.c_str());
  } else if (kind == "grid") {
    Dataset pts = gen_grid(n, d, spacing);
    write_points_csv(out_points, pts);
    std::printf("grid n=%zu d=%zu -> %s\n", pts.size(), pts.dim(),
                out_points.c_str());
  } else {
    std::fprintf(stderr, "unknown kind '%s'\n", kind.c_str());
    return 2;
  }
  return 0;
}

// --------------------------------------------------------------------- solve

struct SolveOutcome {
  Labeling labeling;
  CostReport report;
  std::vector<std::string> flags;
};

SolveOutcome run_algo(const Dataset& ds, const std::string& algo, std::int32_t k,
                      const PtasConfig& pcfg, const std::string& labels_path,
                      std::optional<double> alpha, bool sweep,
                      std::size_t exact_limit) {
  SolveOutcome out;
  if (algo == "exact") {
    ExactResult ex = brute_force_minsum(ds, k, exact_limit);
    out.labeling = ex.labeling;
    out.report = make_cost_report(ds, out.labeling);
  } else if (algo == "kmeans") {
    KmeansResult km = kmeans_baseline(ds, k, pcfg.seed);
    out.labeling = km.labeling;
    out.report = make_cost_report(ds, out.labeling);
  } else if (algo == "ptas") {
    PtasResult r = solve_ptas(ds, k, pcfg);
    out.labeling = std::move(r.labeling);
    out.report = std::move(r.report);
    out.flags = std::move(r.flags);
  } else if (algo == "learned") {
    if (labels_path.empty())
      throw ConfigError("solve --algo learned needs --labels");
    Labeling pred = read_labels(labels_path, k);
    LearnedResult r;
    if (sweep || !alpha) {
      r = alpha_sweep(ds, pred);
    } else {
      r = solve_learned(ds, LabelPrediction{pred, *alpha});
    }
    out.labeling = std::move(r.labeling);
    out.report = std::move(r.report);
    out.flags = std::move(r.flags);
  } else {
    throw ConfigError("unknown algo '" + algo + "'");
  }
  return out;
}

// --------------------------------------------------------------------- bench

struct BenchRun {
  std::size_t index;
  std::string kind;
  std::string algo;
  std::uint64_t seed;
};

struct BenchOutcome {
  RunReport report;
  Labeling labeling;
};

BenchOutcome bench_one(const BenchRun& run, double epsilon, double alpha) {
  Dataset points(1, 1, {0.0});
  Labeling truth;
  std::int32_t k = 0;
  if (run.kind == "gaussian") {
    PlantedInstance inst = gen_gaussian(GaussianSpec{36, 2, 3, 8.0, 1.0, run.seed});
    points = std::move(inst.points);
    truth = std::move(inst.truth);
    k = 3;
  } else if (run.kind == "rings") {
    RingsInstance inst = gen_rings(RingsSpec{12, 12, 1.0, 3.0, 0.05, run.seed});
    points = std::move(inst.points);
    truth = std::move(inst.ring_partition);
    k = 2;
  } else {  // jch
    CoverSystemInstance inst =
        gen_cover_system(CoverSystemSpec{12, 3, 3, 4, run.seed});
    points = set_system_points(inst.sets);
    truth = std::move(inst.truth);
    k = 3;
  }
  double truth_cost = minsum_cost(points, truth);

  PtasConfig pcfg;
  pcfg.epsilon = epsilon;
  pcfg.caps.max_sample = 40;
  pcfg.caps.max_subset = 3;
  pcfg.caps.max_leaves = 8;
  pcfg.profile_cap = 4000;
  pcfg.seed = run.seed;

  Clock::time_point t0 = Clock::now();
  SolveOutcome sol;
  std::optional<double> used_alpha;
  std::optional<double> used_eps;
  if (run.algo == "learned") {
    CorruptionPlan plan = corrupt_labels(truth, alpha, run.seed);
    LearnedResult r = solve_learned(points, LabelPrediction{plan.labels, alpha});
    sol.labeling = std::move(r.labeling);
    sol.report = std::move(r.report);
    sol.flags = std::move(r.flags);
    used_alpha = alpha;
  } else {
    if (run.algo == "ptas") used_eps = epsilon;
    sol = run_algo(points, run.algo, k, pcfg, "", std::nullopt, false, 13);
  }

  BenchOutcome out;
  out.report.algo = run.algo;
  out.report.seed = run.seed;
  out.report.n = points.size();
  out.report.d = points.dim();
  out.report.k = k;
  out.report.epsilon = used_eps;
  out.report.alpha = used_alpha;
  out.report.cost = sol.report.minsum_cost;
  out.report.ratio = truth_cost > 0.0
                         ? std::optional<double>(sol.report.minsum_cost / truth_cost)
                         : std::nullopt;
  out.report.wall_ms = ms_since(t0);
  out.report.flags = sol.flags;
  out.labeling = std::move(sol.labeling);
  return out;
}

int cmd_bench(const std::string& out_dir, std::size_t seeds, double epsilon,
              double alpha, std::size_t jobs) {
  std::filesystem::create_directories(out_dir);
  const std::vector<std::string> kinds{"gaussian", "rings", "jch"};
  const std::vector<std::string> algos{"kmeans", "ptas", "learned"};
  std::vector<BenchRun> runs;
  for (std::uint64_t s = 1; s <= seeds; ++s)
    for (const auto& kind : kinds)
      for (const auto& algo : algos)
        runs.push_back(BenchRun{runs.size(), kind, algo, s});

  // parallel over runs, results emitted strictly in run order
  std::vector<std::future<BenchOutcome>> futs(runs.size());
  std::size_t width = std::max<std::size_t>(1, jobs);
  std::size_t launched = 0, drained = 0;
  std::ofstream table(out_dir + "/runs.jsonl");
  if (!table) throw ParseError(out_dir + "/runs.jsonl: cannot open for writing");
  while (drained < runs.size()) {
    while (launched < runs.size() && launched - drained < width) {
      const BenchRun& r = runs[launched];
      futs[launched] = std::async(std::launch::async, bench_one, r, epsilon, alpha);
      ++launched;
    }
    BenchOutcome out = futs[drained].get();
    const BenchRun& r = runs[drained];
    table << run_report_jsonl(out.report) << '\n';
    char name[160];
    std::snprintf(name, sizeof(name), "%s/run_%03zu_%s_%s_s%llu.labels",
                  out_dir.c_str(), r.index, r.kind.c_str(), r.algo.c_str(),
                  static_cast<unsigned long long>(r.seed));
    write_labels(name, out.labeling);
    print_summary(out.report);
    ++drained;
  }
  std::printf("bench: %zu runs -> %s/runs.jsonl\n", runs.size(), out_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"min-sum k-clustering toolkit"};
  app.require_subcommand(1);

  // generate
  std::string g_kind = "gaussian", g_points = "data.csv", g_truth, g_sets,
              g_halfplane;
  std::size_t g_n = 60, g_d = 2, g_inner = 12, g_outer = 12, g_universe = 12,
              g_z = 3, g_spp = 4;
  std::int32_t g_k = 3;
  double g_sep = 10.0, g_sigma = 1.0, g_ir = 1.0, g_or = 3.0, g_jitter = 0.0,
         g_spacing = 1.0;
  std::uint64_t g_seed = 1;
  auto* gen = app.add_subcommand("generate", "write a synthetic instance");
  gen->add_option("--kind", g_kind, "gaussian|rings|jch|grid");
  gen->add_option("-o,--points", g_points, "output CSV");
  gen->add_option("--truth", g_truth, "reference labels output");
  gen->add_option("--sets", g_sets, "set-system text output (jch)");
  gen->add_option("--halfplane", g_halfplane, "vertical-split labels (rings)");
  gen->add_option("--n", g_n);
  gen->add_option("--d", g_d);
  gen->add_option("--k", g_k);
  gen->add_option("--separation", g_sep);
  gen->add_option("--sigma", g_sigma);
  gen->add_option("--inner", g_inner);
  gen->add_option("--outer", g_outer);
  gen->add_option("--inner-radius", g_ir);
  gen->add_option("--outer-radius", g_or);
  gen->add_option("--jitter", g_jitter);
  gen->add_option("--universe", g_universe);
  gen->add_option("--z", g_z);
  gen->add_option("--sets-per-part", g_spp);
  gen->add_option("--spacing", g_spacing);
  gen->add_option("--seed", g_seed);

  // solve
  std::string s_algo = "ptas", s_points, s_labels, s_out, s_report;
  std::int32_t s_k = 2;
  double s_eps = 0.3, s_delta = 0.1;
  std::optional<double> s_alpha;
  bool s_sweep = false;
  std::size_t s_max_leaves = 5000, s_max_sample = 200, s_exact_limit = 13;
  std::optional<double> s_ref;
  std::uint64_t s_seed = 1;
  auto* solve = app.add_subcommand("solve", "cluster a point file");
  solve->add_option("--algo", s_algo, "exact|ptas|learned|kmeans");
  solve->add_option("--points", s_points)->required();
  solve->add_option("--k", s_k)->required();
  solve->add_option("--epsilon", s_eps);
  solve->add_option("--delta", s_delta);
  solve->add_option("--labels", s_labels, "predicted labels (learned)");
  solve->add_option("--alpha", s_alpha, "error-rate bound (learned)");
  solve->add_flag("--alpha-sweep", s_sweep, "search alpha on a geometric grid");
  solve->add_option("--max-leaves", s_max_leaves);
  solve->add_option("--max-sample", s_max_sample);
  solve->add_option("--exact-limit", s_exact_limit);
  solve->add_option("-o,--out", s_out, "labeling output");
  solve->add_option("--report", s_report, "append a JSON line here");
  solve->add_option("--ref-cost", s_ref, "reference cost for the ratio field");
  solve->add_option("--seed", s_seed);

  // evaluate
  std::string e_points, e_labels;
  std::int32_t e_k = 0;
  std::optional<double> e_ref;
  bool e_pairwise = false;
  auto* eval = app.add_subcommand("evaluate", "recompute costs for a labeling");
  eval->add_option("--points", e_points)->required();
  eval->add_option("--labels", e_labels)->required();
  eval->add_option("--k", e_k);
  eval->add_option("--ref-cost", e_ref);
  eval->add_flag("--pairwise-check", e_pairwise,
                 "also run the quadratic pair-sum evaluator");

  // corrupt
  std::string c_labels, c_out;
  double c_alpha = 0.1;
  std::uint64_t c_seed = 1;
  std::int32_t c_k = 0;
  auto* corrupt = app.add_subcommand("corrupt", "flip labels pairwise");
  corrupt->add_option("--labels", c_labels)->required();
  corrupt->add_option("--alpha", c_alpha)->required();
  corrupt->add_option("--seed", c_seed);
  corrupt->add_option("--k", c_k);
  corrupt->add_option("-o,--out", c_out)->required();

  // audit
  std::string a_pred, a_truth;
  std::int32_t a_k = 0;
  auto* audit = app.add_subcommand("audit", "worst per-cluster error rate");
  audit->add_option("--labels", a_pred)->required();
  audit->add_option("--truth", a_truth)->required();
  audit->add_option("--k", a_k);

  // cover-search
  std::string v_sets;
  std::int32_t v_k = 3;
  auto* cover = app.add_subcommand("cover-search",
                                   "exhaustive (z-1)-core cover check");
  cover->add_option("--sets", v_sets)->required();
  cover->add_option("--k", v_k);

  // bench
  std::string b_out = "bench_out";
  std::size_t b_seeds = 5, b_jobs = 4;
  double b_eps = 0.35, b_alpha = 0.1;
  auto* bench = app.add_subcommand("bench", "seeded instance x algorithm matrix");
  bench->add_option("-o,--out", b_out, "output directory");
  bench->add_option("--seeds", b_seeds);
  bench->add_option("--epsilon", b_eps);
  bench->add_option("--alpha", b_alpha);
  bench->add_option("--jobs", b_jobs, "concurrent runs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed())
      return cmd_generate(g_kind, g_points, g_truth, g_sets, g_halfplane, g_n,
                          g_d, g_k, g_sep, g_sigma, g_inner, g_outer, g_ir,
                          g_or, g_jitter, g_universe, g_z, g_spp, g_spacing,
                          g_seed);

    if (solve->parsed()) {
      Dataset ds = read_points_csv(s_points);
      PtasConfig pcfg;
      pcfg.epsilon = s_eps;
      pcfg.delta = s_delta;
      pcfg.caps.max_leaves = s_max_leaves;
      pcfg.caps.max_sample = s_max_sample;
      pcfg.exact_limit = s_exact_limit;
      pcfg.seed = s_seed;
      Clock::time_point t0 = Clock::now();
      SolveOutcome sol = run_algo(ds, s_algo, s_k, pcfg, s_labels, s_alpha,
                                  s_sweep, s_exact_limit);
      RunReport rep;
      rep.algo = s_algo;
      rep.seed = s_seed;
      rep.n = ds.size();
      rep.d = ds.dim();
      rep.k = s_k;
      if (s_algo == "ptas") rep.epsilon = s_eps;
      if (s_algo == "learned" && s_alpha) rep.alpha = s_alpha;
      rep.cost = sol.report.minsum_cost;
      if (s_ref && *s_ref > 0.0) rep.ratio = sol.report.minsum_cost / *s_ref;
      rep.wall_ms = ms_since(t0);
      rep.flags = sol.flags;
      if (!s_out.empty()) write_labels(s_out, sol.labeling);
      if (!s_report.empty()) append_report(s_report, rep);
      print_summary(rep);
      return 0;
    }

    if (eval->parsed()) {
      Dataset ds = read_points_csv(e_points);
      Labeling lab = read_labels(e_labels, e_k);
      CostReport rep = make_cost_report(ds, lab, e_ref);
      std::printf("minsum=%.6f kmeans=%.6f\n", rep.minsum_cost, rep.kmeans_cost);
      if (e_pairwise) {
        double pw = minsum_cost_pairwise(ds, lab);
        std::printf("pairwise=%.6f agree=%s\n", pw,
                    rel_close(pw, rep.minsum_cost) ? "yes" : "NO");
        if (!rel_close(pw, rep.minsum_cost)) return 3;
      }
      if (rep.ratio_vs_reference)
        std::printf("ratio=%.6f\n", *rep.ratio_vs_reference);
      return 0;
    }

    if (corrupt->parsed()) {
      Labeling truth = read_labels(c_labels, c_k);
      CorruptionPlan plan = corrupt_labels(truth, c_alpha, c_seed);
      write_labels(c_out, plan.labels);
      std::printf("corrupt alpha_target=%.4f alpha_achieved=%.4f moves=%zu\n",
                  plan.alpha_target, plan.alpha_achieved, plan.moves.size());
      return 0;
    }

    if (audit->parsed()) {
      Labeling pred = read_labels(a_pred, a_k);
      Labeling truth = read_labels(a_truth, a_k);
      std::int32_t kk = std::max(pred.k, truth.k);
      pred.k = truth.k = kk;
      double err = verify_error_rate(pred, truth);
      std::printf("worst_cluster_error=%.6f\n", err);
      return 0;
    }

    if (cover->parsed()) {
      SetSystem sys = read_set_system(v_sets);
      auto res = cover_search(sys, v_k);
      if (!res) {
        std::printf("cover: none\n");
        return 1;
      }
      std::printf("cover: found\n");
      for (const auto& core : *res) {
        for (std::size_t j = 0; j < core.size(); ++j)
          std::printf("%s%u", j ? " " : "", core[j]);
        std::printf("\n");
      }
      return 0;
    }

    if (bench->parsed()) return cmd_bench(b_out, b_seeds, b_eps, b_alpha, b_jobs);
  } catch (const MinsumError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
