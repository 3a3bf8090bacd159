// Command-line front-end: instance I/O, solver dispatch, reduction
// generation, round-trip verification, random instance generation, and a
// benchmark harness.
//
// Exit codes: 0 success, 2 infeasible, 3 validation error, 4 enumeration or
// size budget exceeded, 5 verification disagreement.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ofdma/generator.hpp"
#include "ofdma/json_io.hpp"
#include "ofdma/parallel.hpp"
#include "ofdma/reductions.hpp"
#include "ofdma/solve.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 2;
constexpr int kExitValidation = 3;
constexpr int kExitBudget = 4;
constexpr int kExitDisagreement = 5;

struct GlobalFlags {
  double eps = 1e-10;
  double enum_budget = 1e8;
  int c_bound = 4;
  int workers = 0;  // 0 = hardware concurrency
};

ofdma::UtilityKind parse_utility_or_throw(const std::string& name) {
  const auto kind = ofdma::parse_utility(name);
  if (!kind)
    throw std::invalid_argument("unknown utility '" + name +
                                "' (expected sum|prop|harmonic|min)");
  return *kind;
}

void parse_ratio(const std::string& text, long& num, long& den) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) {
      num = std::stol(text);
      den = 1;
    } else {
      num = std::stol(text.substr(0, slash));
      den = std::stol(text.substr(slash + 1));
    }
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse ratio '" + text + "' (expected NUM or NUM/DEN)");
  }
}

ofdma::ThreeDMInstance load_or_generate_tdm(const std::string& tdm_file, int size,
                                            int num_triples, std::uint64_t seed) {
  if (!tdm_file.empty()) return ofdma::tdm_from_json(ofdma::read_json_file(tdm_file));
  return ofdma::random_3dm(size, num_triples, seed);
}

int run_solve(const GlobalFlags& g, const std::string& instance_file, const std::string& method,
              const std::string& utility_name, const std::vector<double>& weights,
              const std::string& out_file) {
  const ofdma::OfdmaInstance inst =
      ofdma::instance_from_json(ofdma::read_json_file(instance_file));
  const auto violations = ofdma::validate_instance(inst);
  if (!violations.empty()) {
    for (const auto& v : violations) std::cerr << "invalid instance: " << v << "\n";
    return kExitValidation;
  }

  ofdma::SolveOptions opts;
  opts.method = method;
  opts.kind = parse_utility_or_throw(utility_name);
  if (!weights.empty()) opts.weights = weights;
  opts.eps = g.eps;
  opts.enum_budget = static_cast<std::uint64_t>(g.enum_budget);
  opts.c_bound = g.c_bound;

  const ofdma::SolveReport report = ofdma::solve_instance(inst, opts);
  std::cout << "method: " << report.method << "\n"
            << "status: " << ofdma::status_name(report.status) << "\n";
  if (report.status == ofdma::SolveStatus::Optimal) {
    std::cout << "value: " << report.value << "\n";
    for (const auto& [name, value] : report.residuals)
      std::cout << "residual " << name << ": " << value << "\n";
  }
  std::cout << "wall_time_sec: " << report.wall_time_sec << "\n";
  if (!out_file.empty()) ofdma::write_json_file(out_file, ofdma::report_to_json(report));
  return report.status == ofdma::SolveStatus::Infeasible ? kExitInfeasible : kExitOk;
}

int run_reduce(const std::string& variant, const std::string& ratio,
               const std::string& utility_name, const std::string& tdm_file, int size,
               int num_triples, std::uint64_t seed, const std::string& out_file,
               std::string sidecar_file) {
  long c_num = 2, c_den = 1;
  parse_ratio(ratio, c_num, c_den);
  const ofdma::ThreeDMInstance tdm = load_or_generate_tdm(tdm_file, size, num_triples, seed);

  ofdma::ReducedInstanceBundle bundle;
  if (variant == "feasibility") {
    bundle.instance = ofdma::reduce_feasibility(tdm);
    bundle.user_roles.assign(tdm.size, ofdma::NodeRole::TypeI);
    bundle.subcarrier_roles.assign(2 * tdm.size, ofdma::NodeRole::TypeI);
  } else if (variant == "feasibility-c") {
    bundle = ofdma::reduce_feasibility_c(tdm, c_num, c_den);
  } else if (variant == "utility") {
    bundle = ofdma::reduce_utility(tdm, parse_utility_or_throw(utility_name), c_num, c_den);
  } else {
    throw std::invalid_argument("unknown variant '" + variant + "'");
  }

  ofdma::write_json_file(out_file, ofdma::instance_to_json(bundle.instance));
  if (sidecar_file.empty()) sidecar_file = out_file + ".sidecar.json";
  ofdma::write_json_file(sidecar_file, ofdma::bundle_sidecar_json(bundle, tdm, variant));
  std::cout << "instance: " << out_file << " (K=" << bundle.instance.num_users
            << ", N=" << bundle.instance.num_subcarriers << ")\n"
            << "sidecar: " << sidecar_file << "\n";
  return kExitOk;
}

int run_verify(const GlobalFlags& g, const std::string& variant, const std::string& ratio,
               const std::string& utility_name, const std::string& tdm_file, int count,
               std::uint64_t seed, int size_min, int size_max, const std::string& ensemble) {
  ofdma::RoundTripOptions opts;
  parse_ratio(ratio, opts.c_num, opts.c_den);
  opts.kind = parse_utility_or_throw(utility_name);
  opts.exact.enum_budget = static_cast<std::uint64_t>(g.enum_budget);
  opts.exact.eps = g.eps;
  if (variant == "feasibility") {
    opts.variant = ofdma::ReductionVariant::Feasibility;
  } else if (variant == "feasibility-c") {
    opts.variant = ofdma::ReductionVariant::FeasibilityC;
  } else if (variant == "utility") {
    opts.variant = ofdma::ReductionVariant::Utility;
  } else {
    throw std::invalid_argument("unknown variant '" + variant + "'");
  }

  std::vector<ofdma::ThreeDMInstance> instances;
  if (!tdm_file.empty()) {
    instances.push_back(ofdma::tdm_from_json(ofdma::read_json_file(tdm_file)));
  } else {
    if (size_min < 1 || size_max < size_min)
      throw std::invalid_argument("need 1 <= size-min <= size-max");
    if (ensemble != "uniform" && ensemble != "closed")
      throw std::invalid_argument("--ensemble must be uniform or closed");
    for (int i = 0; i < count; ++i) {
      // Independent per-instance streams: reproducible for any worker count.
      std::mt19937_64 rng(seed + static_cast<std::uint64_t>(i));
      const int k = size_min + static_cast<int>(rng() % (size_max - size_min + 1));
      if (ensemble == "closed") {
        // Per-user rectangles: the family on which the reduced instance's
        // feasibility decides the matching question exactly.
        instances.push_back(ofdma::random_closed_3dm(k, rng()));
      } else {
        const int triples = k + static_cast<int>(rng() % (k * k - k + 1));
        instances.push_back(ofdma::random_3dm(k, triples, rng()));
      }
    }
  }

  std::vector<ofdma::RoundTripResult> results(instances.size());
  ofdma::parallel_for(static_cast<int>(instances.size()), g.workers,
                      [&](int i) { results[i] = ofdma::verify_reduction_roundtrip(instances[i], opts); });

  int disagreements = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    std::cout << "instance " << i << ": 3dm=" << (r.tdm_answer ? "yes" : "no")
              << " ofdma=" << (r.ofdma_answer ? "yes" : "no")
              << (r.agree ? " agree" : " DISAGREE") << "\n";
    if (!r.agree) ++disagreements;
  }
  std::cout << results.size() - disagreements << "/" << results.size() << " agree\n";
  return disagreements == 0 ? kExitOk : kExitDisagreement;
}

int run_gen(const ofdma::GenSpec& spec, const std::string& out_file) {
  const ofdma::OfdmaInstance inst = ofdma::generate_instance(spec);
  ofdma::write_json_file(out_file, ofdma::instance_to_json(inst));
  std::cout << "wrote " << out_file << " (K=" << inst.num_users << ", N=" << inst.num_subcarriers
            << ")\n";
  return kExitOk;
}

int run_bench(const GlobalFlags& g, ofdma::GenSpec spec, int count,
              const std::vector<std::string>& methods, const std::string& out_file) {
  struct Row {
    int instance;
    std::string method;
    std::string status;
    double value;
    double wall_time;
  };
  std::vector<Row> rows(count * methods.size());
  std::mutex log_mutex;
  ofdma::parallel_for(count, g.workers, [&](int i) {
    ofdma::GenSpec local = spec;
    local.seed = spec.seed + static_cast<std::uint64_t>(i);
    const ofdma::OfdmaInstance inst = ofdma::generate_instance(local);
    for (std::size_t m = 0; m < methods.size(); ++m) {
      ofdma::SolveOptions opts;
      opts.method = methods[m];
      opts.eps = g.eps;
      opts.enum_budget = static_cast<std::uint64_t>(g.enum_budget);
      opts.c_bound = g.c_bound;
      Row& row = rows[i * methods.size() + m];
      row.instance = i;
      row.method = methods[m];
      try {
        const ofdma::SolveReport rep = ofdma::solve_instance(inst, opts);
        row.status = ofdma::status_name(rep.status);
        row.value = rep.value;
        row.wall_time = rep.wall_time_sec;
      } catch (const ofdma::EnumerationBudgetExceeded&) {
        row.status = "budget_exceeded";
        row.value = 0.0;
        row.wall_time = 0.0;
      } catch (const std::invalid_argument& e) {
        std::lock_guard<std::mutex> lock(log_mutex);
        std::cerr << "instance " << i << " method " << methods[m] << ": " << e.what() << "\n";
        row.status = "error";
        row.value = 0.0;
        row.wall_time = 0.0;
      }
    }
  });

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!out_file.empty()) {
    file.open(out_file);
    if (!file) throw std::runtime_error("cannot open " + out_file + " for writing");
    out = &file;
  }
  *out << "instance,method,status,value,wall_time\n";
  char buf[64];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.6g", row.value, row.wall_time);
    *out << row.instance << "," << row.method << "," << row.status << "," << buf << "\n";
  }
  if (!out_file.empty()) std::cout << "wrote " << out_file << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint subcarrier and power allocation solver suite for multi-user OFDMA"};
  app.require_subcommand(1);

  GlobalFlags g;
  app.add_option("--eps", g.eps, "Water-filling refinement tolerance")->capture_default_str();
  app.add_option("--enum-budget", g.enum_budget,
                 "Cap on (K+1)^N for the exact solvers")->capture_default_str();
  app.add_option("--c-bound", g.c_bound,
                 "Largest N-K handled by the partition-based assignment solver")
      ->capture_default_str();
  app.add_option("--workers", g.workers, "Worker pool size (0 = hardware concurrency)")
      ->capture_default_str();

  // solve
  auto* solve = app.add_subcommand("solve", "Solve an instance file");
  std::string instance_file, method = "auto", solve_utility = "sum", solve_out;
  std::vector<double> weights;
  solve->add_option("instance", instance_file, "Instance JSON file")->required();
  solve->add_option("--method", method, "auto|waterfill|assignment|transport|exact")
      ->capture_default_str();
  solve->add_option("--utility", solve_utility, "Utility kind for utility instances")
      ->capture_default_str();
  solve->add_option("--weights", weights, "Per-user weights (transport)")->delimiter(',');
  solve->add_option("--out", solve_out, "Write the solve report JSON here");

  // reduce
  auto* reduce = app.add_subcommand("reduce", "Emit a hardness-gadget instance");
  std::string variant = "feasibility", ratio = "2", reduce_utility_name = "sum";
  std::string tdm_file, reduce_out = "instance.json", sidecar;
  int size = 4, num_triples = 8;
  std::uint64_t seed = 0;
  reduce->add_option("--variant", variant, "feasibility|feasibility-c|utility")
      ->capture_default_str();
  reduce->add_option("--c", ratio, "Subcarrier/user ratio as NUM or NUM/DEN")
      ->capture_default_str();
  reduce->add_option("--utility", reduce_utility_name, "Utility kind (utility variant)")
      ->capture_default_str();
  reduce->add_option("--tdm", tdm_file, "3DM instance JSON (otherwise random)");
  reduce->add_option("--size", size, "Random 3DM size")->capture_default_str();
  reduce->add_option("--triples", num_triples, "Random 3DM triple count")->capture_default_str();
  reduce->add_option("--seed", seed, "Random 3DM seed")->capture_default_str();
  reduce->add_option("--out", reduce_out, "Instance output file")->capture_default_str();
  reduce->add_option("--sidecar", sidecar, "Sidecar output file (default <out>.sidecar.json)");

  // verify
  auto* verify = app.add_subcommand("verify", "Round-trip a reduction against the exact solver");
  std::string v_variant = "feasibility", v_ratio = "2", v_utility = "sum", v_tdm;
  std::string v_ensemble = "closed";
  int v_count = 20, v_size_min = 2, v_size_max = 4;
  std::uint64_t v_seed = 0;
  verify->add_option("--variant", v_variant, "feasibility|feasibility-c|utility")
      ->capture_default_str();
  verify->add_option("--c", v_ratio, "Ratio for feasibility-c/utility")->capture_default_str();
  verify->add_option("--utility", v_utility, "Utility kind (utility variant)")
      ->capture_default_str();
  verify->add_option("--tdm", v_tdm, "Verify one 3DM instance file");
  verify->add_option("--count", v_count, "Number of random instances")->capture_default_str();
  verify->add_option("--seed", v_seed, "Base seed")->capture_default_str();
  verify->add_option("--size-min", v_size_min, "Smallest 3DM size")->capture_default_str();
  verify->add_option("--size-max", v_size_max, "Largest 3DM size")->capture_default_str();
  verify->add_option("--ensemble", v_ensemble,
                     "Instance family: closed (per-user rectangles, exact equivalence) or "
                     "uniform (arbitrary relations; mixed projections can disagree)")
      ->capture_default_str();

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a seeded random instance");
  ofdma::GenSpec spec;
  std::string gen_kind = "minpower", gen_out = "instance.json";
  gen->add_option("--K", spec.num_users, "Users")->capture_default_str();
  gen->add_option("--N", spec.num_subcarriers, "Subcarriers")->capture_default_str();
  gen->add_option("--kind", gen_kind, "minpower|utility|sumrate")->capture_default_str();
  gen->add_option("--seed", spec.seed, "Seed")->capture_default_str();
  gen->add_option("--gain-lo", spec.gain_lo)->capture_default_str();
  gen->add_option("--gain-hi", spec.gain_hi)->capture_default_str();
  gen->add_option("--noise-lo", spec.noise_lo)->capture_default_str();
  gen->add_option("--noise-hi", spec.noise_hi)->capture_default_str();
  gen->add_option("--budget-lo", spec.budget_lo)->capture_default_str();
  gen->add_option("--budget-hi", spec.budget_hi)->capture_default_str();
  gen->add_option("--target-scale", spec.target_scale, "Rate target scale (minpower)")
      ->capture_default_str();
  gen->add_option("--out", gen_out, "Output file")->capture_default_str();

  // bench
  auto* bench = app.add_subcommand("bench", "Run a method matrix over a random ensemble");
  ofdma::GenSpec bench_spec;
  std::string bench_kind = "minpower", bench_out;
  std::vector<std::string> bench_methods{"auto", "exact"};
  int bench_count = 10;
  bench->add_option("--K", bench_spec.num_users, "Users")->capture_default_str();
  bench->add_option("--N", bench_spec.num_subcarriers, "Subcarriers")->capture_default_str();
  bench->add_option("--kind", bench_kind, "minpower|utility|sumrate")->capture_default_str();
  bench->add_option("--count", bench_count, "Ensemble size")->capture_default_str();
  bench->add_option("--seed", bench_spec.seed, "Base seed")->capture_default_str();
  bench->add_option("--methods", bench_methods, "Methods to compare")->delimiter(',');
  bench->add_option("--out", bench_out, "CSV output file (default stdout)");

  for (CLI::App* sub : app.get_subcommands({}))
    sub->fallthrough();  // let global flags appear after the subcommand
  CLI11_PARSE(app, argc, argv);

  auto parse_kind = [](const std::string& name) {
    if (name == "minpower") return ofdma::InstanceKind::MinPower;
    if (name == "utility") return ofdma::InstanceKind::Utility;
    if (name == "sumrate") return ofdma::InstanceKind::SumRateNoBudget;
    throw std::invalid_argument("unknown instance kind '" + name + "'");
  };

  try {
    if (solve->parsed())
      return run_solve(g, instance_file, method, solve_utility, weights, solve_out);
    if (reduce->parsed())
      return run_reduce(variant, ratio, reduce_utility_name, tdm_file, size, num_triples, seed,
                        reduce_out, sidecar);
    if (verify->parsed())
      return run_verify(g, v_variant, v_ratio, v_utility, v_tdm, v_count, v_seed, v_size_min,
                        v_size_max, v_ensemble);
    if (gen->parsed()) {
      spec.kind = parse_kind(gen_kind);
      return run_gen(spec, gen_out);
    }
    if (bench->parsed()) {
      bench_spec.kind = parse_kind(bench_kind);
      return run_bench(g, bench_spec, bench_count, bench_methods, bench_out);
    }
  } catch (const ofdma::EnumerationBudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const ofdma::SizeBoundExceeded& e) {
    std::cerr << "size bound exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}
