// hgci: confidence tables for the hypergeometric success parameter.
//
// Subcommands:
//   ci     one confidence set, printed as "lo hi"
//   table  full table, one row per observed count
//   audit  coverage / size / asymmetry summary
//   bench  construction-time grid, CSV or JSON lines
//
// All computation is deterministic; --seedless merely asserts that (there
// is no RNG anywhere to seed).  Exit codes: 0 success, 2 invalid
// arguments, 3 construction failure, 4 exact-arithmetic bound exceeded.
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hgci/bench.hpp"
#include "hgci/errors.hpp"
#include "hgci/hg_dist.hpp"
#include "hgci/procedures.hpp"

namespace {

using nlohmann::ordered_json;

std::string fmt_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fmt_percent(double proportion) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", 100.0 * proportion);
  return buf;
}

struct CommonArgs {
  std::string method = "symmetric_opt";
  long N = 0;
  long n = 0;
  double alpha = 0.05;
  std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonArgs& args, bool& seedless) {
  cmd->add_option("--method", args.method,
                  "lco_style | symmetric_opt | tail_baseline")
      ->required();
  cmd->add_option("--N", args.N, "population size")->required();
  cmd->add_option("--n", args.n, "sample size")->required();
  cmd->add_option("--alpha", args.alpha, "error level in (0, 1)")
      ->capture_default_str();
  cmd->add_option("--format", args.format, "csv | json-lines")
      ->check(CLI::IsMember({"csv", "json-lines"}))
      ->capture_default_str();
  cmd->add_flag("--seedless", seedless,
                "assert deterministic operation (always true; no RNG)");
}

ordered_json set_to_json(const hgci::ProcedureTable& t,
                         const hgci::ConfidenceSet& s) {
  ordered_json rec;
  rec["method"] = hgci::method_name(t.method);
  rec["N"] = t.design.N;
  rec["n"] = t.design.n;
  rec["alpha"] = t.design.alpha;
  rec["x"] = s.x;
  rec["lo"] = s.lo;
  rec["hi"] = s.hi;
  rec["gap_flag"] = !s.is_interval;
  rec["members"] = s.members;
  return rec;
}

int cmd_ci(const CommonArgs& args, long x) {
  hgci::Design d{args.N, args.n, args.alpha};
  hgci::validate(d);
  if (x < 0 || x > d.n)
    throw std::invalid_argument("ci: x must satisfy 0 <= x <= n");
  hgci::ProcedureTable t =
      hgci::make_table(hgci::parse_method(args.method), d);
  const hgci::ConfidenceSet& s = t.sets[static_cast<std::size_t>(x)];
  if (args.format == "json-lines")
    std::printf("%s\n", set_to_json(t, s).dump().c_str());
  else
    std::printf("%ld %ld\n", s.lo, s.hi);
  return 0;
}

int cmd_table(const CommonArgs& args) {
  hgci::Design d{args.N, args.n, args.alpha};
  hgci::validate(d);
  hgci::ProcedureTable t =
      hgci::make_table(hgci::parse_method(args.method), d);
  if (args.format == "json-lines") {
    for (const hgci::ConfidenceSet& s : t.sets)
      std::printf("%s\n", set_to_json(t, s).dump().c_str());
  } else {
    std::printf("x,lo,hi,gap_flag\n");
    for (const hgci::ConfidenceSet& s : t.sets)
      std::printf("%ld,%ld,%ld,%s\n", s.x, s.lo, s.hi,
                  s.is_interval ? "false" : "true");
  }
  return 0;
}

int cmd_audit(const CommonArgs& args) {
  hgci::Design d{args.N, args.n, args.alpha};
  hgci::validate(d);
  hgci::ProcedureTable t =
      hgci::make_table(hgci::parse_method(args.method), d);
  hgci::AuditReport a = hgci::full_audit(t);
  if (args.format == "json-lines") {
    ordered_json rec;
    rec["method"] = hgci::method_name(t.method);
    rec["N"] = d.N;
    rec["n"] = d.n;
    rec["alpha"] = d.alpha;
    rec["min_coverage"] = a.min_coverage;
    rec["argmin_M"] = a.argmin_M;
    rec["total_size"] = a.total_size;
    rec["mean_length"] = a.mean_length;
    rec["asymmetry_proportion"] = a.asymmetry_proportion;
    rec["asymmetry_percent"] = fmt_percent(a.asymmetry_proportion);
    std::printf("%s\n", rec.dump().c_str());
  } else {
    std::printf(
        "method,N,n,alpha,min_coverage,argmin_M,total_size,mean_length,"
        "asymmetry_proportion,asymmetry_percent\n");
    std::printf("%s,%ld,%ld,%s,%s,%ld,%lld,%s,%s,%s\n",
                hgci::method_name(t.method), d.N, d.n,
                fmt_g(d.alpha).c_str(), fmt_g(a.min_coverage).c_str(),
                a.argmin_M, a.total_size, fmt_g(a.mean_length).c_str(),
                fmt_g(a.asymmetry_proportion).c_str(),
                fmt_percent(a.asymmetry_proportion).c_str());
  }
  return 0;
}

struct BenchArgs {
  std::vector<std::string> methods{"symmetric_opt", "lco_style"};
  std::vector<long> N_list{200, 400};
  std::string n_rule = "half";
  std::vector<long> n_list;
  double alpha = 0.05;
  int repeats = 3;
  bool allow_long_runs = false;
  bool parallel_cells = false;
  std::string format = "csv";
};

int cmd_bench(const BenchArgs& args) {
  hgci::BenchSpec spec;
  spec.methods.clear();
  for (const std::string& m : args.methods)
    spec.methods.push_back(hgci::parse_method(m));
  spec.N_list = args.N_list;
  spec.n_rule = hgci::parse_n_rule(args.n_rule);
  spec.n_list = args.n_list;
  spec.alpha = args.alpha;
  spec.repeats = args.repeats;
  spec.allow_long_runs = args.allow_long_runs;
  spec.parallel_cells = args.parallel_cells;

  std::vector<hgci::BenchRecord> records = hgci::run_bench(spec);
  if (args.format == "csv") std::printf("%s\n", hgci::kBenchCsvHeader);
  for (const hgci::BenchRecord& rec : records) {
    if (rec.failed)
      std::fprintf(stderr, "bench: %s N=%ld n=%ld failed: %s\n",
                   rec.method.c_str(), rec.N, rec.n, rec.error.c_str());
    if (args.format == "json-lines") {
      ordered_json row;
      row["method"] = rec.method;
      row["N"] = rec.N;
      row["n"] = rec.n;
      row["alpha"] = rec.alpha;
      row["wall_time_seconds"] = rec.wall_time_seconds;
      row["total_size"] = rec.total_size;
      row["min_coverage"] = rec.min_coverage;
      row["asymmetry_proportion"] = rec.asymmetry_proportion;
      if (rec.failed) row["error"] = rec.error;
      std::printf("%s\n", row.dump().c_str());
    } else {
      std::printf("%s,%ld,%ld,%s,%s,%lld,%s,%s\n", rec.method.c_str(), rec.N,
                  rec.n, fmt_g(rec.alpha).c_str(),
                  fmt_g(rec.wall_time_seconds).c_str(), rec.total_size,
                  fmt_g(rec.min_coverage).c_str(),
                  fmt_g(rec.asymmetry_proportion).c_str());
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"confidence tables for the hypergeometric success parameter"};
  app.require_subcommand(1);
  bool seedless = false;

  CommonArgs ci_args;
  long ci_x = 0;
  CLI::App* ci = app.add_subcommand("ci", "one confidence set");
  add_common(ci, ci_args, seedless);
  ci->add_option("--x", ci_x, "observed count")->required();

  CommonArgs table_args;
  CLI::App* table = app.add_subcommand("table", "full confidence table");
  add_common(table, table_args, seedless);

  CommonArgs audit_args;
  CLI::App* audit = app.add_subcommand("audit", "coverage/size/asymmetry");
  add_common(audit, audit_args, seedless);

  BenchArgs bench_args;
  CLI::App* bench = app.add_subcommand("bench", "construction-time grid");
  bench->add_option("--method", bench_args.methods,
                    "methods to benchmark (repeatable)")
      ->delimiter(',')
      ->capture_default_str();
  bench->add_option("--N", bench_args.N_list, "population sizes (repeatable)")
      ->delimiter(',')
      ->capture_default_str();
  bench->add_option("--n-rule", bench_args.n_rule,
                    "half | quarter | explicit")
      ->check(CLI::IsMember({"half", "quarter", "explicit"}))
      ->capture_default_str();
  bench->add_option("--n", bench_args.n_list,
                    "sample sizes (with --n-rule explicit, one per N)")
      ->delimiter(',');
  bench->add_option("--alpha", bench_args.alpha, "error level in (0, 1)")
      ->capture_default_str();
  bench->add_option("--repeats", bench_args.repeats,
                    "timed repetitions per cell (median reported)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench->add_flag("--allow-long-runs", bench_args.allow_long_runs,
                  "permit lco_style cells with N >= 600 at n = N/2");
  bench->add_flag("--parallel-cells", bench_args.parallel_cells,
                  "run cells concurrently (timings may contend)");
  bench->add_option("--format", bench_args.format, "csv | json-lines")
      ->check(CLI::IsMember({"csv", "json-lines"}))
      ->capture_default_str();
  bench->add_flag("--seedless", seedless,
                  "assert deterministic operation (always true; no RNG)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }

  try {
    if (ci->parsed()) return cmd_ci(ci_args, ci_x);
    if (table->parsed()) return cmd_table(table_args);
    if (audit->parsed()) return cmd_audit(audit_args);
    if (bench->parsed()) return cmd_bench(bench_args);
  } catch (const hgci::oracle_bound_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const hgci::construction_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::logic_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
