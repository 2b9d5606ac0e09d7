// Command-line front end: synthetic data generation, factorization,
// evaluation, and the benchmark grid.

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sqmf/factorize.hpp"
#include "sqmf/io.hpp"
#include "sqmf/metrics.hpp"
#include "sqmf/synth.hpp"

namespace {

using nlohmann::json;
using namespace sqmf;

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

std::string fmt6(double v) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(6);
  os << v;
  return os.str();
}

// ---------------------------------------------------------------- synth ---

struct SynthArgs {
  SynthConfig cfg;
  bool same_intensity = false;
  std::string out = "synth";
};

int run_synth(const SynthArgs& args) {
  const SynthBundle bundle = args.same_intensity
                                 ? gen_same_intensity(args.cfg)
                                 : gen_separable(args.cfg);
  write_qmat(args.out + ".qmat", bundle.observed);
  write_qmat(args.out + "_W.qmat", bundle.w_star);
  write_csv(args.out + "_H.csv", bundle.h_star);

  json sidecar;
  sidecar["k_star"] = bundle.k_star;
  sidecar["m"] = bundle.config.m;
  sidecar["n"] = bundle.config.n;
  sidecar["r"] = bundle.config.r;
  sidecar["phi"] = bundle.config.phi;
  sidecar["eps"] = bundle.config.eps;
  sidecar["seed"] = bundle.config.seed;
  sidecar["alpha"] = bundle.config.alpha;
  sidecar["beta"] = bundle.config.beta;
  write_text_atomic(args.out + "_K.json", sidecar.dump(2) + "\n");
  std::cout << "wrote " << args.out << ".qmat (" << bundle.observed.rows()
            << "x" << bundle.observed.cols() << ") and ground-truth sidecars\n";
  return 0;
}

// ------------------------------------------------------------ factorize ---

struct FactorizeArgs {
  std::string method = "sqmf";
  std::string input;
  int rank = 1;
  NnlsOptions nnls;
  int restarts = 10;
  std::uint64_t seed = 0;
  std::string out = "fac";
};

Factorization run_method(Method method, const QuaternionMatrix& m,
                         const FactorizeArgs& args) {
  switch (method) {
    case Method::kSqmf:
      return sqmf::sqmf(m, args.rank, args.nnls);
    case Method::kSpaStar:
      return spa_star(m, args.rank, args.nnls);
    case Method::kQnmf:
    case Method::kImQnmf: {
      QnmfOptions opts;
      opts.rank = args.rank;
      opts.restarts = args.restarts;
      opts.nnls = args.nnls;
      opts.seed = args.seed;
      return method == Method::kQnmf ? qnmf(m, opts) : imqnmf(m, opts);
    }
  }
  throw DomainError("unreachable");
}

int run_factorize(const FactorizeArgs& args) {
  const auto method = parse_method(args.method);
  if (!method) {
    std::cerr << "unknown method '" << args.method << "'\n";
    return kExitConfig;
  }
  const QuaternionMatrix m = read_qmat(args.input);
  const double t0 = now_seconds();
  const Factorization fac = run_method(*method, m, args);
  const double elapsed = now_seconds() - t0;

  write_qmat(args.out + "_W.qmat", fac.w);
  write_csv(args.out + "_H.csv", fac.h);

  json trace;
  trace["method"] = method_name(fac.method);
  trace["objective"] = fac.trace.objective;
  trace["delta"] = fac.trace.delta;
  trace["sweeps"] = fac.trace.sweeps;
  trace["failed_restarts"] = fac.trace.failed_restarts;
  trace["time_s"] = elapsed;
  if (fac.selection) {
    trace["selection"] = fac.selection->indices;
    trace["step_norms"] = fac.selection->step_norms;
    trace["skipped"] = fac.selection->skipped;
  }
  write_text_atomic(args.out + "_trace.json", trace.dump(2) + "\n");
  std::cout << "appro = " << fmt6(appro(m, fac.w, fac.h)) << " (" << elapsed
            << " s)\n";
  return 0;
}

// ----------------------------------------------------------------- eval ---

struct EvalArgs {
  std::string input;
  std::string w_path;
  std::string h_path;
  std::string w_star_path;
  std::string h_star_path;
  std::string trace_path;
  std::string k_star_path;
  std::string out_csv;
  std::string out_json;
};

int run_eval(const EvalArgs& args) {
  const QuaternionMatrix m = read_qmat(args.input);
  const QuaternionMatrix w = read_qmat(args.w_path);
  const MatrixXd h = read_csv(args.h_path);

  EvalReport report;
  report.method = "eval";
  report.appro = appro(m, w, h);
  for (int l = 0; l < 4; ++l) report.app_s[l] = appro_component(m, w, h, l);
  if (!args.w_star_path.empty())
    report.app_w = app_w(read_qmat(args.w_star_path), w);
  if (!args.h_star_path.empty())
    report.app_h = app_h(read_csv(args.h_star_path), h);

  std::vector<int> selection;
  if (!args.trace_path.empty()) {
    std::ifstream in(args.trace_path);
    if (!in) throw IoError("cannot open " + args.trace_path);
    json trace = json::parse(in);
    if (trace.contains("method")) report.method = trace["method"];
    if (trace.contains("selection"))
      selection = trace["selection"].get<std::vector<int>>();
  }
  if (!args.k_star_path.empty() && !selection.empty()) {
    std::ifstream in(args.k_star_path);
    if (!in) throw IoError("cannot open " + args.k_star_path);
    json sidecar = json::parse(in);
    report.accuracy =
        accuracy(sidecar["k_star"].get<std::vector<int>>(), selection);
  }

  // selection consistency: W must be a bit-identical copy of M(:,K)
  bool selection_consistent = true;
  if (!selection.empty()) {
    const QuaternionMatrix expect = m.select_columns(selection);
    for (int l = 0; l < 4 && selection_consistent; ++l)
      selection_consistent = expect.component(l).cwiseEqual(w.component(l)).all();
    if (!selection_consistent)
      std::cerr << "warning: W is not a column copy of M at the recorded "
                   "selection\n";
  }

  const std::string row = EvalReport::csv_header() + "\n" + report.csv_row() + "\n";
  std::cout << row;
  if (!args.out_csv.empty()) write_text_atomic(args.out_csv, row);
  if (!args.out_json.empty()) {
    json j = json::parse(report.to_json());
    if (!selection.empty()) j["selection_consistent"] = selection_consistent;
    write_text_atomic(args.out_json, j.dump(2) + "\n");
  }
  return 0;
}

// ---------------------------------------------------------------- bench ---

struct BenchArgs {
  int m = 30;
  int n = 100;
  int r = 5;
  std::vector<double> eps_levels{0.0, 0.05, 0.1};
  int seeds = 10;
  std::uint64_t base_seed = 0;
  std::vector<std::string> methods{"sqmf", "spa-star", "qnmf", "imqnmf"};
  int restarts = 10;
  bool same_intensity = false;
  std::string out = "bench.csv";
  std::string accuracy_out;
};

struct BenchCell {
  Method method;
  double eps;
  int seed_index;
  bool failed = false;
  EvalReport report;
};

void run_cell(const BenchArgs& args, BenchCell& cell) {
  SynthConfig cfg;
  cfg.m = args.m;
  cfg.n = args.n;
  cfg.r = args.r;
  cfg.eps = cell.eps;
  cfg.seed = args.base_seed + static_cast<std::uint64_t>(cell.seed_index);
  const SynthBundle bundle =
      args.same_intensity ? gen_same_intensity(cfg) : gen_separable(cfg);

  FactorizeArgs fargs;
  fargs.rank = args.r;
  fargs.restarts = args.restarts;
  fargs.seed = cfg.seed;
  const double t0 = now_seconds();
  Factorization fac;
  try {
    fac = run_method(cell.method, bundle.observed, fargs);
  } catch (const std::runtime_error&) {
    cell.failed = true;
    return;
  }
  cell.report.wall_time_s = now_seconds() - t0;
  cell.report.method = method_name(cell.method);
  cell.report.appro = appro(bundle.observed, fac.w, fac.h);
  for (int l = 0; l < 4; ++l)
    cell.report.app_s[l] = appro_component(bundle.observed, fac.w, fac.h, l);
  cell.report.app_w = app_w(bundle.w_star, fac.w);
  cell.report.app_h = app_h(bundle.h_star, fac.h);
  if (fac.selection)
    cell.report.accuracy = accuracy(bundle.k_star, fac.selection->indices);
}

int bench_threads() {
  if (const char* env = std::getenv("SQMF_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return 1;
}

int run_bench(const BenchArgs& args) {
  std::vector<BenchCell> cells;
  for (const auto& name : args.methods) {
    const auto method = parse_method(name);
    if (!method) {
      std::cerr << "unknown method '" << name << "'\n";
      return kExitConfig;
    }
    for (double eps : args.eps_levels)
      for (int s = 0; s < args.seeds; ++s)
        cells.push_back({*method, eps, s});
  }

  const int threads = std::min<int>(bench_threads(), static_cast<int>(cells.size()));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) break;
      run_cell(args, cells[i]);
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // mean over seeds per (method, eps), table-ordered columns
  std::ostringstream table;
  table << "method,eps,appro,app_s0,app_s1,app_s2,app_s3,appW,appH,time_s,"
           "failed\n";
  std::ostringstream acc;
  acc << "method,eps,seed,accuracy\n";
  for (const auto& name : args.methods) {
    const Method method = *parse_method(name);
    for (double eps : args.eps_levels) {
      double sums[9] = {0};
      int counts[9] = {0};
      int failed = 0;
      for (const auto& cell : cells) {
        if (cell.method != method || cell.eps != eps) continue;
        if (cell.failed) {
          ++failed;
          continue;
        }
        auto add = [&](int slot, const std::optional<double>& v) {
          if (v) {
            sums[slot] += *v;
            ++counts[slot];
          }
        };
        sums[0] += cell.report.appro;
        ++counts[0];
        for (int l = 0; l < 4; ++l) add(1 + l, cell.report.app_s[l]);
        add(5, cell.report.app_w);
        add(6, cell.report.app_h);
        sums[7] += cell.report.wall_time_s;
        ++counts[7];
        if (cell.report.accuracy) {
          acc << method_name(method) << ',' << eps << ',' << cell.seed_index
              << ',' << fmt6(*cell.report.accuracy) << '\n';
        }
      }
      table << method_name(method) << ',' << eps;
      for (int slot = 0; slot < 8; ++slot) {
        table << ',';
        if (counts[slot] > 0)
          table << fmt6(sums[slot] / counts[slot]);
        else
          table << "n/a";
      }
      table << ',' << failed << '\n';
    }
  }
  write_text_atomic(args.out, table.str());
  if (!args.accuracy_out.empty()) write_text_atomic(args.accuracy_out, acc.str());
  std::cout << table.str();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Separable quaternion matrix factorization toolkit"};
  app.require_subcommand(1);

  SynthArgs synth_args;
  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic bundle");
  synth_cmd->add_option("--m", synth_args.cfg.m, "spectral bands");
  synth_cmd->add_option("--n", synth_args.cfg.n, "pixels");
  synth_cmd->add_option("--r", synth_args.cfg.r, "sources");
  synth_cmd->add_option("--phi", synth_args.cfg.phi, "degree of polarization");
  synth_cmd->add_option("--eps", synth_args.cfg.eps, "noise level");
  synth_cmd->add_option("--seed", synth_args.cfg.seed, "rng seed");
  synth_cmd->add_flag("--same-intensity", synth_args.same_intensity,
                      "10-source repeated-intensity construction");
  synth_cmd->add_option("--out", synth_args.out, "output path prefix");

  FactorizeArgs fac_args;
  auto* fac_cmd = app.add_subcommand("factorize", "factor a QMAT matrix");
  fac_cmd->add_option("--method", fac_args.method,
                      "sqmf | spa-star | qnmf | imqnmf");
  fac_cmd->add_option("--input", fac_args.input, "input .qmat")->required();
  fac_cmd->add_option("--r", fac_args.rank, "rank")->required();
  fac_cmd->add_option("--xi", fac_args.nnls.xi, "positivity floor");
  fac_cmd->add_option("--max-iter", fac_args.nnls.max_iter, "sweep cap");
  fac_cmd->add_option("--eps0", fac_args.nnls.eps0, "stopping threshold");
  fac_cmd->add_option("--restarts", fac_args.restarts, "qnmf/imqnmf restarts");
  fac_cmd->add_option("--seed", fac_args.seed, "restart rng seed");
  fac_cmd->add_option("--out", fac_args.out, "output path prefix");

  EvalArgs eval_args;
  auto* eval_cmd = app.add_subcommand("eval", "score a factorization");
  // free the short -h so --h can name the activation-matrix input
  eval_cmd->set_help_flag("--help", "print this help message and exit");
  eval_cmd->add_option("--input", eval_args.input, "input .qmat")->required();
  eval_cmd->add_option("--w", eval_args.w_path, "W .qmat")->required();
  eval_cmd->add_option("--h", eval_args.h_path, "H .csv")->required();
  eval_cmd->add_option("--wstar", eval_args.w_star_path, "ground-truth W .qmat");
  eval_cmd->add_option("--hstar", eval_args.h_star_path, "ground-truth H .csv");
  eval_cmd->add_option("--trace", eval_args.trace_path, "factorize trace .json");
  eval_cmd->add_option("--kstar", eval_args.k_star_path, "ground-truth K .json");
  eval_cmd->add_option("--out-csv", eval_args.out_csv, "report CSV path");
  eval_cmd->add_option("--out-json", eval_args.out_json, "report JSON path");

  BenchArgs bench_args;
  auto* bench_cmd = app.add_subcommand("bench", "methods x noise grid");
  bench_cmd->add_option("--m", bench_args.m, "spectral bands");
  bench_cmd->add_option("--n", bench_args.n, "pixels");
  bench_cmd->add_option("--r", bench_args.r, "sources");
  bench_cmd->add_option("--eps", bench_args.eps_levels, "noise levels");
  bench_cmd->add_option("--seeds", bench_args.seeds, "repetitions");
  bench_cmd->add_option("--seed", bench_args.base_seed, "base seed");
  bench_cmd->add_option("--methods", bench_args.methods, "methods to run");
  bench_cmd->add_option("--restarts", bench_args.restarts, "qnmf restarts");
  bench_cmd->add_flag("--same-intensity", bench_args.same_intensity,
                      "use the 10-source repeated-intensity data");
  bench_cmd->add_option("--out", bench_args.out, "aggregated CSV path");
  bench_cmd->add_option("--accuracy-out", bench_args.accuracy_out,
                        "per-seed accuracy CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitConfig;
  }

  try {
    if (*synth_cmd) return run_synth(synth_args);
    if (*fac_cmd) return run_factorize(fac_args);
    if (*eval_cmd) return run_eval(eval_args);
    return run_bench(bench_args);
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << " (offset " << e.offset << ")\n";
    return kExitIo;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kExitIo;
  } catch (const RankDeficiencyError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const SingularityError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const ZeroSourceError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const ConvergenceError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const GenerationError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}
