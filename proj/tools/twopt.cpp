// twopt: command-line front end for instance generation, 2-opt runs, exact
// solvers, the layered lower-bound instance, verification suites and sweeps.
//
// Exit codes: 0 success, 1 validation error, 2 verification failure, 3 I/O error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "twopt/error.hpp"
#include "twopt/exact.hpp"
#include "twopt/harness.hpp"
#include "twopt/instance.hpp"
#include "twopt/kernels.hpp"
#include "twopt/lower_bound.hpp"
#include "twopt/rng.hpp"
#include "twopt/stochastic.hpp"
#include "twopt/tour.hpp"
#include "twopt/verify.hpp"

using namespace twopt;

namespace {

constexpr int kVerificationFailed = 2;

void emit_json(const nlohmann::json& j, const std::string& out) {
  if (out.empty()) {
    std::cout << j.dump(1) << '\n';
  } else {
    write_json_file(out, j);
  }
}

PointSet load_origins(const std::string& spec, std::size_t n, std::size_t dim, std::uint64_t seed) {
  if (spec.rfind("file:", 0) == 0) {
    const auto j = read_json_file(spec.substr(5));
    PointSet pts = point_set_from_json(j.is_object() ? j.at("origins") : j);
    require(pts.size() == n || n == 0, "origin file holds " + std::to_string(pts.size()) +
                                           " points but --n is " + std::to_string(n));
    require(dim == 0 || pts.dim() == dim, "origin file dimension does not match --dim");
    return pts;
  }
  require(n >= 1 && dim >= 1, "gen needs --n >= 1 and --dim >= 1");
  return make_origins(parse_origin_family(spec), n, dim, seed);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"2-opt smoothed-analysis toolkit"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (default: TWOPT_THREADS or all cores)");

  // gen
  auto* gen = app.add_subcommand("gen", "generate a perturbed instance");
  std::size_t gen_n = 0, gen_dim = 2;
  double gen_sigma = 0.0;
  std::uint64_t gen_seed = 0;
  std::string gen_origins = "uniform", gen_out;
  gen->add_option("--n", gen_n, "number of points");
  gen->add_option("--dim", gen_dim, "dimension");
  gen->add_option("--sigma", gen_sigma, "Gaussian standard deviation");
  gen->add_option("--seed", gen_seed, "seed");
  gen->add_option("--origins", gen_origins, "uniform|grid|single-point|file:PATH");
  gen->add_option("-o,--output", gen_out, "instance JSON")->required();

  // run
  auto* run = app.add_subcommand("run", "run 2-opt on an instance");
  std::string run_inst, run_metric = "l2", run_init = "random", run_pivot = "first", run_out;
  double run_eps = 1e-12;
  std::uint64_t run_seed = 0;
  bool run_record = false;
  run->add_option("--instance", run_inst, "instance JSON")->required();
  run->add_option("--metric", run_metric, "l1|l2|l2sq");
  run->add_option("--init", run_init, "random|nn|greedy");
  run->add_option("--pivot", run_pivot, "first|best|random");
  run->add_option("--eps", run_eps, "improvement threshold");
  run->add_option("--seed", run_seed, "seed for random init / pivot");
  run->add_flag("--record-changes", run_record, "store every applied 2-change");
  run->add_option("-o,--output", run_out, "run record JSON (stdout if omitted)");

  // exact
  auto* exact = app.add_subcommand("exact", "exact optimum of a small instance");
  std::string ex_inst, ex_algo = "heldkarp", ex_metric = "l2", ex_out;
  exact->add_option("--instance", ex_inst, "instance JSON")->required();
  exact->add_option("--algo", ex_algo, "heldkarp|brute");
  exact->add_option("--metric", ex_metric, "l1|l2|l2sq");
  exact->add_option("-o,--output", ex_out, "result JSON (stdout if omitted)");

  // ratio
  auto* ratio = app.add_subcommand("ratio", "2OPT/OPT against sigma (Held-Karp reference)");
  RatioConfig rc;
  std::string rc_grid = "0.01,0.03,0.1,0.3,1", rc_out, rc_origins = "grid", rc_pivot = "first";
  ratio->add_option("--n", rc.n, "points per instance (<= 20)");
  ratio->add_option("--sigma-grid", rc_grid, "comma-separated sigmas");
  ratio->add_option("--restarts", rc.restarts, "random restarts per instance");
  ratio->add_option("--seeds", rc.seeds, "instances per sigma");
  ratio->add_option("--seed", rc.seed, "base seed");
  ratio->add_option("--origins", rc_origins, "uniform|grid|single-point");
  ratio->add_option("--pivot", rc_pivot, "first|best|random");
  ratio->add_option("-o,--output", rc_out, "CSV output")->required();

  // lb
  auto* lb = app.add_subcommand("lb", "layered lower-bound instance");
  lb->require_subcommand(1);
  auto* lb_build = lb->add_subcommand("build", "build and perturb the layered instance");
  int lb_p = 3;
  std::optional<int> lb_t;
  double lb_sigma = 0.0;
  std::uint64_t lb_seed = 0;
  std::string lb_out;
  lb_build->add_option("--p", lb_p, "odd p in [3, 5]");
  lb_build->add_option("--t", lb_t, "odd layer count override");
  lb_build->add_option("--sigma", lb_sigma, "perturbation standard deviation")->required();
  lb_build->add_option("--seed", lb_seed, "perturbation seed");
  lb_build->add_option("-o,--output", lb_out, "layered instance JSON")->required();
  auto* lb_certify = lb->add_subcommand("certify", "check containers and 2-optimality of the long tour");
  std::string lbc_inst;
  double lbc_eps = 1e-12;
  lb_certify->add_option("--instance", lbc_inst, "layered instance JSON")->required();
  lb_certify->add_option("--eps", lbc_eps, "gain threshold");
  auto* lb_ratio = lb->add_subcommand("ratio", "L(tour) / (2 MST) for the long tour");
  std::string lbr_inst;
  lb_ratio->add_option("--instance", lbr_inst, "layered instance JSON")->required();

  // verify
  auto* verify = app.add_subcommand("verify", "run a bound verification suite");
  std::string v_suite;
  std::uint64_t v_samples = 1'000'000, v_seed = 0;
  verify->add_option("--suite", v_suite, "ball|line|dominance|chi|integral|tail|linked")->required();
  verify->add_option("--samples", v_samples, "Monte Carlo samples per check");
  verify->add_option("--seed", v_seed, "seed");

  // sweep / replay / plot-data
  auto* sweep = app.add_subcommand("sweep", "run a parameter sweep");
  std::string sw_cfg, sw_out;
  sweep->add_option("--config", sw_cfg, "key=value config")->required();
  sweep->add_option("-o,--output", sw_out, "CSV output (overrides the config's output key)");
  auto* replay = app.add_subcommand("replay", "recompute one sweep row");
  std::string rp_cfg;
  std::size_t rp_row = 0;
  replay->add_option("--config", rp_cfg, "key=value config")->required();
  replay->add_option("--row-id", rp_row, "row id")->required();
  auto* plot = app.add_subcommand("plot-data", "long-format CSV from a sweep CSV");
  std::string pd_in, pd_out;
  plot->add_option("--input", pd_in, "sweep CSV")->required();
  plot->add_option("-o,--output", pd_out, "long-format CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ErrorKind::validation);
  }

  try {
    if (threads > 0) kernels::set_threads(threads);

    if (*gen) {
      require(gen_sigma >= 0.0, "--sigma must be >= 0");
      const PointSet origins = load_origins(gen_origins, gen_n, gen_dim, derive_seed(gen_seed, 0));
      Instance inst = perturb(origins, gen_sigma, derive_seed(gen_seed, 1));
      inst.seed = gen_seed;
      write_json_file(gen_out, instance_to_json(inst));
      return 0;
    }
    if (*run) {
      const Instance inst = instance_from_json(read_json_file(run_inst));
      RunOptions opts;
      opts.init = parse_init_rule(run_init);
      opts.pivot = parse_pivot(run_pivot);
      opts.eps = run_eps;
      opts.seed = run_seed;
      opts.record_changes = run_record;
      const auto rec = run_two_opt(inst, parse_metric(run_metric), opts);
      emit_json(run_record_to_json(rec), run_out);
      return 0;
    }
    if (*exact) {
      const Instance inst = instance_from_json(read_json_file(ex_inst));
      const auto r = solve_exact(inst, parse_metric(ex_metric), parse_exact_algorithm(ex_algo));
      emit_json(exact_result_to_json(r), ex_out);
      return 0;
    }
    if (*ratio) {
      rc.sigmas = parse_double_list(rc_grid);
      rc.origins = parse_origin_family(rc_origins);
      rc.pivot = parse_pivot(rc_pivot);
      const auto rows = run_ratio(rc);
      write_text_file(rc_out, ratio_csv(rows));
      const auto summary = summarize_ratio(rc, rows);
      std::cout << "sigma,mean_ratio,standard_error,max_ratio\n";
      for (const auto& s : summary) {
        std::cout << format_double(s.sigma) << ',' << format_double(s.mean_ratio) << ','
                  << format_double(s.standard_error) << ',' << format_double(s.max_ratio) << '\n';
      }
      bool positive = true;
      for (double s : rc.sigmas) positive = positive && s > 0.0;
      if (positive && rc.sigmas.size() >= 3) {
        const Fit f = ratio_trend(summary);
        std::cout << "fit mean_ratio = " << format_double(f.intercept) << " + "
                  << format_double(f.slope) << " * ln(1/sigma), R^2 = " << format_double(f.r2)
                  << '\n';
      }
      return 0;
    }
    if (*lb_build) {
      const auto li = build_layered(lb_p, lb_sigma, lb_t);
      Instance inst = perturb_layered(li, lb_seed);
      inst.seed = lb_seed;
      write_json_file(lb_out, layered_to_json(li, inst));
      std::cout << "n=" << li.size() << " t=" << li.params.t
                << " beta=" << format_double(li.params.beta()) << '\n';
      return 0;
    }
    if (*lb_certify) {
      const auto [li, inst] = layered_from_json(read_json_file(lbc_inst));
      const auto cont = check_containers(li, inst);
      const Tour tour = build_long_tour(li, inst);
      const auto v = certify_two_optimality(inst, tour, Metric::euclidean, lbc_eps);
      std::cout << "containers: " << (cont.passed ? "pass" : "fail")
                << " worst_ratio=" << format_double(cont.worst_ratio) << '\n';
      if (v) {
        std::cout << "violation: edges at positions " << v->first_position << ", "
                  << v->second_position << " gain=" << format_double(v->change.gain) << '\n';
        return kVerificationFailed;
      }
      std::cout << "2-optimal at eps=" << format_double(lbc_eps) << '\n';
      return 0;
    }
    if (*lb_ratio) {
      const auto [li, inst] = layered_from_json(read_json_file(lbr_inst));
      const Tour tour = build_long_tour(li, inst);
      std::cout << "tour_length=" << format_double(tour.cached_length())
                << " ratio_lower_bound=" << format_double(ratio_lower_bound(li, inst, tour)) << '\n';
      return 0;
    }
    if (*verify) {
      const auto rep = verify_suite(v_suite, v_samples, v_seed);
      std::cout << rep.to_text();
      return rep.passed() ? 0 : kVerificationFailed;
    }
    if (*sweep) {
      SweepConfig cfg = SweepConfig::from_file(sw_cfg);
      if (!sw_out.empty()) cfg.output = sw_out;
      require(!cfg.output.empty(), "sweep needs -o or an output key in the config");
      if (threads > 0) cfg.threads = threads;
      write_text_file(cfg.output, sweep_csv(run_sweep(cfg)));
      return 0;
    }
    if (*replay) {
      const SweepConfig cfg = SweepConfig::from_file(rp_cfg);
      std::cout << sweep_csv_header() << '\n' << sweep_row_csv(run_sweep_row(cfg, rp_row)) << '\n';
      return 0;
    }
    if (*plot) {
      std::ifstream in(pd_in, std::ios::binary);
      if (!in) fail_io("cannot open '" + pd_in + "'");
      const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
      write_text_file(pd_out, plot_data(text));
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(e.kind());
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(ErrorKind::validation);
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(ErrorKind::io);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(ErrorKind::validation);
  }
  return 0;
}
