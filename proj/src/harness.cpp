#include "twopt/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "twopt/error.hpp"
#include "twopt/exact.hpp"
#include "twopt/kernels.hpp"
#include "twopt/linked.hpp"
#include "twopt/rng.hpp"
#include "twopt/stochastic.hpp"

namespace twopt {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
    fail_validation("expected a number, got '" + std::string(s) + "'");
  }
  return v;
}

std::uint64_t parse_u64(std::string_view s) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    fail_validation("expected a nonnegative integer, got '" + std::string(s) + "'");
  }
  return v;
}

bool parse_bool(std::string_view s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  fail_validation("expected true|false, got '" + std::string(s) + "'");
}

template <class T, class F>
std::vector<T> parse_list(std::string_view s, F parse_one) {
  std::vector<T> out;
  for (auto item : split(s, ',')) {
    if (item.empty()) fail_validation("empty entry in list '" + std::string(s) + "'");
    out.push_back(parse_one(item));
  }
  return out;
}

std::string opt_double(const std::optional<double>& v) { return v ? format_double(*v) : ""; }
std::string opt_size(const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : ""; }

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

std::vector<double> parse_double_list(std::string_view s) {
  return parse_list<double>(s, parse_double);
}

std::vector<std::size_t> parse_size_list(std::string_view s) {
  return parse_list<std::size_t>(s, [](std::string_view v) { return static_cast<std::size_t>(parse_u64(v)); });
}

SweepConfig SweepConfig::parse(std::string_view text) {
  SweepConfig cfg;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  for (auto raw : split(text, '\n')) {
    ++line_no;
    auto line = raw.substr(0, raw.find('#'));
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      fail_validation("config line " + std::to_string(line_no) + ": expected key=value");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (!seen.insert(std::string(key)).second) {
      fail_validation("config key '" + std::string(key) + "' given twice");
    }
    if (key == "n") cfg.n = parse_size_list(value);
    else if (key == "sigma") cfg.sigma = parse_double_list(value);
    else if (key == "phi") cfg.phi = parse_double_list(value);
    else if (key == "dim") cfg.dim = parse_size_list(value);
    else if (key == "metric") cfg.metric = parse_list<Metric>(value, parse_metric);
    else if (key == "pivot") cfg.pivot = parse_list<Pivot>(value, parse_pivot);
    else if (key == "init") cfg.init = parse_list<InitRule>(value, parse_init_rule);
    else if (key == "origins") cfg.origins = parse_origin_family(value);
    else if (key == "seeds") cfg.seeds = static_cast<std::size_t>(parse_u64(value));
    else if (key == "seed") cfg.seed = parse_u64(value);
    else if (key == "restarts") cfg.restarts = static_cast<std::size_t>(parse_u64(value));
    else if (key == "eps") cfg.eps = parse_double(value);
    else if (key == "exact_max_n") cfg.exact_max_n = static_cast<std::size_t>(parse_u64(value));
    else if (key == "delta_min_max_n") cfg.delta_min_max_n = static_cast<std::size_t>(parse_u64(value));
    else if (key == "linked") cfg.linked = parse_bool(value);
    else if (key == "output") cfg.output = std::string(value);
    else if (key == "threads") cfg.threads = static_cast<int>(parse_u64(value));
    else fail_validation("unknown config key '" + std::string(key) + "'");
  }
  require(!cfg.n.empty() && !cfg.dim.empty() && !cfg.metric.empty() && !cfg.pivot.empty() &&
              !cfg.init.empty(),
          "every grid must be nonempty");
  require(cfg.one_step() || !cfg.sigma.empty(), "sigma grid must be nonempty");
  for (auto n : cfg.n) require(n >= 4, "n must be >= 4");
  for (auto d : cfg.dim) require(d >= 1, "dim must be >= 1");
  for (auto s : cfg.sigma) require(s >= 0.0, "sigma must be >= 0");
  for (auto p : cfg.phi) require(p >= 1.0, "phi must be >= 1 (the subcube must fit in [0,1]^d)");
  require(cfg.seeds >= 1, "seeds must be >= 1");
  require(cfg.eps > 0.0, "eps must be > 0");
  require(cfg.exact_max_n <= kHeldKarpMaxN, "exact_max_n is limited to 20");
  return cfg;
}

SweepConfig SweepConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail_io("cannot open config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::size_t SweepConfig::config_points() const noexcept {
  return n.size() * (one_step() ? phi.size() : sigma.size()) * dim.size() * metric.size() *
         pivot.size() * init.size();
}

SweepRow run_sweep_row(const SweepConfig& cfg, std::size_t row_id) {
  require(row_id < cfg.row_count(), "row id out of range (the config has " +
                                        std::to_string(cfg.row_count()) + " rows)");
  SweepRow row;
  row.row_id = row_id;
  row.config_index = row_id / cfg.seeds;
  row.seed_index = row_id % cfg.seeds;
  // Decode the config index; init varies fastest, n slowest.
  std::size_t idx = row.config_index;
  auto take = [&idx](std::size_t size) {
    const std::size_t k = idx % size;
    idx /= size;
    return k;
  };
  row.init = cfg.init[take(cfg.init.size())];
  row.pivot = cfg.pivot[take(cfg.pivot.size())];
  row.metric = cfg.metric[take(cfg.metric.size())];
  row.dim = cfg.dim[take(cfg.dim.size())];
  row.one_step = cfg.one_step();
  if (row.one_step) {
    row.phi = cfg.phi[take(cfg.phi.size())];
  } else {
    row.sigma = cfg.sigma[take(cfg.sigma.size())];
  }
  row.n = cfg.n[take(cfg.n.size())];
  row.eps = cfg.eps;

  const std::uint64_t task = derive_seed(cfg.seed, row.config_index, row.seed_index);
  row.seed = task;
  Instance inst;
  if (row.one_step) {
    OneStepSpec spec;
    spec.phi = row.phi;
    spec.dim = row.dim;
    spec.centers = PointSet(row.dim, std::vector<double>(row.dim, 0.5));
    inst = one_step_sample(spec, row.n, derive_seed(task, 1));
  } else {
    const PointSet origins = make_origins(cfg.origins, row.n, row.dim, derive_seed(task, 0));
    inst = perturb(origins, row.sigma, derive_seed(task, 1));
  }

  RunOptions opts;
  opts.init = row.init;
  opts.pivot = row.pivot;
  opts.eps = cfg.eps;
  opts.seed = derive_seed(task, 2);
  opts.record_changes = cfg.linked;
  opts.exec = kernels::Exec::serial;
  const RunRecord rec = run_two_opt(inst, row.metric, opts);
  row.iterations = rec.iterations;
  row.converged = rec.converged;
  row.initial_length = rec.initial_length;
  row.final_length = rec.final_length;

  if (row.n <= cfg.delta_min_max_n) {
    row.delta_min = min_improvement(inst, row.metric, cfg.eps, kernels::Exec::serial);
  }
  if (row.n <= cfg.exact_max_n) {
    row.reference_exact = true;
    row.reference_length = held_karp(inst, row.metric).optimal_length;
  } else {
    row.reference_length = 2.0 * mst_length(inst, row.metric, kernels::Exec::serial);
  }
  row.ratio = row.final_length / row.reference_length;
  if (cfg.restarts > 0) {
    row.two_opt_max = std::max(row.final_length,
                               estimate_two_opt_max(inst, row.metric, cfg.restarts, row.pivot, cfg.eps,
                                                    derive_seed(task, 3), kernels::Exec::serial));
    row.ratio_max = *row.two_opt_max / row.reference_length;
  }
  if (cfg.linked) {
    row.linked_pairs = count_disjoint_linked_pairs(rec.changes, row.n).count();
    row.linked_bound = linked_pair_bound(rec.iterations, row.n);
  }
  return row;
}

std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
  const std::size_t total = cfg.row_count();
  std::vector<SweepRow> rows(total);
  std::exception_ptr error;
  const int threads = cfg.threads > 0 ? cfg.threads : kernels::default_threads();
  const auto count = static_cast<std::ptrdiff_t>(total);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::ptrdiff_t r = 0; r < count; ++r) {
    try {
      rows[static_cast<std::size_t>(r)] = run_sweep_row(cfg, static_cast<std::size_t>(r));
    } catch (...) {
#pragma omp critical(twopt_sweep_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return rows;
}

std::string sweep_csv_header() {
  return "row_id,config_index,seed_index,seed,model,n,dim,sigma,phi,metric,pivot,init,eps,"
         "iterations,converged,initial_length,final_length,delta_min,reference,reference_length,"
         "ratio,two_opt_max,ratio_max,linked_pairs,linked_bound";
}

std::string sweep_row_csv(const SweepRow& r) {
  std::string s;
  auto add = [&s](const std::string& v) {
    if (!s.empty()) s += ',';
    s += v;
  };
  add(std::to_string(r.row_id));
  add(std::to_string(r.config_index));
  add(std::to_string(r.seed_index));
  add(std::to_string(r.seed));
  add(r.one_step ? "onestep" : "gaussian");
  add(std::to_string(r.n));
  add(std::to_string(r.dim));
  add(r.one_step ? "" : format_double(r.sigma));
  add(r.one_step ? format_double(r.phi) : "");
  add(std::string(metric_name(r.metric)));
  add(std::string(pivot_name(r.pivot)));
  add(std::string(init_rule_name(r.init)));
  add(format_double(r.eps));
  add(std::to_string(r.iterations));
  add(r.converged ? "1" : "0");
  add(format_double(r.initial_length));
  add(format_double(r.final_length));
  add(opt_double(r.delta_min));
  add(r.reference_exact ? "exact" : "bound");
  add(format_double(r.reference_length));
  add(format_double(r.ratio));
  add(opt_double(r.two_opt_max));
  add(opt_double(r.ratio_max));
  add(opt_size(r.linked_pairs));
  add(opt_size(r.linked_bound));
  return s;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = sweep_csv_header() + "\n";
  for (const auto& r : rows) out += sweep_row_csv(r) + "\n";
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (out) {
      out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
      out.flush();
      if (out) return;
    }
  }
  std::error_code ec;
  std::filesystem::remove(path, ec);
  fail_io("cannot write '" + path.string() + "'");
}

Fit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size(), "fit needs equally many x and y values");
  require(std::set<double>(x.begin(), x.end()).size() >= 3, "fit needs >= 3 distinct x values");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  Fit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (f.intercept + f.slope * x[i]);
    ss_res += e * e;
  }
  f.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return f;
}

Fit log_log_fit(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    require(x[i] > 0.0 && y[i] > 0.0, "log-log fit needs positive values");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  return linear_fit(lx, ly);
}

double sweep_field(const SweepRow& r, std::string_view f) {
  auto need = [&f](const auto& opt) {
    if (!opt) fail_validation("field '" + std::string(f) + "' is empty in this row");
    return static_cast<double>(*opt);
  };
  if (f == "n") return static_cast<double>(r.n);
  if (f == "dim") return static_cast<double>(r.dim);
  if (f == "sigma") return r.sigma;
  if (f == "phi") return r.phi;
  if (f == "seed_index") return static_cast<double>(r.seed_index);
  if (f == "iterations") return static_cast<double>(r.iterations);
  if (f == "initial_length") return r.initial_length;
  if (f == "final_length") return r.final_length;
  if (f == "delta_min") return need(r.delta_min);
  if (f == "reference_length") return r.reference_length;
  if (f == "ratio") return r.ratio;
  if (f == "two_opt_max") return need(r.two_opt_max);
  if (f == "ratio_max") return need(r.ratio_max);
  if (f == "linked_pairs") return need(r.linked_pairs);
  if (f == "linked_bound") return need(r.linked_bound);
  fail_validation("unknown numeric field '" + std::string(f) + "'");
}

Fit scaling_fit(const std::vector<SweepRow>& rows, std::string_view x_field,
                std::string_view y_field) {
  std::map<double, std::pair<double, std::size_t>> groups;
  for (const auto& r : rows) {
    auto& g = groups[sweep_field(r, x_field)];
    g.first += sweep_field(r, y_field);
    ++g.second;
  }
  std::vector<double> x, y;
  for (const auto& [xv, g] : groups) {
    x.push_back(xv);
    y.push_back(g.first / static_cast<double>(g.second));
  }
  return log_log_fit(x, y);
}

std::vector<RatioRow> run_ratio(const RatioConfig& cfg) {
  require(cfg.n >= 4 && cfg.n <= kHeldKarpMaxN, "ratio needs 4 <= n <= 20 (Held-Karp reference)");
  require(!cfg.sigmas.empty(), "sigma grid must be nonempty");
  for (double s : cfg.sigmas) require(s >= 0.0, "sigma must be >= 0");
  require(cfg.restarts >= 1 && cfg.seeds >= 1, "restarts and seeds must be >= 1");
  const std::size_t total = cfg.sigmas.size() * cfg.seeds;
  std::vector<RatioRow> rows(total);
  std::exception_ptr error;
  const auto count = static_cast<std::ptrdiff_t>(total);
#pragma omp parallel for schedule(dynamic, 1) num_threads(kernels::default_threads())
  for (std::ptrdiff_t t = 0; t < count; ++t) {
    try {
      const std::size_t si = static_cast<std::size_t>(t) / cfg.seeds;
      const std::size_t k = static_cast<std::size_t>(t) % cfg.seeds;
      RatioRow row;
      row.sigma = cfg.sigmas[si];
      row.seed_index = k;
      row.seed = derive_seed(cfg.seed, 0, k);
      const PointSet origins = make_origins(cfg.origins, cfg.n, 2, derive_seed(row.seed, 0));
      const Instance inst = perturb(origins, row.sigma, derive_seed(row.seed, 1));
      row.optimal_length = held_karp(inst, cfg.metric).optimal_length;
      row.two_opt_max = estimate_two_opt_max(inst, cfg.metric, cfg.restarts, cfg.pivot, cfg.eps,
                                             derive_seed(cfg.seed, 1, k), kernels::Exec::serial);
      row.ratio = row.two_opt_max / row.optimal_length;
      rows[static_cast<std::size_t>(t)] = row;
    } catch (...) {
#pragma omp critical(twopt_ratio_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return rows;
}

std::vector<RatioSummary> summarize_ratio(const RatioConfig& cfg, const std::vector<RatioRow>& rows) {
  std::vector<RatioSummary> out;
  for (std::size_t si = 0; si < cfg.sigmas.size(); ++si) {
    RatioSummary s;
    s.sigma = cfg.sigmas[si];
    std::vector<double> v;
    for (const auto& r : rows) {
      if (r.sigma == s.sigma) v.push_back(r.ratio);
    }
    require(!v.empty(), "no rows for a sigma grid point");
    double sum = 0.0;
    for (double x : v) sum += x;
    s.mean_ratio = sum / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean_ratio) * (x - s.mean_ratio);
    s.standard_error = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1) /
                                                static_cast<double>(v.size()))
                                    : 0.0;
    s.max_ratio = *std::max_element(v.begin(), v.end());
    out.push_back(s);
  }
  return out;
}

Fit ratio_trend(const std::vector<RatioSummary>& summary) {
  std::vector<double> x, y;
  for (const auto& s : summary) {
    require(s.sigma > 0.0, "ratio trend needs sigma > 0");
    x.push_back(std::log(1.0 / s.sigma));
    y.push_back(s.mean_ratio);
  }
  return linear_fit(x, y);
}

std::string ratio_csv(const std::vector<RatioRow>& rows) {
  std::string out = "sigma,seed_index,seed,optimal_length,two_opt_max,ratio\n";
  for (const auto& r : rows) {
    out += format_double(r.sigma) + ',' + std::to_string(r.seed_index) + ',' +
           std::to_string(r.seed) + ',' + format_double(r.optimal_length) + ',' +
           format_double(r.two_opt_max) + ',' + format_double(r.ratio) + '\n';
  }
  return out;
}

std::string plot_data(std::string_view text) {
  std::vector<std::string_view> lines;
  for (auto l : split(text, '\n')) {
    if (!l.empty()) lines.push_back(l);
  }
  require(!lines.empty() && lines.front() == sweep_csv_header(), "input is not a sweep CSV");
  const auto header = split(lines.front(), ',');
  static const std::set<std::string_view> id_cols{"row_id", "seed", "model", "n", "dim", "sigma",
                                                  "phi", "metric", "pivot", "init"};
  static const std::set<std::string_view> value_cols{
      "iterations", "initial_length", "final_length", "delta_min", "reference_length",
      "ratio", "two_opt_max", "ratio_max", "linked_pairs", "linked_bound"};
  std::string out;
  std::vector<std::size_t> ids;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (id_cols.count(header[c])) {
      ids.push_back(c);
      out += std::string(header[c]) + ',';
    }
  }
  out += "variable,value\n";
  for (std::size_t l = 1; l < lines.size(); ++l) {
    const auto cells = split(lines[l], ',');
    require(cells.size() == header.size(), "sweep CSV line " + std::to_string(l + 1) +
                                               " has the wrong number of fields");
    std::string prefix;
    for (auto c : ids) prefix += std::string(cells[c]) + ',';
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (!value_cols.count(header[c]) || cells[c].empty()) continue;
      out += prefix + std::string(header[c]) + ',' + std::string(cells[c]) + '\n';
    }
  }
  return out;
}

}  // namespace twopt
