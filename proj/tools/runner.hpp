#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "config.hpp"
#include "nclab/experiments.hpp"

namespace nclab::cli {

struct Check {
  std::string name;
  bool pass = false;
  double value = 0;
  double tolerance = 0;
  std::string detail;
};

/// One tidy plot row: (experiment, N, seed, statistic) -> value.
struct PlotRow {
  long n = 0;
  std::uint64_t seed = 0;
  std::string statistic;
  double value = 0;
};

struct Report {
  json results = json::object();
  std::vector<Check> checks;
  std::vector<PlotRow> plot;
  std::vector<std::pair<std::string, std::string>> files;  // CSV name -> body

  bool pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
  }
};

inline std::string word_label(const std::vector<int>& idx) { return to_string(base_word(idx)); }

/// Tidy CSV over plot rows; provenance goes in columns so an empty result is one header line.
inline std::string emit_plotdata(const std::string& experiment, const std::vector<PlotRow>& rows,
                                 const std::string& config_hash) {
  std::ostringstream os;
  os.precision(17);
  os << "experiment,N,seed,statistic,value,config_hash,version\n";
  for (const auto& r : rows)
    os << experiment << ',' << r.n << ',' << r.seed << ",\"" << r.statistic << "\"," << r.value << ',' << config_hash
       << ',' << version << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------
// Moment memo (NCLAB_CACHE)
//
//   nclab-moment-cache 1
//   <word>\t<free moment>\t<Wick coefficients, order 0 first, comma separated>\t<nu1>

struct ExactMoments {
  Rational free;
  std::vector<Rational> wick;
  Rational nu1;
};

class MomentCache {
 public:
  static constexpr const char* header = "nclab-moment-cache 1";

  explicit MomentCache(std::string path) : path_(std::move(path)) {
    if (path_.empty()) return;
    std::ifstream in(path_);
    if (!in) return;
    std::string line;
    if (!std::getline(in, line) || line != header) return;  // other versions are ignored and rewritten
    while (std::getline(in, line)) {
      std::istringstream ls(line);
      std::string w, f, wk, n1;
      if (!std::getline(ls, w, '\t') || !std::getline(ls, f, '\t') || !std::getline(ls, wk, '\t') || !std::getline(ls, n1))
        continue;
      ExactMoments m{parse_rational(f), {}, parse_rational(n1)};
      std::istringstream ws(wk);
      std::string c;
      while (std::getline(ws, c, ',')) m.wick.push_back(parse_rational(c));
      memo_[w] = std::move(m);
    }
  }

  const ExactMoments& get(const std::vector<int>& idx) {
    const Word w = base_word(idx);
    const std::string key = to_string(w);
    auto it = memo_.find(key);
    if (it != memo_.end()) {
      ++hits_;
      return it->second;
    }
    ExactMoments m;
    m.free = semicircular_moment(w, CovarianceKernel::identity()).coefficient(0, 0);
    const NPoly p = gue_word_expectation(w);
    for (int k = 0; k <= static_cast<int>(w.size()) / 2; ++k) m.wick.push_back(p.coefficient(k));
    m.nu1 = nu1(NcPoly::monomial(w)).re;
    dirty_ = true;
    return memo_.emplace(key, std::move(m)).first->second;
  }

  void save() const {
    if (path_.empty() || !dirty_) return;
    std::ofstream out(path_);
    if (!out) throw Error(ErrorKind::io, "cannot write cache '" + path_ + "'");
    out << header << '\n';
    for (const auto& [w, m] : memo_) {
      out << w << '\t' << m.free << '\t';
      for (std::size_t k = 0; k < m.wick.size(); ++k) out << (k ? "," : "") << m.wick[k];
      out << '\t' << m.nu1 << '\n';
    }
  }

  std::size_t hits() const { return hits_; }

 private:
  std::string path_;
  std::map<std::string, ExactMoments> memo_;
  std::size_t hits_ = 0;
  bool dirty_ = false;
};

// ---------------------------------------------------------------------------
// Experiments

inline std::uint64_t seed_for(const ExperimentConfig& c, long n) {
  return splitmix64(c.base_seed ^ static_cast<std::uint64_t>(n));
}

inline Report run_moments(const ExperimentConfig& c) {
  Report rep;
  const double sigmas = c.tolerances.at("sigmas").get<double>();
  const bool cv = c.params.at("control_variates").get<bool>();
  std::vector<std::vector<int>> words = c.params.at("words").get<std::vector<std::vector<int>>>();
  int r = 0;
  for (const auto& w : words) {
    if (w.size() > gue_word_length_cap)
      throw Error(ErrorKind::degree_cap, "word longer than " + std::to_string(gue_word_length_cap));
    for (int i : w) r = std::max(r, i);
  }
  MomentCache cache(std::getenv("NCLAB_CACHE") ? std::getenv("NCLAB_CACHE") : "");
  std::vector<ExactMoments> exact;
  for (const auto& w : words) exact.push_back(cache.get(w));
  cache.save();

  std::ostringstream csv;
  csv.precision(17);
  csv << "word,N,trials,mean_re,mean_im,stderr,exact\n";
  for (std::size_t k = 0; k < words.size(); ++k) {
    const std::string label = word_label(words[k]);
    json wj{{"word", label}, {"free", exact[k].free.str()}, {"nu1", exact[k].nu1.str()}, {"wick", json::array()}};
    for (const auto& q : exact[k].wick) wj["wick"].push_back(q.str());
    rep.results["words"].push_back(wj);
  }

  std::vector<std::map<double, MCEstimate>> per_word(words.size());
  for (int n : c.n) {
    const std::uint64_t seed = seed_for(c, n);
    auto trials = run_trials(c.trials, seed, c.threads, [&](std::uint64_t s, std::size_t) {
      GueSampler g(s);
      std::vector<CMatrix> x;
      for (int i = 0; i < r; ++i) x.push_back(g.gue(n).matrix());
      std::vector<ControlledSample> out;
      std::vector<double> controls;
      if (cv) {
        for (const auto& xi : x) {
          const CMatrix sq = xi * xi;
          CMatrix p = sq;
          for (int k = 1; k <= 6; ++k, p = p * sq) controls.push_back(p.trace().real() / n);
        }
      }
      for (const auto& w : words) {
        CMatrix prod = CMatrix::Identity(n, n);
        for (int i : w) prod = prod * x[static_cast<std::size_t>(i - 1)];
        out.push_back({prod.trace() / static_cast<double>(n), controls});
      }
      return out;
    });
    for (std::size_t k = 0; k < words.size(); ++k) {
      std::vector<ControlledSample> col;
      for (const auto& t : trials) col.push_back(t[k]);
      MCEstimate e;
      if (cv) {
        e = control_variate_estimate(col, nclab::detail::gue_control_means(static_cast<std::size_t>(r), n), seed);
      } else {
        std::vector<Complex> ys;
        for (const auto& s : col) ys.push_back(s.y);
        e = summarize(ys, seed);
      }
      double ex = 0;
      for (std::size_t q = 0; q < exact[k].wick.size(); ++q) ex += to_double(exact[k].wick[q]) / std::pow(double(n), 2.0 * q);
      per_word[k][n] = e;
      const std::string label = word_label(words[k]);
      csv << '"' << label << "\"," << n << ',' << e.trials << ',' << e.mean.real() << ',' << e.mean.imag() << ','
          << e.std_error << ',' << ex << '\n';
      rep.plot.push_back({n, seed, label + ":mean_re", e.mean.real()});
      rep.plot.push_back({n, seed, label + ":stderr", e.std_error});
      const double dev = std::abs(e.mean - ex);
      rep.checks.push_back({"mc-vs-wick " + label + " N=" + std::to_string(n), dev <= std::max(sigmas * e.std_error, 1e-12),
                            dev, sigmas * e.std_error, ""});
    }
  }
  for (std::size_t k = 0; k < words.size(); ++k) {
    if (per_word[k].size() < 3) continue;
    const std::string label = word_label(words[k]);
    const auto [c2, se] = n2_coefficient(per_word[k], to_double(exact[k].free));
    const double target = to_double(exact[k].nu1);
    const double dev = std::abs(c2.real() - target);
    rep.results["fits"].push_back({{"word", label}, {"c2", c2.real()}, {"c2_stderr", se}, {"nu1", target}});
    rep.checks.push_back({"n2-coefficient " + label, dev <= std::max(sigmas * se, 1e-12), dev, sigmas * se,
                          "fitted C vs nu1"});
  }
  rep.results["cache_hits"] = cache.hits();
  rep.files.emplace_back("moments.csv", csv.str());
  return rep;
}

inline Report run_nu1_check(const ExperimentConfig& c) {
  Report rep;
  const auto rows = nu1_wick_table(c.params.at("max_degree").get<int>(), c.params.at("alphabet").get<int>());
  std::size_t ok = 0;
  for (const auto& r : rows) ok += r.equal;
  std::ostringstream csv;
  write_exact_csv(csv, rows, "nu1", "wick_order1");
  rep.files.emplace_back("nu1_table.csv", csv.str());
  rep.results["words"] = rows.size();
  rep.results["equal"] = ok;
  rep.checks.push_back({"nu1-equals-wick", ok == rows.size(), static_cast<double>(rows.size() - ok), 0,
                        std::to_string(ok) + "/" + std::to_string(rows.size()) + " words equal"});
  return rep;
}

inline Report run_strong_conv(const ExperimentConfig& c) {
  Report rep;
  const bool tensor = c.params.at("polynomial") == "tensor";
  const double limit = tensor ? 4.0 : 2 * std::sqrt(2.0);
  std::vector<Eigen::Index> ns(c.n.begin(), c.n.end());
  const auto pts = norm_sweep(tensor ? NormModel::tensor_sum : NormModel::free_sum, ns, c.trials, c.base_seed, c.threads);
  std::ostringstream csv;
  csv.precision(17);
  csv << "N,trials,mean,stderr\n";
  for (const auto& p : pts) {
    csv << p.n << ',' << p.norm.trials << ',' << p.norm.mean.real() << ',' << p.norm.std_error << '\n';
    rep.plot.push_back({static_cast<long>(p.n), p.norm.base_seed, "norm_mean", p.norm.mean.real()});
    rep.plot.push_back({static_cast<long>(p.n), p.norm.base_seed, "norm_stderr", p.norm.std_error});
    rep.results["norms"].push_back({{"N", p.n}, {"mean", p.norm.mean.real()}, {"stderr", p.norm.std_error}});
  }
  rep.results["limit"] = limit;
  rep.files.emplace_back("norms.csv", csv.str());
  const double gap = std::abs(pts.back().norm.mean.real() - limit);
  const double tol = c.tolerances.at("limit_gap").get<double>();
  rep.checks.push_back({"monotone", increasing(pts), 0, 0, "mean norm increases with N"});
  rep.checks.push_back({"limit-gap", gap <= tol, gap, tol, "largest N against the limit"});
  return rep;
}

inline Report run_resolvent(const ExperimentConfig& c) {
  Report rep;
  const Complex z(c.params.at("z")[0].get<double>(), c.params.at("z")[1].get<double>());
  const SeriesG g = g_series(c.model, c.params.at("depth").get<int>());
  const SeriesValue gv = g.evaluate(z);
  rep.results["series"] = {{"re", gv.value.real()}, {"im", gv.value.imag()}, {"tail_bound", gv.tail_bound},
                           {"radius", g.radius}};
  std::map<double, MCEstimate> vals;
  for (int n : c.n) {
    GNOptions opt;
    opt.trials = c.trials;
    opt.seed = seed_for(c, n);
    opt.threads = c.threads;
    opt.control_variates = c.params.at("control_variates").get<bool>();
    const MCEstimate e = g_N_numeric(c.model, z, n, opt);
    vals[n] = e;
    rep.plot.push_back({n, e.base_seed, "g_re", e.mean.real()});
    rep.plot.push_back({n, e.base_seed, "g_im", e.mean.imag()});
    rep.plot.push_back({n, e.base_seed, "stderr", e.std_error});
    rep.plot.push_back({n, e.base_seed, "abs_diff", std::abs(e.mean - gv.value)});
  }
  std::ostringstream csv;
  write_transform_csv(csv, vals);
  rep.files.emplace_back("transform.csv", csv.str());
  if (vals.size() >= 3) {
    FitResult f;
    try {
      f = fit_n2(vals, gv.value);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::degenerate_fit) throw;
      rep.checks.push_back({"slope-in-range", false, 0, 0, e.what()});
      return rep;
    }
    rep.results["fit"] = {{"slope", f.slope},   {"slope_stderr", f.slope_std_error}, {"intercept", f.intercept},
                          {"c2_re", f.c2.real()}, {"c2_im", f.c2.imag()},          {"c2_stderr", f.c2_std_error},
                          {"residuals", f.residuals}};
    const double lo = c.tolerances.at("slope_min").get<double>(), hi = c.tolerances.at("slope_max").get<double>();
    rep.checks.push_back({"slope-in-range", f.slope >= lo && f.slope <= hi, f.slope, hi,
                          "slope of log|g_N - g| in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]"});
  } else {
    rep.checks.push_back({"slope-in-range", false, 0, 0, "needs at least 3 values of N"});
  }
  return rep;
}

inline Report run_inclusion(const ExperimentConfig& c) {
  Report rep;
  InclusionOptions opt;
  opt.trials = c.trials;
  opt.threads = c.threads;
  opt.eta = c.params.at("eta").get<double>();
  opt.threshold = c.params.at("threshold").get<double>();
  opt.grid_step = c.params.at("grid_step").get<double>();
  opt.quadrature_nodes = c.params.at("quadrature_nodes").get<int>();
  const double eps = c.params.at("epsilon").get<double>();

  const double m = c.model.radius() + 4 * opt.grid_step + 0.5;
  const auto grid = uniform_grid(-m, m, opt.grid_step);
  const auto dens = stieltjes_density([&](Complex z) { return g_quadrature(c.model, z, opt.quadrature_nodes); }, grid, opt.eta);
  const auto support = support_from_density(dens, opt.threshold);
  std::ostringstream dcsv;
  write_density_csv(dcsv, dens);
  rep.files.emplace_back("density.csv", dcsv.str());
  for (const auto& iv : support) rep.results["support"].push_back({iv.lo, iv.hi});

  std::ostringstream icsv;
  icsv << "N,epsilon,trial,escapes,total_eigs\n";
  const double need = c.tolerances.at("clean_fraction").get<double>();
  for (int n : c.n) {
    opt.seed = seed_for(c, n);
    std::vector<double> eps_list{eps};
    if (c.params.at("negative_control").get<bool>()) eps_list.push_back(0.0);
    for (double e : eps_list) {
      const auto r = spectrum_inclusion_experiment(c.model, n, e, support, opt);
      std::size_t total = 0;
      for (std::size_t t = 0; t < r.escapes.size(); ++t) {
        icsv << n << ',' << e << ',' << t << ',' << r.escapes[t] << ',' << r.total_eigs << '\n';
        rep.plot.push_back({n, trial_seed(opt.seed, t), "escapes_eps=" + json(e).dump(), static_cast<double>(r.escapes[t])});
        total += r.escapes[t];
      }
      rep.results["runs"].push_back({{"N", n}, {"epsilon", e}, {"clean_fraction", r.clean_fraction()}, {"escapes", total}});
      if (e == eps) {
        rep.checks.push_back({"clean-fraction N=" + std::to_string(n), r.clean_fraction() >= need, r.clean_fraction(), need,
                              "trials with no eigenvalue outside the fattened support"});
      } else {
        rep.checks.push_back({"negative-control N=" + std::to_string(n), total > 0, static_cast<double>(total), 0,
                              "eps = 0 should see escapes"});
      }
    }
  }
  rep.files.emplace_back("inclusion.csv", icsv.str());
  return rep;
}

inline Report run_identities(const ExperimentConfig& c) {
  Report rep;
  for (const auto& r : identity_suite(c.base_seed)) {
    rep.checks.push_back({r.name, r.pass, r.error, r.tolerance, ""});
    rep.plot.push_back({0, c.base_seed, r.name, r.error});
  }
  return rep;
}

inline Report run_experiment(const ExperimentConfig& c) {
  if (c.experiment == "moments") return run_moments(c);
  if (c.experiment == "nu1-check") return run_nu1_check(c);
  if (c.experiment == "strong-conv") return run_strong_conv(c);
  if (c.experiment == "resolvent") return run_resolvent(c);
  if (c.experiment == "inclusion") return run_inclusion(c);
  if (c.experiment == "identities") return run_identities(c);
  throw SchemaError("unknown experiment '" + c.experiment + "'");
}

/// Writes every artifact under c.out_dir; returns the summary document.
inline json write_outputs(const ExperimentConfig& c, const Report& rep) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(c.out_dir, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create '" + c.out_dir + "': " + ec.message());
  const std::string hash = c.hash();
  const std::string stem = c.out_dir + "/" + c.experiment + "_";
  auto write = [](const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::io, "cannot write '" + path + "'");
    out << body;
  };
  const std::string provenance = "# nclab " + std::string(version) + " config_hash=" + hash +
                                 " seed=" + std::to_string(c.base_seed) + "\n";
  for (const auto& [name, body] : rep.files) write(stem + name, provenance + body);
  write(stem + "plotdata.csv", emit_plotdata(c.experiment, rep.plot, hash));

  json checks = json::array();
  for (const auto& k : rep.checks)
    checks.push_back({{"name", k.name}, {"status", k.pass ? "PASS" : "FAIL"}, {"value", k.value},
                      {"tolerance", k.tolerance}, {"detail", k.detail}});
  json summary{{"experiment", c.experiment}, {"version", version},  {"config_hash", hash},
               {"seed", c.base_seed},        {"config", c.to_json()}, {"results", rep.results},
               {"checks", checks},           {"status", rep.pass() ? "PASS" : "FAIL"}};
  write(stem + "summary.json", summary.dump(2) + "\n");
  return summary;
}

}  // namespace nclab::cli
