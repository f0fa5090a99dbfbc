// Acceptance runner: `acceptance [k ...]` evaluates the listed criteria (all by
// default) and prints one PASS/FAIL line each. Exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "nclab/experiments.hpp"

using namespace nclab;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

const unsigned threads = 0;

Verdict c1_nu1_equals_wick() {
  const auto rows = nu1_wick_table(8, 2);
  std::size_t ok = 0;
  for (const auto& r : rows) ok += r.equal;
  return {ok == rows.size(), std::to_string(ok) + "/" + std::to_string(rows.size()) + " words with nu1 == order-1 Wick coefficient"};
}

Verdict c2_free_equals_order0() {
  std::size_t ok = 0, total = 0;
  for (int alphabet : {2, 3}) {
    for (const auto& r : free_wick_table(8, alphabet)) {
      ok += r.equal;
      ++total;
    }
  }
  return {ok == total, std::to_string(ok) + "/" + std::to_string(total) + " words (2 and 3 letters, length <= 8)"};
}

Verdict c3_genus_values() {
  NPoly x4, x6;
  x4.add(0, 2);
  x4.add(1, 1);
  x6.add(0, 5);
  x6.add(1, 10);
  const NPoly a = gue_word_expectation(base_word({1, 1, 1, 1}));
  const NPoly b = gue_word_expectation(base_word({1, 1, 1, 1, 1, 1}));
  return {a == x4 && b == x6, "E tr x^4 = " + to_string(a) + ", E tr x^6 = " + to_string(b)};
}

Verdict c4_r1_closed_case() {
  const NcPoly x4 = NcPoly::monomial(base_word({1, 1, 1, 1}));
  const NcPoly r1 = r1_build(x4);
  const bool r1_ok = r1 == NcPoly::constant(CRational(4));
  const CRational v = nu1(x4);
  const bool nu_ok = v == CRational(1);
  using boost::math::quadrature::gauss_kronrod;
  const double inf = std::numeric_limits<double>::infinity();
  auto outer = [](double t2) {
    auto inner = [t2](double t1) { return std::exp(-t2 - t1); };
    return gauss_kronrod<double, 31>::integrate(inner, 0.0, t2, 10, 1e-14);
  };
  const double q = 0.5 * gauss_kronrod<double, 61>::integrate(outer, 0.0, inf, 15, 1e-14);
  const bool s_ok = simplex_integral(0, 0) == make_rational(1, 4) && std::abs(q - 0.25) <= 1e-10;
  return {r1_ok && nu_ok && s_ok, std::string("R1(x^4) ") + (r1_ok ? "= 4" : "!= 4") + ", nu1(x^4) " +
                                      (nu_ok ? "= 1" : "!= 1") + fmt(", simplex quadrature error %.2e", std::abs(q - 0.25))};
}

Verdict c5_identities() {
  bool pass = true;
  std::string d;
  for (const auto& c : identity_suite(2024)) {
    pass = pass && c.pass;
    d += c.name + fmt("=%.1e ", c.error) + (c.pass ? "" : "(FAIL) ");
  }
  return {pass, d};
}

Verdict c6_fourth_moment() {
  std::map<double, MCEstimate> v;
  bool within = true;
  std::string d;
  for (int n : {8, 16, 32, 64}) {
    const auto e = mc_trace([](GueSampler& g, Eigen::Index k) {
      return Complex(g.gue(k).eigenvalues().array().pow(4).mean());
    }, n, 400, 600 + static_cast<std::uint64_t>(n), threads);
    const double exact = gue_word_expectation(base_word({1, 1, 1, 1})).evaluate(n);
    const double z = std::abs(e.mean.real() - exact) / e.std_error;
    within = within && z <= 3;
    d += fmt("N=%.0f:%.2fsd ", n, z);
    v[n] = e;
  }
  const auto [c2, se] = n2_coefficient(v, 2.0);
  const bool c_ok = std::abs(c2.real() - 1) <= 3 * se;
  return {within && c_ok, d + fmt("C=%.3f+-%.3f", c2.real(), se)};
}

Verdict c7_cayley_first_order() {
  std::map<double, MCEstimate> v;
  for (int n : {8, 16, 32, 64}) {
    auto samples = run_trials(4000, 700 + static_cast<std::uint64_t>(n), threads, [n](std::uint64_t seed, std::size_t) {
      GueSampler g(seed);
      const RVector lam = g.gue(n).eigenvalues();
      ControlledSample s;
      double y = 0;
      for (Eigen::Index k = 0; k < n; ++k) y += cayley(lam(k)).real();
      s.y = y / n;
      const Eigen::ArrayXd l2 = lam.array().square();
      Eigen::ArrayXd p = l2;
      for (int k = 1; k <= 6; ++k, p *= l2) s.x.push_back(p.mean());
      return s;
    });
    v[n] = control_variate_estimate(samples, detail::gue_control_means(1, n), 700 + static_cast<std::uint64_t>(n));
  }
  const double ref = 2 - std::sqrt(5.0);
  const FitResult f = fit_n2(v, ref);
  std::string d;
  for (const auto& [n, e] : v) d += fmt("N=%.0f:d=%.2e(se %.1e) ", n, e.mean.real() - ref, e.std_error);
  return {f.slope >= -2.5 && f.slope <= -1.5, d + fmt("slope=%.3f C=%.4f", f.slope, f.c2.real())};
}

Verdict c8_strong_convergence() {
  const auto sum = norm_sweep(NormModel::free_sum, {64, 128, 256}, 10, 800, threads);
  const auto ten = norm_sweep(NormModel::tensor_sum, {16, 32, 64}, 20, 801, threads);
  const double s_last = sum.back().norm.mean.real(), t_last = ten.back().norm.mean.real();
  const bool s_ok = std::abs(s_last - 2 * std::sqrt(2.0)) <= 0.1;
  const bool t_ok = std::abs(t_last - 4) <= 0.15;
  const bool mono = increasing(sum) && increasing(ten);
  std::string d = "||X1+X2||:";
  for (const auto& p : sum) d += fmt(" %.0f->%.4f", static_cast<double>(p.n), p.norm.mean.real());
  d += s_ok ? " (ok)" : " (off)";
  d += "; ||X(x)I+I(x)Y||:";
  for (const auto& p : ten) d += fmt(" %.0f->%.4f", static_cast<double>(p.n), p.norm.mean.real());
  d += t_ok ? " (ok)" : fmt(" (|.-4| = %.3f > 0.15)", std::abs(t_last - 4));
  d += mono ? "; monotone" : "; not monotone";
  return {s_ok && t_ok && mono, d};
}

Verdict c9_resolvent_scaling() {
  const auto c = ModelCoefficients::scalar(0, 0.5, 0.5);
  const Complex z(0, 4);
  const auto g = g_series(c, 14).evaluate(z);
  std::map<double, MCEstimate> v;
  for (int n : {8, 16, 24, 32}) {
    GNOptions opt;
    opt.trials = 4000;
    opt.seed = 900 + static_cast<std::uint64_t>(n);
    opt.threads = threads;
    opt.control_variates = true;
    v[n] = g_N_numeric(c, z, n, opt);
  }
  const FitResult f = fit_n2(v, g.value);
  // independent value of the limit, to show the series error is far below the differences
  const double cross = std::abs(g.value - g_quadrature(c, z));
  std::string d = fmt("tail<=%.1e |series-quadrature|=%.1e ", g.tail_bound, cross);
  for (const auto& [n, e] : v) d += fmt("N=%.0f:|d|=%.2e(se %.1e) ", n, std::abs(e.mean - g.value), e.std_error);
  return {f.slope >= -2.6 && f.slope <= -1.4, d + fmt("slope=%.3f", f.slope)};
}

Verdict c10_inclusion() {
  const auto c = ModelCoefficients::scalar(0, 0.5, 0.5);
  InclusionOptions opt;
  opt.trials = 40;
  opt.seed = 1000;
  opt.threads = threads;
  const auto support = estimate_support(c, opt);
  const auto rep = spectrum_inclusion_experiment(c, 48, 0.3, support, opt);
  const auto neg = spectrum_inclusion_experiment(c, 48, 0.0, support, opt);
  std::size_t neg_escapes = 0;
  for (auto e : neg.escapes) neg_escapes += e;
  std::string d = "support";
  for (const auto& iv : support) d += fmt(" [%.3f,%.3f]", iv.lo, iv.hi);
  d += fmt("; clean %.0f/40 at eps=0.3; %.0f escapes at eps=0", rep.clean_fraction() * 40, static_cast<double>(neg_escapes));
  return {rep.clean_fraction() >= 0.95 && neg_escapes > 0, d};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"nu1 equals Wick order 1", c1_nu1_equals_wick},
      {"free moments equal Wick order 0", c2_free_equals_order0},
      {"genus values", c3_genus_values},
      {"R1 closed case", c4_r1_closed_case},
      {"identity suite", c5_identities},
      {"Monte Carlo fourth moment", c6_fourth_moment},
      {"Cayley first-order scaling", c7_cayley_first_order},
      {"strong convergence at desk scale", c8_strong_convergence},
      {"resolvent scaling law", c9_resolvent_scaling},
      {"spectral inclusion", c10_inclusion},
  };
  std::vector<int> which;
  for (int k = 1; k < argc; ++k) which.push_back(std::stoi(argv[k]));
  if (which.empty())
    for (int k = 1; k <= static_cast<int>(criteria.size()); ++k) which.push_back(k);

  bool all = true;
  for (int k : which) {
    if (k < 1 || k > static_cast<int>(criteria.size())) {
      std::fprintf(stderr, "no criterion %d\n", k);
      return 2;
    }
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[static_cast<std::size_t>(k - 1)].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("C%-2d %s  %s: %s (%.1f s)\n", k, v.pass ? "PASS" : "FAIL", criteria[static_cast<std::size_t>(k - 1)].first.c_str(),
                v.detail.c_str(), secs);
    std::fflush(stdout);
    all = all && v.pass;
  }
  return all ? 0 : 1;
}
