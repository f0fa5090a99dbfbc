#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <ostream>
#include <vector>

#include "nclab/freemoments.hpp"
#include "nclab/guewick.hpp"
#include "nclab/parraud.hpp"
#include "nclab/rmt.hpp"

namespace nclab {

// ---------------------------------------------------------------------------
// Free limit g(z) = tr_m (x) tau (x) tau (z - S)^{-1} as a Laurent series at infinity

/// g(z) = sum_n a_n z^{-(n+1)}, usable for |z| >= 1.25 M.
struct SeriesG {
  std::vector<Complex> coefficients;
  double radius = 0;

  int depth() const { return static_cast<int>(coefficients.size()) - 1; }

  void require_valid(Complex z) const {
    if (std::abs(z) < 1.25 * radius || std::abs(z) == 0)
      throw Error(ErrorKind::invalid_argument, "series evaluated at |z| = " + std::to_string(std::abs(z)) +
                                                   " below 1.25 * radius " + std::to_string(radius));
  }

  Complex operator()(Complex z) const {
    require_valid(z);
    const Complex w = 1.0 / z;
    Complex s = 0;
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) s = s * w + *it;
    return s * w;
  }

  /// |a_n| <= M^n gives |sum_{n>d} a_n z^{-n-1}| <= (M/|z|)^{d+1} / (|z| - M).
  double tail_bound(Complex z) const {
    require_valid(z);
    const double r = std::abs(z);
    return std::pow(radius / r, depth() + 1) / (r - radius);
  }

  SeriesValue evaluate(Complex z) const { return {(*this)(z), tail_bound(z)}; }
};

inline constexpr int g_series_depth_cap = 14;

namespace detail {

inline void append_letter(FreeWord& w, FreeLetter l) {
  if (!w.empty() && w.back().element == l.element) {
    w.back().power += l.power;
    if (w.back().power == 0) w.pop_back();
  } else {
    w.push_back(l);
  }
}

}  // namespace detail

/// Coefficients a_n = (tr_m (x) tau (x) tau)(S^n) with u_i = Psi(s_i), v_i = Psi(t_i)
/// free Haar-like unitaries on two independent legs. The expansion runs over
/// (left word, right word) states carrying the m x m coefficient product.
inline SeriesG g_series(const ModelCoefficients& c, int depth, int cap = g_series_depth_cap,
                        std::size_t max_states = 2'000'000) {
  c.validate();
  if (depth < 0) throw Error(ErrorKind::invalid_argument, "series depth must be >= 0");
  if (depth > cap)
    throw Error(ErrorKind::degree_cap, "series depth " + std::to_string(depth) + " exceeds cap " + std::to_string(cap));

  struct Step {
    CMatrix coeff;
    int leg;  // 0 none, 1 left, 2 right
    FreeLetter letter;
  };
  std::vector<Step> steps;
  auto nonzero = [](const CMatrix& a) { return a.cwiseAbs().maxCoeff() > 0; };
  if (nonzero(c.xi)) steps.push_back({c.xi, 0, {}});
  for (std::size_t i = 0; i < c.r(); ++i) {
    const int e = static_cast<int>(i);
    if (nonzero(c.gamma[i])) {
      steps.push_back({c.gamma[i], 1, {e, 1}});
      steps.push_back({c.gamma[i].adjoint(), 1, {e, -1}});
    }
    if (nonzero(c.beta[i])) {
      steps.push_back({c.beta[i], 2, {e, 1}});
      steps.push_back({c.beta[i].adjoint(), 2, {e, -1}});
    }
  }

  const auto marg = cayley_moments(std::max(depth, 1));
  std::vector<MomentSequence<Complex>> marginals(std::max<std::size_t>(c.r(), 1), marg);
  FreeMomentEvaluator<Complex> left(marginals), right(marginals);

  const double m = static_cast<double>(c.m());
  using State = std::pair<FreeWord, FreeWord>;
  std::map<State, CMatrix> states{{State{}, CMatrix::Identity(c.m(), c.m())}};
  SeriesG g;
  g.radius = c.radius();
  g.coefficients.push_back(1.0);
  for (int n = 1; n <= depth; ++n) {
    std::map<State, CMatrix> next;
    for (const auto& [key, mat] : states) {
      for (const auto& st : steps) {
        State k = key;
        if (st.leg == 1) detail::append_letter(k.first, st.letter);
        if (st.leg == 2) detail::append_letter(k.second, st.letter);
        const CMatrix prod = mat * st.coeff;
        auto [it, fresh] = next.try_emplace(std::move(k), prod);
        if (!fresh) it->second += prod;
      }
      if (next.size() > max_states)
        throw Error(ErrorKind::term_cap, "series expansion exceeds " + std::to_string(max_states) + " states");
    }
    states = std::move(next);
    Complex a = 0;
    for (const auto& [key, mat] : states) a += mat.trace() / m * left.moment(key.first) * right.moment(key.second);
    g.coefficients.push_back(a);
  }
  return g;
}

/// g(z) by tensor-product Chebyshev quadrature over the two legs; needs r <= 1, where
/// u and v are scalar functions of one semicircular each. Accurate for Im z well
/// above the node spacing.
inline Complex g_quadrature(const ModelCoefficients& c, Complex z, int nodes = 800) {
  c.validate();
  if (c.r() > 1) throw Error(ErrorKind::unsupported, "quadrature evaluation of g needs r <= 1");
  if (nodes < 1) throw Error(ErrorKind::invalid_argument, "quadrature needs at least one node");
  const Eigen::Index m = c.m();
  std::vector<double> x, w;
  const double h = M_PI / (nodes + 1);
  for (int j = 1; j <= nodes; ++j) {
    const double sn = std::sin(j * h);
    x.push_back(2 * std::cos(j * h));
    w.push_back(2.0 / (nodes + 1) * sn * sn);
  }
  auto leg = [&](const std::vector<CMatrix>& coef) {
    std::vector<CMatrix> out;
    for (double xv : x) {
      CMatrix a = CMatrix::Zero(m, m);
      if (!coef.empty()) {
        const Complex u = cayley(xv);
        a = coef[0] * u + coef[0].adjoint() * std::conj(u);
      }
      out.push_back(a);
    }
    return out;
  };
  const auto left = leg(c.gamma), right = leg(c.beta);

  Complex total = 0;
  if (m == 1) {
    std::vector<Complex> lv(x.size()), rv(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
      lv[k] = z - c.xi(0, 0) - left[k](0, 0);
      rv[k] = right[k](0, 0);
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
      Complex s = 0;
      for (std::size_t j = 0; j < x.size(); ++j) s += w[j] / (lv[i] - rv[j]);
      total += w[i] * s;
    }
    return total;
  }
  const CMatrix zi = z * CMatrix::Identity(m, m) - c.xi;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j)
      total += w[i] * w[j] * (zi - left[i] - right[j]).inverse().trace() / static_cast<double>(m);
  return total;
}

// ---------------------------------------------------------------------------
// Monte Carlo g_N(z)

struct GNOptions {
  std::size_t trials = 200;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  bool control_variates = false;  // regress on tr X^{2k}, k <= 6, of every sampled GUE
  Eigen::Index dense_cap = default_dense_cap;
  bool force_dense = false;
};

/// One sampled configuration: the GUE eigen-decompositions of both legs.
struct ModelSample {
  std::vector<Eigen::SelfAdjointEigenSolver<CMatrix>> s, t;
};

inline ModelSample sample_model(GueSampler& g, std::size_t r, Eigen::Index n) {
  ModelSample out;
  for (std::size_t i = 0; i < r; ++i) out.s.emplace_back(g.gue(n).matrix());
  for (std::size_t i = 0; i < r; ++i) out.t.emplace_back(g.gue(n).matrix());
  return out;
}

namespace detail {

inline CMatrix cayley_from(const Eigen::SelfAdjointEigenSolver<CMatrix>& es) {
  const RVector& lam = es.eigenvalues();
  CVector d(lam.size());
  for (Eigen::Index k = 0; k < lam.size(); ++k) d(k) = cayley(lam(k));
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

// Eigenvalues of sum_i (c_i U_i + conj(c_i) U_i^*) for scalar c_i.
inline RVector leg_spectrum(const std::vector<CMatrix>& coef, const std::vector<Eigen::SelfAdjointEigenSolver<CMatrix>>& es,
                            Eigen::Index n) {
  if (es.size() == 1) {
    const Complex g = coef[0](0, 0);
    RVector out(n);
    const RVector& lam = es[0].eigenvalues();
    for (Eigen::Index k = 0; k < n; ++k) out(k) = 2 * std::real(g * cayley(lam(k)));
    return out;
  }
  CMatrix a = CMatrix::Zero(n, n);
  for (std::size_t i = 0; i < es.size(); ++i) {
    const CMatrix u = cayley_from(es[i]);
    a += coef[i](0, 0) * u + std::conj(coef[i](0, 0)) * u.adjoint();
  }
  return HermitianMatrix(a, 1e-10).eigenvalues();
}

inline std::vector<double> gue_controls(const ModelSample& smp) {
  std::vector<double> x;
  for (const auto* side : {&smp.s, &smp.t})
    for (const auto& es : *side) {
      const Eigen::ArrayXd l2 = es.eigenvalues().array().square();
      Eigen::ArrayXd p = l2;
      for (int k = 1; k <= 6; ++k) {
        x.push_back(p.mean());
        p *= l2;
      }
    }
  return x;
}

inline std::vector<double> gue_control_means(std::size_t legs, Eigen::Index n) {
  std::vector<double> mu;
  for (std::size_t l = 0; l < legs; ++l)
    for (int k = 1; k <= 6; ++k)
      mu.push_back(gue_word_expectation(base_word(std::vector<int>(static_cast<std::size_t>(2 * k), 1)))
                       .evaluate(static_cast<double>(n)));
  return mu;
}

}  // namespace detail

/// All m N^2 eigenvalues of S_N for one sample. For m = 1 the legs commute and the
/// spectrum is {xi + a_i + b_j}.
inline RVector model_spectrum(const ModelCoefficients& c, const ModelSample& smp, Eigen::Index n,
                              Eigen::Index dense_cap = default_dense_cap, bool force_dense = false) {
  if (c.m() == 1 && !force_dense) {
    const RVector a = c.r() ? detail::leg_spectrum(c.gamma, smp.s, n) : RVector::Zero(n);
    const RVector b = c.r() ? detail::leg_spectrum(c.beta, smp.t, n) : RVector::Zero(n);
    RVector out(n * n);
    const double x0 = c.xi(0, 0).real();
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) out(i * n + j) = x0 + a(i) + b(j);
    std::sort(out.data(), out.data() + out.size());
    return out;
  }
  std::vector<CMatrix> U, V;
  for (const auto& es : smp.s) U.push_back(detail::cayley_from(es));
  for (const auto& es : smp.t) V.push_back(detail::cayley_from(es));
  if (c.r() == 0) {
    U.push_back(CMatrix::Identity(n, n));
    V.push_back(CMatrix::Identity(n, n));
    ModelCoefficients c0 = c;
    c0.gamma = {CMatrix::Zero(c.m(), c.m())};
    c0.beta = {CMatrix::Zero(c.m(), c.m())};
    return build_SN(c0, U, V, dense_cap).eigenvalues();
  }
  return build_SN(c, U, V, dense_cap).eigenvalues();
}

/// Monte Carlo estimate of E[tr_m (x) tr_N (x) tr_N (z - S_N)^{-1}].
inline MCEstimate g_N_numeric(const ModelCoefficients& c, Complex z, Eigen::Index n, const GNOptions& opt = {}) {
  c.validate();
  if (z.imag() == 0) throw Error(ErrorKind::invalid_argument, "resolvent needs Im z != 0");
  if (n < 1) throw Error(ErrorKind::invalid_argument, "N must be >= 1");
  if ((c.m() != 1 || opt.force_dense) && c.m() * n * n > opt.dense_cap)
    throw Error(ErrorKind::size_cap, "m N^2 = " + std::to_string(c.m() * n * n) + " exceeds cap " +
                                         std::to_string(opt.dense_cap));
  const double bound = 1.0 / std::abs(z.imag());
  auto samples = run_trials(opt.trials, opt.seed, opt.threads, [&](std::uint64_t seed, std::size_t) {
    GueSampler g(seed);
    const ModelSample smp = sample_model(g, c.r(), n);
    const RVector lam = model_spectrum(c, smp, n, opt.dense_cap, opt.force_dense);
    Complex s = 0;
    for (Eigen::Index k = 0; k < lam.size(); ++k) s += 1.0 / (z - lam(k));
    s /= static_cast<double>(lam.size());
    if (std::abs(s) > bound * (1 + 1e-12) || (z.imag() > 0 ? s.imag() >= 0 : s.imag() <= 0))
      throw Error(ErrorKind::sanity_check, "resolvent trace violates |g| <= 1/|Im z| or the sign of Im g");
    return ControlledSample{s, opt.control_variates ? detail::gue_controls(smp) : std::vector<double>{}};
  });
  if (opt.control_variates && c.r() > 0)
    return control_variate_estimate(samples, detail::gue_control_means(2 * c.r(), n), opt.seed);
  std::vector<Complex> ys;
  ys.reserve(samples.size());
  for (const auto& s : samples) ys.push_back(s.y);
  return summarize(ys, opt.seed);
}

// ---------------------------------------------------------------------------
// N^{-2} fitting

struct FitResult {
  double slope = 0;
  double intercept = 0;  // log C of |d_N| ~ C N^slope
  double slope_std_error = 0;
  std::vector<double> residuals;  // log-space residuals, one per N in increasing order
  Complex c2;                     // least-squares C of d_N ~ C / N^2
  double c2_std_error = 0;
};

/// Weighted least-squares C of value_N - reference ~ C / N^2 (weights 1/stderr^2,
/// unweighted when some stderr is zero). Defined even when the differences are
/// not resolved above the noise, unlike the slope.
inline std::pair<Complex, double> n2_coefficient(const std::map<double, MCEstimate>& values, Complex reference) {
  if (values.empty()) throw Error(ErrorKind::invalid_argument, "no values to fit");
  bool weighted = true;
  for (const auto& [n, e] : values) weighted = weighted && e.std_error > 0;
  Complex num = 0;
  double den = 0;
  for (const auto& [n, e] : values) {
    const double w = weighted ? 1.0 / (e.std_error * e.std_error) : 1.0;
    num += w * (e.mean - reference) / (n * n);
    den += w / (n * n * n * n);
  }
  return {num / den, weighted ? 1.0 / std::sqrt(den) : 0.0};
}

/// Fits d_N = value_N - reference on the N^slope model, and C for slope fixed at -2.
inline FitResult fit_n2(const std::map<double, MCEstimate>& values, Complex reference, double noise_sigmas = 2.0) {
  if (values.size() < 3) throw Error(ErrorKind::invalid_argument, "fit needs at least 3 values of N");
  if (!std::isfinite(reference.real()) || !std::isfinite(reference.imag()))
    throw Error(ErrorKind::invalid_argument, "fit reference must be finite");
  std::vector<double> lx, ly;
  bool resolved = false;
  for (const auto& [n, e] : values) {
    const double d = std::abs(e.mean - reference);
    if (d > noise_sigmas * e.std_error) resolved = true;
    if (!(d > 0))
      throw Error(ErrorKind::degenerate_fit, "difference vanishes at N = " + std::to_string(n));
    lx.push_back(std::log(n));
    ly.push_back(std::log(d));
  }
  if (!resolved) throw Error(ErrorKind::degenerate_fit, "all differences are below the noise floor");

  const double k = static_cast<double>(lx.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i] / k;
    my += ly[i] / k;
  }
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  FitResult f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double rss = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    f.residuals.push_back(ly[i] - f.intercept - f.slope * lx[i]);
    rss += f.residuals.back() * f.residuals.back();
  }
  f.slope_std_error = lx.size() > 2 ? std::sqrt(rss / (k - 2) / sxx) : 0.0;

  const auto [c2, c2_se] = n2_coefficient(values, reference);
  f.c2 = c2;
  f.c2_std_error = c2_se;
  return f;
}

// ---------------------------------------------------------------------------
// Densities and spectral inclusion

/// Semicircle Cauchy transform (z - sqrt(z^2 - 4)) / 2 on the branch ~ 1/z at infinity.
inline Complex semicircle_g(Complex z) { return 0.5 * (z - std::sqrt(z - 2.0) * std::sqrt(z + 2.0)); }

struct DensitySample {
  double x;
  double rho;
};

/// rho(x) = -(1/pi) Im g(x + i eta).
inline std::vector<DensitySample> stieltjes_density(const std::function<Complex(Complex)>& g,
                                                    const std::vector<double>& grid, double eta) {
  if (!(eta > 0)) throw Error(ErrorKind::invalid_argument, "eta must be positive");
  std::vector<DensitySample> out;
  out.reserve(grid.size());
  for (double x : grid) out.push_back({x, -g(Complex(x, eta)).imag() / M_PI});
  return out;
}

inline std::vector<double> uniform_grid(double lo, double hi, double step) {
  if (!(step > 0) || !(hi >= lo)) throw Error(ErrorKind::invalid_argument, "bad grid");
  std::vector<double> g;
  const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  for (long k = 0; k <= n; ++k) g.push_back(lo + step * static_cast<double>(k));
  return g;
}

struct Interval {
  double lo, hi;
  bool contains(double x) const { return lo <= x && x <= hi; }
};

/// Maximal runs of grid points with rho > threshold, widened by half a grid step.
inline std::vector<Interval> support_from_density(const std::vector<DensitySample>& d, double threshold) {
  std::vector<Interval> out;
  const double half = d.size() > 1 ? 0.5 * (d[1].x - d[0].x) : 0.0;
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (d[k].rho <= threshold) continue;
    if (!out.empty() && k > 0 && d[k - 1].rho > threshold) {
      out.back().hi = d[k].x + half;
    } else {
      out.push_back({d[k].x - half, d[k].x + half});
    }
  }
  return out;
}

struct InclusionOptions {
  std::size_t trials = 40;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  double eta = 0.01;
  double threshold = 0.01;
  double grid_step = 0.005;
  int quadrature_nodes = 800;
  Eigen::Index dense_cap = default_dense_cap;
};

struct InclusionReport {
  Eigen::Index n = 0;
  double epsilon = 0;
  std::vector<Interval> support;  // estimated, before fattening
  std::vector<std::size_t> escapes;
  std::size_t total_eigs = 0;
  double clean_fraction() const {
    if (escapes.empty()) return 0;
    return static_cast<double>(std::count(escapes.begin(), escapes.end(), std::size_t(0))) /
           static_cast<double>(escapes.size());
  }
};

/// Support of the limiting spectral law, estimated from the smoothed density of g.
inline std::vector<Interval> estimate_support(const ModelCoefficients& c, const InclusionOptions& opt = {}) {
  const double m = c.radius() + 4 * opt.grid_step + 0.5;
  const auto grid = uniform_grid(-m, m, opt.grid_step);
  const auto dens = stieltjes_density([&](Complex z) { return g_quadrature(c, z, opt.quadrature_nodes); }, grid, opt.eta);
  return support_from_density(dens, opt.threshold);
}

/// Counts, per trial, the eigenvalues of S_N outside the support fattened by epsilon.
inline InclusionReport spectrum_inclusion_experiment(const ModelCoefficients& c, Eigen::Index n, double epsilon,
                                                     const std::vector<Interval>& support, const InclusionOptions& opt = {}) {
  c.validate();
  if (c.m() * n * n > opt.dense_cap)
    throw Error(ErrorKind::size_cap, "m N^2 = " + std::to_string(c.m() * n * n) + " exceeds cap " +
                                         std::to_string(opt.dense_cap));
  InclusionReport rep;
  rep.n = n;
  rep.epsilon = epsilon;
  rep.support = support;
  rep.escapes = run_trials(opt.trials, opt.seed, opt.threads, [&](std::uint64_t seed, std::size_t) {
    GueSampler g(seed);
    const RVector lam = model_spectrum(c, sample_model(g, c.r(), n), n, opt.dense_cap);
    std::size_t out = 0;
    for (Eigen::Index k = 0; k < lam.size(); ++k) {
      bool inside = false;
      for (const auto& iv : support) inside = inside || (iv.lo - epsilon <= lam(k) && lam(k) <= iv.hi + epsilon);
      if (!inside) ++out;
    }
    return out;
  });
  rep.total_eigs = static_cast<std::size_t>(c.m() * n * n);
  return rep;
}

inline InclusionReport spectrum_inclusion_experiment(const ModelCoefficients& c, Eigen::Index n, double epsilon,
                                                     const InclusionOptions& opt = {}) {
  return spectrum_inclusion_experiment(c, n, epsilon, estimate_support(c, opt), opt);
}

// ---------------------------------------------------------------------------
// CSV

inline void write_transform_csv(std::ostream& os, const std::map<double, MCEstimate>& rows) {
  os.precision(17);
  os << "N,trials,mean_re,mean_im,stderr\n";
  for (const auto& [n, e] : rows)
    os << n << ',' << e.trials << ',' << e.mean.real() << ',' << e.mean.imag() << ',' << e.std_error << '\n';
}

inline void write_density_csv(std::ostream& os, const std::vector<DensitySample>& d) {
  os.precision(17);
  os << "x,rho\n";
  for (const auto& s : d) os << s.x << ',' << s.rho << '\n';
}

inline void write_inclusion_csv(std::ostream& os, const InclusionReport& r) {
  os << "N,escapes,total_eigs\n";
  for (auto e : r.escapes) os << r.n << ',' << e << ',' << r.total_eigs << '\n';
}

}  // namespace nclab
