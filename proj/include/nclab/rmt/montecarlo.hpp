#pragma once

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "nclab/rmt/matrix.hpp"

namespace nclab {

/// Monte Carlo mean with standard error (sample std / sqrt(trials)); for complex
/// data std_error combines both parts, sqrt(var re + var im).
struct MCEstimate {
  Complex mean;
  double std_error = 0;
  double std_error_re = 0;
  double std_error_im = 0;
  std::size_t trials = 0;
  std::uint64_t base_seed = 0;
};

/// Sum in a fixed binary tree, so the result does not depend on thread timing.
template <typename T>
T pairwise_sum(const T* data, std::size_t n) {
  if (n == 0) return T{};
  if (n <= 8) {
    T s = data[0];
    for (std::size_t k = 1; k < n; ++k) s += data[k];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(data, h) + pairwise_sum(data + h, n - h);
}

template <typename T>
T pairwise_sum(const std::vector<T>& v) {
  return pairwise_sum(v.data(), v.size());
}

inline unsigned resolve_threads(unsigned threads) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  return threads;
}

/// Runs fn(seed, t) for t < trials on a small thread pool; result t lands in slot t.
template <typename F>
auto run_trials(std::size_t trials, std::uint64_t base_seed, unsigned threads, F&& fn) {
  using R = decltype(fn(std::uint64_t{}, std::size_t{}));
  std::vector<R> out(trials);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= trials) return;
      try {
        out[t] = fn(trial_seed(base_seed, t), t);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = trials;
        return;
      }
    }
  };
  threads = std::min<unsigned>(resolve_threads(threads), static_cast<unsigned>(std::max<std::size_t>(trials, 1)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

inline MCEstimate summarize(const std::vector<Complex>& samples, std::uint64_t base_seed) {
  const std::size_t t = samples.size();
  if (t < 2) throw Error(ErrorKind::invalid_argument, "Monte Carlo estimates need at least 2 trials");
  MCEstimate e;
  e.trials = t;
  e.base_seed = base_seed;
  e.mean = pairwise_sum(samples) / static_cast<double>(t);
  std::vector<double> dre(t), dim(t);
  for (std::size_t k = 0; k < t; ++k) {
    dre[k] = std::norm(samples[k].real() - e.mean.real());
    dim[k] = std::norm(samples[k].imag() - e.mean.imag());
  }
  const double vre = pairwise_sum(dre) / static_cast<double>(t - 1);
  const double vim = pairwise_sum(dim) / static_cast<double>(t - 1);
  e.std_error_re = std::sqrt(vre / static_cast<double>(t));
  e.std_error_im = std::sqrt(vim / static_cast<double>(t));
  e.std_error = std::sqrt((vre + vim) / static_cast<double>(t));
  return e;
}

/// Mean and standard error of fn(sampler, N) over independent trials; the
/// sampler of trial t is seeded with trial_seed(base_seed, t).
template <typename F>
MCEstimate mc_trace(F&& fn, Eigen::Index n, std::size_t trials, std::uint64_t base_seed, unsigned threads = 1) {
  if (trials < 2) throw Error(ErrorKind::invalid_argument, "Monte Carlo estimates need at least 2 trials");
  auto samples = run_trials(trials, base_seed, threads, [&](std::uint64_t seed, std::size_t) {
    GueSampler s(seed);
    return Complex(fn(s, n));
  });
  return summarize(samples, base_seed);
}

/// One trial of an observable together with control variables of known mean.
struct ControlledSample {
  Complex y;
  std::vector<double> x;
};

/// Regression (control-variate) estimate of E[y]: ybar - b (xbar - mu), with b the
/// least-squares slope of y on x; the error comes from the regression residuals.
inline MCEstimate control_variate_estimate(const std::vector<ControlledSample>& samples,
                                           const std::vector<double>& control_means, std::uint64_t base_seed) {
  const std::size_t t = samples.size();
  const std::size_t k = control_means.size();
  if (t < k + 3) throw Error(ErrorKind::invalid_argument, "too few trials for the number of controls");
  Eigen::MatrixXd x(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(k));
  Eigen::VectorXd yr(static_cast<Eigen::Index>(t)), yi(static_cast<Eigen::Index>(t));
  for (std::size_t s = 0; s < t; ++s) {
    if (samples[s].x.size() != k) throw Error(ErrorKind::size_mismatch, "control vector of wrong length");
    for (std::size_t j = 0; j < k; ++j) x(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(j)) = samples[s].x[j];
    yr(static_cast<Eigen::Index>(s)) = samples[s].y.real();
    yi(static_cast<Eigen::Index>(s)) = samples[s].y.imag();
  }
  const Eigen::RowVectorXd xbar = x.colwise().mean();
  const Eigen::MatrixXd xc = x.rowwise() - xbar;
  Eigen::RowVectorXd mu(static_cast<Eigen::Index>(k));
  for (std::size_t j = 0; j < k; ++j) mu(static_cast<Eigen::Index>(j)) = control_means[j];

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xc);
  auto part = [&](const Eigen::VectorXd& y, double& mean, double& se) {
    const Eigen::VectorXd yc = y.array() - y.mean();
    const Eigen::VectorXd b = qr.solve(yc);
    mean = y.mean() - (xbar - mu).dot(b);
    const Eigen::VectorXd r = yc - xc * b;
    const double dof = static_cast<double>(t) - static_cast<double>(k) - 1.0;
    se = std::sqrt(r.squaredNorm() / dof / static_cast<double>(t));
  };
  MCEstimate e;
  double mr = 0, mi = 0;
  part(yr, mr, e.std_error_re);
  part(yi, mi, e.std_error_im);
  e.mean = Complex(mr, mi);
  e.std_error = std::hypot(e.std_error_re, e.std_error_im);
  e.trials = t;
  e.base_seed = base_seed;
  return e;
}

}  // namespace nclab
