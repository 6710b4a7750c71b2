#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <deque>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

#include "qsl/model.hpp"
#include "qsl/sde.hpp"
#include "qsl/types.hpp"

namespace qsl {

struct Histogram {
  std::vector<double> edges;  // bins+1 uniform edges over [0, 1]
  std::vector<long> counts;
};

// uniform bins over [0, 1]; the final bin is closed on the right so that a
// survival probability of exactly 1 is counted
inline Histogram histogram(const std::vector<double>& values, int bins) {
  if (bins < 1) throw ConfigError("histogram needs at least one bin");
  Histogram h;
  h.edges.resize(static_cast<size_t>(bins) + 1);
  for (int k = 0; k <= bins; ++k)
    h.edges[static_cast<size_t>(k)] = static_cast<double>(k) / static_cast<double>(bins);
  h.counts.assign(static_cast<size_t>(bins), 0);
  for (double v : values) {
    if (v < -1e-9 || v > 1.0 + 1e-9)
      throw ConfigError("histogram value outside [0, 1]: " + std::to_string(v));
    const double c = std::clamp(v, 0.0, 1.0);
    const auto idx = std::min(static_cast<long>(c * bins), static_cast<long>(bins) - 1);
    ++h.counts[static_cast<size_t>(idx)];
  }
  return h;
}

// pointwise mean and population standard deviation across trajectories
inline std::pair<std::vector<double>, std::vector<double>> stats_reduce(
    const std::vector<std::vector<double>>& trajectories) {
  if (trajectories.empty()) throw ConfigError("stats_reduce needs at least one trajectory");
  const size_t len = trajectories.front().size();
  for (const auto& tr : trajectories)
    if (tr.size() != len) throw ConfigError("stats_reduce: trajectories differ in length");
  std::vector<double> mean(len, 0.0), sd(len, 0.0);
  const double n = static_cast<double>(trajectories.size());
  for (const auto& tr : trajectories)
    for (size_t k = 0; k < len; ++k) mean[k] += tr[k];
  for (size_t k = 0; k < len; ++k) mean[k] /= n;
  for (const auto& tr : trajectories)
    for (size_t k = 0; k < len; ++k) {
      const double d = tr[k] - mean[k];
      sd[k] += d * d;
    }
  for (size_t k = 0; k < len; ++k) sd[k] = std::sqrt(std::max(0.0, sd[k] / n));
  return {std::move(mean), std::move(sd)};
}

struct ConvergenceCheck {
  bool performed = false;
  bool passed = true;
  double dt = 0.0, dt_half = 0.0;
  double mean_final = 0.0, mean_final_half = 0.0;
  double abs_diff = 0.0, threshold = 0.0;
};

struct EnsembleStats {
  std::vector<double> times;
  std::vector<double> mean_pb;
  std::vector<double> std_pb;  // population std across realizations
  Histogram terminal_hist;     // histogram of P_b(t_final)
  double max_norm_correction = 0.0;
  long n = 0;

  double std_error(size_t k) const {
    return std_pb[k] / std::sqrt(static_cast<double>(std::max(1L, n)));
  }
};

struct EnsembleOptions {
  int threads = 0;  // 0 = hardware concurrency
  int hist_bins = 20;
  bool renormalize = true;
  // invoked in realization order (0, 1, ..., n-1) with each survival series;
  // runs on the merge path, so it may write to shared sinks without locking
  std::function<void(long, const std::vector<double>&)> path_sink;
};

namespace detail {

struct BlockResult {
  std::vector<double> sum, sumsq;
  std::vector<double> terminal;
  std::vector<std::vector<double>> paths;
  double max_drift = 0.0;
};

}  // namespace detail

// Runs n_realizations independent trajectories and reduces them to pointwise
// statistics. Work is dealt out in fixed blocks of 16 realizations and merged
// strictly in block order through a bounded reorder buffer, so the reduction
// (and every output byte derived from it) is identical for any worker count.
inline EnsembleStats run_ensemble(const Scenario& s, const EnsembleOptions& opts = {}) {
  s.validate();
  constexpr long kBlock = 16;
  const long n_real = s.n_realizations;
  const long n_blocks = (n_real + kBlock - 1) / kBlock;
  const size_t len = static_cast<size_t>(s.grid.n_steps()) + 1;

  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  long workers = opts.threads > 0 ? opts.threads : static_cast<long>(hw);
  workers = std::clamp(workers, 1L, n_blocks);
  const size_t buffer_cap = static_cast<size_t>(std::max(2 * workers, 8L));

  // moments are accumulated around 1 (the initial survival): the shift is an
  // exact float subtraction on [0.5, 1], so the variance keeps full precision
  // even while the ensemble spread is still many orders below 1
  const SdeOptions sde_opts{opts.renormalize, false};
  const auto compute_block = [&](long b) {
    detail::BlockResult r;
    r.sum.assign(len, 0.0);
    r.sumsq.assign(len, 0.0);
    const long lo = b * kBlock, hi = std::min(n_real, lo + kBlock);
    for (long real = lo; real < hi; ++real) {
      Trajectory tr = integrate_trajectory(s, real, sde_opts);
      for (size_t k = 0; k < len; ++k) {
        const double d = tr.survival[k] - 1.0;
        r.sum[k] += d;
        r.sumsq[k] += d * d;
      }
      r.terminal.push_back(tr.survival.back());
      r.max_drift = std::max(r.max_drift, tr.max_norm_drift);
      if (opts.path_sink) r.paths.push_back(std::move(tr.survival));
    }
    return r;
  };

  std::vector<double> sum(len, 0.0), sumsq(len, 0.0);
  std::vector<double> terminal;
  terminal.reserve(static_cast<size_t>(n_real));
  double max_drift = 0.0;
  const auto merge_block = [&](long b, detail::BlockResult&& r) {
    for (size_t k = 0; k < len; ++k) {
      sum[k] += r.sum[k];
      sumsq[k] += r.sumsq[k];
    }
    terminal.insert(terminal.end(), r.terminal.begin(), r.terminal.end());
    max_drift = std::max(max_drift, r.max_drift);
    if (opts.path_sink)
      for (size_t j = 0; j < r.paths.size(); ++j)
        opts.path_sink(b * kBlock + static_cast<long>(j), r.paths[j]);
  };

  if (workers == 1) {
    for (long b = 0; b < n_blocks; ++b) merge_block(b, compute_block(b));
  } else {
    std::atomic<long> next_block{0};
    std::mutex mtx;
    std::condition_variable cv_space, cv_ready;
    std::map<long, detail::BlockResult> ready;
    long merged = 0;
    std::exception_ptr failure;

    const auto worker = [&] {
      for (;;) {
        const long b = next_block.fetch_add(1);
        if (b >= n_blocks) return;
        detail::BlockResult r;
        try {
          r = compute_block(b);
        } catch (...) {
          std::lock_guard<std::mutex> lk(mtx);
          if (!failure) failure = std::current_exception();
          next_block.store(n_blocks);
          cv_ready.notify_all();
          cv_space.notify_all();
          return;
        }
        std::unique_lock<std::mutex> lk(mtx);
        cv_space.wait(lk, [&] {
          return failure || b < merged + static_cast<long>(buffer_cap);
        });
        if (failure) return;
        ready.emplace(b, std::move(r));
        cv_ready.notify_all();
      }
    };

    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (long w = 0; w < workers; ++w) pool.emplace_back(worker);

    {
      std::unique_lock<std::mutex> lk(mtx);
      while (merged < n_blocks && !failure) {
        cv_ready.wait(lk, [&] { return failure || ready.count(merged) > 0; });
        if (failure) break;
        auto node = ready.extract(merged);
        lk.unlock();
        merge_block(merged, std::move(node.mapped()));
        lk.lock();
        ++merged;
        cv_space.notify_all();
      }
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  EnsembleStats out;
  out.n = n_real;
  out.times.resize(len);
  for (size_t k = 0; k < len; ++k) out.times[k] = s.grid.time(static_cast<long>(k));
  out.mean_pb.resize(len);
  out.std_pb.resize(len);
  const double n = static_cast<double>(n_real);
  for (size_t k = 0; k < len; ++k) {
    const double shifted_mean = sum[k] / n;
    out.mean_pb[k] = 1.0 + shifted_mean;
    out.std_pb[k] = std::sqrt(std::max(0.0, sumsq[k] / n - shifted_mean * shifted_mean));
  }
  out.terminal_hist = histogram(terminal, opts.hist_bins);
  out.max_norm_correction = max_drift;
  return out;
}

}  // namespace qsl
