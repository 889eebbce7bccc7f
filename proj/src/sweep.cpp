#include "mlz/sweep.hpp"

#include "mlz/error.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace mlz {

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& job) {
  const std::size_t workers = std::min<std::size_t>(std::max(1u, threads), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          job(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<SweepRow> sweep(const ModelSpec& base, const std::vector<SweepAxis>& axes,
                            const MatrixFunction& evaluate, unsigned threads) {
  std::size_t total = axes.empty() ? 0 : 1;
  for (const auto& axis : axes) total *= axis.values.size();
  std::vector<SweepRow> rows(total);

  for (std::size_t r = 0; r < total; ++r) {
    std::size_t rest = r;
    rows[r].point.resize(axes.size());
    for (std::size_t k = axes.size(); k-- > 0;) {
      rows[r].point[k] = axes[k].values[rest % axes[k].values.size()];
      rest /= axes[k].values.size();
    }
  }

  parallel_for(total, threads, [&](std::size_t r) {
    SweepRow& row = rows[r];
    try {
      ModelSpec spec = base;
      for (std::size_t k = 0; k < axes.size(); ++k) spec = with_parameter(spec, axes[k].name, row.point[k]);
      row.matrix = evaluate(build_model(spec));
    } catch (const ConfigError&) {
      throw;
    } catch (const NumericalError& err) {
      row.error = err.what();
      row.numerical_failure = true;
    } catch (const Error& err) {
      row.error = err.what();
    }
  });
  return rows;
}

std::vector<SweepRow> sweep(const ModelSpec& base, const std::vector<SweepAxis>& axes,
                            const PropagationConfig& config, unsigned threads) {
  return sweep(
      base, axes, [&config](const MLZModel& m) { return numeric_transition_matrix(m, config); }, threads);
}

}  // namespace mlz
