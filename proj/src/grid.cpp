#include "fraclie/grid.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include "fraclie/errors.hpp"

namespace fraclie {

void GridSpec::validate() const {
  if (!(t0 > 0.0)) throw InvalidParameter("grid requires t0 > 0");
  if (nx < 2 || nt < 2) throw InvalidParameter("grid requires at least 2 points per axis");
  if (!(x1 > x0) || !(t1 > t0)) throw InvalidParameter("grid ranges must be increasing");
}

const char* path_name(EvalPath p) {
  switch (p) {
    case EvalPath::ExactMonomial: return "exact-monomial";
    case EvalPath::Quadrature: return "quadrature";
    case EvalPath::Analytic: return "analytic";
  }
  return "?";
}

double ResidualReport::max() const {
  double m = 0.0;
  for (const auto& c : components) m = std::max(m, c.max);
  return m;
}

ResidualAccumulator::ResidualAccumulator(std::vector<std::string> names)
    : names_(std::move(names)), max_(names_.size(), 0.0), sumsq_(names_.size(), 0.0), count_(names_.size(), 0) {}

void ResidualAccumulator::add(std::size_t component, double residual) {
  const double a = std::abs(residual);
  if (std::isnan(a)) {
    max_[component] = a;
  } else {
    max_[component] = std::isnan(max_[component]) ? max_[component] : std::max(max_[component], a);
  }
  sumsq_[component] += a * a;
  ++count_[component];
}

std::vector<ResidualStat> ResidualAccumulator::finish() const {
  std::vector<ResidualStat> out;
  for (std::size_t i = 0; i < names_.size(); ++i) {
    const double rms = count_[i] ? std::sqrt(sumsq_[i] / static_cast<double>(count_[i])) : 0.0;
    out.push_back({names_[i], max_[i], rms});
  }
  return out;
}

unsigned worker_count() {
  if (const char* env = std::getenv("FRACLIE_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && n > 0) return static_cast<unsigned>(std::min(n, 256L));
  }
  return 1;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const unsigned workers = std::min<std::size_t>(worker_count(), std::max<std::size_t>(n, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace fraclie
