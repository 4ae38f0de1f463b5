#ifndef FRACLIE_GRID_HPP
#define FRACLIE_GRID_HPP

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace fraclie {

/// Value and the partial derivatives needed by the residual checks.
struct Jet {
  double value = 0.0;
  double dx = 0.0;
  double dt = 0.0;
  double dxx = 0.0;
};

using JetFn = std::function<Jet(double x, double t)>;

/// Tensor grid on [x0, x1] x [t0, t1]; t0 > 0.
struct GridSpec {
  double x0 = 0.0, x1 = 1.0;
  int nx = 2;
  double t0 = 1.0, t1 = 2.0;
  int nt = 2;

  /// Throws InvalidParameter unless t0 > 0, nx >= 2, nt >= 2 and ranges are ordered.
  void validate() const;
  double x(int i) const { return x0 + (x1 - x0) * i / (nx - 1); }
  double t(int j) const { return t0 + (t1 - t0) * j / (nt - 1); }
  std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(nt); }
};

enum class EvalPath { ExactMonomial, Quadrature, Analytic };
const char* path_name(EvalPath p);

/// Max and RMS of one residual component.
struct ResidualStat {
  std::string name;
  double max = 0.0;
  double rms = 0.0;
};

struct ResidualReport {
  std::string check;
  std::string subject;
  EvalPath path = EvalPath::Analytic;
  std::vector<ResidualStat> components;
  GridSpec grid;
  std::map<std::string, std::string> parameters;

  double max() const;
};

/// Accumulates per-point residuals into max and RMS.
class ResidualAccumulator {
 public:
  explicit ResidualAccumulator(std::vector<std::string> names);
  void add(std::size_t component, double residual);
  std::vector<ResidualStat> finish() const;

 private:
  std::vector<std::string> names_;
  std::vector<double> max_, sumsq_;
  std::vector<std::size_t> count_;
};

/// Number of worker threads: FRACLIE_THREADS if set and positive, else 1.
unsigned worker_count();

/// Runs body(i) for i in [0, n) on worker_count() threads. The first
/// exception thrown by any task is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace fraclie

#endif
