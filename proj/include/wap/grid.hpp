#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace wap {

// A finite sample of an interval: uniform, geometric or an explicit list.
class GridSpec {
public:
    enum class Kind { Uniform, Geometric, Explicit };

    static GridSpec uniform(double a, double b, std::size_t count);
    static GridSpec uniform_step(double a, double b, double step);
    static GridSpec geometric(double a, double b, std::size_t count);
    static GridSpec points(std::vector<double> pts);

    Kind kind() const { return kind_; }
    double first() const;
    double last() const;
    std::size_t size() const { return values_.size(); }
    const std::vector<double>& values() const { return values_; }
    std::string describe() const;

private:
    Kind kind_ = Kind::Explicit;
    std::vector<double> values_;
};

// Indices of the trailing part used for limsup estimates: grid points
// g >= g_last / 2 (the last octave), and never fewer than two points.
std::vector<std::size_t> trailing_indices(const std::vector<double>& grid);

// Maximum of vals over trailing_indices(grid).
double trailing_max(const std::vector<double>& grid, const std::vector<double>& vals);

// Run fn(i) for i in [0, n) on up to `jobs` threads. Results are indexed,
// so output does not depend on scheduling.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

// Process-wide default for parallel_for (set by the CLI --jobs flag).
void set_default_jobs(int jobs);
int default_jobs();

}  // namespace wap
