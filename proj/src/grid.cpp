#include "wap/grid.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace wap {

GridSpec GridSpec::uniform(double a, double b, std::size_t count) {
    if (count == 0) throw std::invalid_argument("grid: count must be positive");
    if (!(a <= b)) throw std::invalid_argument("grid: start exceeds stop");
    GridSpec g;
    g.kind_ = Kind::Uniform;
    if (count == 1) {
        g.values_ = {a};
        return g;
    }
    g.values_.resize(count);
    for (std::size_t i = 0; i < count; ++i)
        g.values_[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1);
    g.values_.back() = b;
    return g;
}

GridSpec GridSpec::uniform_step(double a, double b, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("grid: step must be positive");
    if (!(a <= b)) throw std::invalid_argument("grid: start exceeds stop");
    const auto n = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
    GridSpec g;
    g.kind_ = Kind::Uniform;
    g.values_.resize(n);
    for (std::size_t i = 0; i < n; ++i) g.values_[i] = a + step * static_cast<double>(i);
    return g;
}

GridSpec GridSpec::geometric(double a, double b, std::size_t count) {
    if (!(a > 0.0) || !(b >= a)) throw std::invalid_argument("grid: geometric grid needs 0 < start <= stop");
    if (count == 0) throw std::invalid_argument("grid: count must be positive");
    GridSpec g;
    g.kind_ = Kind::Geometric;
    if (count == 1) {
        g.values_ = {a};
        return g;
    }
    g.values_.resize(count);
    const double r = std::log(b / a);
    for (std::size_t i = 0; i < count; ++i)
        g.values_[i] = a * std::exp(r * static_cast<double>(i) / static_cast<double>(count - 1));
    g.values_.front() = a;
    g.values_.back() = b;
    return g;
}

GridSpec GridSpec::points(std::vector<double> pts) {
    if (pts.empty()) throw std::invalid_argument("grid: empty point list");
    if (!std::is_sorted(pts.begin(), pts.end())) throw std::invalid_argument("grid: points must be sorted");
    GridSpec g;
    g.kind_ = Kind::Explicit;
    g.values_ = std::move(pts);
    return g;
}

double GridSpec::first() const {
    if (values_.empty()) throw std::logic_error("grid: empty");
    return values_.front();
}

double GridSpec::last() const {
    if (values_.empty()) throw std::logic_error("grid: empty");
    return values_.back();
}

std::string GridSpec::describe() const {
    std::ostringstream os;
    const char* k = kind_ == Kind::Uniform ? "uniform" : kind_ == Kind::Geometric ? "geometric" : "points";
    os << k << "(" << (values_.empty() ? 0.0 : values_.front()) << ".."
       << (values_.empty() ? 0.0 : values_.back()) << ", n=" << values_.size() << ")";
    return os.str();
}

std::vector<std::size_t> trailing_indices(const std::vector<double>& grid) {
    std::vector<std::size_t> idx;
    if (grid.empty()) return idx;
    const double cut = grid.back() > 0.0 ? grid.back() / 2.0 : grid.back();
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (grid[i] >= cut) idx.push_back(i);
    if (idx.size() < 2 && grid.size() >= 2) idx = {grid.size() - 2, grid.size() - 1};
    return idx;
}

double trailing_max(const std::vector<double>& grid, const std::vector<double>& vals) {
    if (grid.size() != vals.size()) throw std::invalid_argument("trailing_max: size mismatch");
    double m = -INFINITY;
    for (std::size_t i : trailing_indices(grid)) m = std::max(m, vals[i]);
    return m;
}

namespace {
std::atomic<int> g_jobs{1};
}

void set_default_jobs(int jobs) { g_jobs = std::max(1, jobs); }
int default_jobs() { return g_jobs.load(); }

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
    if (jobs <= 0) jobs = default_jobs();
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lk(err_mu);
                    if (!err) err = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace wap
