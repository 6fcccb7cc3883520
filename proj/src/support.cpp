#include <cmath>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <thread>
#include <vector>

#include "twistbeam/errors.hpp"
#include "twistbeam/numeric.hpp"
#include "twistbeam/parallel.hpp"

namespace twistbeam {

void warn(const std::string& message) {
    static std::mutex m;
    std::lock_guard<std::mutex> lock(m);
    std::cerr << "twistbeam: warning: " << message << "\n";
}

int thread_budget() {
    if (const char* env = std::getenv("TWISTBEAM_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn) {
    const int budget = thread_budget();
    if (budget <= 1 || n < 256) {
        fn(0, n);
        return;
    }
    const std::size_t workers = std::min<std::size_t>(budget, n);
    const std::size_t chunk = (n + workers - 1) / workers;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
    }
    for (auto& t : pool) t.join();
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw ValidationError("linear_fit: need two equal-length samples at least");
    const auto n = static_cast<double>(x.size());
    KahanSum sx, sy, sxx, sxy;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx.add(x[i]);
        sy.add(y[i]);
        sxx.add(x[i] * x[i]);
        sxy.add(x[i] * y[i]);
    }
    const double det = n * sxx.value() - sx.value() * sx.value();
    if (det == 0.0) throw ValidationError("linear_fit: degenerate abscissae");
    LinearFit fit;
    fit.slope = (n * sxy.value() - sx.value() * sy.value()) / det;
    fit.intercept = (sy.value() - fit.slope * sx.value()) / n;
    KahanSum rss;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        rss.add(r * r);
    }
    fit.rms_residual = std::sqrt(rss.value() / n);
    return fit;
}

} // namespace twistbeam
