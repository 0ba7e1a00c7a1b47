#include "meetsense/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>

namespace meetsense::fft {
namespace {

// FFTW plan creation is not thread-safe and planning for large sizes is not
// free, so plans are cached per (size, direction) and executions serialized.
// Transforms here are short compared to the surrounding math; a single lock
// keeps the wrapper simple.
struct PlanCache {
    std::mutex mutex;
    std::map<std::pair<std::size_t, int>, fftw_plan> plans;
    std::size_t buf_size = 0;
    fftw_complex* in = nullptr;
    fftw_complex* out = nullptr;

    ~PlanCache() {
        for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
        if (in) fftw_free(in);
        if (out) fftw_free(out);
    }

    void ensure_buffers(std::size_t n) {
        if (n <= buf_size) return;
        if (in) fftw_free(in);
        if (out) fftw_free(out);
        in = fftw_alloc_complex(n);
        out = fftw_alloc_complex(n);
        buf_size = n;
    }

    fftw_plan plan_for(std::size_t n, int sign) {
        auto it = plans.find({n, sign});
        if (it != plans.end()) return it->second;
        ensure_buffers(n);
        fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), in, out, sign, FFTW_ESTIMATE);
        plans.emplace(std::make_pair(n, sign), p);
        return p;
    }
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

std::vector<std::complex<double>> transform(const std::complex<double>* x,
                                            std::size_t n, int sign) {
    std::vector<std::complex<double>> result(n);
    if (n == 0) return result;
    auto& c = cache();
    std::lock_guard<std::mutex> lock(c.mutex);
    fftw_plan p = c.plan_for(n, sign);
    c.ensure_buffers(n);
    std::memcpy(c.in, x, n * sizeof(fftw_complex));
    fftw_execute_dft(p, c.in, c.out);
    std::memcpy(result.data(), c.out, n * sizeof(fftw_complex));
    return result;
}

}  // namespace

std::vector<std::complex<double>> forward(std::span<const double> x) {
    std::vector<std::complex<double>> cx(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) cx[i] = {x[i], 0.0};
    return transform(cx.data(), cx.size(), FFTW_FORWARD);
}

std::vector<std::complex<double>> forward(const std::vector<std::complex<double>>& x) {
    return transform(x.data(), x.size(), FFTW_FORWARD);
}

std::vector<std::complex<double>> inverse(const std::vector<std::complex<double>>& x) {
    auto result = transform(x.data(), x.size(), FFTW_BACKWARD);
    const double scale = x.empty() ? 1.0 : 1.0 / static_cast<double>(x.size());
    for (auto& v : result) v *= scale;
    return result;
}

std::size_t next_fast_size(std::size_t n) {
    if (n == 0) return 1;
    for (std::size_t m = n;; ++m) {
        std::size_t r = m;
        for (std::size_t f : {2u, 3u, 5u, 7u}) {
            while (r % f == 0) r /= f;
        }
        if (r == 1) return m;
    }
}

std::vector<double> cross_correlate(std::span<const double> x, std::span<const double> y) {
    const std::size_t nx = x.size(), ny = y.size();
    if (nx == 0 || ny == 0) return {};
    const std::size_t nlag = nx + ny - 1;
    const std::size_t n = next_fast_size(nlag);

    std::vector<std::complex<double>> a(n), b(n);
    for (std::size_t i = 0; i < nx; ++i) a[i] = {x[i], 0.0};
    for (std::size_t i = 0; i < ny; ++i) b[i] = {y[i], 0.0};
    auto fa = forward(a);
    auto fb = forward(b);
    for (std::size_t i = 0; i < n; ++i) fa[i] = std::conj(fa[i]) * fb[i];
    auto c = inverse(fa);

    // c (circular) index (m mod n) holds lag m; unwrap to -(nx-1)..(ny-1).
    std::vector<double> out(nlag);
    for (std::size_t i = 0; i < nlag; ++i) {
        long m = static_cast<long>(i) - static_cast<long>(nx - 1);
        std::size_t idx = static_cast<std::size_t>((m + static_cast<long>(n)) % static_cast<long>(n));
        out[i] = c[idx].real();
    }
    return out;
}

}  // namespace meetsense::fft
