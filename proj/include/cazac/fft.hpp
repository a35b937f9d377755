// Thin FFTW wrapper: in-place complex transforms with a process-wide plan cache.
#pragma once

#include <fftw3.h>

#include <cstddef>
#include <map>
#include <mutex>
#include <span>
#include <utility>

#include "cazac/types.hpp"

namespace cazac::detail {

class FftPlanCache {
public:
    FftPlanCache() = default;
    FftPlanCache(const FftPlanCache&) = delete;
    FftPlanCache& operator=(const FftPlanCache&) = delete;

    ~FftPlanCache()
    {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    // The FFTW planner is not thread-safe; plan execution with the new-array
    // interface is, so only lookup/creation holds the lock.
    fftw_plan get(int n, int sign)
    {
        std::lock_guard lock(mutex_);
        auto it = plans_.find({n, sign});
        if (it != plans_.end()) return it->second;
        fftw_complex* scratch = fftw_alloc_complex(static_cast<std::size_t>(n));
        fftw_plan plan = fftw_plan_dft_1d(n, scratch, scratch, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(scratch);
        plans_.emplace(std::pair{n, sign}, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::pair<int, int>, fftw_plan> plans_;
};

inline FftPlanCache& plan_cache()
{
    static FftPlanCache cache;
    return cache;
}

/// Unnormalized forward transform, X[k] = sum_n x[n] exp(-j 2 pi k n / N).
inline void fft_forward(std::span<cplx> data)
{
    if (data.empty()) return;
    auto* raw = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan_cache().get(static_cast<int>(data.size()), FFTW_FORWARD), raw, raw);
}

/// Unnormalized inverse transform (no 1/N factor).
inline void fft_backward(std::span<cplx> data)
{
    if (data.empty()) return;
    auto* raw = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan_cache().get(static_cast<int>(data.size()), FFTW_BACKWARD), raw, raw);
}

} // namespace cazac::detail
