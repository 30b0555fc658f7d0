#include "burgers_rg/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <vector>

#include "burgers_rg/errors.hpp"

namespace burgers_rg::fft {
namespace {

// fftw_plan_* is not reentrant; fftw_execute_dft on an existing plan is.
std::mutex plan_mutex;

struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

class PlanCache {
public:
    ~PlanCache() {
        for (auto& [n, p] : plans_) {
            fftw_destroy_plan(p.fwd);
            fftw_destroy_plan(p.bwd);
        }
    }

    const PlanPair& get(std::size_t n) {
        std::lock_guard lock(plan_mutex);
        auto it = plans_.find(n);
        if (it != plans_.end()) return it->second;
        std::vector<cplx> a(n), b(n);
        auto* pa = reinterpret_cast<fftw_complex*>(a.data());
        auto* pb = reinterpret_cast<fftw_complex*>(b.data());
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        const int ni = static_cast<int>(n);
        PlanPair p;
        p.fwd = fftw_plan_dft_1d(ni, pa, pb, FFTW_FORWARD, flags);
        p.bwd = fftw_plan_dft_1d(ni, pa, pb, FFTW_BACKWARD, flags);
        if (!p.fwd || !p.bwd) fail(ErrorKind::solver, "fftw plan creation failed");
        return plans_.emplace(n, p).first->second;
    }

private:
    std::map<std::size_t, PlanPair> plans_;
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

void execute(fftw_plan plan, std::span<const cplx> in, std::span<cplx> out) {
    if (in.size() != out.size()) fail(ErrorKind::invalid_argument, "fft: size mismatch");
    // FFTW wants a mutable input pointer even for out-of-place transforms that
    // leave the input untouched.
    auto* pin = reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data()));
    auto* pout = reinterpret_cast<fftw_complex*>(out.data());
    if (static_cast<const void*>(in.data()) == static_cast<void*>(out.data())) {
        std::vector<cplx> tmp(in.begin(), in.end());
        fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(tmp.data()), pout);
        return;
    }
    fftw_execute_dft(plan, pin, pout);
}

} // namespace

void forward(std::span<const cplx> in, std::span<cplx> out) {
    execute(cache().get(in.size()).fwd, in, out);
}

void backward(std::span<const cplx> in, std::span<cplx> out) {
    execute(cache().get(in.size()).bwd, in, out);
}

} // namespace burgers_rg::fft
