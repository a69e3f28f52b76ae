#include "vlab/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#if defined(__aarch64__)
#include <arm_neon.h>
#endif

namespace vlab::kern {

#if defined(__x86_64__)
// Defined in kernels_avx2.cpp (compiled with -mavx2 -mfma); returns nullptr
// when the running CPU lacks the features.
const Backend* detail_avx2_backend();
#endif

namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double max_abs_scalar(const double* x, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = std::fabs(x[i]);
        if (v > m) m = v;
    }
    return m;
}

double max_abs_diff_scalar(const double* a, const double* b, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = std::fabs(a[i] - b[i]);
        if (v > m) m = v;
    }
    return m;
}

double sum_abs_scalar(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += std::fabs(x[i]);
    return acc;
}

#if defined(__aarch64__)

double dot_neon(const double* a, const double* b, std::size_t n) {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
        acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
    }
    double acc = vaddvq_f64(acc0) + vaddvq_f64(acc1);
    for (; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double max_abs_neon(const double* x, std::size_t n) {
    float64x2_t m = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) m = vmaxq_f64(m, vabsq_f64(vld1q_f64(x + i)));
    double r = vmaxvq_f64(m);
    for (; i < n; ++i) r = std::fmax(r, std::fabs(x[i]));
    return r;
}

double max_abs_diff_neon(const double* a, const double* b, std::size_t n) {
    float64x2_t m = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        m = vmaxq_f64(m, vabsq_f64(vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i))));
    double r = vmaxvq_f64(m);
    for (; i < n; ++i) r = std::fmax(r, std::fabs(a[i] - b[i]));
    return r;
}

double sum_abs_neon(const double* x, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vabsq_f64(vld1q_f64(x + i)));
    double r = vaddvq_f64(acc);
    for (; i < n; ++i) r += std::fabs(x[i]);
    return r;
}

const Backend kNeon{"neon", dot_neon, max_abs_neon, max_abs_diff_neon, sum_abs_neon};

#endif // __aarch64__

const Backend kScalar{"scalar", dot_scalar, max_abs_scalar, max_abs_diff_scalar,
                      sum_abs_scalar};

const Backend* pick_default() {
    if (const char* env = std::getenv("VLAB_KERNEL_BACKEND")) {
        const std::string_view want(env);
#if defined(__x86_64__)
        if (want == "avx2") {
            if (const Backend* avx2 = detail_avx2_backend()) return avx2;
        }
#elif defined(__aarch64__)
        if (want == "neon") return &kNeon;
#endif
        if (want == "scalar") return &kScalar;
    }
#if defined(__x86_64__)
    if (const Backend* avx2 = detail_avx2_backend()) return avx2;
#elif defined(__aarch64__)
    return &kNeon;
#endif
    return &kScalar;
}

const Backend* g_active = nullptr;

} // namespace

const Backend& scalar_backend() { return kScalar; }

std::vector<const Backend*> available_backends() {
    std::vector<const Backend*> out{&kScalar};
#if defined(__x86_64__)
    if (const Backend* avx2 = detail_avx2_backend()) out.push_back(avx2);
#elif defined(__aarch64__)
    out.push_back(&kNeon);
#endif
    return out;
}

const Backend& active_backend() {
    if (!g_active) g_active = pick_default();
    return *g_active;
}

bool set_active_backend(std::string_view name) {
    for (const Backend* b : available_backends()) {
        if (name == b->name) {
            g_active = b;
            return true;
        }
    }
    return false;
}

double dot(const double* a, const double* b, std::size_t n) {
    return active_backend().dot(a, b, n);
}
double max_abs(const double* x, std::size_t n) { return active_backend().max_abs(x, n); }
double max_abs_diff(const double* a, const double* b, std::size_t n) {
    return active_backend().max_abs_diff(a, b, n);
}
double sum_abs(const double* x, std::size_t n) { return active_backend().sum_abs(x, n); }

} // namespace vlab::kern
