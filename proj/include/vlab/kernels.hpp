#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace vlab::kern {

/// A set of array kernels. The scalar backend is the reference; SIMD
/// backends must agree with it within floating-point reassociation slack
/// (see the equivalence tests).
struct Backend {
    const char* name;
    double (*dot)(const double* a, const double* b, std::size_t n);
    double (*max_abs)(const double* x, std::size_t n);
    double (*max_abs_diff)(const double* a, const double* b, std::size_t n);
    double (*sum_abs)(const double* x, std::size_t n);
};

const Backend& scalar_backend();
std::vector<const Backend*> available_backends();

/// Backend selected at startup from CPU features (scalar unless AVX2+FMA,
/// NEON on aarch64). Selection is deterministic on a given machine.
const Backend& active_backend();

/// Force a backend by name ("scalar", "avx2", "neon"); returns false if the
/// name is unknown or unavailable on this CPU. Intended for tests.
bool set_active_backend(std::string_view name);

// Convenience wrappers through the active backend.
double dot(const double* a, const double* b, std::size_t n);
double max_abs(const double* x, std::size_t n);
double max_abs_diff(const double* a, const double* b, std::size_t n);
double sum_abs(const double* x, std::size_t n);

} // namespace vlab::kern
