#include "ncrsim/kernels.hpp"

namespace ncrsim::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const bool g_avx2 = cpu_has_avx2();

} // namespace

DirectBatchFn direct_batch() {
#if defined(__x86_64__) || defined(_M_X64)
  if (g_avx2) return &direct_batch_avx2;
#endif
  return &direct_batch_scalar;
}

IndirectBatchFn indirect_batch() {
#if defined(__x86_64__) || defined(_M_X64)
  if (g_avx2) return &indirect_batch_avx2;
#endif
  return &indirect_batch_scalar;
}

const char* active_impl() { return g_avx2 ? "avx2" : "scalar"; }

} // namespace ncrsim::kernels
