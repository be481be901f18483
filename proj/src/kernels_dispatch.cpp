#include "subheat/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace subheat::kernels {

#ifdef SUBHEAT_HAVE_AVX2
const Ops* avx2_ops_impl();
#endif

const Ops* avx2_ops() {
#ifdef SUBHEAT_HAVE_AVX2
  if (__builtin_cpu_supports("avx2")) return avx2_ops_impl();
#endif
  return nullptr;
}

namespace {

const Ops* select() {
  const char* force = std::getenv("SUBHEAT_KERNELS");
  if (force != nullptr) {
    if (std::strcmp(force, "scalar") == 0) return &scalar_ops();
    if (std::strcmp(force, "avx2") == 0 && avx2_ops() != nullptr) return avx2_ops();
  }
  if (const Ops* v = avx2_ops()) return v;
  return &scalar_ops();
}

}  // namespace

const Ops& ops() {
  static const Ops* chosen = select();
  return *chosen;
}

}  // namespace subheat::kernels
