// Copyright 2026 The qpuf Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <atomic>
#include <stdexcept>
#include <string>

#include "simd/variants.hpp"

namespace qpuf::simd {
namespace {

const Kernels kScalar{Isa::kScalar, &scalar::kernel_update, &scalar::gray_enumerate};
#if defined(QPUF_HAVE_AVX2)
const Kernels kAvx2{Isa::kAvx2, &avx2::kernel_update, &avx2::gray_enumerate};
#endif

Isa detect() {
  if (isa_supported(Isa::kAvx2)) return Isa::kAvx2;
  return Isa::kScalar;
}

std::atomic<const Kernels*>& active() {
  static std::atomic<const Kernels*> k{&kernels_for(detect())};
  return k;
}

}  // namespace

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
  }
  return "unknown";
}

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return true;
    case Isa::kAvx2:
#if defined(QPUF_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt");
#else
      return false;
#endif
  }
  return false;
}

const Kernels& kernels_for(Isa isa) {
  if (!isa_supported(isa)) throw std::runtime_error(std::string("ISA not supported: ") + isa_name(isa));
#if defined(QPUF_HAVE_AVX2)
  if (isa == Isa::kAvx2) return kAvx2;
#endif
  return kScalar;
}

const Kernels& kernels() { return *active().load(std::memory_order_acquire); }
Isa active_isa() { return kernels().isa; }
void set_active_isa(Isa isa) { active().store(&kernels_for(isa), std::memory_order_release); }

}  // namespace qpuf::simd
