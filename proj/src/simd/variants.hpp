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

#ifndef QPUF_SRC_SIMD_VARIANTS_HPP
#define QPUF_SRC_SIMD_VARIANTS_HPP

#include "qpuf/simd.hpp"

namespace qpuf::simd {

namespace scalar {
void kernel_update(const KernelTables& tables, unsigned k, const double* parent, const std::uint8_t* decided,
                   std::size_t m, double* child);
/// Single instance t of the update; shared with the vector tails.
void kernel_update_one(const KernelTables& tables, unsigned k, const double* parent, const std::uint8_t* decided,
                       std::size_t m, std::size_t t, double* child);
void gray_enumerate(const PackedRowMultiples& rows, std::uint64_t begin, std::uint64_t end, std::uint64_t* hist);
}  // namespace scalar

#if defined(QPUF_HAVE_AVX2)
namespace avx2 {
void kernel_update(const KernelTables& tables, unsigned k, const double* parent, const std::uint8_t* decided,
                   std::size_t m, double* child);
void gray_enumerate(const PackedRowMultiples& rows, std::uint64_t begin, std::uint64_t end, std::uint64_t* hist);
}  // namespace avx2
#endif

}  // namespace qpuf::simd

#endif  // QPUF_SRC_SIMD_VARIANTS_HPP
