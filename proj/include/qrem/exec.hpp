// Copyright 2026 The qrem Authors
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

#ifndef QREM_EXEC_HPP_
#define QREM_EXEC_HPP_

#include <cstddef>
#include <cstdint>
#include <exception>

namespace qrem {

// Every batch kernel has a serial reference path and an OpenMP path. Both
// write results into per-item slots, so their outputs are identical.
enum class Exec { kSerial, kParallel };

template <typename Body>
void parallel_for(Exec exec, std::size_t count, Body&& body) {
  if (exec == Exec::kSerial) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(qrem_parallel_for_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace qrem

#endif  // QREM_EXEC_HPP_
