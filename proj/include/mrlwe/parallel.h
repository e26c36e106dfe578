/*
 * Copyright 2026 The mrlwe Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#ifndef MRLWE_PARALLEL_H_
#define MRLWE_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace mrlwe {

// MRLWE_THREADS when set to a positive integer, otherwise the hardware
// concurrency (at least 1).
size_t ThreadCount();

// Runs body(i) for i in [0, count) on up to `threads` workers. Bodies must
// not share mutable state; callers that need randomness derive one Rng per
// index so results do not depend on scheduling. The exception thrown by the
// lowest failing index is rethrown.
void ParallelFor(size_t count, const std::function<void(size_t)>& body,
                 size_t threads = ThreadCount());

}  // namespace mrlwe

#endif  // MRLWE_PARALLEL_H_
