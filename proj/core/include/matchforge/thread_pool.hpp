// Copyright 2026 The Matchforge Authors
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

#ifndef MATCHFORGE_THREAD_POOL_HPP_
#define MATCHFORGE_THREAD_POOL_HPP_

#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace matchforge {

// Runs fn(0) ... fn(num_tasks-1) on up to `jobs` threads. Tasks must be
// independent; results are deterministic because each task writes only its
// own slot. The lowest-index exception is rethrown after all tasks finish.
template <typename Fn>
void parallel_for(int num_tasks, int jobs, Fn&& fn) {
  if (num_tasks <= 0) return;
  jobs = std::max(1, std::min(jobs, num_tasks));
  if (jobs == 1) {
    for (int t = 0; t < num_tasks; ++t) fn(t);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(num_tasks);
  auto worker = [&] {
    while (true) {
      const int t = next.fetch_add(1);
      if (t >= num_tasks) break;
      try {
        fn(t);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> threads;
  threads.reserve(jobs);
  for (int w = 0; w < jobs; ++w) threads.emplace_back(worker);
  for (auto& th : threads) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace matchforge

#endif  // MATCHFORGE_THREAD_POOL_HPP_
