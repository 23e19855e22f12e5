// SPDX-License-Identifier: Apache-2.0
//
// hycov: spatial channel covariance estimation for hybrid MIMO receivers
// Copyright (C) 2026 The hycov authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef HYCOV_PARALLEL_HPP
#define HYCOV_PARALLEL_HPP

#include <algorithm>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace hycov
{

// Calls fn(trial) for trial = 0..trials-1 on `threads` workers. Workers take contiguous
// chunks, so results written by trial index do not depend on the thread count. The first
// exception (lowest trial index) is rethrown after all workers finish.
template <typename Fn>
void for_each_trial(std::int64_t trials, unsigned threads, Fn &&fn)
{
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::int64_t>(trials, 1))));
    if (threads == 1)
    {
        for (std::int64_t i = 0; i < trials; ++i)
            fn(i);
        return;
    }

    std::mutex guard;
    std::exception_ptr first;
    std::int64_t first_trial = trials;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w)
    {
        const std::int64_t lo = trials * w / threads, hi = trials * (w + 1) / threads;
        pool.emplace_back(
            [&, lo, hi]
            {
                for (std::int64_t i = lo; i < hi; ++i)
                {
                    try
                    {
                        fn(i);
                    }
                    catch (...)
                    {
                        std::lock_guard lock(guard);
                        if (i < first_trial)
                        {
                            first_trial = i;
                            first = std::current_exception();
                        }
                        return;
                    }
                }
            });
    }
    for (auto &t : pool)
        t.join();
    if (first)
        std::rethrow_exception(first);
}

} // namespace hycov

#endif
