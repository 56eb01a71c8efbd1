#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>
#include <stdexcept>

#include "causal/parallel.hpp"

using namespace causal;

namespace {

struct EnvGuard {
  EnvGuard() {
    if (const char* v = std::getenv(kWorkerEnv)) saved = v;
  }
  ~EnvGuard() {
    if (saved.empty()) unsetenv(kWorkerEnv);
    else setenv(kWorkerEnv, saved.c_str(), 1);
  }
  std::string saved;
};

}  // namespace

TEST(WorkerCount, EnvironmentCap) {
  EnvGuard guard;
  unsetenv(kWorkerEnv);
  EXPECT_EQ(worker_count(6), 6u);
  EXPECT_GE(worker_count(0), 1u);
  setenv(kWorkerEnv, "2", 1);
  EXPECT_EQ(worker_count(6), 2u);
  EXPECT_LE(worker_count(0), 2u);
  EXPECT_EQ(worker_count(1), 1u);
  setenv(kWorkerEnv, "junk", 1);
  EXPECT_EQ(worker_count(3), 3u);
  setenv(kWorkerEnv, "0", 1);
  EXPECT_EQ(worker_count(3), 3u);
}

TEST(ParallelFor, VisitsEveryIndexOnce) {
  for (std::size_t workers : {1u, 3u, 8u}) {
    std::vector<std::atomic<int>> hits(1000);
    std::atomic<int> states{0};
    parallel_for(
        hits.size(), workers, [&] { return ++states; }, [&](int&, std::size_t i) { ++hits[i]; });
    for (auto& h : hits) EXPECT_EQ(h.load(), 1);
    EXPECT_LE(states.load(), static_cast<int>(workers));
  }
}

TEST(ParallelFor, EmptyRange) {
  int calls = 0;
  parallel_for(0, 4, [] { return 0; }, [&](int&, std::size_t) { ++calls; });
  EXPECT_EQ(calls, 0);
}

TEST(ParallelFor, PropagatesExceptions) {
  for (std::size_t workers : {1u, 4u}) {
    EXPECT_THROW(parallel_for(
                     100, workers, [] { return 0; },
                     [](int&, std::size_t i) {
                       if (i == 37) throw std::runtime_error("boom");
                     }),
                 std::runtime_error);
  }
}
