#include <benchmark/benchmark.h>

// libbenchmark_main.a ships as LTO bytecode of another compiler release, so main lives here
BENCHMARK_MAIN();
