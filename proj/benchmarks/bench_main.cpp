#include <benchmark/benchmark.h>

// The packaged libbenchmark_main.a ships LTO bytecode from a different GCC
// point release, so the entry point is defined here instead.
BENCHMARK_MAIN();
