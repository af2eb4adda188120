#include <benchmark/benchmark.h>

// The distro benchmark_main archive is LTO bytecode tied to one compiler
// build, so the entry point lives here.
BENCHMARK_MAIN();
