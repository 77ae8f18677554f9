// Copyright 2026 The nepcontour Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

// The distro's benchmark_main archive is LTO bytecode tied to its own compiler build.
BENCHMARK_MAIN();
