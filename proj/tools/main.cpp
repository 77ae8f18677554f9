// Copyright 2026 The nepcontour Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "experiment.hpp"

int main(int argc, char **argv)
{
  return nepcontour::cli::RunCli(argc, argv, std::cout, std::cerr);
}
