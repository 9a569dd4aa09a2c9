// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "jcore_tools/cli.hpp"

int main(int argc, char** argv) {
  return jcore::cli::dispatch(argc, argv, std::cout, std::cerr);
}
