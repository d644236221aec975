// SPDX-License-Identifier: Apache-2.0

#include "chaospend/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    std::ios::sync_with_stdio(false);
    return chaospend::cli::run(argc, argv, std::cout, std::cerr);
}
