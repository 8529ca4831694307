// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 qup-lab contributors

#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
    return qup::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
