// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 qup-lab contributors

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qup::cli {

/// Exit status: 0 success, 2 invalid input or configuration, 1 failure while computing.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qup::cli
