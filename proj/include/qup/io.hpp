// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 qup-lab contributors

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qup/density_frames.hpp"
#include "qup/independence.hpp"
#include "qup/kernels.hpp"

namespace qup {

/// CSV `t,re,im`; t strictly increasing and uniform within 1e-9 relative.
Signal read_signal_csv(const std::filesystem::path& path);
void write_signal_csv(const std::filesystem::path& path, const Signal& f, const std::string& axis = "t");

/// CSV `t,re_1,im_1,re_2,im_2,...`.
FunctionFamily read_family_csv(const std::filesystem::path& path);
void write_family_csv(const std::filesystem::path& path, const FunctionFamily& family);

/// One real per line, `#` starts a comment. The window defaults to the largest |x|.
PointSet read_point_set(const std::filesystem::path& path, std::optional<double> R = std::nullopt);

/// JSON descriptor with a "variant" field; file references resolve against the JSON's folder.
KernelSpec read_kernel_json(const std::filesystem::path& path);

/// `a:b:n` into a grid.
Grid parse_grid(const std::string& text);

/// Comma-separated reals.
std::vector<double> parse_list(const std::string& text);

/// Round-trip decimal form used by every writer ("%.17g").
std::string format_real(double x);

}  // namespace qup
