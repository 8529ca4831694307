// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 qup-lab contributors

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qup {

enum class Errc {
    invalid_range,
    invalid_argument,
    grid_mismatch,
    derivative_unavailable,
    point_out_of_range,
    rank_deficient_family,
    evaluation_domain,
    schedule_empty,
    never_independent,
    rank_collapse,
    dimension_mismatch,
    zero_signal,
    zero_window,
    inadmissible_mother,
    window_too_small,
    not_a_frame,
    full_support_input,
    length_mismatch,
    criterion_failed,
    source_not_acfps,
    empty_dictionary,
    ill_conditioned,
    probes_not_complete,
    io,
    parse,
};

std::string_view errc_name(Errc code) noexcept;

/// Library error carrying a machine-readable code next to the message.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace qup
