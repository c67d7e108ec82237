// key = value configuration parsing for SuppressionParams.
#pragma once

#include <string>

#include "descan/types.hpp"

namespace descan {

/// Parses UTF-8 "key = value" text ('#' starts a comment). Unknown keys are
/// rejected. Omitted keys take the documented defaults; frame_len defaults to
/// round(0.02 * s_r) for the configured rate. The result is validated.
/// Throws ParseError with a line number, ValidationError naming the invariant.
SuppressionParams parse_config(const std::string& text);

/// parse_config over the contents of a file. Throws Error when unreadable.
SuppressionParams load_config(const std::string& path);

}  // namespace descan
