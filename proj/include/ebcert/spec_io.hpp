#pragma once

// File I/O for channel spec and state files. Parse failures raise Error with
// invariant "io" (unreadable or unwritable path), "schema" (malformed JSON or
// layout) or the name of the violated channel/state invariant.

#include <string>

#include "json.hpp"

#include "ebcert/channels.hpp"

namespace ebcert {

nlohmann::json read_json_file(const std::string& path);
Channel read_channel_file(const std::string& path);
DensityMatrix read_state_file(const std::string& path);

/// Pretty-printed JSON followed by a newline.
void write_json_file(const std::string& path, const nlohmann::json& j);
void write_text_file(const std::string& path, const std::string& text);
void write_channel_file(const std::string& path, const Channel& c);

}  // namespace ebcert
