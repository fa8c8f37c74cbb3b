#pragma once

#include <string>

namespace newton_atlas {

/// Writes bytes to path via a temporary file in the same directory followed by
/// an atomic rename. Throws IOFailure.
void write_file_atomic(const std::string& path, const std::string& bytes);

std::string read_file(const std::string& path);

}  // namespace newton_atlas
