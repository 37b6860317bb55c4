#pragma once

// Matrix file format: {"dim": n, "re": [[...]], "im": [[...]]}, row-major.
// "im" may be omitted for real matrices.

#include <filesystem>
#include <string>

#include "qheat/qcore.hpp"

namespace qheat {

CMatrix matrix_from_json_text(const std::string& text);
std::string matrix_to_json_text(const CMatrix& m);

/// Throws std::ios_base::failure when the file cannot be read, InvalidInput
/// for malformed content.
CMatrix read_matrix_file(const std::filesystem::path& path);
void write_matrix_file(const std::filesystem::path& path, const CMatrix& m);

}  // namespace qheat
