#pragma once

#include <string>

#include "gcrd/sources.hpp"

namespace gcrd {

// Parses a JSON source description of the form
//   {"kind": "gaussian", "variance": 1.0}
//   {"kind": "rayleigh", "scale": 0.7071}
//   {"kind": "discrete", "support": [...], "pmf": [...]}
// Keys are validated strictly: anything unrecognized is an error, as are
// missing or ill-typed fields. Parse failures report line and column.
// `origin` names the input in error messages (usually the file path).
SourceModel parse_source_config(const std::string& text, const std::string& origin);

// Reads the file at `path` and parses it.
SourceModel load_source_config(const std::string& path);

}  // namespace gcrd
