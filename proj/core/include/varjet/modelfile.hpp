#pragma once

#include <string>

#include "varjet/catalog.hpp"

namespace varjet {

/// Loads a model from the JSON model-file format (see docs/model-file.md).
/// Expression strings use the library grammar verbatim. Throws ModelError or
/// ParseError on malformed input.
Model load_model_file(const std::string& path);
Model parse_model_json(const std::string& text, const std::string& display_name);

/// Serializes a model back to the model-file format (export-model).
std::string model_to_json(const Model& m);

} // namespace varjet
