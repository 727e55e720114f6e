#pragma once

#include "relreg/data.hpp"

#include <optional>
#include <string>

namespace relreg::cli {

//! Renders the CSV produced by `fit`, `band`, `km` or `normality` as a
//! static SVG. The kind is inferred from the header row. Throws
//! MalformedInput for anything else, including a file without data rows.
std::string render_svg(const std::string& csv_text,
                       const std::optional<TrueCurve>& truth = std::nullopt,
                       std::size_t bins = 20);

} // namespace relreg::cli
