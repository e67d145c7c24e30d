#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "dynper/field.hpp"

namespace dynper {

enum class FieldFormat {
    csv_1d,   ///< one decimal value per line
    pgm_2d,   ///< ASCII P2 graymap, maxval <= 65535
    field_nd, ///< "FIELD <ndim> <e1> ... <en>" then row-major values
};

/// Accepts "csv-1d", "pgm-2d", "field-nd" and the short forms csv, pgm, field.
FieldFormat parse_format(const std::string& name);
const char* to_string(FieldFormat format);

/// Guesses the format from the first non-blank token: P2, FIELD, or a number.
FieldFormat detect_format(const std::string& text);

ScalarField read_field(std::istream& in, FieldFormat format,
                       Connectivity connectivity = Connectivity::axis);
ScalarField read_field(const std::filesystem::path& path, FieldFormat format,
                       Connectivity connectivity = Connectivity::axis);
ScalarField parse_field(const std::string& text, FieldFormat format,
                        Connectivity connectivity = Connectivity::axis);

/// csv-1d and field-nd print the shortest decimal that reads back to the
/// same double. pgm-2d rounds to integers clamped to [0, 65535] and declares
/// the largest written value (at least 1) as maxval.
void write_field(std::ostream& out, const ScalarField& field, FieldFormat format);
void write_field(const std::filesystem::path& path, const ScalarField& field,
                 FieldFormat format);
std::string format_field(const ScalarField& field, FieldFormat format);

/// Shortest round-trip decimal for a double.
std::string format_number(double value);

} // namespace dynper
