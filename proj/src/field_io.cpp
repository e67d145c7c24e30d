#include "dynper/field_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

namespace dynper {

namespace {

// Whitespace tokenizer that remembers the line of each token and skips
// '#' comments (used by PGM).
class Tokens {
public:
    Tokens(const std::string& text, bool comments)
        : text_(text)
        , comments_(comments)
    {
    }

    bool next(std::string_view& token, std::size_t& line)
    {
        for (;;) {
            while (pos_ < text_.size() && is_space(text_[pos_])) {
                if (text_[pos_] == '\n')
                    ++line_;
                ++pos_;
            }
            if (comments_ && pos_ < text_.size() && text_[pos_] == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n')
                    ++pos_;
                continue;
            }
            break;
        }
        if (pos_ >= text_.size())
            return false;
        const std::size_t start = pos_;
        while (pos_ < text_.size() && !is_space(text_[pos_]))
            ++pos_;
        token = std::string_view(text_).substr(start, pos_ - start);
        line = line_;
        return true;
    }

private:
    static bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

    const std::string& text_;
    bool comments_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
};

[[noreturn]] void fail(std::size_t line, const std::string& what)
{
    throw ParseError("line " + std::to_string(line) + ": " + what);
}

double parse_double(std::string_view token, std::size_t line)
{
    if (!token.empty() && token.front() == '+')
        token.remove_prefix(1);
    double value = 0.0;
    const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || end != token.data() + token.size())
        fail(line, "'" + std::string(token) + "' is not a decimal number");
    if (!std::isfinite(value))
        fail(line, "value '" + std::string(token) + "' is not finite");
    return value;
}

std::size_t parse_count(std::string_view token, std::size_t line, const char* what)
{
    std::size_t value = 0;
    const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || end != token.data() + token.size())
        fail(line, std::string(what) + " '" + std::string(token) + "' is not a non-negative integer");
    return value;
}

ScalarField parse_csv(const std::string& text, Connectivity connectivity)
{
    std::vector<double> values;
    std::size_t line = 0;
    std::size_t start = 0;
    while (start < text.size()) {
        ++line;
        std::size_t end = text.find('\n', start);
        if (end == std::string::npos)
            end = text.size();
        std::string_view row = std::string_view(text).substr(start, end - start);
        while (!row.empty() && (row.back() == '\r' || row.back() == ' ' || row.back() == '\t'))
            row.remove_suffix(1);
        while (!row.empty() && (row.front() == ' ' || row.front() == '\t'))
            row.remove_prefix(1);
        if (row.empty()) {
            // Only trailing blank lines are tolerated.
            if (text.find_first_not_of(" \t\r\n", end) != std::string::npos)
                fail(line, "empty line inside csv data");
            break;
        }
        values.push_back(parse_double(row, line));
        start = end + 1;
    }
    if (values.empty())
        fail(line == 0 ? 1 : line, "csv input holds no values");
    return ScalarField::line(std::move(values), connectivity);
}

ScalarField parse_pgm(const std::string& text, Connectivity connectivity)
{
    Tokens tokens(text, true);
    std::string_view token;
    std::size_t line = 1;
    if (!tokens.next(token, line) || token != "P2")
        fail(line, "expected the ASCII PGM magic 'P2'");
    std::size_t header[3];
    const char* names[3] = {"width", "height", "maxval"};
    for (int i = 0; i < 3; ++i) {
        if (!tokens.next(token, line))
            fail(line, std::string("missing PGM ") + names[i]);
        header[i] = parse_count(token, line, names[i]);
    }
    const auto [width, height, maxval] = header;
    if (width == 0 || height == 0)
        fail(line, "PGM width and height must be positive");
    if (maxval == 0 || maxval > 65535)
        fail(line, "PGM maxval must be in [1, 65535]");

    std::vector<double> values;
    values.reserve(width * height);
    while (tokens.next(token, line)) {
        const std::size_t v = parse_count(token, line, "gray value");
        if (v > maxval)
            fail(line, "gray value " + std::to_string(v) + " exceeds maxval " + std::to_string(maxval));
        if (values.size() == width * height)
            fail(line, "more gray values than width x height");
        values.push_back(static_cast<double>(v));
    }
    if (values.size() != width * height)
        fail(line, "expected " + std::to_string(width * height) + " gray values, found " +
                       std::to_string(values.size()));
    return ScalarField({height, width}, std::move(values), connectivity);
}

ScalarField parse_field_nd(const std::string& text, Connectivity connectivity)
{
    Tokens tokens(text, false);
    std::string_view token;
    std::size_t line = 1;
    if (!tokens.next(token, line) || token != "FIELD")
        fail(line, "expected the header keyword 'FIELD'");
    if (!tokens.next(token, line))
        fail(line, "missing dimension count");
    const std::size_t ndim = parse_count(token, line, "dimension count");
    if (ndim == 0 || ndim > ScalarField::max_ndim)
        fail(line, "dimension count must be in [1, " + std::to_string(ScalarField::max_ndim) + "]");
    std::vector<std::size_t> shape;
    std::size_t count = 1;
    for (std::size_t d = 0; d < ndim; ++d) {
        if (!tokens.next(token, line))
            fail(line, "missing extent of axis " + std::to_string(d));
        const std::size_t e = parse_count(token, line, "extent");
        if (e == 0)
            fail(line, "extent of axis " + std::to_string(d) + " must be positive");
        shape.push_back(e);
        count *= e;
    }
    std::vector<double> values;
    values.reserve(count);
    while (tokens.next(token, line)) {
        if (values.size() == count)
            fail(line, "more values than the header declares (" + std::to_string(count) + ")");
        values.push_back(parse_double(token, line));
    }
    if (values.size() != count)
        fail(line, "header declares " + std::to_string(count) + " values, found " +
                       std::to_string(values.size()));
    return ScalarField(std::move(shape), std::move(values), connectivity);
}

} // namespace

FieldFormat parse_format(const std::string& name)
{
    if (name == "csv-1d" || name == "csv")
        return FieldFormat::csv_1d;
    if (name == "pgm-2d" || name == "pgm")
        return FieldFormat::pgm_2d;
    if (name == "field-nd" || name == "field")
        return FieldFormat::field_nd;
    throw UsageError("unknown field format '" + name + "' (expected csv-1d, pgm-2d or field-nd)");
}

const char* to_string(FieldFormat format)
{
    switch (format) {
    case FieldFormat::csv_1d:
        return "csv-1d";
    case FieldFormat::pgm_2d:
        return "pgm-2d";
    case FieldFormat::field_nd:
        return "field-nd";
    }
    return "?";
}

FieldFormat detect_format(const std::string& text)
{
    const std::size_t start = text.find_first_not_of(" \t\r\n");
    if (start != std::string::npos) {
        if (text.compare(start, 2, "P2") == 0)
            return FieldFormat::pgm_2d;
        if (text.compare(start, 5, "FIELD") == 0)
            return FieldFormat::field_nd;
    }
    return FieldFormat::csv_1d;
}

ScalarField parse_field(const std::string& text, FieldFormat format, Connectivity connectivity)
{
    switch (format) {
    case FieldFormat::csv_1d:
        return parse_csv(text, connectivity);
    case FieldFormat::pgm_2d:
        return parse_pgm(text, connectivity);
    case FieldFormat::field_nd:
        break;
    }
    return parse_field_nd(text, connectivity);
}

ScalarField read_field(std::istream& in, FieldFormat format, Connectivity connectivity)
{
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    if (in.bad())
        throw ParseError("failed to read field input");
    return parse_field(text, format, connectivity);
}

ScalarField read_field(const std::filesystem::path& path, FieldFormat format,
                       Connectivity connectivity)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError("cannot open '" + path.string() + "'");
    try {
        return read_field(in, format, connectivity);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

std::string format_number(double value)
{
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, end);
}

std::string format_field(const ScalarField& field, FieldFormat format)
{
    std::string out;
    const auto values = field.values();
    switch (format) {
    case FieldFormat::csv_1d:
        if (field.ndim() != 1)
            throw UsageError("csv-1d holds 1D fields only; this field has " +
                             std::to_string(field.ndim()) + " axes");
        for (double v : values) {
            out += format_number(v);
            out += '\n';
        }
        return out;
    case FieldFormat::pgm_2d: {
        if (field.ndim() != 2)
            throw UsageError("pgm-2d holds 2D fields only; this field has " +
                             std::to_string(field.ndim()) + " axes");
        std::vector<long> gray(values.size());
        long maxval = 1;
        for (std::size_t i = 0; i < values.size(); ++i) {
            gray[i] = std::clamp(std::lround(values[i]), 0L, 65535L);
            maxval = std::max(maxval, gray[i]);
        }
        const std::size_t height = field.shape()[0];
        const std::size_t width = field.shape()[1];
        out += "P2\n" + std::to_string(width) + " " + std::to_string(height) + "\n" +
               std::to_string(maxval) + "\n";
        for (std::size_t r = 0; r < height; ++r) {
            for (std::size_t c = 0; c < width; ++c) {
                if (c > 0)
                    out += ' ';
                out += std::to_string(gray[r * width + c]);
            }
            out += '\n';
        }
        return out;
    }
    case FieldFormat::field_nd:
        break;
    }
    out += "FIELD " + std::to_string(field.ndim());
    for (std::size_t e : field.shape())
        out += " " + std::to_string(e);
    out += '\n';
    const std::size_t row = field.shape().back();
    for (std::size_t i = 0; i < values.size(); ++i) {
        out += format_number(values[i]);
        out += (i + 1) % row == 0 ? '\n' : ' ';
    }
    return out;
}

void write_field(std::ostream& out, const ScalarField& field, FieldFormat format)
{
    const std::string text = format_field(field, format);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out)
        throw ParseError("failed to write field output");
}

void write_field(const std::filesystem::path& path, const ScalarField& field, FieldFormat format)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ParseError("cannot open '" + path.string() + "' for writing");
    write_field(out, field, format);
}

} // namespace dynper
