#pragma once

// Life pattern files: run-length encoded (.rle) and plaintext (.cells), plus
// an ASCII renderer that round-trips with the plaintext reader.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ca.hpp"

namespace mfca {

enum class PatternFormat { RLE, Plaintext };

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, int line, int column)
        : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                             ": " + what),
          line_(line), column_(column)
    {
    }

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

inline std::optional<PatternFormat> format_from_extension(std::string_view path)
{
    auto ends_with = [&](std::string_view ext) {
        return path.size() >= ext.size() && path.substr(path.size() - ext.size()) == ext;
    };
    if (ends_with(".rle"))
        return PatternFormat::RLE;
    if (ends_with(".cells"))
        return PatternFormat::Plaintext;
    return std::nullopt;
}

inline PatternFormat parse_format(std::string_view s)
{
    if (s == "rle" || s == "RLE")
        return PatternFormat::RLE;
    if (s == "cells" || s == "plaintext" || s == "Plaintext")
        return PatternFormat::Plaintext;
    throw std::invalid_argument("unknown pattern format '" + std::string(s) + "'");
}

/// Where a pattern lands. Width/height of 0 mean "exactly the pattern's size".
struct Placement {
    int width = 0;
    int height = 0;
    int row_offset = 0;
    int col_offset = 0;
    Boundary boundary = Boundary::FixedDead;
};

namespace detail {

struct Bitmap {
    int width = 0;
    int height = 0;
    std::vector<std::pair<int, int>> live;
};

inline Bitmap parse_rle(std::string_view text)
{
    Bitmap bm;
    bool have_header = false;
    int line_no = 0;
    std::size_t pos = 0;
    int row = 0, col = 0;
    bool done = false;
    std::string count;
    int count_col = 0;
    int end_line = 1;
    int end_col = 1;

    while (pos <= text.size() && !done) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos)
            eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        ++line_no;
        const bool last = eol >= text.size();
        pos = eol + 1;

        if (!have_header) {
            std::size_t first = line.find_first_not_of(" \t");
            if (first == std::string_view::npos || line[first] == '#') {
                if (last)
                    break;
                continue;
            }
            // x = W, y = H[, rule = ...]
            int values[2] = {-1, -1};
            std::size_t i = first;
            for (int which = 0; which < 2; ++which) {
                const char key = which == 0 ? 'x' : 'y';
                while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == ','))
                    ++i;
                if (i >= line.size() || std::tolower(static_cast<unsigned char>(line[i])) != key)
                    throw ParseError(std::string("expected '") + key + " =' in RLE header", line_no,
                                     static_cast<int>(i) + 1);
                ++i;
                while (i < line.size() && line[i] == ' ')
                    ++i;
                if (i >= line.size() || line[i] != '=')
                    throw ParseError("expected '=' in RLE header", line_no, static_cast<int>(i) + 1);
                ++i;
                while (i < line.size() && line[i] == ' ')
                    ++i;
                std::size_t start = i;
                while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i])))
                    ++i;
                if (start == i)
                    throw ParseError("expected dimension in RLE header", line_no,
                                     static_cast<int>(i) + 1);
                values[which] = std::stoi(std::string(line.substr(start, i - start)));
            }
            if (values[0] <= 0 || values[1] <= 0)
                throw ParseError("RLE dimensions must be positive", line_no, static_cast<int>(first) + 1);
            bm.width = values[0];
            bm.height = values[1];
            have_header = true;
            end_line = line_no;
            end_col = static_cast<int>(line.find_last_not_of(" \t\r")) + 2;
            if (last)
                break;
            continue;
        }

        for (std::size_t i = 0; i < line.size() && !done; ++i) {
            const char ch = line[i];
            const int column = static_cast<int>(i) + 1;
            if (ch != ' ' && ch != '\t' && ch != '\r') {
                end_line = line_no;
                end_col = column + 1;
            }
            if (std::isdigit(static_cast<unsigned char>(ch))) {
                if (count.empty())
                    count_col = column;
                count += ch;
                continue;
            }
            if (ch == ' ' || ch == '\t') {
                if (!count.empty())
                    throw ParseError("whitespace inside run count", line_no, column);
                continue;
            }
            int n = 1;
            if (!count.empty()) {
                n = std::stoi(count);
                if (n <= 0)
                    throw ParseError("run count must be positive", line_no, count_col);
                count.clear();
            }
            switch (ch) {
            case 'b':
            case 'o':
                if (col + n > bm.width)
                    throw ParseError("row " + std::to_string(row + 1) + " exceeds declared width " +
                                         std::to_string(bm.width),
                                     line_no, column);
                if (ch == 'o')
                    for (int k = 0; k < n; ++k)
                        bm.live.emplace_back(row, col + k);
                col += n;
                break;
            case '$':
                row += n;
                col = 0;
                if (row >= bm.height)
                    throw ParseError("more rows than declared height " + std::to_string(bm.height),
                                     line_no, column);
                break;
            case '!':
                done = true;
                break;
            default:
                throw ParseError(std::string("unexpected character '") + ch + "'", line_no, column);
            }
        }
        if (!count.empty() && !done && last)
            throw ParseError("dangling run count", line_no, count_col);
        if (last)
            break;
    }
    if (!have_header)
        throw ParseError("missing RLE header", line_no, 1);
    if (!done)
        throw ParseError("missing '!' terminator", end_line, end_col);
    return bm;
}

inline Bitmap parse_plaintext(std::string_view text)
{
    Bitmap bm;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos)
            eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        ++line_no;
        pos = eol + 1;
        if (!line.empty() && line[0] == '!')
            continue;
        const int w = static_cast<int>(line.size());
        if (bm.height == 0) {
            if (w == 0)
                throw ParseError("empty pattern row", line_no, 1);
            bm.width = w;
        } else if (w != bm.width) {
            throw ParseError("row width " + std::to_string(w) + " differs from " +
                                 std::to_string(bm.width),
                             line_no, std::min(w, bm.width) + 1);
        }
        for (int c = 0; c < w; ++c) {
            if (line[static_cast<std::size_t>(c)] == 'O')
                bm.live.emplace_back(bm.height, c);
            else if (line[static_cast<std::size_t>(c)] != '.')
                throw ParseError(std::string("unexpected character '") +
                                     line[static_cast<std::size_t>(c)] + "'",
                                 line_no, c + 1);
        }
        ++bm.height;
    }
    if (bm.height == 0)
        throw ParseError("pattern has no rows", std::max(line_no, 1), 1);
    return bm;
}

} // namespace detail

inline Grid parse_pattern(std::string_view text, PatternFormat format, const Placement& place = {})
{
    auto bm = format == PatternFormat::RLE ? detail::parse_rle(text) : detail::parse_plaintext(text);
    const int w = place.width > 0 ? place.width : bm.width + place.col_offset;
    const int h = place.height > 0 ? place.height : bm.height + place.row_offset;
    if (place.row_offset < 0 || place.col_offset < 0 || place.row_offset + bm.height > h ||
        place.col_offset + bm.width > w)
        throw std::invalid_argument("pattern of " + std::to_string(bm.height) + "x" +
                                    std::to_string(bm.width) + " does not fit at offset (" +
                                    std::to_string(place.row_offset) + ", " +
                                    std::to_string(place.col_offset) + ") in " + std::to_string(h) +
                                    "x" + std::to_string(w) + " grid");
    Grid g(w, h, place.boundary);
    for (auto [r, c] : bm.live)
        g.set(r + place.row_offset, c + place.col_offset, 1);
    return g;
}

/// Rows of '.' and 'O' separated by newlines, no trailing newline.
inline std::string render_ascii(const Grid& grid)
{
    std::string out;
    out.reserve(grid.size() + static_cast<std::size_t>(grid.height()));
    for (int r = 0; r < grid.height(); ++r) {
        if (r > 0)
            out += '\n';
        for (int c = 0; c < grid.width(); ++c)
            out += grid.at(r, c) ? 'O' : '.';
    }
    return out;
}

} // namespace mfca
