#pragma once

// Discrete synchronous cellular automaton engine: binary grids, outer-totalistic
// rules (Game of Life by default), stepping, runs and period detection.

#include <algorithm>
#include <bitset>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

namespace mfca {

enum class Boundary { FixedDead, Toroidal };

inline std::string_view to_string(Boundary b)
{
    return b == Boundary::Toroidal ? "torus" : "dead";
}

inline Boundary parse_boundary(std::string_view s)
{
    if (s == "dead" || s == "fixed" || s == "FixedDead")
        return Boundary::FixedDead;
    if (s == "torus" || s == "toroidal" || s == "Toroidal")
        return Boundary::Toroidal;
    throw std::invalid_argument("unknown boundary mode '" + std::string(s) + "'");
}

/// Rectangular lattice of binary cell states, stored row-major.
class Grid {
public:
    Grid() = default;

    Grid(int width, int height, Boundary boundary = Boundary::FixedDead)
        : width_(width), height_(height), boundary_(boundary)
    {
        if (width <= 0 || height <= 0)
            throw std::invalid_argument("grid dimensions must be positive");
        cells_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0);
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    Boundary boundary() const noexcept { return boundary_; }
    void set_boundary(Boundary b) noexcept { boundary_ = b; }
    std::size_t size() const noexcept { return cells_.size(); }

    bool contains(int row, int col) const noexcept
    {
        return row >= 0 && row < height_ && col >= 0 && col < width_;
    }

    std::uint8_t at(int row, int col) const
    {
        check(row, col);
        return cells_[index(row, col)];
    }

    void set(int row, int col, std::uint8_t state)
    {
        check(row, col);
        if (state > 1)
            throw std::invalid_argument("binary grid accepts only states 0 and 1");
        cells_[index(row, col)] = state;
    }

    /// Row-major cell storage; every entry is 0 or 1.
    const std::vector<std::uint8_t>& cells() const noexcept { return cells_; }

    std::size_t population() const noexcept
    {
        return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), std::uint8_t{1}));
    }

    /// Equality compares dimensions and cells; the boundary mode is a property
    /// of the dynamics, not of the configuration.
    friend bool operator==(const Grid& a, const Grid& b) noexcept
    {
        return a.width_ == b.width_ && a.height_ == b.height_ && a.cells_ == b.cells_;
    }

private:
    std::size_t index(int row, int col) const noexcept
    {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(col);
    }

    void check(int row, int col) const
    {
        if (!contains(row, col))
            throw std::out_of_range("cell (" + std::to_string(row) + ", " + std::to_string(col) +
                                    ") outside " + std::to_string(height_) + "x" +
                                    std::to_string(width_) + " grid");
    }

    int width_ = 0;
    int height_ = 0;
    Boundary boundary_ = Boundary::FixedDead;
    std::vector<std::uint8_t> cells_;
};

/// Birth/survival neighbor-count sets. Bit n set means count n is in the set.
struct OuterTotalisticRule {
    std::bitset<9> birth;
    std::bitset<9> survival;

    static OuterTotalisticRule game_of_life()
    {
        OuterTotalisticRule r;
        r.birth.set(3);
        r.survival.set(2).set(3);
        return r;
    }

    std::uint8_t next(std::uint8_t self, int outer) const
    {
        return (self ? survival : birth).test(static_cast<std::size_t>(outer)) ? 1 : 0;
    }

    friend bool operator==(const OuterTotalisticRule&, const OuterTotalisticRule&) = default;
};

/// Parses "B3/S23" notation (case-insensitive, either order, empty sets allowed).
inline OuterTotalisticRule parse_rule(std::string_view text)
{
    auto fail = [&](const std::string& why) -> OuterTotalisticRule {
        throw std::invalid_argument("bad rule '" + std::string(text) + "': " + why);
    };
    auto slash = text.find('/');
    if (slash == std::string_view::npos)
        return fail("expected B.../S...");
    OuterTotalisticRule rule;
    bool seen_b = false, seen_s = false;
    for (auto part : {text.substr(0, slash), text.substr(slash + 1)}) {
        if (part.empty())
            return fail("empty component");
        char tag = static_cast<char>(part[0] | 0x20);
        std::bitset<9>* target = nullptr;
        if (tag == 'b' && !seen_b) {
            target = &rule.birth;
            seen_b = true;
        } else if (tag == 's' && !seen_s) {
            target = &rule.survival;
            seen_s = true;
        } else {
            return fail("components must be one B and one S");
        }
        for (char c : part.substr(1)) {
            if (c < '0' || c > '8')
                return fail(std::string("count '") + c + "' not in 0..8");
            target->set(static_cast<std::size_t>(c - '0'));
        }
    }
    return rule;
}

inline std::string to_string(const OuterTotalisticRule& rule)
{
    std::string s = "B";
    for (std::size_t n = 0; n < 9; ++n)
        if (rule.birth.test(n))
            s += static_cast<char>('0' + n);
    s += "/S";
    for (std::size_t n = 0; n < 9; ++n)
        if (rule.survival.test(n))
            s += static_cast<char>('0' + n);
    return s;
}

/// Live cells among the eight Moore neighbors. On a torus the indices wrap, so
/// grids narrower than three cells count a wrapped cell once per neighbor slot.
inline int outer_sum(const Grid& grid, int row, int col)
{
    if (!grid.contains(row, col))
        throw std::out_of_range("outer_sum: cell (" + std::to_string(row) + ", " +
                                std::to_string(col) + ") outside grid");
    const int h = grid.height();
    const int w = grid.width();
    const auto& cells = grid.cells();
    const bool torus = grid.boundary() == Boundary::Toroidal;
    int sum = 0;
    for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
            if (dr == 0 && dc == 0)
                continue;
            int r = row + dr;
            int c = col + dc;
            if (torus) {
                r = (r % h + h) % h;
                c = (c % w + w) % w;
            } else if (r < 0 || r >= h || c < 0 || c >= w) {
                continue;
            }
            sum += cells[static_cast<std::size_t>(r) * static_cast<std::size_t>(w) +
                         static_cast<std::size_t>(c)];
        }
    }
    return sum;
}

namespace detail {

inline void step_rows(const Grid& in, const OuterTotalisticRule& rule, Grid& out, int row_begin,
                      int row_end)
{
    for (int r = row_begin; r < row_end; ++r)
        for (int c = 0; c < in.width(); ++c)
            out.set(r, c, rule.next(in.at(r, c), outer_sum(in, r, c)));
}

} // namespace detail

/// One synchronous update. Rows are split over `threads` workers when
/// threads > 1; each output cell depends only on the input grid, so the result
/// is identical for any thread count.
inline Grid step(const Grid& grid, const OuterTotalisticRule& rule = OuterTotalisticRule::game_of_life(),
                 unsigned threads = 1)
{
    Grid next(grid.width(), grid.height(), grid.boundary());
    const int h = grid.height();
    threads = std::clamp(threads, 1u, static_cast<unsigned>(h));
    if (threads == 1) {
        detail::step_rows(grid, rule, next, 0, h);
        return next;
    }
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        int begin = static_cast<int>(static_cast<long>(h) * t / threads);
        int end = static_cast<int>(static_cast<long>(h) * (t + 1) / threads);
        workers.emplace_back([&, begin, end] { detail::step_rows(grid, rule, next, begin, end); });
    }
    workers.clear();
    return next;
}

/// Returns [g_0, ..., g_steps] with g_0 the input.
inline std::vector<Grid> run(const Grid& grid,
                             const OuterTotalisticRule& rule = OuterTotalisticRule::game_of_life(),
                             std::size_t steps = 0)
{
    std::vector<Grid> out;
    out.reserve(steps + 1);
    out.push_back(grid);
    for (std::size_t i = 0; i < steps; ++i)
        out.push_back(step(out.back(), rule));
    return out;
}

struct Periodicity {
    std::size_t offset;
    std::size_t period;
    friend bool operator==(const Periodicity&, const Periodicity&) = default;
};

/// Earliest offset o, then smallest period p at that offset, such that
/// g[o+k] == g[o+k+p] for every k that stays inside the sequence.
inline std::optional<Periodicity> detect_period(const std::vector<Grid>& grids)
{
    const std::size_t n = grids.size();
    for (std::size_t o = 0; o + 1 < n; ++o) {
        for (std::size_t p = 1; o + p < n; ++p) {
            bool ok = true;
            for (std::size_t k = o; k + p < n && ok; ++k)
                ok = grids[k] == grids[k + p];
            if (ok)
                return Periodicity{o, p};
        }
    }
    return std::nullopt;
}

/// Copy of `grid` shifted by (drow, dcol) with toroidal wrap.
inline Grid translate(const Grid& grid, int drow, int dcol)
{
    Grid out(grid.width(), grid.height(), grid.boundary());
    const int h = grid.height();
    const int w = grid.width();
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c)
            out.set(((r + drow) % h + h) % h, ((c + dcol) % w + w) % w, grid.at(r, c));
    return out;
}

} // namespace mfca
