#pragma once

// CSV emitters: header row, comma separators, '.' decimal point, LF endings.
// Numbers use the shortest representation that round-trips, so output is
// byte-identical across runs.

#include <charconv>
#include <ostream>
#include <string>
#include <system_error>
#include <vector>

#include "ca.hpp"
#include "circuit.hpp"
#include "lattice.hpp"

namespace mfca {

inline std::string format_number(double v)
{
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{})
        return "nan";
    return std::string(buf, end);
}

inline std::string cell_column(int row, int col)
{
    return "cell_" + std::to_string(row) + "_" + std::to_string(col);
}

/// time_s, cell_r_c ... one row per trace sample, every `stride` samples.
inline void write_trace_csv(std::ostream& os, const Trace& trace, std::size_t stride = 1)
{
    if (stride == 0)
        stride = 1;
    os << "time_s";
    for (int r = 0; r < trace.height(); ++r)
        for (int c = 0; c < trace.width(); ++c)
            os << ',' << cell_column(r, c);
    os << '\n';
    for (std::size_t k = 0; k < trace.samples(); k += stride) {
        os << format_number(trace.times()[k]);
        const double* row = trace.row(k);
        for (std::size_t i = 0; i < trace.cells(); ++i)
            os << ',' << format_number(row[i]);
        os << '\n';
    }
}

/// t, v_in, v_out triplets of a comparator sweep.
inline void write_sweep_csv(std::ostream& os, const SweepTrace& trace)
{
    os << "time_s,v_in,v_out\n";
    for (std::size_t k = 0; k < trace.times.size(); ++k)
        os << format_number(trace.times[k]) << ',' << format_number(trace.inputs[k]) << ','
           << format_number(trace.outputs[k]) << '\n';
}

/// step, cell_r_c ... with 0/1 states of each grid in the sequence.
inline void write_states_csv(std::ostream& os, const std::vector<Grid>& grids)
{
    if (grids.empty())
        return;
    os << "step";
    for (int r = 0; r < grids.front().height(); ++r)
        for (int c = 0; c < grids.front().width(); ++c)
            os << ',' << cell_column(r, c);
    os << '\n';
    for (std::size_t s = 0; s < grids.size(); ++s) {
        os << s;
        for (auto v : grids[s].cells())
            os << ',' << static_cast<int>(v);
        os << '\n';
    }
}

} // namespace mfca
