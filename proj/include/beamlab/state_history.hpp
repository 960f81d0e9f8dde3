#ifndef BEAMLAB_STATE_HISTORY_HPP
#define BEAMLAB_STATE_HISTORY_HPP

#include <string>

#include "beamlab/grid.hpp"

namespace beamlab {

/// Trajectory of the displacement and its time derivative, one frame per step.
struct StateHistory {
    TimeSeriesField u;
    TimeSeriesField ut;

    StateHistory() = default;
    StateHistory(const Grid& g, const TimeAxis& ax) : u(g, ax), ut(g, ax) {}

    const Grid& grid() const { return u.grid; }
    const TimeAxis& axis() const { return u.axis; }
};

// Binary checkpoint: magic+version tag, grid, axis, then the u and u_t blocks
// as row-major little-endian 64-bit floats.
void save_checkpoint(const StateHistory& h, const std::string& path);
StateHistory load_checkpoint(const std::string& path);

} // namespace beamlab

#endif
