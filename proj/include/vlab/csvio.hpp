#pragma once

#include <string>
#include <vector>

#include "vlab/limit.hpp"
#include "vlab/trajectory.hpp"

namespace vlab {

/// Shortest decimal form that round-trips binary64 (17 significant digits
/// worst case), locale independent.
std::string format_double(double v);

/// "t,x" rows, one per node; the jump at t = 0 is emitted as two rows with
/// equal t (left limit first).
void write_trajectory_csv(const std::string& path, const Trajectory& x);

/// One period of an orbit, t measured from the orbit start.
void write_orbit_csv(const std::string& path, const PeriodicOrbit& orbit);

/// "eps,period,sup_error,l1_error,overshoot,undershoot" rows.
void write_sweep_csv(const std::string& path, const std::vector<LimitSweepRow>& rows);

/// "a,u" rows for one density snapshot.
void write_density_csv(const std::string& path, const std::vector<double>& u, double dt);

/// Reads a "t,x" CSV (as written by write_trajectory_csv) into time/value
/// arrays. Duplicate-t jump rows keep the first (left-limit) value.
void read_tx_csv(const std::string& path, std::vector<double>& t, std::vector<double>& x);

} // namespace vlab
