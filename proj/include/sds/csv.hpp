#ifndef SDS_CSV_HPP
#define SDS_CSV_HPP

#include <ostream>

#include "sds/chain.hpp"
#include "sds/estimator.hpp"
#include "sds/simulator.hpp"

namespace sds {

// All floats serialize with 17 significant digits so files re-parse to
// the same doubles.
void write_csv_double(std::ostream& os, double v);

// Header t,mode,x1..xn,u1..un; one row per recorded grid point.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

// Header t_jump,mode.
void write_mode_path_csv(std::ostream& os, const ModePath& path);

// Header t,q=2,q=4,...
void write_moments_csv(std::ostream& os, const EnsembleStats& stats);

}  // namespace sds

#endif
