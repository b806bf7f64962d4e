#include "sds/csv.hpp"

#include <cstdio>

namespace sds {

void write_csv_double(std::ostream& os, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  os << buf;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "t,mode";
  for (int i = 1; i <= traj.dim_x; ++i) os << ",x" << i;
  for (int i = 1; i <= traj.dim_x; ++i) os << ",u" << i;
  os << "\n";
  for (std::size_t k = 0; k < traj.n_points(); ++k) {
    write_csv_double(os, traj.times[k]);
    os << "," << traj.modes[k] + 1;  // modes are 1-based on the wire
    for (double v : traj.state(k)) {
      os << ",";
      write_csv_double(os, v);
    }
    for (double v : traj.control_at(k)) {
      os << ",";
      write_csv_double(os, v);
    }
    os << "\n";
  }
}

void write_mode_path_csv(std::ostream& os, const ModePath& path) {
  os << "t_jump,mode\n";
  for (std::size_t k = 0; k < path.jump_times.size(); ++k) {
    write_csv_double(os, path.jump_times[k]);
    os << "," << path.modes[k] + 1 << "\n";
  }
}

void write_moments_csv(std::ostream& os, const EnsembleStats& stats) {
  os << "t";
  for (double q : stats.q_list) {
    os << ",q=";
    write_csv_double(os, q);
  }
  os << "\n";
  for (std::size_t k = 0; k < stats.times.size(); ++k) {
    write_csv_double(os, stats.times[k]);
    for (std::size_t qi = 0; qi < stats.q_list.size(); ++qi) {
      os << ",";
      write_csv_double(os, stats.moment_curves[qi][k]);
    }
    os << "\n";
  }
}

}  // namespace sds
