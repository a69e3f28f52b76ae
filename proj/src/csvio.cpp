#include "vlab/csvio.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "vlab/errors.hpp"

namespace vlab {

std::string format_double(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    return out;
}

} // namespace

void write_trajectory_csv(const std::string& path, const Trajectory& x) {
    std::ofstream out = open_out(path);
    out << "t,x\n";
    for (std::int64_t i = x.i0; i <= x.last_node(); ++i) {
        const double t = x.grid.t_of(i);
        if (i == 0 && x.jump_at_zero) {
            out << format_double(t) << ',' << format_double(x.jump_at_zero->first) << '\n';
            out << format_double(t) << ',' << format_double(x.jump_at_zero->second) << '\n';
        } else {
            out << format_double(t) << ',' << format_double(x.at_node(i)) << '\n';
        }
    }
}

void write_orbit_csv(const std::string& path, const PeriodicOrbit& orbit) {
    std::ofstream out = open_out(path);
    out << "t,x\n";
    const Grid& g = orbit.one_period.grid;
    const std::int64_t lo = g.node_ceil(orbit.orbit_start);
    const std::int64_t hi = g.node_floor(orbit.orbit_start + orbit.period);
    for (std::int64_t i = lo; i <= hi; ++i) {
        out << format_double(g.t_of(i) - orbit.orbit_start) << ','
            << format_double(orbit.one_period.at_node(i)) << '\n';
    }
}

void write_sweep_csv(const std::string& path, const std::vector<LimitSweepRow>& rows) {
    std::ofstream out = open_out(path);
    out << "eps,period,sup_error,l1_error,overshoot,undershoot\n";
    for (const auto& r : rows) {
        out << format_double(r.eps) << ',' << format_double(r.period) << ','
            << format_double(r.sup_error_on_I) << ',' << format_double(r.l1_error) << ','
            << format_double(r.overshoot) << ',' << format_double(r.undershoot) << '\n';
    }
}

void write_density_csv(const std::string& path, const std::vector<double>& u, double dt) {
    std::ofstream out = open_out(path);
    out << "a,u\n";
    for (std::size_t k = 0; k < u.size(); ++k)
        out << format_double(dt * static_cast<double>(k)) << ',' << format_double(u[k]) << '\n';
}

void read_tx_csv(const std::string& path, std::vector<double>& t, std::vector<double>& x) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open for reading: " + path);
    t.clear();
    x.clear();
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw ConfigError("malformed CSV row: " + line);
        const double tv = std::stod(line.substr(0, comma));
        const double xv = std::stod(line.substr(comma + 1));
        if (!t.empty() && tv == t.back()) {
            // duplicate-t jump row: keep the first (left-limit) value, which
            // is the initial datum the membership test is about
            continue;
        } else {
            t.push_back(tv);
            x.push_back(xv);
        }
    }
}

} // namespace vlab
