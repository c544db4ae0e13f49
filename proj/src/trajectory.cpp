#include "tscp/trajectory.hpp"

#include "tscp/csv.hpp"

#include <ostream>
#include <sstream>

namespace tscp {

namespace {

std::string run_header(const Trajectory& trajectory) {
    std::ostringstream out;
    out << "# q=" << format_number(trajectory.params.q)
        << " seed=" << format_number(static_cast<unsigned long long>(trajectory.seed))
        << " window=[" << trajectory.initial.left() << "," << trajectory.initial.right() << "]"
        << " boundary=" << trajectory.initial.boundary().label()
        << " variant=" << to_string(trajectory.params.variant)
        << " horizon=" << format_number(trajectory.horizon);
    return out.str();
}

}  // namespace

Configuration snapshot_at(const Trajectory& trajectory, double t) {
    Replay replay(trajectory);
    while (!replay.done() && replay.peek().time <= t) replay.step();
    return replay.config();
}

void write_events_csv(std::ostream& out, const Trajectory& trajectory) {
    write_line(out, run_header(trajectory));
    write_line(out, "time,site,draw,new_state");
    std::string row;
    for (const Event& e : trajectory.events) {
        row.clear();
        row += format_number(e.time);
        row += ',';
        row += format_number(e.site);
        row += ',';
        row += format_number(e.draw);
        row += ',';
        row += format_number(static_cast<int>(e.new_state));
        write_line(out, row);
    }
}

void write_snapshot_csv(std::ostream& out, const Trajectory& trajectory,
                        const Configuration& config, double time) {
    write_line(out, run_header(trajectory) + " time=" + format_number(time));
    write_line(out, "site,state");
    for (int x = config.left(); x <= config.right(); ++x) {
        write_line(out,
                   format_number(x) + "," + format_number(static_cast<int>(config.at(x))));
    }
}

}  // namespace tscp
