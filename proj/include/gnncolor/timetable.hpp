#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gnncolor/graph.hpp"

namespace gnncolor {

// One ride request; times are minutes since midnight with depart < arrive.
struct Request {
  std::string id;
  int depart = 0;
  int arrive = 0;
};

struct Timetable {
  std::vector<Request> requests;
};

// "HH:MM" -> minutes since midnight
int parse_hhmm(const std::string& text);

// Headered CSV "id,depart,arrive" with HH:MM times.
Timetable parse_timetable_csv(std::istream& in);
Timetable parse_timetable_csv_file(const std::string& path);

// Interval graph: one node per request in timetable order, edge iff the
// half-open intervals [depart, arrive) intersect. A request arriving exactly
// when another departs does not conflict with it.
Graph encode_intervals(const Timetable& t);

}  // namespace gnncolor
