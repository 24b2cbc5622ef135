#include "gnncolor/timetable.hpp"

#include <fstream>
#include <sstream>

#include "gnncolor/errors.hpp"

namespace gnncolor {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

}  // namespace

int parse_hhmm(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 >= text.size())
    throw ParseError("bad time '" + text + "', expected HH:MM");
  int h = 0, m = 0;
  try {
    std::size_t used = 0;
    h = std::stoi(text.substr(0, colon), &used);
    if (used != colon) throw ParseError("");
    used = 0;
    const std::string mm = text.substr(colon + 1);
    m = std::stoi(mm, &used);
    if (used != mm.size()) throw ParseError("");
  } catch (const std::exception&) {
    throw ParseError("bad time '" + text + "', expected HH:MM");
  }
  if (h < 0 || m < 0 || m > 59) throw ParseError("bad time '" + text + "', expected HH:MM");
  return h * 60 + m;
}

Timetable parse_timetable_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty timetable");
  auto header = split_csv(line);
  if (header.size() != 3 || header[0] != "id" || header[1] != "depart" ||
      header[2] != "arrive")
    throw ParseError("timetable header must be 'id,depart,arrive'");

  Timetable t;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_csv(line);
    if (fields.size() != 3)
      throw ParseError("line " + std::to_string(line_no) + ": expected 3 fields");
    Request r;
    r.id = fields[0];
    r.depart = parse_hhmm(fields[1]);
    r.arrive = parse_hhmm(fields[2]);
    if (r.depart >= r.arrive)
      throw ParseError("line " + std::to_string(line_no) + ": request '" + r.id +
                       "' must depart before it arrives");
    t.requests.push_back(std::move(r));
  }
  return t;
}

Timetable parse_timetable_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open timetable file: " + path);
  return parse_timetable_csv(in);
}

Graph encode_intervals(const Timetable& t) {
  const int n = static_cast<int>(t.requests.size());
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Request& a = t.requests[i];
      const Request& b = t.requests[j];
      // half-open overlap; touching endpoints share no taxi-time
      if (a.depart < b.arrive && b.depart < a.arrive) edges.emplace_back(i, j);
    }
  }
  return Graph::from_edges(n, std::move(edges));
}

}  // namespace gnncolor
