#include "mcs/core/worker_csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

#include "mcs/core/errors.hpp"
#include "mcs/core/scenario.hpp"

namespace mcs {

namespace {

constexpr const char* kHeader[] = {"id", "lon", "lat", "speed", "e_c", "e_D", "e_t", "e_m", "f"};
constexpr std::size_t kColumns = 9;

std::string trim(std::string s) {
  auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double to_double(const std::string& cell, std::size_t line, const char* column) {
  try {
    std::size_t used = 0;
    double v = std::stod(cell, &used);
    if (used != cell.size()) throw std::invalid_argument(cell);
    return v;
  } catch (const std::exception&) {
    throw ParseError(std::string("column ") + column + ": not a number: '" + cell + "'", line);
  }
}

}  // namespace

std::vector<WorkerSpec> parse_worker_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (!have_header && std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split(line);
    if (cells.size() != kColumns) throw ParseError("expected header id,lon,lat,speed,e_c,e_D,e_t,e_m,f", line_no);
    for (std::size_t c = 0; c < kColumns; ++c)
      if (cells[c] != kHeader[c]) throw ParseError("unexpected header column '" + cells[c] + "'", line_no);
    have_header = true;
  }
  if (!have_header) throw ParseError("missing header", 0);

  std::vector<WorkerSpec> out;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split(line);
    if (cells.size() != kColumns)
      throw ParseError("expected 9 columns, got " + std::to_string(cells.size()), line_no);
    WorkerSpec w;
    int id = 0;
    auto [ptr, ec] = std::from_chars(cells[0].data(), cells[0].data() + cells[0].size(), id);
    if (ec != std::errc() || ptr != cells[0].data() + cells[0].size())
      throw ParseError("column id: not an integer: '" + cells[0] + "'", line_no);
    w.id = id;
    w.start.lon = to_double(cells[1], line_no, "lon");
    w.start.lat = to_double(cells[2], line_no, "lat");
    w.speed = to_double(cells[3], line_no, "speed");
    w.sense_cost = to_double(cells[4], line_no, "e_c");
    w.delay_cost = to_double(cells[5], line_no, "e_D");
    w.transmit_power = to_double(cells[6], line_no, "e_t");
    w.move_cost = to_double(cells[7], line_no, "e_m");
    w.sense_rate = to_double(cells[8], line_no, "f");
    auto problems = validate_worker(w);
    if (!problems.empty())
      throw ValidationError("row at line " + std::to_string(line_no) + ": " + problems.front());
    out.push_back(w);
  }
  return out;
}

std::vector<WorkerSpec> load_worker_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string(), 0);
  return parse_worker_csv(in);
}

}  // namespace mcs
