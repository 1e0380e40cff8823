#include "distrl/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace distrl {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) {
    while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
    while (!field.empty() && field.front() == ' ') field.erase(field.begin());
    fields.push_back(field);
  }
  return fields;
}

std::vector<std::string> coordinate_header(std::size_t dims) {
  if (dims == 2) return {"atom_x", "atom_y"};
  std::vector<std::string> h;
  for (std::size_t k = 0; k < dims; ++k) h.push_back("z" + std::to_string(k));
  return h;
}

void write_header(std::ostream& out, const std::vector<std::string>& header) {
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
}

}  // namespace

std::string format_number(double v) {
  if (v == 0.0) return "0";  // folds -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("CSV: missing header");
  table.header = split(line);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split(line);
    if (fields.size() != table.header.size()) {
      throw std::runtime_error("CSV: wrong field count on line " + std::to_string(line_no));
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) {
      double v = 0.0;
      const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
      if (res.ec != std::errc() || res.ptr != f.data() + f.size()) {
        throw std::runtime_error("CSV: bad number '" + f + "' on line " + std::to_string(line_no));
      }
      row.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  write_header(out, header);
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
    out << '\n';
  }
}

void write_distribution_csv(std::ostream& out, const CategoricalReturnDist& dist) {
  auto header = coordinate_header(dist.grid().dims());
  header.push_back("weight");
  write_header(out, header);
  const auto w = dist.weights();
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] <= 0.0) continue;
    for (double c : dist.grid().atom(i)) out << format_number(c) << ',';
    out << format_number(w[i]) << '\n';
  }
}

WeightedPoints read_measure_csv(std::istream& in) {
  const CsvTable table = read_csv(in);
  if (table.rows.empty()) throw std::runtime_error("measure CSV: no rows");
  const bool weighted = table.header.back() == "weight";
  const std::size_t dims = table.header.size() - (weighted ? 1 : 0);
  if (dims == 0) throw std::runtime_error("measure CSV: no coordinate columns");
  WeightedPoints m;
  m.dims = dims;
  double total = 0.0;
  for (const auto& row : table.rows) {
    m.coords.insert(m.coords.end(), row.begin(), row.begin() + static_cast<std::ptrdiff_t>(dims));
    const double w = weighted ? row.back() : 1.0;
    if (!(w >= 0.0) || !std::isfinite(w)) throw std::runtime_error("measure CSV: negative weight");
    m.weights.push_back(w);
    total += w;
  }
  if (!(total > 0.0)) throw std::runtime_error("measure CSV: total weight is zero");
  for (auto& w : m.weights) w /= total;
  return m;
}

void write_samples_csv(std::ostream& out, const SampleSet& samples) {
  write_header(out, samples.dims() == 2 ? std::vector<std::string>{"x", "y"} : coordinate_header(samples.dims()));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto p = samples.point(i);
    for (std::size_t k = 0; k < p.size(); ++k) out << (k ? "," : "") << format_number(p[k]);
    out << '\n';
  }
}

}  // namespace distrl
