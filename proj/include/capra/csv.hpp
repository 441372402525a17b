#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "capra/conjugacy.hpp"
#include "capra/xreal.hpp"

namespace capra {

/// Splits one CSV line on commas. No quoting: every field here is numeric or a
/// bare label.
inline std::vector<std::string> split_csv_line(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    fields.emplace_back(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

/// Writes `x_1,...,x_d,value` then one row per grid point. Numbers use the
/// shortest round-trip form, so reading the file back is lossless.
template <typename Scalar>
void write_grid_csv(std::ostream& os, const GridFunction<Scalar>& f) {
  const Index d = f.dimension();
  for (Index i = 0; i < d; ++i) os << "x_" << (i + 1) << ',';
  os << "value\n";
  for (std::size_t r = 0; r < f.size(); ++r) {
    const auto& p = f.point(r);
    for (Index i = 0; i < d; ++i) os << to_string(ExtendedReal<Scalar>(p(i))) << ',';
    os << to_string(f.value(r)) << '\n';
  }
}

template <typename Scalar = double>
GridFunction<Scalar> read_grid_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("read_grid_csv: missing header");
  const auto header = split_csv_line(line);
  if (header.size() < 2 || header.back() != "value") throw std::invalid_argument("read_grid_csv: bad header");
  const auto d = static_cast<Index>(header.size() - 1);
  for (Index i = 0; i < d; ++i)
    if (header[static_cast<std::size_t>(i)] != "x_" + std::to_string(i + 1))
      throw std::invalid_argument("read_grid_csv: bad header column '" + header[static_cast<std::size_t>(i)] + "'");

  std::vector<Vector<Scalar>> points;
  std::vector<ExtendedReal<Scalar>> values;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size())
      throw std::invalid_argument("read_grid_csv: line " + std::to_string(line_no) + " has the wrong field count");
    Vector<Scalar> p(d);
    for (Index i = 0; i < d; ++i) {
      const auto v = parse_ext_real<Scalar>(fields[static_cast<std::size_t>(i)]);
      if (!v.is_finite()) throw std::invalid_argument("read_grid_csv: coordinates must be finite");
      p(i) = v.value();
    }
    points.push_back(std::move(p));
    values.push_back(parse_ext_real<Scalar>(fields.back()));
  }
  return GridFunction<Scalar>(std::move(points), std::move(values));
}

template <typename Scalar = double>
GridFunction<Scalar> read_grid_csv(const std::string& text) {
  std::istringstream is(text);
  return read_grid_csv<Scalar>(is);
}

}  // namespace capra
