#pragma once

// Minimal WKT reader and writer for simple polygons, one per line,
// optionally prefixed by `id<TAB>`.

#include "error.hpp"
#include "geometry.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace simclust {

namespace detail {

class WktCursor
{
public:
  explicit WktCursor(std::string_view s) : s_(s) {}

  void skip_ws()
  {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }
  bool at_end()
  {
    skip_ws();
    return pos_ >= s_.size();
  }
  char peek()
  {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  void expect(char c)
  {
    if (peek() != c)
      throw InputError(std::string("expected '") + c + "' at column " + std::to_string(pos_ + 1));
    ++pos_;
  }
  std::string word()
  {
    skip_ws();
    std::string w;
    while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_])))
      w.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(s_[pos_++]))));
    return w;
  }
  double number()
  {
    skip_ws();
    double v = 0.0;
    const char* first = s_.data() + pos_;
    const char* last = s_.data() + s_.size();
    if (first != last && *first == '+')
      ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr == first)
      throw InputError("expected a number at column " + std::to_string(pos_ + 1));
    pos_ = static_cast<std::size_t>(ptr - s_.data());
    return v;
  }

private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

} // namespace detail

//! Parses `POLYGON ((x y, ...))`. Holes and other geometry types are rejected.
inline Polygon
parse_wkt_polygon(std::string_view text, std::string id = {})
{
  detail::WktCursor cur(text);
  const std::string kind = cur.word();
  if (kind != "POLYGON") {
    if (kind.empty())
      throw InputError("expected a WKT geometry");
    throw InputError("unsupported geometry type " + kind + "; only POLYGON is accepted");
  }
  if (cur.peek() != '(') {
    const std::string extra = cur.word();
    if (extra == "EMPTY")
      throw InputError("empty polygon");
    throw InputError("unsupported POLYGON variant " + extra);
  }
  cur.expect('(');
  cur.expect('(');
  std::vector<Point2> ring;
  for (;;) {
    const double x = cur.number();
    const double y = cur.number();
    if (cur.peek() != ',' && cur.peek() != ')')
      throw InputError("only 2D coordinates are supported");
    ring.push_back({x, y});
    if (cur.peek() == ',') {
      cur.expect(',');
      continue;
    }
    cur.expect(')');
    break;
  }
  if (cur.peek() == ',')
    throw InputError("polygons with holes are not supported");
  cur.expect(')');
  if (!cur.at_end())
    throw InputError("trailing characters after polygon");
  return Polygon::make(std::move(ring), std::move(id));
}

//! One polygon per non-blank line. Errors carry `name:line:` prefixes.
inline std::vector<Polygon>
read_wkt_lines(std::istream& in, const std::string& name = "input")
{
  std::vector<Polygon> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos)
      continue;
    std::string id = std::to_string(lineno - 1);
    std::string_view body = line;
    if (const auto tab = line.find('\t'); tab != std::string::npos) {
      id = line.substr(0, tab);
      body = std::string_view(line).substr(tab + 1);
    }
    try {
      out.push_back(parse_wkt_polygon(body, std::move(id)));
    } catch (const InputError& e) {
      throw InputError(name + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (out.empty())
    throw InputError(name + ": no polygons found");
  return out;
}

inline std::vector<Polygon>
read_wkt_file(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw InputError("cannot open " + path);
  return read_wkt_lines(in, path);
}

//! Shortest round-trip decimal form.
inline std::string
format_double(double v)
{
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc{} ? std::string(buf, ptr) : std::string("nan");
}

inline std::string
to_wkt(const Polygon& p)
{
  std::string s = "POLYGON ((";
  const auto v = p.vertices();
  for (std::size_t i = 0; i <= v.size(); ++i) {
    const Point2 q = v[i % v.size()];
    if (i)
      s += ", ";
    s += format_double(q.x);
    s += ' ';
    s += format_double(q.y);
  }
  s += "))";
  return s;
}

inline void
write_wkt_lines(std::ostream& out, std::span<const Polygon> polys)
{
  for (const auto& p : polys) {
    if (!p.id().empty())
      out << p.id() << '\t';
    out << to_wkt(p) << '\n';
  }
}

} // namespace simclust
