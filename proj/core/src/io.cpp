#include "cowichan/io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "cowichan/error.hpp"

namespace cowichan {

namespace {

std::size_t read_count(std::istream& in, const std::string& context, const char* what) {
  long long v = 0;
  if (!(in >> v) || v < 0) throw ParseError(context + ": expected " + what);
  return static_cast<std::size_t>(v);
}

}  // namespace

std::string format_real(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_int_matrix(std::ostream& out, const IntMatrix& m) {
  out << m.nrows << ' ' << m.ncols << '\n';
  for (std::size_t r = 0; r < m.nrows; ++r) {
    for (std::size_t c = 0; c < m.ncols; ++c) {
      if (c) out << ' ';
      out << m.at(r, c);
    }
    out << '\n';
  }
}

IntMatrix read_int_matrix(std::istream& in, const std::string& context) {
  const std::size_t nrows = read_count(in, context, "nrows");
  const std::size_t ncols = read_count(in, context, "ncols");
  IntMatrix m(nrows, ncols);
  for (auto& v : m.data) {
    unsigned long long x = 0;
    if (!(in >> x)) throw ParseError(context + ": truncated matrix body");
    v = static_cast<std::uint32_t>(x);
  }
  return m;
}

void write_mask(std::ostream& out, const Mask& m) {
  out << m.nrows << ' ' << m.ncols << '\n';
  for (std::size_t r = 0; r < m.nrows; ++r) {
    for (std::size_t c = 0; c < m.ncols; ++c) {
      if (c) out << ' ';
      out << (m.data[r * m.ncols + c] ? 1 : 0);
    }
    out << '\n';
  }
}

Mask read_mask(std::istream& in, const std::string& context) {
  const std::size_t nrows = read_count(in, context, "nrows");
  const std::size_t ncols = read_count(in, context, "ncols");
  Mask m(nrows, ncols);
  for (auto& v : m.data) {
    int x = 0;
    if (!(in >> x) || (x != 0 && x != 1)) throw ParseError(context + ": mask cells must be 0 or 1");
    v = static_cast<std::uint8_t>(x);
  }
  return m;
}

void write_point_list(std::ostream& out, const PointList& pts) {
  out << pts.size() << '\n';
  for (const Point& p : pts.points) out << p.row << ' ' << p.col << '\n';
}

PointList read_point_list(std::istream& in, const std::string& context) {
  const std::size_t nelts = read_count(in, context, "nelts");
  PointList pts;
  pts.points.resize(nelts);
  for (auto& p : pts.points) {
    p.row = read_count(in, context, "point row");
    p.col = read_count(in, context, "point col");
  }
  return pts;
}

void write_real_matrix(std::ostream& out, const RealMatrix& m) {
  out << m.n << '\n';
  for (std::size_t r = 0; r < m.n; ++r) {
    for (std::size_t c = 0; c < m.n; ++c) {
      if (c) out << ' ';
      out << format_real(m.at(r, c));
    }
    out << '\n';
  }
}

RealMatrix read_real_matrix(std::istream& in, const std::string& context) {
  const std::size_t n = read_count(in, context, "n");
  RealMatrix m(n);
  for (auto& v : m.data) {
    if (!(in >> v)) throw ParseError(context + ": truncated matrix body");
  }
  return m;
}

void write_real_vector(std::ostream& out, const RealVector& v) {
  out << v.size() << '\n';
  for (double x : v.values) out << format_real(x) << '\n';
}

RealVector read_real_vector(std::istream& in, const std::string& context) {
  const std::size_t n = read_count(in, context, "n");
  RealVector v(n);
  for (auto& x : v.values) {
    if (!(in >> x)) throw ParseError(context + ": truncated vector body");
  }
  return v;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace cowichan
