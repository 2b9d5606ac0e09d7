#include "sqmf/io.hpp"

#include <cctype>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

namespace sqmf {

namespace {

constexpr char kMagic[4] = {'Q', 'M', 'A', 'T'};
constexpr char kPlaneOrder[4] = {'0', '1', '2', '3'};
constexpr long kHeaderBytes = 18;

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b)
    out.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
}

void put_f64(std::string& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof(bits));
  for (int b = 0; b < 8; ++b)
    out.push_back(static_cast<char>((bits >> (8 * b)) & 0xff));
}

std::uint64_t get_uint(const std::string& buf, long offset, int bytes) {
  std::uint64_t v = 0;
  for (int b = 0; b < bytes; ++b)
    v |= static_cast<std::uint64_t>(
             static_cast<unsigned char>(buf[static_cast<std::size_t>(offset + b)]))
         << (8 * b);
  return v;
}

double get_f64(const std::string& buf, long offset) {
  const std::uint64_t bits = get_uint(buf, offset, 8);
  double v;
  std::memcpy(&v, &bits, sizeof(v));
  return v;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

QuaternionMatrix read_qmat(const std::string& path) {
  const std::string buf = slurp(path);
  if (static_cast<long>(buf.size()) < kHeaderBytes)
    throw FormatError(static_cast<long>(buf.size()),
                      path + ": truncated QMAT header");
  if (std::memcmp(buf.data(), kMagic, 4) != 0)
    throw FormatError(0, path + ": bad QMAT magic");
  const auto version = static_cast<std::uint16_t>(get_uint(buf, 4, 2));
  if (version != kQmatVersion)
    throw FormatError(4, path + ": unsupported QMAT version " +
                             std::to_string(version));
  const auto m = static_cast<Index>(get_uint(buf, 6, 4));
  const auto n = static_cast<Index>(get_uint(buf, 10, 4));
  if (std::memcmp(buf.data() + 14, kPlaneOrder, 4) != 0)
    throw FormatError(14, path + ": bad plane-order marker");

  const long expected = kHeaderBytes + 4L * m * n * 8L;
  if (static_cast<long>(buf.size()) != expected)
    throw FormatError(static_cast<long>(buf.size()),
                      path + ": payload length " +
                          std::to_string(buf.size() - kHeaderBytes) +
                          " != expected " +
                          std::to_string(expected - kHeaderBytes));

  QuaternionMatrix q(m, n);
  long off = kHeaderBytes;
  for (int l = 0; l < 4; ++l)
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < n; ++j, off += 8)
        q.component(l)(i, j) = get_f64(buf, off);
  return q;
}

void write_qmat(const std::string& path, const QuaternionMatrix& q) {
  std::string out;
  out.reserve(static_cast<std::size_t>(kHeaderBytes + 4L * q.rows() * q.cols() * 8L));
  out.append(kMagic, 4);
  put_u16(out, kQmatVersion);
  put_u32(out, static_cast<std::uint32_t>(q.rows()));
  put_u32(out, static_cast<std::uint32_t>(q.cols()));
  out.append(kPlaneOrder, 4);
  for (int l = 0; l < 4; ++l)
    for (Index i = 0; i < q.rows(); ++i)
      for (Index j = 0; j < q.cols(); ++j) put_f64(out, q.component(l)(i, j));
  write_text_atomic(path, out);
}

MatrixXd read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        throw FormatError(0, path + ": non-numeric cell '" + cell + "'");
      }
      while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used])))
        ++used;
      if (used != cell.size())
        throw FormatError(0, path + ": non-numeric cell '" + cell + "'");
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw FormatError(0, path + ": ragged CSV row");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw FormatError(0, path + ": empty CSV");
  MatrixXd m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m;
}

void write_csv(const std::string& path, const MatrixXd& m, int precision) {
  std::ostringstream os;
  os.precision(precision);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) os << ',';
      os << m(i, j);
    }
    os << '\n';
  }
  write_text_atomic(path, os.str());
}

QuaternionMatrix read_planes_csv(const std::array<std::string, 4>& paths,
                                 bool zero_missing_s3) {
  const MatrixXd s0 = read_csv(paths[0]);
  const MatrixXd s1 = read_csv(paths[1]);
  const MatrixXd s2 = read_csv(paths[2]);
  MatrixXd s3;
  if (paths[3].empty() && zero_missing_s3)
    s3 = MatrixXd::Zero(s0.rows(), s0.cols());
  else
    s3 = read_csv(paths[3]);
  if (s1.rows() != s0.rows() || s1.cols() != s0.cols() ||
      s2.rows() != s0.rows() || s2.cols() != s0.cols() ||
      s3.rows() != s0.rows() || s3.cols() != s0.cols())
    throw FormatError(0, "plane CSV shapes differ");
  return {s0, s1, s2, s3};
}

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("short write to " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("rename " + tmp + " -> " + path + ": " + ec.message());
}

}  // namespace sqmf
