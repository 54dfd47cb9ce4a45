#include "mcwave/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace mcw {
namespace {

void put_le(std::ofstream& out, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xFF);
  out.write(reinterpret_cast<const char*>(b), 8);
}

double get_le(const unsigned char* b) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

std::ofstream open_out(const std::string& path, std::span<const std::string> header_lines) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  for (const auto& h : header_lines) out << "# " << h << '\n';
  out.precision(17);
  return out;
}

}  // namespace

void write_waveform_binary(std::span<const cplx> x, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  for (const auto& v : x) {
    put_le(out, v.real());
    put_le(out, v.imag());
  }
}

ComplexBuffer read_waveform_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() % 16 != 0) throw std::invalid_argument("waveform file size is not a multiple of 16 bytes");
  ComplexBuffer x(bytes.size() / 16);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = {get_le(&bytes[16 * i]), get_le(&bytes[16 * i + 8])};
  return x;
}

void write_waveform_csv(std::span<const cplx> x, const std::string& path, std::span<const std::string> header_lines) {
  auto out = open_out(path, header_lines);
  out << "re,im\n";
  for (const auto& v : x) out << v.real() << ',' << v.imag() << '\n';
}

void write_grid_csv(const SymbolGrid& g, const std::string& path, std::span<const std::string> header_lines) {
  auto out = open_out(path, header_lines);
  for (std::size_t m = 0; m < g.rows(); ++m) {
    for (std::size_t n = 0; n < g.cols(); ++n) {
      if (n) out << ',';
      out << g(m, n).real() << ',' << g(m, n).imag();
    }
    out << '\n';
  }
}

SymbolGrid read_grid_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::vector<std::vector<cplx>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> vals;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
    if (vals.size() % 2 != 0) throw std::invalid_argument("grid row has an odd number of values");
    std::vector<cplx> row;
    for (std::size_t i = 0; i < vals.size(); i += 2) row.emplace_back(vals[i], vals[i + 1]);
    if (!rows.empty() && row.size() != rows.front().size()) throw std::invalid_argument("grid rows differ in width");
    rows.push_back(std::move(row));
  }
  SymbolGrid g(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t m = 0; m < rows.size(); ++m)
    for (std::size_t n = 0; n < rows[m].size(); ++n) g(m, n) = rows[m][n];
  return g;
}

void write_real_grid_csv(const Grid<double>& g, const std::string& path, std::span<const std::string> header_lines) {
  auto out = open_out(path, header_lines);
  for (std::size_t m = 0; m < g.rows(); ++m) {
    for (std::size_t n = 0; n < g.cols(); ++n) {
      if (n) out << ',';
      out << g(m, n);
    }
    out << '\n';
  }
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = digits[v & 0xF];
  return s;
}

}  // namespace mcw
