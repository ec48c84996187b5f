#include "fwsparse/dictionary_io.hpp"

#include <bit>
#include <cctype>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fwsparse/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "dictionary container writes little-endian words directly");

namespace fwsparse {

namespace {

constexpr char kMagic[8] = {'F', 'W', 'S', 'P', 'D', 'I', 'C', 'T'};

}  // namespace

void save_dictionary(const Dictionary& dict,
                     const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(kMagic, sizeof kMagic);
  const auto d = static_cast<std::uint32_t>(dict.dim());
  const auto n = static_cast<std::uint32_t>(dict.size());
  out.write(reinterpret_cast<const char*>(&d), sizeof d);
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  out.write(reinterpret_cast<const char*>(dict.matrix().data()),
            static_cast<std::streamsize>(sizeof(double) * d * n));
  if (!out) throw IoError("short write to " + path.string());
}

Dictionary load_dictionary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  char magic[8];
  std::uint32_t d = 0, n = 0;
  in.read(magic, sizeof magic);
  in.read(reinterpret_cast<char*>(&d), sizeof d);
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw IoError(path.string() + " is not a dictionary container");
  }
  if (d == 0 || n == 0) {
    throw IoError(path.string() + " declares an empty dictionary");
  }
  Eigen::MatrixXd atoms(d, n);
  in.read(reinterpret_cast<char*>(atoms.data()),
          static_cast<std::streamsize>(sizeof(double) * d * n));
  if (!in || in.gcount() !=
                 static_cast<std::streamsize>(sizeof(double) * d * n)) {
    throw IoError(path.string() + " is truncated");
  }
  if (in.peek() != std::ifstream::traits_type::eof()) {
    throw IoError(path.string() + " has trailing bytes");
  }
  return Dictionary(std::move(atoms));
}

Dictionary load_dictionary_csv(const std::filesystem::path& path,
                               bool normalize) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw IoError(path.string() + ": unparseable cell '" + cell + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw IoError(path.string() + ": ragged row " +
                    std::to_string(rows.size() + 1));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty() || rows.front().empty()) {
    throw IoError(path.string() + " contains no data");
  }
  Eigen::MatrixXd atoms(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows.front().size(); ++j) {
      atoms(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i][j];
    }
  }
  return Dictionary(std::move(atoms), normalize);
}

}  // namespace fwsparse
