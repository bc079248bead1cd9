#include "torusns/serialization.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "json.hpp"
#include "torusns/errors.hpp"

namespace torusns {
namespace {

constexpr const char* kFormat = "torusns-field";

void put_f64(std::ostream& out, double v) {
  std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  unsigned char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(bits >> (8 * i));
  out.write(reinterpret_cast<const char*>(bytes), 8);
}

double get_f64(std::istream& in) {
  unsigned char bytes[8];
  in.read(reinterpret_cast<char*>(bytes), 8);
  if (!in) throw Error("truncated field payload");
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

}  // namespace

void write_field(std::ostream& out, const FourierField& field) {
  nlohmann::ordered_json header = {
      {"format", kFormat},
      {"version", 1},
      {"n", field.dimension()},
      {"K", field.lattice().cutoff()},
      {"components", field.components()},
      {"dotted", field.flags().dotted},
      {"solenoidal", field.flags().solenoidal},
      {"potential", field.flags().potential},
      {"byte_order", "little"},
      {"scalar", "float64"},
  };
  out << header.dump() << '\n';
  for (const Complex& c : field.data()) {
    put_f64(out, c.real());
    put_f64(out, c.imag());
  }
  if (!out) throw Error("failed to write field");
}

FourierField read_field(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error("missing field header");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed field header: ") + e.what());
  }
  if (header.value("format", "") != kFormat || header.value("version", 0) != 1) {
    throw Error("unsupported field format");
  }
  if (header.value("byte_order", "little") != "little" || header.value("scalar", "float64") != "float64") {
    throw Error("unsupported field encoding");
  }
  Lattice lattice(header.at("n").get<int>(), header.at("K").get<int>());
  FieldFlags flags{header.value("dotted", false), header.value("solenoidal", false),
                   header.value("potential", false)};
  FourierField field(lattice, header.at("components").get<int>(), flags);
  for (Complex& c : field.data()) {
    const double re = get_f64(in);
    const double im = get_f64(in);
    c = {re, im};
  }
  return field;
}

void save_field(const std::filesystem::path& path, const FourierField& field) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_field(out, field);
}

FourierField load_field(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return read_field(in);
}

}  // namespace torusns
