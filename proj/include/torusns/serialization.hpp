#pragma once

#include <filesystem>
#include <iosfwd>

#include "torusns/field.hpp"

namespace torusns {

/// Binary field format: one line of JSON header terminated by '\n'
/// ({"format":"torusns-field","version":1,"n":..,"K":..,"components":..,
/// "dotted":..,"solenoidal":..,"potential":..,"byte_order":"little","scalar":"float64"}),
/// followed by (2K+1)^n * components pairs of little-endian float64 (re, im)
/// in lexicographic xi order, components innermost.
void write_field(std::ostream& out, const FourierField& field);
FourierField read_field(std::istream& in);

void save_field(const std::filesystem::path& path, const FourierField& field);
FourierField load_field(const std::filesystem::path& path);

}  // namespace torusns
