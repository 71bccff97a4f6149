#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>

#include "lvlm/lattice.hpp"

namespace lvlm {

// Text lattice format:
//
//   LVLM-LATTICE <d> <len_1> ... <len_d> <dtype>
//   <values, whitespace separated, row-major>
//
// dtype is `u8` (one symbol per node) or `f64xM` (M reals per node, node
// after node). Two-dimensional u8 lattices can also be stored as PGM (P2
// ASCII or P5 binary) with rows along the first axis.
//
// The alphabet of a u8 lattice read from LVLM-LATTICE is its largest symbol
// plus one; for PGM it is maxval plus one.
Observation read_lattice(std::istream& in);
Observation read_lattice_file(const std::filesystem::path& path);

void write_lattice(std::ostream& out, const SymbolLattice& lattice);
void write_lattice(std::ostream& out, const VectorLattice& lattice);
void write_lattice(std::ostream& out, const Observation& lattice);

// Writes a 2-D symbol lattice as PGM with maxval = alphabet - 1.
void write_pgm(std::ostream& out, const SymbolLattice& lattice, bool binary = true);

// Maps states to evenly spaced gray levels 0..255 for viewing.
void write_state_pgm(std::ostream& out, const StateLattice& states, std::size_t num_states);

// State lattices are stored as u8 symbol lattices.
SymbolLattice states_as_symbols(const StateLattice& states, std::size_t num_states);
StateLattice symbols_as_states(const SymbolLattice& symbols);

// Writes to a temporary file next to `path`, then renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::function<void(std::ostream&)>& writer);

// Decimal with 17 significant digits, enough to round-trip a double.
std::string format_double(double value);

}  // namespace lvlm
