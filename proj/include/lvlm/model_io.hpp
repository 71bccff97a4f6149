#pragma once

#include <filesystem>
#include <iosfwd>

#include "lvlm/model.hpp"
#include "lvlm/vq.hpp"

namespace lvlm {

// Models are stored as `key=value` lines; blank lines and lines starting
// with '#' are ignored. Matrices are whitespace-separated row-major values
// written with 17 significant digits, so a write/read cycle is exact.
//
//   variant=discrete            variant=real
//   N= M= d= w= w_e= w_l=        (same scalars)
//   alpha=                      alpha=
//   A=<N*N values>              A=<N*N values>
//   B=<N*M values>              mu=<N*M values>
//                               sigma=<N*M*M values, state by state>
void write_model(std::ostream& out, const Model& model);
Model read_model(std::istream& in);
Model read_model_file(const std::filesystem::path& path);

// Codebook in the same syntax: variant=codebook, N, M, centroids=, sizes=.
void write_codebook(std::ostream& out, const Codebook& codebook);
Codebook read_codebook(std::istream& in);

}  // namespace lvlm
