#pragma once

#include "piv/field.hpp"

#include <filesystem>
#include <string>

namespace piv {

// CSV layouts, one row per node in row-major order, values printed with
// 9 significant digits:
//   vectors: x,y,u,v,status      (status is measured or interpolated)
//   scalars: x,y,<quantity>
// x and y are node-center pixel coordinates.

std::string format_vectors_csv(const VectorField &field);
void export_vectors(const VectorField &field, const std::filesystem::path &out);

/// Rebuilds grid and field from a vector CSV. The grid is recovered from
/// the node centers: the first center sits at window/2 and neighbors are
/// `step` apart; the image extent is taken as the smallest that holds it.
VectorField import_vectors(const std::filesystem::path &in);
VectorField parse_vectors_csv(const std::string &text);

std::string format_scalars_csv(const ScalarField &s);
void export_scalars(const ScalarField &s, const std::filesystem::path &out);
ScalarField import_scalars(const std::filesystem::path &in);

} // namespace piv
