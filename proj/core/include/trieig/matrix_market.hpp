#pragma once

#include <iosfwd>
#include <string>

#include "trieig/matrix.hpp"

namespace trieig {

enum class MarketLayout { Array, Coordinate };

/// Writes "%%MatrixMarket matrix array real general" (column-major, all n^2
/// entries) or "... coordinate real general" (every entry of the triangle,
/// zeros included). A "% shape: lower|upper" comment records the
/// triangle; values use 17 significant digits so a read gives back the same
/// bits. Extra lines in `comment` are emitted as '%' comments.
void write_matrix_market(std::ostream& out, const TriMatrix& m, MarketLayout layout,
                         const std::string& comment = {});

/// Reads either layout. The triangle comes from the shape comment when
/// present, else it is inferred from the nonzero pattern. Throws
/// std::runtime_error on malformed input or a non-triangular matrix.
TriMatrix read_matrix_market(std::istream& in);

}  // namespace trieig
