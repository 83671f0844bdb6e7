#pragma once

// Heat-map emission for success matrices: CSV, binary PGM (P5) and SVG.

#include <optional>
#include <ostream>
#include <string>

#include "hxrl/memory.hpp"

namespace hxrl {

// Header "state,up,down,left,right[,visits_up,...]", probabilities with six
// decimals, one row per state.
void write_csv(std::ostream& out, const SuccessMatrix& p, const CountMatrix* visits = nullptr);

// num_states rows x 4 columns, pixel = round(255 * p).
void write_pgm(std::ostream& out, const SuccessMatrix& p);

// Labeled grid: states on the Y axis, actions on the X axis, linear grayscale.
void write_svg(std::ostream& out, const SuccessMatrix& p, const std::string& title);

}  // namespace hxrl
