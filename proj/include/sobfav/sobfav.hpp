#pragma once

// Umbrella header for the numerical core. JSON I/O and the command-line
// front end live in <sobfav/io.hpp> and <sobfav/cli.hpp> (they need
// nlohmann/json and CLI11 on the include path).

#include "error.hpp"
#include "favard.hpp"
#include "hankel_sobolev.hpp"
#include "hessenberg.hpp"
#include "matrix.hpp"
#include "measures.hpp"
#include "operators.hpp"
#include "scalar.hpp"
