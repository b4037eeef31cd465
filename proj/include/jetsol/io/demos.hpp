#pragma once

#include "jetsol/io/pde_file.hpp"

#include <string>

namespace jetsol {

/// (D_x + i D_y - 2(x + iy) D_z)(V + iW) = f for real f, split into real and imaginary parts
/// on the cube (-1, 1)^3.
inline std::string lewy_pde_text(const std::string& f)
{
    return "# Lewy operator on U = V + iW with right-hand side f\n"
           "dim: 3\n"
           "vars: x y z\n"
           "unknowns: V W\n"
           "order: 1\n"
           "domain: (-1, 1) (-1, 1) (-1, 1)\n"
           "eq: V_x - W_y - 2*x*V_z + 2*y*W_z = " + f + "\n"
           "eq: W_x + V_y - 2*y*V_z - 2*x*W_z = 0\n";
}

inline PdeSpec lewy_spec(const std::string& f = "x") { return parse_pde_text(lewy_pde_text(f)); }

}  // namespace jetsol
