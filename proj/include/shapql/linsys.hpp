#ifndef SHAPQL_LINSYS_HPP
#define SHAPQL_LINSYS_HPP

#include <vector>

#include "shapql/rational.hpp"

namespace shapql {

struct LinearSystem {
    std::vector<std::vector<Rational>> matrix;  // square
    std::vector<Rational> rhs;
};

// Exact Gaussian elimination with partial pivoting on nonzero entries.
// Throws SingularSystemError when no pivot can be found.
std::vector<Rational> solve_linear_exact(LinearSystem sys);

}  // namespace shapql

#endif
