#include "autoconv/coeff.hpp"

#include <iomanip>

namespace autoconv {

void write_coeffs_csv(std::ostream& out, const CoeffTable& table) {
    out << "n,c_n,S_n\n" << std::setprecision(17);
    for (std::size_t n = 1; n <= table.n_max(); ++n) {
        out << n << ',' << table.c(n) << ',' << table.partial_sum(n) << '\n';
    }
}

}  // namespace autoconv
