// Walk through the library on small exact examples.

#include <iostream>

#include "ultraspec/gelfand.hpp"
#include "ultraspec/kfield.hpp"
#include "ultraspec/lt_subalgebra.hpp"
#include "ultraspec/nstar_measure.hpp"

using namespace ultraspec;

int main() {
    const Scalar a = parse_scalar("1/2*t^-1 + 3 + 2*t^2");
    std::cout << "a            = " << a.to_string() << "  (valuation " << a.valuation().to_string() << ")\n";
    std::cout << "1/(1+t)      = " << inverse(parse_scalar("1 + t"), 5).to_string() << '\n';

    const Vector x{Scalar(1), Scalar::t(), Scalar::t(-1)};
    std::cout << "<x,x>        = " << inner_product(x, x).to_string() << ", ||x|| has valuation "
              << sup_norm(x).to_string() << '\n';

    // H = t Id + T_lambda with lambda = (1, t) in the canonical basis.
    const SpectralOperator h(Scalar::t(), Vector{Scalar(1), Scalar::t()});
    std::cout << "H            = " << h.to_string() << '\n';
    std::cout << "H^2          = " << power(h, 2).to_string() << '\n';
    std::cout << "||H||        = valuation " << op_norm(h).to_string() << '\n';
    std::cout << "H on e1..e3  =\n" << to_matrix(h, 3).to_string() << '\n';

    const Clopen c = Clopen::finite({1, 3});
    std::cout << "m({1,3})     = " << measure(c).to_string() << '\n';
    std::cout << "m(N*\\{2})    = " << measure(Clopen::cofinite({2})).to_string() << '\n';

    const MatrixOperator swap = MatrixOperator::from_rows({{Scalar(0), Scalar(1)}, {Scalar(1), Scalar(0)}});
    const SpectralOperator d = eigendecompose(swap);
    std::cout << "[[0,1],[1,0]] = " << d.to_string() << " in basis";
    for (const auto& y : d.family()->members()) std::cout << ' ' << y.to_string();
    std::cout << '\n';

    const Vector lambda{Scalar::t(), Scalar::t(2)};
    std::cout << "R_1(T)       = " << resolvent(Scalar(1), lambda, OrthonormalFamily::canonical(), 4).to_string() << '\n';
    try {
        resolvent(Scalar::t(), lambda);
    } catch (const error& e) {
        std::cout << "R_t(T)       : " << e.what() << '\n';
    }
    return 0;
}
