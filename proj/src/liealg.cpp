#include "modres/liealg.hpp"

#include "modres/error.hpp"

#include <cmath>
#include <sstream>

namespace modres::liealg {

AlgebraKind AlgebraKind::su2(double spin) {
    const double twice = 2.0 * spin;
    if (!(spin >= 0.5) || std::abs(twice - std::round(twice)) > 1e-12) {
        std::ostringstream os;
        os << "su2 spin must be a half-integer >= 1/2, got " << spin;
        fail(ErrorKind::parameter, os.str());
    }
    return AlgebraKind(Family::su2, std::round(twice) / 2.0, 0);
}

AlgebraKind AlgebraKind::su11_boson(int truncation) {
    if (truncation < 4)
        fail(ErrorKind::parameter, "su11 boson truncation must be >= 4, got " + std::to_string(truncation));
    return AlgebraKind(Family::su11_boson, 0.0, truncation);
}

AlgebraKind AlgebraKind::h1(int truncation) {
    if (truncation < 4)
        fail(ErrorKind::parameter, "h1 truncation must be >= 4, got " + std::to_string(truncation));
    return AlgebraKind(Family::h1, 0.0, truncation);
}

Index AlgebraKind::dim() const {
    if (family_ == Family::su2) return static_cast<Index>(std::lround(2.0 * spin_)) + 1;
    return truncation_;
}

int AlgebraKind::sign() const {
    switch (family_) {
        case Family::su2: return 1;
        case Family::su11_boson: return -1;
        case Family::h1: return 0;
    }
    return 0;
}

std::string AlgebraKind::name() const {
    std::ostringstream os;
    switch (family_) {
        case Family::su2: os << "su2(S=" << spin_ << ")"; break;
        case Family::su11_boson: os << "su11(N=" << truncation_ << ")"; break;
        case Family::h1: os << "h1(N=" << truncation_ << ")"; break;
    }
    return os.str();
}

GeneratorSet build_generators(const AlgebraKind& kind) {
    const Index d = kind.dim();
    GeneratorSet g{kind, Eigen::MatrixXcd::Zero(d, d), Eigen::MatrixXcd::Zero(d, d),
                   Eigen::MatrixXcd::Zero(d, d), d};

    switch (kind.family()) {
        case Family::su2: {
            // basis index i <-> m = S - i
            const double s = kind.spin();
            for (Index i = 0; i < d; ++i) {
                const double m = s - static_cast<double>(i);
                g.x_zero(i, i) = m;
                if (i > 0) g.x_plus(i - 1, i) = std::sqrt(s * (s + 1.0) - m * (m + 1.0));
            }
            break;
        }
        case Family::h1:
            for (Index n = 0; n < d; ++n) {
                g.x_zero(n, n) = static_cast<double>(n);
                if (n + 1 < d) g.x_plus(n + 1, n) = std::sqrt(static_cast<double>(n + 1));
            }
            break;
        case Family::su11_boson:
            // K+ = a^2†/2, K0 = (a†a + a a†)/4
            for (Index n = 0; n < d; ++n) {
                const double nn = static_cast<double>(n);
                g.x_zero(n, n) = (nn + 0.5) / 2.0;
                if (n + 2 < d) g.x_plus(n + 2, n) = std::sqrt((nn + 1.0) * (nn + 2.0)) / 2.0;
            }
            break;
    }
    g.x_minus = g.x_plus.adjoint();
    return g;
}

namespace {

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Eigen::MatrixXcd lift(const std::vector<GeneratorSet>& factors, std::size_t which,
                      const Eigen::MatrixXcd& op) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
    for (std::size_t f = 0; f < factors.size(); ++f) {
        if (f == which)
            out = kron(out, op);
        else
            out = kron(out, Eigen::MatrixXcd::Identity(factors[f].dim, factors[f].dim));
    }
    return out;
}

}  // namespace

ProductSpace tensor_embed(const std::vector<GeneratorSet>& factors, Index dim_cap) {
    if (factors.empty() || factors.size() > 3)
        fail(ErrorKind::parameter, "tensor_embed takes 1 to 3 factors, got " + std::to_string(factors.size()));

    Index dim = 1;
    for (const auto& f : factors) {
        dim *= f.dim;
        if (dim > dim_cap) {
            std::ostringstream os;
            os << "product dimension exceeds cap " << dim_cap;
            fail(ErrorKind::capacity, os.str());
        }
    }

    ProductSpace space;
    space.factors = factors;
    space.dim = dim;
    for (std::size_t f = 0; f < factors.size(); ++f) {
        LiftedGenerators l;
        l.x_plus = lift(factors, f, factors[f].x_plus);
        l.x_minus = l.x_plus.adjoint();
        l.x_zero = lift(factors, f, factors[f].x_zero);
        space.lifted.push_back(std::move(l));
    }
    return space;
}

Index ProductSpace::local_index(Index global, std::size_t factor) const {
    Index stride = 1;
    for (std::size_t f = factors.size(); f-- > factor + 1;) stride *= factors[f].dim;
    return (global / stride) % factors[factor].dim;
}

Index ProductSpace::global_index(const std::vector<Index>& locals) const {
    if (locals.size() != factors.size())
        fail(ErrorKind::parameter, "basis label has the wrong number of factors");
    Index g = 0;
    for (std::size_t f = 0; f < factors.size(); ++f) {
        if (locals[f] < 0 || locals[f] >= factors[f].dim)
            fail(ErrorKind::parameter, "basis label outside factor " + std::to_string(f) + " range");
        g = g * factors[f].dim + locals[f];
    }
    return g;
}

Polynomial::Polynomial(Eigen::MatrixXd coefficients) : c_(std::move(coefficients)) {
    if (c_.size() == 0) c_ = Eigen::MatrixXd::Zero(1, 1);
    trim();
}

Polynomial Polynomial::constant(double value) {
    Eigen::MatrixXd c(1, 1);
    c(0, 0) = value;
    return Polynomial(c);
}

Polynomial Polynomial::x() {
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(2, 1);
    c(1, 0) = 1.0;
    return Polynomial(c);
}

Polynomial Polynomial::y() {
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(1, 2);
    c(0, 1) = 1.0;
    return Polynomial(c);
}

Polynomial Polynomial::in_x(const std::vector<double>& coefficients) {
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(std::max<std::size_t>(coefficients.size(), 1), 1);
    for (std::size_t i = 0; i < coefficients.size(); ++i) c(static_cast<Index>(i), 0) = coefficients[i];
    return Polynomial(c);
}

double Polynomial::coeff(int i, int j) const {
    if (i < 0 || j < 0 || i >= c_.rows() || j >= c_.cols()) return 0.0;
    return c_(i, j);
}

int Polynomial::degree_x() const {
    for (Index i = c_.rows() - 1; i > 0; --i)
        if (c_.row(i).cwiseAbs().maxCoeff() != 0.0) return static_cast<int>(i);
    return 0;
}

int Polynomial::degree_y() const {
    for (Index j = c_.cols() - 1; j > 0; --j)
        if (c_.col(j).cwiseAbs().maxCoeff() != 0.0) return static_cast<int>(j);
    return 0;
}

void Polynomial::trim() {
    const int dx = degree_x();
    const int dy = degree_y();
    if (dx + 1 != c_.rows() || dy + 1 != c_.cols()) {
        Eigen::MatrixXd t = c_.topLeftCorner(dx + 1, dy + 1);
        c_ = t;
    }
}

double Polynomial::operator()(double x, double y) const {
    // Horner in both variables
    double acc = 0.0;
    for (Index i = c_.rows(); i-- > 0;) {
        double row = 0.0;
        for (Index j = c_.cols(); j-- > 0;) row = row * y + c_(i, j);
        acc = acc * x + row;
    }
    return acc;
}

namespace {

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

Polynomial Polynomial::shifted(double m, double n) const {
    // (x+m)^i (y+n)^j expanded binomially
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(c_.rows(), c_.cols());
    for (Index i = 0; i < c_.rows(); ++i)
        for (Index j = 0; j < c_.cols(); ++j) {
            if (c_(i, j) == 0.0) continue;
            for (Index p = 0; p <= i; ++p)
                for (Index q = 0; q <= j; ++q)
                    out(p, q) += c_(i, j) * binomial(static_cast<int>(i), static_cast<int>(p)) *
                                 std::pow(m, static_cast<double>(i - p)) *
                                 binomial(static_cast<int>(j), static_cast<int>(q)) *
                                 std::pow(n, static_cast<double>(j - q));
        }
    return Polynomial(out);
}

Polynomial Polynomial::swapped() const { return Polynomial(Eigen::MatrixXd(c_.transpose())); }

Polynomial& Polynomial::operator+=(const Polynomial& other) {
    const Index r = std::max(c_.rows(), other.c_.rows());
    const Index c = std::max(c_.cols(), other.c_.cols());
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(r, c);
    sum.topLeftCorner(c_.rows(), c_.cols()) = c_;
    sum.topLeftCorner(other.c_.rows(), other.c_.cols()) += other.c_;
    c_ = std::move(sum);
    trim();
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) { return *this += (-1.0) * other; }

Polynomial& Polynomial::operator*=(double s) {
    c_ *= s;
    trim();
    return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    const auto& ca = a.c_;
    const auto& cb = b.c_;
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(ca.rows() + cb.rows() - 1, ca.cols() + cb.cols() - 1);
    for (Index i = 0; i < ca.rows(); ++i)
        for (Index j = 0; j < ca.cols(); ++j) {
            if (ca(i, j) == 0.0) continue;
            out.block(i, j, cb.rows(), cb.cols()) += ca(i, j) * cb;
        }
    return Polynomial(out);
}

Polynomial structural_phi(const GeneratorSet& g) {
    switch (g.kind.family()) {
        case Family::su2: {
            // S(S+1) - m(m-1)
            const double s = g.kind.spin();
            return Polynomial::in_x({s * (s + 1.0), 1.0, -1.0});
        }
        case Family::h1:
            return Polynomial::x();
        case Family::su11_boson:
            // n(n-1)/4 with n = 2k - 1/2
            return Polynomial::in_x({3.0 / 16.0, -1.0, 1.0});
    }
    return {};
}

Polynomial discrete_nabla(const Polynomial& p, int m, int n) {
    return p - p.shifted(m, n);
}

Eigen::VectorXd evaluate_diagonal(const ProductSpace& space, const Polynomial& p,
                                  std::size_t fx, std::size_t fy) {
    const Eigen::VectorXd xs = space.lifted.at(fx).x_zero.diagonal().real();
    const Eigen::VectorXd ys = space.lifted.at(fy).x_zero.diagonal().real();
    Eigen::VectorXd out(space.dim);
    for (Index i = 0; i < space.dim; ++i) out(i) = p(xs(i), ys(i));
    return out;
}

}  // namespace modres::liealg
