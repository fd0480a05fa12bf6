#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <vector>

namespace modres::liealg {

using Eigen::Index;

enum class Family { su2, su11_boson, h1 };

// One representation: spin S for su2, Fock truncation N for the bosonic ones.
class AlgebraKind {
public:
    static AlgebraKind su2(double spin);
    static AlgebraKind su11_boson(int truncation);
    static AlgebraKind h1(int truncation);

    Family family() const { return family_; }
    double spin() const { return spin_; }
    int truncation() const { return truncation_; }
    Index dim() const;
    bool bosonic() const { return family_ != Family::su2; }

    // +1 for su(2), -1 for su(1,1), 0 for the Heisenberg algebra
    int sign() const;

    std::string name() const;

    bool operator==(const AlgebraKind&) const = default;

private:
    AlgebraKind(Family f, double s, int n) : family_(f), spin_(s), truncation_(n) {}

    Family family_;
    double spin_;
    int truncation_;
};

struct GeneratorSet {
    AlgebraKind kind;
    Eigen::MatrixXcd x_plus;
    Eigen::MatrixXcd x_minus;
    Eigen::MatrixXcd x_zero;
    Index dim = 0;

    // real diagonal of x_zero
    Eigen::VectorXd spectrum() const { return x_zero.diagonal().real(); }
};

GeneratorSet build_generators(const AlgebraKind& kind);

struct LiftedGenerators {
    Eigen::MatrixXcd x_plus;
    Eigen::MatrixXcd x_minus;
    Eigen::MatrixXcd x_zero;
};

inline constexpr Index default_dim_cap = 4096;

// Kronecker-ordered product space; factor 0 is the most significant index.
struct ProductSpace {
    std::vector<GeneratorSet> factors;
    std::vector<LiftedGenerators> lifted;
    Index dim = 0;

    Index local_index(Index global, std::size_t factor) const;
    Index global_index(const std::vector<Index>& locals) const;
    Eigen::MatrixXcd identity() const { return Eigen::MatrixXcd::Identity(dim, dim); }
};

ProductSpace tensor_embed(const std::vector<GeneratorSet>& factors,
                          Index dim_cap = default_dim_cap);

// p(x, y) = sum_ij c(i, j) x^i y^j
class Polynomial {
public:
    Polynomial() : c_(Eigen::MatrixXd::Zero(1, 1)) {}
    explicit Polynomial(Eigen::MatrixXd coefficients);

    static Polynomial constant(double value);
    static Polynomial x();
    static Polynomial y();
    // univariate in x from ascending coefficients
    static Polynomial in_x(const std::vector<double>& coefficients);

    double coeff(int i, int j = 0) const;
    int degree_x() const;
    int degree_y() const;
    const Eigen::MatrixXd& coefficients() const { return c_; }

    double operator()(double x, double y = 0.0) const;

    // p(x + m, y + n)
    Polynomial shifted(double m, double n = 0.0) const;
    // p(y, x)
    Polynomial swapped() const;

    Polynomial& operator+=(const Polynomial& other);
    Polynomial& operator-=(const Polynomial& other);
    Polynomial& operator*=(double s);

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
    friend Polynomial operator*(double s, Polynomial a) { return a *= s; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

private:
    void trim();

    Eigen::MatrixXd c_;
};

// phi(X0) = X+ X- as a polynomial in the diagonal variable x
Polynomial structural_phi(const GeneratorSet& g);

// f(x, y) - f(x + m, y + n)
Polynomial discrete_nabla(const Polynomial& p, int m, int n = 0);

// evaluates p on the joint diagonal (X0 of factor fx, Y0 of factor fy) of a product space
Eigen::VectorXd evaluate_diagonal(const ProductSpace& space, const Polynomial& p,
                                  std::size_t fx, std::size_t fy);

}  // namespace modres::liealg
