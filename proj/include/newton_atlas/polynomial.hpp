#pragma once

#include <complex>
#include <initializer_list>
#include <span>
#include <vector>

namespace newton_atlas {

using Complex = std::complex<double>;

/// Dense univariate polynomial with complex coefficients, coeffs()[i] is the
/// coefficient of z^i. The zero polynomial is the empty list; its degree() is
/// the sentinel -1. Construction trims exactly-zero leading coefficients, so a
/// nonzero polynomial always has leading() != 0.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<Complex> coeffs);
    Polynomial(std::initializer_list<Complex> coeffs);

    static Polynomial constant(Complex c);
    static Polynomial variable();  // the monomial z
    static Polynomial from_roots(std::span<const Complex> roots);  // prod (z - r)

    bool is_zero() const { return coeffs_.empty(); }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<Complex>& coeffs() const { return coeffs_; }
    Complex coeff(int i) const;  // 0 outside the stored range
    Complex leading() const;     // 0 for the zero polynomial

    /// Largest coefficient modulus (0 for the zero polynomial).
    double max_coeff() const;
    /// Sum of coefficient moduli.
    double one_norm() const;

    /// Horner evaluation.
    Complex operator()(Complex z) const;

    Polynomial derivative() const;
    /// Term-wise antiderivative with constant term 0.
    Polynomial antiderivative() const;
    Polynomial monic() const;

    /// z * P (degree shift by one).
    Polynomial times_z() const;

    /// Drops leading coefficients of modulus <= rel_tol * max_coeff(). Used to
    /// recover the true degree of polynomials whose top coefficients cancel in
    /// floating point (e.g. the displacement numerator z*B - A of a parabolic
    /// Newton map).
    Polynomial trimmed(double rel_tol) const;

    Polynomial operator-() const;
    Polynomial& operator+=(const Polynomial& rhs);
    Polynomial& operator-=(const Polynomial& rhs);
    Polynomial& operator*=(const Polynomial& rhs);
    Polynomial& operator*=(Complex s);

    bool operator==(const Polynomial& rhs) const { return coeffs_ == rhs.coeffs_; }

private:
    void trim_exact_zeros();
    std::vector<Complex> coeffs_;
};

Polynomial operator+(Polynomial a, const Polynomial& b);
Polynomial operator-(Polynomial a, const Polynomial& b);
Polynomial operator*(const Polynomial& a, const Polynomial& b);
Polynomial operator*(Polynomial a, Complex s);
Polynomial operator*(Complex s, Polynomial a);

/// Coefficient-wise comparison at tolerance tol * max(1, scale of the pair).
bool approx_equal(const Polynomial& a, const Polynomial& b, double tol);

struct DivModResult {
    Polynomial quotient;
    Polynomial remainder;
};

/// Euclidean division a = q*b + r with deg r < deg b.
/// Throws DivisionByZeroPolynomial if b is the zero polynomial.
DivModResult divmod(const Polynomial& a, const Polynomial& b);

/// Quotient and remainder value of division by the linear factor (z - root).
std::pair<Polynomial, Complex> divide_linear(const Polynomial& p, Complex root);

/// Monic approximate greatest common divisor. A root is accepted into the gcd
/// when, after a Newton polish, both inputs evaluate below tol relative to
/// their coefficient scale at it; the factor is divided out of working copies
/// and the test repeats, so multiplicities are discovered by divisibility
/// rather than trusted from root clustering. Degree 0 result means the inputs
/// are coprime at this tolerance.
Polynomial gcd_approx(const Polynomial& a, const Polynomial& b, double tol = 1e-10);

/// Roots with multiplicities, plus the residual and clustering metadata that
/// the merge step actually used.
struct RootSet {
    struct Entry {
        Complex root;
        int multiplicity = 1;
    };
    std::vector<Entry> entries;   // sorted by (re, im)
    double residual_bound = 0.0;  // max |P(root)| over the entries
    double cluster_radius = 0.0;  // merge radius used

    int total_multiplicity() const;
};

struct RootOptions {
    int max_sweeps = 120;
    int polish_steps = 6;
    /// Merge radius for multiple-root clustering; 0 selects the default
    /// max(1e-7, 1e3 * machine epsilon * coefficient scale). The radius is
    /// applied relative to 1 + |root|.
    double cluster_radius = 0.0;
};

/// All deg(P) roots of P counted with multiplicity (Aberth-Ehrlich
/// simultaneous iteration, deflation fallback, Newton polish, cluster merge).
/// Throws ZeroPolynomial when deg P < 1.
RootSet roots(const Polynomial& p, const RootOptions& opts = {});

}  // namespace newton_atlas
