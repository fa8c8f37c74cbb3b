#include "newton_atlas/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "newton_atlas/errors.hpp"

namespace newton_atlas {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

bool lex_less(Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

}  // namespace

Polynomial::Polynomial(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
    trim_exact_zeros();
}

Polynomial::Polynomial(std::initializer_list<Complex> coeffs) : coeffs_(coeffs) {
    trim_exact_zeros();
}

void Polynomial::trim_exact_zeros() {
    while (!coeffs_.empty() && coeffs_.back() == Complex(0.0, 0.0)) coeffs_.pop_back();
}

Polynomial Polynomial::constant(Complex c) { return Polynomial(std::vector<Complex>{c}); }

Polynomial Polynomial::variable() { return Polynomial({Complex(0.0), Complex(1.0)}); }

Polynomial Polynomial::from_roots(std::span<const Complex> rts) {
    std::vector<Complex> c{Complex(1.0)};
    for (Complex r : rts) {
        c.push_back(Complex(0.0));
        for (int i = static_cast<int>(c.size()) - 1; i > 0; --i) c[i] = c[i - 1] - r * c[i];
        c[0] *= -r;
    }
    return Polynomial(std::move(c));
}

Complex Polynomial::coeff(int i) const {
    if (i < 0 || i >= static_cast<int>(coeffs_.size())) return Complex(0.0);
    return coeffs_[i];
}

Complex Polynomial::leading() const { return coeffs_.empty() ? Complex(0.0) : coeffs_.back(); }

double Polynomial::max_coeff() const {
    double m = 0.0;
    for (Complex c : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

double Polynomial::one_norm() const {
    double s = 0.0;
    for (Complex c : coeffs_) s += std::abs(c);
    return s;
}

Complex Polynomial::operator()(Complex z) const {
    Complex acc(0.0);
    for (int i = static_cast<int>(coeffs_.size()) - 1; i >= 0; --i) acc = acc * z + coeffs_[i];
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (coeffs_.size() <= 1) return Polynomial();
    std::vector<Complex> d(coeffs_.size() - 1);
    for (size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = coeffs_[i] * static_cast<double>(i);
    return Polynomial(std::move(d));
}

Polynomial Polynomial::antiderivative() const {
    if (coeffs_.empty()) return Polynomial();
    std::vector<Complex> a(coeffs_.size() + 1, Complex(0.0));
    for (size_t i = 0; i < coeffs_.size(); ++i) a[i + 1] = coeffs_[i] / static_cast<double>(i + 1);
    return Polynomial(std::move(a));
}

Polynomial Polynomial::monic() const {
    if (coeffs_.empty()) return Polynomial();
    Complex inv = Complex(1.0) / coeffs_.back();
    std::vector<Complex> c = coeffs_;
    for (Complex& x : c) x *= inv;
    c.back() = Complex(1.0);  // kill rounding in the leading term
    return Polynomial(std::move(c));
}

Polynomial Polynomial::times_z() const {
    if (coeffs_.empty()) return Polynomial();
    std::vector<Complex> c(coeffs_.size() + 1, Complex(0.0));
    std::copy(coeffs_.begin(), coeffs_.end(), c.begin() + 1);
    return Polynomial(std::move(c));
}

Polynomial Polynomial::trimmed(double rel_tol) const {
    double cut = rel_tol * max_coeff();
    std::vector<Complex> c = coeffs_;
    while (!c.empty() && std::abs(c.back()) <= cut) c.pop_back();
    return Polynomial(std::move(c));
}

Polynomial Polynomial::operator-() const {
    std::vector<Complex> c = coeffs_;
    for (Complex& x : c) x = -x;
    return Polynomial(std::move(c));
}

Polynomial& Polynomial::operator+=(const Polynomial& rhs) {
    if (coeffs_.size() < rhs.coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), Complex(0.0));
    for (size_t i = 0; i < rhs.coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
    trim_exact_zeros();
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& rhs) {
    if (coeffs_.size() < rhs.coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), Complex(0.0));
    for (size_t i = 0; i < rhs.coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
    trim_exact_zeros();
    return *this;
}

Polynomial& Polynomial::operator*=(const Polynomial& rhs) {
    *this = *this * rhs;
    return *this;
}

Polynomial& Polynomial::operator*=(Complex s) {
    for (Complex& x : coeffs_) x *= s;
    trim_exact_zeros();
    return *this;
}

Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return Polynomial();
    std::vector<Complex> c(a.coeffs().size() + b.coeffs().size() - 1, Complex(0.0));
    for (size_t i = 0; i < a.coeffs().size(); ++i)
        for (size_t j = 0; j < b.coeffs().size(); ++j) c[i + j] += a.coeffs()[i] * b.coeffs()[j];
    return Polynomial(std::move(c));
}

Polynomial operator*(Polynomial a, Complex s) { return a *= s; }
Polynomial operator*(Complex s, Polynomial a) { return a *= s; }

bool approx_equal(const Polynomial& a, const Polynomial& b, double tol) {
    double scale = std::max({1.0, a.max_coeff(), b.max_coeff()});
    int deg = std::max(a.degree(), b.degree());
    for (int i = 0; i <= deg; ++i)
        if (std::abs(a.coeff(i) - b.coeff(i)) > tol * scale) return false;
    return true;
}

DivModResult divmod(const Polynomial& a, const Polynomial& b) {
    if (b.is_zero()) throw DivisionByZeroPolynomial("divmod: divisor is the zero polynomial");
    if (a.degree() < b.degree()) return {Polynomial(), a};
    std::vector<Complex> rem = a.coeffs();
    const auto& d = b.coeffs();
    int qdeg = a.degree() - b.degree();
    std::vector<Complex> quo(static_cast<size_t>(qdeg) + 1, Complex(0.0));
    Complex lead_inv = Complex(1.0) / d.back();
    for (int i = qdeg; i >= 0; --i) {
        Complex f = rem[i + b.degree()] * lead_inv;
        quo[i] = f;
        if (f == Complex(0.0)) continue;
        for (size_t j = 0; j < d.size(); ++j) rem[i + j] -= f * d[j];
        rem[i + b.degree()] = Complex(0.0);  // eliminated exactly by construction
    }
    rem.resize(static_cast<size_t>(b.degree() > 0 ? b.degree() : 0));
    return {Polynomial(std::move(quo)), Polynomial(std::move(rem))};
}

std::pair<Polynomial, Complex> divide_linear(const Polynomial& p, Complex root) {
    if (p.is_zero()) return {Polynomial(), Complex(0.0)};
    const auto& c = p.coeffs();
    if (c.size() == 1) return {Polynomial(), c[0]};
    std::vector<Complex> q(c.size() - 1);
    Complex acc = c.back();
    for (int i = static_cast<int>(c.size()) - 2; i >= 0; --i) {
        q[i] = acc;
        acc = c[i] + acc * root;
    }
    return {Polynomial(std::move(q)), acc};
}

namespace {

// A few guarded Newton steps; returns the improved root (or the input when the
// derivative degenerates or the iteration does not improve the residual).
Complex newton_polish(const Polynomial& p, const Polynomial& dp, Complex z, int steps) {
    Complex best = z;
    double best_res = std::abs(p(z));
    for (int s = 0; s < steps; ++s) {
        Complex f = p(z);
        Complex df = dp(z);
        double fa = std::abs(f);
        if (fa == 0.0) return z;
        if (std::abs(df) <= kEps * fa) break;
        Complex step = f / df;
        if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
        z -= step;
        double res = std::abs(p(z));
        if (res < best_res) {
            best = z;
            best_res = res;
        }
        if (std::abs(step) <= kEps * (1.0 + std::abs(z))) break;
    }
    return best;
}

}  // namespace

Polynomial gcd_approx(const Polynomial& a, const Polynomial& b, double tol) {
    if (a.is_zero() && b.is_zero())
        throw ZeroPolynomial("gcd_approx: both inputs are the zero polynomial");
    if (a.is_zero()) return b.monic();
    if (b.is_zero()) return a.monic();
    if (std::min(a.degree(), b.degree()) == 0) return Polynomial::constant(Complex(1.0));

    // Candidate roots come from the lower-degree input; every accepted factor
    // is divided out of both working copies so repeated roots are counted by
    // divisibility.
    const Polynomial& low = (a.degree() <= b.degree()) ? a : b;
    RootSet cand = roots(low);

    Polynomial ra = a;
    Polynomial rb = b;
    std::vector<Complex> factors;
    for (const auto& entry : cand.entries) {
        Complex beta = entry.root;
        for (int rep = 0; rep < entry.multiplicity; ++rep) {
            if (ra.degree() < 1 || rb.degree() < 1) break;
            // polish against both sides: near a multiple root one polynomial is
            // numerically flat, while the other still resolves the location
            Complex cands[3] = {newton_polish(rb, rb.derivative(), beta, 30),
                                newton_polish(ra, ra.derivative(), beta, 30), beta};
            double best_score = std::numeric_limits<double>::infinity();
            Complex refined = beta;
            for (Complex c : cands) {
                double bound_a = tol * std::max(1.0, ra.one_norm()) *
                                 std::pow(std::max(1.0, std::abs(c)), ra.degree());
                double bound_b = tol * std::max(1.0, rb.one_norm()) *
                                 std::pow(std::max(1.0, std::abs(c)), rb.degree());
                double score =
                    std::max(std::abs(ra(c)) / bound_a, std::abs(rb(c)) / bound_b);
                if (score < best_score) {
                    best_score = score;
                    refined = c;
                }
            }
            if (best_score > 1.0) break;
            ra = divide_linear(ra, refined).first;
            rb = divide_linear(rb, refined).first;
            factors.push_back(refined);
            beta = refined;
        }
    }
    std::sort(factors.begin(), factors.end(), lex_less);
    return Polynomial::from_roots(factors).monic();
}

int RootSet::total_multiplicity() const {
    int t = 0;
    for (const auto& e : entries) t += e.multiplicity;
    return t;
}

namespace {

// One Aberth-Ehrlich pass over the non-converged approximations. Returns the
// largest relative step taken.
double aberth_sweep(const Polynomial& p, const Polynomial& dp, std::vector<Complex>& z,
                    std::vector<bool>& done) {
    const int n = static_cast<int>(z.size());
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        if (done[i]) continue;
        Complex f = p(z[i]);
        if (std::abs(f) == 0.0) {
            done[i] = true;
            continue;
        }
        Complex df = dp(z[i]);
        Complex ratio;
        if (std::abs(df) <= kEps * std::abs(f)) {
            // derivative collapse: nudge and retry next sweep
            z[i] += Complex(1e-6, 1e-6) * (1.0 + std::abs(z[i]));
            worst = std::max(worst, 1.0);
            continue;
        }
        ratio = f / df;
        Complex repulsion(0.0);
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            Complex diff = z[i] - z[j];
            if (std::abs(diff) == 0.0) diff = Complex(kEps, kEps);
            repulsion += Complex(1.0) / diff;
        }
        Complex denom = Complex(1.0) - ratio * repulsion;
        Complex step = (std::abs(denom) <= kEps) ? ratio : ratio / denom;
        z[i] -= step;
        double rel = std::abs(step) / (1.0 + std::abs(z[i]));
        worst = std::max(worst, rel);
        if (rel <= 4.0 * kEps) done[i] = true;
    }
    return worst;
}

std::vector<Complex> solve_all(const Polynomial& p, const RootOptions& opts, int depth) {
    const int n = p.degree();
    std::vector<Complex> zs;
    if (n <= 0) return zs;
    if (n == 1) {
        zs.push_back(-p.coeff(0) / p.coeff(1));
        return zs;
    }

    Polynomial mp = p.monic();
    Polynomial dp = mp.derivative();

    // initial guesses: circle around the root centroid, radius from the Cauchy
    // bound, angles staggered to break symmetric stalls
    Complex center = -mp.coeff(n - 1) / static_cast<double>(n);
    double radius = 0.0;
    for (int i = 0; i < n; ++i) radius = std::max(radius, std::abs(mp.coeff(i)));
    radius = 1.0 + radius;
    zs.resize(n);
    std::vector<bool> done(n, false);
    for (int i = 0; i < n; ++i) {
        double ang = 2.0 * M_PI * i / n + 0.41;
        double r = radius * (0.35 + 0.65 * (i + 1.0) / n);
        zs[i] = center + std::polar(r, ang);
    }

    bool converged = false;
    for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
        double worst = aberth_sweep(mp, dp, zs, done);
        if (worst <= 8.0 * kEps) {
            converged = true;
            break;
        }
    }

    if (!converged && depth < 3) {
        // deflation fallback: keep approximations with small residual, divide
        // them out and re-run on the quotient
        double scale = mp.one_norm();
        std::vector<Complex> good;
        Polynomial rem = mp;
        for (Complex z : zs) {
            Complex zp = newton_polish(rem, rem.derivative(), z, 20);
            if (rem.degree() >= 1 && std::abs(rem(zp)) <= 1e-8 * scale) {
                good.push_back(zp);
                rem = divide_linear(rem, zp).first;
            }
        }
        if (!good.empty() && rem.degree() >= 1) {
            auto rest = solve_all(rem, opts, depth + 1);
            good.insert(good.end(), rest.begin(), rest.end());
            if (static_cast<int>(good.size()) == n) return good;
        }
    }
    return zs;
}

}  // namespace

RootSet roots(const Polynomial& p, const RootOptions& opts) {
    if (p.degree() < 1) throw ZeroPolynomial("roots: polynomial has no roots to find (deg < 1)");

    // peel off exact roots at the origin first
    Polynomial work = p;
    int origin_mult = 0;
    double origin_cut = kEps * p.max_coeff();
    while (work.degree() >= 1 && std::abs(work.coeff(0)) <= origin_cut) {
        std::vector<Complex> shifted(work.coeffs().begin() + 1, work.coeffs().end());
        work = Polynomial(std::move(shifted));
        ++origin_mult;
    }

    std::vector<Complex> zs = solve_all(work, opts, 0);
    Polynomial mp = work.degree() >= 1 ? work.monic() : Polynomial::constant(Complex(1.0));
    Polynomial dp = mp.derivative();
    for (Complex& z : zs) z = newton_polish(mp, dp, z, opts.polish_steps);
    for (int i = 0; i < origin_mult; ++i) zs.push_back(Complex(0.0));

    double coeff_scale = mp.max_coeff();
    double radius = opts.cluster_radius > 0.0
                        ? opts.cluster_radius
                        : std::max(1e-7, 1e3 * kEps * std::max(1.0, coeff_scale));

    // greedy cluster merge at the (scale aware) radius, centroids polished with
    // the multiplicity-corrected Newton step
    std::sort(zs.begin(), zs.end(), lex_less);
    const int n = static_cast<int>(zs.size());
    std::vector<bool> used(n, false);
    RootSet out;
    out.cluster_radius = radius;
    for (int i = 0; i < n; ++i) {
        if (used[i]) continue;
        std::vector<int> cluster{i};
        used[i] = true;
        bool grew = true;
        while (grew) {
            grew = false;
            for (int j = 0; j < n; ++j) {
                if (used[j]) continue;
                for (int c : cluster) {
                    double local = radius * (1.0 + 0.5 * (std::abs(zs[c]) + std::abs(zs[j])));
                    if (std::abs(zs[c] - zs[j]) <= local) {
                        cluster.push_back(j);
                        used[j] = true;
                        grew = true;
                        break;
                    }
                }
            }
        }
        Complex centroid(0.0);
        for (int c : cluster) centroid += zs[c];
        centroid /= static_cast<double>(cluster.size());
        int mult = static_cast<int>(cluster.size());
        if (mult > 1) {
            // an m-fold root of p is a simple (accurately evaluable) root of
            // the (m-1)-th derivative; polish there
            Polynomial g = mp;
            for (int i = 1; i < mult; ++i) g = g.derivative();
            centroid = newton_polish(g, g.derivative(), centroid, 8);
        }
        out.entries.push_back({centroid, mult});
    }
    std::sort(out.entries.begin(), out.entries.end(),
              [](const RootSet::Entry& a, const RootSet::Entry& b) { return lex_less(a.root, b.root); });

    double res = 0.0;
    for (const auto& e : out.entries) res = std::max(res, std::abs(p(e.root)));
    out.residual_bound = res;
    return out;
}

}  // namespace newton_atlas
