#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "newton_atlas/newton_map.hpp"

namespace test_support {

using newton_atlas::Complex;

// deterministic uniform in [lo, hi) built on raw mt19937_64 draws
class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed) {}
    double uniform(double lo = 0.0, double hi = 1.0) {
        double u = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }
    int uniform_int(int lo, int hi) {  // inclusive bounds
        return lo + static_cast<int>(gen_() % static_cast<uint64_t>(hi - lo + 1));
    }
    Complex disk(double radius = 1.0) {
        while (true) {
            double x = uniform(-1.0, 1.0), y = uniform(-1.0, 1.0);
            if (x * x + y * y <= 1.0) return Complex(radius * x, radius * y);
        }
    }

private:
    std::mt19937_64 gen_;
};

// random certificate data: distinct roots in the unit disk separated by at
// least 0.1, multiplicities <= m_max, deg q <= q_max with |q_n| >= 0.1
struct RandomCert {
    std::vector<newton_atlas::NewtonCertificate::Root> roots;
    newton_atlas::Polynomial q;
};

inline RandomCert random_certificate(Rng& rng, int k_max, int m_max, int q_max) {
    RandomCert out;
    while (true) {
        out.roots.clear();
        int k = rng.uniform_int(0, k_max);
        int guard = 0;
        while (static_cast<int>(out.roots.size()) < k && guard++ < 1000) {
            Complex z = rng.disk();
            bool ok = true;
            for (const auto& r : out.roots)
                if (std::abs(r.z - z) < 0.1) ok = false;
            if (ok) out.roots.push_back({z, rng.uniform_int(1, m_max)});
        }
        int n = rng.uniform_int(0, q_max);
        if (static_cast<int>(out.roots.size()) + n < 2) continue;
        if (n == 0) {
            out.q = newton_atlas::Polynomial();
        } else {
            std::vector<Complex> qc(static_cast<size_t>(n) + 1, Complex(0.0));
            for (int i = 1; i <= n; ++i) qc[i] = rng.disk();
            while (std::abs(qc[n]) < 0.1) qc[n] = rng.disk();
            out.q = newton_atlas::Polynomial(std::move(qc));
        }
        return out;
    }
}

inline double wrap_angle(double a) {
    while (a > M_PI) a -= 2.0 * M_PI;
    while (a < -M_PI) a += 2.0 * M_PI;
    return a;
}

}  // namespace test_support
