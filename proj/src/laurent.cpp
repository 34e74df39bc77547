#include "qspi/laurent.hpp"

#include <cmath>

namespace qspi {

namespace {

using Complex = std::complex<double>;

// Laurent polynomial with complex coefficients, slot 0 <-> exponent -degree.
struct CPoly {
    int degree = 0;
    std::vector<Complex> c;

    static CPoly zero(int degree) {
        CPoly p;
        p.degree = degree;
        p.c.assign(2 * degree + 1, Complex(0.0, 0.0));
        return p;
    }

    Complex at(int n) const {
        if (n < -degree || n > degree) return Complex(0.0, 0.0);
        return c[n + degree];
    }
};

CPoly mul(const CPoly& a, const CPoly& b) {
    CPoly out = CPoly::zero(a.degree + b.degree);
    for (int n = -a.degree; n <= a.degree; ++n) {
        Complex an = a.at(n);
        if (an == Complex(0.0, 0.0)) continue;
        for (int m = -b.degree; m <= b.degree; ++m) {
            out.c[n + m + out.degree] += an * b.at(m);
        }
    }
    return out;
}

CPoly add(const CPoly& a, const CPoly& b) {
    int degree = std::max(a.degree, b.degree);
    CPoly out = CPoly::zero(degree);
    for (int n = -degree; n <= degree; ++n) {
        out.c[n + degree] = a.at(n) + b.at(n);
    }
    return out;
}

struct PolyMatrix {
    CPoly m00, m01, m10, m11;
};

PolyMatrix matmul(const PolyMatrix& a, const PolyMatrix& b) {
    PolyMatrix out;
    out.m00 = add(mul(a.m00, b.m00), mul(a.m01, b.m10));
    out.m01 = add(mul(a.m00, b.m01), mul(a.m01, b.m11));
    out.m10 = add(mul(a.m10, b.m00), mul(a.m11, b.m10));
    out.m11 = add(mul(a.m10, b.m01), mul(a.m11, b.m11));
    return out;
}

PolyMatrix rotation_matrix(double theta) {
    // e^{i theta sigma_x} as a degree-0 polynomial matrix.
    PolyMatrix r;
    r.m00 = CPoly::zero(0);
    r.m01 = CPoly::zero(0);
    r.m10 = CPoly::zero(0);
    r.m11 = CPoly::zero(0);
    r.m00.c[0] = Complex(std::cos(theta), 0.0);
    r.m11.c[0] = Complex(std::cos(theta), 0.0);
    r.m01.c[0] = Complex(0.0, std::sin(theta));
    r.m10.c[0] = Complex(0.0, std::sin(theta));
    return r;
}

PolyMatrix wz_matrix() {
    // diag(w, 1/w)
    PolyMatrix w;
    w.m00 = CPoly::zero(1);
    w.m01 = CPoly::zero(1);
    w.m10 = CPoly::zero(1);
    w.m11 = CPoly::zero(1);
    w.m00.c[2] = Complex(1.0, 0.0);  // w^{+1}
    w.m11.c[0] = Complex(1.0, 0.0);  // w^{-1}
    return w;
}

}  // namespace

LaurentPair build_laurent_direct(const PhaseSequence& phases) {
    phases.validate();
    const int d = phases.degree();

    // Q = R(theta_d) W R(theta_{d-1}) ... W R(theta_0): compose left-to-right
    // starting from the innermost rotation.
    PolyMatrix q = rotation_matrix(phases.angles[0]);
    for (int j = 1; j <= d; ++j) {
        q = matmul(wz_matrix(), q);
        q = matmul(rotation_matrix(phases.angles[j]), q);
    }

    LaurentPair lp;
    lp.degree = d;
    lp.f.assign(2 * d + 1, 0.0);
    lp.g.assign(2 * d + 1, 0.0);
    for (int n = -d; n <= d; ++n) {
        // Q00 = F has purely real coefficients, Q01 = iG purely imaginary;
        // the imaginary units combine exactly, so no rounding is discarded.
        lp.f[n + d] = q.m00.at(n).real();
        lp.g[n + d] = q.m01.at(n).imag();
    }
    return lp;
}

LaurentPair build_laurent_recursive(const PhaseSequence& phases) {
    phases.validate();
    const int d = phases.degree();

    // Work arrays hold the reflected pair (f_n, g~_n) with g~_n = g_{-n};
    // this is the indexing the degree-raising recursion propagates natively.
    std::vector<double> f{std::cos(phases.angles[0])};
    std::vector<double> gr{std::sin(phases.angles[0])};

    for (int k = 1; k <= d; ++k) {
        const double c = std::cos(phases.angles[k]);
        const double s = std::sin(phases.angles[k]);
        const int prev = k - 1;
        std::vector<double> nf(2 * k + 1, 0.0);
        std::vector<double> ng(2 * k + 1, 0.0);
        auto pf = [&](int n) { return (n >= -prev && n <= prev) ? f[n + prev] : 0.0; };
        auto pg = [&](int n) { return (n >= -prev && n <= prev) ? gr[n + prev] : 0.0; };
        for (int r = -k; r <= k; ++r) {
            // Wrong-parity slots stay exactly zero: both source terms are
            // structural zeros of the previous degree.
            nf[r + k] = c * pf(r - 1) - s * pg(r + 1);
            ng[r + k] = s * pf(r - 1) + c * pg(r + 1);
        }
        f = std::move(nf);
        gr = std::move(ng);
    }

    LaurentPair lp;
    lp.degree = d;
    lp.f = std::move(f);
    // Reflect g~ back to the block-structure indexing of Eq-(9)-style Q.
    lp.g.assign(2 * d + 1, 0.0);
    for (int n = -d; n <= d; ++n) {
        lp.g[n + d] = gr[-n + d];
    }
    return lp;
}

double unitarity_residual(const LaurentPair& lp) {
    const int d = lp.degree;
    double worst = 0.0;
    // Coefficient of w^k in F(w)F(1/w) + G(w)G(1/w) is
    // sum_n f_n f_{n-k} + g_n g_{n-k}.
    for (int k = -2 * d; k <= 2 * d; ++k) {
        double coeff = 0.0;
        for (int n = -d; n <= d; ++n) {
            coeff += lp.f_at(n) * lp.f_at(n - k) + lp.g_at(n) * lp.g_at(n - k);
        }
        if (k == 0) coeff -= 1.0;
        worst = std::max(worst, std::abs(coeff));
    }
    return worst;
}

std::pair<std::complex<double>, std::complex<double>>
evaluate_fg(const LaurentPair& lp, double kappa, double x) {
    std::complex<double> fv(0.0, 0.0), gv(0.0, 0.0);
    for (int n = -lp.degree; n <= lp.degree; ++n) {
        const std::complex<double> phase = std::polar(1.0, kappa * x * n);
        fv += lp.f_at(n) * phase;
        gv += lp.g_at(n) * phase;
    }
    return {fv, gv};
}

}  // namespace qspi
