#include "nlrod/quadrature.hpp"

#include "nlrod/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nlrod {

SampledFn::SampledFn(std::vector<double> values) : values_(std::move(values)) {
    if (values_.size() < 3 || (values_.size() - 1) % 2 != 0)
        throw InvalidInput("grid needs an even number of intervals, got " +
                           std::to_string(values_.empty() ? 0 : values_.size() - 1));
}

SampledFn::SampledFn(std::size_t n, double value) : SampledFn(std::vector<double>(n + 1, value)) {}

SampledFn SampledFn::sample(const std::function<double(double)>& f, std::size_t n) {
    if (n < 2 || n % 2 != 0)
        throw InvalidInput("grid needs an even number of intervals, got " + std::to_string(n));
    std::vector<double> v(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        v[i] = f(static_cast<double>(i) / static_cast<double>(n));
    return SampledFn(std::move(v));
}

double SampledFn::sup_norm() const {
    double s = 0.0;
    for (double v : values_)
        s = std::max(s, std::abs(v));
    return s;
}

SampledFn SampledFn::map(const std::function<double(double)>& f) const {
    SampledFn r = *this;
    for (auto& v : r.values_)
        v = f(v);
    return r;
}

void require_same_grid(const SampledFn& a, const SampledFn& b) {
    if (a.size() != b.size())
        throw InvalidInput("sampled functions live on different grids (" + std::to_string(a.intervals()) +
                           " vs " + std::to_string(b.intervals()) + ")");
}

SampledFn& SampledFn::operator+=(const SampledFn& o) {
    require_same_grid(*this, o);
    for (std::size_t i = 0; i < values_.size(); ++i)
        values_[i] += o.values_[i];
    return *this;
}

SampledFn& SampledFn::operator-=(const SampledFn& o) {
    require_same_grid(*this, o);
    for (std::size_t i = 0; i < values_.size(); ++i)
        values_[i] -= o.values_[i];
    return *this;
}

SampledFn& SampledFn::operator*=(const SampledFn& o) {
    require_same_grid(*this, o);
    for (std::size_t i = 0; i < values_.size(); ++i)
        values_[i] *= o.values_[i];
    return *this;
}

SampledFn& SampledFn::operator*=(double s) {
    for (auto& v : values_)
        v *= s;
    return *this;
}

SampledFn operator+(SampledFn a, const SampledFn& b) { return a += b; }
SampledFn operator-(SampledFn a, const SampledFn& b) { return a -= b; }
SampledFn operator*(SampledFn a, const SampledFn& b) { return a *= b; }
SampledFn operator*(SampledFn a, double s) { return a *= s; }
SampledFn operator*(double s, SampledFn a) { return a *= s; }
SampledFn operator-(SampledFn a) { return a *= -1.0; }

namespace {

// Cumulative Simpson from index 0 upward: full panels at even nodes, the
// quadratic-interpolation partial rule at odd nodes.
std::vector<double> cumulative(const std::vector<double>& g, double h) {
    std::size_t n = g.size() - 1;
    std::vector<double> c(n + 1, 0.0);
    for (std::size_t k = 0; k + 2 <= n; k += 2) {
        c[k + 1] = c[k] + h / 12.0 * (5.0 * g[k] + 8.0 * g[k + 1] - g[k + 2]);
        c[k + 2] = c[k] + h / 3.0 * (g[k] + 4.0 * g[k + 1] + g[k + 2]);
    }
    return c;
}

void check_slope(const SampledFn& zdot) {
    for (std::size_t i = 0; i < zdot.size(); ++i)
        if (!(std::abs(zdot[i]) < 1.0))
            throw InadmissibleSlope("slope magnitude reaches 1 at t = " + std::to_string(zdot.t(i)));
}

}  // namespace

SampledFn I1(const SampledFn& z) {
    std::vector<double> rev(z.values().rbegin(), z.values().rend());
    auto c = cumulative(rev, z.step());
    return SampledFn(std::vector<double>(c.rbegin(), c.rend()));
}

SampledFn I2(const SampledFn& z) { return I1(I1(z)); }

SampledFn I3(const SampledFn& z, const SampledFn& zdot) {
    check_slope(zdot);
    return I1(zdot * zdot * I1(z));
}

SampledFn J1(const SampledFn& zdot) {
    check_slope(zdot);
    return I1(zdot.map([](double s) { return std::sqrt(1.0 - s * s); }));
}

SampledFn J2(const SampledFn& z, const SampledFn& zdot) {
    check_slope(zdot);
    return I1(zdot.map([](double s) { return std::sqrt(1.0 - s * s); }) * I1(z));
}

SampledFn K1(const SampledFn& z) { return SampledFn(cumulative(z.values(), z.step())); }

SampledFn K2(const SampledFn& z) { return K1(K1(z)); }

double integral(const SampledFn& z) {
    std::size_t n = z.intervals();
    double s = z[0] + z[n];
    for (std::size_t i = 1; i < n; ++i)
        s += (i % 2 ? 4.0 : 2.0) * z[i];
    return s * z.step() / 3.0;
}

double inner_product(const SampledFn& y, const SampledFn& q) {
    require_same_grid(y, q);
    return integral(y * q);
}

namespace {

// Fornberg weights for derivative `order` at x0 from nodes x.
std::vector<double> fd_weights(const std::vector<double>& x, double x0, int order) {
    int n = static_cast<int>(x.size());
    std::vector<std::vector<double>> c(n, std::vector<double>(order + 1, 0.0));
    double c1 = 1.0, c4 = x[0] - x0;
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        int mn = std::min(i, order);
        double c2 = 1.0, c5 = c4;
        c4 = x[i] - x0;
        for (int j = 0; j < i; ++j) {
            double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k)
                c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i)
        w[i] = c[i][order];
    return w;
}

}  // namespace

SampledFn derivative(const SampledFn& y, int order) {
    if (order < 1 || order > 4)
        throw InvalidInput("derivative order must be 1..4");
    const int width = 2 * ((order + 3) / 2) + 1;
    const int half = width / 2;
    const int n = static_cast<int>(y.intervals());
    if (n + 1 < width)
        throw InvalidInput("grid too coarse for finite differences");
    const double h = y.step();
    const double scale = std::pow(h, order);

    std::vector<double> nodes(width);
    for (int k = 0; k < width; ++k)
        nodes[k] = k;

    // Weights depend only on the position of the evaluation node in the window.
    std::vector<std::vector<double>> weights(width);
    for (int pos = 0; pos < width; ++pos)
        weights[pos] = fd_weights(nodes, pos, order);

    SampledFn d = y;
    for (int i = 0; i <= n; ++i) {
        int start = std::clamp(i - half, 0, n + 1 - width);
        const auto& w = weights[i - start];
        double s = 0.0;
        for (int k = 0; k < width; ++k)
            s += w[k] * y[start + k];
        d[i] = s / scale;
    }
    return d;
}

}  // namespace nlrod
