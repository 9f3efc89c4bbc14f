#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace nlrod {

constexpr std::size_t default_grid = 4096;

// Values on the uniform grid t_i = i/N, i = 0..N, N even.
class SampledFn {
public:
    SampledFn() = default;
    explicit SampledFn(std::vector<double> values);
    SampledFn(std::size_t n, double value);

    static SampledFn sample(const std::function<double(double)>& f, std::size_t n = default_grid);

    std::size_t intervals() const { return values_.size() - 1; }
    std::size_t size() const { return values_.size(); }
    double step() const { return 1.0 / static_cast<double>(intervals()); }
    double t(std::size_t i) const { return static_cast<double>(i) * step(); }

    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }
    const std::vector<double>& values() const { return values_; }

    double front() const { return values_.front(); }
    double back() const { return values_.back(); }
    double sup_norm() const;

    SampledFn map(const std::function<double(double)>& f) const;

    SampledFn& operator+=(const SampledFn& o);
    SampledFn& operator-=(const SampledFn& o);
    SampledFn& operator*=(const SampledFn& o);
    SampledFn& operator*=(double s);

private:
    std::vector<double> values_;
};

SampledFn operator+(SampledFn a, const SampledFn& b);
SampledFn operator-(SampledFn a, const SampledFn& b);
SampledFn operator*(SampledFn a, const SampledFn& b);
SampledFn operator*(SampledFn a, double s);
SampledFn operator*(double s, SampledFn a);
SampledFn operator-(SampledFn a);

void require_same_grid(const SampledFn& a, const SampledFn& b);

// Right-anchored integrals int_t^1.
SampledFn I1(const SampledFn& z);
SampledFn I2(const SampledFn& z);
SampledFn I3(const SampledFn& z, const SampledFn& zdot);
SampledFn J1(const SampledFn& zdot);
SampledFn J2(const SampledFn& z, const SampledFn& zdot);

// Left-anchored integrals int_0^t, used by adjoint operators.
SampledFn K1(const SampledFn& z);
SampledFn K2(const SampledFn& z);

double inner_product(const SampledFn& y, const SampledFn& q);
double integral(const SampledFn& z);

// Derivative of given order (1..4) by fourth-order finite differences,
// one-sided near the ends.
SampledFn derivative(const SampledFn& y, int order);

}  // namespace nlrod
