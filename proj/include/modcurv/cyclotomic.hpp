#pragma once

#include "modcurv/rational.hpp"

#include <complex>
#include <memory>
#include <vector>

namespace modcurv {

// Reduction data for Q(ζ_N): Φ_N and the reduced images of ζ^0..ζ^{N-1}.
struct CyclotomicData {
    int order = 0;
    int degree = 0;                               // φ(N)
    std::vector<Rational> phi;                    // monic Φ_N, low → high, size degree+1
    std::vector<std::vector<Rational>> powers;    // powers[e] = ζ^e reduced, size degree
};

std::shared_ptr<const CyclotomicData> cyclotomic_data(int order);

// Element of Q(ζ_N) in the power basis 1, ζ, ..., ζ^{φ(N)-1}.
class Cyclo {
public:
    Cyclo() = default;
    explicit Cyclo(int order);
    Cyclo(int order, const GaussRational& z);

    static Cyclo root_power(int order, long long exponent);

    int order() const { return data_ ? data_->order : 0; }
    bool is_zero() const;
    const std::vector<Rational>& coeffs() const { return c_; }

    Cyclo conj() const;
    std::complex<double> to_complex() const;
    // Returns true and fills z when the value lies in Q(i).
    bool as_gauss(GaussRational& z) const;

    Cyclo& operator+=(const Cyclo& o);
    Cyclo& operator-=(const Cyclo& o);
    Cyclo& operator*=(const Cyclo& o);
    Cyclo& operator*=(const Rational& q);
    Cyclo operator-() const;
    friend Cyclo operator+(Cyclo a, const Cyclo& b) { return a += b; }
    friend Cyclo operator-(Cyclo a, const Cyclo& b) { return a -= b; }
    friend Cyclo operator*(Cyclo a, const Cyclo& b) { return a *= b; }
    friend bool operator==(const Cyclo& a, const Cyclo& b);

private:
    void check_same(const Cyclo& o) const;
    std::shared_ptr<const CyclotomicData> data_;
    std::vector<Rational> c_;
};

}  // namespace modcurv
