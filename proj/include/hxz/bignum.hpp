#pragma once

#include <mpfr.h>

#include <complex>
#include <cstddef>
#include <string>

namespace hxz {

inline constexpr long kMinPrecision = 64;
inline constexpr long kMaxPrecision = 4096;
inline constexpr long kDefaultPrecision = 256;

// Thread-local working precision in bits; every fresh value is created at it.
long working_precision();
void set_working_precision(long bits);

class PrecisionScope {
public:
    explicit PrecisionScope(long bits);
    ~PrecisionScope();
    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

private:
    long saved_;
};

class BigReal {
public:
    BigReal();
    BigReal(double v);
    BigReal(long v);
    BigReal(int v) : BigReal(static_cast<long>(v)) {}
    BigReal(unsigned long v);
    explicit BigReal(mpq_srcptr q);
    BigReal(const BigReal& o);
    BigReal(BigReal&& o) noexcept;
    BigReal& operator=(const BigReal& o);
    BigReal& operator=(BigReal&& o) noexcept;
    ~BigReal();

    // Parses a decimal string at the given precision (working precision if 0).
    static BigReal parse(const std::string& s, long bits = 0);
    static BigReal pi();
    static BigReal infinity(int sign);
    static BigReal pow2(long e);

    long precision() const { return static_cast<long>(mpfr_get_prec(v_)); }
    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }
    // Shortest decimal string that reads back to the same value at this precision.
    std::string to_string() const;
    std::string to_string(int digits) const;

    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool is_finite() const { return mpfr_number_p(v_) != 0; }
    bool is_inf() const { return mpfr_inf_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }
    long exponent() const;

    BigReal operator-() const;
    BigReal& operator+=(const BigReal& o);
    BigReal& operator-=(const BigReal& o);
    BigReal& operator*=(const BigReal& o);
    BigReal& operator/=(const BigReal& o);

    friend BigReal operator+(BigReal a, const BigReal& b) { return a += b; }
    friend BigReal operator-(BigReal a, const BigReal& b) { return a -= b; }
    friend BigReal operator*(BigReal a, const BigReal& b) { return a *= b; }
    friend BigReal operator/(BigReal a, const BigReal& b) { return a /= b; }

    friend bool operator<(const BigReal& a, const BigReal& b) { return mpfr_less_p(a.v_, b.v_); }
    friend bool operator>(const BigReal& a, const BigReal& b) { return mpfr_greater_p(a.v_, b.v_); }
    friend bool operator<=(const BigReal& a, const BigReal& b) { return mpfr_lessequal_p(a.v_, b.v_); }
    friend bool operator>=(const BigReal& a, const BigReal& b) { return mpfr_greaterequal_p(a.v_, b.v_); }
    friend bool operator==(const BigReal& a, const BigReal& b) { return mpfr_equal_p(a.v_, b.v_); }
    friend bool operator!=(const BigReal& a, const BigReal& b) { return !mpfr_equal_p(a.v_, b.v_); }

private:
    void ensure_live(long bits);
    mpfr_t v_;
};

BigReal abs(const BigReal& x);
BigReal sqrt(const BigReal& x);
BigReal exp(const BigReal& x);
BigReal log(const BigReal& x);
BigReal sin(const BigReal& x);
BigReal cos(const BigReal& x);
BigReal tan(const BigReal& x);
BigReal atan(const BigReal& x);
BigReal atan2(const BigReal& y, const BigReal& x);
BigReal acos(const BigReal& x);
BigReal pow(const BigReal& x, const BigReal& y);
BigReal pow(const BigReal& x, long k);
BigReal lgamma(const BigReal& x);
BigReal gamma(const BigReal& x);
BigReal floor(const BigReal& x);
BigReal ldexp(const BigReal& x, long e);
BigReal hypot(const BigReal& x, const BigReal& y);
const BigReal& max(const BigReal& a, const BigReal& b);
const BigReal& min(const BigReal& a, const BigReal& b);

class BigComplex {
public:
    BigReal re;
    BigReal im;

    BigComplex() = default;
    BigComplex(const BigReal& r) : re(r), im(0L) {}
    BigComplex(const BigReal& r, const BigReal& i) : re(r), im(i) {}
    BigComplex(double r, double i = 0.0) : re(r), im(i) {}
    BigComplex(long r) : re(r), im(0L) {}
    BigComplex(int r) : re(static_cast<long>(r)), im(0L) {}
    BigComplex(std::complex<double> z) : re(z.real()), im(z.imag()) {}

    static BigComplex i();
    static BigComplex polar(const BigReal& r, const BigReal& theta);
    static BigComplex parse(const std::string& re, const std::string& im, long bits = 0);

    long precision() const { return re.precision(); }
    bool is_zero() const { return re.is_zero() && im.is_zero(); }
    bool is_finite() const { return re.is_finite() && im.is_finite(); }
    std::complex<double> to_cdouble() const { return {re.to_double(), im.to_double()}; }
    BigComplex conj() const { return {re, -im}; }

    BigComplex operator-() const { return {-re, -im}; }
    BigComplex& operator+=(const BigComplex& o);
    BigComplex& operator-=(const BigComplex& o);
    BigComplex& operator*=(const BigComplex& o);
    BigComplex& operator/=(const BigComplex& o);
    BigComplex& operator*=(const BigReal& o);
    BigComplex& operator/=(const BigReal& o);

    friend BigComplex operator+(BigComplex a, const BigComplex& b) { return a += b; }
    friend BigComplex operator-(BigComplex a, const BigComplex& b) { return a -= b; }
    friend BigComplex operator*(BigComplex a, const BigComplex& b) { return a *= b; }
    friend BigComplex operator/(BigComplex a, const BigComplex& b) { return a /= b; }
    friend BigComplex operator*(BigComplex a, const BigReal& b) { return a *= b; }
    friend BigComplex operator*(const BigReal& b, BigComplex a) { return a *= b; }
    friend BigComplex operator/(BigComplex a, const BigReal& b) { return a /= b; }
    friend bool operator==(const BigComplex& a, const BigComplex& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const BigComplex& a, const BigComplex& b) { return !(a == b); }
};

BigReal abs(const BigComplex& z);
BigReal norm(const BigComplex& z);
BigReal arg(const BigComplex& z);
BigComplex exp(const BigComplex& z);
BigComplex log(const BigComplex& z);
BigComplex sqrt(const BigComplex& z);
BigComplex pow(const BigComplex& z, long k);
BigComplex pow(const BigComplex& z, const BigComplex& w);
// Principal k-th root.
BigComplex root(const BigComplex& z, long k);

// Allocation-free kernels for hot loops; out must not alias the inputs.
void mul_into(BigComplex& out, const BigComplex& a, const BigComplex& b);
// acc <- acc*z + c, using tmp as scratch.
void horner_step(BigComplex& acc, const BigComplex& z, const BigComplex& c, BigComplex& tmp);

// Copies rounded to the current working precision.
BigReal rounded(const BigReal& x);
BigComplex rounded(const BigComplex& z);

// 2^(offset - bits); bits defaults to the working precision.
BigReal precision_floor(long offset, long bits = 0);

}  // namespace hxz
