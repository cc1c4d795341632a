#include "hxz/bignum.hpp"

#include <cstring>

#include "hxz/errors.hpp"

namespace hxz {

namespace {
thread_local long g_working_bits = kDefaultPrecision;
}

long working_precision() { return g_working_bits; }

void set_working_precision(long bits) {
    if (bits < kMinPrecision || bits > kMaxPrecision)
        fail(ErrorKind::Precision, "precision_bits must lie in [64, 4096], got " + std::to_string(bits));
    g_working_bits = bits;
}

PrecisionScope::PrecisionScope(long bits) : saved_(g_working_bits) { set_working_precision(bits); }
PrecisionScope::~PrecisionScope() { g_working_bits = saved_; }

const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::InvalidInput: return "invalid-input";
        case ErrorKind::Precision: return "precision";
        case ErrorKind::DegeneratePole: return "degenerate-pole";
        case ErrorKind::InconsistentStructure: return "inconsistent-structure";
        case ErrorKind::NotHyperexponential: return "not-hyperexponential";
        case ErrorKind::Domain: return "domain";
        case ErrorKind::SingularAmplitude: return "singular-amplitude";
        case ErrorKind::SaddleFailure: return "saddle-failure";
        case ErrorKind::Boundary: return "boundary";
        case ErrorKind::BranchAmbiguity: return "branch-ambiguity";
        case ErrorKind::Quadrature: return "quadrature";
        case ErrorKind::NumericalFailure: return "numerical-failure";
    }
    return "unknown";
}

// ---- BigReal ----

BigReal::BigReal() {
    mpfr_init2(v_, g_working_bits);
    mpfr_set_zero(v_, 1);
}

BigReal::BigReal(double v) {
    mpfr_init2(v_, g_working_bits);
    mpfr_set_d(v_, v, MPFR_RNDN);
}

BigReal::BigReal(long v) {
    mpfr_init2(v_, g_working_bits);
    mpfr_set_si(v_, v, MPFR_RNDN);
}

BigReal::BigReal(unsigned long v) {
    mpfr_init2(v_, g_working_bits);
    mpfr_set_ui(v_, v, MPFR_RNDN);
}

BigReal::BigReal(mpq_srcptr q) {
    mpfr_init2(v_, g_working_bits);
    mpfr_set_q(v_, q, MPFR_RNDN);
}

BigReal::BigReal(const BigReal& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
}

BigReal::BigReal(BigReal&& o) noexcept {
    std::memcpy(v_, o.v_, sizeof(mpfr_t));
    o.v_->_mpfr_d = nullptr;
}

void BigReal::ensure_live(long bits) {
    if (v_->_mpfr_d == nullptr) mpfr_init2(v_, bits);
    else if (mpfr_get_prec(v_) != bits) mpfr_set_prec(v_, bits);
}

BigReal& BigReal::operator=(const BigReal& o) {
    if (this == &o) return *this;
    ensure_live(mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
    return *this;
}

BigReal& BigReal::operator=(BigReal&& o) noexcept {
    if (this == &o) return *this;
    if (v_->_mpfr_d != nullptr) mpfr_clear(v_);
    std::memcpy(v_, o.v_, sizeof(mpfr_t));
    o.v_->_mpfr_d = nullptr;
    return *this;
}

BigReal::~BigReal() {
    if (v_->_mpfr_d != nullptr) mpfr_clear(v_);
}

BigReal BigReal::parse(const std::string& s, long bits) {
    BigReal r;
    if (bits > 0) mpfr_set_prec(r.v_, bits);
    if (mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN) != 0)
        fail(ErrorKind::InvalidInput, "not a decimal number: '" + s + "'");
    return r;
}

BigReal BigReal::pi() {
    BigReal r;
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
}

BigReal BigReal::infinity(int sign) {
    BigReal r;
    mpfr_set_inf(r.v_, sign);
    return r;
}

BigReal BigReal::pow2(long e) {
    BigReal r(1L);
    mpfr_mul_2si(r.v_, r.v_, e, MPFR_RNDN);
    return r;
}

std::string BigReal::to_string() const { return to_string(0); }

std::string BigReal::to_string(int digits) const {
    if (mpfr_nan_p(v_)) return "nan";
    if (mpfr_inf_p(v_)) return mpfr_sgn(v_) > 0 ? "inf" : "-inf";
    if (mpfr_zero_p(v_)) return "0";
    mpfr_exp_t e = 0;
    char* raw = mpfr_get_str(nullptr, &e, 10, static_cast<size_t>(digits), v_, MPFR_RNDN);
    std::string s(raw);
    mpfr_free_str(raw);
    std::string sign;
    if (s[0] == '-') {
        sign = "-";
        s.erase(0, 1);
    }
    while (s.size() > 1 && s.back() == '0') s.pop_back();
    std::string out = sign + s.substr(0, 1);
    if (s.size() > 1) out += "." + s.substr(1);
    long exp10 = static_cast<long>(e) - 1;
    if (exp10 != 0) out += "e" + std::to_string(exp10);
    return out;
}

long BigReal::exponent() const {
    if (!mpfr_regular_p(v_)) return 0;
    return static_cast<long>(mpfr_get_exp(v_));
}

BigReal BigReal::operator-() const {
    BigReal r(*this);
    mpfr_neg(r.v_, r.v_, MPFR_RNDN);
    return r;
}

namespace {
// Results of compound assignment live at the working precision at least.
inline void widen(mpfr_ptr v) {
    if (mpfr_get_prec(v) < g_working_bits) mpfr_prec_round(v, g_working_bits, MPFR_RNDN);
}
}  // namespace

BigReal& BigReal::operator+=(const BigReal& o) {
    widen(v_);
    mpfr_add(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}
BigReal& BigReal::operator-=(const BigReal& o) {
    widen(v_);
    mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}
BigReal& BigReal::operator*=(const BigReal& o) {
    widen(v_);
    mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}
BigReal& BigReal::operator/=(const BigReal& o) {
    widen(v_);
    mpfr_div(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}

#define HXZ_UNARY(name, fn)              \
    BigReal name(const BigReal& x) {     \
        BigReal r;                       \
        fn(r.raw(), x.raw(), MPFR_RNDN); \
        return r;                        \
    }

HXZ_UNARY(abs, mpfr_abs)
HXZ_UNARY(sqrt, mpfr_sqrt)
HXZ_UNARY(exp, mpfr_exp)
HXZ_UNARY(log, mpfr_log)
HXZ_UNARY(sin, mpfr_sin)
HXZ_UNARY(cos, mpfr_cos)
HXZ_UNARY(tan, mpfr_tan)
HXZ_UNARY(atan, mpfr_atan)
HXZ_UNARY(acos, mpfr_acos)
HXZ_UNARY(gamma, mpfr_gamma)
#undef HXZ_UNARY

BigReal lgamma(const BigReal& x) {
    BigReal r;
    int s = 0;
    mpfr_lgamma(r.raw(), &s, x.raw(), MPFR_RNDN);
    return r;
}

BigReal floor(const BigReal& x) {
    BigReal r;
    mpfr_floor(r.raw(), x.raw());
    return r;
}

BigReal atan2(const BigReal& y, const BigReal& x) {
    BigReal r;
    mpfr_atan2(r.raw(), y.raw(), x.raw(), MPFR_RNDN);
    return r;
}

BigReal pow(const BigReal& x, const BigReal& y) {
    BigReal r;
    mpfr_pow(r.raw(), x.raw(), y.raw(), MPFR_RNDN);
    return r;
}

BigReal pow(const BigReal& x, long k) {
    BigReal r;
    mpfr_pow_si(r.raw(), x.raw(), k, MPFR_RNDN);
    return r;
}

BigReal ldexp(const BigReal& x, long e) {
    BigReal r;
    mpfr_mul_2si(r.raw(), x.raw(), e, MPFR_RNDN);
    return r;
}

BigReal hypot(const BigReal& x, const BigReal& y) {
    BigReal r;
    mpfr_hypot(r.raw(), x.raw(), y.raw(), MPFR_RNDN);
    return r;
}

const BigReal& max(const BigReal& a, const BigReal& b) { return a < b ? b : a; }
const BigReal& min(const BigReal& a, const BigReal& b) { return b < a ? b : a; }

BigReal rounded(const BigReal& x) {
    BigReal r;
    mpfr_set(r.raw(), x.raw(), MPFR_RNDN);
    return r;
}

BigComplex rounded(const BigComplex& z) { return {rounded(z.re), rounded(z.im)}; }

BigReal precision_floor(long offset, long bits) {
    if (bits <= 0) bits = g_working_bits;
    return BigReal::pow2(offset - bits);
}

// ---- BigComplex ----

BigComplex BigComplex::i() { return {BigReal(0L), BigReal(1L)}; }

BigComplex BigComplex::polar(const BigReal& r, const BigReal& theta) {
    BigReal s, c;
    mpfr_sin_cos(s.raw(), c.raw(), theta.raw(), MPFR_RNDN);
    return {r * c, r * s};
}

BigComplex BigComplex::parse(const std::string& re, const std::string& im, long bits) {
    return {BigReal::parse(re, bits), BigReal::parse(im, bits)};
}

BigComplex& BigComplex::operator+=(const BigComplex& o) {
    re += o.re;
    im += o.im;
    return *this;
}

BigComplex& BigComplex::operator-=(const BigComplex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
}

BigComplex& BigComplex::operator*=(const BigComplex& o) {
    BigReal r;
    mpfr_fmms(r.raw(), re.raw(), o.re.raw(), im.raw(), o.im.raw(), MPFR_RNDN);
    BigReal s;
    mpfr_fmma(s.raw(), re.raw(), o.im.raw(), im.raw(), o.re.raw(), MPFR_RNDN);
    re = std::move(r);
    im = std::move(s);
    return *this;
}

BigComplex& BigComplex::operator/=(const BigComplex& o) {
    BigReal den;
    mpfr_fmma(den.raw(), o.re.raw(), o.re.raw(), o.im.raw(), o.im.raw(), MPFR_RNDN);
    BigReal r, s;
    mpfr_fmma(r.raw(), re.raw(), o.re.raw(), im.raw(), o.im.raw(), MPFR_RNDN);
    mpfr_fmms(s.raw(), im.raw(), o.re.raw(), re.raw(), o.im.raw(), MPFR_RNDN);
    mpfr_div(r.raw(), r.raw(), den.raw(), MPFR_RNDN);
    mpfr_div(s.raw(), s.raw(), den.raw(), MPFR_RNDN);
    re = std::move(r);
    im = std::move(s);
    return *this;
}

BigComplex& BigComplex::operator*=(const BigReal& o) {
    re *= o;
    im *= o;
    return *this;
}

BigComplex& BigComplex::operator/=(const BigReal& o) {
    re /= o;
    im /= o;
    return *this;
}

BigReal abs(const BigComplex& z) { return hypot(z.re, z.im); }

BigReal norm(const BigComplex& z) {
    BigReal r;
    mpfr_fmma(r.raw(), z.re.raw(), z.re.raw(), z.im.raw(), z.im.raw(), MPFR_RNDN);
    return r;
}

BigReal arg(const BigComplex& z) { return atan2(z.im, z.re); }

BigComplex exp(const BigComplex& z) { return BigComplex::polar(exp(z.re), z.im); }

BigComplex log(const BigComplex& z) {
    if (z.is_zero()) fail(ErrorKind::Domain, "log of zero");
    return {log(abs(z)), arg(z)};
}

BigComplex sqrt(const BigComplex& z) {
    if (z.is_zero()) return BigComplex{};
    BigReal r = abs(z);
    BigReal a = sqrt(ldexp(r + abs(z.re), -1));
    if (z.re.sign() >= 0) return {a, z.im / ldexp(a, 1)};
    BigReal b = z.im.sign() >= 0 ? a : -a;
    return {abs(z.im) / ldexp(a, 1), b};
}

BigComplex pow(const BigComplex& z, long k) {
    if (k < 0) return BigComplex(1L) / pow(z, -k);
    BigComplex result(1L);
    BigComplex base = z;
    while (k > 0) {
        if (k & 1) result *= base;
        k >>= 1;
        if (k) base *= base;
    }
    return result;
}

BigComplex pow(const BigComplex& z, const BigComplex& w) {
    if (z.is_zero()) return w.is_zero() ? BigComplex(1L) : BigComplex{};
    return exp(w * log(z));
}

BigComplex root(const BigComplex& z, long k) {
    if (z.is_zero()) return BigComplex{};
    BigReal r = pow(abs(z), BigReal(1L) / BigReal(k));
    return BigComplex::polar(r, arg(z) / BigReal(k));
}

void mul_into(BigComplex& out, const BigComplex& a, const BigComplex& b) {
    thread_local BigReal t;
    if (t.precision() != g_working_bits) t = BigReal();
    mpfr_mul(out.re.raw(), a.re.raw(), b.re.raw(), MPFR_RNDN);
    mpfr_mul(t.raw(), a.im.raw(), b.im.raw(), MPFR_RNDN);
    mpfr_sub(out.re.raw(), out.re.raw(), t.raw(), MPFR_RNDN);
    mpfr_mul(out.im.raw(), a.re.raw(), b.im.raw(), MPFR_RNDN);
    mpfr_mul(t.raw(), a.im.raw(), b.re.raw(), MPFR_RNDN);
    mpfr_add(out.im.raw(), out.im.raw(), t.raw(), MPFR_RNDN);
}

void horner_step(BigComplex& acc, const BigComplex& z, const BigComplex& c, BigComplex& tmp) {
    mul_into(tmp, acc, z);
    mpfr_add(acc.re.raw(), tmp.re.raw(), c.re.raw(), MPFR_RNDN);
    mpfr_add(acc.im.raw(), tmp.im.raw(), c.im.raw(), MPFR_RNDN);
}

}  // namespace hxz
