#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace solitonlab {

// Truncated Laurent series sum_{k=val}^{prec-1} c_k t^k.
// Coefficients at exponents >= prec are unknown.
class Series {
public:
    Series() = default;

    Series(double constant, int prec) : val_(0), prec_(prec) {
        if (prec > 0) coeffs_.push_back(constant);
        normalize();
    }

    // coeffs[k] multiplies t^k
    static Series polynomial(const std::vector<double>& coeffs, int prec) {
        Series s;
        s.val_ = 0;
        s.prec_ = prec;
        s.coeffs_.assign(static_cast<std::size_t>(std::max(prec, 0)), 0.0);
        for (std::size_t k = 0; k < coeffs.size() && static_cast<int>(k) < prec; ++k) s.coeffs_[k] = coeffs[k];
        s.normalize();
        return s;
    }

    int valuation() const { return val_; }
    int precision() const { return prec_; }

    double coefficient(int k) const {
        if (k >= prec_) throw std::out_of_range("Series coefficient beyond precision");
        if (k < val_) return 0.0;
        return coeffs_[static_cast<std::size_t>(k - val_)];
    }

    Series derivative() const {
        Series r;
        r.val_ = val_ - 1;
        r.prec_ = prec_ - 1;
        r.coeffs_.resize(coeffs_.size());
        for (std::size_t k = 0; k < coeffs_.size(); ++k) r.coeffs_[k] = coeffs_[k] * (val_ + static_cast<int>(k));
        r.normalize();
        return r;
    }

    Series inverse() const {
        if (coeffs_.empty()) throw std::domain_error("Series inverse of zero");
        const int n = prec_ - val_;  // relative precision
        Series r;
        r.val_ = -val_;
        r.prec_ = r.val_ + n;
        r.coeffs_.assign(static_cast<std::size_t>(n), 0.0);
        const double a0 = coeffs_[0];
        r.coeffs_[0] = 1.0 / a0;
        for (int k = 1; k < n; ++k) {
            double acc = 0.0;
            for (int j = 1; j <= k; ++j) acc += coeffs_[static_cast<std::size_t>(j)] * r.coeffs_[static_cast<std::size_t>(k - j)];
            r.coeffs_[static_cast<std::size_t>(k)] = -acc / a0;
        }
        return r;
    }

    Series operator-() const {
        Series r = *this;
        for (auto& c : r.coeffs_) c = -c;
        return r;
    }

    friend Series operator+(const Series& a, const Series& b) { return add(a, b, 1.0); }
    friend Series operator-(const Series& a, const Series& b) { return add(a, b, -1.0); }

    friend Series operator*(const Series& a, const Series& b) {
        Series r;
        r.val_ = a.val_ + b.val_;
        r.prec_ = std::min(a.prec_ + b.val_, b.prec_ + a.val_);
        const int n = r.prec_ - r.val_;
        r.coeffs_.assign(static_cast<std::size_t>(std::max(n, 0)), 0.0);
        for (int i = 0; i < n && i < static_cast<int>(a.coeffs_.size()); ++i) {
            for (int j = 0; i + j < n && j < static_cast<int>(b.coeffs_.size()); ++j) {
                r.coeffs_[static_cast<std::size_t>(i + j)] +=
                    a.coeffs_[static_cast<std::size_t>(i)] * b.coeffs_[static_cast<std::size_t>(j)];
            }
        }
        r.normalize();
        return r;
    }

    friend Series operator/(const Series& a, const Series& b) { return a * b.inverse(); }

    friend Series operator+(const Series& a, double x) { return a + Series(x, a.prec_); }
    friend Series operator+(double x, const Series& a) { return a + x; }
    friend Series operator-(const Series& a, double x) { return a + (-x); }
    friend Series operator-(double x, const Series& a) { return Series(x, a.prec_) - a; }
    friend Series operator*(const Series& a, double x) {
        Series r = a;
        for (auto& c : r.coeffs_) c *= x;
        r.normalize();
        return r;
    }
    friend Series operator*(double x, const Series& a) { return a * x; }
    friend Series operator/(const Series& a, double x) { return a * (1.0 / x); }
    friend Series operator/(double x, const Series& a) { return x * a.inverse(); }

    Series& operator+=(const Series& o) { return *this = *this + o; }
    Series& operator-=(const Series& o) { return *this = *this - o; }
    Series& operator*=(const Series& o) { return *this = *this * o; }
    Series& operator+=(double x) { return *this = *this + x; }
    Series& operator*=(double x) { return *this = *this * x; }

private:
    static Series add(const Series& a, const Series& b, double sb) {
        Series r;
        r.val_ = std::min(a.val_, b.val_);
        r.prec_ = std::min(a.prec_, b.prec_);
        const int n = r.prec_ - r.val_;
        r.coeffs_.assign(static_cast<std::size_t>(std::max(n, 0)), 0.0);
        for (int k = r.val_; k < r.prec_; ++k) {
            double v = 0.0;
            if (k >= a.val_ && k - a.val_ < static_cast<int>(a.coeffs_.size())) v += a.coeffs_[static_cast<std::size_t>(k - a.val_)];
            if (k >= b.val_ && k - b.val_ < static_cast<int>(b.coeffs_.size())) v += sb * b.coeffs_[static_cast<std::size_t>(k - b.val_)];
            r.coeffs_[static_cast<std::size_t>(k - r.val_)] = v;
        }
        r.normalize();
        return r;
    }

    // strip exact leading zeros so that inverse() sees the true valuation
    void normalize() {
        std::size_t z = 0;
        while (z < coeffs_.size() && coeffs_[z] == 0.0) ++z;
        if (z == coeffs_.size()) {
            coeffs_.clear();
            val_ = prec_;
            return;
        }
        coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(z));
        val_ += static_cast<int>(z);
    }

    int val_ = 0;
    int prec_ = 0;
    std::vector<double> coeffs_;  // coeffs_[k] multiplies t^{val_+k}
};

}  // namespace solitonlab
