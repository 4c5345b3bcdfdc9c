#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qtors/error.hpp"

namespace qtors {

// Dense matrix over the prime field F_p.  All elimination is exact with
// deterministic pivoting: first nonzero column, lowest row.  Vectors are
// columns; a subspace of F_p^d is represented by a d x k matrix whose columns
// form a basis.
class Mat {
public:
    Mat() = default;
    Mat(int rows, int cols, std::uint32_t p)
        : rows_(rows), cols_(cols), p_(p), a_(static_cast<size_t>(rows) * cols, 0) {
        if (rows < 0 || cols < 0 || p < 2) throw InputError("bad matrix shape or modulus");
    }

    static Mat identity(int n, std::uint32_t p) {
        Mat m(n, n, p);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::uint32_t mod() const { return p_; }

    std::uint32_t& at(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    std::uint32_t at(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    void set(int i, int j, long long v) {
        long long r = v % static_cast<long long>(p_);
        if (r < 0) r += p_;
        at(i, j) = static_cast<std::uint32_t>(r);
    }

    bool is_zero() const {
        for (std::uint32_t x : a_)
            if (x != 0) return false;
        return true;
    }

    friend bool operator==(const Mat& a, const Mat& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.p_ == b.p_ && a.a_ == b.a_;
    }

    Mat operator*(const Mat& o) const {
        require_mod(o);
        if (cols_ != o.rows_) throw Error("matrix product shape mismatch");
        Mat r(rows_, o.cols_, p_);
        for (int i = 0; i < rows_; ++i)
            for (int k = 0; k < cols_; ++k) {
                std::uint64_t x = at(i, k);
                if (!x) continue;
                for (int j = 0; j < o.cols_; ++j)
                    r.at(i, j) = static_cast<std::uint32_t>((r.at(i, j) + x * o.at(k, j)) % p_);
            }
        return r;
    }

    Mat operator+(const Mat& o) const {
        require_shape(o);
        Mat r(rows_, cols_, p_);
        for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = (a_[i] + o.a_[i]) % p_;
        return r;
    }

    Mat operator-(const Mat& o) const {
        require_shape(o);
        Mat r(rows_, cols_, p_);
        for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = (a_[i] + p_ - o.a_[i]) % p_;
        return r;
    }

    Mat transpose() const {
        Mat r(cols_, rows_, p_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
        return r;
    }

    Mat hcat(const Mat& o) const {
        require_mod(o);
        if (rows_ != o.rows_) throw Error("hcat row mismatch");
        Mat r(rows_, cols_ + o.cols_, p_);
        for (int i = 0; i < rows_; ++i) {
            for (int j = 0; j < cols_; ++j) r.at(i, j) = at(i, j);
            for (int j = 0; j < o.cols_; ++j) r.at(i, cols_ + j) = o.at(i, j);
        }
        return r;
    }

    Mat vcat(const Mat& o) const {
        require_mod(o);
        if (cols_ != o.cols_) throw Error("vcat column mismatch");
        Mat r(rows_ + o.rows_, cols_, p_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r.at(i, j) = at(i, j);
        for (int i = 0; i < o.rows_; ++i)
            for (int j = 0; j < cols_; ++j) r.at(rows_ + i, j) = o.at(i, j);
        return r;
    }

    Mat col_slice(int from, int count) const {
        Mat r(rows_, count, p_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < count; ++j) r.at(i, j) = at(i, from + j);
        return r;
    }

    Mat row_slice(int from, int count) const {
        Mat r(count, cols_, p_);
        for (int i = 0; i < count; ++i)
            for (int j = 0; j < cols_; ++j) r.at(i, j) = at(from + i, j);
        return r;
    }

    Mat col(int j) const { return col_slice(j, 1); }

    std::uint32_t inv_scalar(std::uint32_t x) const {
        // Fermat; p is prime and x != 0 mod p.
        if (x % p_ == 0) throw Error("inverting zero in F_p");
        std::uint64_t base = x % p_, e = p_ - 2, acc = 1;
        while (e) {
            if (e & 1) acc = acc * base % p_;
            base = base * base % p_;
            e >>= 1;
        }
        return static_cast<std::uint32_t>(acc);
    }

    struct Echelon;
    Echelon rref() const;
    int rank() const;
    Mat null_basis() const;
    std::optional<Mat> solve(const Mat& b) const;
    std::optional<Mat> inverse() const;

    std::string str() const {
        std::string s = "[";
        for (int i = 0; i < rows_; ++i) {
            s += i ? ",[" : "[";
            for (int j = 0; j < cols_; ++j) s += (j ? "," : "") + std::to_string(at(i, j));
            s += "]";
        }
        return s + "]";
    }

    // Byte key for hashing/caching.
    void append_key(std::string& out) const {
        out += std::to_string(rows_) + "x" + std::to_string(cols_) + ":";
        for (std::uint32_t v : a_) out += static_cast<char>('0' + v % 64);
    }

private:
    void require_mod(const Mat& o) const {
        if (p_ != o.p_) throw Error("field mismatch");
    }
    void require_shape(const Mat& o) const {
        require_mod(o);
        if (rows_ != o.rows_ || cols_ != o.cols_) throw Error("matrix shape mismatch");
    }

    int rows_ = 0, cols_ = 0;
    std::uint32_t p_ = 2;
    std::vector<std::uint32_t> a_;
};

struct Mat::Echelon {
    Mat reduced;              // reduced row echelon form
    std::vector<int> pivots;  // pivot column per pivot row
};

inline Mat::Echelon Mat::rref() const {
    Mat m = *this;
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < cols_ && row < rows_; ++col) {
        int sel = -1;
        for (int i = row; i < rows_; ++i)
            if (m.at(i, col) != 0) {
                sel = i;
                break;
            }
        if (sel < 0) continue;
        if (sel != row)
            for (int j = 0; j < cols_; ++j) std::swap(m.at(sel, j), m.at(row, j));
        std::uint64_t inv = inv_scalar(m.at(row, col));
        for (int j = 0; j < cols_; ++j)
            m.at(row, j) = static_cast<std::uint32_t>(m.at(row, j) * inv % p_);
        for (int i = 0; i < rows_; ++i) {
            if (i == row) continue;
            std::uint64_t f = m.at(i, col);
            if (!f) continue;
            for (int j = 0; j < cols_; ++j)
                m.at(i, j) = static_cast<std::uint32_t>(
                    (m.at(i, j) + (p_ - 1) * f % p_ * m.at(row, j)) % p_);
        }
        pivots.push_back(col);
        ++row;
    }
    return Echelon{std::move(m), std::move(pivots)};
}

inline int Mat::rank() const { return static_cast<int>(rref().pivots.size()); }

// Basis of {x : Ax = 0}; columns, ordered by free-column index.
inline Mat Mat::null_basis() const {
    Echelon e = rref();
    std::vector<char> is_pivot(cols_, 0);
    for (int c : e.pivots) is_pivot[c] = 1;
    int nfree = cols_ - static_cast<int>(e.pivots.size());
    Mat basis(cols_, nfree, p_);
    int k = 0;
    for (int c = 0; c < cols_; ++c) {
        if (is_pivot[c]) continue;
        basis.at(c, k) = 1;
        for (size_t r = 0; r < e.pivots.size(); ++r) {
            std::uint32_t v = e.reduced.at(static_cast<int>(r), c);
            if (v) basis.at(e.pivots[r], k) = p_ - v;
        }
        ++k;
    }
    return basis;
}

// One solution X of AX = B, or nullopt if inconsistent.
inline std::optional<Mat> Mat::solve(const Mat& b) const {
    require_mod(b);
    if (b.rows() != rows_) throw Error("solve shape mismatch");
    Echelon e = hcat(b).rref();
    for (int c : e.pivots)
        if (c >= cols_) return std::nullopt;
    Mat x(cols_, b.cols(), p_);
    for (size_t r = 0; r < e.pivots.size(); ++r)
        for (int j = 0; j < b.cols(); ++j)
            x.at(e.pivots[r], j) = e.reduced.at(static_cast<int>(r), cols_ + j);
    return x;
}

inline std::optional<Mat> Mat::inverse() const {
    if (rows_ != cols_) return std::nullopt;
    auto x = solve(identity(rows_, p_));
    if (!x) return std::nullopt;
    if (rank() != rows_) return std::nullopt;
    return x;
}

// ---- Subspace helpers (columns span the subspace) ----

// Canonical basis of the column space: unique per subspace, so equal subspaces
// compare equal as matrices.
inline Mat col_space_basis(const Mat& m) {
    Mat::Echelon e = m.transpose().rref();
    Mat basis(m.rows(), static_cast<int>(e.pivots.size()), m.mod());
    for (size_t r = 0; r < e.pivots.size(); ++r)
        for (int j = 0; j < m.rows(); ++j) basis.at(j, static_cast<int>(r)) = e.reduced.at(static_cast<int>(r), j);
    return basis;
}

inline Mat subspace_sum(const Mat& a, const Mat& b) { return col_space_basis(a.hcat(b)); }

inline bool subspace_contains(const Mat& space, const Mat& vectors) {
    return space.solve(vectors).has_value();
}

inline bool subspace_equal(const Mat& a, const Mat& b) {
    return col_space_basis(a) == col_space_basis(b);
}

inline Mat subspace_intersect(const Mat& a, const Mat& b) {
    if (a.cols() == 0 || b.cols() == 0) return Mat(a.rows(), 0, a.mod());
    Mat ker = a.hcat(b).null_basis();
    Mat xs = ker.row_slice(0, a.cols());
    return col_space_basis(a * xs);
}

// Standard basis vectors completing the column space of `a` to the whole of
// F_p^d, ordered by coordinate.
inline Mat subspace_complement_std(const Mat& a) {
    Mat::Echelon e = a.transpose().rref();
    std::vector<char> used(a.rows(), 0);
    for (int c : e.pivots) used[c] = 1;
    Mat comp(a.rows(), a.rows() - static_cast<int>(e.pivots.size()), a.mod());
    int k = 0;
    for (int j = 0; j < a.rows(); ++j)
        if (!used[j]) comp.at(j, k++) = 1;
    return comp;
}

// All subspaces of F_p^d as canonical column bases, ordered by dimension and
// then by generation order of the echelon patterns.  Count grows quickly;
// guarded by `cap`.
inline std::vector<Mat> all_subspaces(int d, std::uint32_t p, size_t cap = 200000) {
    std::vector<Mat> out;
    out.emplace_back(d, 0, p);
    for (int k = 1; k <= d; ++k) {
        // choose pivot columns j_1 < ... < j_k, then free entries
        std::vector<int> piv(k);
        for (int i = 0; i < k; ++i) piv[i] = i;
        while (true) {
            // free positions: (row i, col j) with j > piv[i], j not a pivot
            std::vector<std::pair<int, int>> free_pos;
            {
                std::vector<char> is_piv(d, 0);
                for (int c : piv) is_piv[c] = 1;
                for (int i = 0; i < k; ++i)
                    for (int j = piv[i] + 1; j < d; ++j)
                        if (!is_piv[j]) free_pos.emplace_back(i, j);
            }
            size_t combos = 1;
            for (size_t i = 0; i < free_pos.size(); ++i) {
                combos *= p;
                if (combos > cap) throw BoundError("subspace enumeration exceeds cap");
            }
            for (size_t code = 0; code < combos; ++code) {
                if (out.size() >= cap) throw BoundError("subspace enumeration exceeds cap");
                Mat rowform(k, d, p);
                for (int i = 0; i < k; ++i) rowform.at(i, piv[i]) = 1;
                size_t c = code;
                for (auto [i, j] : free_pos) {
                    rowform.at(i, j) = static_cast<std::uint32_t>(c % p);
                    c /= p;
                }
                out.push_back(rowform.transpose());
            }
            // next combination of pivots
            int i = k - 1;
            while (i >= 0 && piv[i] == d - k + i) --i;
            if (i < 0) break;
            ++piv[i];
            for (int j = i + 1; j < k; ++j) piv[j] = piv[j - 1] + 1;
        }
    }
    return out;
}

}  // namespace qtors
