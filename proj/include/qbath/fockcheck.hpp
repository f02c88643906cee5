// fockcheck.hpp — Truncated Fock-space oracles
//
// Brute-force checks that share nothing with the spectral-integral code path
// beyond the model definition: the Debye-Waller identity for one oscillator,
// the Baker-Hausdorff product rule, and the full four-exponential thermal
// average T on a sub-system coupled to a handful of bath oscillators.
//
// Composite systems are handled with a sparse Hamiltonian in the uncoupled
// Fock basis; e^{-beta H/2} and e^{-iHt} are applied to vectors by Chebyshev
// expansion, so dimensions of a few thousand stay cheap.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "qbath/bath.hpp"
#include "qbath/correlators.hpp"
#include "qbath/errors.hpp"
#include "qbath/evolution.hpp"
#include "qbath/linalg.hpp"
#include "qbath/model.hpp"

namespace qbath::fockcheck {

using linalg::CMatrix;

// q = (a + a^dag)/sqrt(2 omega), p = i sqrt(omega/2)(a^dag - a).
struct TruncatedOscillator {
    double omega{1.0};
    std::size_t dim{0};
    CMatrix q, p, n;

    TruncatedOscillator(double omega_, std::size_t dim_) : omega(omega_), dim(dim_) {
        if (!(omega > 0.0)) throw DomainError("TruncatedOscillator: omega must be positive");
        if (dim < 2) throw DomainError("TruncatedOscillator: dim must be >= 2");
        q = CMatrix(dim, dim);
        p = CMatrix(dim, dim);
        n = CMatrix(dim, dim);
        const double sq = 1.0 / std::sqrt(2.0 * omega), sp = std::sqrt(0.5 * omega);
        for (std::size_t k = 0; k < dim; ++k) {
            n(k, k) = static_cast<double>(k);
            if (k + 1 < dim) {
                const double s = std::sqrt(static_cast<double>(k + 1));  // <k|a|k+1>
                q(k, k + 1) = q(k + 1, k) = sq * s;
                p(k, k + 1) = cplx(0.0, -sp * s);
                p(k + 1, k) = cplx(0.0, sp * s);
            }
        }
    }

    // Largest |[q,p] - i| entry on rows/cols < block.
    double commutator_defect(std::size_t block) const {
        const CMatrix c = q * p - p * q;
        double m = 0.0;
        for (std::size_t i = 0; i < std::min(block, dim); ++i)
            for (std::size_t j = 0; j < std::min(block, dim); ++j)
                m = std::max(m, std::abs(c(i, j) - (i == j ? cplx(0.0, 1.0) : cplx(0.0))));
        return m;
    }

    double hermiticity_defect() const {
        double m = 0.0;
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j)
                m = std::max({m, std::abs(q(i, j) - std::conj(q(j, i))), std::abs(p(i, j) - std::conj(p(j, i)))});
        return m;
    }
};

// ---------------------------------------------------------------- Debye-Waller

struct DebyeWaller {
    cplx lhs;       // Tr[e^{-beta H} e^{icq}] / Tr[e^{-beta H}]
    double rhs{0};  // exp(-c^2 <q^2>/2)
    double budget{0};  // thermal weight of the top 3 levels

    double relative_gap() const { return std::abs(lhs - rhs) / std::abs(rhs); }
};

inline DebyeWaller debye_waller_check(const TruncatedOscillator& osc, InverseTemperature beta, double c,
                                      double max_budget = 1e-6) {
    const CMatrix e = linalg::expm(osc.q * cplx(0.0, c));
    DebyeWaller r;
    double z = 0.0;
    cplx tr{};
    for (std::size_t k = 0; k < osc.dim; ++k) {
        const double w = beta.is_infinite() ? (k == 0 ? 1.0 : 0.0)
                                            : std::exp(-beta.value() * osc.omega * static_cast<double>(k));
        z += w;
        tr += w * e(k, k);
        if (k + 3 >= osc.dim) r.budget += w;
    }
    r.budget /= z;
    if (r.budget > max_budget)
        throw NumericalError("debye_waller_check: truncation budget " + std::to_string(r.budget) +
                             " exceeds " + std::to_string(max_budget) + "; increase dim");
    r.lhs = tr / z;
    r.rhs = std::exp(-0.5 * c * c * beta.coth_half(osc.omega) / (2.0 * osc.omega));
    return r;
}

// Coefficients of a linear form cq q + cp p.
struct LinearForm {
    cplx cq{}, cp{};
};

// max |(e^A e^B - e^{A+B} e^{[A,B]/2})_{ij}| over i, j < protected_block
// (default dim/2). [A,B] is the exact c-number i(aq bp - ap bq).
inline double bch_convention_check(const TruncatedOscillator& osc, LinearForm a, LinearForm b,
                                   std::size_t protected_block = 0) {
    if (protected_block == 0) protected_block = osc.dim / 2;
    const CMatrix A = osc.q * a.cq + osc.p * a.cp;
    const CMatrix B = osc.q * b.cq + osc.p * b.cp;
    const cplx comm = cplx(0.0, 1.0) * (a.cq * b.cp - a.cp * b.cq);
    const CMatrix lhs = linalg::expm(A) * linalg::expm(B);
    const CMatrix rhs = linalg::expm(A + B) * std::exp(0.5 * comm);
    double m = 0.0;
    for (std::size_t i = 0; i < std::min(protected_block, osc.dim); ++i)
        for (std::size_t j = 0; j < std::min(protected_block, osc.dim); ++j)
            m = std::max(m, std::abs(lhs(i, j) - rhs(i, j)));
    return m;
}

// ---------------------------------------------------------------- small bath

struct SmallBathSystem {
    double omega0{1.0};
    bath::DiscreteBath bath;
    std::vector<std::size_t> dims;  // sub-system first, then one per bath mode
    InverseTemperature beta{InverseTemperature::finite(1.0)};

    void validate() const {
        bath.validate();
        if (bath.omegas.size() > 3) throw DomainError("SmallBathSystem: at most 3 bath modes");
        if (dims.size() != bath.omegas.size() + 1) throw DomainError("SmallBathSystem: one dim per oscillator");
        for (auto d : dims)
            if (d < 2) throw DomainError("SmallBathSystem: dims must be >= 2");
        if (!(omega0 > 0.0)) throw DomainError("SmallBathSystem: omega0 must be positive");
        if (beta.is_infinite()) throw DomainError("SmallBathSystem: finite beta required");
    }

    std::size_t size() const {
        return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
    }

    // Fock frequency of the sub-system factor: sqrt(Omega0^2 + sum alpha^2/omega^2).
    double renormalized_omega0() const {
        double k00 = omega0 * omega0;
        for (std::size_t k = 0; k < bath.omegas.size(); ++k)
            k00 += bath.couplings[k] * bath.couplings[k] / (bath.omegas[k] * bath.omegas[k]);
        return std::sqrt(k00);
    }
};

namespace detail {

// H = sum_i omega_i (n_i + 1/2) + sum_k alpha_k q_0 q_k on the product basis,
// factor 0 the slowest index.
class SparseHamiltonian {
public:
    explicit SparseHamiltonian(const SmallBathSystem& s) : dims_(s.dims) {
        const std::size_t nf = dims_.size();
        freqs_.resize(nf);
        freqs_[0] = s.renormalized_omega0();
        for (std::size_t k = 1; k < nf; ++k) freqs_[k] = s.bath.omegas[k - 1];
        alpha_.assign(s.bath.couplings.begin(), s.bath.couplings.end());
        stride_.assign(nf, 1);
        for (std::size_t f = nf - 1; f-- > 0;) stride_[f] = stride_[f + 1] * dims_[f + 1];
        size_ = stride_[0] * dims_[0];
        diag_.resize(size_);
        for (std::size_t i = 0; i < size_; ++i) {
            double e = 0.0;
            for (std::size_t f = 0; f < nf; ++f) e += freqs_[f] * (static_cast<double>(level(i, f)) + 0.5);
            diag_[i] = e;
        }
        // off-diagonal couplings <i| alpha_k q0 qk |j>, j = i +- s0 +- sk
        row_.assign(size_ + 1, 0);
        for (std::size_t i = 0; i < size_; ++i) {
            const std::size_t n0 = level(i, 0);
            for (std::size_t k = 0; k < alpha_.size(); ++k) {
                if (alpha_[k] == 0.0) continue;
                const double pre = alpha_[k] / (2.0 * std::sqrt(freqs_[0] * freqs_[k + 1]));
                const std::size_t nk = level(i, k + 1), s0 = stride_[0], sk = stride_[k + 1];
                for (int d0 = -1; d0 <= 1; d0 += 2) {
                    if ((d0 < 0 && n0 == 0) || (d0 > 0 && n0 + 1 >= dims_[0])) continue;
                    const double a0 = std::sqrt(static_cast<double>(d0 > 0 ? n0 + 1 : n0));
                    for (int dk = -1; dk <= 1; dk += 2) {
                        if ((dk < 0 && nk == 0) || (dk > 0 && nk + 1 >= dims_[k + 1])) continue;
                        const double ak = std::sqrt(static_cast<double>(dk > 0 ? nk + 1 : nk));
                        col_.push_back(i + (d0 > 0 ? s0 : -s0) + (dk > 0 ? sk : -sk));
                        val_.push_back(pre * a0 * ak);
                    }
                }
            }
            row_[i + 1] = col_.size();
        }
        // Gershgorin bounds
        lo_ = std::numeric_limits<double>::infinity();
        hi_ = -lo_;
        for (std::size_t i = 0; i < size_; ++i) {
            double r = 0.0;
            for (std::size_t e = row_[i]; e < row_[i + 1]; ++e) r += std::abs(val_[e]);
            lo_ = std::min(lo_, diag_[i] - r);
            hi_ = std::max(hi_, diag_[i] + r);
        }
    }

    std::size_t size() const { return size_; }
    std::size_t level(std::size_t i, std::size_t f) const { return (i / stride_[f]) % dims_[f]; }
    std::size_t stride(std::size_t f) const { return stride_[f]; }
    const std::vector<std::size_t>& dims() const { return dims_; }
    double lower_bound() const { return lo_; }
    double upper_bound() const { return hi_; }
    double diagonal(std::size_t i) const { return diag_[i]; }

    // out = H in
    template <class T>
    void apply(const std::vector<T>& in, std::vector<T>& out) const {
        for (std::size_t i = 0; i < size_; ++i) {
            T s = diag_[i] * in[i];
            for (std::size_t e = row_[i]; e < row_[i + 1]; ++e) s += val_[e] * in[col_[e]];
            out[i] = s;
        }
    }

    // out = H in for `width` vectors stored interleaved (row i holds entry i of each)
    void apply_block(const std::vector<double>& in, std::vector<double>& out, std::size_t width) const {
        for (std::size_t i = 0; i < size_; ++i) {
            double* o = out.data() + i * width;
            const double* x = in.data() + i * width;
            for (std::size_t c = 0; c < width; ++c) o[c] = diag_[i] * x[c];
            for (std::size_t e = row_[i]; e < row_[i + 1]; ++e) {
                const double v = val_[e];
                const double* y = in.data() + col_[e] * width;
                for (std::size_t c = 0; c < width; ++c) o[c] += v * y[c];
            }
        }
    }

private:
    std::vector<std::size_t> dims_, stride_;
    std::vector<double> freqs_, alpha_, diag_;
    std::vector<std::size_t> row_, col_;
    std::vector<double> val_;
    std::size_t size_{0};
    double lo_{0}, hi_{0};
};

// Chebyshev series sum_k c_k T_k(Hs) v with Hs = (H - center)/radius.
template <class T>
std::vector<T> chebyshev_apply(const SparseHamiltonian& h, const std::vector<T>& v, const std::vector<T>& coeffs) {
    const double center = 0.5 * (h.upper_bound() + h.lower_bound());
    const double radius = 0.5 * (h.upper_bound() - h.lower_bound()) * 1.01 + 1e-12;
    const std::size_t n = v.size();
    std::vector<T> t0 = v, t1(n), tmp(n), out(n);
    h.apply(t0, tmp);
    for (std::size_t i = 0; i < n; ++i) t1[i] = (tmp[i] - center * t0[i]) / radius;
    for (std::size_t i = 0; i < n; ++i) out[i] = coeffs[0] * t0[i] + (coeffs.size() > 1 ? coeffs[1] * t1[i] : T{});
    for (std::size_t k = 2; k < coeffs.size(); ++k) {
        h.apply(t1, tmp);
        for (std::size_t i = 0; i < n; ++i) {
            const T t2 = 2.0 * (tmp[i] - center * t1[i]) / radius - t0[i];
            t0[i] = t1[i];
            t1[i] = t2;
            out[i] += coeffs[k] * t2;
        }
    }
    return out;
}

// Calls visit(k, T_k(Hs) V) for k < count on a block of `width` real vectors
// stored interleaved.
template <class Visit>
void chebyshev_terms(const SparseHamiltonian& h, const std::vector<double>& v, std::size_t width,
                     std::size_t count, const Visit& visit) {
    const double center = 0.5 * (h.upper_bound() + h.lower_bound());
    const double radius = 0.5 * (h.upper_bound() - h.lower_bound()) * 1.01 + 1e-12;
    const std::size_t n = v.size();
    std::vector<double> t0 = v, t1(n), tmp(n);
    visit(std::size_t{0}, t0);
    if (count < 2) return;
    h.apply_block(t0, tmp, width);
    for (std::size_t i = 0; i < n; ++i) t1[i] = (tmp[i] - center * t0[i]) / radius;
    visit(std::size_t{1}, t1);
    for (std::size_t k = 2; k < count; ++k) {
        h.apply_block(t1, tmp, width);
        for (std::size_t i = 0; i < n; ++i) {
            const double t2 = 2.0 * (tmp[i] - center * t1[i]) / radius - t0[i];
            t0[i] = t1[i];
            tmp[i] = t2;
        }
        std::swap(t1, tmp);
        visit(k, t1);
    }
}

inline std::vector<double> chebyshev_apply_block(const SparseHamiltonian& h, const std::vector<double>& v,
                                                 std::size_t width, const std::vector<double>& coeffs) {
    std::vector<double> out(v.size(), 0.0);
    chebyshev_terms(h, v, width, coeffs.size(), [&](std::size_t k, const std::vector<double>& tk) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += coeffs[k] * tk[i];
    });
    return out;
}

// Complex vectors as (re, im) column pairs; H is real so both parts share
// the recursion.
inline std::vector<std::vector<cplx>> chebyshev_apply_complex(const SparseHamiltonian& h,
                                                              const std::vector<std::vector<cplx>>& vs,
                                                              const std::vector<cplx>& coeffs) {
    const std::size_t n = h.size(), m = vs.size(), width = 2 * m;
    std::vector<double> packed(n * width);
    for (std::size_t c = 0; c < m; ++c)
        for (std::size_t i = 0; i < n; ++i) {
            packed[i * width + 2 * c] = vs[c][i].real();
            packed[i * width + 2 * c + 1] = vs[c][i].imag();
        }
    std::vector<std::vector<cplx>> out(m, std::vector<cplx>(n));
    chebyshev_terms(h, packed, width, coeffs.size(), [&](std::size_t k, const std::vector<double>& tk) {
        const cplx ck = coeffs[k];
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t c = 0; c < m; ++c)
                out[c][i] += ck * cplx(tk[i * width + 2 * c], tk[i * width + 2 * c + 1]);
    });
    return out;
}

inline double chebyshev_radius(const SparseHamiltonian& h) {
    return 0.5 * (h.upper_bound() - h.lower_bound()) * 1.01 + 1e-12;
}

// e^{-tau (H - E_lo)} coefficients; all terms are O(1) or smaller.
inline std::vector<double> imaginary_time_coeffs(const SparseHamiltonian& h, double tau) {
    const double r = chebyshev_radius(h);
    const double center = 0.5 * (h.upper_bound() + h.lower_bound());
    const double x = tau * r;
    const double shift = std::exp(-tau * (center - r - h.lower_bound()));
    std::vector<double> c;
    for (int k = 0;; ++k) {
        const double ik = std::cyl_bessel_i(static_cast<double>(k), x) * std::exp(-x);
        c.push_back((k == 0 ? 1.0 : 2.0) * ((k % 2) ? -1.0 : 1.0) * ik * shift);
        if (k > x && ik < 1e-18) break;
        if (k > 100000) throw NumericalError("imaginary_time_coeffs: series did not terminate");
    }
    return c;
}

// e^{-iHt} coefficients.
inline std::vector<cplx> real_time_coeffs(const SparseHamiltonian& h, double t) {
    const double r = chebyshev_radius(h);
    const double center = 0.5 * (h.upper_bound() + h.lower_bound());
    const double x = t * r;
    const cplx phase = std::exp(cplx(0.0, -center * t));
    std::vector<cplx> c;
    cplx mi{1.0, 0.0};
    for (int k = 0;; ++k) {
        const double jk = std::cyl_bessel_j(static_cast<double>(k), x);
        c.push_back((k == 0 ? 1.0 : 2.0) * mi * jk * phase);
        mi *= cplx(0.0, -1.0);
        if (k > x + 10 && std::abs(jk) < 1e-18) break;
        if (k > 100000) throw NumericalError("real_time_coeffs: series did not terminate");
    }
    return c;
}

// out[i0, rest] = sum_j m(i0, j) in[j, rest]
inline std::vector<cplx> apply_factor0(const CMatrix& m, const std::vector<cplx>& in, std::size_t stride0) {
    const std::size_t d0 = m.rows();
    std::vector<cplx> out(in.size());
    for (std::size_t i = 0; i < d0; ++i)
        for (std::size_t j = 0; j < d0; ++j) {
            const cplx mij = m(i, j);
            if (mij == cplx(0.0)) continue;
            const cplx* src = in.data() + j * stride0;
            cplx* dst = out.data() + i * stride0;
            for (std::size_t r = 0; r < stride0; ++r) dst[r] += mij * src[r];
        }
    return out;
}

inline cplx dot(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    cplx s{};
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

} // namespace detail

struct TResult {
    cplx T_exact;
    cplx T_formula;
    double budget{0};  // thermal weight in the top 3 levels of any factor

    double relative_gap() const { return std::abs(T_exact - T_formula) / std::abs(T_formula); }
};

struct SmallBathOptions {
    double max_budget{1e-6};
    // basis states whose thermal weight is below this fraction of Z are skipped
    double weight_cutoff{1e-14};
};

struct TQuery {
    double a{0}, b{0}, u{0}, v{0}, t{0};
};

// T = <e^{i Q0 b} e^{i P0(t) u} e^{i Q0(t) v} e^{i Q0 a}> by truncated Fock space
// evolution (exact side) and by the quadratic cumulant form with correlators
// from the same finite system's normal modes (formula side). The thermal
// vectors e^{-beta H/2}|i> are shared by all queries.
inline std::vector<TResult> small_bath_T(const SmallBathSystem& sys, const std::vector<TQuery>& queries,
                                         const SmallBathOptions& opt = {}) {
    sys.validate();
    for (const auto& q : queries)
        if (q.t < 0.0) throw DomainError("small_bath_T: t must be >= 0");
    const detail::SparseHamiltonian h(sys);
    const std::size_t n = h.size(), d0 = sys.dims[0], s0 = h.stride(0);
    const TruncatedOscillator osc(sys.renormalized_omega0(), d0);
    const cplx I{0.0, 1.0};

    struct Prepared {
        CMatrix ea, emb, ev, eu;
        std::vector<cplx> forward;
    };
    std::vector<Prepared> prep;
    for (const auto& q : queries)
        prep.push_back({linalg::expm(osc.q * (I * q.a)), linalg::expm(osc.q * (-I * q.b)),
                        linalg::expm(osc.q * (I * q.v)), linalg::expm(osc.p * (I * q.u)),
                        q.t > 0.0 ? detail::real_time_coeffs(h, q.t) : std::vector<cplx>{}});
    const auto thermal = detail::imaginary_time_coeffs(h, 0.5 * sys.beta.value());

    // Basis states in order of unperturbed energy, so the running Z is close
    // to its final value by the time low-weight states are reached.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return h.diagonal(x) < h.diagonal(y); });

    std::vector<double> top(sys.dims.size(), 0.0);
    std::vector<cplx> acc(queries.size());
    double z = 0.0;
    constexpr std::size_t block = 32;
    std::vector<double> phr(n);
    std::vector<std::vector<cplx>> survivors;
    for (std::size_t start = 0; start < n; start += block) {
        const std::size_t width = std::min(block, n - start);
        std::vector<double> e(n * width, 0.0);
        for (std::size_t c = 0; c < width; ++c) e[order[start + c] * width + c] = 1.0;
        const std::vector<double> phis = detail::chebyshev_apply_block(h, e, width, thermal);
        for (std::size_t c = 0; c < width; ++c) {
            const std::size_t i = order[start + c];
            for (std::size_t r = 0; r < n; ++r) phr[r] = phis[r * width + c];
            double w = 0.0;
            for (double x : phr) w += x * x;
            z += w;
            for (std::size_t f = 0; f < sys.dims.size(); ++f)
                if (h.level(i, f) + 3 >= sys.dims[f]) top[f] += w;
            if (w < opt.weight_cutoff * z) continue;
            survivors.emplace_back(phr.begin(), phr.end());
        }
        if (survivors.empty()) continue;

        for (std::size_t k = 0; k < queries.size(); ++k) {
            const auto& pq = prep[k];
            std::vector<std::vector<cplx>> vs;
            for (const auto& phi : survivors) {
                vs.push_back(detail::apply_factor0(pq.ea, phi, s0));
                vs.push_back(detail::apply_factor0(pq.emb, phi, s0));
            }
            if (!pq.forward.empty()) vs = detail::chebyshev_apply_complex(h, vs, pq.forward);
            for (std::size_t c = 0; c < survivors.size(); ++c) {
                const auto right = detail::apply_factor0(pq.eu, detail::apply_factor0(pq.ev, vs[2 * c], s0), s0);
                acc[k] += detail::dot(vs[2 * c + 1], right);
            }
        }
        survivors.clear();
    }

    double budget = 0.0;
    for (double x : top) budget = std::max(budget, x / z);
    if (budget > opt.max_budget)
        throw NumericalError("small_bath_T: truncation budget " + std::to_string(budget) + " exceeds " +
                             std::to_string(opt.max_budget) + "; increase dims");

    ModelParams p;
    p.omega0 = sys.omega0;
    p.omega_c = std::max(sys.bath.omega_c, sys.bath.omegas.back());
    p.beta = sys.beta;
    const auto modes = bath::normal_modes(sys.bath, p, false);

    std::vector<TResult> out;
    for (std::size_t k = 0; k < queries.size(); ++k) {
        const auto& q = queries[k];
        const auto cs = correlators::from_normal_modes(modes, sys.beta, q.t);
        out.push_back({acc[k] / z, std::exp(evolution::ln_T(cs, q.a, q.b, q.u, q.v)), budget});
    }
    return out;
}

inline TResult small_bath_T(const SmallBathSystem& sys, double a, double b, double u, double v, double t,
                            const SmallBathOptions& opt = {}) {
    return small_bath_T(sys, std::vector<TQuery>{{a, b, u, v, t}}, opt).front();
}

// Lowest eigenvalue of the truncated composite H by Lanczos with full
// reorthogonalization.
inline double ground_energy(const SmallBathSystem& sys, std::size_t steps = 80) {
    sys.validate();
    const detail::SparseHamiltonian h(sys);
    const std::size_t n = h.size();
    steps = std::min(steps, n);
    std::vector<std::vector<double>> basis;
    std::vector<double> alpha, beta;
    std::vector<double> q(n, 1.0 / std::sqrt(static_cast<double>(n))), w(n);
    for (std::size_t i = 0; i < n; ++i) q[i] *= 1.0 + 0.5 * std::sin(1.0 + 0.37 * static_cast<double>(i));
    double nq = std::sqrt(std::inner_product(q.begin(), q.end(), q.begin(), 0.0));
    for (auto& x : q) x /= nq;
    for (std::size_t k = 0; k < steps; ++k) {
        basis.push_back(q);
        h.apply(q, w);
        for (const auto& b : basis) {
            const double c = std::inner_product(w.begin(), w.end(), b.begin(), 0.0);
            if (&b == &basis.back()) alpha.push_back(c);
            for (std::size_t i = 0; i < n; ++i) w[i] -= c * b[i];
        }
        for (const auto& b : basis) {  // second pass
            const double c = std::inner_product(w.begin(), w.end(), b.begin(), 0.0);
            for (std::size_t i = 0; i < n; ++i) w[i] -= c * b[i];
            if (&b == &basis.back()) alpha.back() += c;
        }
        const double nb = std::sqrt(std::inner_product(w.begin(), w.end(), w.begin(), 0.0));
        if (nb < 1e-12 || k + 1 == steps) break;
        beta.push_back(nb);
        for (std::size_t i = 0; i < n; ++i) q[i] = w[i] / nb;
    }
    const auto eig = linalg::tridiagonal_eigen(alpha, beta, linalg::VectorScope::none);
    return eig.values.front();
}

// max |<x, H y> - <H x, y>| over a few deterministic vector pairs.
inline double hamiltonian_symmetry_defect(const SmallBathSystem& sys) {
    sys.validate();
    const detail::SparseHamiltonian h(sys);
    const std::size_t n = h.size();
    double m = 0.0;
    for (int trial = 0; trial < 3; ++trial) {
        std::vector<double> x(n), y(n), hx(n), hy(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = std::sin(0.7 * double(i) + trial);
            y[i] = std::cos(1.3 * double(i) * (trial + 1));
        }
        h.apply(x, hx);
        h.apply(y, hy);
        m = std::max(m, std::abs(std::inner_product(x.begin(), x.end(), hy.begin(), 0.0) -
                                 std::inner_product(hx.begin(), hx.end(), y.begin(), 0.0)));
    }
    return m;
}

} // namespace qbath::fockcheck
